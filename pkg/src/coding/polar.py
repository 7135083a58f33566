"""
Polar transform, encoding and transmission permutation.

This module holds the static description of a polar code (CodeSpec) and
the operations that map message bits to channel inputs: bit-reversal,
the GF(2) butterfly implementing x = u * F^(kron n), non-systematic
placement of the information bits into u (frozen bits are 0), and the
random transmission permutation that decorrelates adjacent physical
sub-channels.

Indices are 0-based in memory; the code-spec file format and the
command line use 1-based indices.
"""

import hashlib  # For the code fingerprint
from dataclasses import dataclass, field  # For the CodeSpec record
from typing import Optional, Sequence  # For type hints

import numpy as np

from ..errors import CodeSpecError


def bit_reversal_permutation(n: int) -> np.ndarray:
    """
    Bit-reversal permutation of length N = 2^n.

    Parameters:
    -----------
    n: Number of polarization levels (n >= 1)

    Returns:
    --------
    np.ndarray: rev, where rev[i] is the integer whose n-bit binary
        representation is the reverse of that of i (0-based; add 1 for
        the 1-based indexing used in files)
    """
    if n < 1:
        raise CodeSpecError(f"level count n must be >= 1, got {n}")
    indices = np.arange(1 << n, dtype=np.int64)
    reversed_indices = np.zeros_like(indices)
    for bit in range(n):
        reversed_indices |= ((indices >> bit) & 1) << (n - 1 - bit)
    return reversed_indices


def polar_transform(v: np.ndarray) -> np.ndarray:
    """
    Compute v * F^(kron n) over GF(2) with the in-place butterfly.

    The transform acts on the last axis, so a (batch, N) array of blocks
    is transformed row by row. Each of the n stages XORs the upper half
    of every pair block with its lower half.

    Parameters:
    -----------
    v: Binary array whose last dimension N is a power of two

    Returns:
    --------
    np.ndarray: uint8 array of the same shape holding the transform
    """
    x = np.array(v, dtype=np.uint8, copy=True)
    length = x.shape[-1]
    if length < 2 or length & (length - 1):
        raise CodeSpecError(f"block length must be a power of two >= 2, got {length}")

    step = 1
    while step < length:
        # View the block as consecutive (upper, lower) halves of size `step`
        pairs = x.reshape(x.shape[:-1] + (length // (2 * step), 2, step))
        pairs[..., 0, :] ^= pairs[..., 1, :]
        step *= 2
    return x


def random_permutation(length: int, seed: int) -> np.ndarray:
    """Uniform random permutation of range(length) drawn from a dedicated seed."""
    return np.random.default_rng(seed).permutation(length)


@dataclass(eq=False)
class CodeSpec:
    """
    Static description of one polar code.

    Attributes:
    -----------
    n: Number of polarization levels; the code length is N = 2^n
    K: Number of information bits (rate R = K / N)
    info_set: Sorted 0-based indices of the K information positions of u
    tx_perm: 0-based transmission permutation pi; codeword bit j is sent
        in channel slot tx_perm[j]
    perm_seed: Seed the permutation was drawn from (shared by both ends)
    """
    n: int
    K: int
    info_set: np.ndarray
    tx_perm: np.ndarray
    perm_seed: int = 0

    # Derived members, filled in by __post_init__
    frozen_set: np.ndarray = field(init=False, repr=False)
    frozen_mask: np.ndarray = field(init=False, repr=False)
    inv_perm: np.ndarray = field(init=False, repr=False)
    bit_reversal: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.n < 1:
            raise CodeSpecError(f"level count n must be >= 1, got {self.n}")
        N = 1 << self.n
        # K = 0 (everything frozen) is accepted as a degenerate test code
        if not 0 <= self.K <= N:
            raise CodeSpecError(f"K must be between 0 and {N}, got {self.K}")

        self.info_set = np.sort(np.asarray(self.info_set, dtype=np.int64).reshape(-1))
        if self.info_set.size != self.K or np.unique(self.info_set).size != self.K:
            raise CodeSpecError(f"info set must hold {self.K} distinct indices")
        if self.K and (self.info_set[0] < 0 or self.info_set[-1] >= N):
            raise CodeSpecError(f"info set indices must lie in [0, {N})")

        self.tx_perm = np.asarray(self.tx_perm, dtype=np.int64)
        if self.tx_perm.shape != (N,) or not np.array_equal(np.sort(self.tx_perm), np.arange(N)):
            raise CodeSpecError(f"transmission permutation must be a permutation of range({N})")

        self.frozen_mask = np.ones(N, dtype=bool)
        self.frozen_mask[self.info_set] = False
        self.frozen_set = np.flatnonzero(self.frozen_mask)

        self.inv_perm = np.empty(N, dtype=np.int64)
        self.inv_perm[self.tx_perm] = np.arange(N)
        self.bit_reversal = bit_reversal_permutation(self.n)

    @property
    def N(self) -> int:
        return 1 << self.n

    @property
    def rate(self) -> float:
        return self.K / self.N

    @classmethod
    def from_reliability(
        cls,
        n: int,
        K: int,
        order: Sequence[int],
        perm_seed: int,
        tx_perm: Optional[np.ndarray] = None,
    ) -> "CodeSpec":
        """
        Build a code from a reliability ranking (best sub-channel first).

        The K best positions become the information set. When no explicit
        transmission permutation is given it is regenerated from perm_seed.
        """
        order = np.asarray(order, dtype=np.int64)
        if order.shape != (1 << n,):
            raise CodeSpecError(f"reliability order must list all {1 << n} indices")
        if tx_perm is None:
            tx_perm = random_permutation(1 << n, perm_seed)
        return cls(n=n, K=K, info_set=order[:K], tx_perm=tx_perm, perm_seed=perm_seed)

    def fingerprint(self) -> str:
        """
        Short hash identifying the code (levels, K, info set, permutation).

        Returns:
        --------
        str: MD5 hexadecimal digest
        """
        content = b"".join([
            f"{self.n}:{self.K}:".encode("utf-8"),
            self.info_set.astype("<i8").tobytes(),
            self.tx_perm.astype("<i8").tobytes(),
        ])
        return hashlib.md5(content).hexdigest()

    def extract_info(self, u: np.ndarray) -> np.ndarray:
        """Information bits of a full-length message block."""
        return as_bit_block(u, self.N)[self.info_set]


def as_bit_block(bits: np.ndarray, length: int) -> np.ndarray:
    """
    Validate a binary block and return it as a uint8 array.

    Raises:
    -------
    CodeSpecError: if the length differs or an entry is not 0/1
    """
    block = np.asarray(bits)
    if block.shape != (length,):
        raise CodeSpecError(f"expected a block of {length} bits, got shape {block.shape}")
    if block.size and not np.isin(block, (0, 1)).all():
        raise CodeSpecError("bit blocks may only contain 0 and 1")
    return block.astype(np.uint8)


def encode(spec: CodeSpec, info_bits: np.ndarray) -> np.ndarray:
    """
    Encode K information bits into the pre-permutation codeword x^N.

    Information bits are scattered into the positions of the information
    set, frozen positions stay 0, and the block is bit-reversed and
    transformed: x = u * B_N * F^(kron n).
    """
    info = as_bit_block(info_bits, spec.K)
    u = np.zeros(spec.N, dtype=np.uint8)
    u[spec.info_set] = info
    return polar_transform(u[spec.bit_reversal])


def encode_block(spec: CodeSpec, u: np.ndarray) -> np.ndarray:
    """Apply G_N = B_N * F^(kron n) to a full-length message block."""
    u = as_bit_block(u, spec.N)
    return polar_transform(u[spec.bit_reversal])


def apply_tx_permutation(spec: CodeSpec, v: np.ndarray) -> np.ndarray:
    """
    Reorder a codeword-order vector into transmission order.

    Element j of the input lands in slot tx_perm[j]; equivalently output
    slot i holds input element inv_perm[i]. Works for bits and reals.
    """
    v = np.asarray(v)
    if v.shape[-1] != spec.N:
        raise CodeSpecError(f"expected length {spec.N}, got {v.shape[-1]}")
    return v[..., spec.inv_perm]


def invert_tx_permutation(spec: CodeSpec, w: np.ndarray) -> np.ndarray:
    """Bring a transmission-order vector back to codeword order."""
    w = np.asarray(w)
    if w.shape[-1] != spec.N:
        raise CodeSpecError(f"expected length {spec.N}, got {w.shape[-1]}")
    return w[..., spec.tx_perm]
