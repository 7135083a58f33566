"""
Command-line interface.

    python -m src construct --n 10 --rate 0.5 --sigma-bar2 0.6 --out code.txt
    python -m src simulate --spec code.txt --sigma-bar2 0.55,0.6,0.65 --out results.csv
    python -m src capacity --lambda 64 --sigma-bar2 0.5,0.6

All randomness flows from --seed. Results go to standard output, logs
and progress bars to standard error.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import pandas as pd

from .channel.capacity import capacities, eb_n0_db
from .channel.piecewise import ChannelParams
from .coding.construction import construct_code_monte_carlo, read_code_spec, write_code_spec
from .errors import PolarSimError, SimConfigError
from .settings import Settings, load_settings
from .simulation.config import SimConfig, parse_decoders, parse_floats
from .simulation.report import FLOAT_FORMAT, emit_report
from .simulation.sweep import run_sweep

logger = logging.getLogger(__name__)

# Exit status for configuration and runtime errors raised by the package
EXIT_FAILURE = 2


def _build_parser(settings: Settings) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polar-sim",
        description="Polar codes with SCAN decoding over piecewise-stationary AWGN channels",
    )
    parser.add_argument("--log-level", default=settings.log_level,
                        help="logging level (default from POLAR_SIM_LOG_LEVEL or INFO)")
    parser.add_argument("--quiet", action="store_true", help="disable progress bars")
    commands = parser.add_subparsers(dest="command", required=True)

    construct = commands.add_parser("construct", help="Monte Carlo code construction")
    construct.add_argument("--n", type=int, required=True, help="polarization levels (N = 2^n)")
    construct.add_argument("--rate", type=float, required=True, help="code rate K/N")
    construct.add_argument("--sigma-bar2", type=float, required=True, help="design noise variance")
    construct.add_argument("--trials", type=int, default=settings.construction_trials,
                           help="construction trials (default %(default)s)")
    construct.add_argument("--seed", type=int, default=0, help="construction seed")
    construct.add_argument("--perm-seed", type=int, default=None,
                           help="transmission permutation seed (default: --seed)")
    construct.add_argument("--out", type=Path, required=True, help="code-spec file to write")

    simulate = commands.add_parser("simulate", help="BER/FER/FPR sweep")
    simulate.add_argument("--spec", type=Path, required=True, help="code-spec file")
    simulate.add_argument("--lambda", dest="lam", type=float, default=64.0,
                          help="mean piece length (default %(default)s)")
    simulate.add_argument("--sigma-bar2", required=True, help="comma-separated mean noise variances")
    simulate.add_argument("--multipliers", default="0,1,2",
                          help="state variances as multiples of sigma_bar2 (default %(default)s)")
    simulate.add_argument("--probabilities", default=None,
                          help="state probabilities (default uniform)")
    simulate.add_argument("--decoders", default="sc,scan,swscan,w2scan",
                          help="comma-separated: sc, scan, swscan, w2scan, w2scan-<alpha>, genie")
    simulate.add_argument("--alpha", type=float, default=1.0,
                          help="window multiplier for plain w2scan (default %(default)s)")
    simulate.add_argument("--trials", type=int, required=True, help="trials per noise point")
    simulate.add_argument("--max-iters", type=int, default=None, help="SCAN iterations (default n+1)")
    simulate.add_argument("--seed", type=int, default=0, help="master seed")
    simulate.add_argument("--workers", type=int, default=settings.workers,
                          help="worker processes (default %(default)s)")
    simulate.add_argument("--out", type=Path, default=None, help="CSV file to write")

    capacity = commands.add_parser("capacity", help="genie and equivalent-stationary capacities")
    capacity.add_argument("--lambda", dest="lam", type=float, default=64.0,
                          help="mean piece length (default %(default)s)")
    capacity.add_argument("--sigma-bar2", required=True, help="comma-separated mean noise variances")
    capacity.add_argument("--multipliers", default="0,1,2",
                          help="state variances as multiples of sigma_bar2 (default %(default)s)")
    capacity.add_argument("--probabilities", default=None, help="state probabilities (default uniform)")
    return parser


def _progress_enabled(args: argparse.Namespace) -> bool:
    return not args.quiet and sys.stderr.isatty()


def _construct(args: argparse.Namespace) -> None:
    N = 1 << args.n
    if not 0.0 < args.rate <= 1.0:
        raise SimConfigError(f"rate must lie in (0, 1], got {args.rate}")
    K = int(round(args.rate * N))
    if K < 1:
        raise SimConfigError(f"rate {args.rate} leaves no information bits at N={N}")

    spec, reliability = construct_code_monte_carlo(
        n=args.n,
        K=K,
        sigma_bar2=args.sigma_bar2,
        trials=args.trials,
        seed=args.seed,
        perm_seed=args.perm_seed,
        progress=_progress_enabled(args),
    )
    write_code_spec(args.out, spec, reliability.order)
    print(f"{args.out}: N={spec.N} K={spec.K} fingerprint={spec.fingerprint()}")


def _state_probabilities(text: Optional[str]):
    return None if text is None else parse_floats(text, "--probabilities")


def _simulate(args: argparse.Namespace) -> None:
    spec, _ = read_code_spec(args.spec)
    logger.info("loaded %s: N=%d K=%d fingerprint %s", args.spec, spec.N, spec.K, spec.fingerprint())

    config = SimConfig(
        spec=spec,
        lam=args.lam,
        sigma_bar2s=parse_floats(args.sigma_bar2, "--sigma-bar2"),
        decoders=parse_decoders(args.decoders, args.alpha),
        trials=args.trials,
        multipliers=parse_floats(args.multipliers, "--multipliers"),
        probabilities=_state_probabilities(args.probabilities),
        max_iters=args.max_iters,
        seed=args.seed,
        workers=args.workers,
        progress=_progress_enabled(args),
        output=args.out,
    )
    emit_report(run_sweep(config), config.output)


def _capacity(args: argparse.Namespace) -> None:
    multipliers = parse_floats(args.multipliers, "--multipliers")
    probabilities = _state_probabilities(args.probabilities)
    rows = []
    for sigma_bar2 in parse_floats(args.sigma_bar2, "--sigma-bar2"):
        params = ChannelParams.from_multipliers(args.lam, sigma_bar2, multipliers, probabilities)
        bounds = capacities(params)
        rows.append({
            "sigma_bar2": sigma_bar2,
            "eb_n0_db": eb_n0_db(sigma_bar2),
            "c_hat": bounds.genie,
            "c_bar": bounds.stationary,
        })
    print(pd.DataFrame(rows).to_csv(index=False, float_format=FLOAT_FORMAT), end="")


_COMMANDS = {
    "construct": _construct,
    "simulate": _simulate,
    "capacity": _capacity,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Entry point.

    Returns:
    --------
    int: 0 on success, 2 when the package reported an error
    """
    try:
        settings = load_settings()
    except PolarSimError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILURE

    args = _build_parser(settings).parse_args(argv)
    logging.basicConfig(
        level=getattr(logging, str(args.log_level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        _COMMANDS[args.command](args)
    except PolarSimError as e:
        logger.error("%s", e)
        return EXIT_FAILURE
    return 0
