"""Command line front end.

Usage: `photonq <command> --config run.json [--out result.csv] [--seed N] [--tol X]`
with commands `pzero`, `densities`, `events`, `times`, `converge` and `sample`.
Results go to `--out` (or the configuration's `output`, or stdout), logs to stderr.

Exit codes: 0 on success, 1 for configuration errors, 2 when a cross-check fails.
"""

import argparse
import sys

from ..config import load_config
from ..utils import (
    LOGGER,
    ConsistencyError,
    ModelConfigurationError,
    NumericalError,
    RunConfigurationError,
)
from ._commands import CHECK_FAILED, COMMANDS

__all__ = ("main", "build_parser", "run")

CONFIG_ERROR = 1


def build_parser() -> argparse.ArgumentParser:  # noqa
    parser = argparse.ArgumentParser(
        prog="photonq",
        description="Photon counting statistics of a single photon scattered by a small "
        "quantum system in a bidirectional waveguide.",
    )
    parser.add_argument("command", choices=list(COMMANDS), help="The computation to run.")
    parser.add_argument(
        "--config", required=True, help="Path to the JSON run configuration."
    )
    parser.add_argument(
        "--out", default=None, help="Output file, defaults to `output` of the config or stdout."
    )
    parser.add_argument("--seed", type=int, default=None, help="Monte Carlo seed (overrides config).")
    parser.add_argument("--tol", type=float, default=None, help="Cross-check tolerance (overrides config).")
    parser.add_argument(
        "--log-level",
        default="INFO",
        choices=["TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level on stderr.",
    )
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, execute the command and return its exit code."""
    args = build_parser().parse_args(argv)
    LOGGER.set_level(args.log_level)
    try:
        config = load_config(args.config, seed=args.seed, tolerance=args.tol)
        resolved = config.resolve()
        out = args.out if args.out is not None else config.output
        LOGGER.info(f"Running `{args.command}` with {args.config}")
        code = COMMANDS[args.command](resolved, out)
    except (RunConfigurationError, ModelConfigurationError) as e:
        LOGGER.error(str(e))
        return CONFIG_ERROR
    except (ConsistencyError, NumericalError) as e:
        LOGGER.error(str(e))
        return CHECK_FAILED
    if code != 0:
        LOGGER.warning(f"`{args.command}` finished with failed cross-checks")
    return code


def main():
    """Entry point of the `photonq` console script."""
    sys.exit(run())
