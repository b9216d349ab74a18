"""Command-line front end.

    zbsim run <config.ini> [--out DIR] [--check-oracle] [--threads N]
                           [--dump-decomposition]
    zbsim run --scenario fig2a [...]
    zbsim run --list-scenarios

Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
failure, 4 reference mismatch beyond tolerance.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONVERGENCE = 3
EXIT_ORACLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zbsim",
        description="Trembling-motion simulator for a relativistic wave packet "
        "in a uniform magnetic field.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    runp = sub.add_parser("run", help="execute one configured run")
    runp.add_argument("config", nargs="?", help="INI configuration file")
    runp.add_argument("--scenario", help="run a shipped preset (fig1, fig2a, fig2b, fig2c)")
    runp.add_argument("--out", default="zbsim-out", help="output directory")
    runp.add_argument("--check-oracle", action="store_true",
                      help="also run the matrix-reference evolution and compare")
    runp.add_argument("--threads", type=int, default=None,
                      help="BLAS thread budget (exported before numerics load)")
    runp.add_argument("--dump-decomposition", action="store_true",
                      help="write F_n(kx) and U_mn tables as CSV")
    runp.add_argument("--list-scenarios", action="store_true",
                      help="list shipped presets and exit")
    return parser


def _config_thread_hint(path: str | None) -> int | None:
    """Read [numerics] threads from a config file without loading numerics."""
    if not path or not os.path.exists(path):
        return None
    import configparser

    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        cp.read_string(open(path).read())
        return cp.getint("numerics", "threads")
    except Exception:
        return None


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    threads = args.threads if args.threads is not None else _config_thread_hint(args.config)
    if threads is not None and threads > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(threads))

    # heavy imports after the thread environment is pinned
    from .errors import ConfigError, ConvergenceError, OracleMismatchError, QuadratureError
    from .runner import PRESET_NAMES, load_config_file, load_preset, run

    if args.list_scenarios:
        for name in PRESET_NAMES:
            print(name)
        return EXIT_OK

    try:
        if args.scenario:
            if args.config:
                raise ConfigError("give either a config file or --scenario, not both")
            config = load_preset(args.scenario)
        elif args.config:
            config = load_config_file(args.config)
        else:
            raise ConfigError("a config file or --scenario is required")
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = run(
            config,
            args.out,
            check_oracle=args.check_oracle,
            dump_decomposition=args.dump_decomposition,
        )
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureError, ConvergenceError) as exc:
        print(f"numerical convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except OracleMismatchError as exc:
        print(f"reference mismatch: {exc}", file=sys.stderr)
        return EXIT_ORACLE

    print(f"run complete: kappa = {result.kappa:.6g}, n_max = {result.n_max}, "
          f"tail = {result.tail_mass:.2e}, significant peaks = {result.richness}")
    if result.oracle_deviation is not None:
        print(f"reference deviation: {result.oracle_deviation:.3e} L")
    print(f"report: {result.report_path}")
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
