"""Command-line interface.

    lsim <scenario> [--config FILE] [--set key=value ...] [--out DIR] [--svg]

Exit codes: 0 success, 2 configuration error, 3 numerical/regime error.
The environment variable LSIM_THREADS caps worker parallelism for
ensemble and sweep evaluations (0 or unset uses all cores).
"""

from __future__ import annotations

import argparse
import sys

from .config import SCENARIO_NAMES, document_defaults, load_config
from .errors import ConfigError, LsimError
from .scenarios import run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lsim",
        description="three-level lambda-system simulator: EIT slow light, "
                    "spin-ensemble dephasing and coherence read-out",
        epilog="configuration keys:\n" + document_defaults(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("scenario", help=f"one of: {', '.join(SCENARIO_NAMES)}")
    parser.add_argument("--config", metavar="FILE",
                        help="key = value config file (# comments allowed)")
    parser.add_argument("--set", metavar="KEY=VALUE", action="append", default=[],
                        dest="overrides", help="override a single key (repeatable)")
    parser.add_argument("--out", metavar="DIR", default=None,
                        help="output directory (default: lsim-out/<scenario>)")
    parser.add_argument("--svg", action="store_true", help="also render SVG plots")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.scenario, args.config, args.overrides)
        out_dir = args.out or f"lsim-out/{args.scenario}"
        files = run_scenario(cfg, out_dir, svg=args.svg)
    except (ConfigError, ValueError) as exc:
        # ValueError: a domain type rejected a configured value
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except LsimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    for path in files:
        print(path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
