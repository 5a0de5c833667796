import argparse
import logging
import sys

import pandas as pd

from gridmarket_lib.errors import ConfigError, GridMarketError
from gridmarket_lib.harness import (PRESETS, emit_results, load_config, results_frame, run_single,
                                    run_sweep)

EXIT_OK = 0
EXIT_CONFIG_ERROR = 1
EXIT_RUNTIME_ERROR = 2

SUMMARY_COLUMNS = ["user_count", "deadline", "budget", "user_id", "completed", "budget_spent",
                   "termination_time", "resource", "resource_completed", "status"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Run economic grid scheduling experiments on a simulated grid."
    )
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Logging verbosity.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, text in (("run", "Run one scenario."), ("sweep", "Run a deadline/budget sweep.")):
        cmd = sub.add_parser(name, help=text)
        cmd.add_argument("--config", type=str, help="Path to a JSON scenario file.")
        cmd.add_argument("--preset", choices=sorted(PRESETS), help="Built-in scenario.")
        cmd.add_argument("--out", type=str, help="Results CSV path.")
        cmd.add_argument("--seed", type=int, help="Override the scenario seed.")
        cmd.add_argument("--workers", type=int, default=1, help="Parallel sweep cells.")
        cmd.add_argument("--report", type=str, help="Statistics report CSV path (run only).")
    return parser


def load_scenario(args):
    if args.config and args.preset:
        raise ConfigError("Use either --config or --preset")
    if args.config:
        config = load_config(args.config)
    elif args.preset:
        config = PRESETS[args.preset]()
    else:
        raise ConfigError("A scenario is required: --config <file> or --preset <name>")
    if args.seed is not None:
        config.seed = args.seed
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_scenario(args)
        if args.command == "run":
            rows = run_single(config.without_sweep(), report_path=args.report)
            if args.out:
                emit_results(rows, args.out)
        else:
            if config.sweep is None:
                raise ConfigError("The scenario has no sweep block", field="sweep")
            rows = run_sweep(config, out=args.out, workers=args.workers)
    except ConfigError as e:
        print(f"Config error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except (GridMarketError, OSError) as e:
        print(f"Run failed: {e}", file=sys.stderr)
        return EXIT_RUNTIME_ERROR

    summary = results_frame(rows)[SUMMARY_COLUMNS]
    with pd.option_context("display.float_format", "{:.2f}".format):
        print(summary.to_markdown(index=False, floatfmt=".2f"))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
