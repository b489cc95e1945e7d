import argparse
import logging
import sys

from cli.commands import cmd_fit, cmd_run, cmd_summarize
from config.logging_setup import configure_logging
from config.version import version

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psvm-abc",
        description="ABC with summary statistics learned by principal support vector machines",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {version}")
    parser.add_argument("--config", help="run configuration file ([experiment], [psvm], ... sections)")
    parser.add_argument("--seed", type=int, help="override [experiment] seed")
    parser.add_argument("--threads", type=int, help="worker threads (default PSVM_ABC_THREADS)")
    parser.add_argument("--log-level", help="override PSVM_ABC_LOG_LEVEL")

    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run the experiment named in the config")
    run.add_argument("--output-dir", help="override [experiment] output_dir")

    fit = commands.add_parser("fit", help="fit a summary map from a theta,x_1..x_n table")
    fit.add_argument("--data", required=True, help="CSV with header theta,x_1..x_n")
    fit.add_argument("--map", required=True, help="where to write the PSVMMAP1 container")
    fit.add_argument("--summaries", help="optional CSV for the training summary matrix")

    summarize = commands.add_parser("summarize", help="evaluate a fitted map on x_1..x_n rows")
    summarize.add_argument("--data", required=True, help="CSV with header x_1..x_n")
    summarize.add_argument("--map", required=True, help="PSVMMAP1 container written by fit")
    summarize.add_argument("--output", help="output CSV (default stdout)")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level)
    logger.info(f"psvm-abc {version}: {args.command}")

    if args.command == "run":
        if not args.config:
            print("error: run needs --config", file=sys.stderr)
            return 2
        return cmd_run(args.config, seed=args.seed, threads=args.threads, output_dir=args.output_dir)
    if args.command == "fit":
        return cmd_fit(args.data, args.map, config_path=args.config, summaries_path=args.summaries, threads=args.threads)
    return cmd_summarize(args.data, args.map, output_path=args.output)


if __name__ == "__main__":
    sys.exit(main())
