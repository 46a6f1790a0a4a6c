"""
mutseed - Main Entry Point

    python main.py mutate <config> [--executed-report <path>]
    python main.py analyze <log> <report>
    python main.py reference-analyze <project-root> [--config <config>]
"""

import argparse
import logging
import sys
from typing import List, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1 like every other input error."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="mutseed", description="Seed security-operator mutants and diff analyzer reports.")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="narrate every pipeline stage")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="only warnings and errors in the log")

    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_ArgumentParser)

    mutate = verbs.add_parser("mutate", help="mutate a project described by a configuration file")
    mutate.add_argument("config", help="properties file (lib4ast, appSrc, appName, output, operatorType)")
    mutate.add_argument("--executed-report", dest="executed_report", help="labels observed by an execution engine")

    analyze = verbs.add_parser("analyze", help="diff an analyzer report against a mutation log")
    analyze.add_argument("log", help="mutation log written by mutate")
    analyze.add_argument("report", help="analyzer output mentioning the leak labels it found")

    reference = verbs.add_parser("reference-analyze", help="run the bundled intraprocedural leak detector")
    reference.add_argument("project_root", help="mutated project tree")
    reference.add_argument("--config", help="configuration whose operator templates to look for")

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Run one verb and return its exit status."""
    load_dotenv()
    args = build_parser().parse_args(argv)

    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")

    from core.agent import MutationPipeline
    from core.errors import MutSeedError

    pipeline = MutationPipeline(verbose=args.verbose)
    try:
        if args.verb == "mutate":
            pipeline.run_mutate(args.config, args.executed_report)
            return 0
        if args.verb == "analyze":
            return pipeline.run_analyze(args.log, args.report)
        return pipeline.run_reference_analyze(args.project_root, args.config)
    except MutSeedError as e:
        logger.error(str(e))
        print(f"❌ {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
