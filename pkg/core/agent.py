"""
Mutation Pipeline - entry points behind the command-line verbs
"""

import logging
from pathlib import Path
from typing import Optional

from config.settings import default_operator, load_config
from core.errors import PathNotFound, StageFailed, UnreadableInput
from core.graph_builder import create_mutation_graph
from core.models import OperatorTemplate, RunSummary
from core.state import initial_state
from tools.flaw_report_tool import FLAWS_FILENAME, FlawReportTool
from tools.mutation_log_tool import app_name_from_log_path, parse_log
from tools.reference_analyzer_tool import ReferenceAnalyzerTool

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FLAWS_FOUND = 10


def _read_text(path: Path, what: str) -> str:
    if not path.is_file():
        raise PathNotFound(str(path), what)
    try:
        return path.read_text(encoding="utf-8", errors="replace")
    except OSError as e:
        raise UnreadableInput(f"Cannot read {what} {path}: {e}")


class MutationPipeline:
    """
    Runs the mutate workflow and the two analysis verbs.

    ``run_mutate`` returns a RunSummary and raises a MutSeedError when a
    stage fails; the analysis verbs return the process exit status.
    """

    def __init__(self, verbose: bool = False):
        self.verbose = verbose
        self.graph = create_mutation_graph(verbose=verbose)

    def run_mutate(self, config_path: str, executed_report: Optional[str] = None) -> RunSummary:
        if self.verbose:
            print(f"\n{'=' * 80}")
            print(f"🚀 MUTATE: {config_path}")
            print(f"{'=' * 80}")

        final_state = self.graph.invoke(initial_state(str(config_path), executed_report, self.verbose))

        if final_state.get("error_occurred"):
            raise StageFailed(final_state["error_type"], final_state["error_message"], final_state["exit_code"])

        summary = final_state["summary"]
        if self.verbose:
            print(f"\n🎯 MUTATE: {summary.plans_surviving} of {summary.plans_generated} mutants survive")
            print(f"   🪦 Compile kills: {summary.plans_killed_compile}, execution kills: {summary.plans_killed_execution}")
            print(f"   📁 {summary.mutated_root}")
            print(f"   📝 {summary.log_path}")
        return summary

    def run_analyze(self, log_path: str, report_path: str) -> int:
        """Diff a detection report against a mutation log; 10 when leaks went undetected."""
        log_file = Path(log_path)
        log = parse_log(_read_text(log_file, "mutation log"), app_name_from_log_path(log_file))
        report_text = _read_text(Path(report_path), "detection report")

        result = FlawReportTool()._run(log, report_text, str(log_file.parent / FLAWS_FILENAME))
        if not result.get("success"):
            raise StageFailed(result["error_type"], result["error"], result.get("exit_code", 1))

        print(result["report_text"], end="")
        if self.verbose:
            print(f"📄 Structured flaws: {result['flaws_path']}")
        return EXIT_FLAWS_FOUND if result["flaw_report"].undetected else EXIT_OK

    def run_reference_analyze(self, project_root: str, config_path: Optional[str] = None) -> int:
        """Print the reference analyzer's detections for a project tree."""
        result = ReferenceAnalyzerTool()._run(str(project_root), self._operator_template(config_path))
        if not result.get("success"):
            raise StageFailed(result["error_type"], result["error"], result.get("exit_code", 1))

        print(result["report_text"], end="")
        if self.verbose:
            print(f"🔎 {result['message']}")
        return EXIT_OK

    @staticmethod
    def _operator_template(config_path: Optional[str]) -> OperatorTemplate:
        if config_path:
            return load_config(config_path).operator_template
        var_decl, source, sink = default_operator()
        return OperatorTemplate(var_decl_template=var_decl, source_template=source, sink_template=sink)

