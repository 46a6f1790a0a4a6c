"""
Tool Nodes - stage execution for the mutate workflow
"""

import logging
from pathlib import Path
from typing import Any, Callable, Dict

from compiler.javac import JavaCompiler
from config.schemas import OperatorType
from config.settings import load_config
from core.errors import MutSeedError, PathNotFound
from core.models import KillReason, RunSummary
from core.state import MutationPipelineState
from tools.injection_tool import InjectionTool
from tools.mutant_filter_tool import CompileFilterTool, ExecutabilityFilterTool
from tools.mutation_log_tool import MutationLogTool
from tools.scheme_planner_tool import SchemePlannerTool
from tools.source_model_tool import SourceModelTool, discover_sources

logger = logging.getLogger(__name__)


def _fail(state: MutationPipelineState, error_type: str, message: str, exit_code: int) -> MutationPipelineState:
    state["error_occurred"] = True
    state["error_type"] = error_type
    state["error_message"] = message
    state["exit_code"] = exit_code
    if state.get("verbose", False):
        print(f"   ❌ FAILED: {message}")
    return state


def _fail_with(state: MutationPipelineState, error: MutSeedError) -> MutationPipelineState:
    logger.error(f"{type(error).__name__}: {error}")
    return _fail(state, type(error).__name__, str(error), error.exit_code)


def _fail_from_result(state: MutationPipelineState, result: Dict[str, Any]) -> MutationPipelineState:
    return _fail(state, result.get("error_type", "MutSeedError"), result.get("error", "Stage failed"),
                 result.get("exit_code", 1))


def load_config_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: read and validate the properties file."""
    if state.get("verbose", False):
        print(f"\n⚙️  TOOL NODE: Configuration")
        print(f"   📄 File: {state['config_path']}")

    try:
        configuration = load_config(state["config_path"])
        state["configuration"] = configuration
        if state.get("verbose", False):
            print(f"   ✅ App '{configuration.app_name}', scheme {configuration.operator_type.value}")
            for warning in configuration.warnings:
                print(f"   ⚠️  {warning}")
    except MutSeedError as e:
        return _fail_with(state, e)

    return state


def discover_sources_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: list the project's Java sources."""
    configuration = state["configuration"]
    if state.get("verbose", False):
        print(f"\n📂 TOOL NODE: Source Discovery")
        print(f"   📁 Root: {configuration.app_src_path}")

    try:
        state["sources"] = discover_sources(configuration.app_src_path)
        if state.get("verbose", False):
            print(f"   ✅ {len(state['sources'])} source files")
    except MutSeedError as e:
        return _fail_with(state, e)
    except OSError as e:
        return _fail(state, "IoFailure", str(e), 3)

    return state


def build_source_model_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: parse sources and extract sites, scopes and lifecycle pairs."""
    if state.get("verbose", False):
        print(f"\n🌳 TOOL NODE: Source Model")
        print(f"   🎯 Task: Parse with tree-sitter and find injection sites")

    configuration = state["configuration"]
    result = SourceModelTool()._run(
        str(configuration.app_src_path),
        configuration.lifecycle_order,
        sources=state["sources"],
    )
    if not result.get("success"):
        return _fail_from_result(state, result)

    model = result["project_model"]
    state["project_model"] = model
    if state.get("verbose", False):
        print(f"   ✅ {result['message']}")
        for failure in model.parse_failures:
            print(f"   ⚠️  Not mutated: {failure.message}")

    return state


def make_plan_node(scheme: OperatorType) -> Callable[[MutationPipelineState], MutationPipelineState]:
    """Build the planning node for one scheme."""

    def plan_node(state: MutationPipelineState) -> MutationPipelineState:
        if state.get("verbose", False):
            print(f"\n🧬 TOOL NODE: {scheme.value} Planner")

        result = SchemePlannerTool()._run(state["project_model"], state["configuration"].operator_template, scheme)
        if not result.get("success"):
            return _fail_from_result(state, result)

        state["plans"] = result["plans"]
        if state.get("verbose", False):
            print(f"   ✅ {result['message']}")
        return state

    plan_node.__name__ = f"plan_{scheme.value.lower()}_node"
    return plan_node


def apply_plans_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: write the mutated copy of the project."""
    configuration = state["configuration"]
    if state.get("verbose", False):
        print(f"\n💉 TOOL NODE: Injector")
        print(f"   📁 Destination: {configuration.mutated_root}")

    result = InjectionTool()._run(
        state["sources"], state["plans"],
        str(configuration.app_src_path), str(configuration.mutated_root),
    )
    if not result.get("success"):
        return _fail_from_result(state, result)

    state["mutated_project"] = result["mutated_project"]
    if state.get("verbose", False):
        print(f"   ✅ {result['message']}")
    return state


def compile_filter_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: remove mutants that break compilation."""
    configuration = state["configuration"]
    if state.get("verbose", False):
        print(f"\n🔨 TOOL NODE: Compile Filter")
        print(f"   🎯 Task: Compile, attribute diagnostics, kill, repeat")

    compiler = JavaCompiler(configuration.compiler_command, configuration.classpath, str(configuration.lib4ast_path))
    result = CompileFilterTool()._run(state["mutated_project"], state["plans"], compiler)
    if not result.get("success"):
        return _fail_from_result(state, result)

    outcome = result["outcome"]
    state["filter_outcome"] = outcome
    state["mutated_project"] = outcome.project
    if state.get("verbose", False):
        print(f"   ✅ {result['message']}")
        for killed in outcome.killed:
            print(f"   🪦 mutant {killed.plan.mutant_index}: {killed.evidence.splitlines()[0] if killed.evidence else ''}")
    return state


def execution_filter_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: drop mutants an execution engine never reached."""
    report_path = state.get("executed_report_path")
    if state.get("verbose", False):
        print(f"\n🏃 TOOL NODE: Executability Filter")
        print(f"   📄 Report: {report_path or 'none'}")

    report_text = None
    if report_path:
        path = Path(report_path)
        if not path.is_file():
            return _fail_with(state, PathNotFound(str(path), "executed-labels report"))
        try:
            report_text = path.read_text(encoding="utf-8", errors="replace")
        except OSError as e:
            return _fail(state, "IoFailure", f"Cannot read {path}: {e}", 3)

    result = ExecutabilityFilterTool()._run(state["filter_outcome"], report_text)
    if not result.get("success"):
        return _fail_from_result(state, result)

    state["filter_outcome"] = result["outcome"]
    state["mutated_project"] = result["outcome"].project
    if state.get("verbose", False):
        print(f"   ✅ {result['message']}")
    return state


def emit_log_node(state: MutationPipelineState) -> MutationPipelineState:
    """Tool Node: write the mutation log and summarise the run."""
    configuration = state["configuration"]
    outcome = state["filter_outcome"]

    result = MutationLogTool()._run(
        outcome.surviving, configuration.app_name, configuration.operator_type, str(configuration.log_path),
    )
    if not result.get("success"):
        return _fail_from_result(state, result)

    state["log_text"] = result["log_text"]
    print(result["log_text"], end="")

    state["summary"] = RunSummary(
        plans_generated=len(state["plans"]),
        plans_killed_compile=len(outcome.killed_by(KillReason.COMPILE_ERROR)),
        plans_killed_execution=len(outcome.killed_by(KillReason.NOT_EXECUTED)),
        plans_surviving=len(outcome.surviving),
        mutated_root=configuration.mutated_root,
        log_path=configuration.log_path,
    )
    if state.get("verbose", False):
        print(f"\n📝 TOOL NODE: Mutation Log")
        print(f"   ✅ {result['message']}")
    return state
