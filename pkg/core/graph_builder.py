"""
Graph Builder - Constructs the LangGraph mutate workflow
"""

from langgraph.graph import END, StateGraph

from config.schemas import OperatorType
from core.router import ABORT, continue_or_abort, route_condition, route_targets, scheme_router_node
from core.state import MutationPipelineState
from core.tool_nodes import (
    apply_plans_node,
    build_source_model_node,
    compile_filter_node,
    discover_sources_node,
    emit_log_node,
    execution_filter_node,
    load_config_node,
    make_plan_node,
)


def _chain(workflow: StateGraph, source: str, target: str) -> None:
    """Edge that proceeds to ``target`` unless the stage failed."""
    workflow.add_conditional_edges(source, continue_or_abort, {"continue": target, ABORT: END})


def create_mutation_graph(verbose: bool = False):
    """
    Create the mutate workflow.

    load_config → discover_sources → build_source_model → router →
    plan_<scheme> → apply_plans → compile_filter → execution_filter →
    emit_log → END, ending early after any failed stage.
    """
    if verbose:
        print(f"🔧 GRAPH BUILDER: Constructing mutate workflow")

    workflow = StateGraph(MutationPipelineState)

    # ===== ADD NODES =====

    workflow.add_node("load_config", load_config_node)
    workflow.add_node("discover_sources", discover_sources_node)
    workflow.add_node("build_source_model", build_source_model_node)
    workflow.add_node("router", scheme_router_node)

    targets = route_targets()
    for scheme in OperatorType:
        workflow.add_node(targets[scheme.value], make_plan_node(scheme))

    workflow.add_node("apply_plans", apply_plans_node)
    workflow.add_node("compile_filter", compile_filter_node)
    workflow.add_node("execution_filter", execution_filter_node)
    workflow.add_node("emit_log", emit_log_node)

    # ===== DEFINE WORKFLOW EDGES =====

    workflow.set_entry_point("load_config")
    _chain(workflow, "load_config", "discover_sources")
    _chain(workflow, "discover_sources", "build_source_model")
    _chain(workflow, "build_source_model", "router")

    workflow.add_conditional_edges("router", route_condition, {**targets, ABORT: END})
    for node_name in targets.values():
        _chain(workflow, node_name, "apply_plans")

    _chain(workflow, "apply_plans", "compile_filter")
    _chain(workflow, "compile_filter", "execution_filter")
    _chain(workflow, "execution_filter", "emit_log")
    workflow.add_edge("emit_log", END)

    compiled_graph = workflow.compile()

    if verbose:
        print(f"   ✅ Graph compiled: {len(targets)} scheme planners behind the router")

    return compiled_graph
