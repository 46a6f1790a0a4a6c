"""
Scheme Router - picks the planning node for the configured mutation scheme
"""

import logging
from typing import Literal

from config.schemas import SCHEME_DESCRIPTIONS, OperatorType
from core.state import MutationPipelineState

logger = logging.getLogger(__name__)

ABORT = "abort"


def scheme_router_node(state: MutationPipelineState) -> MutationPipelineState:
    """Record the scheme the configuration selects."""
    scheme = state["configuration"].operator_type
    state["scheme"] = scheme.value

    if state.get("verbose", False):
        description = SCHEME_DESCRIPTIONS[scheme]
        print(f"\n🧭 ROUTER: {description['title']} scheme")
        print(f"   📍 Placement: {description['placement']}")
        print(f"   🏷️  Labels: {description['labels']}")

    logger.debug(f"Routing to {scheme.value} planner")
    return state


def route_condition(state: MutationPipelineState) -> str:
    """Conditional edge out of the router: the scheme name, or abort."""
    if state.get("error_occurred"):
        return ABORT
    return state["scheme"]


def continue_or_abort(state: MutationPipelineState) -> Literal["continue", "abort"]:
    """Conditional edge after every stage: stop the graph once a stage failed."""
    return ABORT if state.get("error_occurred") else "continue"


def route_targets() -> dict:
    return {scheme.value: f"plan_{scheme.value.lower()}" for scheme in OperatorType}
