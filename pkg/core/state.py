"""
LangGraph State Definition - Central state for the mutate pipeline
"""

from typing import List, Optional, TypedDict

from config.settings import Configuration
from core.models import FilterOutcome, MutatedProject, MutationPlan, ProjectModel, RunSummary, SourceFile


class MutationPipelineState(TypedDict):
    """
    State passed between all nodes of the mutate workflow.

    Each stage reads what earlier stages produced and records its own
    result; a failed stage sets the error fields and the graph ends.
    """

    # Inputs
    config_path: str
    executed_report_path: Optional[str]

    # Stage results
    configuration: Optional[Configuration]
    sources: List[SourceFile]
    project_model: Optional[ProjectModel]
    scheme: str
    plans: List[MutationPlan]
    mutated_project: Optional[MutatedProject]
    filter_outcome: Optional[FilterOutcome]
    log_text: str
    summary: Optional[RunSummary]

    # Workflow control
    verbose: bool

    # Error handling
    error_occurred: bool
    error_message: str
    error_type: str
    exit_code: int


def initial_state(config_path: str, executed_report_path: Optional[str] = None,
                  verbose: bool = False) -> MutationPipelineState:
    return MutationPipelineState(
        config_path=config_path,
        executed_report_path=executed_report_path,
        configuration=None,
        sources=[],
        project_model=None,
        scheme="",
        plans=[],
        mutated_project=None,
        filter_outcome=None,
        log_text="",
        summary=None,
        verbose=verbose,
        error_occurred=False,
        error_message="",
        error_type="",
        exit_code=0,
    )
