"""
Core module for the mutseed pipeline

This module contains the pipeline architecture:
- Models: domain types passed between stages
- Errors: exception hierarchy and exit codes
- State: LangGraph state for the mutate workflow
- Router: scheme routing and abort decisions
- Tool Nodes: stage execution wrappers
- Graph Builder: LangGraph construction
- Agent: orchestration entry points used by the CLI

Import the agent from ``core.agent`` directly; it pulls in every tool.
"""

from .errors import MutSeedError
from .models import MutationPlan, RunSummary

__all__ = [
    'MutSeedError',
    'MutationPlan',
    'RunSummary',
]
