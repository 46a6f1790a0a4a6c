"""
Mutant filter tools: the compile-diagnostics fixpoint and the optional
executability filter driven by an execution engine's observed labels.
"""

import logging
import re
from collections import defaultdict
from typing import Any, Dict, List, Optional, Sequence, Set

from langchain_core.tools import BaseTool

from compiler.javac import Diagnostic, JavaCompiler
from config.schemas import LEAK_LABEL_PATTERN
from core.errors import BaselineBroken, InjectionError, MalformedReport
from core.models import (
    FilterOutcome,
    KilledMutant,
    KillReason,
    MutatedProject,
    MutationPlan,
    label_suffix,
)
from tools.injection_tool import inserted_lines, remove_mutants

logger = logging.getLogger(__name__)


def _mentions(text: str, name: str) -> bool:
    return re.search(rf"(?<![\w$]){re.escape(name)}(?![\w$])", text) is not None


def attribute_diagnostic(project: MutatedProject, diagnostic: Diagnostic,
                         declared_names: Dict[int, Sequence[str]]) -> Set[int]:
    """
    Mutants responsible for one diagnostic.

    A diagnostic inside an inserted block belongs to that block's mutant.
    Otherwise it belongs to any mutant present in the file whose declared
    identifiers the message names.
    """
    relative_path = diagnostic.relative_path
    if relative_path is None or relative_path not in project.files:
        return set()

    content = project.files[relative_path]
    ranges = project.ledger.get(relative_path, [])
    owners = set()
    for entry in ranges:
        first, last = inserted_lines(content, entry)
        if first <= diagnostic.line <= last:
            owners.add(entry.mutant_index)
    if owners:
        return owners

    message = " ".join([diagnostic.message] + [line for line in diagnostic.details if "symbol" in line])
    present = {entry.mutant_index for entry in ranges}
    return {
        index for index in present
        if any(_mentions(message, name) for name in declared_names.get(index, ()))
    }


def nearest_mutant_above(project: MutatedProject, diagnostic: Diagnostic) -> Optional[int]:
    """
    Mutant whose inserted block ends closest above the diagnostic's line.

    javac reports some errors caused by an insertion at the original code
    that follows it, e.g. "call to super must be first statement".
    """
    relative_path = diagnostic.relative_path
    if relative_path is None or relative_path not in project.files:
        return None

    content = project.files[relative_path]
    best: Optional[int] = None
    best_last = 0
    for entry in project.ledger.get(relative_path, []):
        _, last = inserted_lines(content, entry)
        if best_last < last < diagnostic.line:
            best, best_last = entry.mutant_index, last
    return best


def compile_filter(project: MutatedProject, plans: Sequence[MutationPlan],
                   compiler: JavaCompiler) -> FilterOutcome:
    """
    Compile, kill every mutant a diagnostic points at, and repeat until the
    tree compiles.

    A round where no diagnostic is attributed falls back to the nearest
    inserted block above each diagnostic. Diagnostics with no mutant above
    them in their file mean the unmutated project is broken.
    """
    alive: Dict[int, MutationPlan] = {plan.mutant_index: plan for plan in plans}
    declared = {plan.mutant_index: plan.declared_names for plan in plans}
    killed: List[KilledMutant] = []
    invocations = 0

    while True:
        result = compiler.compile(project.root_path, sorted(project.files))
        invocations += 1
        if result.succeeded:
            break

        evidence: Dict[int, List[str]] = defaultdict(list)
        unattributed: List[Diagnostic] = []
        for diagnostic in result.diagnostics:
            owners = attribute_diagnostic(project, diagnostic, declared).intersection(alive)
            if not owners:
                unattributed.append(diagnostic)
            for index in owners:
                evidence[index].append(diagnostic.text)

        if not evidence:
            for diagnostic in unattributed:
                index = nearest_mutant_above(project, diagnostic)
                if index is not None and index in alive:
                    evidence[index].append(diagnostic.text)

        if not evidence:
            details = "\n".join(d.text for d in unattributed) or result.output
            raise BaselineBroken(details)

        for index in sorted(evidence):
            killed.append(KilledMutant(
                plan=alive.pop(index),
                reason=KillReason.COMPILE_ERROR,
                evidence="\n".join(evidence[index]),
            ))
        logger.info(f"Compile round {invocations}: killed mutants {sorted(evidence)}")
        project = remove_mutants(project, evidence.keys())

    surviving = [plan for plan in plans if plan.mutant_index in alive]
    return FilterOutcome(surviving=surviving, killed=killed, compiler_invocations=invocations, project=project)


def parse_executed_labels(report_text: str) -> Set[str]:
    """Normalized suffixes of the labels in a one-label-per-line report."""
    executed = set()
    for line_no, raw_line in enumerate(report_text.splitlines(), start=1):
        line = raw_line.strip()
        if not line:
            continue
        if not LEAK_LABEL_PATTERN.fullmatch(line):
            raise MalformedReport(line_no, raw_line)
        executed.add(label_suffix(line))
    return executed


def executability_filter(outcome: FilterOutcome, report_text: Optional[str]) -> FilterOutcome:
    """Kill surviving mutants none of whose labels were observed at runtime."""
    if report_text is None:
        return outcome

    executed = parse_executed_labels(report_text)
    not_executed = [
        plan for plan in outcome.surviving
        if not any(label_suffix(label) in executed for label in plan.expected_labels)
    ]
    if not not_executed:
        return outcome

    doomed = {plan.mutant_index for plan in not_executed}
    project = outcome.project
    if project is not None:
        project = remove_mutants(project, doomed)

    logger.info(f"Executability filter killed mutants {sorted(doomed)}")
    return FilterOutcome(
        surviving=[plan for plan in outcome.surviving if plan.mutant_index not in doomed],
        killed=list(outcome.killed) + [KilledMutant(plan=plan, reason=KillReason.NOT_EXECUTED) for plan in not_executed],
        compiler_invocations=outcome.compiler_invocations,
        project=project,
    )


class CompileFilterTool(BaseTool):
    """Tool for removing mutants that break compilation."""

    name: str = "compile_filter"
    description: str = """
    Compile the mutated project and remove mutants implicated by compiler
    diagnostics until the project compiles.
    """

    def _run(self, project: MutatedProject, plans: List[MutationPlan],
             compiler: JavaCompiler) -> Dict[str, Any]:
        try:
            outcome = compile_filter(project, plans, compiler)
            return {
                'success': True,
                'outcome': outcome,
                'message': (
                    f"{len(outcome.surviving)} mutants compile, {len(outcome.killed)} killed "
                    f"after {outcome.compiler_invocations} compiler runs"
                ),
            }

        except InjectionError as e:
            logger.error(f"Compile filter failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }


class ExecutabilityFilterTool(BaseTool):
    """Tool for removing mutants an execution engine never reached."""

    name: str = "executability_filter"
    description: str = """
    Remove surviving mutants whose leak labels are absent from an executed-labels
    report. Without a report the outcome is returned unchanged.
    """

    def _run(self, outcome: FilterOutcome, report_text: Optional[str] = None) -> Dict[str, Any]:
        try:
            filtered = executability_filter(outcome, report_text)
            dropped = len(filtered.killed) - len(outcome.killed)
            return {
                'success': True,
                'outcome': filtered,
                'message': f"{dropped} mutants not executed" if report_text is not None else "No executed-labels report",
            }

        except InjectionError as e:
            logger.error(f"Executability filter failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
