"""
Mutation log tool: writes and reads the per-run mutation log.

Log grammar, one block per file::

    In file: <file name>
    Mutation Scheme: <SCHEME>
    mutation-<i>-<j>: <Class>.<method>

Single-index labels are written with a ``-0`` suffix and class-body
locations as ``<Class>.<class-body>``.
"""

import logging
from collections import defaultdict
from pathlib import Path, PurePosixPath
from typing import Any, Dict, List, Sequence, Union

from langchain_core.tools import BaseTool

from config.schemas import MUTATION_ID_PATTERN, OperatorType
from core.errors import IoFailure, MalformedLog
from core.models import Coordinate, LogEntry, MutationLog, MutationPlan, label_sort_key, label_suffix

logger = logging.getLogger(__name__)

LOG_SUFFIX = ".mutations.log"
FILE_HEADER = "In file: "
SCHEME_HEADER = "Mutation Scheme: "


def log_entries(plans: Sequence[MutationPlan]) -> List[LogEntry]:
    """One entry per expected label, paired with its coordinate."""
    entries = []
    for plan in plans:
        for label, coordinate in zip(plan.expected_labels, plan.coordinates):
            entries.append(LogEntry(suffix=label_suffix(label), scheme=plan.scheme, coordinate=coordinate))
    return entries


def emit_log(plans: Sequence[MutationPlan], app_name: str, scheme: OperatorType) -> str:
    """
    Render surviving plans as log text; files in path order, labels descending.

    Headers carry the bare file name, so parsed entries are keyed by it.
    """
    by_file: Dict[str, List[LogEntry]] = defaultdict(list)
    for entry in log_entries(plans):
        by_file[entry.coordinate.relative_path].append(entry)

    lines: List[str] = []
    for relative_path in sorted(by_file):
        lines.append(f"{FILE_HEADER}{PurePosixPath(relative_path).name}")
        lines.append(f"{SCHEME_HEADER}{scheme.value}")
        for entry in sorted(by_file[relative_path], key=lambda e: label_sort_key(f"leak-{e.suffix}"), reverse=True):
            lines.append(f"{entry.mutation_id}: {entry.coordinate.qualified_name}")

    logger.debug(f"Log for {app_name}: {len(lines)} lines")
    return "\n".join(lines) + "\n" if lines else ""


def app_name_from_log_path(log_path: Union[str, Path]) -> str:
    name = Path(log_path).name
    return name[:-len(LOG_SUFFIX)] if name.endswith(LOG_SUFFIX) else Path(log_path).stem


def parse_log(text: str, app_name: str = "") -> MutationLog:
    """
    Read log text back into entries. Lines outside the grammar are skipped;
    an unknown scheme header raises MalformedLog.
    """
    log = MutationLog(app_name=app_name)
    current_file = ""
    scheme = None

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if line.startswith(FILE_HEADER):
            current_file = line[len(FILE_HEADER):].strip()
            continue
        if line.startswith(SCHEME_HEADER):
            try:
                scheme = OperatorType(line[len(SCHEME_HEADER):].strip())
            except ValueError:
                raise MalformedLog(line_no, raw_line)
            log.scheme = scheme
            continue

        identifier, _, location = line.partition(": ")
        match = MUTATION_ID_PATTERN.fullmatch(identifier)
        if not match or scheme is None or not location:
            if line:
                logger.debug(f"Skipping log line {raw_line!r}")
            continue

        *class_path, method = location.split(".")
        log.entries.append(LogEntry(
            suffix=f"{match.group(1)}-{match.group(2)}",
            scheme=scheme,
            coordinate=Coordinate(relative_path=current_file, class_path=tuple(class_path), method=method),
        ))

    return log


class MutationLogTool(BaseTool):
    """Tool for writing the mutation log of a run."""

    name: str = "emit_log"
    description: str = """
    Render the surviving mutants as a mutation log and write it beside the
    mutated project.
    """

    def _run(self, plans: List[MutationPlan], app_name: str, scheme: OperatorType,
             log_path: str) -> Dict[str, Any]:
        try:
            text = emit_log(plans, app_name, scheme)
            path = Path(log_path)
            try:
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, encoding="utf-8")
            except OSError as e:
                raise IoFailure(f"Cannot write mutation log {path}: {e}")

            return {
                'success': True,
                'log_text': text,
                'log_path': path,
                'message': f"Logged {len(log_entries(plans))} labels to {path}",
            }

        except IoFailure as e:
            logger.error(f"Writing mutation log failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
