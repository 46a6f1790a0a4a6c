"""
Injection tool: writes the mutated copy of a project and keeps the span
ledger that lets every inserted fragment be removed again.
"""

import logging
import shutil
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Tuple

from langchain_core.tools import BaseTool

from core.errors import InjectionError, IoFailure
from core.models import LedgerRange, MutatedProject, MutationPlan, SourceFile

logger = logging.getLogger(__name__)


def line_of(content: bytes, offset: int) -> int:
    """1-based line number of the byte at ``offset``."""
    return content.count(b"\n", 0, offset) + 1


def inserted_lines(content: bytes, entry: LedgerRange) -> Tuple[int, int]:
    """First and last line of an inserted block, not counting its framing newlines."""
    return line_of(content, entry.start + 1), line_of(content, max(entry.end - 1, entry.start + 1))


def _prepare_output(source_root: Path, mutated_root: Path) -> None:
    source_root = source_root.resolve()
    target = mutated_root.resolve()
    if target == source_root or source_root in target.parents:
        raise IoFailure(f"Mutated project {target} may not live inside the source tree {source_root}")
    if target in source_root.parents:
        raise IoFailure(f"Mutated project {target} would replace the source tree {source_root}")
    try:
        if target.exists():
            shutil.rmtree(target)
        shutil.copytree(source_root, target, ignore=shutil.ignore_patterns(".git"))
    except OSError as e:
        raise IoFailure(f"Cannot copy {source_root} to {target}: {e}")


def _write(root: Path, relative_path: str, content: bytes) -> None:
    try:
        (root / relative_path).write_bytes(content)
    except OSError as e:
        raise IoFailure(f"Cannot write {root / relative_path}: {e}")


def apply_plans(sources: Sequence[SourceFile], plans: Sequence[MutationPlan],
                source_root: Path, mutated_root: Path) -> MutatedProject:
    """
    Copy the project to ``mutated_root`` and insert every plan's edits.

    Edits sharing an offset are ordered by mutant index, the lowest
    landing right after the opening brace.
    """
    known = {source.file_id: source for source in sources}
    by_file: Dict[int, List[Tuple[int, int, int, str]]] = defaultdict(list)
    for plan in plans:
        for position, edit in enumerate(plan.edits):
            if edit.file_id not in known:
                raise IoFailure(f"Mutant {plan.mutant_index} targets unknown file id {edit.file_id}")
            by_file[edit.file_id].append((edit.offset, plan.mutant_index, position, edit.inserted_text))

    _prepare_output(Path(source_root), Path(mutated_root))
    project = MutatedProject(root_path=Path(mutated_root))

    for source in sources:
        content = source.content
        pieces: List[bytes] = []
        ledger: List[LedgerRange] = []
        cursor = 0
        length = 0
        for offset, mutant_index, _, text in sorted(by_file.get(source.file_id, [])):
            pieces.append(content[cursor:offset])
            length += offset - cursor
            cursor = offset
            data = text.encode("utf-8")
            ledger.append(LedgerRange(mutant_index=mutant_index, start=length, end=length + len(data)))
            pieces.append(data)
            length += len(data)
        pieces.append(content[cursor:])

        mutated = b"".join(pieces)
        project.files[source.relative_path] = mutated
        project.file_ids[source.file_id] = source.relative_path
        if ledger:
            project.ledger[source.relative_path] = ledger
            _write(project.root_path, source.relative_path, mutated)

    logger.info(f"Applied {len(plans)} plans to {len(project.ledger)} of {len(sources)} files in {mutated_root}")
    return project


def remove_mutants(project: MutatedProject, mutant_indices: Iterable[int]) -> MutatedProject:
    """Strip the inserted ranges of ``mutant_indices``, shifting the ranges that stay."""
    doomed = set(mutant_indices)
    files = dict(project.files)
    ledger: Dict[str, List[LedgerRange]] = {}

    for relative_path, ranges in project.ledger.items():
        if not any(entry.mutant_index in doomed for entry in ranges):
            ledger[relative_path] = list(ranges)
            continue

        content = project.files[relative_path]
        pieces: List[bytes] = []
        kept: List[LedgerRange] = []
        cursor = 0
        removed = 0
        for entry in sorted(ranges, key=lambda entry: entry.start):
            if entry.mutant_index in doomed:
                pieces.append(content[cursor:entry.start])
                cursor = entry.end
                removed += entry.end - entry.start
            else:
                kept.append(LedgerRange(
                    mutant_index=entry.mutant_index,
                    start=entry.start - removed,
                    end=entry.end - removed,
                ))
        pieces.append(content[cursor:])

        files[relative_path] = b"".join(pieces)
        _write(project.root_path, relative_path, files[relative_path])
        if kept:
            ledger[relative_path] = kept

    logger.debug(f"Removed mutants {sorted(doomed)}")
    return MutatedProject(root_path=project.root_path, files=files, file_ids=dict(project.file_ids), ledger=ledger)


class InjectionTool(BaseTool):
    """Tool for writing the mutated project."""

    name: str = "apply_plans"
    description: str = """
    Copy the project under the output directory and insert the planned
    security operators, recording each inserted span.
    """

    def _run(self, sources: List[SourceFile], plans: List[MutationPlan],
             source_root: str, mutated_root: str) -> Dict[str, Any]:
        """Apply all plans."""
        try:
            project = apply_plans(sources, plans, Path(source_root), Path(mutated_root))
            return {
                'success': True,
                'mutated_project': project,
                'message': f"Seeded {len(project.mutants_present())} mutants into {mutated_root}",
            }

        except InjectionError as e:
            logger.error(f"Injection failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
