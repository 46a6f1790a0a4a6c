"""
Flaw report tool: compares an analyzer's detection report against the
mutation log and lists the seeded leaks it missed.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import pandas as pd
from langchain_core.tools import BaseTool

from core.errors import IoFailure
from core.models import (
    DetectionReport,
    FlawReport,
    MutationLog,
    SchemeTotals,
    extract_labels,
    label_sort_key,
    label_suffix,
)

logger = logging.getLogger(__name__)

FLAWS_FILENAME = "flaws.json"
FLAW_COLUMNS = ["mutation_id", "scheme", "file", "class", "method"]


def parse_detection_report(text: str) -> DetectionReport:
    """Every leak label appearing anywhere in an analyzer's output."""
    return DetectionReport(detected_labels=set(extract_labels(text)))


def _entry_frame(log: MutationLog, detected: set) -> pd.DataFrame:
    records = [
        {
            "mutation_id": entry.mutation_id,
            "suffix": entry.suffix,
            "scheme": entry.scheme.value,
            "file": entry.coordinate.relative_path,
            "class": ".".join(entry.coordinate.class_path),
            "method": entry.coordinate.method,
            "detected": entry.suffix in detected,
        }
        for entry in log.entries
    ]
    return pd.DataFrame.from_records(records, columns=FLAW_COLUMNS + ["suffix", "detected"])


def diff_undetected(log: MutationLog, report: DetectionReport) -> FlawReport:
    """Partition the log's labels into detected and undetected; spurious labels are listed apart."""
    detected = {label_suffix(label) for label in report.detected_labels}
    seeded = {entry.suffix for entry in log.entries}

    frame = _entry_frame(log, detected)
    totals = []
    if not frame.empty:
        grouped = frame.groupby("scheme", sort=True)["detected"].agg(["count", "sum"])
        for scheme, row in grouped.iterrows():
            seeded_count, detected_count = int(row["count"]), int(row["sum"])
            totals.append(SchemeTotals(
                scheme=scheme,
                seeded=seeded_count,
                detected=detected_count,
                undetected=seeded_count - detected_count,
                detection_rate=detected_count / seeded_count,
            ))

    undetected = [entry for entry in log.entries if entry.suffix not in detected]
    spurious = sorted(
        (label for label in report.detected_labels if label_suffix(label) not in seeded),
        key=label_sort_key,
    )
    logger.info(f"{len(undetected)} of {len(log.entries)} seeded leaks undetected, {len(spurious)} spurious")
    return FlawReport(totals=totals, undetected=undetected, spurious=spurious)


def flaw_frame(report: FlawReport) -> pd.DataFrame:
    """One row per undetected mutant."""
    records = [
        {
            "mutation_id": entry.mutation_id,
            "scheme": entry.scheme.value,
            "file": entry.coordinate.relative_path,
            "class": ".".join(entry.coordinate.class_path),
            "method": entry.coordinate.method,
        }
        for entry in report.undetected
    ]
    return pd.DataFrame.from_records(records, columns=FLAW_COLUMNS)


def render_flaw_report(report: FlawReport) -> str:
    lines = []
    for totals in report.totals:
        lines.append(
            f"Mutation Scheme: {totals.scheme.value}: {totals.seeded} seeded, {totals.detected} detected, "
            f"{totals.undetected} undetected (detection rate {totals.detection_rate:.2f})"
        )
    lines.append(f"{len(report.undetected)} undetected")

    frame = flaw_frame(report)
    if not frame.empty:
        for (scheme, file, class_name), group in frame.groupby(["scheme", "file", "class"], sort=True):
            lines.append(f"[{scheme}] {file} :: {class_name}")
            for row in group.itertuples(index=False):
                lines.append(f"  {row.mutation_id}: {class_name}.{row.method}")

    if report.spurious:
        lines.append(f"Labels reported but never seeded: {', '.join(report.spurious)}")
    return "\n".join(lines) + "\n"


def write_flaws(report: FlawReport, path: Path) -> Path:
    """Structured flaw file, one JSON record per undetected mutant."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        flaw_frame(report).to_json(path, orient="records", indent=2)
    except OSError as e:
        raise IoFailure(f"Cannot write flaw report {path}: {e}")
    return path


class FlawReportTool(BaseTool):
    """Tool for diffing a detection report against a mutation log."""

    name: str = "diff_undetected"
    description: str = """
    Compare the leak labels an analyzer reported with the labels recorded in
    the mutation log, and write the undetected mutants as a flaw report.
    """

    def _run(self, log: MutationLog, report_text: str, flaws_path: Optional[str] = None) -> Dict[str, Any]:
        try:
            report = diff_undetected(log, parse_detection_report(report_text))
            written: List[str] = []
            if flaws_path:
                written.append(str(write_flaws(report, Path(flaws_path))))

            return {
                'success': True,
                'flaw_report': report,
                'report_text': render_flaw_report(report),
                'flaws_path': written[0] if written else None,
                'message': f"{len(report.undetected)} undetected mutants",
            }

        except IoFailure as e:
            logger.error(f"Flaw report failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
