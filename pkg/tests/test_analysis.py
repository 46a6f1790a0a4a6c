"""Tests for the mutation log, flaw diffing and the reference analyzer."""

import json
from pathlib import PurePosixPath

import pytest

from config.schemas import OperatorType
from core.errors import MalformedLog
from core.models import Coordinate, DetectionReport, MutationLog, MutationPlan
from tools.flaw_report_tool import (
    FLAWS_FILENAME,
    FlawReportTool,
    diff_undetected,
    parse_detection_report,
    render_flaw_report,
    write_flaws,
)
from tools.injection_tool import apply_plans
from tools.mutation_log_tool import MutationLogTool, app_name_from_log_path, emit_log, parse_log
from tools.reference_analyzer_tool import ReferenceAnalyzerTool, reference_analyze, render_findings
from tools.scheme_planner_tool import PLANNERS, plan_scopesink

TAINTSINK_GOLDEN = """\
In file: BMIMain.java
Mutation Scheme: TAINTSINK
mutation-3-0: BMIMain.onCreate
mutation-2-0: BMIMain.onCreate
mutation-1-0: BMIMain.onCreate
mutation-0-0: BMIMain.onCreate
"""


def _taintsink_plans(count: int = 4):
    coordinate = Coordinate(relative_path="BMIMain.java", class_path=("BMIMain",), method="onCreate")
    return [
        MutationPlan(
            mutant_index=index,
            scheme=OperatorType.TAINTSINK,
            edits=[],
            expected_labels=[f"leak-{index}"],
            coordinates=[coordinate],
        )
        for index in range(count)
    ]


def _log(text: str) -> MutationLog:
    return parse_log(text, "BMIApp")


class TestMutationLog:

    def test_taintsink_golden(self) -> None:
        assert emit_log(_taintsink_plans(), "BMIApp", OperatorType.TAINTSINK) == TAINTSINK_GOLDEN

    def test_empty(self) -> None:
        assert emit_log([], "BMIApp", OperatorType.REACHABILITY) == ""
        assert parse_log("").entries == []

    def test_scopesink_lines(self, fixture_model, template) -> None:
        text = emit_log(plan_scopesink(fixture_model.scope_tree, template)[:1], "BMIApp", OperatorType.SCOPESINK)
        assert text.splitlines() == [
            "In file: ParentClass.java",
            "Mutation Scheme: SCOPESINK",
            "mutation-0-1: ParentClass.methodA",
            "mutation-0-0: ParentClass.ChildClass.childMethodA",
        ]

    def test_header_names_the_file(self, fixture_model, template) -> None:
        text = emit_log(PLANNERS[OperatorType.TAINTSINK](fixture_model, template), "BMIApp", OperatorType.TAINTSINK)
        assert text.splitlines()[:2] == ["In file: BMIMain.java", "Mutation Scheme: TAINTSINK"]

    def test_unknown_scheme_header(self) -> None:
        with pytest.raises(MalformedLog) as excinfo:
            _log("In file: BMIMain.java\nMutation Scheme: REACH\nmutation-0-0: BMIMain.onCreate\n")
        assert excinfo.value.line_no == 2
        assert excinfo.value.exit_code == 1

    def test_descending_order_is_numeric(self) -> None:
        lines = emit_log(_taintsink_plans(12), "BMIApp", OperatorType.TAINTSINK).splitlines()
        assert lines[2] == "mutation-11-0: BMIMain.onCreate"
        assert lines[-1] == "mutation-0-0: BMIMain.onCreate"

    def test_files_in_path_order(self, fixture_model, template) -> None:
        plans = PLANNERS[OperatorType.REACHABILITY](fixture_model, template)
        text = emit_log(plans, "BMIApp", OperatorType.REACHABILITY)
        headers = [line for line in text.splitlines() if line.startswith("In file: ")]
        paths = sorted({coordinate.relative_path for plan in plans for coordinate in plan.coordinates})
        assert headers == [f"In file: {PurePosixPath(path).name}" for path in paths]
        assert "mutation-0-0: BMIMain.<class-body>" in text
        assert "mutation-15-0: ReminderScheduler.anon$1.run" in text

    @pytest.mark.parametrize("scheme", list(OperatorType))
    def test_parse_inverts_emit(self, scheme, fixture_model, template) -> None:
        plans = PLANNERS[scheme](fixture_model, template)
        log = _log(emit_log(plans, "BMIApp", scheme))

        assert log.scheme == scheme
        expected = {
            (PurePosixPath(coordinate.relative_path).name, coordinate.qualified_name, label)
            for plan in plans for label, coordinate in zip(plan.expected_labels, plan.coordinates)
        }
        parsed = {
            (entry.coordinate.relative_path, entry.coordinate.qualified_name, entry.mutation_id.replace("mutation", "leak"))
            for entry in log.entries
        }
        normalized = {(path, name, label if label.count("-") == 2 else f"{label}-0") for path, name, label in expected}
        assert parsed == normalized

    def test_unrecognized_lines_are_skipped(self) -> None:
        log = _log(TAINTSINK_GOLDEN + "some trailing noise\nmutation-x: nope\n")
        assert len(log.entries) == 4

    def test_app_name_from_path(self, tmp_path) -> None:
        assert app_name_from_log_path(tmp_path / "BMIApp.mutations.log") == "BMIApp"
        assert app_name_from_log_path("other.txt") == "other"

    def test_tool_writes_file(self, tmp_path) -> None:
        path = tmp_path / "out" / "BMIApp.mutations.log"
        result = MutationLogTool()._run(_taintsink_plans(), "BMIApp", OperatorType.TAINTSINK, str(path))
        assert result["success"] is True
        assert path.read_text(encoding="utf-8") == TAINTSINK_GOLDEN


class TestDiffUndetected:

    @pytest.fixture
    def log(self) -> MutationLog:
        return _log(TAINTSINK_GOLDEN)

    def test_report_extraction(self) -> None:
        report = parse_detection_report("Found leak: leak-3-0 at BMIMain\nleak-1 again leak-1\n")
        assert report.detected_labels == {"leak-3-0", "leak-1"}
        assert parse_detection_report("").detected_labels == set()

    def test_everything_detected(self, log) -> None:
        report = diff_undetected(log, parse_detection_report("leak-0 leak-1 leak-2 leak-3"))
        assert report.undetected == []
        assert report.totals[0].detection_rate == 1.0
        assert "0 undetected" in render_flaw_report(report)

    def test_nothing_detected(self, log) -> None:
        report = diff_undetected(log, DetectionReport())
        assert [entry.mutation_id for entry in report.undetected] == [
            "mutation-3-0", "mutation-2-0", "mutation-1-0", "mutation-0-0",
        ]
        (totals,) = report.totals
        assert (totals.scheme, totals.seeded, totals.detected, totals.undetected) == (OperatorType.TAINTSINK, 4, 0, 4)
        assert totals.detection_rate == 0.0

    def test_single_and_double_index_labels_match(self, log) -> None:
        report = diff_undetected(log, parse_detection_report("leak-1-0\nleak-2\n"))
        assert [entry.suffix for entry in report.undetected] == ["3-0", "0-0"]
        assert report.totals[0].detection_rate == 0.5

    def test_spurious_labels_are_listed_apart(self, log) -> None:
        report = diff_undetected(log, parse_detection_report("leak-0 leak-9 leak-4-2"))
        assert report.spurious == ["leak-4-2", "leak-9"]
        assert report.totals[0].detected == 1
        assert "Labels reported but never seeded: leak-4-2, leak-9" in render_flaw_report(report)

    def test_empty_log(self) -> None:
        report = diff_undetected(MutationLog(), parse_detection_report("leak-0"))
        assert report.totals == [] and report.undetected == []
        assert report.spurious == ["leak-0"]

    def test_rendered_groups(self, log) -> None:
        text = render_flaw_report(diff_undetected(log, parse_detection_report("leak-0")))
        assert "Mutation Scheme: TAINTSINK: 4 seeded, 1 detected, 3 undetected (detection rate 0.25)" in text
        assert "[TAINTSINK] BMIMain.java :: BMIMain" in text
        assert "  mutation-3-0: BMIMain.onCreate" in text

    def test_flaws_file(self, log, tmp_path) -> None:
        path = write_flaws(diff_undetected(log, parse_detection_report("leak-0 leak-1")), tmp_path / FLAWS_FILENAME)
        records = json.loads(path.read_text(encoding="utf-8"))
        assert records == [
            {"mutation_id": "mutation-3-0", "scheme": "TAINTSINK", "file": "BMIMain.java",
             "class": "BMIMain", "method": "onCreate"},
            {"mutation_id": "mutation-2-0", "scheme": "TAINTSINK", "file": "BMIMain.java",
             "class": "BMIMain", "method": "onCreate"},
        ]

    def test_empty_flaws_file(self, log, tmp_path) -> None:
        path = write_flaws(diff_undetected(log, parse_detection_report("leak-0 leak-1 leak-2 leak-3")),
                           tmp_path / FLAWS_FILENAME)
        assert json.loads(path.read_text(encoding="utf-8")) == []

    def test_tool(self, log, tmp_path) -> None:
        result = FlawReportTool()._run(log, "leak-3", str(tmp_path / FLAWS_FILENAME))
        assert result["success"] is True
        assert len(result["flaw_report"].undetected) == 3
        assert result["flaws_path"] == str(tmp_path / FLAWS_FILENAME)


class TestReferenceAnalyzer:

    def _mutate(self, scheme, fixture_model, fixture_sources, manifest, template, tmp_path):
        plans = PLANNERS[scheme](fixture_model, template)
        apply_plans(fixture_sources, plans, manifest.app_src, tmp_path / "out")
        report, findings = reference_analyze(tmp_path / "out", template)
        return plans, report, findings

    def test_unmutated_project(self, manifest, template) -> None:
        report, findings = reference_analyze(manifest.app_src, template)
        assert report.detected_labels == set()
        assert findings == []

    @pytest.mark.parametrize("scheme", [OperatorType.REACHABILITY, OperatorType.COMPLEXREACHABILITY])
    def test_intraprocedural_schemes_are_found(self, scheme, fixture_model, fixture_sources, manifest,
                                               template, tmp_path) -> None:
        plans, report, _ = self._mutate(scheme, fixture_model, fixture_sources, manifest, template, tmp_path)
        assert report.detected_labels == {label for plan in plans for label in plan.expected_labels}

    def test_taintsink_is_missed(self, fixture_model, fixture_sources, manifest, template, tmp_path) -> None:
        _, report, _ = self._mutate(OperatorType.TAINTSINK, fixture_model, fixture_sources, manifest, template, tmp_path)
        assert report.detected_labels == set()

    def test_scopesink_finds_only_the_nested_sink(self, fixture_model, fixture_sources, manifest,
                                                  template, tmp_path) -> None:
        _, report, findings = self._mutate(OperatorType.SCOPESINK, fixture_model, fixture_sources,
                                           manifest, template, tmp_path)
        assert report.detected_labels == {"leak-0-0", "leak-1-0"}
        assert sorted(f.location for f in findings) == ["ChildClass.childMethodA", "Rule.describe"]

    def test_class_body_and_anonymous_locations(self, fixture_model, fixture_sources, manifest,
                                                template, tmp_path) -> None:
        _, _, findings = self._mutate(OperatorType.REACHABILITY, fixture_model, fixture_sources,
                                      manifest, template, tmp_path)
        locations = {f.label: f.location for f in findings}
        assert locations["leak-0"] == "BMIMain.<class-body>"
        assert locations["leak-15"] == "<anonymous>.run"

    def test_rendered_output_round_trips(self, fixture_model, fixture_sources, manifest, template, tmp_path) -> None:
        _, report, findings = self._mutate(OperatorType.SCOPESINK, fixture_model, fixture_sources,
                                           manifest, template, tmp_path)
        text = render_findings(findings)
        assert text.splitlines()[0].startswith("Found leak: leak-0-0 at ChildClass.childMethodA")
        assert parse_detection_report(text) == report

    def test_sanitizing_reassignment_clears_taint(self, tmp_path, template) -> None:
        (tmp_path / "A.java").write_text(
            "class A {\n"
            "    void m() {\n"
            "        String dl0 = java.util.Calendar.getInstance().getTimeZone().getDisplayName();\n"
            '        dl0 = "";\n'
            '        android.util.Log.d("leak-0", dl0);\n'
            "    }\n"
            "}\n",
            encoding="utf-8",
        )
        report, _ = reference_analyze(tmp_path, template)
        assert report.detected_labels == set()

    def test_tool_on_missing_root(self, tmp_path, template) -> None:
        result = ReferenceAnalyzerTool()._run(str(tmp_path / "absent"), template)
        assert result["success"] is False
        assert result["error_type"] == "PathNotFound"
