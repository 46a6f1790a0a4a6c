"""
Reference analyzer tool: a deliberately intraprocedural taint checker used
to exercise the flaw-discovery loop without an external analyzer.

Each method body is analysed on its own, and so is each class's synthetic
body made of field initializers and instance initializer blocks. Taint
starts at a value matching the configured source expression and flows
through local declarations and assignments. A sink call carrying a leak
label and a tainted argument is reported. Fields written in one method and
read in another are never connected.
"""

import logging
import re
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Set, Tuple, Union

from langchain_core.tools import BaseTool
from pydantic import BaseModel
from tree_sitter import Node

from config.schemas import CLASS_BODY_MARKER, LEAK_LABEL_PATTERN, PLACEHOLDER
from core.errors import ParseError, SourceModelError
from core.models import DetectionReport, OperatorTemplate, label_sort_key
from tools.source_model_tool import SyntaxTree, discover_sources, parse_unit

logger = logging.getLogger(__name__)

_BODY_OWNERS = {"method_declaration", "constructor_declaration"}
_NAMED_TYPES = {
    "class_declaration", "interface_declaration", "enum_declaration",
    "record_declaration", "annotation_type_declaration",
}


class Finding(BaseModel):
    label: str
    relative_path: str
    location: str


def _compact(text: str) -> str:
    return re.sub(r"\s+", "", text)


def source_pattern(template: OperatorTemplate) -> re.Pattern:
    escaped = re.escape(_compact(template.source_template)).replace(re.escape(PLACEHOLDER), r"\d+")
    return re.compile(escaped)


def sink_method_name(template: OperatorTemplate) -> str:
    """Final name segment of the sink call, ``d`` for ``android.util.Log.d(...)``."""
    call = template.sink_template.split("(", 1)[0]
    return call.rsplit(".", 1)[-1].strip()


def _walk_body(node: Node) -> Iterator[Node]:
    """Pre-order walk in source order that does not enter nested class bodies."""
    stack = [node]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed([child for child in current.children if child.type != "class_body"]))


def _identifiers(unit: SyntaxTree, node: Node) -> Set[str]:
    return {unit.text(n) for n in _walk_body(node) if n.type == "identifier"}


class _TaintState:
    def __init__(self, unit: SyntaxTree, source: re.Pattern, sink_name: str):
        self.unit = unit
        self.source = source
        self.sink_name = sink_name
        self.tainted: Set[str] = set()
        self.labels: List[str] = []

    def _is_tainted_value(self, value: Optional[Node]) -> bool:
        if value is None:
            return False
        if self.source.search(_compact(self.unit.text(value))):
            return True
        return bool(_identifiers(self.unit, value) & self.tainted)

    def _assign(self, name_node: Optional[Node], value: Optional[Node]) -> None:
        if name_node is None:
            return
        name = self.unit.text(name_node)
        if name_node.type == "field_access":
            field = name_node.child_by_field_name("field")
            name = self.unit.text(field) if field is not None else name
        if self._is_tainted_value(value):
            self.tainted.add(name)
        else:
            self.tainted.discard(name)

    def _sink(self, node: Node) -> None:
        name = node.child_by_field_name("name")
        arguments = node.child_by_field_name("arguments")
        if name is None or arguments is None or self.unit.text(name) != self.sink_name:
            return
        values = [child for child in arguments.named_children]
        labels = [
            self.unit.text(child).strip('"') for child in values
            if child.type == "string_literal" and LEAK_LABEL_PATTERN.fullmatch(self.unit.text(child).strip('"'))
        ]
        if labels and any(self._is_tainted_value(child) for child in values if child.type != "string_literal"):
            self.labels.extend(labels)

    def visit(self, node: Node) -> None:
        for current in _walk_body(node):
            if current.type == "variable_declarator":
                self._assign(current.child_by_field_name("name"), current.child_by_field_name("value"))
            elif current.type == "assignment_expression":
                self._assign(current.child_by_field_name("left"), current.child_by_field_name("right"))
            elif current.type == "method_invocation":
                self._sink(current)


def _enclosing_type_name(unit: SyntaxTree, node: Node) -> str:
    current = node.parent
    while current is not None:
        if current.type in _NAMED_TYPES:
            name = current.child_by_field_name("name")
            return unit.text(name) if name is not None else "<unnamed>"
        if current.type == "object_creation_expression":
            return "<anonymous>"
        current = current.parent
    return "<unknown>"


def _analysis_units(unit: SyntaxTree) -> Iterator[Tuple[str, List[Node]]]:
    """(location, nodes) for every method body and every class's synthetic body."""
    for node in _walk_all(unit.root):
        if node.type in _BODY_OWNERS:
            body = node.child_by_field_name("body")
            if body is not None:
                name = node.child_by_field_name("name")
                owner = _enclosing_type_name(unit, node)
                yield f"{owner}.{unit.text(name) if name is not None else '<init>'}", [body]
        elif node.type == "class_body":
            members = [child for child in node.named_children if child.type in {"field_declaration", "block"}]
            if members:
                yield f"{_enclosing_type_name(unit, members[0])}.{CLASS_BODY_MARKER}", members


def _walk_all(root: Node) -> Iterator[Node]:
    stack = [root]
    while stack:
        current = stack.pop()
        yield current
        stack.extend(reversed(current.children))


def analyze_unit(unit: SyntaxTree, template: OperatorTemplate) -> List[Finding]:
    source = source_pattern(template)
    sink_name = sink_method_name(template)
    findings = []
    for location, nodes in _analysis_units(unit):
        state = _TaintState(unit, source, sink_name)
        for node in nodes:
            state.visit(node)
        findings.extend(
            Finding(label=label, relative_path=unit.source_file.relative_path, location=location)
            for label in state.labels
        )
    return findings


def reference_analyze(project_root: Union[str, Path], template: OperatorTemplate) -> Tuple[DetectionReport, List[Finding]]:
    """Detections over every parseable file under ``project_root``."""
    findings: List[Finding] = []
    for source_file in discover_sources(project_root):
        try:
            unit = parse_unit(source_file)
        except ParseError as e:
            logger.warning(f"Reference analyzer skipping {source_file.relative_path}: {e}")
            continue
        findings.extend(analyze_unit(unit, template))

    report = DetectionReport(detected_labels={finding.label for finding in findings})
    logger.info(f"Reference analyzer found {len(report.detected_labels)} leaks under {project_root}")
    return report, findings


def render_findings(findings: List[Finding]) -> str:
    ordered = sorted(findings, key=lambda f: (label_sort_key(f.label), f.relative_path, f.location))
    return "".join(f"Found leak: {f.label} at {f.location} ({f.relative_path})\n" for f in ordered)


class ReferenceAnalyzerTool(BaseTool):
    """Tool for running the bundled intraprocedural leak detector."""

    name: str = "reference_analyze"
    description: str = """
    Scan a Java project for source-to-sink leaks whose source and sink sit in
    the same method body and print the leak labels found.
    """

    def _run(self, project_root: str, template: OperatorTemplate) -> Dict[str, Any]:
        try:
            report, findings = reference_analyze(project_root, template)
            return {
                'success': True,
                'detection_report': report,
                'report_text': render_findings(findings),
                'message': f"{len(report.detected_labels)} leaks detected",
            }

        except SourceModelError as e:
            logger.error(f"Reference analysis failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
