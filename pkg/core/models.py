"""
Domain models passed between pipeline stages.
"""

from enum import Enum
from pathlib import Path
from typing import Dict, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field

from config.schemas import CLASS_BODY_MARKER, LEAK_LABEL_PATTERN, OperatorType


# ===== LEAK LABELS =====

def extract_labels(text: str) -> List[str]:
    """All leak labels in ``text``, in order of appearance."""
    return [match.group(0) for match in LEAK_LABEL_PATTERN.finditer(text)]


def label_suffix(label: str) -> str:
    """Two-component id of a label: ``leak-3`` -> ``3-0``, ``leak-0-1`` -> ``0-1``."""
    match = LEAK_LABEL_PATTERN.fullmatch(label)
    if not match:
        raise ValueError(f"Not a leak label: {label!r}")
    return f"{match.group(1)}-{match.group(2) or 0}"


def label_sort_key(label: str) -> Tuple[int, int]:
    first, second = label_suffix(label).split("-")
    return int(first), int(second)


# ===== SOURCE MODEL =====

class SiteKind(str, Enum):
    METHOD_BODY = "METHOD_BODY"
    ANON_METHOD_BODY = "ANON_METHOD_BODY"
    CLASS_BODY = "CLASS_BODY"


class SourceFile(BaseModel):
    model_config = ConfigDict(frozen=True)

    file_id: int
    relative_path: str
    content: bytes


class InjectionSite(BaseModel):
    model_config = ConfigDict(frozen=True)

    file_id: int
    relative_path: str
    kind: SiteKind
    class_path: Tuple[str, ...]
    method_name: Optional[str] = None
    insertion_offset: int

    @property
    def location_name(self) -> str:
        return self.method_name if self.method_name is not None else CLASS_BODY_MARKER


class ScopeNode(BaseModel):
    """A named class declaration and the method bodies it owns."""

    model_config = ConfigDict(frozen=True)

    node_id: int
    file_id: int
    relative_path: str
    name: str
    class_path: Tuple[str, ...]
    parent: Optional[int] = None
    class_site: InjectionSite
    method_sites: List[InjectionSite] = Field(default_factory=list)


class ScopeTree(BaseModel):
    model_config = ConfigDict(frozen=True)

    nodes: List[ScopeNode] = Field(default_factory=list)

    def roots(self) -> List[ScopeNode]:
        return [node for node in self.nodes if node.parent is None]

    def ancestors(self, node: ScopeNode) -> List[ScopeNode]:
        """Proper ancestors, nearest first."""
        chain = []
        current = node
        while current.parent is not None:
            current = self.nodes[current.parent]
            chain.append(current)
        return chain


class LifecyclePair(BaseModel):
    model_config = ConfigDict(frozen=True)

    class_path: Tuple[str, ...]
    class_site: InjectionSite
    earlier_method: InjectionSite
    later_method: InjectionSite
    earlier_rank: int
    later_rank: int


class ParseFailure(BaseModel):
    relative_path: str
    position: int
    message: str


class ProjectModel(BaseModel):
    """Merged structural facts for every parseable file of a project."""

    sources: List[SourceFile] = Field(default_factory=list)
    sites: List[InjectionSite] = Field(default_factory=list)
    scope_tree: ScopeTree = Field(default_factory=ScopeTree)
    lifecycle_pairs: List[LifecyclePair] = Field(default_factory=list)
    parse_failures: List[ParseFailure] = Field(default_factory=list)


# ===== OPERATORS =====

class OperatorTemplate(BaseModel):
    model_config = ConfigDict(frozen=True)

    var_decl_template: str
    source_template: str
    sink_template: str
    api_exceptions: Dict[str, List[str]] = Field(default_factory=dict)

    @property
    def var_type(self) -> str:
        return self.var_decl_template.rsplit(None, 1)[0]

    @property
    def var_name_template(self) -> str:
        return self.var_decl_template.rsplit(None, 1)[-1]


class RenderedFragment(BaseModel):
    model_config = ConfigDict(frozen=True)

    decl_stmt: Optional[str] = None
    sink_stmts: List[str] = Field(default_factory=list)
    labels: List[str] = Field(default_factory=list)
    wrapped: bool = False
    declared_names: List[str] = Field(default_factory=list)

    def statements(self) -> List[str]:
        head = [self.decl_stmt] if self.decl_stmt else []
        return head + list(self.sink_stmts)

    def text(self) -> str:
        return "\n".join(self.statements())


# ===== SCHEMES =====

class TextEdit(BaseModel):
    model_config = ConfigDict(frozen=True)

    file_id: int
    offset: int
    inserted_text: str


class Coordinate(BaseModel):
    model_config = ConfigDict(frozen=True)

    relative_path: str
    class_path: Tuple[str, ...]
    method: str

    @property
    def qualified_name(self) -> str:
        return ".".join(self.class_path + (self.method,))


class MutationPlan(BaseModel):
    model_config = ConfigDict(frozen=True)

    mutant_index: int
    scheme: OperatorType
    edits: List[TextEdit]
    expected_labels: List[str]
    coordinates: List[Coordinate]
    declared_names: List[str] = Field(default_factory=list)


# ===== INJECTOR =====

class LedgerRange(BaseModel):
    mutant_index: int
    start: int
    end: int


class MutatedProject(BaseModel):
    root_path: Path
    files: Dict[str, bytes] = Field(default_factory=dict)
    file_ids: Dict[int, str] = Field(default_factory=dict)
    ledger: Dict[str, List[LedgerRange]] = Field(default_factory=dict)

    def mutants_present(self) -> Set[int]:
        return {entry.mutant_index for ranges in self.ledger.values() for entry in ranges}


class KillReason(str, Enum):
    COMPILE_ERROR = "COMPILE_ERROR"
    NOT_EXECUTED = "NOT_EXECUTED"


class KilledMutant(BaseModel):
    plan: MutationPlan
    reason: KillReason
    evidence: Optional[str] = None


class FilterOutcome(BaseModel):
    surviving: List[MutationPlan] = Field(default_factory=list)
    killed: List[KilledMutant] = Field(default_factory=list)
    compiler_invocations: int = 0
    project: Optional[MutatedProject] = None

    def killed_by(self, reason: KillReason) -> List[KilledMutant]:
        return [entry for entry in self.killed if entry.reason == reason]


# ===== ANALYSIS =====

class LogEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    suffix: str  # "3-0"
    scheme: OperatorType
    coordinate: Coordinate

    @property
    def mutation_id(self) -> str:
        return f"mutation-{self.suffix}"


class MutationLog(BaseModel):
    app_name: str = ""
    scheme: Optional[OperatorType] = None
    entries: List[LogEntry] = Field(default_factory=list)


class DetectionReport(BaseModel):
    detected_labels: Set[str] = Field(default_factory=set)


class SchemeTotals(BaseModel):
    scheme: OperatorType
    seeded: int
    detected: int
    undetected: int
    detection_rate: float


class FlawReport(BaseModel):
    totals: List[SchemeTotals] = Field(default_factory=list)
    undetected: List[LogEntry] = Field(default_factory=list)
    spurious: List[str] = Field(default_factory=list)


class RunSummary(BaseModel):
    plans_generated: int = 0
    plans_killed_compile: int = 0
    plans_killed_execution: int = 0
    plans_surviving: int = 0
    mutated_root: Optional[Path] = None
    log_path: Optional[Path] = None
