"""
Source model tool: discovers Java sources, parses them with tree-sitter and
extracts injection sites, the nested-class scope tree and lifecycle pairs.
"""

import itertools
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import tree_sitter_java
from langchain_core.tools import BaseTool
from pydantic import BaseModel, ConfigDict
from tree_sitter import Language, Node, Parser, Tree

from config.schemas import DEFAULT_LIFECYCLE_ORDER, SKIPPED_DIRECTORIES, SOURCE_EXTENSION
from core.errors import NotADirectory, ParseError, PathNotFound, SourceModelError
from core.models import (
    InjectionSite,
    LifecyclePair,
    ParseFailure,
    ProjectModel,
    ScopeNode,
    ScopeTree,
    SiteKind,
    SourceFile,
)

logger = logging.getLogger(__name__)

JAVA_LANGUAGE = Language(tree_sitter_java.language())

# Declarations whose bodies never receive sites, though nested classes inside them do
_SKIPPED_TYPE_DECLARATIONS = {
    "interface_declaration",
    "enum_declaration",
    "record_declaration",
    "annotation_type_declaration",
}
_METHOD_DECLARATIONS = {"method_declaration", "constructor_declaration"}


class SyntaxTree(BaseModel):
    """Parsed compilation unit together with the bytes it was parsed from."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    source_file: SourceFile
    tree: Tree

    @property
    def root(self) -> Node:
        return self.tree.root_node

    def text(self, node: Node) -> str:
        return self.source_file.content[node.start_byte:node.end_byte].decode("utf-8", errors="replace")


class _ClassInfo(BaseModel):
    name: str
    class_path: Tuple[str, ...]
    body_start: int
    parent: Optional[int]
    methods: List[Tuple[str, int]] = []


class _UnitStructure(BaseModel):
    classes: List[_ClassInfo] = []
    anon_methods: List[Tuple[Tuple[str, ...], str, int]] = []


# ===== DISCOVERY AND PARSING =====

def discover_sources(app_src_path: Union[str, Path]) -> List[SourceFile]:
    """All ``.java`` files under ``app_src_path`` in lexicographic order of relative path."""
    root = Path(app_src_path)
    if not root.exists():
        raise PathNotFound(str(root), "appSrc")
    if not root.is_dir():
        raise NotADirectory(str(root))

    relative_paths = []
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d not in SKIPPED_DIRECTORIES)
        for filename in filenames:
            if filename.endswith(SOURCE_EXTENSION):
                relative_paths.append((Path(dirpath) / filename).relative_to(root).as_posix())

    sources = []
    for file_id, relative_path in enumerate(sorted(relative_paths)):
        sources.append(SourceFile(
            file_id=file_id,
            relative_path=relative_path,
            content=(root / relative_path).read_bytes(),
        ))

    logger.info(f"Discovered {len(sources)} source files under {root}")
    return sources


def _first_error_position(node: Node) -> int:
    stack = [node]
    while stack:
        current = stack.pop()
        if current.type == "ERROR" or current.is_missing:
            return current.start_byte
        if current.has_error:
            stack.extend(reversed(current.children))
    return 0


def parse_unit(file: SourceFile) -> SyntaxTree:
    """Parse one source file; raises ParseError on syntactically invalid input."""
    parser = Parser(JAVA_LANGUAGE)
    tree = parser.parse(file.content)
    if tree.root_node.has_error:
        raise ParseError(file.relative_path, _first_error_position(tree.root_node))
    return SyntaxTree(source_file=file, tree=tree)


# ===== STRUCTURE EXTRACTION =====

def _name_of(unit: SyntaxTree, node: Node) -> str:
    name_node = node.child_by_field_name("name")
    return unit.text(name_node) if name_node is not None else "<unnamed>"


def _collect_structure(unit: SyntaxTree) -> _UnitStructure:
    """Single pre-order walk recording named classes, their methods and anonymous-class methods."""
    structure = _UnitStructure()
    anon_counter = itertools.count(1)

    # (node, class_path, enclosing named class index)
    stack: List[Tuple[Node, Tuple[str, ...], Optional[int]]] = [(unit.root, (), None)]
    while stack:
        node, class_path, enclosing = stack.pop()
        children_enclosing = enclosing
        body_path: Optional[Tuple[str, ...]] = None
        body_node: Optional[Node] = None

        if node.type == "class_declaration":
            body_node = node.child_by_field_name("body")
            body_path = class_path + (_name_of(unit, node),)
            structure.classes.append(_ClassInfo(
                name=body_path[-1],
                class_path=body_path,
                body_start=body_node.start_byte + 1,
                parent=enclosing,
            ))
            children_enclosing = len(structure.classes) - 1

        elif node.type in _SKIPPED_TYPE_DECLARATIONS:
            body_node = node.child_by_field_name("body")
            body_path = class_path + (_name_of(unit, node),)

        elif node.type == "object_creation_expression":
            body_node = next((child for child in node.children if child.type == "class_body"), None)
            if body_node is not None:
                body_path = class_path + (f"anon${next(anon_counter)}",)

        elif node.type in _METHOD_DECLARATIONS:
            _record_method(unit, node, class_path, enclosing, structure)

        pending = []
        for child in node.children:
            if body_node is not None and child == body_node:
                pending.append((child, body_path, children_enclosing))
            else:
                pending.append((child, class_path, enclosing))
        stack.extend(reversed(pending))

    return structure


def _record_method(unit: SyntaxTree, node: Node, class_path: Tuple[str, ...],
                   enclosing: Optional[int], structure: _UnitStructure) -> None:
    body = node.child_by_field_name("body")
    if body is None:
        return  # abstract or native
    member_of = node.parent.parent if node.parent is not None else None
    if node.parent is None or node.parent.type != "class_body" or member_of is None:
        return

    name = _name_of(unit, node)
    offset = body.start_byte + 1
    if member_of.type == "class_declaration" and enclosing is not None:
        structure.classes[enclosing].methods.append((name, offset))
    elif member_of.type == "object_creation_expression" and node.type == "method_declaration":
        structure.anon_methods.append((class_path, name, offset))


def find_injection_sites(tree: SyntaxTree, file_id: int) -> List[InjectionSite]:
    """Class bodies, named-class method bodies and anonymous-class method bodies, by offset."""
    structure = _collect_structure(tree)
    relative_path = tree.source_file.relative_path
    sites = []

    for info in structure.classes:
        sites.append(InjectionSite(
            file_id=file_id, relative_path=relative_path, kind=SiteKind.CLASS_BODY,
            class_path=info.class_path, insertion_offset=info.body_start,
        ))
        for name, offset in info.methods:
            sites.append(InjectionSite(
                file_id=file_id, relative_path=relative_path, kind=SiteKind.METHOD_BODY,
                class_path=info.class_path, method_name=name, insertion_offset=offset,
            ))

    for class_path, name, offset in structure.anon_methods:
        sites.append(InjectionSite(
            file_id=file_id, relative_path=relative_path, kind=SiteKind.ANON_METHOD_BODY,
            class_path=class_path, method_name=name, insertion_offset=offset,
        ))

    return sorted(sites, key=lambda site: site.insertion_offset)


def build_scope_tree(tree: SyntaxTree, file_id: int) -> ScopeTree:
    """One node per named class; parents follow lexical nesting."""
    structure = _collect_structure(tree)
    relative_path = tree.source_file.relative_path
    nodes = []
    for node_id, info in enumerate(structure.classes):
        class_site = InjectionSite(
            file_id=file_id, relative_path=relative_path, kind=SiteKind.CLASS_BODY,
            class_path=info.class_path, insertion_offset=info.body_start,
        )
        method_sites = [
            InjectionSite(
                file_id=file_id, relative_path=relative_path, kind=SiteKind.METHOD_BODY,
                class_path=info.class_path, method_name=name, insertion_offset=offset,
            )
            for name, offset in info.methods
        ]
        nodes.append(ScopeNode(
            node_id=node_id, file_id=file_id, relative_path=relative_path, name=info.name,
            class_path=info.class_path, parent=info.parent,
            class_site=class_site, method_sites=method_sites,
        ))
    return ScopeTree(nodes=nodes)


def merge_scope_trees(trees: Sequence[ScopeTree]) -> ScopeTree:
    """Concatenate per-file trees, renumbering node ids and parent links."""
    nodes = []
    for tree in trees:
        base = len(nodes)
        for node in tree.nodes:
            nodes.append(node.model_copy(update={
                "node_id": node.node_id + base,
                "parent": None if node.parent is None else node.parent + base,
            }))
    return ScopeTree(nodes=nodes)


def find_lifecycle_pairs(tree: SyntaxTree, file_id: int,
                         lifecycle_order: Sequence[str] = DEFAULT_LIFECYCLE_ORDER) -> List[LifecyclePair]:
    """Every ordered pair of a class's callbacks whose ranks increase."""
    rank = {name: position for position, name in enumerate(lifecycle_order)}
    pairs = []
    for node in build_scope_tree(tree, file_id).nodes:
        callbacks = [site for site in node.method_sites if site.method_name in rank]
        for earlier, later in itertools.permutations(callbacks, 2):
            if rank[earlier.method_name] < rank[later.method_name]:
                pairs.append(LifecyclePair(
                    class_path=node.class_path,
                    class_site=node.class_site,
                    earlier_method=earlier,
                    later_method=later,
                    earlier_rank=rank[earlier.method_name],
                    later_rank=rank[later.method_name],
                ))

    return sorted(pairs, key=lambda pair: (
        pair.class_path, pair.earlier_rank, pair.later_rank,
        pair.earlier_method.insertion_offset, pair.later_method.insertion_offset,
    ))


def model_project(sources: Sequence[SourceFile],
                  lifecycle_order: Sequence[str] = DEFAULT_LIFECYCLE_ORDER) -> ProjectModel:
    """Parse every file and merge the per-file facts by (file_id, offset)."""
    model = ProjectModel(sources=list(sources))
    trees = []
    for source in sources:
        try:
            unit = parse_unit(source)
        except ParseError as e:
            logger.warning(f"Excluding {source.relative_path} from mutation: {e}")
            model.parse_failures.append(ParseFailure(
                relative_path=source.relative_path, position=e.position, message=str(e),
            ))
            continue
        model.sites.extend(find_injection_sites(unit, source.file_id))
        trees.append(build_scope_tree(unit, source.file_id))
        model.lifecycle_pairs.extend(find_lifecycle_pairs(unit, source.file_id, lifecycle_order))

    model.scope_tree = merge_scope_trees(trees)
    return model


class SourceModelTool(BaseTool):
    """Tool for building the structural model of a project to mutate."""

    name: str = "build_source_model"
    description: str = """
    Discover Java sources under a project root and extract injection sites,
    nested-class scopes and lifecycle callback pairs.
    """

    def _run(self, app_src_path: str, lifecycle_order: Optional[List[str]] = None,
             sources: Optional[List[SourceFile]] = None) -> Dict[str, Any]:
        """Model the project, discovering its sources unless they are given."""
        try:
            if sources is None:
                sources = discover_sources(app_src_path)
            model = model_project(sources, lifecycle_order or DEFAULT_LIFECYCLE_ORDER)

            return {
                'success': True,
                'project_model': model,
                'message': (
                    f"Modelled {len(sources)} files: {len(model.sites)} sites, "
                    f"{len(model.scope_tree.nodes)} classes, {len(model.lifecycle_pairs)} lifecycle pairs"
                ),
            }

        except SourceModelError as e:
            logger.error(f"Source model failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
        except OSError as e:
            logger.error(f"Reading sources failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': 'IoFailure',
                'exit_code': 3,
            }
