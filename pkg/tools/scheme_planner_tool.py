"""
Scheme planner tool: turns the project model plus rendered operators into
MutationPlans for the four placement schemes.
"""

import logging
from typing import Any, Callable, Dict, List, Sequence

from langchain_core.tools import BaseTool

from config.schemas import OperatorType
from core.errors import MutSeedError
from core.models import (
    Coordinate,
    InjectionSite,
    LifecyclePair,
    MutationPlan,
    OperatorTemplate,
    ProjectModel,
    RenderedFragment,
    ScopeTree,
    SiteKind,
    TextEdit,
)
from tools.security_operators import (
    field_declaration,
    render,
    render_assignment,
    render_complex,
    render_sink,
    variable_name,
    wrap_checked,
)

logger = logging.getLogger(__name__)

_METHOD_KINDS = {SiteKind.METHOD_BODY, SiteKind.ANON_METHOD_BODY}


def _site_order(site: InjectionSite):
    return site.file_id, site.insertion_offset


def _coordinate(site: InjectionSite) -> Coordinate:
    return Coordinate(relative_path=site.relative_path, class_path=site.class_path, method=site.location_name)


def _block(lines: Sequence[str]) -> str:
    """Inserted text occupies its own lines so diagnostics map back to a single mutant."""
    return "\n" + "\n".join(lines) + "\n"


def _edit(site: InjectionSite, lines: Sequence[str]) -> TextEdit:
    return TextEdit(file_id=site.file_id, offset=site.insertion_offset, inserted_text=_block(lines))


def _class_body_lines(fragment: RenderedFragment) -> List[str]:
    if fragment.wrapped:
        # try-catch is not a class member; the compile filter removes such mutants
        return fragment.statements()
    return [fragment.decl_stmt, "{ " + " ".join(fragment.sink_stmts) + " }"]


def plan_reachability(sites: Sequence[InjectionSite], template: OperatorTemplate) -> List[MutationPlan]:
    """One self-contained source-to-sink operator per injection site."""
    plans = []
    for index, site in enumerate(sorted(sites, key=_site_order)):
        fragment = wrap_checked(render(template, index), template, index)
        lines = _class_body_lines(fragment) if site.kind == SiteKind.CLASS_BODY else fragment.statements()
        plans.append(MutationPlan(
            mutant_index=index,
            scheme=OperatorType.REACHABILITY,
            edits=[_edit(site, lines)],
            expected_labels=list(fragment.labels),
            coordinates=[_coordinate(site)],
            declared_names=list(fragment.declared_names),
        ))
    return plans


def plan_complex_reachability(sites: Sequence[InjectionSite], template: OperatorTemplate) -> List[MutationPlan]:
    """Array-hop operator in every method body; class bodies cannot hold the statements."""
    eligible = sorted((site for site in sites if site.kind in _METHOD_KINDS), key=_site_order)
    plans = []
    for index, site in enumerate(eligible):
        fragment = wrap_checked(render_complex(template, index), template, index)
        plans.append(MutationPlan(
            mutant_index=index,
            scheme=OperatorType.COMPLEXREACHABILITY,
            edits=[_edit(site, fragment.statements())],
            expected_labels=list(fragment.labels),
            coordinates=[_coordinate(site)],
            declared_names=list(fragment.declared_names),
        ))
    return plans


def plan_taintsink(pairs: Sequence[LifecyclePair], template: OperatorTemplate) -> List[MutationPlan]:
    """Field in the class, source in the earlier callback, sink in the later one."""
    plans = []
    for index, pair in enumerate(pairs):
        assignment = wrap_checked(render_assignment(template, index), template, index)
        sink = wrap_checked(render_sink(template, index), template, index)
        plans.append(MutationPlan(
            mutant_index=index,
            scheme=OperatorType.TAINTSINK,
            edits=[
                _edit(pair.class_site, [field_declaration(template, index)]),
                _edit(pair.earlier_method, assignment.statements()),
                _edit(pair.later_method, sink.statements()),
            ],
            expected_labels=list(sink.labels),
            coordinates=[_coordinate(pair.later_method)],
            declared_names=[variable_name(template, index)],
        ))
    return plans


def plan_scopesink(scope_tree: ScopeTree, template: OperatorTemplate) -> List[MutationPlan]:
    """
    Field in the outermost enclosing class, source and first sink in a nested
    class's method, and one further sink in every method of each ancestor.
    """
    eligible = sorted(
        ((node, site) for node in scope_tree.nodes if node.parent is not None for site in node.method_sites),
        key=lambda item: _site_order(item[1]),
    )

    plans = []
    for index, (node, site) in enumerate(eligible):
        ancestors = scope_tree.ancestors(node)
        outermost = ancestors[-1]

        source_and_sink = RenderedFragment(
            decl_stmt=render_assignment(template, index).decl_stmt,
            sink_stmts=render_sink(template, index, 0).sink_stmts,
            labels=render_sink(template, index, 0).labels,
        )
        source_and_sink = wrap_checked(source_and_sink, template, index)

        edits = [
            _edit(outermost.class_site, [field_declaration(template, index)]),
            _edit(site, source_and_sink.statements()),
        ]
        labels = list(source_and_sink.labels)
        coordinates = [_coordinate(site)]

        sink_index = 1
        for ancestor in ancestors:
            for ancestor_site in sorted(ancestor.method_sites, key=_site_order):
                sink = wrap_checked(render_sink(template, index, sink_index), template, index)
                edits.append(_edit(ancestor_site, sink.statements()))
                labels.extend(sink.labels)
                coordinates.append(_coordinate(ancestor_site))
                sink_index += 1

        plans.append(MutationPlan(
            mutant_index=index,
            scheme=OperatorType.SCOPESINK,
            edits=edits,
            expected_labels=labels,
            coordinates=coordinates,
            declared_names=[variable_name(template, index)],
        ))
    return plans


PLANNERS: Dict[OperatorType, Callable[[ProjectModel, OperatorTemplate], List[MutationPlan]]] = {
    OperatorType.REACHABILITY: lambda model, template: plan_reachability(model.sites, template),
    OperatorType.COMPLEXREACHABILITY: lambda model, template: plan_complex_reachability(model.sites, template),
    OperatorType.TAINTSINK: lambda model, template: plan_taintsink(model.lifecycle_pairs, template),
    OperatorType.SCOPESINK: lambda model, template: plan_scopesink(model.scope_tree, template),
}


class SchemePlannerTool(BaseTool):
    """Tool for generating the mutation plans of one scheme."""

    name: str = "plan_mutations"
    description: str = """
    Generate mutation plans (text edits, expected leak labels and coordinates)
    for the selected mutation scheme over a modelled project.
    """

    def _run(self, project_model: ProjectModel, template: OperatorTemplate,
             scheme: OperatorType) -> Dict[str, Any]:
        """Plan every mutant of ``scheme``."""
        try:
            plans = PLANNERS[scheme](project_model, template)
            label_count = sum(len(plan.expected_labels) for plan in plans)

            return {
                'success': True,
                'plans': plans,
                'message': f"Planned {len(plans)} {scheme.value} mutants carrying {label_count} labels",
            }

        except MutSeedError as e:
            logger.error(f"Planning {scheme.value} failed: {e}")
            return {
                'success': False,
                'error': str(e),
                'error_type': type(e).__name__,
                'exit_code': e.exit_code,
            }
