"""
Security operator rendering: turns operator templates into labelled Java
fragments and wraps calls to exception-throwing APIs in try-catch.
"""

import logging
import re
from typing import Dict, List, Optional, Tuple

from config.schemas import LABEL_PLACEHOLDER, PLACEHOLDER
from core.errors import UnknownExceptionName
from core.models import OperatorTemplate, RenderedFragment

logger = logging.getLogger(__name__)

_IDENTIFIER = r"[A-Za-z_$][\w$]*"
_TYPE_NAME = re.compile(rf"{_IDENTIFIER}(?:\.{_IDENTIFIER})*")
_DECLARATION = re.compile(rf"^(?P<type>[\w$.<>\[\], ]+?)\s+(?P<name>{_IDENTIFIER})\s*=\s*(?P<value>.+);$", re.DOTALL)


def leak_label(mutant_index: int, sink_index: Optional[int] = None) -> str:
    if sink_index is None:
        return f"leak-{mutant_index}"
    return f"leak-{mutant_index}-{sink_index}"


def variable_name(template: OperatorTemplate, mutant_index: int) -> str:
    return template.var_name_template.replace(PLACEHOLDER, str(mutant_index))


def _substitute(text: str, mutant_index: int) -> str:
    return text.replace(PLACEHOLDER, str(mutant_index))


def _rename(text: str, old: str, new: str) -> str:
    return re.sub(rf"(?<![\w$]){re.escape(old)}(?![\w$])", new, text)


def _sink_statement(template: OperatorTemplate, mutant_index: int,
                    sink_index: Optional[int], consumed: Optional[str] = None) -> str:
    sink = template.sink_template.replace(LABEL_PLACEHOLDER, leak_label(mutant_index, sink_index))
    sink = _substitute(sink, mutant_index)
    if consumed is not None:
        sink = _rename(sink, variable_name(template, mutant_index), consumed)
    return sink


def render(template: OperatorTemplate, mutant_index: int,
           sink_index: Optional[int] = None) -> RenderedFragment:
    """Declaration of the tainted variable from the source, then the labelled sink."""
    name = variable_name(template, mutant_index)
    decl = f"{_substitute(template.var_decl_template, mutant_index)} = {_substitute(template.source_template, mutant_index)};"
    return RenderedFragment(
        decl_stmt=decl,
        sink_stmts=[_sink_statement(template, mutant_index, sink_index)],
        labels=[leak_label(mutant_index, sink_index)],
        declared_names=[name],
    )


def render_complex(template: OperatorTemplate, mutant_index: int) -> RenderedFragment:
    """Source value routed through a string array before it reaches the sink."""
    base = render(template, mutant_index)
    name = variable_name(template, mutant_index)
    array = f"lr{mutant_index}"
    projected = _substitute(template.var_name_template.replace(PLACEHOLDER, "p" + PLACEHOLDER), mutant_index)
    return RenderedFragment(
        decl_stmt=base.decl_stmt,
        sink_stmts=[
            f'String[] {array} = new String[] {{"n/a", {name}}};',
            f"String {projected} = {array}[{array}.length - 1];",
            _sink_statement(template, mutant_index, None, consumed=projected),
        ],
        labels=[leak_label(mutant_index)],
        declared_names=[name, array, projected],
    )


def render_assignment(template: OperatorTemplate, mutant_index: int) -> RenderedFragment:
    """Source assigned to an already declared variable (field-mediated schemes)."""
    name = variable_name(template, mutant_index)
    return RenderedFragment(decl_stmt=f"{name} = {_substitute(template.source_template, mutant_index)};")


def render_sink(template: OperatorTemplate, mutant_index: int,
                sink_index: Optional[int] = None) -> RenderedFragment:
    return RenderedFragment(
        sink_stmts=[_sink_statement(template, mutant_index, sink_index)],
        labels=[leak_label(mutant_index, sink_index)],
    )


def field_declaration(template: OperatorTemplate, mutant_index: int) -> str:
    """Class-level declaration of the tainted variable with a neutral value."""
    return f'{_substitute(template.var_decl_template, mutant_index)} = "";'


# ===== SYNTAX REQUIREMENTS =====

def _check_exception_names(api_exceptions: Dict[str, List[str]]) -> None:
    for names in api_exceptions.values():
        for name in names:
            if not _TYPE_NAME.fullmatch(name):
                raise UnknownExceptionName(name)


def _invocation_pattern(fqn: str) -> re.Pattern:
    parts = fqn.split(".")
    if parts[-1] == "<init>" and len(parts) >= 2:
        return re.compile(rf"\bnew\s+(?:{_IDENTIFIER}\.)*{re.escape(parts[-2])}\s*[(<]")
    segment = ".".join(parts[-2:])
    return re.compile(rf"(?<![\w$]){re.escape(segment)}\s*\(")


def _matching_apis(statement: str, api_exceptions: Dict[str, List[str]]) -> List[str]:
    return [fqn for fqn in api_exceptions if _invocation_pattern(fqn).search(statement)]


def _neutral_value(var_type: str) -> str:
    return '""' if var_type == "String" else "null"


def _hoist(inner: List[str], after: List[str]) -> Tuple[List[str], List[str]]:
    """Move declarations consumed after the try out in front of it."""
    hoisted, rewritten = [], []
    for statement in inner:
        match = _DECLARATION.match(statement)
        if match and any(re.search(rf"(?<![\w$]){re.escape(match['name'])}(?![\w$])", later) for later in after):
            hoisted.append(f"{match['type']} {match['name']} = {_neutral_value(match['type'])};")
            rewritten.append(f"{match['name']} = {match['value']};")
        else:
            rewritten.append(statement)
    return hoisted, rewritten


def wrap_checked(fragment: RenderedFragment, template: OperatorTemplate,
                 mutant_index: Optional[int] = None) -> RenderedFragment:
    """
    Enclose statements that call exception-throwing APIs in try-catch.

    Matching is textual on the final ``Class.method`` segment of each
    configured API (``Class.<init>`` matches ``new Class(``). Catch blocks
    are empty, one per distinct exception in configuration order.
    """
    if fragment.wrapped:
        return fragment
    _check_exception_names(template.api_exceptions)

    statements = fragment.statements()
    matches = [_matching_apis(statement, template.api_exceptions) for statement in statements]
    affected = [position for position, apis in enumerate(matches) if apis]
    if not affected:
        return fragment

    first, last = affected[0], affected[-1]
    matched_apis = {fqn for apis in matches[first:last + 1] for fqn in apis}
    exceptions: List[str] = []
    for fqn, names in template.api_exceptions.items():
        if fqn in matched_apis:
            exceptions.extend(name for name in names if name not in exceptions)

    if mutant_index is None:
        mutant_index = int(fragment.labels[0].split("-")[1]) if fragment.labels else 0

    after = statements[last + 1:]
    hoisted, inner = _hoist(statements[first:last + 1], after)
    catches = " ".join(f"catch ({name} e{mutant_index}) {{ }}" for name in exceptions)
    try_block = f"try {{ {' '.join(inner)} }} {catches}".rstrip()
    ordered = statements[:first] + hoisted + [try_block] + after

    decl_name = None
    if fragment.decl_stmt:
        decl_match = _DECLARATION.match(fragment.decl_stmt)
        decl_name = decl_match["name"] if decl_match else None
    decl_in_front = fragment.decl_stmt is not None and (
        first > 0 or (bool(hoisted) and decl_name is not None and hoisted[0].split("=")[0].split()[-1] == decl_name)
    )

    logger.debug(f"Wrapped fragment {fragment.labels or mutant_index} for {', '.join(exceptions)}")
    return RenderedFragment(
        decl_stmt=ordered[0] if decl_in_front else None,
        sink_stmts=ordered[1:] if decl_in_front else ordered,
        labels=list(fragment.labels),
        wrapped=True,
        declared_names=list(fragment.declared_names),
    )
