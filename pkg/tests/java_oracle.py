"""
Token-scanning site counter, independent of the tree-sitter source model.

Tracks a stack of brace frames and classifies each ``{`` from the tokens
since the previous ``;``, ``{`` or ``}``.
"""

import re
from typing import Dict, List

_COMMENT = re.compile(r"//[^\n]*|/\*.*?\*/", re.S)
_LITERAL = re.compile(r'"(?:\\.|[^"\\])*"|\'(?:\\.|[^\'\\])*\'')
_TOKEN = re.compile(r"[A-Za-z_$][\w$]*|\S")
_OTHER_TYPES = {"interface", "enum", "record"}
_TYPE_NAME_TOKENS = re.compile(r"[A-Za-z_$][\w$]*|[.<>,?\[\]]")


def _classify(tokens: List[str], start: int, brace: int, frames: List[str], closing: Dict[int, int]) -> str:
    header = tokens[start:brace]
    enclosing = frames[-1] if frames else None

    for position, token in enumerate(header):
        if token == "class" and (position == 0 or header[position - 1] != "."):
            return "class"
    if any(token in _OTHER_TYPES for token in header):
        return "type"

    close = None
    if "throws" in header:
        close = start + header.index("throws") - 1
    elif header and header[-1] == ")":
        close = brace - 1
    if close is None or close not in closing:
        return "block"

    before = closing[close] - 1
    while before >= 0 and _TYPE_NAME_TOKENS.fullmatch(tokens[before]) and tokens[before] != "new":
        before -= 1
    if before >= 0 and tokens[before] == "new":
        return "anon"
    if enclosing in ("class", "anon"):
        return "method"
    return "block"


def count_sites(source: str) -> Dict[str, int]:
    """Counts of named classes, named-class method bodies and anonymous-class method bodies."""
    text = _LITERAL.sub('""', _COMMENT.sub(" ", source))
    tokens = _TOKEN.findall(text)
    counts = {"classes": 0, "methods": 0, "anon_methods": 0}

    frames: List[str] = []
    parens: List[int] = []
    closing: Dict[int, int] = {}
    header_start = 0
    for index, token in enumerate(tokens):
        if token == "(":
            parens.append(index)
        elif token == ")":
            closing[index] = parens.pop()
        elif token == ";":
            header_start = index + 1
        elif token == "{":
            kind = _classify(tokens, header_start, index, frames, closing)
            if kind == "class":
                counts["classes"] += 1
            elif kind == "method":
                counts["anon_methods" if frames[-1] == "anon" else "methods"] += 1
            frames.append(kind)
            header_start = index + 1
        elif token == "}":
            frames.pop()
            header_start = index + 1

    return counts
