"""
Stand-in for javac used by the test suite.

Prints javac-style ``<path>:<line>: error: <message>`` records for lines
matching the configured rules and exits 1, or exits 0 when nothing matches.
"""

import argparse
import re
import sys


def _report(path, line_no, line, message):
    return [f"{path}:{line_no}: error: {message}", line.rstrip("\n"), "    ^"]


def _declarations(lines, name):
    pattern = re.compile(rf"\bString\s+{re.escape(name)}\s*[;=),]")
    return [line_no for line_no, line in enumerate(lines, start=1) if pattern.search(line)]


def _misplaced_super_calls(lines):
    """Explicit constructor calls not directly after the constructor's opening brace."""
    previous = ""
    for line_no, line in enumerate(lines, start=1):
        if re.match(r"\s*(super|this)\(", line) and not previous.endswith("{"):
            yield line_no
        if line.strip():
            previous = line.strip()


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--reject", action="append", default=[], help="regex; matching lines are errors")
    parser.add_argument("--reject-label", action="append", default=[], help="leak label whose sink line is an error")
    parser.add_argument("--duplicate", action="append", default=[],
                        help="name; a second String declaration of it is reported at the later one")
    parser.add_argument("--super-first", action="store_true",
                        help="report super(...)/this(...) calls preceded by other statements")
    args, rest = parser.parse_known_args()
    sources = [arg for arg in rest if arg.endswith(".java")]

    patterns = [re.compile(p) for p in args.reject] + [re.compile(re.escape(f'"{label}"')) for label in args.reject_label]
    output = []
    errors = 0
    for path in sources:
        with open(path, encoding="utf-8") as handle:
            lines = handle.readlines()
        for line_no, line in enumerate(lines, start=1):
            if any(pattern.search(line) for pattern in patterns):
                output.extend(_report(path, line_no, line, "illegal start of type"))
                errors += 1
        for name in args.duplicate:
            for line_no in _declarations(lines, name)[1:]:
                output.extend(_report(path, line_no, lines[line_no - 1], f"variable {name} is already defined"))
                errors += 1
        if args.super_first:
            for line_no in _misplaced_super_calls(lines):
                message = "call to super must be first statement in constructor"
                output.extend(_report(path, line_no, lines[line_no - 1], message))
                errors += 1

    if errors:
        output.append(f"{errors} error" + ("s" if errors > 1 else ""))
        print("\n".join(output), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
