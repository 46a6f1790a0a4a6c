"""
Exception hierarchy shared by every pipeline stage.
"""

from typing import Optional


class MutSeedError(Exception):
    """Base class for all mutseed failures."""

    exit_code: int = 1


# ===== CONFIGURATION =====

class ConfigError(MutSeedError):
    exit_code = 1


class MissingKey(ConfigError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Missing required setting '{name}'")


class BadOperatorType(ConfigError):
    def __init__(self, value: str):
        self.value = value
        super().__init__(f"Unknown operatorType '{value}'")


class MalformedLine(ConfigError):
    def __init__(self, line_no: int):
        self.line_no = line_no
        super().__init__(f"Malformed setting on line {line_no}: expected 'key: value'")


class InvalidConfig(ConfigError):
    pass


# ===== SOURCE MODEL =====

class SourceModelError(MutSeedError):
    pass


class PathNotFound(SourceModelError):
    def __init__(self, path: str, what: str = "path"):
        self.path = path
        super().__init__(f"{what} not found: {path}")


class NotADirectory(SourceModelError):
    def __init__(self, path: str):
        self.path = path
        super().__init__(f"Not a directory: {path}")


class ParseError(SourceModelError):
    def __init__(self, file: str, position: int):
        self.file = file
        self.position = position
        super().__init__(f"Syntax error in {file} at byte {position}")


# ===== OPERATORS =====

class UnknownExceptionName(MutSeedError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Not a plausible exception type name: '{name}'")


# ===== INJECTION AND FILTERING =====

class InjectionError(MutSeedError):
    exit_code = 3


class IoFailure(InjectionError):
    pass


class CompilerNotFound(InjectionError):
    def __init__(self, command: str):
        self.command = command
        super().__init__(f"Compiler executable not found: {command}")


class BaselineBroken(InjectionError):
    exit_code = 2

    def __init__(self, diagnostics: str):
        self.diagnostics = diagnostics
        super().__init__("Project does not compile without mutants:\n" + diagnostics)


class MalformedReport(InjectionError):
    exit_code = 1

    def __init__(self, line_no: int, line: Optional[str] = None):
        self.line_no = line_no
        self.line = line
        super().__init__(f"Executed-labels report line {line_no} is not a leak label: {line!r}")


# ===== ANALYSIS =====

class AnalysisInputError(MutSeedError):
    exit_code = 1


class UnreadableInput(AnalysisInputError):
    pass


class MalformedLog(AnalysisInputError):
    def __init__(self, line_no: int, line: str):
        self.line_no = line_no
        self.line = line
        super().__init__(f"Mutation log line {line_no} is not understood: {line!r}")


class StageFailed(MutSeedError):
    """A pipeline stage reported failure through its tool result."""

    def __init__(self, error_type: str, message: str, exit_code: int = 1):
        self.error_type = error_type
        self.exit_code = exit_code
        super().__init__(message)
