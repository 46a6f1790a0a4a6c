"""
Java compiler process management: command templating, invocation and
diagnostics parsing.
"""

import logging
import os
import re
import shlex
import shutil
import subprocess
import tempfile
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel, Field

from core.errors import CompilerNotFound, IoFailure

logger = logging.getLogger(__name__)

DIAGNOSTIC_PATTERN = re.compile(r"^(?P<path>.+?\.java):(?P<line>\d+): error: (?P<message>.*)$")
_SUMMARY_LINE = re.compile(r"^\d+ errors?$|^\d+ warnings?$")


class Diagnostic(BaseModel):
    """One ``<path>:<line>: error:`` record plus the lines javac prints under it."""

    path: str
    line: int
    message: str
    details: List[str] = Field(default_factory=list)
    relative_path: Optional[str] = None

    @property
    def text(self) -> str:
        return "\n".join([f"{self.path}:{self.line}: error: {self.message}"] + self.details)


class CompilationResult(BaseModel):
    exit_code: int
    output: str
    diagnostics: List[Diagnostic] = Field(default_factory=list)

    @property
    def succeeded(self) -> bool:
        return self.exit_code == 0


def parse_diagnostics(output: str, root: Optional[Path] = None) -> List[Diagnostic]:
    """Error records in compiler output; paths are made relative to ``root`` when they lie beneath it."""
    diagnostics: List[Diagnostic] = []
    resolved_root = root.resolve() if root is not None else None

    for raw_line in output.splitlines():
        match = DIAGNOSTIC_PATTERN.match(raw_line)
        if match:
            relative_path = None
            if resolved_root is not None:
                candidate = Path(match["path"])
                if not candidate.is_absolute():
                    candidate = resolved_root / candidate
                try:
                    relative_path = candidate.resolve().relative_to(resolved_root).as_posix()
                except ValueError:
                    relative_path = None
            diagnostics.append(Diagnostic(
                path=match["path"],
                line=int(match["line"]),
                message=match["message"].strip(),
                relative_path=relative_path,
            ))
        elif diagnostics and raw_line.strip() and not _SUMMARY_LINE.match(raw_line.strip()):
            diagnostics[-1].details.append(raw_line)

    return diagnostics


class JavaCompiler:
    """Runs the configured compiler command over a project tree."""

    def __init__(self, command_template: str, classpath: str, sourcepath: str):
        self.command_template = command_template
        self.classpath = classpath
        self.sourcepath = sourcepath
        self.invocations = 0
        self._executable: Optional[str] = None

    def _resolve(self, argv: Sequence[str]) -> None:
        """Locate the compiler executable once."""
        if self._executable is not None:
            return
        if not argv:
            raise CompilerNotFound(self.command_template)
        located = shutil.which(argv[0])
        if located is None and not Path(argv[0]).is_file():
            raise CompilerNotFound(argv[0])
        self._executable = located or argv[0]
        logger.info(f"Using compiler {self._executable}")

    def build_command(self, sources: Sequence[str], outdir: str) -> List[str]:
        """
        Expand the command template into an argument vector.

        A token that is exactly ``{sources}`` becomes one argument per file;
        elsewhere the placeholder expands to the space-joined file list.
        """
        values = {
            "{classpath}": self.classpath,
            "{sourcepath}": self.sourcepath,
            "{outdir}": outdir,
        }
        argv: List[str] = []
        for token in shlex.split(self.command_template):
            if token == "{sources}":
                argv.extend(sources)
                continue
            for placeholder, value in values.items():
                token = token.replace(placeholder, value)
            argv.append(token.replace("{sources}", " ".join(sources)))
        return argv

    def compile(self, root: Path, relative_sources: Sequence[str]) -> CompilationResult:
        """Compile every listed source under ``root`` in a throwaway output directory."""
        sources = [str((root / relative).resolve()) for relative in relative_sources]

        with tempfile.TemporaryDirectory(prefix="mutseed-classes-") as outdir:
            argv = self.build_command(sources, outdir)
            self._resolve(argv)
            logger.debug(f"Compiler command: {' '.join(argv[:6])} ... ({len(sources)} sources)")
            try:
                completed = subprocess.run(
                    argv,
                    cwd=root,
                    capture_output=True,
                    text=True,
                    env=os.environ.copy(),
                )
            except FileNotFoundError:
                raise CompilerNotFound(argv[0])
            except OSError as e:
                raise IoFailure(f"Compiler invocation failed: {e}")

        self.invocations += 1
        output = (completed.stdout or "") + (completed.stderr or "")
        diagnostics = parse_diagnostics(output, root)
        logger.info(f"Compiler run {self.invocations}: exit {completed.returncode}, {len(diagnostics)} errors")
        return CompilationResult(exit_code=completed.returncode, output=output, diagnostics=diagnostics)
