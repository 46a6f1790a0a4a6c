import shlex
import sys
from pathlib import Path
from typing import Callable, List, Optional

import pytest

from config.settings import default_operator
from core.models import OperatorTemplate, ProjectModel, SourceFile
from fixtures.manifest import FixtureManifest, fixture_layout
from tools.source_model_tool import discover_sources, model_project

FAKE_JAVAC = Path(__file__).resolve().parent / "fake_javac.py"


def fake_compiler_command(*options: str) -> str:
    """Compiler command template running the fake javac with extra options."""
    parts = [shlex.quote(sys.executable), shlex.quote(str(FAKE_JAVAC))]
    parts.extend(shlex.quote(option) for option in options)
    return " ".join(parts + ["-d", "{outdir}", "{sources}"])


@pytest.fixture(scope="session")
def manifest() -> FixtureManifest:
    return fixture_layout()


@pytest.fixture(scope="session")
def fixture_sources(manifest) -> List[SourceFile]:
    return discover_sources(manifest.app_src)


@pytest.fixture(scope="session")
def fixture_model(fixture_sources) -> ProjectModel:
    return model_project(fixture_sources)


@pytest.fixture(scope="session")
def template() -> OperatorTemplate:
    var_decl, source, sink = default_operator()
    return OperatorTemplate(var_decl_template=var_decl, source_template=source, sink_template=sink)


@pytest.fixture
def write_config(tmp_path, manifest) -> Callable[..., Path]:
    """Write a properties file for the fixture project and return its path."""

    def _write(operator_type: str, compiler_command: Optional[str] = None, *extra_lines: str) -> Path:
        lines = [
            f"lib4ast: {manifest.lib4ast}",
            f"appSrc: {manifest.app_src}",
            f"appName: {manifest.app_name}",
            f"output: {tmp_path / 'out'}",
            f"operatorType: {operator_type}",
        ]
        if compiler_command is not None:
            lines.append(f"compilerCmd: {compiler_command}")
        lines.extend(extra_lines)
        path = tmp_path / "configuration.properties"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    return _write
