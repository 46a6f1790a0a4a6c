"""
Configuration settings for mutseed: the properties-file run configuration.
"""

import logging
import os
import re
from pathlib import Path
from typing import Dict, List, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from config.schemas import (
    DEFAULT_LIFECYCLE_ORDER,
    DEFAULT_SINK,
    DEFAULT_SOURCE,
    DEFAULT_VAR_DECL,
    LABEL_PLACEHOLDER,
    OPTIONAL_KEYS,
    PLACEHOLDER,
    REQUIRED_KEYS,
    THROWS_KEY_PREFIX,
    OperatorType,
)
from core.errors import BadOperatorType, InvalidConfig, MalformedLine, MissingKey, PathNotFound
from core.models import OperatorTemplate

logger = logging.getLogger(__name__)

_VAR_DECL_SHAPE = re.compile(r"^[\w$.<>\[\], ]+\s+[A-Za-z_$][\w$]*##[\w$]*$")


def default_operator() -> Tuple[str, str, str]:
    """The Calendar-to-Log operator: (var decl, source, sink) templates."""
    return DEFAULT_VAR_DECL, DEFAULT_SOURCE, DEFAULT_SINK


def default_compiler_command() -> str:
    """System Java compiler, located through JAVA_HOME when it is declared."""
    java_home = os.environ.get("JAVA_HOME")
    javac = str(Path(java_home) / "bin" / "javac") if java_home else "javac"
    return (
        f'"{javac}" -proc:none -nowarn -encoding UTF-8 -d {{outdir}} '
        f"-cp {{classpath}} -sourcepath {{sourcepath}} {{sources}}"
    )


class Configuration(BaseModel):
    model_config = ConfigDict(frozen=True)

    lib4ast_path: Path
    app_src_path: Path
    app_name: str
    output_path: Path
    operator_type: OperatorType
    var_decl_template: str = DEFAULT_VAR_DECL
    source_template: str = DEFAULT_SOURCE
    sink_template: str = DEFAULT_SINK
    api_exceptions: Dict[str, List[str]] = Field(default_factory=dict)
    lifecycle_order: List[str] = Field(default_factory=lambda: list(DEFAULT_LIFECYCLE_ORDER))
    compiler_command: str = Field(default_factory=default_compiler_command)
    warnings: List[str] = Field(default_factory=list, exclude=True)

    @property
    def operator_template(self) -> OperatorTemplate:
        return OperatorTemplate(
            var_decl_template=self.var_decl_template,
            source_template=self.source_template,
            sink_template=self.sink_template,
            api_exceptions=self.api_exceptions,
        )

    def classpath_entries(self) -> List[Path]:
        """lib4ast itself followed by every archive beneath it."""
        root = self.lib4ast_path
        archives = sorted(root.rglob("*.jar")) if root.is_dir() else []
        return [root] + archives

    @property
    def classpath(self) -> str:
        return os.pathsep.join(str(entry) for entry in self.classpath_entries())

    @property
    def log_path(self) -> Path:
        return self.output_path / f"{self.app_name}.mutations.log"

    @property
    def mutated_root(self) -> Path:
        return self.output_path / self.app_name


def _parse_operator_type(value: str) -> OperatorType:
    normalized = value.strip().upper().replace("-", "").replace("_", "")
    try:
        return OperatorType(normalized)
    except ValueError:
        raise BadOperatorType(value)


def _validate_templates(var_decl: str, source: str, sink: str) -> None:
    """Only customised templates are checked; the defaults are known good."""
    if var_decl != DEFAULT_VAR_DECL and not _VAR_DECL_SHAPE.match(var_decl):
        raise InvalidConfig(f"varDec must look like '<Type> <name##>': {var_decl!r}")
    if source != DEFAULT_SOURCE and PLACEHOLDER not in source:
        raise InvalidConfig(f"source must contain a '##' placeholder: {source!r}")
    if sink != DEFAULT_SINK:
        if LABEL_PLACEHOLDER not in sink:
            raise InvalidConfig(f"sink must carry the label literal 'leak-##': {sink!r}")
    name_template = var_decl.rsplit(None, 1)[-1]
    if name_template not in sink.replace(LABEL_PLACEHOLDER, ""):
        raise InvalidConfig(f"sink must consume the declared variable '{name_template}'")


def _parse_lifecycle(value: str) -> List[str]:
    names = [name.strip() for name in value.split(",") if name.strip()]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise InvalidConfig(f"lifecycle lists callbacks more than once: {', '.join(duplicates)}")
    return names


def _is_known_key(key: str) -> bool:
    return key in REQUIRED_KEYS or key in OPTIONAL_KEYS or (
        key.startswith(THROWS_KEY_PREFIX) and len(key) > len(THROWS_KEY_PREFIX)
    )


def parse_config(text: Union[str, bytes]) -> Configuration:
    """
    Parse a line-oriented ``key: value`` properties document.

    Lines starting with ``//`` and blank lines are ignored. Unknown and
    duplicate keys are recorded in ``Configuration.warnings``.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")

    settings: Dict[str, str] = {}
    warnings: List[str] = []

    for line_no, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.strip()
        if not line or line.startswith("//"):
            continue

        key, separator, value = line.partition(":")
        key = key.strip()
        if not separator or not key:
            raise MalformedLine(line_no)

        if key in settings:
            warnings.append(f"Duplicate key '{key}' on line {line_no}, last occurrence wins")
        elif not _is_known_key(key):
            warnings.append(f"Unrecognized key '{key}' on line {line_no}")
        settings[key] = value.strip()

    for name in REQUIRED_KEYS:
        if not settings.get(name):
            raise MissingKey(name)

    lib4ast_path = Path(settings["lib4ast"])
    app_src_path = Path(settings["appSrc"])
    output_path = Path(settings["output"])
    if app_src_path.absolute() == output_path.absolute():
        raise InvalidConfig("appSrc and output must be different directories")

    var_decl = settings.get("varDec") or DEFAULT_VAR_DECL
    source = settings.get("source") or DEFAULT_SOURCE
    sink = settings.get("sink") or DEFAULT_SINK
    _validate_templates(var_decl, source, sink)

    api_exceptions: Dict[str, List[str]] = {}
    for key, value in settings.items():
        if key.startswith(THROWS_KEY_PREFIX) and len(key) > len(THROWS_KEY_PREFIX):
            api_exceptions[key[len(THROWS_KEY_PREFIX):]] = [
                name.strip() for name in value.split(",") if name.strip()
            ]

    lifecycle = _parse_lifecycle(settings["lifecycle"]) if "lifecycle" in settings else list(DEFAULT_LIFECYCLE_ORDER)

    compiler_command = settings.get("compilerCmd") or default_compiler_command()
    if "{sources}" not in compiler_command:
        raise InvalidConfig("compilerCmd must contain the {sources} placeholder")

    for warning in warnings:
        logger.warning(warning)

    return Configuration(
        lib4ast_path=lib4ast_path,
        app_src_path=app_src_path,
        app_name=settings["appName"],
        output_path=output_path,
        operator_type=_parse_operator_type(settings["operatorType"]),
        var_decl_template=var_decl,
        source_template=source,
        sink_template=sink,
        api_exceptions=api_exceptions,
        lifecycle_order=lifecycle,
        compiler_command=compiler_command,
        warnings=warnings,
    )


def serialize_config(config: Configuration) -> str:
    """Render a Configuration back to properties text, omitting default optional keys."""
    lines = [
        f"lib4ast: {config.lib4ast_path}",
        f"appSrc: {config.app_src_path}",
        f"appName: {config.app_name}",
        f"output: {config.output_path}",
        f"operatorType: {config.operator_type.value}",
    ]
    if config.var_decl_template != DEFAULT_VAR_DECL:
        lines.append(f"varDec: {config.var_decl_template}")
    if config.source_template != DEFAULT_SOURCE:
        lines.append(f"source: {config.source_template}")
    if config.sink_template != DEFAULT_SINK:
        lines.append(f"sink: {config.sink_template}")
    for fqn, exceptions in config.api_exceptions.items():
        lines.append(f"{THROWS_KEY_PREFIX}{fqn}: {', '.join(exceptions)}")
    if config.lifecycle_order != DEFAULT_LIFECYCLE_ORDER:
        lines.append(f"lifecycle: {', '.join(config.lifecycle_order)}")
    if config.compiler_command != default_compiler_command():
        lines.append(f"compilerCmd: {config.compiler_command}")
    return "\n".join(lines) + "\n"


def load_config(path: Union[str, Path]) -> Configuration:
    config_path = Path(path)
    if not config_path.is_file():
        raise PathNotFound(str(config_path), "configuration file")
    try:
        data = config_path.read_bytes()
    except OSError as e:
        raise InvalidConfig(f"Cannot read configuration file {config_path}: {e}")
    logger.info(f"Loaded configuration from {config_path}")
    return parse_config(data)
