"""
Configuration loading with pydantic validation

Config files are YAML (JSON is a subset and goes through the same loader).
Validation errors are reported against the source file with line numbers
taken from the YAML node marks, so a bad field reads as
``fig2_efficient.yaml:14: pulse_train.t0: Input should be greater than 0``.
"""
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Type, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from .errors import ConfigError
from .logging_config import get_logger

logger = get_logger(__name__)

CONFIG_DIR_ENV = "AFCMEM_CONFIG_DIR"

ModelT = TypeVar("ModelT", bound=BaseModel)

Loc = Tuple[Any, ...]


def config_dir() -> Path:
    """Default configuration directory (``config/`` next to main.py)"""
    override = os.environ.get(CONFIG_DIR_ENV)
    if override:
        return Path(override).expanduser()
    return Path(__file__).resolve().parents[2] / "config"


class ConfigDocument:
    """
    Parsed config file plus the source line of every node.

    ``lines`` maps a key path such as ``("pump_target", "windows", 0)`` to
    the 1-based line where that value starts.
    """

    def __init__(self, data: Dict[str, Any], lines: Dict[Loc, int], source: str):
        self.data = data
        self.lines = lines
        self.source = source

    def line_for(self, loc: Loc) -> Optional[int]:
        """Line of the deepest node along ``loc`` that exists in the file"""
        loc = tuple(loc)
        while loc:
            if loc in self.lines:
                return self.lines[loc]
            loc = loc[:-1]
        return self.lines.get((), None)

    def section(self, key: str) -> Dict[str, Any]:
        value = self.data.get(key)
        return value if isinstance(value, dict) else {}


def _collect_lines(node: yaml.Node, path: Loc, lines: Dict[Loc, int]):
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            key = key_node.value
            _collect_lines(value_node, path + (key,), lines)
            # Report the key's line, not where a nested block starts
            lines[path + (key,)] = key_node.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for index, item in enumerate(node.value):
            _collect_lines(item, path + (index,), lines)


def parse_document(text: str, source: str = "<string>") -> ConfigDocument:
    """Parse YAML/JSON text into a ConfigDocument"""
    try:
        data = yaml.safe_load(text)
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"{source}:{mark.line + 1}" if mark is not None else source
        raise ConfigError([f"{where}: {getattr(e, 'problem', None) or e}"], source)

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError([f"{source}:1: top level must be a mapping"], source)

    lines: Dict[Loc, int] = {}
    if node is not None:
        _collect_lines(node, (), lines)
    return ConfigDocument(data, lines, source)


def load_document(path: Path) -> ConfigDocument:
    """Read and parse a config file"""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError([f"{path}: cannot read config: {e.strerror or e}"], str(path))
    logger.debug(f"Loaded config {path}")
    return parse_document(text, source=path.name)


def format_validation_error(error: ValidationError, document: ConfigDocument,
                            prefix: Loc = ()) -> List[str]:
    """Turn a pydantic ValidationError into ``file:line: field: message`` lines"""
    problems = []
    for item in error.errors():
        loc = tuple(prefix) + tuple(item.get("loc", ()))
        line = document.line_for(loc)
        field = ".".join(str(part) for part in loc) or "<root>"
        where = f"{document.source}:{line}" if line is not None else document.source
        problems.append(f"{where}: {field}: {item.get('msg', 'invalid value')}")
    return problems


def validate_model(model: Type[ModelT], data: Any, document: ConfigDocument,
                   prefix: Loc = ()) -> ModelT:
    """
    Validate ``data`` against a pydantic model.

    Args:
        model: Model class
        data: Raw value taken from the document
        document: Document the value came from (for line numbers)
        prefix: Key path of ``data`` inside the document

    Returns:
        Validated model instance

    Raises:
        ConfigError: with one line per validation problem
    """
    try:
        return model.model_validate(data if data is not None else {})
    except ValidationError as e:
        raise ConfigError(format_validation_error(e, document, prefix), document.source)


def resolve_named(kind: str, name: str) -> ConfigDocument:
    """
    Load a named sub-config such as ``ions/tm_yag``.

    Args:
        kind: Sub-directory of the config directory (e.g. ``ions``)
        name: File stem

    Returns:
        Parsed document
    """
    base = config_dir() / kind
    for suffix in (".yaml", ".yml", ".json"):
        candidate = base / f"{name}{suffix}"
        if candidate.exists():
            return load_document(candidate)
    raise ConfigError([f"{kind}/{name}: no such config in {base}"], str(base))
