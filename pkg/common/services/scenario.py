import json
import os
import tomllib
from typing import Optional

from pydantic import ValidationError

from common.app_config import config
from common.app_logger import get_logger
from common.helpers.exceptions import ConfigError
from common.models import ScenarioConfig

logger = get_logger(__name__)

_PARSERS = {
    '.toml': lambda raw: tomllib.loads(raw.decode(config.OUTPUT_ENCODING)),
    '.json': lambda raw: json.loads(raw.decode(config.OUTPUT_ENCODING)),
}


def describe_validation_error(exc: ValidationError) -> str:
    """One `dotted.path: reason` line per problem."""
    lines = []
    for error in exc.errors():
        path = '.'.join(str(part) for part in error['loc']) or '<root>'
        lines.append(f"{path}: {error['msg']}")
    return '\n'.join(lines)


def build_config(data: dict, seed: Optional[int] = None) -> ScenarioConfig:
    if seed is not None:
        data = {**data, 'seed': seed}
    try:
        return ScenarioConfig.model_validate(data)
    except ValidationError as exc:
        raise ConfigError(describe_validation_error(exc)) from exc


def load_config(path: str, seed: Optional[int] = None) -> ScenarioConfig:
    """Parse a TOML or JSON scenario file. `seed` overrides the file's seed."""
    extension = os.path.splitext(path)[1].lower()
    parser = _PARSERS.get(extension)
    if parser is None:
        raise ConfigError(f"{path}: unsupported scenario format '{extension}' (use .toml or .json)")

    try:
        with open(path, 'rb') as f:
            raw = f.read()
    except OSError as exc:
        raise ConfigError(f"{path}: cannot read scenario ({exc.strerror})") from exc
    try:
        data = parser(raw)
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a table of sections")

    scenario = build_config(data, seed)
    logger.info(f"Loaded scenario {path} (seed={scenario.seed}, mode={scenario.mode.value})")
    return scenario


def dump_config(scenario: ScenarioConfig) -> str:
    return scenario.model_dump_json(indent=2)


def write_reference(path: str) -> str:
    """Write the JSON schema of every scenario key plus a fully defaulted example."""
    reference = {
        'schema': ScenarioConfig.model_json_schema(),
        'defaults': json.loads(dump_config(ScenarioConfig(seed=0))),
    }
    with open(path, 'w', encoding=config.OUTPUT_ENCODING, newline='\n') as f:
        json.dump(reference, f, indent=2, sort_keys=True)
        f.write('\n')
    logger.info(f"Wrote scenario reference to {path}")
    return path
