#!/usr/bin/env python3
"""
Config Loader - Loads JSON data files and validates them against their schemas
Schemas live in config/schemas/ and are named "<stem>.schema.json"
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Tuple, Union

from jsonschema import Draft7Validator

from src.errors import SchemaError

logger = logging.getLogger(__name__)

PROJECT_ROOT = Path(__file__).resolve().parents[2]
CONFIG_DIR = PROJECT_ROOT / "config"
SCHEMA_DIR = CONFIG_DIR / "schemas"
SCENARIO_DIR = PROJECT_ROOT / "scenarios"

PSEUDONYM_KEY_ENV = "GOVCTL_PSEUDONYM_KEY"


class ConfigLoader:
    """Reads JSON documents from disk or text and checks them against a named schema"""

    def __init__(self, schema_dir: Union[str, Path] = SCHEMA_DIR):
        self.schema_dir = Path(schema_dir)
        self._schemas: Dict[str, Draft7Validator] = {}

    def _validator(self, schema_name: str) -> Draft7Validator:
        if schema_name not in self._schemas:
            schema_path = self.schema_dir / f"{schema_name}.schema.json"
            try:
                with open(schema_path, 'r', encoding='utf-8') as f:
                    schema = json.load(f)
            except FileNotFoundError:
                raise SchemaError(f"No schema named {schema_name} in {self.schema_dir}") from None
            self._schemas[schema_name] = Draft7Validator(schema)
        return self._schemas[schema_name]

    def parse(self, source: Union[str, bytes, Dict[str, Any]], schema_name: str) -> Dict[str, Any]:
        """Parse text (or accept an already-decoded document) and validate it"""
        if isinstance(source, dict):
            document = source
        else:
            try:
                document = json.loads(source)
            except json.JSONDecodeError as e:
                raise SchemaError(f"{schema_name}: not valid JSON ({e.msg} at line {e.lineno})") from e

        errors = sorted(self._validator(schema_name).iter_errors(document),
                        key=lambda e: (list(map(str, e.path)), e.message))
        if errors:
            first = errors[0]
            location = "/".join(str(p) for p in first.path) or "<root>"
            raise SchemaError(f"{schema_name}: {location}: {first.message}")
        return document

    def load(self, path: Union[str, Path], schema_name: str) -> Dict[str, Any]:
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except FileNotFoundError:
            raise SchemaError(f"File not found: {path}") from None
        logger.debug("Loading %s against schema %s", path, schema_name)
        return self.parse(text, schema_name)


@dataclass(frozen=True)
class EngineConfig:
    """Tunables of the governance engine, all in simulated minutes unless noted"""
    correlation_window: int = 30
    consecutive_breach_k: int = 1
    fairness_threshold: float = 2.0
    fairness_window: int = 30
    closure_window: int = 30
    human_review_sla: int = 15
    retention: Dict[str, int] = field(default_factory=lambda: {
        "enforcement": 90 * 1440,
        "telemetry": 7 * 1440,
        "declaration": 365 * 1440,
        "default": 180 * 1440,
    })
    pseudonym_key: str = "govctl-default-key"
    languages: Tuple[str, ...] = ("en", "ar")
    review_path: str = "Joint review panel of the authorities named in the causal chain"
    remedy: str = "Suspension of the penalty pending review"
    governance_owners: Tuple[str, ...] = ("orchestration", "city")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EngineConfig":
        known = {f.name for f in fields(cls)}
        values = {k: v for k, v in data.items() if k in known}
        for key in ("languages", "governance_owners"):
            if key in values:
                values[key] = tuple(values[key])
        if "retention" in values:
            values["retention"] = {**cls().retention, **values["retention"]}
        config = cls(**values)
        env_key = os.environ.get(PSEUDONYM_KEY_ENV)
        if env_key:
            config = replace(config, pseudonym_key=env_key)
        return config

    def with_overrides(self, overrides: Optional[Dict[str, Any]]) -> "EngineConfig":
        if not overrides:
            return self
        values = {k: v for k, v in overrides.items() if k in {f.name for f in fields(self)}}
        if "retention" in values:
            values["retention"] = {**self.retention, **values["retention"]}
        for key in ("languages", "governance_owners"):
            if key in values:
                values[key] = tuple(values[key])
        return replace(self, **values)

    def retention_for(self, event_class: str) -> int:
        return self.retention.get(event_class, self.retention["default"])


def load_engine_config(path: Union[str, Path, None] = None,
                       loader: Optional[ConfigLoader] = None) -> EngineConfig:
    loader = loader or ConfigLoader()
    path = Path(path) if path else CONFIG_DIR / "engine_config.json"
    return EngineConfig.from_dict(loader.load(path, "engine_config"))


def shipped_path(name: str) -> Path:
    """Path of a file shipped under config/"""
    return CONFIG_DIR / name