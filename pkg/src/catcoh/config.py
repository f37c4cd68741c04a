"""catcoh configuration"""
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from pydantic import Field, ValidationError, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict, SettingsError

from .errors import ConfigError, StateValidationError
from .models import EntropyUnit, OutputFormat
from .quantum.engine import ShiftConvention, TwoLevelUnitary

logger = logging.getLogger(__name__)

KEY_ALIASES = {"out": "output", "convention": "shift_convention"}


class RunConfig(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CATCOH_", extra="forbid")

    # Sweep grid
    L: List[int] = Field(default_factory=lambda: [16, 64, 256])
    k_max: int = 8
    l0: int = 0

    # Phases
    theta: float = 0.0
    phi: float = math.pi / 3

    # Interaction
    unitary: str = "hadamard"
    u00: Optional[str] = None
    u01: Optional[str] = None
    u10: Optional[str] = None
    u11: Optional[str] = None
    shift_convention: ShiftConvention = ShiftConvention.STANDARD

    # Thermodynamic accounting (k_B = 1)
    temperature: float = 1.0
    energy_spacing: float = 1.0
    entropy_unit: EntropyUnit = EntropyUnit.NATS

    # Output
    output: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV
    compare: bool = False

    # Execution
    parallel: int = 1
    log_level: str = "INFO"

    # Verification
    checks_closed_form: bool = False
    inject_fault: bool = False

    @field_validator("L", mode="before")
    @classmethod
    def _split_widths(cls, value):
        if isinstance(value, str):
            return [int(part) for part in value.split(",") if part.strip()]
        if isinstance(value, int):
            return [value]
        return value

    @field_validator("L")
    @classmethod
    def _check_widths(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("L list is empty")
        if any(width < 1 for width in value):
            raise ValueError(f"Every L must be >= 1, got {value}")
        return sorted(set(value))

    @field_validator("u00", "u01", "u10", "u11", mode="before")
    @classmethod
    def _stringify_entry(cls, value):
        return None if value is None else str(value).replace(" ", "")

    @field_validator("k_max")
    @classmethod
    def _check_k_max(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"k_max must be >= 0, got {value}")
        return value

    @field_validator("temperature")
    @classmethod
    def _check_temperature(cls, value: float) -> float:
        if value < 0:
            raise ValueError(f"temperature must be >= 0, got {value}")
        return value

    @field_validator("parallel")
    @classmethod
    def _check_parallel(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"parallel must be >= 1, got {value}")
        return value

    @field_validator("unitary")
    @classmethod
    def _check_unitary_name(cls, value: str) -> str:
        value = value.lower()
        if value not in ("hadamard", "custom"):
            raise ValueError(f"unitary must be 'hadamard' or 'custom', got {value!r}")
        return value

    @model_validator(mode="after")
    def _check_custom_unitary(self) -> "RunConfig":
        if self.unitary == "custom":
            entries = (self.u00, self.u01, self.u10, self.u11)
            if any(e is None for e in entries):
                raise ValueError("custom unitary needs u00, u01, u10 and u11")
            try:
                self.build_unitary()
            except StateValidationError as e:
                raise ValueError(str(e)) from e
        return self

    def build_unitary(self) -> TwoLevelUnitary:
        if self.unitary == "custom":
            try:
                entries = [complex(e) for e in (self.u00, self.u01, self.u10, self.u11)]
            except ValueError as e:
                raise StateValidationError(f"Unparseable unitary entry: {e}") from e
            return TwoLevelUnitary(*entries)
        return TwoLevelUnitary.hadamard()


def load_config_file(path: str) -> Dict[str, Any]:
    """Flat keys from a JSON or YAML file; flag spellings are accepted"""
    file_path = Path(path)
    try:
        text = file_path.read_text()
    except OSError as e:
        raise ConfigError(f"Cannot read config file {path}: {e}") from e
    try:
        if file_path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text) or {}
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigError(f"Cannot parse config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must hold a flat mapping")
    flat = {key.replace("-", "_"): value for key, value in data.items()}
    return {KEY_ALIASES.get(key, key): value for key, value in flat.items()}


def build_config(
    overrides: Optional[Dict[str, Any]] = None, config_path: Optional[str] = None
) -> RunConfig:
    """Defaults < environment < config file < flags"""
    values: Dict[str, Any] = {}
    if config_path:
        values.update(load_config_file(config_path))
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        config = RunConfig(**values)
    except (ValidationError, SettingsError) as e:
        raise ConfigError(str(e)) from e
    if config.unitary == "hadamard":
        logger.warning(
            "Matrix elements <psi_n|U|psi_n'> = 1/sqrt(2) for all n, n' admit no "
            "unitary; using Hadamard, which has the required first column"
        )
    if config.shift_convention == ShiftConvention.MIRRORED:
        logger.warning("Mirrored shift convention selected (sensitivity check)")
    return config
