"""Evaluation configuration: defaults, config files and flag overrides."""
from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

import voluptuous as vol

from .const import (
    CONF_J,
    CONF_K,
    CONF_MAX_ITER,
    CONF_MAX_SEGMENTS,
    CONF_PHASE_STEP,
    CONF_POWER_THRESHOLD,
    CONF_T,
    CONF_TOL,
    CONF_WINDOW_HI,
    CONF_WINDOW_LO,
    CONF_WINDOW_POINTS,
    DEFAULT_J,
    DEFAULT_K,
    DEFAULT_MAX_ITER,
    DEFAULT_MAX_SEGMENTS,
    DEFAULT_PHASE_STEP,
    DEFAULT_POWER_THRESHOLD,
    DEFAULT_T,
    DEFAULT_TOL,
    DEFAULT_WINDOW_HI,
    DEFAULT_WINDOW_LO,
    DEFAULT_WINDOW_POINTS,
    ENV_THREADS,
    MIN_TOL,
)
from .exceptions import ConfigError

_LOGGER = logging.getLogger(__name__)

CONFIG_SCHEMA = vol.Schema(
    {
        vol.Optional(CONF_K, default=DEFAULT_K): vol.All(
            vol.Coerce(int), vol.Range(min=1, max=500)
        ),
        vol.Optional(CONF_T, default=DEFAULT_T): vol.All(
            vol.Coerce(int), vol.Range(min=1, max=500)
        ),
        vol.Optional(CONF_J, default=DEFAULT_J): vol.All(
            vol.Coerce(int), vol.Range(min=1, max=5000)
        ),
        vol.Optional(CONF_TOL, default=DEFAULT_TOL): vol.All(
            vol.Coerce(float), vol.Range(min=MIN_TOL, max=1, max_included=False)
        ),
        vol.Optional(CONF_WINDOW_LO, default=DEFAULT_WINDOW_LO): vol.All(
            vol.Coerce(float), vol.Range(min=0, min_included=False)
        ),
        vol.Optional(CONF_WINDOW_HI, default=DEFAULT_WINDOW_HI): vol.All(
            vol.Coerce(float), vol.Range(min=0, min_included=False)
        ),
        vol.Optional(CONF_WINDOW_POINTS, default=DEFAULT_WINDOW_POINTS): vol.All(
            vol.Coerce(int), vol.Range(min=2)
        ),
        vol.Optional(CONF_PHASE_STEP, default=DEFAULT_PHASE_STEP): vol.All(
            vol.Coerce(float), vol.Range(min=0, min_included=False)
        ),
        vol.Optional(CONF_MAX_SEGMENTS, default=DEFAULT_MAX_SEGMENTS): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
        vol.Optional(CONF_POWER_THRESHOLD, default=DEFAULT_POWER_THRESHOLD): vol.All(
            vol.Coerce(float), vol.Range(min=0, min_included=False)
        ),
        vol.Optional(CONF_MAX_ITER, default=DEFAULT_MAX_ITER): vol.All(
            vol.Coerce(int), vol.Range(min=1)
        ),
    },
    extra=vol.PREVENT_EXTRA,
)


@dataclass(frozen=True)
class EvalConfig:
    """Knobs shared by every evaluation route."""

    K: int = DEFAULT_K
    T: int = DEFAULT_T
    J: int = DEFAULT_J
    tol: float = DEFAULT_TOL
    window_lo: float = DEFAULT_WINDOW_LO
    window_hi: float = DEFAULT_WINDOW_HI
    window_points: int = DEFAULT_WINDOW_POINTS
    phase_step: float = DEFAULT_PHASE_STEP
    max_segments: int = DEFAULT_MAX_SEGMENTS
    power_threshold: float = DEFAULT_POWER_THRESHOLD
    max_iter: int = DEFAULT_MAX_ITER

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any]) -> EvalConfig:
        """Validate ``data`` and fill in defaults.

        Raises:
            ConfigError: Unknown key, wrong type or out-of-range value
        """
        try:
            validated = CONFIG_SCHEMA(dict(data))
        except vol.Invalid as err:
            raise ConfigError(f"Invalid configuration: {err}") from err
        if validated[CONF_WINDOW_HI] <= validated[CONF_WINDOW_LO]:
            raise ConfigError(
                f"{CONF_WINDOW_HI} ({validated[CONF_WINDOW_HI]}) must exceed "
                f"{CONF_WINDOW_LO} ({validated[CONF_WINDOW_LO]})"
            )
        return cls(**validated)

    def as_dict(self) -> Dict[str, Any]:
        """Plain mapping of every field."""
        return dataclasses.asdict(self)

    def replace(self, **changes: Any) -> EvalConfig:
        """Return a validated copy with ``changes`` applied."""
        data = self.as_dict()
        data.update(changes)
        return EvalConfig.from_mapping(data)


def load_config_file(path: Union[str, Path]) -> Dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment.

    Values are returned as text and typed by the schema later.

    Raises:
        ConfigError: Unreadable file, malformed line or unknown key
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as err:
        raise ConfigError(f"Cannot read config file {path}: {err}") from err

    known = {str(key.schema) for key in CONFIG_SCHEMA.schema}
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected 'key = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in known:
            raise ConfigError(f"{path}:{number}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{path}:{number}: missing value for {key!r}")
        values[key] = value

    _LOGGER.debug("Loaded %d config values from %s", len(values), path)
    return values


def resolve_config(
    flags: Optional[Mapping[str, Any]] = None,
    path: Optional[Union[str, Path]] = None,
) -> EvalConfig:
    """Merge defaults, an optional config file and flags (in that order).

    Flags whose value is None are treated as not given.
    """
    data: Dict[str, Any] = {}
    if path is not None:
        data.update(load_config_file(path))
    if flags:
        data.update({key: value for key, value in flags.items() if value is not None})
    return EvalConfig.from_mapping(data)


def thread_limit() -> int:
    """Worker cap from OSCINT_THREADS, defaulting to the CPU count.

    Raises:
        ConfigError: The variable is set but not a positive integer
    """
    raw = os.environ.get(ENV_THREADS)
    if raw is None or not raw.strip():
        return os.cpu_count() or 1
    try:
        value = int(raw)
    except ValueError as err:
        raise ConfigError(f"{ENV_THREADS} must be an integer, got {raw!r}") from err
    if value < 1:
        raise ConfigError(f"{ENV_THREADS} must be positive, got {value}")
    return value
