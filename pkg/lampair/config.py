"""Settings for lampair, read from lampair.toml or pyproject.toml"""

import logging
import os
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Any, Dict, Optional, Tuple

if sys.version_info >= (3, 11):
    from tomllib import load as _toml_load
else:
    from tomli import load as _toml_load


@dataclass(frozen=True)
class Settings:
    """Run-wide knobs.

    ``tolerance`` only applies to Cantor quadrature and mollifier checks;
    every other check is exact.
    """

    tolerance: float = 1e-9
    cantor_depth: int = 20
    jobs: int = 1
    out_dir: str = "reports"
    exact_sum_limit: int = 2000
    schedule: Tuple[int, ...] = field(default=(2, 4, 8, 16, 32, 64))

    def with_overrides(self, **overrides: Any) -> "Settings":
        """Return a copy with every non-None override applied."""
        values = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **values)


def _coerce(name: str, value: Any) -> Any:
    if name == "schedule":
        schedule = tuple(int(n) for n in value)
        if not schedule or any(n <= 0 for n in schedule):
            raise ValueError("schedule must list positive integers")
        return schedule
    if name == "tolerance":
        tolerance = float(value)
        if tolerance < 0:
            raise ValueError("tolerance must be non-negative")
        return tolerance
    if name in ("cantor_depth", "jobs", "exact_sum_limit"):
        number = int(value)
        if number <= 0:
            raise ValueError(f"{name} must be positive")
        return number
    return str(value)


def parse_settings_table(table: Dict[str, Any]) -> Settings:
    """Build Settings from a TOML table, ignoring unknown keys.

    Args:
        table: Mapping read from ``lampair.toml`` or ``[tool.lampair]``

    Returns:
        Settings with the table's values over the defaults

    Raises:
        ValueError: If a known key carries an invalid value
    """
    logger = logging.getLogger("lampair")
    known = {f.name for f in fields(Settings)}
    values: Dict[str, Any] = {}
    for key, value in table.items():
        name = key.replace("-", "_")
        if name not in known:
            logger.warning(f"Ignoring unknown setting: {key}")
            continue
        values[name] = _coerce(name, value)
    return Settings(**values)


def load_settings(config_path: Optional[str] = None) -> Settings:
    """Load settings from the first configuration file found.

    Precedence: explicit ``config_path``, ``./lampair.toml``, then the
    ``[tool.lampair]`` table of ``./pyproject.toml``.

    Args:
        config_path: Optional explicit TOML file

    Returns:
        Loaded settings, or defaults when no file applies

    Raises:
        FileNotFoundError: If ``config_path`` is given but missing
    """
    logger = logging.getLogger("lampair")

    if config_path is not None:
        if not os.path.exists(config_path):
            raise FileNotFoundError(f"Config file '{config_path}' not found.")
        with open(config_path, "rb") as f:
            data = _toml_load(f)
        logger.info(f"Using settings from: {config_path}")
        return parse_settings_table(data.get("tool", {}).get("lampair", data))

    if os.path.exists("lampair.toml"):
        with open("lampair.toml", "rb") as f:
            data = _toml_load(f)
        logger.info("Using settings from: lampair.toml")
        return parse_settings_table(data)

    if os.path.exists("pyproject.toml"):
        with open("pyproject.toml", "rb") as f:
            try:
                data = _toml_load(f)
            except Exception as e:
                logger.warning(f"Failed to read pyproject.toml: {e}")
                return Settings()
        table = data.get("tool", {}).get("lampair")
        if table:
            logger.info("Using settings from: pyproject.toml [tool.lampair]")
            return parse_settings_table(table)

    return Settings()
