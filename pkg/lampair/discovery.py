"""Scenario discovery for lampair - find scenario files automatically"""

import logging
from pathlib import Path
from typing import List, Optional

BUNDLED_DIR = Path(__file__).resolve().parent / "scenarios"

# earlier names of bundled scenarios
BUNDLED_ALIASES = {
    "strict_counterexample": "example_7_1",
    "weakstar_counterexample": "example_7_weakstar",
}


def bundled_scenarios() -> List[str]:
    """Paths of the scenario corpus shipped with the package."""
    return find_scenario_files(str(BUNDLED_DIR))


def bundled_scenario(name: str) -> Optional[Path]:
    """Path of the bundled scenario called ``name`` or one of its aliases."""
    candidate = BUNDLED_DIR / f"{BUNDLED_ALIASES.get(name, name)}.json"
    return candidate if candidate.is_file() else None


def find_scenario_files(path: Optional[str] = None) -> List[str]:
    """Resolve a CLI path argument to scenario files.

    Args:
        path: A scenario file, a directory of ``*.json`` files, the name
            of a bundled scenario, or None for the bundled corpus

    Returns:
        Sorted list of scenario file paths

    Raises:
        FileNotFoundError: If the path doesn't exist
    """
    logger = logging.getLogger("lampair")

    if path is None:
        logger.info(f"Using bundled scenarios from: {BUNDLED_DIR}")
        return bundled_scenarios()

    target = Path(path)
    if target.is_file():
        return [str(target)]
    if not target.is_dir():
        named = bundled_scenario(path)
        if named is not None:
            logger.info(f"Using bundled scenario: {named}")
            return [str(named)]
        logger.error(f"Scenario path not found: {path}")
        raise FileNotFoundError(f"Scenario path '{path}' not found.")

    found = sorted(str(p) for p in target.glob("*.json") if p.is_file())
    for file_path in found:
        logger.info(f"Found scenario file: {file_path}")
    if not found:
        logger.warning(f"No scenario files in: {path}")
    return found
