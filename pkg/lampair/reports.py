"""Text, JSON and CSV reports for scenario runs"""

import csv
import json
import logging
import os
from typing import Any, Dict, List

from .checker import ScenarioResult
from .theorems import CheckReport

SCHEMA = 1


def report_payload(result: ScenarioResult) -> Dict[str, Any]:
    """Machine-readable report; contains nothing run-dependent."""
    scenario = result.scenario
    return {
        "schema": SCHEMA,
        "scenario": scenario.name,
        "description": scenario.description,
        "pass": result.passed,
        "checks": [report.to_dict() for report in result.reports],
    }


def canonical_json(value: Any) -> str:
    return json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False)


def render_text(result: ScenarioResult) -> str:
    scenario = result.scenario
    lines = [f"scenario: {scenario.name}"]
    if scenario.description:
        lines.append(f"  {scenario.description}")
    for report in result.reports:
        lines.append(f"  {report.summary()}")
        if not report.ok:
            for key, value in sorted(report.witnesses.items()):
                lines.append(f"      {key}: {value}")
    verdict = "PASS" if result.passed else "FAIL"
    lines.append(f"result: {verdict}")
    return "\n".join(lines) + "\n"


def _series_name(scenario: str, report: CheckReport, count: int) -> str:
    suffix = f"_{count}" if count else ""
    return f"{scenario}.{report.name}{suffix}.csv"


def write_series(path: str, rows: List[Dict[str, str]]) -> None:
    """CSV with a header row; columns in the order of the first row."""
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)


def write_reports(result: ScenarioResult, out_dir: str) -> List[str]:
    """Write ``<scenario>.txt``, ``<scenario>.json`` and one CSV per
    check that records a series.

    Args:
        result: Reports of one scenario
        out_dir: Output directory, created if missing

    Returns:
        Paths of the written files

    Raises:
        OSError: If a file cannot be written
    """
    logger = logging.getLogger("lampair")
    os.makedirs(out_dir, exist_ok=True)
    name = result.scenario.name
    written = []

    text_path = os.path.join(out_dir, f"{name}.txt")
    with open(text_path, "w", encoding="utf-8") as f:
        f.write(render_text(result))
    written.append(text_path)

    json_path = os.path.join(out_dir, f"{name}.json")
    with open(json_path, "w", encoding="utf-8") as f:
        f.write(canonical_json(report_payload(result)) + "\n")
    written.append(json_path)

    seen: Dict[str, int] = {}
    for report in result.reports:
        if not report.series:
            continue
        count = seen.get(report.name, 0)
        seen[report.name] = count + 1
        csv_path = os.path.join(out_dir, _series_name(name, report, count))
        write_series(csv_path, report.series)
        written.append(csv_path)

    for path in written:
        logger.info(f"Wrote report: {path}")
    return written
