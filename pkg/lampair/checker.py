"""Check registry and scenario execution for lampair"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

from .bv import PiecewiseBV, sup_norm, truncation_map
from .config import Settings
from .errors import ScenarioParseError
from .fields import DMField1D
from .parser import CheckSpec, RadialSpec, Scenario
from .radial import (
    RadialProfile,
    radial_gauss_green,
    verify_radial_divergence,
    verify_radial_pairing,
    verify_summability,
)
from .theorems import (
    CheckReport,
    as_tolerance,
    gauss_green,
    semicontinuity_experiment,
    verify_chain_rule,
    verify_coarea,
    verify_domination,
    verify_extremal,
    verify_leibniz,
    verify_mollification,
    verify_resto,
    verify_theta_slicing,
    verify_truncation_limit,
    verify_two_path,
)

Runner = Callable[[Scenario, CheckSpec, Settings], CheckReport]


@dataclass(frozen=True)
class RegisteredCheck:
    name: str
    anchor: str
    description: str
    runner: Runner


@dataclass
class ScenarioResult:
    scenario: Scenario
    reports: List[CheckReport]

    @property
    def passed(self) -> bool:
        return all(report.ok for report in self.reports)


def _tolerance(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> Fraction:
    for value in (check.tolerance, scenario.tolerance):
        if value is not None:
            return as_tolerance(value)
    return as_tolerance(settings.tolerance)


def _missing(scenario: Scenario, what: str) -> ScenarioParseError:
    return ScenarioParseError(f"the checks need {what}", scenario.path)


def _field(scenario: Scenario) -> DMField1D:
    if scenario.field is None:
        raise _missing(scenario, "a field")
    return scenario.field


def _function(scenario: Scenario) -> PiecewiseBV:
    if scenario.function is None:
        raise _missing(scenario, "a function")
    return scenario.function


def _second_function(scenario: Scenario) -> PiecewiseBV:
    if scenario.second_function is None:
        raise _missing(scenario, "a second function")
    return scenario.second_function


def _radial(scenario: Scenario) -> RadialSpec:
    if scenario.radial is None:
        raise _missing(scenario, "a radial section")
    return scenario.radial


def _radial_function(radial: RadialSpec) -> RadialProfile:
    if radial.function is None:
        raise ScenarioParseError("the checks need a radial function")
    return radial.function


def _run_pairing(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_two_path(
        _field(scenario),
        _function(scenario),
        scenario.selector,
        scenario.test_functions,
        _tolerance(scenario, check, settings),
    )


def _run_resto(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_resto(
        _field(scenario), _function(scenario), scenario.selector
    )


def _run_extremal(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_extremal(_field(scenario), _function(scenario))


def _run_domination(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_domination(
        _field(scenario), _function(scenario), scenario.selector
    )


def _run_coarea(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_coarea(
        _field(scenario),
        _function(scenario),
        scenario.selector,
        scenario.test_functions,
    )


def _run_theta_slicing(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_theta_slicing(
        _field(scenario),
        _function(scenario),
        scenario.selector,
        check.options.get("levels"),
    )


def _run_chain_rule(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    u = _function(scenario)
    level = check.options.get("truncation")
    if level is not None:
        h = truncation_map(level, max(sup_norm(u), level))
    else:
        h = check.options["map"]
    return verify_chain_rule(
        _field(scenario), u, scenario.selector, h, truncation_level=level
    )


def _run_leibniz(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_leibniz(
        _field(scenario),
        _function(scenario),
        _second_function(scenario),
        scenario.selector,
    )


def _run_gauss_green(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    c, d = check.options["set"]
    return gauss_green(
        _field(scenario), _function(scenario), scenario.selector, c, d
    )


def _run_semicontinuity(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    options = dict(check.options)
    schedule = options.pop("schedule", settings.schedule)
    return semicontinuity_experiment(
        _field(scenario),
        scenario.selector,
        _function(scenario),
        options.pop("kinds"),
        scenario.test_functions,
        schedule,
        expect_violations=options.pop("expect_violations"),
        strict=options.pop("strict"),
        **options,
    )


def _run_mollification(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_mollification(
        _field(scenario),
        scenario.test_functions,
        check.options["epsilon"],
        _tolerance(scenario, check, settings),
        check.options.get("max_steps", 40),
    )


def _run_truncation_limit(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_truncation_limit(
        _field(scenario),
        _function(scenario),
        scenario.selector,
        scenario.test_functions,
        check.options["levels"],
    )


def _run_radial_divergence(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    return verify_radial_divergence(_radial(scenario).field)


def _run_summability(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    radial = _radial(scenario)
    if radial.radius_rule is None:
        raise _missing(scenario, "a radius rule")
    return verify_summability(
        radial.field,
        _radial_function(radial),
        radial.radius_rule,
        check.options["threshold"],
        check.options.get("max_depth", 100_000),
        settings.exact_sum_limit,
    )


def _run_radial_pairing(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    radial = _radial(scenario)
    return verify_radial_pairing(
        radial.field, _radial_function(radial), radial.selector
    )


def _run_radial_gauss_green(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    radial = _radial(scenario)
    return radial_gauss_green(
        radial.field,
        _radial_function(radial),
        radial.selector,
        check.options["radius"],
    )


REGISTRY: Dict[str, RegisteredCheck] = {
    check.name: check
    for check in (
        RegisteredCheck(
            "pairing",
            "pairing by definition and by decomposition",
            "Definition route, decomposition route and distributional "
            "action agree",
            _run_pairing,
        ),
        RegisteredCheck(
            "resto",
            "selector dependence through jumps",
            "Pairings for two selectors differ only on the jump set; "
            "nonlinearity defect in closed form",
            _run_resto,
        ),
        RegisteredCheck(
            "extremal",
            "lower and upper semicontinuous selectors",
            "Extremal pairings equal the lattice min/max over selectors",
            _run_extremal,
        ),
        RegisteredCheck(
            "domination",
            "absolute continuity and density bound",
            "|pairing| <= |A|_inf |Du| on generator sets",
            _run_domination,
        ),
        RegisteredCheck(
            "coarea",
            "coarea formula",
            "Pairing equals the integral of level-set pairings",
            _run_coarea,
        ),
        RegisteredCheck(
            "theta_slicing",
            "coarea formula, density form",
            "Densities of level-set pairings match the density of u",
            _run_theta_slicing,
        ),
        RegisteredCheck(
            "chain_rule",
            "chain rule",
            "Pairing of h(u) against h'(u) and the jump quotient",
            _run_chain_rule,
        ),
        RegisteredCheck(
            "leibniz",
            "Leibniz formula",
            "Pairing of vA against traces of A and one-sided values of v",
            _run_leibniz,
        ),
        RegisteredCheck(
            "gauss_green",
            "Gauss-Green formulas",
            "Interior and closure balance on an interval",
            _run_gauss_green,
        ),
        RegisteredCheck(
            "semicontinuity",
            "semicontinuity under strict convergence",
            "Pairing against limits along approximating sequences",
            _run_semicontinuity,
        ),
        RegisteredCheck(
            "mollification",
            "approximation by smooth fields",
            "Mollified fields converge with halving errors",
            _run_mollification,
        ),
        RegisteredCheck(
            "truncation_limit",
            "truncation",
            "Pairings of truncations stabilise at the sup norm",
            _run_truncation_limit,
        ),
        RegisteredCheck(
            "radial_divergence",
            "radial fields",
            "Ring formula for Div A equals the reduced derivative",
            _run_radial_divergence,
        ),
        RegisteredCheck(
            "summability",
            "annulus example",
            "Partial sums over spheres: unbounded, bounded and controlled",
            _run_summability,
        ),
        RegisteredCheck(
            "radial_pairing",
            "radial fields",
            "Sphere pairing equals the reduced one-dimensional pairing",
            _run_radial_pairing,
        ),
        RegisteredCheck(
            "radial_gauss_green",
            "Gauss-Green formulas on balls",
            "Interior and closure balance on a centred ball",
            _run_radial_gauss_green,
        ),
    )
}

def list_checks() -> List[Tuple[str, str, str]]:
    """(name, anchor, description) for every registered check."""
    return [
        (check.name, check.anchor, check.description)
        for check in sorted(REGISTRY.values(), key=lambda c: c.name)
    ]


def _run_one(
    scenario: Scenario, check: CheckSpec, settings: Settings
) -> CheckReport:
    logger = logging.getLogger("lampair")
    logger.info(f"{scenario.name}: running {check.name}")
    report = REGISTRY[check.name].runner(scenario, check, settings)
    report.scenario = scenario.name
    report.expected_failure = check.expected_failure
    logger.info(f"{scenario.name}: {report.summary()}")
    return report


def execute_checks(scenario: Scenario, settings: Settings) -> ScenarioResult:
    """Run every check of a scenario.

    With ``settings.jobs`` above one the checks run on a thread pool;
    either way the reports come back ordered by check name, then by
    declaration order.

    Raises:
        LampairError: The first error a check raises
    """
    checks = list(scenario.checks)
    if settings.jobs > 1 and len(checks) > 1:
        with ThreadPoolExecutor(max_workers=settings.jobs) as pool:
            futures = [
                pool.submit(_run_one, scenario, check, settings)
                for check in checks
            ]
            reports = [future.result() for future in futures]
    else:
        reports = [_run_one(scenario, check, settings) for check in checks]
    ordered = sorted(
        zip(checks, reports), key=lambda pair: (pair[0].name, pair[0].index)
    )
    return ScenarioResult(scenario, [report for _, report in ordered])
