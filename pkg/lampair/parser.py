"""Scenario file parser for lampair

A scenario is a JSON object describing a domain, a field, a function, a
selector and the checks to run on them. Rationals are written as ints
or ``"p/q"`` strings; float literals are rejected everywhere except in
tolerances.
"""

import json
import logging
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .bv import LambdaSelector, PiecewiseBV
from .cantor import DEFAULT_DEPTH, CantorComponent
from .errors import ScenarioParseError
from .fields import DMField1D, lsc_selector, usc_selector
from .polynomials import PiecewisePoly
from .radial import RadialProfile, Rule
from .rationals import to_fraction

SEQUENCE_KINDS = ("upper", "lower", "negated_upper", "negated_lower", "spike")
INEQUALITIES = ("lsc", "usc")
# report file stems
SCENARIO_NAME = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_.-]*$")


class FloatLiteral(str):
    """A JSON number written with a fraction or an exponent."""


@dataclass(frozen=True)
class CheckSpec:
    name: str
    options: Dict[str, Any] = field(default_factory=dict)
    tolerance: Optional[float] = None
    expected_failure: bool = False
    index: int = 0


@dataclass(frozen=True)
class RadialSpec:
    field: RadialProfile
    function: Optional[RadialProfile]
    selector: LambdaSelector
    radius_rule: Optional[Rule]


@dataclass(frozen=True)
class Scenario:
    name: str
    path: str
    description: str = ""
    # declared before the ``field`` attribute, which shadows dataclasses.field
    selector: LambdaSelector = field(default_factory=LambdaSelector)
    sequence: Dict[str, Any] = field(default_factory=dict)
    domain: Optional[Tuple[Fraction, Fraction]] = None
    field: Optional[DMField1D] = None
    function: Optional[PiecewiseBV] = None
    second_function: Optional[PiecewiseBV] = None
    test_functions: Tuple[PiecewisePoly, ...] = ()
    checks: Tuple[CheckSpec, ...] = ()
    radial: Optional[RadialSpec] = None
    tolerance: Optional[float] = None


# primitive validators

def _rational(value: Any, label: str) -> Fraction:
    if isinstance(value, FloatLiteral):
        raise ScenarioParseError(
            f"float literal {value} not allowed, write it as a \"p/q\" string",
            label,
        )
    try:
        return to_fraction(value)
    except ValueError as e:
        raise ScenarioParseError(str(e), label) from None


def _rationals(value: Any, label: str) -> List[Fraction]:
    items = _list(value, label)
    return [_rational(item, f"{label}[{i}]") for i, item in enumerate(items)]


def _list(value: Any, label: str) -> list:
    if not isinstance(value, list):
        raise ScenarioParseError("must be a list", label)
    return value


def _object(value: Any, label: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        raise ScenarioParseError("must be an object", label)
    return value


def _string(value: Any, label: str) -> str:
    if isinstance(value, FloatLiteral) or not isinstance(value, str):
        raise ScenarioParseError("must be a string", label)
    return value


def _integer(value: Any, label: str, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioParseError("must be an integer", label)
    if value < minimum:
        raise ScenarioParseError(f"must be at least {minimum}", label)
    return value


def _boolean(value: Any, label: str) -> bool:
    if not isinstance(value, bool):
        raise ScenarioParseError("must be true or false", label)
    return value


def _tolerance(value: Any, label: str) -> float:
    if isinstance(value, bool):
        raise ScenarioParseError("must be a number", label)
    try:
        tolerance = float(value)
    except (TypeError, ValueError):
        raise ScenarioParseError("must be a number", label) from None
    if tolerance < 0:
        raise ScenarioParseError("must be non-negative", label)
    return tolerance


def _inside(x: Fraction, domain: Tuple[Fraction, Fraction], label: str) -> None:
    lower, upper = domain
    if not lower < x < upper:
        raise ScenarioParseError(
            f"{x} is not inside the domain ({lower}, {upper})", label
        )


def _unknown_keys(
    mapping: Dict[str, Any], allowed: Sequence[str], label: str
) -> None:
    for key in mapping:
        if key not in allowed:
            raise ScenarioParseError(f"unknown key {key!r}", label)


# functions and test functions

def _pieces(
    value: Any, domain: Tuple[Fraction, Fraction], label: str
) -> PiecewisePoly:
    pieces = []
    for i, piece in enumerate(_list(value, label)):
        where = f"{label}[{i}]"
        piece = _list(piece, where)
        if len(piece) != 3:
            raise ScenarioParseError("a piece is [lo, hi, [coefficients]]", where)
        lo = _rational(piece[0], f"{where}[0]")
        hi = _rational(piece[1], f"{where}[1]")
        coeffs = _rationals(piece[2], f"{where}[2]")
        pieces.append((lo, hi, coeffs))
    if not pieces:
        raise ScenarioParseError("at least one piece is required", label)
    try:
        poly = PiecewisePoly.from_pieces(pieces)
    except ValueError as e:
        raise ScenarioParseError(str(e), label) from None
    if poly.domain != domain:
        raise ScenarioParseError(
            f"pieces cover ({poly.lower}, {poly.upper}), the domain is "
            f"({domain[0]}, {domain[1]})",
            label,
        )
    return poly


def _polynomial_function(
    value: Any, domain: Tuple[Fraction, Fraction], label: str
) -> PiecewisePoly:
    """A coefficient list on the whole domain, or ``{"pieces": ...}``."""
    if isinstance(value, list):
        return PiecewisePoly.polynomial(*domain, _rationals(value, label))
    spec = _object(value, label)
    _unknown_keys(spec, ("pieces",), label)
    if "pieces" not in spec:
        raise ScenarioParseError("missing key 'pieces'", label)
    return _pieces(spec["pieces"], domain, f"{label}.pieces")


def _bv_function(
    value: Any,
    domain: Tuple[Fraction, Fraction],
    label: str,
    depth: int,
) -> PiecewiseBV:
    """``{"constant": c}``, ``{"indicator": [a, b], "value": v}`` or
    ``{"pieces": [...]}``, each with optional ``"cantor"`` staircases
    ``[a, b, mass]``."""
    spec = _object(value, label)
    _unknown_keys(
        spec, ("constant", "indicator", "value", "pieces", "cantor"), label
    )
    forms = [key for key in ("constant", "indicator", "pieces") if key in spec]
    if len(forms) != 1:
        raise ScenarioParseError(
            "give exactly one of 'constant', 'indicator', 'pieces'", label
        )
    form = forms[0]
    if form == "constant":
        smooth = PiecewisePoly.constant(
            *domain, _rational(spec["constant"], f"{label}.constant")
        )
    elif form == "indicator":
        a, b = _interval(spec["indicator"], domain, f"{label}.indicator")
        height = _rational(spec.get("value", 1), f"{label}.value")
        smooth = PiecewiseBV.indicator(*domain, a, b, height).smooth
    else:
        smooth = _pieces(spec["pieces"], domain, f"{label}.pieces")
    staircases = []
    for i, item in enumerate(_list(spec.get("cantor", []), f"{label}.cantor")):
        where = f"{label}.cantor[{i}]"
        values = _rationals(item, where)
        if len(values) != 3:
            raise ScenarioParseError("a staircase is [a, b, mass]", where)
        a, b, mass = values
        if not domain[0] <= a < b <= domain[1]:
            raise ScenarioParseError(f"[{a}, {b}] is outside the domain", where)
        staircases.append(CantorComponent(a, b, mass, depth))
    try:
        return PiecewiseBV(smooth, tuple(staircases))
    except ValueError as e:
        raise ScenarioParseError(str(e), label) from None


def _interval(
    value: Any, domain: Tuple[Fraction, Fraction], label: str
) -> Tuple[Fraction, Fraction]:
    bounds = _rationals(value, label)
    if len(bounds) != 2 or not bounds[0] < bounds[1]:
        raise ScenarioParseError("an interval is [a, b] with a < b", label)
    if bounds[0] < domain[0] or bounds[1] > domain[1]:
        raise ScenarioParseError("interval leaves the domain", label)
    return bounds[0], bounds[1]


def _selector(
    value: Any,
    field_: Optional[DMField1D],
    label: str,
    domain: Optional[Tuple[Fraction, Fraction]] = None,
) -> LambdaSelector:
    """``"precise"``, ``"lsc"``, ``"usc"``, a constant, or
    ``{"default": v, "at": {"x": v}}``."""
    if value is None or value == "precise":
        return LambdaSelector()
    if value in INEQUALITIES:
        if field_ is None:
            raise ScenarioParseError(
                f"selector {value!r} needs a one-dimensional field", label
            )
        return (lsc_selector if value == "lsc" else usc_selector)(field_)
    try:
        if isinstance(value, dict):
            _unknown_keys(value, ("default", "at"), label)
            default = _rational(value.get("default", "1/2"), f"{label}.default")
            overrides = {}
            for key, weight in _object(value.get("at", {}), f"{label}.at").items():
                x = _rational(key, f"{label}.at")
                if domain is not None:
                    _inside(x, domain, f"{label}.at")
                overrides[x] = _rational(weight, f"{label}.at[{key!r}]")
            return LambdaSelector.from_mapping(default, overrides)
        return LambdaSelector.constant(_rational(value, label))
    except ScenarioParseError:
        raise
    except ValueError as e:
        raise ScenarioParseError(str(e), label) from None


# radial profiles

def _rule(value: str, label: str) -> Rule:
    try:
        return Rule.parse(value)
    except ValueError as e:
        raise ScenarioParseError(str(e), label) from None


def _radial(
    value: Any, label: str
) -> RadialSpec:
    spec = _object(value, label)
    _unknown_keys(
        spec,
        ("dimension", "depth", "radii", "field", "function", "selector"),
        label,
    )
    dimension = _integer(spec.get("dimension"), f"{label}.dimension", 2)
    radius_rule = None
    radii_spec = spec.get("radii")
    if isinstance(radii_spec, str):
        radius_rule = _rule(radii_spec, f"{label}.radii")
        depth = _integer(spec.get("depth"), f"{label}.depth")
        radii = [radius_rule(j) for j in range(depth + 1)]
    else:
        radii = _rationals(radii_spec, f"{label}.radii")
        depth = len(radii) - 1
        if "depth" in spec and spec["depth"] != depth:
            raise ScenarioParseError(
                f"{len(radii)} radii give depth {depth}", f"{label}.depth"
            )

    def ring_values(entry: Any, where: str) -> List[Tuple[Fraction, ...]]:
        if isinstance(entry, str) and not isinstance(entry, FloatLiteral):
            rule = _rule(entry, where)
            return [(rule(j),) for j in range(1, depth + 2)]
        values = []
        for i, item in enumerate(_list(entry, where)):
            if isinstance(item, list):
                values.append(tuple(_rationals(item, f"{where}[{i}]")))
            else:
                values.append((_rational(item, f"{where}[{i}]"),))
        return values

    def profile(entry: Any, where: str) -> RadialProfile:
        try:
            return RadialProfile(dimension, radii, ring_values(entry, where))
        except ValueError as e:
            raise ScenarioParseError(str(e), where) from None

    if "field" not in spec:
        raise ScenarioParseError("missing key 'field'", label)
    field_ = profile(spec["field"], f"{label}.field")
    function = None
    if "function" in spec:
        function = profile(spec["function"], f"{label}.function")
    selector = _selector(
        spec.get("selector"), None, f"{label}.selector"
    )
    return RadialSpec(field_, function, selector, radius_rule)


# check options

def _no_options(options: Dict[str, Any], scenario: Dict[str, Any], label: str):
    return {}


def _theta_options(options, scenario, label):
    if "levels" not in options:
        return {}
    return {"levels": _rationals(options["levels"], f"{label}.levels")}


def _chain_options(options, scenario, label):
    """``{"truncation": k}`` or ``{"map": {"pieces": [...]}}``; a map's
    domain is read from its first and last piece."""
    forms = [key for key in ("map", "truncation") if key in options]
    if len(forms) != 1:
        raise ScenarioParseError("give exactly one of 'map', 'truncation'", label)
    if "truncation" in options:
        level = _rational(options["truncation"], f"{label}.truncation")
        if level <= 0:
            raise ScenarioParseError("must be positive", f"{label}.truncation")
        return {"truncation": level}
    where = f"{label}.map"
    spec = _object(options["map"], where)
    _unknown_keys(spec, ("pieces",), where)
    pieces = _list(spec.get("pieces"), f"{where}.pieces")
    if not pieces:
        raise ScenarioParseError("at least one piece is required", where)
    first = _list(pieces[0], f"{where}.pieces[0]")
    last = _list(pieces[-1], f"{where}.pieces[{len(pieces) - 1}]")
    if not first or len(last) < 2:
        raise ScenarioParseError("a piece is [lo, hi, [coefficients]]", where)
    domain = (
        _rational(first[0], f"{where}.pieces[0][0]"),
        _rational(last[1], f"{where}.pieces[{len(pieces) - 1}][1]"),
    )
    return {"map": _pieces(pieces, domain, f"{where}.pieces")}


def _gauss_green_options(options, scenario, label):
    if "set" not in options:
        raise ScenarioParseError("missing key 'set'", label)
    c, d = _interval(options["set"], scenario["domain"], f"{label}.set")
    _inside(c, scenario["domain"], f"{label}.set[0]")
    _inside(d, scenario["domain"], f"{label}.set[1]")
    return {"set": (c, d)}


def _sequence_options(options, scenario, label):
    merged = dict(scenario.get("sequence") or {})
    merged.update(options)
    where = label
    kinds = [
        _string(kind, f"{where}.kinds[{i}]")
        for i, kind in enumerate(_list(merged.get("kinds", ["upper"]),
                                       f"{where}.kinds"))
    ]
    for i, kind in enumerate(kinds):
        if kind not in SEQUENCE_KINDS:
            raise ScenarioParseError(
                f"unknown sequence kind {kind!r}", f"{where}.kinds[{i}]"
            )
    expected = [
        _string(name, f"{where}.expect_violations[{i}]")
        for i, name in enumerate(
            _list(merged.get("expect_violations", []),
                  f"{where}.expect_violations")
        )
    ]
    for i, name in enumerate(expected):
        if name not in INEQUALITIES:
            raise ScenarioParseError(
                f"expected 'lsc' or 'usc', got {name!r}",
                f"{where}.expect_violations[{i}]",
            )
    parsed: Dict[str, Any] = {
        "kinds": kinds,
        "expect_violations": expected,
        "strict": _boolean(merged.get("strict", True), f"{where}.strict"),
    }
    if "schedule" in merged:
        parsed["schedule"] = [
            _integer(n, f"{where}.schedule[{i}]")
            for i, n in enumerate(_list(merged["schedule"], f"{where}.schedule"))
        ]
    if "spike" in kinds:
        if "center" not in merged:
            raise ScenarioParseError("spike sequences need 'center'", where)
        center = _rational(merged["center"], f"{where}.center")
        _inside(center, scenario["domain"], f"{where}.center")
        parsed["center"] = center
        parsed["height"] = _rational(merged.get("height", 1), f"{where}.height")
    return parsed


def _mollification_options(options, scenario, label):
    if "epsilon" not in options:
        raise ScenarioParseError("missing key 'epsilon'", label)
    epsilon = _rational(options["epsilon"], f"{label}.epsilon")
    if epsilon <= 0:
        raise ScenarioParseError("must be positive", f"{label}.epsilon")
    parsed: Dict[str, Any] = {"epsilon": epsilon}
    if "max_steps" in options:
        parsed["max_steps"] = _integer(
            options["max_steps"], f"{label}.max_steps"
        )
    return parsed


def _truncation_options(options, scenario, label):
    if "levels" not in options:
        raise ScenarioParseError("missing key 'levels'", label)
    levels = _rationals(options["levels"], f"{label}.levels")
    if not levels or any(k <= 0 for k in levels):
        raise ScenarioParseError("levels must be positive", f"{label}.levels")
    return {"levels": levels}


def _summability_options(options, scenario, label):
    if "threshold" not in options:
        raise ScenarioParseError("missing key 'threshold'", label)
    parsed: Dict[str, Any] = {
        "threshold": _rational(options["threshold"], f"{label}.threshold")
    }
    if "max_depth" in options:
        parsed["max_depth"] = _integer(
            options["max_depth"], f"{label}.max_depth"
        )
    return parsed


def _radial_gauss_green_options(options, scenario, label):
    if "radius" not in options:
        raise ScenarioParseError("missing key 'radius'", label)
    radius = _rational(options["radius"], f"{label}.radius")
    _inside(radius, (Fraction(0), Fraction(1)), f"{label}.radius")
    return {"radius": radius}


OptionParser = Callable[[Dict[str, Any], Dict[str, Any], str], Dict[str, Any]]

# check name → (option keys, option parser, scenario parts it needs)
CHECK_GRAMMAR: Dict[str, Tuple[Tuple[str, ...], OptionParser, Tuple[str, ...]]] = {
    "pairing": ((), _no_options, ("field", "function", "test_functions")),
    "resto": ((), _no_options, ("field", "function")),
    "extremal": ((), _no_options, ("field", "function")),
    "domination": ((), _no_options, ("field", "function")),
    "coarea": ((), _no_options, ("field", "function", "test_functions")),
    "theta_slicing": (("levels",), _theta_options, ("field", "function")),
    "chain_rule": (("map", "truncation"), _chain_options, ("field", "function")),
    "leibniz": ((), _no_options, ("field", "function", "second_function")),
    "gauss_green": (("set",), _gauss_green_options, ("field", "function")),
    "semicontinuity": (
        ("kinds", "expect_violations", "strict", "schedule", "center", "height"),
        _sequence_options,
        ("field", "function", "test_functions"),
    ),
    "mollification": (
        ("epsilon", "max_steps"),
        _mollification_options,
        ("field", "test_functions"),
    ),
    "truncation_limit": (
        ("levels",),
        _truncation_options,
        ("field", "function", "test_functions"),
    ),
    "radial_divergence": ((), _no_options, ("radial",)),
    "summability": (
        ("threshold", "max_depth"),
        _summability_options,
        ("radial", "radial_function", "radius_rule"),
    ),
    "radial_pairing": ((), _no_options, ("radial", "radial_function")),
    "radial_gauss_green": (
        ("radius",),
        _radial_gauss_green_options,
        ("radial", "radial_function"),
    ),
}


def _present(parts: Dict[str, Any], need: str) -> bool:
    if need == "radial_function":
        return parts["radial"] is not None and parts["radial"].function is not None
    if need == "radius_rule":
        return parts["radial"] is not None and parts["radial"].radius_rule is not None
    if need == "test_functions":
        return bool(parts["test_functions"])
    return parts.get(need) is not None


def _check(
    value: Any, index: int, parts: Dict[str, Any]
) -> CheckSpec:
    label = f"checks[{index}]"
    if isinstance(value, str) and not isinstance(value, FloatLiteral):
        value = {"name": value}
    spec = _object(value, label)
    name = _string(spec.get("name"), f"{label}.name")
    if name not in CHECK_GRAMMAR:
        raise ScenarioParseError(f"unknown check {name!r}", f"{label}.name")
    keys, parse_options, needs = CHECK_GRAMMAR[name]
    _unknown_keys(spec, ("name", "tolerance", "expected_failure", *keys), label)
    for need in needs:
        if not _present(parts, need):
            raise ScenarioParseError(
                f"check {name!r} needs {need.replace('_', ' ')}", label
            )
    options = {k: v for k, v in spec.items() if k in keys}
    tolerance = None
    if "tolerance" in spec:
        tolerance = _tolerance(spec["tolerance"], f"{label}.tolerance")
    expected = _boolean(
        spec.get("expected_failure", False), f"{label}.expected_failure"
    )
    return CheckSpec(
        name,
        parse_options(options, parts, label),
        tolerance,
        expected,
        index,
    )


# entry points

def load_scenario_data(file_path: str) -> Dict[str, Any]:
    """Read a scenario file as JSON with float literals marked.

    Raises:
        FileNotFoundError: If the file doesn't exist
        ScenarioParseError: If the file is not a JSON object
    """
    logger = logging.getLogger("lampair")
    if not os.path.exists(file_path):
        logger.error(f"Scenario file not found: {file_path}")
        raise FileNotFoundError(f"Scenario file '{file_path}' not found.")
    with open(file_path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        data = json.loads(text, parse_float=FloatLiteral)
    except json.JSONDecodeError as e:
        raise ScenarioParseError(
            e.msg, f"{file_path}:{e.lineno}:{e.colno}"
        ) from None
    return _object(data, "$")


def parse_scenario_data(
    data: Dict[str, Any],
    file_path: str = "<memory>",
    cantor_depth: int = DEFAULT_DEPTH,
) -> Scenario:
    """Build a Scenario from decoded JSON.

    Args:
        data: Decoded scenario object
        file_path: Source path, used for the default name
        cantor_depth: Subdivision cap for staircases

    Returns:
        The validated scenario

    Raises:
        ScenarioParseError: On the first invalid entry, with its location
    """
    _unknown_keys(
        data,
        (
            "name", "description", "domain", "field", "function",
            "second_function", "selector", "test_functions", "sequence",
            "checks", "radial", "tolerance",
        ),
        "$",
    )
    default_name = os.path.splitext(os.path.basename(file_path))[0]
    name = _string(data.get("name", default_name), "name")
    if "name" in data and not SCENARIO_NAME.match(name):
        raise ScenarioParseError(
            "use letters, digits, '_', '-' and '.' only", "name"
        )
    description = _string(data.get("description", ""), "description")

    parts: Dict[str, Any] = {
        "domain": None,
        "field": None,
        "function": None,
        "second_function": None,
        "test_functions": (),
        "radial": None,
        "sequence": None,
    }
    if "domain" in data:
        domain = tuple(_rationals(data["domain"], "domain"))
        if len(domain) != 2 or not domain[0] < domain[1]:
            raise ScenarioParseError("a domain is [a, b] with a < b", "domain")
        parts["domain"] = domain
        for key in ("field", "function", "second_function"):
            if key in data:
                parts[key] = _bv_function(data[key], domain, key, cantor_depth)
        if parts["field"] is not None:
            parts["field"] = DMField1D(parts["field"])
        parts["test_functions"] = tuple(
            _polynomial_function(phi, domain, f"test_functions[{i}]")
            for i, phi in enumerate(
                _list(data.get("test_functions", []), "test_functions")
            )
        )
        if "sequence" in data:
            parts["sequence"] = _object(data["sequence"], "sequence")
    else:
        for key in ("field", "function", "second_function", "test_functions"):
            if key in data:
                raise ScenarioParseError(
                    f"{key!r} needs a 'domain'", key
                )
    selector = _selector(
        data.get("selector"), parts["field"], "selector", parts["domain"]
    )
    if "radial" in data:
        parts["radial"] = _radial(data["radial"], "radial")

    checks = tuple(
        _check(spec, i, parts)
        for i, spec in enumerate(_list(data.get("checks", []), "checks"))
    )
    if not checks:
        raise ScenarioParseError("at least one check is required", "checks")
    tolerance = None
    if "tolerance" in data:
        tolerance = _tolerance(data["tolerance"], "tolerance")

    return Scenario(
        name=name,
        path=file_path,
        description=description,
        domain=parts["domain"],
        field=parts["field"],
        function=parts["function"],
        second_function=parts["second_function"],
        selector=selector,
        test_functions=parts["test_functions"],
        sequence=dict(parts["sequence"] or {}),
        checks=checks,
        radial=parts["radial"],
        tolerance=tolerance,
    )


def read_scenario(
    file_path: str, cantor_depth: int = DEFAULT_DEPTH
) -> Scenario:
    """Read and validate a scenario file without running any check.

    Args:
        file_path: Path to a scenario JSON file
        cantor_depth: Subdivision cap for staircases

    Returns:
        The validated scenario

    Raises:
        FileNotFoundError: If the file doesn't exist
        ScenarioParseError: If the file breaks the scenario grammar
    """
    logger = logging.getLogger("lampair")
    logger.info(f"Reading scenario from: {file_path}")
    scenario = parse_scenario_data(
        load_scenario_data(file_path), file_path, cantor_depth
    )
    logger.info(
        f"Scenario {scenario.name}: {len(scenario.checks)} checks"
    )
    return scenario
