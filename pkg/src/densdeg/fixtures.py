"""Curve corpus and expected-output fixtures shipped with the package.

``data/curves.json`` carries two tables: ``curves`` (models plus asserted
facts, each fact paired with a self-contained anchor statement) and
``fixtures`` (engine inputs with frozen expected outputs on a window).  The
selftest runner re-derives each fixture with a fresh engine call and compares
against the frozen expectation, so the shipped corpus doubles as a
regression suite.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Any, Mapping, Optional

from . import boundrules, localsolve, rootnumber
from .boundrules import BoundResult, NeedsFact
from .curvemodel import CurveFacts, EllipticCurve, HyperellipticCurve
from .polyarith import poly
from .setalg import DegreeSet, EMPTY, difference, finite, multiples, naturals, union

_FACT_KEYS = {
    "genus", "index", "has_k_point", "has_degree3_point",
    "has_rational_weierstrass_point", "jacobian_rank_zero",
    "jacobian_simple", "positive_rank", "hyperelliptic",
    "count_k_rational_points_at_least", "gonality",
}


def load_raw() -> dict:
    text = resources.files("densdeg").joinpath("data/curves.json").read_text()
    return json.loads(text)


_RAW: Optional[dict] = None


def _raw() -> dict:
    global _RAW
    if _RAW is None:
        _RAW = load_raw()
    return _RAW


def curve_labels() -> list[str]:
    return sorted(_raw()["curves"])


def curve_record(label: str) -> dict:
    try:
        return _raw()["curves"][label]
    except KeyError:
        raise KeyError("unknown curve label %r" % label)


def curve_model(label: str):
    """Instantiate the stored model; elliptic or hyperelliptic."""
    rec = curve_record(label)
    return model_from_json(rec["model"], label=label)


def model_from_json(model: Mapping, label: str = ""):
    if "ainvs" in model:
        return EllipticCurve.from_ainvs(model["ainvs"], label=label)
    return HyperellipticCurve(poly(*model["f"]),
                              poly(*model.get("h", [0])), label=label)


def curve_facts(label: str) -> CurveFacts:
    rec = curve_record(label)
    kw = {k: v for k, v in rec["facts"].items() if k in _FACT_KEYS}
    anchors = dict(rec.get("anchors", {}))
    return CurveFacts(label=label, anchors=anchors, **kw)


def verify_cubic_point(label: str) -> bool:
    """Check a stored degree-3 point witness: beta^2 = f mod m exactly.

    m must be a monic cubic with no rational root (hence irreducible), and
    the witness only applies to models with h = 0.
    """
    rec = curve_record(label)
    w = rec.get("cubic_point")
    if w is None:
        return False
    m = poly(*w["m"])
    beta = poly(*w["beta"])
    f = poly(*rec["model"]["f"])
    h = poly(*rec["model"].get("h", [0]))
    if not h.is_zero or m.degree != 3 or m.coeffs[-1] != 1:
        return False
    # rational root would make m reducible; cubic, so that is the only risk
    c0 = m.coeffs[0]
    for num in set([1, -1, c0.numerator, -c0.numerator]):
        den = c0.denominator
        for cand in {num, num * den, -num * den}:
            if m(cand) == 0:
                return False
    if m(0) == 0:
        return False
    _, r = divmod(beta * beta - f, m)
    return r.is_zero


# ---------------------------------------------------------------------------
# Expected-set mini language.


def expected_set(spec: Mapping) -> DegreeSet:
    kind = spec["kind"]
    if kind == "all":
        base = naturals()
    elif kind == "from":
        base = naturals(spec.get("start", 1))
    elif kind == "multiples":
        base = multiples(spec["m"])
    elif kind == "finite":
        return finite(spec["values"])
    elif kind == "union":
        acc = EMPTY
        for part in spec["parts"]:
            acc = union(acc, expected_set(part))
        return acc
    else:
        raise ValueError("unknown expected-set kind %r" % kind)
    removed = spec.get("removed")
    if removed:
        base = difference(base, finite(removed))
    return base


# ---------------------------------------------------------------------------
# Fixture entries and the runner.


@dataclass(frozen=True)
class FixtureEntry:
    label: str
    kind: str
    inputs: Mapping[str, Any]
    expected: Mapping[str, Any]


def fixture_entries() -> list[FixtureEntry]:
    return [FixtureEntry(label=e["label"], kind=e["kind"],
                         inputs=e["inputs"], expected=e["expected"])
            for e in _raw()["fixtures"]]


def fixture_entry(label: str) -> FixtureEntry:
    for e in fixture_entries():
        if e.label == label:
            return e
    raise KeyError("unknown fixture %r" % label)


def _check_bounds(res: BoundResult, expected: Mapping) -> list[str]:
    problems = []
    window = expected.get("window", res.window)
    lo = expected_set(expected["lower"])
    hi = expected_set(expected["upper"])
    if not res.lower.equals_on_window(lo, window):
        problems.append("lower bound differs on [1,%d]" % window)
    if not res.upper.equals_on_window(hi, window):
        problems.append("upper bound differs on [1,%d]" % window)
    if res.exact != expected["exact"]:
        problems.append("exactness flag is %s, expected %s"
                        % (res.exact, expected["exact"]))
    fired = {t.rule for t in res.trace}
    for rule in expected.get("rules", []):
        if rule not in fired:
            problems.append("rule %s did not fire" % rule)
    return problems


def product_arguments(inputs: Mapping) -> dict:
    """Translate a product fixture's inputs into delta_product kwargs."""
    return {
        "facts_c": curve_facts(inputs["c"]),
        "facts_d": curve_facts(inputs["d"]),
        "certs": inputs.get("certs"),
        "witnesses": inputs.get("witnesses"),
        "assume": tuple(inputs.get("assume", ())),
    }


def run_fixture(entry: FixtureEntry,
                window: int = boundrules.DEFAULT_WINDOW) -> list[str]:
    """Run one fixture; returns a list of problems (empty = pass)."""
    kind = entry.kind
    inputs = entry.inputs
    expected = entry.expected
    w = expected.get("window", window)

    if kind == "curve":
        res = boundrules.delta_curve(curve_facts(inputs["curve"]), w)
        return _check_bounds(res, expected)

    if kind == "product":
        kw = product_arguments(inputs)
        res = boundrules.delta_product(
            kw["facts_c"], kw["facts_d"], kw["certs"], kw["witnesses"],
            assume=kw["assume"], window=w)
        return _check_bounds(res, expected)

    if kind == "jacobian":
        res = boundrules.delta_jacobian_genus2(curve_facts(inputs["curve"]), w)
        return _check_bounds(res, expected)

    if kind == "abelian":
        res = boundrules.delta_abelian_transfer(
            curve_facts(inputs["jacobian_of"]),
            isogeny_witness=inputs["isogeny_witness"], window=w)
        return _check_bounds(res, expected)

    if kind == "bielliptic":
        res = boundrules.delta_bielliptic(
            curve_facts(inputs["e1"]), curve_facts(inputs["e2"]),
            inputs["quadratic_density_applicable"],
            positive_rank_over_critical_quadratic=inputs.get(
                "positive_rank_over_critical_quadratic"),
            rank_zero_over_critical_quadratics=inputs.get(
                "rank_zero_over_critical_quadratics"),
            window=w)
        return _check_bounds(res, expected)

    if kind == "potential":
        res = boundrules.potential_product(
            curve_facts(inputs["c"]), curve_facts(inputs["d"]), w)
        return _check_bounds(res, expected)

    if kind == "certify-quadratic":
        got = boundrules.nondensity_quadratic_certificate(
            curve_model(inputs["c"]), curve_model(inputs["d"]),
            inputs["asserted"])
        return ([] if got == expected["verified"]
                else ["certificate verified=%s, expected %s"
                      % (got, expected["verified"])])

    if kind == "certify-cubic":
        got = boundrules.nondensity_cubic_certificate(
            curve_model(inputs["c"]), curve_model(inputs["d"]),
            inputs["asserted"])
        return ([] if got == expected["verified"]
                else ["certificate verified=%s, expected %s"
                      % (got, expected["verified"])])

    if kind == "parity-twist":
        e1 = curve_model(inputs["e1"])
        e2 = curve_model(inputs["e2"])
        twist = rootnumber.find_parity_twist(e1, e2)
        problems = []
        if twist != expected["twist"]:
            problems.append("twist %s, expected %s" % (twist, expected["twist"]))
        rns = [rootnumber.splitting_quadratic_root_number(e, twist)
               for e in (e1, e2)]
        if rns != expected["root_numbers"]:
            problems.append("root numbers %s, expected %s"
                            % (rns, expected["root_numbers"]))
        return problems

    if kind == "local-pair":
        got, _cert = localsolve.quadratic_obstruction(
            curve_model(inputs["c"]), curve_model(inputs["d"]), inputs["p"])
        return ([] if got == expected["obstructed"]
                else ["obstructed=%s, expected %s"
                      % (got, expected["obstructed"])])

    if kind == "local-degrees":
        statuses, _cert = localsolve.degree_divisibility(
            curve_model(inputs["curve"]), inputs["p"], inputs["dmax"])
        want = {int(k): v for k, v in expected["statuses"].items()}
        return ([] if statuses == want
                else ["statuses %s, expected %s" % (statuses, want)])

    raise ValueError("unknown fixture kind %r" % kind)


def run_all(window: int = boundrules.DEFAULT_WINDOW) -> dict[str, list[str]]:
    """Run every fixture; mapping label -> problems (empty list = pass)."""
    report = {}
    for entry in fixture_entries():
        try:
            report[entry.label] = run_fixture(entry, window)
        except NeedsFact as exc:
            report[entry.label] = ["needs fact: %s" % exc]
        except Exception as exc:  # surfaced verbatim by selftest
            report[entry.label] = ["error: %r" % exc]
    return report
