"""Shipped corpus: every fixture re-derives, every count sits where it must."""

import math

import pytest

from densdeg import fixtures
from densdeg.curvemodel import (
    BadReduction,
    EllipticCurve,
    HyperellipticCurve,
    weil_interval,
)


def test_run_all_fixtures_pass():
    report = fixtures.run_all()
    failures = {k: v for k, v in report.items() if v}
    assert not failures, failures
    assert len(report) == 26


@pytest.mark.parametrize("label", fixtures.curve_labels())
def test_every_curve_record_instantiates(label):
    model = fixtures.curve_model(label)
    assert isinstance(model, (EllipticCurve, HyperellipticCurve))
    facts = fixtures.curve_facts(label)
    assert facts.label == label
    # every asserted fact that is not mechanically derivable carries an anchor
    for key, text in facts.anchors.items():
        assert isinstance(text, str) and text.strip()


def test_cubic_point_witness_checks():
    assert fixtures.verify_cubic_point("quad24-C") is True
    assert fixtures.verify_cubic_point("q-neg1") is False  # no witness stored


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, p))]


def test_all_point_counts_in_weil_interval():
    """Good odd p <= 50: |#X(F_p) - (p+1)| <= 2g sqrt(p), with no clamping."""
    checked = 0
    for label in fixtures.curve_labels():
        model = fixtures.curve_model(label)
        hyp = model.as_hyperelliptic() if isinstance(model, EllipticCurve) else model
        g = hyp.genus
        for p in primes_upto(50):
            if p == 2:
                continue
            try:
                n = hyp.count_points_mod_p(p)
            except BadReduction:
                continue
            lo, hi = weil_interval(g, p)
            assert lo <= n <= hi, (label, p, n, (lo, hi))
            assert abs(n - (p + 1)) <= 2 * g * math.sqrt(p) + 1e-9
            checked += 1
    assert checked > 200  # the corpus actually exercises the interval


def test_expected_set_language():
    spec = {"kind": "union", "parts": [
        {"kind": "finite", "values": [2]},
        {"kind": "from", "start": 4},
    ]}
    s = fixtures.expected_set(spec)
    assert s.materialize(8) == [2, 4, 5, 6, 7, 8]
    removed = fixtures.expected_set({"kind": "from", "start": 2, "removed": [3, 5]})
    assert removed.materialize(6) == [2, 4, 6]
    with pytest.raises(ValueError):
        fixtures.expected_set({"kind": "nonsense"})


def test_fixture_entry_lookup():
    entry = fixtures.fixture_entry("certify:cubic")
    assert entry.kind == "certify-cubic"
    with pytest.raises(KeyError):
        fixtures.fixture_entry("no-such-fixture")
    with pytest.raises(KeyError):
        fixtures.curve_record("no-such-curve")
