"""Bound-rule engine: formula values, exact density sets, lattice soundness."""

import copy
import itertools
import json
import random
import re
import time

import pytest

from densdeg import boundrules as br
from densdeg import setalg
from densdeg.curvemodel import CurveFacts, HyperellipticCurve, validate_facts
from densdeg.fixtures import curve_model, fixture_entry
from densdeg.polyarith import poly

W = 200


def facts(genus, label="z", **kw):
    base = dict(hyperelliptic=True, gonality=2) if genus == 2 else {}
    base.update(kw)
    return validate_facts(CurveFacts(label=label, genus=genus, **base))


def eq(ds, other):
    return setalg.equals_on_window(ds, other, W)


# ---------------------------------------------------------------------------
# numeric formulas


def test_fiber_product_genus_frozen():
    assert br.fiber_product_genus(2, 2, 1, 1, node_count=1) == (5, 4)
    assert br.fiber_product_genus(3, 2, 2, 1) == (9, 9)
    assert br.fiber_product_genus(2, 2, 2, 2) == (9, 9)
    # arithmetic = (dC-1)(dD-1) + dC*gD + dD*gC
    assert br.fiber_product_genus(2, 3, 1, 2) == (2 + 4 + 3, 9)


def test_fiber_product_genus_guards():
    with pytest.raises(ValueError):
        br.fiber_product_genus(1, 2, 1, 1)
    with pytest.raises(ValueError):
        br.fiber_product_genus(2, 2, 1, 1, node_count=-1)


def test_n_pointed_frozen():
    assert br.N_pointed(2, 2, 1, 1) == 10
    assert br.N_pointed(2, 2, 1, 2) == 14
    assert br.N_pointed(2, 2, 2, 2) == 18


def test_n_index1_frozen():
    assert br.N_index1(3, 2, 2, 1) == 18
    assert br.N_index1(3, 2, 2, 2) == 24
    with pytest.raises(br.CoprimalityError):
        br.N_index1(2, 2, 2, 2)  # gcd(dC, 2 dD (gC-1)) = 2


def test_n_general_frozen():
    assert br.N_general(2, 2, 2) == 50
    assert br.N_general(2, 2, 13) == 512
    assert br.N_general(1, 1, 1) == 10  # max(2g, 2g-2+e) bottoms out at 2g


def test_eff_index_bound_frozen():
    assert br.eff_index_bound(2, 2, 1) == 25
    assert br.eff_index_bound(1, 1, 1) == 9
    assert br.eff_index_bound(2, 2, 2) == 40


def test_cs_membership():
    flags = ("degree-map", "divisor-witness")
    assert br.cs_membership(6, 1, 2, 3, flags) == 7
    assert br.cs_membership(9, 2, 2, 3, flags) == 13
    assert br.cs_membership(4, 1, 2, 3, flags) is None  # d > g1 - 2
    assert br.cs_membership(6, 1, 2, 3) is None  # witnesses are mandatory
    assert br.cs_membership(6, 1, 2, 3, ("degree-map",)) is None


# ---------------------------------------------------------------------------
# single curves: the exact low-genus outcomes


def test_delta_curve_genus1_positive_rank():
    res = br.delta_curve(facts(1, has_k_point=True, positive_rank=True), window=W)
    assert res.exact and eq(res.lower, setalg.naturals(1)) and eq(res.upper, setalg.naturals(1))


def test_delta_curve_genus1_rank_zero():
    res = br.delta_curve(facts(1, has_k_point=True, positive_rank=False), window=W)
    assert res.exact and eq(res.lower, setalg.naturals(2)) and eq(res.upper, setalg.naturals(2))


def test_delta_curve_genus2_index2():
    res = br.delta_curve(facts(2, index=2, has_k_point=False), window=W)
    assert res.exact
    assert eq(res.lower, setalg.multiples(2)) and eq(res.upper, setalg.multiples(2))


def test_delta_curve_genus2_with_cubic_point():
    res = br.delta_curve(facts(2, index=1, has_k_point=True, has_degree3_point=True), window=W)
    assert res.exact and eq(res.lower, setalg.naturals(2))


def test_delta_curve_genus2_no_cubic_point():
    res = br.delta_curve(facts(2, index=1, has_k_point=True, has_degree3_point=False), window=W)
    want = setalg.union(setalg.finite([2]), setalg.naturals(4))
    assert res.exact and eq(res.lower, want) and eq(res.upper, want)


def test_delta_curve_pointless_index1_derives_cubic_point():
    res = br.delta_curve(facts(2, index=1, has_k_point=False), window=W)
    assert res.exact and eq(res.lower, setalg.naturals(2))
    assert any("degree-3" in t.anchor or "degree 3" in t.anchor for t in res.trace)


def test_delta_curve_genus3_is_partial():
    res = br.delta_curve(
        CurveFacts(label="g3", genus=3, index=1, has_k_point=True, hyperelliptic=True, gonality=2),
        window=W,
    )
    assert not res.exact
    assert res.lower.subset_on_window(res.upper, W)


# ---------------------------------------------------------------------------
# the nine genus-2 table cells


TYPE_FACTS = {
    "T1": dict(index=1, has_k_point=True, has_degree3_point=True),
    "T2": dict(index=1, has_k_point=True, has_degree3_point=False),
    "T3": dict(index=1, has_k_point=False),
}

TABLE_REMOVED = {
    ("T1", "T1"): (2, 3, 5, 7, 11),
    ("T1", "T2"): (2, 3, 5, 7, 9, 11),
    ("T2", "T2"): (2, 3, 5, 6, 7, 9, 11),
    ("T1", "T3"): (2, 3, 5, 7, 11, 13, 17),
    ("T2", "T3"): (2, 3, 5, 7, 9, 11, 13, 17),
    ("T3", "T3"): (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
                   37, 41, 43, 47, 53, 59, 61, 67),
}


@pytest.mark.parametrize("ta,tb", list(itertools.product(["T1", "T2", "T3"], repeat=2)))
def test_table_cells_exact(ta, tb):
    removed = TABLE_REMOVED[tuple(sorted((ta, tb)))]
    cell = setalg.complement_within_naturals(removed, start=2)
    assert eq(br.table_cell(ta, tb), cell)
    t0 = time.time()
    res = br.delta_product(facts(2, "c", **TYPE_FACTS[ta]), facts(2, "d", **TYPE_FACTS[tb]), window=W)
    assert time.time() - t0 < 1.0
    assert eq(res.lower, cell)
    assert not res.lower.contains(1)
    assert res.fired("lower:genus2-table")


def test_genus2_type_classifier():
    assert br.genus2_type(facts(2, **TYPE_FACTS["T1"])) == "T1"
    assert br.genus2_type(facts(2, **TYPE_FACTS["T2"])) == "T2"
    assert br.genus2_type(facts(2, **TYPE_FACTS["T3"])) == "T3"
    assert br.genus2_type(facts(2, index=2, has_k_point=False)) is None
    assert br.genus2_type(facts(1, has_k_point=True)) is None
    assert br.genus2_type(facts(2, has_k_point=True)) is None  # degree-3 unknown


# ---------------------------------------------------------------------------
# product rules, synthetic spot checks


def test_positive_rank_factor_collapses_product():
    e_pos = facts(1, "e+", has_k_point=True, positive_rank=True)
    e_zero = facts(1, "e0", has_k_point=True, positive_rank=False)
    res = br.delta_product(e_zero, e_pos, window=W)
    assert res.exact and eq(res.lower, setalg.naturals(2)) and eq(res.upper, setalg.naturals(2))
    assert res.fired("eq:positive-rank-factor")


def test_elliptic_pair_tail_and_two_torsion():
    e1 = facts(1, "e1", has_k_point=True, positive_rank=False)
    e2 = facts(1, "e2", has_k_point=True, positive_rank=False)
    res = br.delta_product(e1, e2, window=W)
    assert setalg.naturals(3).subset_on_window(res.lower, W)
    assert not res.lower.contains(2)  # no witness, no 2
    res2 = br.delta_product(e1, e2, witnesses={"full_two_torsion": [True, True]}, window=W)
    assert res2.lower.contains(2) and res2.fired("lower:elliptic-pair-quadratic")
    assert res2.exact and eq(res2.lower, setalg.naturals(2))


def test_two_torsion_condition_needs_good_j_pair():
    e1 = facts(1, "e1", has_k_point=True, positive_rank=False)
    e2 = facts(1, "e2", has_k_point=True, positive_rank=False)
    res = br.delta_product(e1, e2, witnesses={"j_invariants": [0, 0]}, window=W)
    assert not res.lower.contains(2)  # both j = 0 is excluded
    res = br.delta_product(e1, e2, witnesses={"j_invariants": [0, 1728]}, window=W)
    assert res.lower.contains(2)


def test_mixed_even_bounds():
    e = facts(1, "e", has_k_point=True, positive_rank=False)
    c2 = facts(2, "c", index=2, has_k_point=False)
    res = br.delta_product(e, c2, window=W)
    assert res.fired("lower:index2-mixed-even")
    want_lower = setalg.difference(setalg.multiples(2), setalg.finite([2]))
    assert want_lower.subset_on_window(res.lower, W)
    assert res.upper.subset_on_window(setalg.multiples(2), W)


def test_index4_pair_is_exact():
    c = facts(2, "c", index=2, has_k_point=False)
    d = facts(2, "d", index=2, has_k_point=False)
    witness = br.EffectiveIndexData(index=4, eff_ind_upper=4, eff_ind_formula_bound=40, degrees=(4, 8))
    res = br.delta_product(c, d, witnesses={"surface_index": witness}, window=W)
    assert res.exact and eq(res.lower, setalg.multiples(4)) and eq(res.upper, setalg.multiples(4))
    assert res.fired("eq:genus2-index4") and res.fired("upper:index-multiples")


def test_index2_witness_keeps_even_tail_sound():
    c = facts(2, "c", index=2, has_k_point=False)
    d = facts(2, "d", index=2, has_k_point=False)
    witness = br.EffectiveIndexData(index=2, eff_ind_upper=2, eff_ind_formula_bound=40, degrees=(2, 4))
    res = br.delta_product(c, d, witnesses={"surface_index": witness}, window=W)
    assert res.lower.subset_on_window(res.upper, W)
    assert res.fired("lower:genus2-index2-even-tail")


def test_self_product_doubles_jacobian_degrees():
    c = facts(2, "c", index=1, has_k_point=True, has_degree3_point=True, jacobian_rank_zero=True)
    res = br.delta_product(c, c, window=W)
    assert res.fired("lower:self-product")
    # twice every Jacobian density degree: 2*(N>=2) = even numbers >= 4
    assert setalg.scale(2, setalg.naturals(2)).subset_on_window(res.lower, W)


def test_assumption_tags_gate_rules():
    e1 = facts(1, "e1", has_k_point=True, positive_rank=False)
    c = facts(2, "c", index=1, has_k_point=True, has_degree3_point=True)
    plain = br.delta_product(e1, c, window=W)
    assert not plain.fired("lower:quadratic-isotrivial")
    assumed = br.delta_product(e1, c, assume=["IsotrivialFibrationDensity"], window=W)
    assert assumed.fired("lower:quadratic-isotrivial")
    assert assumed.lower.contains(2)
    entry = [t for t in assumed.trace if t.rule == "lower:quadratic-isotrivial"][0]
    assert "IsotrivialFibrationDensity" in entry.assumes
    with pytest.raises(ValueError):
        br.delta_product(e1, c, assume=["NotARealTag"], window=W)


def test_bombieri_lang_is_annotation_only():
    c = facts(2, "c", index=1, has_k_point=True, has_degree3_point=True, jacobian_rank_zero=True)
    d = facts(2, "d", index=1, has_k_point=True, has_degree3_point=True, jacobian_rank_zero=True)
    plain = br.delta_product(c, d, window=W)
    tagged = br.delta_product(c, d, assume=["BombieriLang"], window=W)
    assert eq(plain.lower, tagged.lower) and eq(plain.upper, tagged.upper)
    assert tagged.fired("note:bombieri-lang") and not plain.fired("note:bombieri-lang")


def test_nondensity_certificates_tighten_upper():
    c = facts(2, "c", index=2, has_k_point=False, jacobian_rank_zero=True)
    d = facts(2, "d", index=2, has_k_point=False, jacobian_rank_zero=True)
    res = br.delta_product(c, d, certs={"exclude_2": True}, window=W)
    assert not res.upper.contains(2)
    assert res.fired("upper:quadratic-nondensity")


# ---------------------------------------------------------------------------
# needs-fact reporting


def test_jacobian_needs_facts():
    with pytest.raises(br.NeedsFact) as exc:
        br.delta_jacobian_genus2(facts(2, index=1, has_k_point=True, has_degree3_point=True))
    assert exc.value.fact == "jacobian_rank_zero"
    ok = br.delta_jacobian_genus2(facts(2, index=1, has_k_point=True, jacobian_rank_zero=True), window=W)
    assert eq(ok.lower, setalg.naturals(2)) and eq(ok.upper, setalg.naturals(1)) and not ok.exact
    pos = br.delta_jacobian_genus2(
        facts(2, index=1, has_k_point=True, positive_rank=True, jacobian_simple=True), window=W
    )
    assert pos.exact and eq(pos.lower, setalg.naturals(1))
    with pytest.raises(br.NeedsFact) as exc2:
        br.delta_jacobian_genus2(facts(2, index=1, has_k_point=True, positive_rank=True))
    assert exc2.value.fact == "jacobian_simple"


def test_abelian_transfer_needs_isogeny():
    c = facts(2, "c", index=1, has_k_point=True, jacobian_rank_zero=True)
    with pytest.raises(br.NeedsFact) as exc:
        br.delta_abelian_transfer(c)
    assert exc.value.fact == "isogeny_witness"
    res = br.delta_abelian_transfer(c, isogeny_witness="A is isogenous to the Jacobian", window=W)
    assert res.fired("eq:isogeny-transfer")
    assert eq(res.lower, setalg.naturals(2))


def test_bielliptic_bounds():
    e1 = facts(1, "e1", has_k_point=True, positive_rank=False)
    e2 = facts(1, "e2", has_k_point=True, positive_rank=False)
    res = br.delta_bielliptic(e1, e2, quadratic_density_applicable=False, window=W)
    assert setalg.naturals(3).subset_on_window(res.lower, W)
    assert not res.lower.contains(2)
    res2 = br.delta_bielliptic(e1, e2, quadratic_density_applicable=True, window=W)
    assert res2.lower.contains(2)
    gated = br.delta_bielliptic(
        e1, e2, quadratic_density_applicable=True, rank_zero_over_critical_quadratics=True, window=W
    )
    assert not gated.upper.contains(1)
    assert gated.exact and eq(gated.lower, setalg.naturals(2))


# ---------------------------------------------------------------------------
# witness record validation


def test_effective_index_data_validation():
    with pytest.raises(ValueError):
        br.EffectiveIndexData(index=0, eff_ind_upper=1, eff_ind_formula_bound=1, degrees=(1,))
    with pytest.raises(ValueError):
        br.EffectiveIndexData(index=3, eff_ind_upper=2, eff_ind_formula_bound=9, degrees=(3,))
    with pytest.raises(ValueError):
        # gcd of degrees must equal the index
        br.EffectiveIndexData(index=2, eff_ind_upper=2, eff_ind_formula_bound=9, degrees=(4, 8))
    ok = br.EffectiveIndexData.from_degrees((4, 6), eff_ind_upper=4, formula_bound=40)
    assert ok.index == 2


# ---------------------------------------------------------------------------
# randomized fact-lattice sweep: soundness of every reachable configuration


def random_facts(rng, label):
    genus = rng.choice([1, 1, 2, 2, 2])
    if genus == 1:
        pos = rng.choice([True, False, None])
        return CurveFacts(label=label, genus=genus, has_k_point=True, index=1,
                          positive_rank=pos,
                          count_k_rational_points_at_least=rng.choice([0, 1, 3]))
    has_pt = rng.choice([True, False, None])
    index = rng.choice([1, 2, None]) if has_pt is not True else 1
    kw = dict(
        label=label, genus=2, hyperelliptic=True, gonality=2,
        has_k_point=has_pt, index=index,
        has_degree3_point=rng.choice([True, False, None]),
        has_rational_weierstrass_point=rng.choice([True, False, None]),
        jacobian_rank_zero=rng.choice([True, False, None]),
        positive_rank=rng.choice([True, None]),
        count_k_rational_points_at_least=rng.choice([0, 1, 2, 3]),
    )
    if kw["jacobian_rank_zero"] is True:
        kw["positive_rank"] = None
    if kw["positive_rank"] is True:
        kw["jacobian_rank_zero"] = None
    return CurveFacts(**kw)


def test_fact_lattice_sweep_soundness():
    from densdeg.curvemodel import InconsistentFacts

    rng = random.Random(1234)
    roster_ids = {e["rule"] for e in json.loads(br.rule_roster_json())}
    tried = 0
    while tried < 1000:
        try:
            c = validate_facts(random_facts(rng, "c"))
            d = validate_facts(random_facts(rng, "d"))
        except InconsistentFacts:
            continue
        assume = rng.choice([(), ("ParityConjecture",), ("BombieriLang",),
                             ("ParityConjecture", "IsotrivialFibrationDensity")])
        try:
            res = br.delta_product(c, d, assume=assume, window=W)
        except br.NeedsFact:
            continue
        tried += 1
        # engine soundness: lower within upper, trace rules all rostered
        assert res.lower.subset_on_window(res.upper, W)
        assert all(t.rule in roster_ids for t in res.trace)
        if res.exact:
            assert eq(res.lower, res.upper)
        # monotone consumption: every fired trace entry lists its inputs
        for t in res.trace:
            assert isinstance(t.facts, (list, tuple))


def test_more_facts_never_shrink_lower():
    # adding a degree-3 point to a T2-ish curve can only grow the lower bound
    from densdeg.curvemodel import InconsistentFacts

    rng = random.Random(99)
    for _ in range(50):
        base = facts(2, "c", index=1, has_k_point=True, has_degree3_point=False)
        better = facts(2, "c", index=1, has_k_point=True, has_degree3_point=True)
        try:
            other = validate_facts(random_facts(rng, "d"))
            r1 = br.delta_product(base, other, window=W)
            r2 = br.delta_product(better, other, window=W)
        except (InconsistentFacts, br.NeedsFact):
            continue
        assert r1.lower.subset_on_window(r2.lower, W)


# ---------------------------------------------------------------------------
# non-density certificates, mechanically (re)checked


QUAD_ASSERTED = {
    "jacobian_rank_zero_C": True,
    "jacobian_rank_zero_D": True,
    "quadratic_witness": [1, 0, 1],
}


def quad_pair():
    return curve_model("q-neg1"), curve_model("q-neg2")


def test_quadratic_certificate_verifies():
    C, D = quad_pair()
    assert br.nondensity_quadratic_certificate(C, D, QUAD_ASSERTED) is True


@pytest.mark.parametrize(
    "mutate",
    [
        lambda a: a.pop("jacobian_rank_zero_C"),
        lambda a: a.pop("quadratic_witness"),
        lambda a: a.__setitem__("jacobian_rank_zero_C", False),
        lambda a: a.__setitem__("quadratic_witness", [2, 0, 1]),  # wrong disc class
        lambda a: a.__setitem__("quadratic_witness", [1, 0, 2]),  # not monic
    ],
)
def test_quadratic_certificate_mutations_fail(mutate):
    C, D = quad_pair()
    asserted = copy.deepcopy(QUAD_ASSERTED)
    mutate(asserted)
    try:
        ok = br.nondensity_quadratic_certificate(C, D, asserted)
    except (br.NeedsFact, br.CertificateError):
        return
    assert ok is False


def test_quadratic_certificate_curve_mutations_fail():
    C, D = quad_pair()
    flipped = HyperellipticCurve(poly(1, 0, -1, 0, -1, 0, -1))  # f(0) sign off
    assert not _quiet_cert(flipped, D)
    pos = HyperellipticCurve(poly(1, 0, 1, 0, 1, 0, 1))  # real points exist
    assert not _quiet_cert(pos, D)


def _quiet_cert(C, D):
    try:
        return br.nondensity_quadratic_certificate(C, D, QUAD_ASSERTED)
    except Exception:
        return False


CUBIC_ASSERTED = fixture_entry("certify:cubic").inputs["asserted"]


def cubic_pair():
    return curve_model("cubic-C"), curve_model("cubic-D")


def test_cubic_certificate_verifies():
    C, D = cubic_pair()
    assert br.nondensity_cubic_certificate(C, D, copy.deepcopy(CUBIC_ASSERTED)) is True


@pytest.mark.parametrize(
    "path,value",
    [
        (("cubic_factors", "sign"), 1),
        (("cubic_factors", "g1"), [-1, -6, 1, 1]),
        (("cubic_completion", "shift"), 2),
        (("cubic_completion", "residual"), -1),
        (("discriminant_displays", "first"), [756, 0, 3348, 0, 5265, 0, 3510, 0, 838]),
        (("discriminant_displays", "second"), [0, 0, -108, 432, -280, -432, -107]),
        (("second_decomposition", "quartic_scale"), 64),  # sign analysis breaks
    ],
)
def test_cubic_certificate_mutations_fail(path, value):
    C, D = cubic_pair()
    asserted = copy.deepcopy(CUBIC_ASSERTED)
    node = asserted
    for key in path[:-1]:
        node = node[key]
    node[path[-1]] = value
    try:
        ok = br.nondensity_cubic_certificate(C, D, asserted)
    except (br.NeedsFact, br.CertificateError):
        return
    assert ok is False


def test_cubic_certificate_missing_assertions_need_facts():
    C, D = cubic_pair()
    asserted = copy.deepcopy(CUBIC_ASSERTED)
    del asserted["mordell_weil_C"]
    with pytest.raises(br.NeedsFact) as exc:
        br.nondensity_cubic_certificate(C, D, asserted)
    assert exc.value.fact == "mordell_weil_C"


# ---------------------------------------------------------------------------
# trace / roster hygiene


def test_roster_is_deterministic_and_complete():
    first = br.rule_roster_json()
    assert first == br.rule_roster_json()
    entries = json.loads(first)
    ids = [e["rule"] for e in entries]
    assert len(ids) == len(set(ids)) == 54
    for e in entries:
        assert e["anchor"].strip(), e["rule"]
        assert e["rule"].split(":")[0] in {
            "lower", "upper", "eq", "note", "bielliptic",
            "jacobian", "potential", "curve", "certificate",
        }


CITATION_RE = re.compile(
    r"\b(theorem|lemma|corollary|proposition|remark|section|chapter"
    r"|thm|prop|cor|lem|rem|sec)\b\.?\s*[0-9]"
    r"|§|arxiv|\bet al\b|\bibid\b|\[\d+\]",
    re.IGNORECASE,
)


def test_anchors_are_self_contained():
    entries = json.loads(br.rule_roster_json())
    for e in entries:
        m = CITATION_RE.search(e["anchor"])
        assert m is None, (e["rule"], m.group(0) if m else None)
        for tag in e.get("assumes", []):
            assert tag in br.KNOWN_ASSUMPTIONS


def test_bound_result_json_shape():
    res = br.delta_product(
        facts(2, "c", index=1, has_k_point=True, has_degree3_point=True),
        facts(2, "d", index=1, has_k_point=True, has_degree3_point=True),
        window=W,
    )
    j = res.to_json()
    assert set(j) >= {"lower", "upper", "exact", "window", "trace"}
    assert j["window"] == W
    back_lower = setalg.from_json(j["lower"])
    assert eq(back_lower, res.lower)
    rules = [t["rule"] for t in j["trace"]]
    assert rules == sorted(rules)  # canonical trace order is part of the API
    assert json.dumps(j, sort_keys=True) == json.dumps(res.to_json(), sort_keys=True)
