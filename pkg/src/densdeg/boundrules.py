"""Aggregation engine for density-degree bounds on products of low-genus curves.

Every statement the package knows about density degree sets is encoded here as
a *rule*: a precondition over :class:`~densdeg.curvemodel.CurveFacts` records
(plus optional verified certificates and witnesses), and a conclusion that is
a :class:`~densdeg.setalg.DegreeSet` contribution to either the lower or the
upper bound.  Lower contributions are unioned, upper contributions
intersected, and every firing rule leaves a trace entry naming the rule, its
mathematical content, the facts it consumed, and any assumption tags.

Three conditional tags exist: ``ParityConjecture`` (root numbers determine
rank parity), ``IsotrivialFibrationDensity`` (rational points are dense on
non-trivial isotrivial elliptic fibrations over the line), and ``BombieriLang`` (rational
points on surfaces of general type are never dense outside a closed subset).
A rule carrying a tag fires only when the caller passes that tag in
``assume``, and the tag is recorded in the trace.

Missing facts are never defaulted: a rule that cannot decide its guard either
stays silent (when other rules still give sound bounds) or raises
:class:`NeedsFact` (when no sound answer exists at all).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Optional, Sequence, Union as TUnion

from .curvemodel import (
    CurveFacts,
    EllipticCurve,
    HyperellipticCurve,
    mod3_condition,
    validate_facts,
)
from .polyarith import Poly, count_real_roots, discriminant_over_t, is_square_int, poly, poly2
from . import rootnumber
from .localsolve import CertificateError, surface_qp_empty_mod3
from .setalg import (
    EMPTY,
    DegreeSet,
    complement_within_naturals,
    difference,
    finite,
    intersect,
    multiples,
    naturals,
    product,
    saturate,
    scale,
    tail,
    union,
)

DEFAULT_WINDOW = 200

PARITY = "ParityConjecture"
ISOTRIVIAL_DENSITY = "IsotrivialFibrationDensity"
BOMBIERI_LANG = "BombieriLang"
KNOWN_ASSUMPTIONS = frozenset({PARITY, ISOTRIVIAL_DENSITY, BOMBIERI_LANG})


class NeedsFact(Exception):
    """A bound rule required a fact that was not supplied.

    The engine never guesses tri-state facts; callers should either supply
    the fact (with an anchor) or accept that the bound is unavailable.
    """

    def __init__(self, rule: str, fact: str, message: str = ""):
        self.rule = rule
        self.fact = fact
        super().__init__(message or "rule %r needs fact %r" % (rule, fact))


# ---------------------------------------------------------------------------
# Rule roster.  One entry per rule id; anchors are self-contained statements.

_R = lambda anchor, guards=(), assumes=(), review=None: {
    "anchor": anchor,
    "guards": list(guards),
    "assumes": list(assumes),
    **({"review": review} if review else {}),
}

RULES: dict[str, dict] = {
    # -- single curves ------------------------------------------------------
    "curve:genus1-dense": _R(
        "an elliptic curve with infinitely many rational points has dense "
        "points of every degree",
        guards=["genus = 1", "positive rank"],
    ),
    "curve:genus1-finite": _R(
        "a genus-1 curve with finitely many rational points has density "
        "degree set exactly the index multiples that are at least 2",
        guards=["genus = 1", "rank 0", "index known"],
    ),
    "curve:genus2-even": _R(
        "a genus-2 curve of index 2 has density degree set exactly the even "
        "numbers: the hyperelliptic pencil gives every even degree and odd "
        "closed points cannot exist",
        guards=["genus = 2", "index = 2"],
    ),
    "curve:genus2-all": _R(
        "a genus-2 curve of index 1 with a degree-3 point has density degree "
        "set exactly the integers at least 2",
        guards=["genus = 2", "index = 1", "degree-3 point"],
    ),
    "curve:genus2-gap": _R(
        "a genus-2 curve of index 1 without degree-3 points has density "
        "degree set exactly {2} together with the integers at least 4",
        guards=["genus = 2", "index = 1", "no degree-3 point"],
    ),
    "curve:index-tail": _R(
        "every multiple of the index that is at least twice the genus is a "
        "density degree",
        guards=["index known"],
    ),
    "curve:gonality": _R(
        "the gonality is a density degree when the gonality pencil is "
        "defined over the base field",
        guards=["gonality known"],
    ),
    "curve:nonhyperelliptic-2g-3": _R(
        "a nonhyperelliptic index-1 curve of genus at least 3 with a "
        "rational point has twice-genus-minus-3 as a density degree",
        guards=["genus >= 3", "not hyperelliptic", "index = 1", "rational point"],
    ),
    "curve:nonhyperelliptic-2g-1": _R(
        "a nonhyperelliptic index-1 curve of genus at least 3 with two "
        "rational points, or none, has twice-genus-minus-1 as a density "
        "degree",
        guards=["genus >= 3", "not hyperelliptic", "index = 1",
                "two rational points or pointless"],
    ),
    "curve:upper-index": _R(
        "density degrees are index multiples, and 1 is excluded whenever the "
        "genus is at least 2 because rational points on such a curve are "
        "finite",
    ),
    # -- products: upper bounds --------------------------------------------
    "upper:intersection": _R(
        "a degree with dense points on the product projects to dense points "
        "of the same degree on each factor, so the product's density degree "
        "set lies inside the intersection of the factors' sets",
    ),
    "upper:index-multiples": _R(
        "every closed-point degree on the product surface is a multiple of "
        "the witnessed surface index",
        guards=["surface index witness"],
    ),
    "upper:quadratic-nondensity": _R(
        "a verified non-density certificate shows quadratic points are not "
        "dense on this product, removing 2 from the upper bound",
        guards=["verified quadratic certificate"],
    ),
    "upper:cubic-nondensity": _R(
        "a verified non-density certificate shows cubic points are not "
        "dense on this product, removing 3 from the upper bound",
        guards=["verified cubic certificate"],
    ),
    "upper:degree-one-excluded": _R(
        "rational points on a product with a finite-rank-zero elliptic "
        "factor, or with a higher-genus factor, are never dense, so 1 is "
        "not a density degree",
    ),
    # -- products: lower bounds --------------------------------------------
    "lower:p1-product": _R(
        "line-parameterized density degrees of one factor multiply against "
        "density degrees of the other; every density degree of a curve that "
        "is at least its genus plus one is line-parameterized",
    ),
    "lower:delta-product": _R(
        "for factors of genus at most 9, the product of a density degree of "
        "each factor is a density degree of the product surface",
        guards=["both genera <= 9"],
    ),
    "eq:positive-rank-factor": _R(
        "if one factor is an elliptic curve with infinitely many rational "
        "points, translating curves by the dense group of rational points "
        "shows the product has the same density degree set as the other "
        "factor",
        guards=["one factor genus 1 with positive rank"],
    ),
    "eq:isogeny-factor": _R(
        "if an elliptic factor is isogenous to an abelian subvariety of the "
        "other factor's Jacobian, graphs of the multiplication maps sweep "
        "out the product and its density degree set equals that of the "
        "other factor",
        guards=["witnessed isogeny factor of the Jacobian"],
    ),
    "lower:elliptic-pair-tail": _R(
        "for any two elliptic curves every degree at least 3 is a density "
        "degree of the product: 3, 5 and 7 come from genus-4 biquadratic "
        "covers with two rational points, composites from products, and "
        "everything at least 10 from the pointed asymptotic bound",
        guards=["both factors genus 1"],
    ),
    "lower:elliptic-pair-quadratic": _R(
        "two elliptic curves whose j-invariants are not both 0 and not both "
        "1728, or which both have fully rational 2-torsion, carry a "
        "hyperelliptic curve through the product, so quadratic points are "
        "dense",
        guards=["both genus 1", "j-invariants or 2-torsion witness"],
    ),
    "lower:quadratic-isogeny-replacement": _R(
        "rank is an isogeny invariant, so replacing each factor by a "
        "witnessed isogenous curve whose j-invariants are not both 0 and "
        "not both 1728 produces a quadratic field of simultaneous rank "
        "growth and dense quadratic points on the original product",
        guards=["both genus 1", "isogenous replacement models witnessed"],
    ),
    "lower:quadratic-parity": _R(
        "assuming the parity conjecture, a quadratic field in which every "
        "bad place of both curves splits and exactly one real place stays "
        "real gives both curves odd, hence positive, rank, so quadratic "
        "points on the product are dense (base field with a real embedding)",
        guards=["both genus 1"],
        assumes=[PARITY],
    ),
    "lower:quadratic-isotrivial": _R(
        "assuming rational points are dense on every non-trivial isotrivial "
        "elliptic fibration over the line: the quotient of the product by "
        "the simultaneous involution is such a fibration, and its rational "
        "points pull back to dense quadratic points",
        guards=["genus pair {1,2}"],
        assumes=[ISOTRIVIAL_DENSITY],
    ),
    "lower:quadratic-quartic-factor": _R(
        "if the genus-2 sextic factors as a quartic times a monic "
        "quadratic, and the elliptic factor is the Jacobian of the double "
        "cover along the quartic, the fiber product over the line is "
        "hyperelliptic and pushes dense quadratic points onto the product",
        guards=["genus pair {1,2}", "verified sextic factorization witness"],
    ),
    "lower:index2-mixed-even": _R(
        "a rank-zero elliptic curve times a genus-2 curve of index 2: every "
        "even degree at least 4 is dense and only even degrees occur",
        guards=["genus pair {1,2}", "elliptic rank 0", "genus-2 index 2"],
    ),
    "lower:mixed-pointless-tail": _R(
        "a rank-zero elliptic curve times a pointless index-1 genus-2 curve "
        "has every degree at least 2 dense except possibly 2, 3, 5, 7, 11 "
        "and 13",
        guards=["genus pair {1,2}", "elliptic rank 0",
                "genus-2 pointless of index 1"],
    ),
    "lower:mixed-pointed-tail": _R(
        "a rank-zero elliptic curve times a pointed genus-2 curve has every "
        "degree at least 2 dense except possibly 2, 3, 5 and 7",
        guards=["genus pair {1,2}", "elliptic rank 0", "genus-2 pointed"],
    ),
    "lower:mixed-weierstrass-seven": _R(
        "when the pointed genus-2 factor has a rational Weierstrass point, "
        "genus-6 covers with two rational points admit degree-7 pencils, so "
        "7 is a density degree of the product with a rank-zero elliptic "
        "curve",
        guards=["genus pair {1,2}", "elliptic rank 0",
                "rational Weierstrass point"],
    ),
    "lower:cubic-parity": _R(
        "assuming the parity conjecture: for a split semistable elliptic "
        "curve all of whose bad primes see the genus-2 factor with fewer "
        "than p+1 or at least p+10 points mod p, and an integral degree-3 "
        "map to the line with some real fiber not totally split, every "
        "suitable parameter gives a cubic field of positive rank, so cubic "
        "points on the product are dense",
        guards=["genus pair {1,2}", "verified reduction data witness"],
        assumes=[PARITY],
    ),
    "lower:genus2-table": _R(
        "for two index-1 genus-2 curves, classified by whether each has a "
        "rational point and a degree-3 point, the density degree set of the "
        "product contains every integer at least 2 outside an explicit "
        "finite exceptional set (at worst the primes up to 67, at best the "
        "primes up to 11)",
        guards=["both genus 2", "both index 1"],
    ),
    "lower:genus2-weierstrass-refinement": _R(
        "if both genus-2 curves have rational Weierstrass points, genus-5 "
        "fiber-product covers through the common Weierstrass fiber give "
        "degree 11 and every degree at least 12",
        guards=["both genus 2", "both rational Weierstrass points"],
    ),
    "lower:genus2-nonweierstrass-chain": _R(
        "two pointed genus-2 curves admit genus-9 covering curves with two "
        "rational points; subtracting effective divisors from the canonical "
        "class gives degrees 12 through 15, the nonhyperelliptic "
        "twice-genus-minus-1 rule gives 17, and every degree at least 18 is "
        "asymptotic",
        guards=["both genus 2", "both pointed",
                "both Weierstrass flags known false"],
        review="the value 17 enters only through the twice-genus-minus-1 "
               "membership applied to genus-9 nonhyperelliptic covers; "
               "flagged for independent review",
    ),
    "lower:genus2-index2-mixed": _R(
        "an index-2 genus-2 curve times an index-1 genus-2 curve: every "
        "even degree at least 4 except possibly 6 is dense, and 6 as well "
        "when the index-1 factor has a degree-3 point",
        guards=["both genus 2", "indices 2 and 1"],
    ),
    "lower:genus2-index2-even-tail": _R(
        "for two index-2 genus-2 curves whose product has witnessed index 2 "
        "and effective index e, every even degree at least 2(e+3)^2 is a "
        "density degree",
        guards=["both genus 2", "both index 2",
                "surface index witness with index 2"],
    ),
    "eq:genus2-index4": _R(
        "if the product of two index-2 genus-2 curves has witnessed index "
        "4, its density degree set is exactly the positive multiples of 4",
        guards=["both genus 2", "both index 2", "witnessed surface index 4"],
    ),
    "lower:self-product": _R(
        "twice any density degree of the Jacobian is a density degree of "
        "the self-product of a genus-2 curve, and the Jacobian has dense "
        "points in every degree at least 2",
        guards=["both factors the same genus-2 curve"],
    ),
    "note:bombieri-lang": _R(
        "under the heuristic that rational points on surfaces of general "
        "type are never dense, quadratic points on a product of two "
        "rank-zero genus-2 curves are expected not to be dense; recorded as "
        "an annotation only, no bound is changed",
        guards=["both genus 2", "both hyperelliptic", "both Jacobian rank 0"],
        assumes=[BOMBIERI_LANG],
    ),
    # -- abelian surfaces / quotients ---------------------------------------
    "jacobian:degree-tail": _R(
        "the Jacobian of a genus-2 curve has dense points in every degree "
        "at least 2: symmetric squares of the curve sweep out the surface",
        guards=["genus 2"],
    ),
    "eq:jacobian-positive-simple": _R(
        "a geometrically simple principally polarized abelian surface with "
        "a rational point of infinite order has dense points in every "
        "degree",
        guards=["genus 2", "simple Jacobian", "positive rank"],
    ),
    "eq:isogeny-transfer": _R(
        "density degree sets are invariant under witnessed isogeny of "
        "principally polarized abelian surfaces",
        guards=["isogeny witness"],
    ),
    "bielliptic:albanese-upper": _R(
        "the Albanese fibration maps a bielliptic surface onto an elliptic "
        "curve isogenous to its first factor, so the surface's density "
        "degrees lie inside that curve's set",
    ),
    "bielliptic:tail": _R(
        "every degree at least 3 is a density degree of a bielliptic "
        "surface: degree-d points on the covering product with equal "
        "residue fields push down to degree-d points",
    ),
    "bielliptic:quadratic": _R(
        "when the elliptic factors satisfy the quadratic-density criterion "
        "(j-invariants not both 0 nor both 1728, or fully rational "
        "2-torsion), 2 is a density degree of the bielliptic surface",
        guards=["quadratic-density criterion input"],
    ),
    "bielliptic:dense-rational": _R(
        "if rational points are dense on the covering product of elliptic "
        "curves, they are dense on the quotient bielliptic surface",
        guards=["both factors positive rank"],
    ),
    "bielliptic:critical-field-rank": _R(
        "a witnessed quadratic field over which the second factor gains "
        "rank and the first factor has a point whose double is rational "
        "makes rational points dense on the bielliptic surface",
        guards=["witnessed critical quadratic field with rank growth"],
    ),
    "bielliptic:no-rational-density": _R(
        "rational points on the bielliptic surface are dense only if the "
        "second factor gains rank over one of the finitely many quadratic "
        "fields where a point of the first factor halves a rational point; "
        "witnessed rank zero over all of them removes 1 from the upper "
        "bound",
        guards=["witnessed rank zero over all critical quadratic fields"],
    ),
    # -- potential density ---------------------------------------------------
    "potential:upper-intersection": _R(
        "potential density degrees of a product lie in the intersection of "
        "the factors' potential density sets; a genus-2 curve has potential "
        "density set exactly the integers at least 2",
    ),
    "eq:potential-low-genus-factor": _R(
        "when one factor has genus at most 1, the potential density set of "
        "the product equals that of the other factor",
        guards=["one factor of genus <= 1"],
    ),
    "potential:product": _R(
        "for factors of genus at most 9, products of potential density "
        "degrees are potential density degrees of the product surface",
        guards=["both genera <= 9"],
    ),
    "potential:weak-tail": _R(
        "over a suitable finite extension both genus-2 curves become "
        "pointed with all degrees at least 2 dense, so every degree at "
        "least 2 except possibly the primes up to 11 is a potential density "
        "degree of the product",
        guards=["both genus 2"],
    ),
    "potential:tail": _R(
        "genus-7 covering curves with two rational points over a suitable "
        "extension give every degree at least 2 except possibly 2, 3 and 5 "
        "as a potential density degree of a product of genus-2 curves",
        guards=["both genus 2"],
    ),
    # -- non-density certificates -------------------------------------------
    "certificate:quadratic": _R(
        "no real points on either curve, 3-adic insolubility of the product "
        "equation, a shared quadratic point witness, and rank-zero "
        "Jacobians together certify that quadratic points are not dense on "
        "the product",
    ),
    "certificate:cubic": _R(
        "unique degree-3 maps whose fiber discriminant is everywhere "
        "positive on one curve and non-positive with a single parameter "
        "zero on the other, with trivial or order-3 Mordell-Weil input, "
        "certify that cubic points are not dense on the product",
    ),
}


def rule_roster_json() -> str:
    """Machine-readable roster: one entry per rule, canonically ordered."""
    entries = []
    for rid in sorted(RULES):
        info = RULES[rid]
        entry = {
            "rule": rid,
            "anchor": info["anchor"],
            "guards": info["guards"],
            "assumes": info["assumes"],
        }
        if "review" in info:
            entry["review"] = info["review"]
        entries.append(entry)
    return json.dumps(entries, indent=2, sort_keys=True, ensure_ascii=False)


# ---------------------------------------------------------------------------
# Result and trace types.


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    anchor: str
    facts: tuple[str, ...] = ()
    assumes: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "anchor": self.anchor,
            "facts": list(self.facts),
            "assumes": list(self.assumes),
        }


@dataclass(frozen=True)
class BoundResult:
    lower: DegreeSet
    upper: DegreeSet
    exact: bool
    trace: tuple[TraceEntry, ...]
    window: int = DEFAULT_WINDOW

    def to_json(self) -> dict:
        return {
            "lower": self.lower.to_json(),
            "upper": self.upper.to_json(),
            "exact": self.exact,
            "window": self.window,
            "trace": [t.to_json() for t in self.trace],
        }

    def fired(self, rule: str) -> bool:
        return any(t.rule == rule for t in self.trace)


@dataclass(frozen=True)
class EffectiveIndexData:
    """Witnessed index data for a product surface.

    ``index`` is the gcd of witnessed closed-point degrees, ``eff_ind_upper``
    the degree of a witnessed zero-cycle supporting a line-parameterized
    family, and ``eff_ind_formula_bound`` the generic formula bound.
    """

    index: int
    eff_ind_upper: int
    eff_ind_formula_bound: int
    degrees: tuple[int, ...] = ()

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("index must be >= 1")
        if self.eff_ind_upper < self.index:
            raise ValueError("effective index upper bound below index")
        for d in self.degrees:
            if d % self.index:
                raise ValueError("index must divide every witnessed degree")
        if self.degrees:
            g = 0
            for d in self.degrees:
                g = gcd(g, d)
            if g != self.index:
                raise ValueError("index must be the gcd of witnessed degrees")

    @classmethod
    def from_degrees(cls, degrees: Sequence[int], eff_ind_upper: int,
                     formula_bound: int) -> "EffectiveIndexData":
        g = 0
        for d in degrees:
            g = gcd(g, d)
        return cls(index=g or 1, eff_ind_upper=eff_ind_upper,
                   eff_ind_formula_bound=formula_bound,
                   degrees=tuple(degrees))

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "eff_ind_upper": self.eff_ind_upper,
            "eff_ind_formula_bound": self.eff_ind_formula_bound,
            "degrees": list(self.degrees),
        }


def _entry(rule: str, facts: Iterable[str] = (), assumes: Iterable[str] = ()) -> TraceEntry:
    return TraceEntry(rule=rule, anchor=RULES[rule]["anchor"],
                      facts=tuple(facts), assumes=tuple(assumes))


def _finish(lowers, uppers, trace, window) -> BoundResult:
    lower = EMPTY
    for s in lowers:
        lower = union(lower, s)
    upper = naturals()
    for s in uppers:
        upper = intersect(upper, s)
    if not lower.subset_on_window(upper, window):
        bad = [d for d in lower.materialize(window) if d not in upper]
        raise RuntimeError(
            "engine produced inconsistent bounds; lower not within upper "
            "at degrees %s" % bad[:5])
    exact = lower.equals_on_window(upper, window)
    ordered = tuple(sorted(trace, key=lambda t: (t.rule, t.facts)))
    return BoundResult(lower=lower, upper=upper, exact=exact,
                       trace=ordered, window=window)


# ---------------------------------------------------------------------------
# Formula operations.


def fiber_product_genus(dC: int, dD: int, gC: int, gD: int,
                        node_count: int = 0) -> tuple[int, int]:
    """Arithmetic and geometric genus of the standard fiber-product cover."""
    if dC < 2 or dD < 2:
        raise ValueError("covering degrees must be >= 2")
    if node_count < 0:
        raise ValueError("node count must be >= 0")
    arithmetic = (dC - 1) * (dD - 1) + dC * gD + dD * gC
    return arithmetic, arithmetic - node_count


def N_pointed(gonC: int, gonD: int, gC: int, gD: int) -> int:
    """Asymptotic threshold for a product of pointed positive-genus curves."""
    return 2 * ((gonC - 1) * (gonD - 1) + gonC * gD + gonD * gC)


class CoprimalityError(ValueError):
    """The index-1 asymptotic formula needs coprime covering data."""


def N_index1(dC: int, dD: int, gC: int, gD: int) -> int:
    """Asymptotic threshold using maps of coprime-degree ramification."""
    if gcd(dC, 2 * dD * (gC - 1)) != 1:
        raise CoprimalityError(
            "need gcd(dC, 2*dD*(gC-1)) = 1, got dC=%d, dD=%d, gC=%d" %
            (dC, dD, gC))
    return 2 * ((dC - 1) * (dD - 1) + dC * gD + dD * gC)


def N_general(gC: int, gD: int, e: int) -> int:
    """Asymptotic threshold in terms of the effective index e."""
    mC = max(2 * gC, 2 * gC - 2 + e)
    mD = max(2 * gD, 2 * gD - 2 + e)
    return 2 * (mC - 1) * (mD - 1) + 2 * mC * gD + 2 * mD * gC


def eff_index_bound(gC: int, gD: int, indD: int) -> int:
    """Generic upper bound for the effective index of a product surface."""
    return (4 * gC * gD + (4 * gC + 2) * (indD - 1)
            + 2 * gC * indD + 2 * gD + indD)


def cs_membership(g1: int, g2: int, n: int, d: int,
                  witness_flags: Iterable[str] = ()) -> Optional[int]:
    """Degree 2*g1 - 2 - d membership from a degree-n map to a genus-g2 curve.

    Needs the numeric inequalities (n-1)*d < g1 - n*g2 and d <= g1 - 2, plus
    two witnessed hypotheses: the map itself (``"degree-map"``) and an
    effective degree-d divisor avoiding pulled-back pencils
    (``"divisor-witness"``).  Returns None when not admissible.
    """
    flags = set(witness_flags)
    if not {"degree-map", "divisor-witness"} <= flags:
        return None
    if (n - 1) * d >= g1 - n * g2:
        return None
    if d > g1 - 2:
        return None
    return 2 * g1 - 2 - d


# ---------------------------------------------------------------------------
# Single curves.


def _genus2_degree3(facts: CurveFacts) -> tuple[Optional[bool], list[str]]:
    """Resolve the degree-3 tri-state, deriving it for pointless index 1."""
    notes = []
    d3 = facts.has_degree3_point
    if d3 is None and facts.has_k_point is False and facts.index == 1:
        # Riemann-Roch: deg-1 cycle + canonical ~ effective of degree 3;
        # with no rational point in its support it is a degree-3 point.
        d3 = True
        notes.append("%s:degree-3 point derived from index 1 with no "
                     "rational point" % facts.label)
    return d3, notes


def delta_curve(facts: CurveFacts, window: int = DEFAULT_WINDOW) -> BoundResult:
    """Density degree bounds for a single nice curve of genus >= 1."""
    validate_facts(facts)
    g = facts.genus
    if g < 1:
        raise ValueError("delta_curve needs genus >= 1")
    label = facts.label
    ind = facts.index
    if ind is None and facts.has_k_point is True:
        ind = 1

    if g == 1:
        if facts.positive_rank is True:
            t = _entry("curve:genus1-dense", ["%s:positive_rank=True" % label])
            return _finish([naturals()], [naturals()], [t], window)
        if facts.positive_rank is False:
            if ind is None:
                raise NeedsFact("curve:genus1-finite", "index")
            s = intersect(multiples(ind), naturals(2))
            t = _entry("curve:genus1-finite",
                       ["%s:positive_rank=False" % label,
                        "%s:index=%d" % (label, ind)])
            return _finish([s], [s], [t], window)
        raise NeedsFact("curve:genus1-dense", "positive_rank")

    if g == 2:
        if ind is None:
            raise NeedsFact("curve:genus2", "index")
        if ind == 2:
            s = multiples(2)
            t = _entry("curve:genus2-even", ["%s:index=2" % label])
            return _finish([s], [s], [t], window)
        if ind != 1:
            raise ValueError("a genus-2 curve has index 1 or 2")
        d3, notes = _genus2_degree3(facts)
        if d3 is True:
            s = naturals(2)
            t = _entry("curve:genus2-all",
                       ["%s:index=1" % label,
                        "%s:has_degree3_point=True" % label] + notes)
            return _finish([s], [s], [t], window)
        if d3 is False:
            s = union(finite([2]), naturals(4))
            t = _entry("curve:genus2-gap",
                       ["%s:index=1" % label,
                        "%s:has_degree3_point=False" % label])
            return _finish([s], [s], [t], window)
        raise NeedsFact("curve:genus2-all", "has_degree3_point")

    # genus >= 3: partial knowledge, never exact.
    lowers: list[DegreeSet] = []
    trace: list[TraceEntry] = []
    if ind is not None:
        lowers.append(intersect(multiples(ind), naturals(2 * g)))
        trace.append(_entry("curve:index-tail",
                            ["%s:index=%d" % (label, ind),
                             "%s:genus=%d" % (label, g)]))
    if facts.gonality is not None:
        lowers.append(finite([facts.gonality]))
        trace.append(_entry("curve:gonality",
                            ["%s:gonality=%d" % (label, facts.gonality)]))
    if facts.hyperelliptic is False and ind == 1:
        if facts.has_k_point is True:
            lowers.append(finite([2 * g - 3]))
            trace.append(_entry("curve:nonhyperelliptic-2g-3",
                                ["%s:hyperelliptic=False" % label,
                                 "%s:has_k_point=True" % label]))
        if facts.count_k_rational_points_at_least >= 2 or facts.has_k_point is False:
            lowers.append(finite([2 * g - 1]))
            why = ("%s:count_k_rational_points_at_least=%d" %
                   (label, facts.count_k_rational_points_at_least)
                   if facts.has_k_point is not False
                   else "%s:has_k_point=False" % label)
            trace.append(_entry("curve:nonhyperelliptic-2g-1",
                                ["%s:hyperelliptic=False" % label, why]))
    lower = saturate(_fold_union(lowers)) if lowers else EMPTY
    if ind is not None:
        upper = difference(multiples(ind), finite([1]))
        ufacts = ["%s:index=%d" % (label, ind)]
    else:
        upper = naturals(2)
        ufacts = ["%s:genus=%d" % (label, g)]
    trace.append(_entry("curve:upper-index", ufacts))
    res = _finish([lower], [upper], trace, window)
    # genus >= 3 bounds are partial: force exactness off even if the window
    # happens to agree.
    return BoundResult(lower=res.lower, upper=res.upper, exact=False,
                       trace=res.trace, window=window)


def _fold_union(sets: Sequence[DegreeSet]) -> DegreeSet:
    acc = EMPTY
    for s in sets:
        acc = union(acc, s)
    return acc


# ---------------------------------------------------------------------------
# Products of two curves of genus 1 or 2.


def _as_fraction(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    return Fraction(v)


def _quadratic_density_condition(j1: Fraction, j2: Fraction,
                     full_two_torsion: bool) -> bool:
    if full_two_torsion:
        return True
    if j1 == 0 and j2 == 0:
        return False
    if j1 == 1728 and j2 == 1728:
        return False
    return True


def _verify_parity_cubic_witness(w: Mapping) -> list[str]:
    """Check the reduction-data witness for the cubic parity rule.

    Returns the consumed-fact strings; raises CertificateError when a
    mechanical check fails and NeedsFact when an assertion is missing.
    """
    try:
        ainvs = w["e_ainvs"]
    except KeyError:
        raise NeedsFact("lower:cubic-parity", "e_ainvs")
    E = EllipticCurve.from_ainvs(ainvs)
    facts = ["witness:e_ainvs=%s" % (list(ainvs),)]
    bad = rootnumber.bad_primes(E)
    for p in bad:
        red = rootnumber.reduction_type(E, p)
        if red.kind != rootnumber.SPLIT:
            raise CertificateError(
                "prime %d is %s; need split multiplicative everywhere" %
                (p, red.kind))
    facts.append("verified:split semistable at %s" % bad)
    counts = {int(k): int(v) for k, v in dict(w.get("counts", {})).items()}
    model = w.get("c_model")
    curve = None
    if model is not None:
        curve = HyperellipticCurve(poly(*model["f"]), poly(*model.get("h", [0])))
    for p in bad:
        if p not in counts:
            raise NeedsFact("lower:cubic-parity", "count mod %d" % p)
        n = counts[p]
        if not (n < p + 1 or n >= p + 10):
            raise CertificateError(
                "count %d mod %d is in the forbidden band [p+1, p+9]" % (n, p))
        if curve is not None and curve.count_points_mod_p(p) != n:
            raise CertificateError("witnessed count mod %d does not match "
                                   "the supplied model" % p)
        facts.append("witness:|C(F_%d)|=%d" % (p, n))
    for key in ("good_reduction_at_bad_primes", "degree3_map_to_genus0",
                "real_fiber_not_totally_split"):
        if not w.get(key):
            raise NeedsFact("lower:cubic-parity", key)
        facts.append("asserted:%s" % key)
    return facts


_TABLE_REMOVED = {
    ("T1", "T1"): (2, 3, 5, 7, 11),
    ("T1", "T2"): (2, 3, 5, 7, 9, 11),
    ("T2", "T2"): (2, 3, 5, 6, 7, 9, 11),
    ("T1", "T3"): (2, 3, 5, 7, 11, 13, 17),
    ("T2", "T3"): (2, 3, 5, 7, 9, 11, 13, 17),
    ("T3", "T3"): (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31,
                   37, 41, 43, 47, 53, 59, 61, 67),
}


def genus2_type(facts: CurveFacts) -> Optional[str]:
    """Table classification of an index-1 genus-2 curve.

    T1: rational point and degree-3 point; T2: rational point, no degree-3
    point; T3: no rational point (a degree-3 point is then automatic).
    """
    if facts.genus != 2 or facts.index not in (None, 1):
        return None
    if facts.has_k_point is False:
        return None if facts.index is None else "T3"
    if facts.has_k_point is True:
        d3 = facts.has_degree3_point
        if d3 is True:
            return "T1"
        if d3 is False:
            return "T2"
    return None


def table_cell(type_c: str, type_d: str) -> DegreeSet:
    """The tabulated lower bound for a pair of index-1 genus-2 curves."""
    key = tuple(sorted((type_c, type_d)))
    return complement_within_naturals(_TABLE_REMOVED[key], start=2)


def delta_product(facts_c: CurveFacts, facts_d: CurveFacts,
                  certs: Optional[Mapping] = None,
                  witnesses: Optional[Mapping] = None,
                  *, assume: Iterable[str] = (),
                  window: int = DEFAULT_WINDOW) -> BoundResult:
    """Density degree bounds for a product of two curves of genus 1 or 2.

    ``certs`` may carry verified booleans ``exclude_2`` / ``exclude_3`` from
    the non-density certificates.  ``witnesses`` may carry:

    - ``surface_index``: an :class:`EffectiveIndexData`;
    - ``j_invariants`` / ``full_two_torsion``: data for the quadratic rule;
    - ``isogeny_replacement``: ``{"e1_ainvs": [...], "e2_ainvs": [...]}``;
    - ``isogeny_factor``: ``{"elliptic": "C"|"D", "anchor": ...}``;
    - ``quadratic_quartic``: ``{"sextic": [...], "g4": [...], "g2": [...],
      "pic0_anchor": ...}``;
    - ``parity_cubic``: reduction data for the cubic rule.
    """
    assume = tuple(assume)
    unknown = set(assume) - KNOWN_ASSUMPTIONS
    if unknown:
        raise ValueError("unknown assumption tags: %s" % sorted(unknown))
    certs = dict(certs or {})
    witnesses = dict(witnesses or {})
    gc, gd = facts_c.genus, facts_d.genus
    if not {gc, gd} <= {1, 2}:
        raise ValueError("product rules cover factors of genus 1 and 2 only")

    res_c = delta_curve(facts_c, window)
    res_d = delta_curve(facts_d, window)
    by_name = {"C": (facts_c, res_c), "D": (facts_d, res_d)}

    lowers: list[DegreeSet] = []
    uppers: list[DegreeSet] = []
    trace: list[TraceEntry] = []

    def fire_lower(rule, s, facts, assumes=()):
        lowers.append(s)
        trace.append(_entry(rule, facts, assumes))

    def fire_upper(rule, s, facts, assumes=()):
        uppers.append(s)
        trace.append(_entry(rule, facts, assumes))

    # ---- upper bounds ----
    fire_upper("upper:intersection", intersect(res_c.upper, res_d.upper),
               ["C=%s" % facts_c.label, "D=%s" % facts_d.label])
    sw = witnesses.get("surface_index")
    if sw is not None:
        if not isinstance(sw, EffectiveIndexData):
            sw = EffectiveIndexData(**dict(sw))
        fire_upper("upper:index-multiples", multiples(sw.index),
                   ["witness:surface_index=%d" % sw.index])
    if certs.get("exclude_2") is True:
        fire_upper("upper:quadratic-nondensity",
                   complement_within_naturals([2]),
                   ["certificate:quadratic verified"])
    if certs.get("exclude_3") is True:
        fire_upper("upper:cubic-nondensity",
                   complement_within_naturals([3]),
                   ["certificate:cubic verified"])

    # ---- products of per-factor density degrees ----
    p1 = union(product(intersect(res_c.lower, naturals(gc + 1)), res_d.lower),
               product(intersect(res_d.lower, naturals(gd + 1)), res_c.lower))
    fire_lower("lower:p1-product", p1,
               ["C:genus=%d" % gc, "D:genus=%d" % gd])
    fire_lower("lower:delta-product", product(res_c.lower, res_d.lower),
               ["C:genus=%d" % gc, "D:genus=%d" % gd])

    # ---- an elliptic factor of positive rank fixes the answer ----
    for name, (facts_e, _) in by_name.items():
        if facts_e.genus == 1 and facts_e.positive_rank is True:
            other = "D" if name == "C" else "C"
            ofacts, ores = by_name[other]
            fire_lower("eq:positive-rank-factor", ores.lower,
                       ["%s:positive_rank=True" % facts_e.label,
                        "other=%s" % ofacts.label])
            uppers.append(ores.upper)

    iso = witnesses.get("isogeny_factor")
    if iso is not None:
        which = iso.get("elliptic")
        if which not in by_name:
            raise ValueError("isogeny_factor witness must name 'C' or 'D'")
        efacts, _ = by_name[which]
        if efacts.genus != 1:
            raise ValueError("isogeny_factor witness must name the genus-1 "
                             "factor")
        if not iso.get("anchor"):
            raise NeedsFact("eq:isogeny-factor", "anchor")
        other = "D" if which == "C" else "C"
        ofacts, ores = by_name[other]
        fire_lower("eq:isogeny-factor", ores.lower,
                   ["witness:%s isogeny factor of Jac(%s)" %
                    (efacts.label, ofacts.label)])
        uppers.append(ores.upper)

    # ---- two elliptic curves ----
    if gc == 1 and gd == 1:
        fire_lower("lower:elliptic-pair-tail", naturals(3),
                   ["C:genus=1", "D:genus=1"])
        js = witnesses.get("j_invariants")
        ftt = witnesses.get("full_two_torsion")
        if js is not None or ftt is not None:
            j1, j2 = (_as_fraction(js[0]), _as_fraction(js[1])) if js else (
                Fraction(0), Fraction(0))
            both_tt = bool(ftt) and all(ftt)
            if _quadratic_density_condition(j1, j2, both_tt):
                wfacts = (["witness:j_invariants=(%s,%s)" % (j1, j2)]
                          if js else []) + (
                    ["witness:full_two_torsion"] if both_tt else [])
                fire_lower("lower:elliptic-pair-quadratic", finite([2]), wfacts)
        rep = witnesses.get("isogeny_replacement")
        if rep is not None:
            e1 = EllipticCurve.from_ainvs(rep["e1_ainvs"])
            e2 = EllipticCurve.from_ainvs(rep["e2_ainvs"])
            if _quadratic_density_condition(e1.j_invariant, e2.j_invariant, False):
                fire_lower("lower:quadratic-isogeny-replacement", finite([2]),
                           ["witness:replacement j-invariants=(%s,%s)" %
                            (e1.j_invariant, e2.j_invariant)])
        if PARITY in assume:
            fire_lower("lower:quadratic-parity", finite([2]),
                       ["base field with a real embedding"],
                       assumes=(PARITY,))

    # ---- elliptic times genus 2 ----
    if {gc, gd} == {1, 2}:
        ename, cname = ("C", "D") if gc == 1 else ("D", "C")
        efacts, eres = by_name[ename]
        cfacts, cres = by_name[cname]
        if ISOTRIVIAL_DENSITY in assume:
            fire_lower("lower:quadratic-isotrivial", finite([2]),
                       ["%s:genus=1" % efacts.label,
                        "%s:genus=2" % cfacts.label],
                       assumes=(ISOTRIVIAL_DENSITY,))
        qq = witnesses.get("quadratic_quartic")
        if qq is not None:
            sextic = poly(*qq["sextic"])
            g4 = poly(*qq["g4"])
            g2 = poly(*qq["g2"])
            if not qq.get("pic0_anchor"):
                raise NeedsFact("lower:quadratic-quartic-factor", "pic0_anchor")
            if (g4.degree != 4 or g2.degree != 2
                    or g2.coeffs[-1] != 1 or g4 * g2 != sextic):
                raise CertificateError(
                    "sextic factorization witness does not check out")
            fire_lower("lower:quadratic-quartic-factor", finite([2]),
                       ["verified:%s sextic = quartic * monic quadratic" %
                        cfacts.label,
                        "asserted:%s is the Jacobian of the quartic cover" %
                        efacts.label])
        if efacts.positive_rank is False:
            efact = "%s:positive_rank=False" % efacts.label
            if cfacts.index == 2:
                fire_lower("lower:index2-mixed-even",
                           difference(multiples(2), finite([2])),
                           [efact, "%s:index=2" % cfacts.label])
                uppers.append(multiples(2))
            if cfacts.index == 1 and cfacts.has_k_point is False:
                fire_lower("lower:mixed-pointless-tail",
                           complement_within_naturals(
                               [2, 3, 5, 7, 11, 13], start=2),
                           [efact, "%s:has_k_point=False" % cfacts.label,
                            "%s:index=1" % cfacts.label])
            if cfacts.has_k_point is True:
                fire_lower("lower:mixed-pointed-tail",
                           complement_within_naturals([2, 3, 5, 7], start=2),
                           [efact, "%s:has_k_point=True" % cfacts.label])
                if cfacts.has_rational_weierstrass_point is True:
                    fire_lower("lower:mixed-weierstrass-seven", finite([7]),
                               [efact,
                                "%s:has_rational_weierstrass_point=True" %
                                cfacts.label])
        pc = witnesses.get("parity_cubic")
        if pc is not None and PARITY in assume:
            wfacts = _verify_parity_cubic_witness(pc)
            fire_lower("lower:cubic-parity", finite([3]), wfacts,
                       assumes=(PARITY,))

    # ---- two genus-2 curves ----
    if gc == 2 and gd == 2:
        tc, td = genus2_type(facts_c), genus2_type(facts_d)
        if tc and td:
            fire_lower("lower:genus2-table", table_cell(tc, td),
                       ["%s:type=%s" % (facts_c.label, tc),
                        "%s:type=%s" % (facts_d.label, td)])
        if (facts_c.has_rational_weierstrass_point is True
                and facts_d.has_rational_weierstrass_point is True):
            fire_lower("lower:genus2-weierstrass-refinement",
                       union(finite([11]), naturals(12)),
                       ["%s:has_rational_weierstrass_point=True" %
                        facts_c.label,
                        "%s:has_rational_weierstrass_point=True" %
                        facts_d.label])
        if (facts_c.has_k_point is True and facts_d.has_k_point is True
                and facts_c.has_rational_weierstrass_point is False
                and facts_d.has_rational_weierstrass_point is False):
            fire_lower("lower:genus2-nonweierstrass-chain",
                       union(finite([12, 13, 14, 15, 17]), naturals(18)),
                       ["both:has_k_point=True",
                        "both:has_rational_weierstrass_point=False"])
        inds = {facts_c.index, facts_d.index}
        if inds == {1, 2}:
            one = facts_c if facts_c.index == 1 else facts_d
            d3, _ = _genus2_degree3(one)
            removed = [2] if d3 is True else [2, 6]
            fire_lower("lower:genus2-index2-mixed",
                       difference(multiples(2), finite(removed)),
                       ["indices {1,2}",
                        "%s:has_degree3_point=%s" % (one.label, d3)])
        if facts_c.index == 2 and facts_d.index == 2 and sw is not None:
            e = sw.eff_ind_upper
            if sw.index == 2:
                fire_lower("lower:genus2-index2-even-tail",
                           tail(2, 2 * (e + 3) ** 2),
                           ["both:index=2", "witness:surface_index=2",
                            "witness:eff_ind_upper=%d" % e])
            if sw.index == 4:
                fire_lower("eq:genus2-index4", multiples(4),
                           ["witness:surface_index=4"])
                uppers.append(multiples(4))
        if facts_c.label == facts_d.label:
            jac_lower: DegreeSet = naturals(2)
            try:
                jac_lower = delta_jacobian_genus2(facts_c, window).lower
            except NeedsFact:
                pass
            fire_lower("lower:self-product", scale(2, jac_lower),
                       ["C=D=%s" % facts_c.label])
        if (BOMBIERI_LANG in assume
                and facts_c.hyperelliptic is True
                and facts_d.hyperelliptic is True
                and facts_c.jacobian_rank_zero is True
                and facts_d.jacobian_rank_zero is True):
            trace.append(_entry("note:bombieri-lang",
                                ["both:hyperelliptic=True",
                                 "both:jacobian_rank_zero=True",
                                 "annotation only"],
                                assumes=(BOMBIERI_LANG,)))

    return _finish(lowers, uppers, trace, window)


# ---------------------------------------------------------------------------
# Abelian surfaces and quotients.


def delta_jacobian_genus2(facts: CurveFacts,
                          window: int = DEFAULT_WINDOW) -> BoundResult:
    """Density degree bounds for the Jacobian of a genus-2 curve."""
    validate_facts(facts)
    if facts.genus != 2:
        raise ValueError("expected facts for a genus-2 curve")
    label = facts.label
    if facts.positive_rank is True:
        if facts.jacobian_simple is True:
            t = _entry("eq:jacobian-positive-simple",
                       ["%s:jacobian_simple=True" % label,
                        "%s:positive_rank=True" % label])
            return _finish([naturals()], [naturals()], [t], window)
        raise NeedsFact("eq:jacobian-positive-simple", "jacobian_simple")
    if facts.jacobian_rank_zero is True:
        t = _entry("jacobian:degree-tail",
                   ["%s:jacobian_rank_zero=True" % label])
        return _finish([naturals(2)], [naturals()], [t], window)
    raise NeedsFact("jacobian:degree-tail", "jacobian_rank_zero")


def delta_bielliptic(facts_e1: CurveFacts, facts_e2: CurveFacts,
                     quadratic_density_applicable: bool,
                     *, positive_rank_over_critical_quadratic: Optional[bool] = None,
                     rank_zero_over_critical_quadratics: Optional[bool] = None,
                     window: int = DEFAULT_WINDOW) -> BoundResult:
    """Bounds for a bielliptic quotient of a product of elliptic curves.

    The Albanese factor is ``facts_e1``.  Critical quadratic fields are the
    finitely many ones where a point of the first factor halves a rational
    point; rank data over them is asserted input.
    """
    if facts_e1.genus != 1 or facts_e2.genus != 1:
        raise ValueError("bielliptic surfaces come from two elliptic curves")
    res1 = delta_curve(facts_e1, window)
    lowers: list[DegreeSet] = []
    uppers: list[DegreeSet] = [res1.upper]
    trace: list[TraceEntry] = [
        _entry("bielliptic:albanese-upper",
               ["Albanese factor %s" % facts_e1.label]),
        _entry("bielliptic:tail", []),
    ]
    lowers.append(naturals(3))
    if quadratic_density_applicable:
        lowers.append(finite([2]))
        trace.append(_entry("bielliptic:quadratic",
                            ["input:quadratic_density_applicable=True"]))
    if facts_e1.positive_rank is True and facts_e2.positive_rank is True:
        lowers.append(finite([1]))
        trace.append(_entry("bielliptic:dense-rational",
                            ["%s:positive_rank=True" % facts_e1.label,
                             "%s:positive_rank=True" % facts_e2.label]))
    if positive_rank_over_critical_quadratic is True:
        lowers.append(finite([1]))
        trace.append(_entry("bielliptic:critical-field-rank",
                            ["asserted:second factor gains rank over a "
                             "witnessed critical quadratic field"]))
    if rank_zero_over_critical_quadratics is True:
        uppers.append(naturals(2))
        trace.append(_entry("bielliptic:no-rational-density",
                            ["asserted:second factor has rank zero over "
                             "every critical quadratic field"]))
    return _finish(lowers, uppers, trace, window)


def delta_abelian_transfer(facts_b, *, isogeny_witness: Optional[str] = None,
                           certs: Optional[Mapping] = None,
                           witnesses: Optional[Mapping] = None,
                           assume: Iterable[str] = (),
                           window: int = DEFAULT_WINDOW) -> BoundResult:
    """Transfer bounds to an abelian surface isogenous to a product or Jacobian.

    ``facts_b`` is a pair of genus-1 fact records (product of elliptic
    curves) or a single genus-2 fact record (its Jacobian).
    """
    if not isogeny_witness:
        raise NeedsFact("eq:isogeny-transfer", "isogeny_witness")
    if isinstance(facts_b, CurveFacts):
        inner = delta_jacobian_genus2(facts_b, window)
    else:
        f1, f2 = facts_b
        inner = delta_product(f1, f2, certs, witnesses,
                              assume=assume, window=window)
    t = _entry("eq:isogeny-transfer", ["witness:%s" % isogeny_witness])
    return _finish([inner.lower], [inner.upper], list(inner.trace) + [t],
                   window)


# ---------------------------------------------------------------------------
# Potential density.


def potential_single(facts: CurveFacts) -> DegreeSet:
    """Potential density degree set of one nice curve of genus <= 2."""
    if facts.genus <= 1:
        return naturals()
    if facts.genus == 2:
        return naturals(2)
    raise ValueError("potential sets implemented for genus <= 2 only")


def potential_product(facts_c: CurveFacts, facts_d: CurveFacts,
                      window: int = DEFAULT_WINDOW) -> BoundResult:
    """Bounds for the potential density set of a product of two curves."""
    gc, gd = facts_c.genus, facts_d.genus
    if gc > 2 or gd > 2:
        raise ValueError("potential product rules cover genus <= 2")
    pc, pd = potential_single(facts_c), potential_single(facts_d)
    lowers: list[DegreeSet] = []
    uppers: list[DegreeSet] = [intersect(pc, pd)]
    trace: list[TraceEntry] = [
        _entry("potential:upper-intersection",
               ["C:genus=%d" % gc, "D:genus=%d" % gd])
    ]
    if min(gc, gd) <= 1:
        other = pd if gc <= 1 else pc
        lowers.append(other)
        uppers.append(other)
        trace.append(_entry("eq:potential-low-genus-factor",
                            ["low-genus factor genus=%d" % min(gc, gd)]))
    else:
        lowers.append(product(pc, pd))
        trace.append(_entry("potential:product",
                            ["C:genus=2", "D:genus=2"]))
        lowers.append(complement_within_naturals([2, 3, 5, 7, 11], start=2))
        trace.append(_entry("potential:weak-tail", []))
        lowers.append(complement_within_naturals([2, 3, 5], start=2))
        trace.append(_entry("potential:tail", []))
    return _finish(lowers, uppers, trace, window)


# ---------------------------------------------------------------------------
# Non-density certificates.


def _poly_divides(m: Poly, f: Poly) -> bool:
    _, r = divmod(f, m)
    return r.is_zero


def nondensity_quadratic_certificate(C: HyperellipticCurve,
                                     D: HyperellipticCurve,
                                     asserted: Mapping) -> bool:
    """Verify the checkable conditions excluding dense quadratic points.

    Mechanical checks: value/leading-coefficient classes mod 3, emptiness of
    the real loci, 3-adic insolubility of the product equation, and exact
    division by the witnessed quadratic.  Rank-zero Jacobian assertions are
    required input and raise :class:`NeedsFact` when missing.
    """
    for key in ("jacobian_rank_zero_C", "jacobian_rank_zero_D"):
        if asserted.get(key) is not True:
            raise NeedsFact("certificate:quadratic", key)
    witness = asserted.get("quadratic_witness")
    if witness is None:
        raise NeedsFact("certificate:quadratic", "quadratic_witness")
    if not (C.h.is_zero and D.h.is_zero):
        return False
    f, g = C.f, D.f
    if not mod3_condition(f, -1):
        return False
    if not mod3_condition(g, +1):
        return False
    if not (C.real_points_empty() and D.real_points_empty()):
        return False
    try:
        empty, _cert = surface_qp_empty_mod3(f, g)
    except CertificateError:
        return False
    if not empty:
        return False
    m = poly(*witness)
    if m.degree != 2 or m.coeffs[-1] != 1:
        return False
    disc = m.coeffs[1] ** 2 - 4 * m.coeffs[0]
    num, den = disc.numerator, disc.denominator
    if num >= 0 and is_square_int(num * den):
        return False  # reducible over the rationals: not a quadratic point
    if not (_poly_divides(m, f) and _poly_divides(m, g)):
        return False
    return True


def _match_up_to_square(computed: Poly, display: Poly) -> bool:
    """computed == c * display for a single positive square rational c."""
    if computed.degree != display.degree or computed.is_zero:
        return False
    ratio = None
    for a, b in zip(computed.coeffs, display.coeffs):
        if b == 0:
            if a != 0:
                return False
            continue
        r = Fraction(a, b)
        if ratio is None:
            ratio = r
        elif r != ratio:
            return False
    if ratio is None or ratio <= 0:
        return False
    return (is_square_int(ratio.numerator)
            and is_square_int(ratio.denominator))


def nondensity_cubic_certificate(C: HyperellipticCurve,
                                 D: HyperellipticCurve,
                                 asserted: Mapping) -> bool:
    """Verify the checkable conditions excluding dense cubic points.

    The asserted data names the two degree-3 pencils: a signed factorization
    of C's sextic into monic cubics, and a completed-square decomposition of
    D's sextic.  The fiber discriminants are recomputed exactly, compared
    with the supplied displays up to a square rational factor, and their
    sign behaviour is verified (everywhere positive for C; non-positive with
    a single zero for D).  Mordell-Weil and uniqueness assertions are
    required input.
    """
    for key in ("mordell_weil_C", "mordell_weil_D", "unique_degree3_maps"):
        if not asserted.get(key):
            raise NeedsFact("certificate:cubic", key)

    fac = asserted.get("cubic_factors")
    comp = asserted.get("cubic_completion")
    displays = asserted.get("discriminant_displays")
    decomp = asserted.get("second_decomposition")
    if not (fac and comp and displays and decomp):
        raise NeedsFact("certificate:cubic", "pencil data")

    g1 = poly(*fac["g1"])
    g2 = poly(*fac["g2"])
    sign = int(fac["sign"])
    if g1.degree != 3 or g2.degree != 3:
        return False
    if C.f != g1 * g2 * sign or not C.h.is_zero:
        return False
    # fiber of the map y = t * g1(x):  t^2 g1(x) - sign * g2(x) = 0
    fam1 = poly2(*[poly(-sign * g2.coeffs[i] if i <= g2.degree else 0,
                        0,
                        g1.coeffs[i] if i <= g1.degree else 0)
                   for i in range(4)])
    disc1 = discriminant_over_t(fam1)
    display1 = poly(*displays["first"])
    if not _match_up_to_square(disc1, display1):
        return False
    if not (display1.coeffs[-1] > 0 and display1(0) > 0
            and count_real_roots(display1) == 0):
        return False

    q = poly(*comp["q"])
    shift = Fraction(comp["shift"])
    residual = Fraction(comp["residual"])
    if q.degree != 3 or q.coeffs[-1] != 1:
        return False
    completed = (q + poly(shift)) * (q + poly(shift)) + poly(residual)
    if D.f != completed or not D.h.is_zero:
        return False
    # fiber of the map y = t + q(x) + shift:  2t q(x) + (t^2 + 2 shift t - r)
    fam2 = poly2(poly(-residual, 2 * shift + 2 * q.coeffs[0], 1),
                 *[poly(0, 2 * q.coeffs[i]) for i in range(1, 4)])
    disc2 = discriminant_over_t(fam2)
    display2 = poly(*displays["second"])
    if not _match_up_to_square(disc2, display2):
        return False
    quartic_scale = Fraction(decomp["quartic_scale"])
    square_scale = Fraction(decomp["scale"])
    sq = poly(*decomp["square"])
    rebuilt = poly(0, 0, 0, 0, quartic_scale) + sq * sq * square_scale
    if rebuilt != display2:
        return False
    if not (quartic_scale < 0 and square_scale <= 0):
        return False
    return True
