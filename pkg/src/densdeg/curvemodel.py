"""Curve models: hyperelliptic equations, Weierstrass equations, fact records.

Models are exact (Fraction coefficients).  Point counting over prime fields
is the direct character sum for odd primes of good reduction; anything
needing heavier machinery (ranks, simplicity of Jacobians, gonality beyond
the hyperelliptic case) enters through `CurveFacts`, a record of asserted
facts with provenance strings, which `validate_facts` cross-checks for
internal consistency before any bound rule may consume it.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import isqrt
from typing import Mapping, Optional

from .polyarith import (
    Poly,
    poly,
    discriminant,
    is_squarefree,
    count_real_roots,
    kronecker,
    valuation,
)


class BadReduction(ValueError):
    """Raised when a mod-p computation is requested at a prime of bad reduction."""


# ---------------------------------------------------------------------------
# hyperelliptic models  y^2 + h(x) y = f(x)

@dataclass(frozen=True)
class HyperellipticCurve:
    f: Poly
    h: Poly = poly(0)
    label: str = ""

    def __post_init__(self):
        if self.u_poly().degree < 3:
            raise ValueError("need deg(4f + h^2) >= 3 for a curve of genus >= 1")
        if not is_squarefree(self.u_poly()):
            raise ValueError("4f + h^2 must be squarefree (smooth model)")

    def u_poly(self) -> Poly:
        """Completed-square right side: substituting y -> (y - h)/2 gives y^2 = U."""
        return self.f * 4 + self.h * self.h

    @property
    def genus(self) -> int:
        return (self.u_poly().degree - 1) // 2

    def discriminant_u(self) -> Fraction:
        return discriminant(self.u_poly())

    def count_points_mod_p(self, p: int) -> int:
        """|C(F_p)| for the smooth projective model, odd p of good reduction.

        Affine part is sum_x (1 + chi(U(x))); at infinity there is one point
        for odd degree, and for even degree two points when lc(U) is a square
        mod p, none otherwise.
        """
        if p == 2:
            raise BadReduction("mod-2 counting not supported on this model")
        U = self.u_poly()
        ints = U.integer_coeffs() if all(c.denominator == 1 for c in U.coeffs) else None
        if ints is None:
            raise ValueError("point counting needs integer coefficients")
        d = discriminant(U)
        if (U.lc.numerator % p == 0) or (d.numerator % p == 0):
            raise BadReduction(f"bad reduction at {p}")
        total = 0
        for x in range(p):
            ux = 0
            for c in reversed(ints):
                ux = (ux * x + c) % p
            total += 1 + kronecker(ux, p)
        if U.degree % 2 == 1:
            total += 1
        else:
            total += 2 if kronecker(U.lc.numerator % p, p) == 1 else 0
        return total

    def has_rational_point_at_infinity(self) -> bool:
        """True when the smooth model has a rational point above x = infinity."""
        U = self.u_poly()
        if U.degree % 2 == 1:
            return True
        lc = U.lc
        return lc > 0 and _is_square_fraction(lc)

    def real_points_empty(self) -> bool:
        """True iff the real locus is empty: U < 0 on all of R.

        Odd degree always has real points, as does positive leading
        coefficient; otherwise check that U has no real roots.
        """
        U = self.u_poly()
        if U.degree % 2 == 1 or U.lc > 0:
            return False
        return count_real_roots(U) == 0


def _is_square_fraction(q: Fraction) -> bool:
    if q < 0:
        return False
    return isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def mod3_condition(f: Poly, target: int) -> bool:
    """Check f(0), f(1), f(2) and lc(f) are all congruent to target mod 3.

    Used by the quadratic non-density certificate: a sextic whose values and
    leading coefficient are all in a single nonzero class mod 3 gives
    z^2 = f(x) no 3-adic solutions of the appropriate parity of valuation.
    """
    try:
        ints = f.integer_coeffs()
    except ValueError:
        return False
    t = target % 3
    if t == 0:
        return False
    vals = []
    for x in (0, 1, 2):
        v = 0
        for c in reversed(ints):
            v = (v * x + c) % 3
        vals.append(v)
    return all(v == t for v in vals) and ints[-1] % 3 == t


# ---------------------------------------------------------------------------
# Weierstrass models

@dataclass(frozen=True)
class EllipticCurve:
    a1: Fraction
    a2: Fraction
    a3: Fraction
    a4: Fraction
    a6: Fraction
    label: str = ""

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "a4", "a6"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.discriminant == 0:
            raise ValueError("singular Weierstrass equation")

    @classmethod
    def from_ainvs(cls, ainvs, label: str = "") -> "EllipticCurve":
        a1, a2, a3, a4, a6 = ainvs
        return cls(a1, a2, a3, a4, a6, label=label)

    @property
    def b2(self) -> Fraction:
        return self.a1**2 + 4 * self.a2

    @property
    def b4(self) -> Fraction:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> Fraction:
        return self.a3**2 + 4 * self.a6

    @property
    def b8(self) -> Fraction:
        return (
            self.a1**2 * self.a6
            + 4 * self.a2 * self.a6
            - self.a1 * self.a3 * self.a4
            + self.a2 * self.a3**2
            - self.a4**2
        )

    @property
    def c4(self) -> Fraction:
        return self.b2**2 - 24 * self.b4

    @property
    def c6(self) -> Fraction:
        return -self.b2**3 + 36 * self.b2 * self.b4 - 216 * self.b6

    @property
    def discriminant(self) -> Fraction:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2**2 * b8 - 8 * b4**3 - 27 * b6**2 + 9 * b2 * b4 * b6

    @property
    def j_invariant(self) -> Fraction:
        return self.c4**3 / self.discriminant

    def two_descent_polynomial(self) -> Poly:
        """Monic cubic 4f + h^2 rescaled: x^3 + b2/4 x^2 + b4/2 x + b6/4 ... kept
        integral as the standard quartic-free form y^2 = x^3 + b2 x^2/4 + ...;
        we return 4*f + h^2 directly."""
        f = poly(self.a6, self.a4, self.a2, 1)
        h = poly(self.a3, self.a1)
        return f * 4 + h * h

    def as_hyperelliptic(self) -> HyperellipticCurve:
        f = poly(self.a6, self.a4, self.a2, 1)
        h = poly(self.a3, self.a1)
        return HyperellipticCurve(f, h, label=self.label)

    def ainvs(self) -> tuple[Fraction, ...]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def scale(self, u: Fraction) -> "EllipticCurve":
        """Standard change of variables (x, y) -> (u^2 x, u^3 y)."""
        u = Fraction(u)
        return EllipticCurve(
            self.a1 * u,
            self.a2 * u**2,
            self.a3 * u**3,
            self.a4 * u**4,
            self.a6 * u**6,
            label=self.label,
        )

    def count_points_mod_p(self, p: int) -> int:
        """|E(F_p)| including the point at infinity, odd p of good reduction."""
        if p == 2:
            raise BadReduction("mod-2 counting not supported")
        d = self.discriminant
        if d.denominator % p == 0 or any(a.denominator % p == 0 for a in self.ainvs()):
            raise BadReduction(f"non-integral at {p}")
        if d.numerator % p == 0:
            raise BadReduction(f"bad reduction at {p}")
        return self.as_hyperelliptic().count_points_mod_p(p)

    def ap(self, p: int) -> int:
        return p + 1 - self.count_points_mod_p(p)

    def quadratic_twist(self, d: int) -> "EllipticCurve":
        """Twist by d, via the short model y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3."""
        return EllipticCurve(0, 0, 0, -27 * self.c4 * d * d, -54 * self.c6 * d**3)


def weil_interval(g: int, p: int) -> tuple[int, int]:
    """Closed integer interval surely containing |C(F_p)| for genus g."""
    w = isqrt(4 * g * g * p)  # floor of 2g sqrt(p)
    lo = p + 1 - w - (1 if w * w < 4 * g * g * p else 0)
    # lo = p + 1 - ceil(2g sqrt p); hi = p + 1 + floor(2g sqrt p)
    return lo, p + 1 + w


# ---------------------------------------------------------------------------
# asserted facts with provenance

TriState = Optional[bool]

_FACT_FIELDS = (
    "has_k_point",
    "has_degree3_point",
    "has_rational_weierstrass_point",
    "jacobian_rank_zero",
    "jacobian_simple",
    "positive_rank",
)


@dataclass(frozen=True)
class CurveFacts:
    """Facts a bound rule may consume; tri-state None = unknown.

    `anchors` maps fact names to short provenance strings ("computed: ...",
    "asserted from the curve database record ...").  Consumers must treat a
    missing anchor as an unusable fact.
    """

    label: str
    genus: int
    index: Optional[int] = None
    has_k_point: TriState = None
    has_degree3_point: TriState = None
    has_rational_weierstrass_point: TriState = None
    jacobian_rank_zero: TriState = None
    jacobian_simple: TriState = None
    positive_rank: TriState = None
    hyperelliptic: TriState = None
    count_k_rational_points_at_least: int = 0
    gonality: Optional[int] = None
    anchors: Mapping[str, str] = field(default_factory=dict)

    def with_fact(self, **kw) -> "CurveFacts":
        anchors = dict(self.anchors)
        anchor = kw.pop("anchor", None)
        if anchor:
            for k in kw:
                anchors[k] = anchor
        return replace(self, anchors=anchors, **kw)


class InconsistentFacts(ValueError):
    pass


def validate_facts(facts: CurveFacts) -> CurveFacts:
    """Cross-check a fact record; raises InconsistentFacts on contradiction."""
    g = facts.genus
    if g < 0:
        raise InconsistentFacts("genus must be >= 0")
    ind = facts.index
    if ind is not None:
        if ind < 1:
            raise InconsistentFacts("index must be >= 1")
        if g == 1 and ind > g + 1:
            # genus-1 curves over a number field have index <= ... not bounded;
            # no constraint imposed here
            pass
        if g == 2 and ind not in (1, 2):
            raise InconsistentFacts("a genus-2 curve has a degree-2 map to P^1, so index divides 2")
    if facts.has_k_point:
        if ind not in (None, 1):
            raise InconsistentFacts("a rational point forces index 1")
        if facts.count_k_rational_points_at_least < 1:
            facts = replace(facts, count_k_rational_points_at_least=1)
    if facts.count_k_rational_points_at_least >= 1 and facts.has_k_point is False:
        raise InconsistentFacts("positive rational point count contradicts pointlessness")
    if facts.has_rational_weierstrass_point is True:
        # a rational Weierstrass point is in particular a rational point
        if facts.has_k_point is False:
            raise InconsistentFacts("a rational Weierstrass point is a rational point")
        if ind not in (None, 1):
            raise InconsistentFacts("a rational Weierstrass point forces index 1")
    # has_degree3_point means a degree-3 closed point (cubic field of
    # definition); a rational point does NOT force one, so pointed curves
    # with has_degree3_point=False are a supported state.
    if (
        facts.has_k_point is False
        and facts.has_degree3_point is False
        and ind == 1
        and g == 2
    ):
        raise InconsistentFacts(
            "genus-2, index 1, no rational point forces an effective degree-3 divisor class"
        )
    if facts.jacobian_rank_zero and facts.positive_rank:
        raise InconsistentFacts("rank zero and positive rank are exclusive")
    if facts.jacobian_rank_zero is False and facts.positive_rank is False:
        raise InconsistentFacts("rank is either zero or positive")
    if facts.gonality is not None and facts.gonality < 1:
        raise InconsistentFacts("gonality must be >= 1")
    if facts.hyperelliptic and facts.gonality is not None and facts.gonality > 2 and g >= 2:
        raise InconsistentFacts("a hyperelliptic curve of genus >= 2 has gonality 2")
    return facts


def facts_from_model(
    curve: HyperellipticCurve | EllipticCurve, label: str = ""
) -> CurveFacts:
    """Derive the mechanically checkable facts straight from a model."""
    if isinstance(curve, EllipticCurve):
        hyp = curve.as_hyperelliptic()
        label = label or curve.label
    else:
        hyp = curve
        label = label or curve.label
    g = hyp.genus
    anchors: dict[str, str] = {"genus": "computed: floor((deg(4f+h^2)-1)/2)"}
    facts = CurveFacts(label=label, genus=g, anchors=anchors)
    if hyp.has_rational_point_at_infinity():
        facts = facts.with_fact(
            has_k_point=True,
            anchor="computed: rational point above x = infinity on the smooth model",
        )
        facts = facts.with_fact(
            index=1, anchor="computed: a rational point gives index 1"
        )
    elif hyp.real_points_empty():
        facts = facts.with_fact(
            has_k_point=False,
            anchor="computed: the real locus is empty (negative definite right side)",
        )
        if g == 2:
            facts = facts.with_fact(
                index=2,
                anchor="computed: empty real locus forces even index; genus 2 caps it at 2",
            )
    facts = facts.with_fact(
        hyperelliptic=True, anchor="computed: the model is a double cover of the line"
    )
    if g >= 2:
        facts = facts.with_fact(
            gonality=2, anchor="computed: the double cover of the line has degree 2"
        )
    elif facts.has_k_point:
        facts = facts.with_fact(
            gonality=2 if g == 1 else 1,
            anchor="computed: pointed genus-1 curves have gonality 2",
        )
    return validate_facts(facts)
