"""Reduction types and root numbers of elliptic curves over Q and quadratic fields.

Classification at p works on a p-minimal model obtained by bounded u = p
substitutions: divide (c4, c6, disc) by (p^4, p^6, p^12) while the smaller
invariants still come from an integral model (Kraus criterion at p = 2, 3;
automatic for p >= 5).  Split vs nonsplit multiplicative reduction is the
classical square test on -c6, which is invariant under u-substitutions, so it
needs no minimality.

Root numbers are computed only in the two regimes where they reduce to finite
bookkeeping:

* semistable curves over Q or over a quadratic field: w = (-1)^(m+u) with m
  the number of places of split multiplicative reduction and u the number of
  archimedean places;
* arbitrary curves over a quadratic field in which every bad prime splits:
  the conjugate pairs of finite local factors cancel, leaving (-1)^u.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .curvemodel import EllipticCurve
from .polyarith import (
    factor_integer,
    is_square_in_qp,
    is_squarefree_int,
    kronecker,
    squarefree_kernel,
    valuation,
)

GOOD = "good"
SPLIT = "split-multiplicative"
NONSPLIT = "nonsplit-multiplicative"
ADDITIVE = "additive"


class NotSemistable(ValueError):
    """A root-number formula needed multiplicative reduction but met additive."""


def kraus_ok(c4: int, c6: int, p: int) -> bool:
    """Whether integers (c4, c6) with c4^3 - c6^2 = 1728*disc arise from a
    Weierstrass model over Z_p.  Only p = 2 and p = 3 carry a condition."""
    if p == 3:
        return c6 == 0 or valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:  # c6 = -1 mod 4
            return True
        return (c4 == 0 or valuation(c4, 2) >= 4) and c6 % 32 in (0, 8)
    return True


def integral_model(E: EllipticCurve) -> EllipticCurve:
    """Clear denominators by (x, y) -> (u^2 x, u^3 y) with an integer u."""
    m = 1
    for a in E.ainvs():
        m = lcm(m, a.denominator)
    return E.scale(m) if m > 1 else E


def _vp(n: int, p: int) -> int:
    # valuation with v_p(0) treated as +infinity for the reduction loop
    return 10**9 if n == 0 else valuation(n, p)


def _minimal_c4c6_at(c4: int, c6: int, disc: int, p: int) -> tuple[int, int, int]:
    while _vp(c4, p) >= 4 and _vp(c6, p) >= 6 and _vp(disc, p) >= 12:
        nxt = (c4 // p**4, c6 // p**6, disc // p**12)
        if not kraus_ok(nxt[0], nxt[1], p):
            break
        c4, c6, disc = nxt
    return c4, c6, disc


def _invariants(E: EllipticCurve) -> tuple[int, int, int]:
    E = integral_model(E)
    return int(E.c4), int(E.c6), int(E.discriminant)


@dataclass(frozen=True)
class ReductionData:
    """Reduction of E at p, read off a p-minimal model."""

    p: int
    kind: str
    v_disc: int
    v_c4: int | None  # None when c4 = 0 on the p-minimal model

    @property
    def is_bad(self) -> bool:
        return self.kind != GOOD

    @property
    def is_multiplicative(self) -> bool:
        return self.kind in (SPLIT, NONSPLIT)


def reduction_type(E: EllipticCurve, p: int) -> ReductionData:
    """good iff v(disc) = 0; multiplicative iff v(disc) > 0 = v(c4), split
    exactly when -c6 is a square in Q_p; additive otherwise."""
    c4, c6, disc = _minimal_c4c6_at(*_invariants(E), p)
    v_disc = valuation(disc, p)
    v_c4 = None if c4 == 0 else valuation(c4, p)
    if v_disc == 0:
        return ReductionData(p, GOOD, 0, v_c4)
    if v_c4 == 0:
        # multiplicative forces c6 != 0 (c6 = 0 pins j = 1728, never a j-pole)
        kind = SPLIT if is_square_in_qp(Fraction(-c6), p) else NONSPLIT
        return ReductionData(p, kind, v_disc, 0)
    return ReductionData(p, ADDITIVE, v_disc, v_c4)


def bad_primes(E: EllipticCurve) -> list[int]:
    """Primes where the minimal model of E has bad reduction, ascending."""
    _, _, disc = _invariants(E)
    return [p for p in sorted(factor_integer(abs(disc))) if reduction_type(E, p).is_bad]


def is_semistable(E: EllipticCurve) -> bool:
    return all(reduction_type(E, p).is_multiplicative for p in bad_primes(E))


def splits_in_quadratic(d: int, p: int) -> bool:
    """Whether p splits in Q(sqrt(d)) for squarefree d (p = 2: d = 1 mod 8)."""
    if p == 2:
        return d % 8 == 1
    return kronecker(d, p) == 1


def _check_quadratic_d(d: int) -> int:
    d = squarefree_kernel(d)
    if d == 1:
        raise ValueError("d must not be a rational square")
    return d


def root_number_semistable(E: EllipticCurve, d: int | None = None) -> int:
    """Root number of a semistable E over Q (d = None) or over Q(sqrt(d)).

    w = (-1)^(m+u): m counts places of split multiplicative reduction over the
    field, u counts archimedean places.  Multiplicative reduction persists
    under base change; at a non-split prime p the single place has completion
    Q_p(sqrt(d)), where -c6 becomes a square iff -c6 or -c6*d is one in Q_p.
    Raises NotSemistable at any additive prime.
    """
    if d is not None:
        d = _check_quadratic_d(d)
    _, c6, _ = _invariants(E)
    m = 0
    for p in bad_primes(E):
        red = reduction_type(E, p)
        if red.kind == ADDITIVE:
            raise NotSemistable(f"additive reduction at {p}")
        if d is None:
            m += red.kind == SPLIT
        elif splits_in_quadratic(d, p):
            m += 2 * (red.kind == SPLIT)
        else:
            m += is_square_in_qp(Fraction(-c6), p) or is_square_in_qp(Fraction(-c6 * d), p)
    u = 1 if d is None or d < 0 else 2
    return -1 if (m + u) % 2 else 1


def splitting_quadratic_root_number(E: EllipticCurve, d: int) -> int:
    """Root number of E over Q(sqrt(d)) when every bad prime of E splits there.

    The two places above a split prime carry identical local root numbers, so
    all finite bad contributions cancel in pairs -- no semistability needed --
    and w = (-1)^(number of archimedean places): -1 for d < 0, +1 for d > 0.
    """
    d = _check_quadratic_d(d)
    for p in bad_primes(E):
        if not splits_in_quadratic(d, p):
            raise ValueError(f"bad prime {p} does not split in Q(sqrt({d}))")
    return -1 if d < 0 else 1


def find_parity_twist(E1: EllipticCurve, E2: EllipticCurve, bound: int = 10_000) -> int:
    """Smallest-|d| negative squarefree d such that every prime of bad
    reduction of either curve splits in Q(sqrt(d)).

    Over that imaginary quadratic field both curves have root number -1 by the
    split-pair cancellation, whatever their reduction types over Q.
    """
    primes = sorted(set(bad_primes(E1)) | set(bad_primes(E2)))
    for n in range(1, bound + 1):
        if not is_squarefree_int(n):
            continue
        if all(splits_in_quadratic(-n, p) for p in primes):
            return -n
    raise LookupError(f"no twist with every bad prime split and |d| <= {bound}")


def nonpp_prime_check(E: EllipticCurve, p: int) -> bool:
    """Trace screen at a good prime p, the conjunction of three conditions:
    (1) p - a_p^2 > 0; (2) every prime factor of p - a_p^2 is 1 mod 3;
    (3) the class of p in (Z/7)^x / {+-1} has multiplicative order 3.

    Returns False as soon as one fails; counting a_p raises BadReduction when
    the model is bad or non-integral at p.
    """
    if p % 7 == 0:
        return False
    q, order = p % 7, 1
    while q not in (1, 6):  # {1, 6} is the identity class of (Z/7)^x/{+-1}
        q = (q * p) % 7
        order += 1
    if order != 3:
        return False
    n = p - E.ap(p) ** 2
    if n <= 0:
        return False
    return all(f % 3 == 1 for f in factor_integer(n))
