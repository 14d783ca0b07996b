"""Solvability of y^2 = U(x) over tame p-adic fields, with checkable certificates.

The solver decides whether a hyperelliptic equation has a point over a tame
extension K of Q_p (unramified degree f, then pi^e = p*u with p not dividing
e).  It recurses over residue discs, extracting content and applying either a
square-class decision or a Hensel argument at each disc; the recursion depth
and the working precision are bounded in terms of v_p(disc U), and anything
the bounds cannot settle comes back as `None` (inconclusive) rather than a
guess.

Positive answers carry a witness that `verify_certificate` re-checks with an
independent square root / Hensel criterion; negative answers carry the full
residue-disc tree, which the verifier replays transform by transform.  No
conclusion is ever accepted on the solver's say-so alone.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from .polyarith import Poly, discriminant, divisors, factor_integer, valuation
from .curvemodel import HyperellipticCurve, mod3_condition


class PrecisionExhausted(ArithmeticError):
    """Working precision cannot support a sound decision."""


class CertificateError(ValueError):
    """A certificate failed re-verification."""


def _is_prime(n: int) -> bool:
    return n >= 2 and factor_integer(n) == {n: 1}


# ---------------------------------------------------------------------------
# F_p[x] helpers (int tuples, ascending) for building residue fields

def _fp_trim(a: Sequence[int]) -> tuple[int, ...]:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _fp_mulmod(a, b, m, p):
    """a*b mod (m, p); m monic, result padded to deg(m) coefficients."""
    f = len(m) - 1
    prod = [0] * max(len(a) + len(b) - 1, 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k]
        if c:
            prod[k] = 0
            for i in range(f):
                prod[k - f + i] = (prod[k - f + i] - c * m[i]) % p
    prod = prod[:f] + [0] * max(f - len(prod), 0)
    return tuple(c % p for c in prod)


def _fp_powmod(a, n, m, p):
    f = len(m) - 1
    out = tuple([1] + [0] * (f - 1))
    base = a
    while n:
        if n & 1:
            out = _fp_mulmod(out, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        n >>= 1
    return out


def _fp_divmod(a, b, p):
    a, b = list(_fp_trim(a)), _fp_trim(b)
    if not b:
        raise ZeroDivisionError
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b):
        c = (a[-1] * inv) % p
        k = len(a) - len(b)
        q[k] = c
        for i, bi in enumerate(b):
            a[k + i] = (a[k + i] - c * bi) % p
        while a and a[-1] == 0:
            a.pop()
    return _fp_trim(q), _fp_trim(a)


def _fp_gcd(a, b, p):
    a, b = _fp_trim(a), _fp_trim(b)
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    return a


def _is_irreducible(m, p):
    f = len(m) - 1
    if f == 1:
        return True
    x = tuple([0, 1] + [0] * (f - 2))
    frob = x
    for k in range(1, f + 1):
        frob = _fp_powmod(frob, p, m, p)
        if k < f and f % k == 0 and (f // k) in factor_integer(f):
            # k = f/l for a prime l: require gcd(x^(p^k) - x, m) = 1
            diff = tuple((frob[i] - x[i]) % p for i in range(f))
            if len(_fp_gcd(diff, m, p)) > 1:
                return False
    return _fp_trim(frob) == _fp_trim(x)


def _min_irreducible(p: int, f: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree f over F_p (lex on low coefficients)."""
    if f == 1:
        return (0, 1)
    for k in range(p**f):
        digits, kk = [], k
        for _ in range(f):
            digits.append(kk % p)
            kk //= p
        cand = tuple(digits) + (1,)
        if _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")  # unreachable


def smallest_nonresidue(p: int) -> int:
    """Least positive quadratic nonresidue mod an odd prime."""
    if p == 2 or not _is_prime(p):
        raise ValueError("need an odd prime")
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# tame local fields

@dataclass(frozen=True)
class LocalField:
    """Tame extension of Q_p: unramified of degree f, then pi^e = p*u.

    u is a unit of the unramified part, as an int or a coefficient vector
    over the residue generator; e = 1 forces u = 1.  p = 2 supports only
    unramified fields.  N is the requested working precision in p-digits;
    None lets the solver pick v_p(disc) + 4.
    """

    p: int
    f: int = 1
    e: int = 1
    u: int | tuple[int, ...] = 1
    N: Optional[int] = None

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.f < 1 or self.e < 1:
            raise ValueError("need f >= 1 and e >= 1")
        if self.e % self.p == 0:
            raise ValueError("wild ramification (p | e) is out of scope")
        if self.p == 2 and self.e != 1:
            raise ValueError("ramified 2-adic fields are out of scope")
        u = self.u
        u = [u] if isinstance(u, int) else [int(c) for c in u]
        while len(u) > 1 and u[-1] == 0:
            u.pop()
        if self.e == 1 and u != [1]:
            # unramified fields do not depend on u; pin it to 1
            raise ValueError("e = 1 forces u = 1")
        object.__setattr__(self, "u", u[0] if len(u) == 1 else tuple(u))

    @property
    def degree(self) -> int:
        return self.e * self.f

    def u_vector(self) -> tuple[int, ...]:
        u = self.u if isinstance(self.u, tuple) else (self.u,)
        return tuple(u[i] if i < len(u) else 0 for i in range(self.f))

    def describe(self) -> str:
        if self.e == 1 and self.f == 1:
            return f"Q_{self.p}"
        if self.e == 1:
            return f"unramified extension of Q_{self.p} of degree {self.f}"
        base = f"Q_{self.p}" if self.f == 1 else f"the unramified degree-{self.f} extension of Q_{self.p}"
        u = self.u
        if u == 1:
            return f"{base} with pi^{self.e} = {self.p}"
        return f"{base} with pi^{self.e} = {self.p}*{u}"

    def to_json(self) -> dict:
        u = list(self.u) if isinstance(self.u, tuple) else self.u
        return {"p": self.p, "f": self.f, "e": self.e, "u": u, "N": self.N}

    @classmethod
    def from_json(cls, obj: dict) -> "LocalField":
        u = obj.get("u", 1)
        if isinstance(u, list):
            u = tuple(u)
        return cls(int(obj["p"]), int(obj.get("f", 1)), int(obj.get("e", 1)), u, obj.get("N"))


# ---------------------------------------------------------------------------
# the ring of integers, coordinates mod p^M over the basis a^i pi^j

class LocalRing:
    """O_K with elements as coordinate tuples mod p^M over the basis a^i pi^j."""

    def __init__(self, field: LocalField, digits: int):
        self.fld = field
        self.p, self.e, self.f = field.p, field.e, field.f
        self.M = digits
        self.mod = self.p**digits
        self.n = self.e * self.f
        self.q = self.p**self.f
        self.mpoly = _min_irreducible(self.p, self.f)
        self.u_w = tuple(c % self.mod for c in field.u_vector())
        if all(c % self.p == 0 for c in self.u_w):
            raise ValueError("u must be a unit")
        self.zero = (0,) * self.n
        self.one = self.from_int(1)
        if self.e > 1:
            self.pi = tuple(1 if k == self.f else 0 for k in range(self.n))
        else:
            self.pi = self.from_int(self.p)
        self.val_cap = self.e * self.M
        self.u_w_inv = self._w_inv(self.u_w)
        self._squares8 = self._unit_squares_mod8() if self.p == 2 else None

    # -- W = unramified part: vectors of length f ---------------------------
    def _w_reduce(self, prod: list[int]) -> tuple[int, ...]:
        f = self.f
        for k in range(len(prod) - 1, f - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i in range(f):
                    prod[k - f + i] = (prod[k - f + i] - c * self.mpoly[i]) % self.mod
        prod = prod[:f] + [0] * max(f - len(prod), 0)
        return tuple(c % self.mod for c in prod)

    def _w_mul(self, a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
        prod = [0] * max(len(a) + len(b) - 1, 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] = (prod[i + j] + ai * bj) % self.mod
        return self._w_reduce(prod)

    def _w_inv(self, a: Sequence[int]) -> tuple[int, ...]:
        # invert in F_q, then Newton-lift:  x <- x (2 - a x)
        res = tuple(c % self.p for c in a)
        x = _fp_powmod(res, self.q - 2, self.mpoly, self.p)
        x = tuple(c % self.mod for c in x)
        two = tuple((2 if i == 0 else 0) for i in range(self.f))
        for _ in range(self.M.bit_length() + 2):
            ax = self._w_mul(a, x)
            corr = tuple((two[i] - ax[i]) % self.mod for i in range(self.f))
            x = self._w_mul(x, corr)
        return x

    # -- full ring elements --------------------------------------------------
    def from_int(self, c: int):
        return (c % self.mod,) + (0,) * (self.n - 1)

    def from_w(self, w: Sequence[int]):
        return tuple(w[i] % self.mod if i < len(w) else 0 for i in range(self.f)) + (0,) * (
            self.n - self.f
        )

    def add(self, z, w):
        return tuple((a + b) % self.mod for a, b in zip(z, w))

    def sub(self, z, w):
        return tuple((a - b) % self.mod for a, b in zip(z, w))

    def neg(self, z):
        return tuple((-a) % self.mod for a in z)

    def mul_int(self, k: int, z):
        return tuple((k * a) % self.mod for a in z)

    def mul(self, z, w):
        e, f = self.e, self.f
        slots = [[0] * (2 * f - 1 if f > 1 else 1) for _ in range(2 * e - 1)]
        for j1 in range(e):
            c1 = z[j1 * f : (j1 + 1) * f]
            if not any(c1):
                continue
            for j2 in range(e):
                c2 = w[j2 * f : (j2 + 1) * f]
                if not any(c2):
                    continue
                tgt = slots[j1 + j2]
                for i1, a1 in enumerate(c1):
                    if a1:
                        for i2, a2 in enumerate(c2):
                            tgt[i1 + i2] = (tgt[i1 + i2] + a1 * a2) % self.mod
        # fold pi^j for j >= e using pi^e = p * u
        for j in range(2 * e - 2, e - 1, -1):
            if not any(slots[j]):
                continue
            wv = self._w_reduce(slots[j][:])
            wv = self._w_mul(wv, self.u_w)
            for i in range(f):
                slots[j - e][i] = (slots[j - e][i] + self.p * wv[i]) % self.mod
            slots[j] = [0] * len(slots[j])
        out: list[int] = []
        for j in range(e):
            out.extend(self._w_reduce(slots[j][:]))
        return tuple(out)

    def val(self, z) -> int:
        """pi-adic valuation, capped at e*M."""
        best = self.val_cap
        for j in range(self.e):
            vj = self.M
            for c in z[j * self.f : (j + 1) * self.f]:
                if c:
                    v, cc = 0, c
                    while cc % self.p == 0:
                        cc //= self.p
                        v += 1
                    vj = min(vj, v)
            if vj < self.M:
                best = min(best, self.e * vj + j)
        return best

    def div_pi(self, z):
        f, e = self.f, self.e
        c0 = z[:f]
        if any(c % self.p for c in c0):
            raise PrecisionExhausted("div_pi applied to a unit")
        top = self._w_mul(tuple((c // self.p) % self.mod for c in c0), self.u_w_inv)
        out = list(z[f:]) + [0] * f
        for i in range(f):
            out[(e - 1) * f + i] = (out[(e - 1) * f + i] + top[i]) % self.mod
        return tuple(out)

    def unit_part(self, z, v: int):
        for _ in range(v):
            z = self.div_pi(z)
        return z

    def div(self, z, w):
        """z / w for val(z) >= val(w); exact up to the usual digit loss."""
        v = self.val(w)
        if v >= self.val_cap:
            raise ZeroDivisionError("division by (numerically) zero")
        uw = self.unit_part(w, v)
        return self.mul(self.unit_part(z, v), self.inv_unit(uw))

    def inv_unit(self, z):
        if self.val(z) != 0:
            raise ValueError("inv_unit needs a unit")
        x = self.from_w(self._w_inv(z[: self.f]))
        two = self.from_int(2)
        for _ in range(self.val_cap.bit_length() + 2):
            x = self.mul(x, self.sub(two, self.mul(z, x)))
        return x

    # -- residue field -------------------------------------------------------
    def residue(self, z) -> tuple[int, ...]:
        return tuple(c % self.p for c in z[: self.f])

    def fq_mul(self, a, b):
        return _fp_mulmod(a, b, self.mpoly, self.p)

    def fq_pow(self, a, n):
        return _fp_powmod(a, n, self.mpoly, self.p)

    def fq_one(self):
        return tuple([1] + [0] * (self.f - 1))

    def fq_is_square(self, a) -> bool:
        if not any(a):
            raise ValueError("0 is not a unit residue")
        if self.p == 2:
            return True  # every unit of F_{2^f} is a square
        return self.fq_pow(a, (self.q - 1) // 2) == self.fq_one()

    def fq_elements(self):
        return [tuple(d) for d in itertools.product(range(self.p), repeat=self.f)]

    def fq_generator(self) -> tuple[int, ...]:
        primes = list(factor_integer(self.q - 1))
        for cand in self.fq_elements():
            if not any(cand):
                continue
            if all(self.fq_pow(cand, (self.q - 1) // l) != self.fq_one() for l in primes):
                return cand
        raise AssertionError("unreachable")

    # -- square testing ------------------------------------------------------
    def _unit_squares_mod8(self) -> frozenset:
        f = self.f
        sq = set()
        for digits in itertools.product(range(8), repeat=f):
            if digits[0] % 2 == 0 and all(d % 2 == 0 for d in digits):
                continue
            prod = [0] * (2 * f - 1 if f > 1 else 1)
            for i, ai in enumerate(digits):
                for j, bj in enumerate(digits):
                    prod[i + j] = (prod[i + j] + ai * bj) % 8
            for k in range(len(prod) - 1, f - 1, -1):
                c = prod[k]
                if c:
                    prod[k] = 0
                    for i in range(f):
                        prod[k - f + i] = (prod[k - f + i] - c * self.mpoly[i]) % 8
            sq.add(tuple(prod[:f]) + (0,) * max(f - len(prod), 0))
        return frozenset(sq)

    def w_mod8(self, z) -> tuple[int, ...]:
        return tuple(c % 8 for c in z[: self.f])

    def unit_square_mod8(self, z) -> bool:
        return self.w_mod8(z) in self._squares8

    def is_square(self, z) -> bool:
        """z a square in K^*; raises if z is indistinguishable from 0."""
        v = self.val(z)
        if v >= self.val_cap:
            raise PrecisionExhausted("cannot test squareness of (numerically) zero")
        if v % 2:
            return False
        u = self.unit_part(z, v)
        if self.p == 2:
            return self.unit_square_mod8(u)
        return self.fq_is_square(self.residue(u))

    def sqrt_unit(self, z):
        """Square root of a unit square, by Newton from a residue-level root."""
        if self.p == 2:
            start = None
            for digits in itertools.product(range(8), repeat=self.f):
                cand = self.from_w(digits)
                if self.w_mod8(self.mul(cand, cand)) == self.w_mod8(z):
                    start = cand
                    break
            if start is None:
                raise ValueError("not a square")
            x = start
            for _ in range(self.val_cap + 2):
                d = self.sub(self.mul(x, x), z)
                if self.val(d) >= self.val_cap - 1:
                    break
                # x <- x - (x^2 - z) / (2x)
                x = self.sub(x, self.mul(self.div_pi(d), self.inv_unit(x)))
            return x
        res = self.residue(z)
        root = None
        for cand in self.fq_elements():
            if self.fq_mul(cand, cand) == res:
                root = cand
                break
        if root is None:
            raise ValueError("not a square")
        x = self.from_w(root)
        inv2 = self.inv_unit(self.from_int(2))
        for _ in range(self.val_cap.bit_length() + 3):
            d = self.sub(self.mul(x, x), z)
            if self.val(d) >= self.val_cap:
                break
            x = self.sub(x, self.mul(self.mul(d, inv2), self.inv_unit(x)))
        return x

    def verify_square(self, z, margin: int) -> bool:
        """Independently certify that z is a square (val + verified sqrt)."""
        v = self.val(z)
        if v >= self.val_cap - margin:
            raise PrecisionExhausted("value too close to zero to certify")
        if v % 2:
            return False
        u = self.unit_part(z, v)
        if not self.is_square(u):
            return False
        s = self.sqrt_unit(u)
        need = 2 * self.val(self.from_int(2)) + 1  # Hensel threshold for squares
        ok = self.val(self.sub(self.mul(s, s), u)) >= min(need + margin, self.val_cap - margin)
        if not ok:
            raise PrecisionExhausted("square witness did not refine")
        return True

    # -- polynomials over the ring (coefficient lists, ascending) -----------
    def rp_from_ints(self, ints: Sequence[int]):
        return [self.from_int(c) for c in ints]

    def rp_eval(self, coeffs, x):
        acc = self.zero
        for c in reversed(coeffs):
            acc = self.add(self.mul(acc, x), c)
        return acc

    def rp_derivative(self, coeffs):
        return [self.mul_int(k, c) for k, c in enumerate(coeffs)][1:] or [self.zero]

    def rp_shift_scale(self, coeffs, r, s):
        """Coefficients of H(r + s*t) as a polynomial in t."""
        acc: list = []
        for c in reversed(coeffs):
            # acc <- acc * (r + s t) + c
            new = [self.zero] * (len(acc) + 1)
            for k, a in enumerate(acc):
                new[k] = self.add(new[k], self.mul(a, r))
                new[k + 1] = self.add(new[k + 1], self.mul(a, s))
            new[0] = self.add(new[0], c)
            acc = new
        return acc or [self.zero]

    def rp_content(self, coeffs, limit: int) -> int:
        m = min(self.val(c) for c in coeffs)
        if m >= limit:
            raise PrecisionExhausted("polynomial is numerically zero")
        return m

    def rp_div_pi(self, coeffs, m: int):
        out = coeffs
        for _ in range(m):
            out = [self.div_pi(c) for c in out]
        return out


# ---------------------------------------------------------------------------
# the disc-recursion solver

_MARGIN = 6


class _ChartSolver:
    """Decides one chart: exists t in O_K with P(t) a square in K."""

    def __init__(self, ring: LocalRing, base_coeffs, depth_cap: int):
        self.ring = ring
        self.base = base_coeffs
        self.dbase = ring.rp_derivative(base_coeffs)
        self.depth_cap = depth_cap
        self.witness: Optional[dict] = None

    def run(self):
        ring = self.ring
        node: dict = {}
        res = self._solve(list(self.base), 0, 0, 0, ring.zero, ring.one, node)
        return res, node

    # A, B: the current chart variable is x = A + B*t
    def _solve(self, coeffs, par, depth, lost, A, B, node):
        ring = self.ring
        reliable = ring.val_cap - lost
        if reliable <= 4 * _MARGIN:
            node["case"] = "precision-out"
            return None
        try:
            m = ring.rp_content(coeffs, reliable - _MARGIN)
        except PrecisionExhausted:
            node["case"] = "precision-out"
            return None
        if m:
            coeffs = ring.rp_div_pi(coeffs, m)
            lost += m * ring.e
            par = (par + m) % 2
            reliable = ring.val_cap - lost
        node["content"] = m
        node["par"] = par
        if depth > self.depth_cap:
            node["case"] = "depth-cutoff"
            return None
        dcoeffs = ring.rp_derivative(coeffs)
        branches: list[dict] = []
        node["branches"] = branches
        saw_none = False
        if ring.p == 2:
            residues = [
                ring.from_w(d) for d in itertools.product(range(8), repeat=ring.f)
            ]
            step = ring.from_int(8)
        else:
            residues = [ring.from_w(d) for d in ring.fq_elements()]
            step = ring.pi
        for r in residues:
            br: dict = {"r": list(r[: ring.f])}
            branches.append(br)
            w = ring.rp_eval(coeffs, r)
            dw = ring.rp_eval(dcoeffs, r)
            vw = min(ring.val(w), reliable)
            vdw = ring.val(dw)
            if vw > 2 * vdw and 2 * vdw + _MARGIN <= reliable:
                br["case"] = "hensel-root"
                try:
                    self._near_root_witness(coeffs, dcoeffs, r, A, B, reliable)
                    return True
                except PrecisionExhausted:
                    br["case"] = "hensel-unverified"
                    saw_none = True
                    continue
            if ring.p == 2:
                outcome = self._branch_2adic(coeffs, par, depth, lost, A, B, r, step, w, vw, br)
            else:
                outcome = self._branch_odd(coeffs, par, depth, lost, A, B, r, step, w, vw, br)
            if outcome is True:
                return True
            if outcome is None:
                saw_none = True
        return None if saw_none else False

    def _branch_odd(self, coeffs, par, depth, lost, A, B, r, step, w, vw, br):
        ring = self.ring
        if vw == 0:
            res = ring.residue(w)
            if par != 0:
                br["case"] = "dead-parity"
                return False
            if not ring.fq_is_square(res):
                br["case"] = "dead-nonsquare"
                return False
            br["case"] = "found-square"
            try:
                self._square_witness(A, B, r)
                return True
            except PrecisionExhausted:
                br["case"] = "found-unverified"
                return None
        return self._recurse(coeffs, par, depth, lost, A, B, r, step, br)

    def _branch_2adic(self, coeffs, par, depth, lost, A, B, r, step, w, vw, br):
        ring = self.ring
        # within the disc t = r + 8 t', values are stable mod 8
        if vw < 3 and vw % 2 != par:
            br["case"] = "dead-parity"
            return False
        if vw == 0:
            if ring.unit_square_mod8(w):
                br["case"] = "found-square"
                try:
                    self._square_witness(A, B, r)
                    return True
                except PrecisionExhausted:
                    br["case"] = "found-unverified"
                    return None
            br["case"] = "dead-nonsquare"
            return False
        return self._recurse(coeffs, par, depth, lost, A, B, r, step, br)

    def _recurse(self, coeffs, par, depth, lost, A, B, r, step, br):
        ring = self.ring
        br["case"] = "branch"
        child: dict = {}
        br["child"] = child
        sub = ring.rp_shift_scale(coeffs, r, step)
        A2 = ring.add(A, ring.mul(B, r))
        B2 = ring.mul(B, step)
        return self._solve(sub, par, depth + 1, lost, A2, B2, child)

    def _square_witness(self, A, B, r):
        ring = self.ring
        x_star = ring.add(A, ring.mul(B, r))
        z = ring.rp_eval(self.base, x_star)
        if not ring.verify_square(z, _MARGIN):
            raise PrecisionExhausted("claimed square failed the independent check")
        self.witness = {"kind": "unit-square", "x": list(x_star)}

    def _near_root_witness(self, coeffs, dcoeffs, r, A, B, reliable):
        ring = self.ring
        t = r
        for _ in range(40):
            x_star = ring.add(A, ring.mul(B, t))
            w0 = ring.rp_eval(self.base, x_star)
            dw0 = ring.rp_eval(self.dbase, x_star)
            vw0 = min(ring.val(w0), reliable)
            vdw0 = ring.val(dw0)
            if vw0 > 2 * vdw0 and 2 * vdw0 + _MARGIN <= reliable:
                self.witness = {"kind": "near-root", "x": list(x_star)}
                return
            hw = ring.rp_eval(coeffs, t)
            hdw = ring.rp_eval(dcoeffs, t)
            if ring.val(hw) >= reliable - _MARGIN:
                break
            if ring.val(hw) <= 2 * ring.val(hdw):
                break
            t = ring.sub(t, ring.div(hw, hdw))
        raise PrecisionExhausted("near-root witness did not refine")


# ---------------------------------------------------------------------------
# certificates

@dataclass
class LocalCertificate:
    kind: str
    payload: dict

    def to_json(self) -> dict:
        return {"kind": self.kind, "payload": self.payload}

    @classmethod
    def from_json(cls, obj: dict) -> "LocalCertificate":
        return cls(obj["kind"], obj["payload"])


def _u_poly_ints(target: HyperellipticCurve | Poly) -> tuple[int, ...]:
    U = target.u_poly() if isinstance(target, HyperellipticCurve) else target
    return U.integer_coeffs()


def _chart_polys(ring: LocalRing, ints: Sequence[int]):
    """The affine chart U(x), x in O, and the far chart rev(U)(pi*s), s in O."""
    affine = ring.rp_from_ints(ints)
    rev = list(reversed(ints))
    far = []
    piv = ring.one
    for c in rev:
        far.append(ring.mul(ring.from_int(c), piv))
        piv = ring.mul(piv, ring.pi)
    return affine, far


def has_local_points(
    target: HyperellipticCurve | Poly, K: LocalField
) -> tuple[Optional[bool], LocalCertificate]:
    """Does y^2 = U(x) have a K-point?  (True / False / None = inconclusive.)

    Certificates: odd degree is a rational branch point at infinity; positive
    answers carry an x-coordinate witness; negative answers carry the full
    residue-disc trees of both charts.
    """
    ints = _u_poly_ints(target)
    U = Poly(tuple(ints))
    payload: dict = {"field": K.to_json(), "poly": list(ints)}
    if U.degree % 2 == 1:
        payload.update(conclusion=True, reason="odd-degree")
        return True, LocalCertificate("local-points", payload)
    disc = discriminant(U)
    vdisc = valuation(disc.numerator, K.p)
    required = vdisc + 2
    N = K.N if K.N is not None else vdisc + 4
    if N < required:
        payload.update(
            conclusion=None, reason="insufficient-precision", required_digits=required, given=N
        )
        return None, LocalCertificate("local-points", payload)
    # the chart solver refuses to work with fewer than 4*_MARGIN reliable
    # digits, and recursion can burn roughly vdisc*e more; budget for both.
    digits = (vdisc + 6) * (K.e + 1) + N + 4 * _MARGIN + 2
    ring = LocalRing(K, digits)
    depth_cap = (vdisc + 8) if K.p == 2 else (K.e * vdisc + 2)
    payload.update(digits=digits, vdisc=vdisc, depth_cap=depth_cap)
    affine, far = _chart_polys(ring, ints)
    results = {}
    witness = None
    for name, coeffs in (("affine", affine), ("infinity", far)):
        solver = _ChartSolver(ring, coeffs, depth_cap)
        res, node = solver.run()
        results[name] = (res, node)
        payload.setdefault("charts", {})[name] = node
        if res is True:
            witness = {"chart": name, **solver.witness}
            break
    if witness is not None:
        payload.update(conclusion=True, witness=witness)
        return True, LocalCertificate("local-points", payload)
    vals = [results[n][0] for n in results]
    conclusion = False if all(v is False for v in vals) and len(vals) == 2 else None
    payload.update(conclusion=conclusion)
    return conclusion, LocalCertificate("local-points", payload)


def quadratic_twist_fields(p: int) -> list[LocalField]:
    """Q_p and its three quadratic extensions (odd p)."""
    if p == 2:
        raise ValueError("quadratic completions at 2 are out of scope")
    u0 = smallest_nonresidue(p)
    return [
        LocalField(p),
        LocalField(p, f=2),
        LocalField(p, e=2, u=1),
        LocalField(p, e=2, u=u0),
    ]


def quadratic_obstruction(
    C: HyperellipticCurve | Poly, D: HyperellipticCurve | Poly, p: int
) -> tuple[Optional[bool], LocalCertificate]:
    """True when no quadratic completion at p has points on both curves.

    A True answer obstructs simultaneous quadratic points locally at p; a
    False answer exhibits a completion with points on both; None propagates
    any inconclusive local solve that the conclusion would depend on.
    """
    fields = quadratic_twist_fields(p)
    table = []
    some_joint = False
    all_blocked = True
    for K in fields:
        rC, cC = has_local_points(C, K)
        rD, cD = has_local_points(D, K)
        table.append(
            {"field": K.to_json(), "C": cC.to_json(), "D": cD.to_json()}
        )
        if rC is True and rD is True:
            some_joint = True
        if not (rC is False or rD is False):
            all_blocked = False
    conclusion: Optional[bool]
    if some_joint:
        conclusion = False
    elif all_blocked:
        conclusion = True
    else:
        conclusion = None
    payload = {
        "p": p,
        "C": list(_u_poly_ints(C)),
        "D": list(_u_poly_ints(D)),
        "fields": table,
        "conclusion": conclusion,
    }
    return conclusion, LocalCertificate("quadratic-obstruction", payload)


def _tame_fields_for_degree(p: int, d: int) -> tuple[list[LocalField], bool, bool]:
    """(tame fields of degree d over Q_p, wild extensions exist, some tame untestable)."""
    fields: list[LocalField] = []
    untestable = False
    for e in divisors(d):
        f = d // e
        if e % p == 0:
            continue
        if p == 2 and e != 1:
            untestable = True  # tame but ramified 2-adic: out of scope
            continue
        if e == 1:
            fields.append(LocalField(p, f=f))
            continue
        probe = LocalRing(LocalField(p, f=f), 1)
        q = probe.q
        classes = gcd(e, q - 1)
        g = probe.fq_generator()
        rep = probe.fq_one()
        for _ in range(classes):
            u = rep if f > 1 else rep[0]
            fields.append(LocalField(p, f=f, e=e, u=u))
            rep = probe.fq_mul(rep, g)
    wild = d % p == 0
    return fields, wild, untestable


def degree_divisibility(
    target: HyperellipticCurve | Poly, p: int, d_max: int
) -> tuple[dict[int, str], LocalCertificate]:
    """For each d <= d_max: can the curve have a point over a degree-d extension?

    "possible" exhibits a tame field with points; "impossible" means every
    extension of that degree (all tame, and none wild exists) was excluded;
    "unknown" covers inconclusive solves and wild or unsupported fields.
    """
    ints = _u_poly_ints(target)
    U = Poly(tuple(ints))
    statuses: dict[int, str] = {}
    per_degree: dict = {}
    for d in range(1, d_max + 1):
        fields, wild, untestable = _tame_fields_for_degree(p, d)
        entries = []
        verdicts = []
        for K in fields:
            res, cert = has_local_points(U, K)
            entries.append(cert.to_json())
            verdicts.append(res)
        if any(v is True for v in verdicts):
            status = "possible"
        elif any(v is None for v in verdicts) or wild or untestable:
            status = "unknown"
        else:
            status = "impossible"
        statuses[d] = status
        per_degree[str(d)] = {
            "status": status,
            "wild_exists": wild,
            "untestable_tame": untestable,
            "fields": entries,
        }
    payload = {"p": p, "poly": list(ints), "d_max": d_max, "per_degree": per_degree}
    return statuses, LocalCertificate("degree-divisibility", payload)


def surface_qp_empty_mod3(f: Poly, g: Poly) -> tuple[bool, LocalCertificate]:
    """Certify z^2 = f(x) g(w) has no 3-adic points, by residue classes.

    Needs: every value and the leading coefficient of f lie in -1 mod 3, of g
    in +1 mod 3, and both degrees even.  Then v_3(f(x)) and v_3(g(w)) are even
    with unit parts -1 and +1 at every point of P^1 x P^1, so the product is
    exactly the nonsquare class -1 and the equation is insoluble.
    """
    if f.degree % 2 or g.degree % 2:
        raise CertificateError("both degrees must be even for the far charts")
    if not mod3_condition(f, -1):
        raise CertificateError("f must have all values and lc congruent to -1 mod 3")
    if not mod3_condition(g, 1):
        raise CertificateError("g must have all values and lc congruent to +1 mod 3")
    payload = {
        "p": 3,
        "f": [int(c) for c in f.integer_coeffs()],
        "g": [int(c) for c in g.integer_coeffs()],
        "f_class": -1,
        "g_class": 1,
        "conclusion": True,
    }
    return True, LocalCertificate("surface-empty-mod3", payload)


# ---------------------------------------------------------------------------
# verification: replay certificates without trusting solver state

def _verify_tree(ring: LocalRing, coeffs, par, depth, depth_cap, lost, node, strict: bool):
    """Replay one residue-disc tree; strict=True forbids undecided leaves."""
    reliable = ring.val_cap - lost
    case = node.get("case")
    if case in ("precision-out", "depth-cutoff"):
        if strict:
            raise CertificateError("an undecided leaf cannot support a negative conclusion")
        return
    try:
        m = ring.rp_content(coeffs, reliable - _MARGIN)
    except PrecisionExhausted as exc:
        raise CertificateError(f"tree node is numerically degenerate: {exc}")
    if m != node.get("content"):
        raise CertificateError("recorded content does not match")
    if m:
        coeffs = ring.rp_div_pi(coeffs, m)
        lost += m * ring.e
        par = (par + m) % 2
        reliable = ring.val_cap - lost
    if par != node.get("par"):
        raise CertificateError("recorded parity does not match")
    if depth > depth_cap:
        raise CertificateError("tree exceeds its declared depth cap")
    branches = node.get("branches")
    if branches is None:
        raise CertificateError("negative conclusion requires a full branch list")
    if ring.p == 2:
        wanted = [tuple(d) for d in itertools.product(range(8), repeat=ring.f)]
        step = ring.from_int(8)
    else:
        wanted = ring.fq_elements()
        step = ring.pi
    seen = [tuple(br["r"]) for br in branches]
    if sorted(seen) != sorted(wanted):
        raise CertificateError("branch list does not cover the residue system")
    dcoeffs = ring.rp_derivative(coeffs)
    for br in branches:
        r = ring.from_w(br["r"])
        case = br["case"]
        w = ring.rp_eval(coeffs, r)
        vw = min(ring.val(w), reliable)
        if case in ("hensel-root", "found-square", "found-unverified", "hensel-unverified"):
            if strict:
                raise CertificateError("a negative tree cannot contain found/unverified branches")
            continue
        if case == "dead-parity":
            if ring.p == 2:
                if not (vw < 3 and vw % 2 != par):
                    raise CertificateError("dead-parity branch does not re-check (2-adic)")
            else:
                if not (vw == 0 and par != 0):
                    raise CertificateError("dead-parity branch does not re-check")
            continue
        if case == "dead-nonsquare":
            if vw != 0:
                raise CertificateError("dead-nonsquare branch is not a unit")
            if ring.p == 2:
                if ring.unit_square_mod8(w):
                    raise CertificateError("claimed nonsquare is a square mod 8")
            else:
                if par != 0:
                    raise CertificateError("nonsquare branch with parity obstruction")
                if ring.fq_is_square(ring.residue(w)):
                    raise CertificateError("claimed nonsquare residue is a square")
            continue
        if case == "branch":
            # a refined disc must not itself be a decided unit for odd p
            dw = ring.rp_eval(dcoeffs, r)
            vdw = ring.val(dw)
            if strict and vw > 2 * vdw and 2 * vdw + _MARGIN <= reliable:
                raise CertificateError("branch hides a Hensel root")
            if ring.p != 2 and vw == 0:
                raise CertificateError("unit disc must be decided, not refined")
            sub = ring.rp_shift_scale(coeffs, r, step)
            _verify_tree(ring, sub, par, depth + 1, depth_cap, lost, br["child"], strict)
            continue
        raise CertificateError(f"unknown branch case {case!r}")


def _verify_local_points(payload: dict) -> bool:
    K = LocalField.from_json(payload["field"])
    ints = payload["poly"]
    U = Poly(tuple(ints))
    conclusion = payload.get("conclusion")
    if payload.get("reason") == "odd-degree":
        if U.degree % 2 != 1 or conclusion is not True:
            raise CertificateError("odd-degree certificate on an even-degree polynomial")
        return True
    if payload.get("reason") == "insufficient-precision":
        if conclusion is not None:
            raise CertificateError("a precision bailout cannot carry a conclusion")
        return True
    if U.degree % 2 == 1:
        raise CertificateError("even-degree machinery on an odd-degree polynomial")
    digits = payload["digits"]
    ring = LocalRing(K, digits)
    affine, far = _chart_polys(ring, ints)
    charts = {"affine": affine, "infinity": far}
    if conclusion is True:
        wit = payload.get("witness")
        if not wit:
            raise CertificateError("positive conclusion without witness")
        coeffs = charts[wit["chart"]]
        x = tuple(c % ring.mod for c in wit["x"])
        z = ring.rp_eval(coeffs, x)
        if wit["kind"] == "unit-square":
            if not ring.verify_square(z, _MARGIN):
                raise CertificateError("witness value is not a square")
            return True
        if wit["kind"] == "near-root":
            dz = ring.rp_eval(ring.rp_derivative(coeffs), x)
            vw = min(ring.val(z), ring.val_cap)
            vdw = ring.val(dz)
            if not (vw > 2 * vdw and 2 * vdw + _MARGIN <= ring.val_cap):
                raise CertificateError("near-root witness fails the Hensel criterion")
            return True
        raise CertificateError(f"unknown witness kind {wit['kind']!r}")
    if conclusion is False:
        depth_cap = payload["depth_cap"]
        for name, coeffs in charts.items():
            node = payload["charts"].get(name)
            if node is None:
                raise CertificateError("negative conclusion with a missing chart")
            _verify_tree(ring, coeffs, 0, 0, depth_cap, 0, node, strict=True)
        return True
    return True  # inconclusive certificates assert nothing


def verify_certificate(cert: LocalCertificate | dict) -> bool:
    """Re-check a certificate; True on success, CertificateError on failure."""
    if isinstance(cert, dict):
        cert = LocalCertificate.from_json(cert)
    payload = cert.payload
    if cert.kind == "local-points":
        return _verify_local_points(payload)
    if cert.kind == "quadratic-obstruction":
        p = payload["p"]
        expected = [K.to_json() for K in quadratic_twist_fields(p)]
        recorded = [row["field"] for row in payload["fields"]]
        if recorded != expected:
            raise CertificateError("field list is not the full set of quadratic completions")
        all_blocked, some_joint = True, False
        for row in payload["fields"]:
            cC, cD = row["C"], row["D"]
            verify_certificate(cC)
            verify_certificate(cD)
            rC = cC["payload"].get("conclusion")
            rD = cD["payload"].get("conclusion")
            if rC is True and rD is True:
                some_joint = True
            if not (rC is False or rD is False):
                all_blocked = False
        want = False if some_joint else (True if all_blocked else None)
        if payload["conclusion"] != want:
            raise CertificateError("obstruction conclusion is not entailed by the table")
        return True
    if cert.kind == "degree-divisibility":
        p, d_max = payload["p"], payload["d_max"]
        for d in range(1, d_max + 1):
            entry = payload["per_degree"][str(d)]
            fields, wild, untestable = _tame_fields_for_degree(p, d)
            expected = [K.to_json() for K in fields]
            recorded = [c["payload"]["field"] for c in entry["fields"]]
            if recorded != expected:
                raise CertificateError(f"tame field enumeration differs at degree {d}")
            if entry["wild_exists"] != wild or entry["untestable_tame"] != untestable:
                raise CertificateError(f"wild/untestable flags differ at degree {d}")
            verdicts = []
            for c in entry["fields"]:
                verify_certificate(c)
                verdicts.append(c["payload"].get("conclusion"))
            if any(v is True for v in verdicts):
                want = "possible"
            elif any(v is None for v in verdicts) or wild or untestable:
                want = "unknown"
            else:
                want = "impossible"
            if entry["status"] != want:
                raise CertificateError(f"status not entailed at degree {d}")
        return True
    if cert.kind == "surface-empty-mod3":
        f = Poly(tuple(payload["f"]))
        g = Poly(tuple(payload["g"]))
        ok, _ = surface_qp_empty_mod3(f, g)
        return ok
    raise CertificateError(f"unknown certificate kind {cert.kind!r}")
