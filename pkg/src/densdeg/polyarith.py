"""Exact univariate polynomial arithmetic over the rationals.

Coefficient vectors are ascending tuples of Fractions with trailing zeros
stripped; the zero polynomial is the empty tuple.  Everything here is exact:
resultants go through Sylvester matrices with fraction-free-enough Gaussian
elimination over Fraction, real root counting is Sturm's theorem, and the
number-theory helpers (Kronecker symbol, p-adic squares) are integer only.
Degrees stay small (<= ~14), so dense O(n^2)/O(n^3) algorithms are fine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterable, Sequence


def _coerce(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"polynomial coefficients must be exact, got {type(c).__name__}")


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial, coefficients ascending."""

    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        cs = tuple(_coerce(c) for c in self.coeffs)
        while cs and cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    # -- basics ------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree, with deg 0 = -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> Fraction:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i <= self.degree else Fraction(0)

    def __call__(self, x):
        """Horner evaluation; works for any ring element supporting +, *."""
        if self.is_zero:
            return x * 0 if not isinstance(x, (int, Fraction)) else Fraction(0)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * x + c
        return acc

    def __repr__(self) -> str:
        if self.is_zero:
            return "poly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            elif i == 1:
                terms.append(f"{c}*x" if c != 1 else "x")
            else:
                terms.append(f"{c}*x^{i}" if c != 1 else f"x^{i}")
        return "poly(" + " + ".join(terms) + ")"

    # -- ring operations ----------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self[i] + other[i] for i in range(n)))

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(tuple(self[i] - other[i] for i in range(n)))

    def __neg__(self) -> "Poly":
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(tuple(c * other for c in self.coeffs))
        if self.is_zero or other.is_zero:
            return Poly(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Poly(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out, base = poly(1), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = [Fraction(0)] * max(self.degree - other.degree + 1, 0)
        rem = list(self.coeffs)
        d, lc = other.degree, other.lc
        while len(rem) - 1 >= d and any(c != 0 for c in rem):
            while rem and rem[-1] == 0:
                rem.pop()
            if len(rem) - 1 < d:
                break
            k = len(rem) - 1 - d
            factor = rem[-1] / lc
            q[k] = factor
            for i in range(d + 1):
                rem[k + i] -= factor * other.coeffs[i]
        return Poly(tuple(q)), Poly(tuple(rem))

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    # -- calculus and structure ----------------------------------------------
    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        return self * (1 / self.lc)

    def compose(self, inner: "Poly") -> "Poly":
        acc = poly(0)
        for c in reversed(self.coeffs):
            acc = acc * inner + poly(c)
        return acc

    def reverse(self) -> "Poly":
        """x^deg * p(1/x); reverses coefficients (drops leading zeros of result)."""
        return Poly(tuple(reversed(self.coeffs)))

    def shift(self, k: int) -> "Poly":
        """Multiply by x^k."""
        if self.is_zero:
            return self
        return Poly((Fraction(0),) * k + self.coeffs)

    def integer_coeffs(self) -> tuple[int, ...]:
        if any(c.denominator != 1 for c in self.coeffs):
            raise ValueError("polynomial has non-integer coefficients")
        return tuple(c.numerator for c in self.coeffs)

    def reduce_mod(self, p: int) -> tuple[int, ...]:
        return tuple(c % p for c in self.integer_coeffs())


def poly(*coeffs) -> Poly:
    """Build a polynomial from ascending coefficients: poly(c0, c1, ...)."""
    if len(coeffs) == 1 and isinstance(coeffs[0], (list, tuple)):
        coeffs = tuple(coeffs[0])
    return Poly(tuple(_coerce(c) for c in coeffs))


X = poly(0, 1)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via the Euclidean algorithm."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic() if not a.is_zero else a


def squarefree_part(p: Poly) -> Poly:
    """p / gcd(p, p'), monic-normalised by the gcd."""
    if p.is_zero:
        return p
    g = poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return p
    return p // g


def is_squarefree(p: Poly) -> bool:
    return not p.is_zero and poly_gcd(p, p.derivative()).degree == 0


# ---------------------------------------------------------------------------
# resultant / discriminant

def _det_fraction(rows: list[list[Fraction]]) -> Fraction:
    """Determinant by Gaussian elimination with exact Fractions."""
    n = len(rows)
    m = [row[:] for row in rows]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col] == 0:
                continue
            factor = m[r][col] * inv
            for c in range(col, n):
                m[r][c] -= factor * m[col][c]
    return det


def resultant(p: Poly, q: Poly) -> Fraction:
    """Res(p, q) via the Sylvester matrix (degrees here stay tiny)."""
    if p.is_zero or q.is_zero:
        return Fraction(0)
    n, m = p.degree, q.degree
    if n == 0:
        return p.coeffs[0] ** m
    if m == 0:
        return q.coeffs[0] ** n
    size = n + m
    rows: list[list[Fraction]] = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(m):
        rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - n - 1 - i))
    for i in range(n):
        rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - m - 1 - i))
    return _det_fraction(rows)


def discriminant(p: Poly) -> Fraction:
    """disc(p) = (-1)^(n(n-1)/2) Res(p, p') / lc(p)."""
    n = p.degree
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(p, p.derivative()) / p.lc


# ---------------------------------------------------------------------------
# bivariate support: coefficients that are themselves polynomials in t

@dataclass(frozen=True)
class Poly2:
    """Polynomial in x whose coefficients are Poly in a parameter t."""

    coeffs: tuple[Poly, ...]  # ascending in x

    def __post_init__(self):
        cs = tuple(self.coeffs)
        while cs and cs[-1].is_zero:
            cs = cs[:-1]
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree_x(self) -> int:
        return len(self.coeffs) - 1

    def at_t(self, t0) -> Poly:
        return Poly(tuple(c(t0) for c in self.coeffs))

    def max_tdeg(self) -> int:
        return max((c.degree for c in self.coeffs), default=-1)


def poly2(*coeffs) -> Poly2:
    """Build a Poly2 from ascending x-coefficients, each a Poly in t or scalar."""
    out = []
    for c in coeffs:
        out.append(c if isinstance(c, Poly) else poly(c))
    return Poly2(tuple(out))


def _lagrange_interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Unique polynomial through the given (x, y) pairs."""
    acc = poly(0)
    for i, (xi, yi) in enumerate(points):
        num, den = poly(1), Fraction(1)
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            num = num * poly(-xj, 1)
            den *= xi - xj
        acc = acc + num * (yi / den)
    return acc


def discriminant_over_t(p: Poly2) -> Poly:
    """disc_x of a Poly2, as a polynomial in t, by evaluate-and-interpolate.

    Valid where the x-degree does not drop; sample points with lc(t0) = 0 are
    skipped.  The t-degree of the result is at most (2n-1) * max_tdeg.
    """
    n = p.degree_x
    if n < 1:
        raise ValueError("discriminant needs x-degree >= 1")
    lc_t = p.coeffs[-1]
    needed = (2 * n - 1) * max(p.max_tdeg(), 0) + 1
    points: list[tuple[Fraction, Fraction]] = []
    t0 = 0
    while len(points) < needed:
        tv = Fraction(t0)
        t0 = -t0 if t0 > 0 else -t0 + 1  # 0, 1, -1, 2, -2, ...
        if lc_t(tv) == 0:
            continue
        points.append((tv, discriminant(p.at_t(tv))))
    return _lagrange_interpolate(points)


# ---------------------------------------------------------------------------
# Sturm real-root counting

def sturm_chain(p: Poly) -> list[Poly]:
    p = squarefree_part(p)
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        chain.append(-(chain[-2] % chain[-1]))
    chain.pop()
    return chain


def _sign_at(p: Poly, x) -> int:
    if p.is_zero:
        return 0
    if x == "+inf":
        return 1 if p.lc > 0 else -1
    if x == "-inf":
        s = 1 if p.lc > 0 else -1
        return s if p.degree % 2 == 0 else -s
    v = p(x)
    return (v > 0) - (v < 0)


def _variations(signs: Iterable[int]) -> int:
    seq = [s for s in signs if s != 0]
    return sum(1 for a, b in zip(seq, seq[1:]) if a != b)


def count_real_roots(p: Poly, lo=None, hi=None) -> int:
    """Number of distinct real roots in (lo, hi]; None means the infinite end."""
    if p.is_zero:
        raise ValueError("zero polynomial has infinitely many roots")
    if p.degree == 0:
        return 0
    chain = sturm_chain(p)
    lo_key = "-inf" if lo is None else Fraction(lo)
    hi_key = "+inf" if hi is None else Fraction(hi)
    va = _variations(_sign_at(q, lo_key) for q in chain)
    vb = _variations(_sign_at(q, hi_key) for q in chain)
    return va - vb


def is_positive_definite(p: Poly) -> bool:
    """True if p(x) > 0 for all real x (even degree, positive lc, no real roots)."""
    if p.is_zero:
        return False
    if p.degree == 0:
        return p.coeffs[0] > 0
    return p.degree % 2 == 0 and p.lc > 0 and count_real_roots(p) == 0


def is_negative_definite(p: Poly) -> bool:
    return is_positive_definite(-p)


# ---------------------------------------------------------------------------
# integer number theory

def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), total on all integer pairs."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    # factor out 2s of n: (a|2) = 0 if a even else (-1)^((a^2-1)/8)
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    a %= n
    # now n odd positive; classic Jacobi loop
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def factor_integer(n: int) -> dict[int, int]:
    """Prime factorisation by trial division; fine for the sizes used here."""
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 5
    while f * f <= n:
        for p in (f, f + 2):
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        f += 6
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    n = abs(n)
    if n == 0:
        raise ValueError("0 has no divisor list")
    out = [1]
    for p, e in factor_integer(n).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def is_squarefree_int(n: int) -> bool:
    if n == 0:
        return False
    return all(e == 1 for e in factor_integer(n).values())


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("v_p(0) is infinite")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_square_in_qp(x: Fraction | int, p: int) -> bool:
    """Whether x is a square in the p-adic numbers (x = 0 counts as a square)."""
    x = Fraction(x)
    if x == 0:
        return True
    v = valuation(x.numerator, p) - valuation(x.denominator, p)
    if v % 2 != 0:
        return False
    unit = x / Fraction(p) ** v
    num = unit.numerator
    den = unit.denominator
    if p == 2:
        # odd unit is a 2-adic square iff it is 1 mod 8
        return (num * pow(den, -1, 8)) % 8 == 1
    u = (num * pow(den, -1, p)) % p
    return kronecker(u, p) == 1


def is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def squarefree_kernel(n: int) -> int:
    """Largest squarefree divisor with the same sign (kernel of n)."""
    if n == 0:
        raise ValueError("0 has no squarefree kernel")
    k = 1
    for p, e in factor_integer(n).items():
        if e % 2 == 1:
            k *= p
    return k if n > 0 else -k


def content(p: Poly) -> Fraction:
    """gcd of numerators over lcm of denominators (0 for the zero poly)."""
    if p.is_zero:
        return Fraction(0)
    num = 0
    den = 1
    for c in p.coeffs:
        num = gcd(num, abs(c.numerator))
        den = den * c.denominator // gcd(den, c.denominator)
    return Fraction(num, den)
