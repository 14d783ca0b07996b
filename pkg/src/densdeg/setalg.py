"""Lazy algebra of degree sets.

A degree set is a subset of the positive integers built from two kinds of
leaves, finite sets and arithmetic tails {n >= start : m | n}, combined by
union, intersection, difference, pointwise product {a*b}, scaling {c*a} and
saturation (closure under multiplication by arbitrary positive integers).

Products of cofinite sets (for instance the composite numbers, as the product
of two copies of the integers >= 2) are not eventually periodic, so there is
no normal form for general expressions.  Values are immutable expression
trees with decidable membership; equality is only ever tested on a bounded
window.  Normalisation is applied only when union/intersection/difference/
scaling of leaves again yields a leaf; Product and Saturate never normalise.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Iterator


def _divisors(d: int) -> Iterator[int]:
    """Divisors of d >= 1 in ascending order."""
    small, large = [], []
    for a in range(1, isqrt(d) + 1):
        if d % a == 0:
            small.append(a)
            if a != d // a:
                large.append(d // a)
    yield from small
    yield from reversed(large)


class DegreeSet:
    """Base class for degree-set expressions.  Immutable and hashable."""

    def contains(self, d: int) -> bool:
        raise NotImplementedError

    def __contains__(self, d: int) -> bool:
        if not isinstance(d, int) or d < 1:
            return False
        return self.contains(d)

    def materialize(self, bound: int) -> list[int]:
        """Sorted members within [1, bound]."""
        if bound < 0:
            raise ValueError("window bound must be >= 0")
        return [d for d in range(1, bound + 1) if self.contains(d)]

    # -- structural combinators (normalising smart constructors below) --
    def __or__(self, other: "DegreeSet") -> "DegreeSet":
        return union(self, other)

    def __and__(self, other: "DegreeSet") -> "DegreeSet":
        return intersect(self, other)

    def __sub__(self, other: "DegreeSet") -> "DegreeSet":
        return difference(self, other)

    def __mul__(self, other: "DegreeSet") -> "DegreeSet":
        return product(self, other)

    def scale(self, c: int) -> "DegreeSet":
        return scale(c, self)

    def saturate(self) -> "DegreeSet":
        return saturate(self)

    def equals_on_window(self, other: "DegreeSet", bound: int) -> bool:
        return self.materialize(bound) == other.materialize(bound)

    def subset_on_window(self, other: "DegreeSet", bound: int) -> bool:
        return all(d in other for d in self.materialize(bound))

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteSet(DegreeSet):
    members: tuple[int, ...]

    def __post_init__(self):
        ms = self.members
        if any(not isinstance(m, int) or m < 1 for m in ms):
            raise ValueError("finite degree sets hold integers >= 1")
        if any(ms[i] >= ms[i + 1] for i in range(len(ms) - 1)):
            raise ValueError("finite members must be strictly increasing")

    def contains(self, d: int) -> bool:
        return d in self.members

    def to_json(self) -> dict:
        return {"kind": "finite", "members": list(self.members)}


@dataclass(frozen=True)
class Tail(DegreeSet):
    """All multiples of m that are >= start."""

    m: int
    start: int

    def __post_init__(self):
        if self.m < 1 or self.start < 1:
            raise ValueError("tail requires m >= 1 and start >= 1")

    def contains(self, d: int) -> bool:
        return d >= self.start and d % self.m == 0

    def to_json(self) -> dict:
        return {"kind": "tail", "m": self.m, "start": self.start}


@dataclass(frozen=True)
class Union(DegreeSet):
    left: DegreeSet
    right: DegreeSet

    def contains(self, d: int) -> bool:
        return self.left.contains(d) or self.right.contains(d)

    def to_json(self) -> dict:
        return {"kind": "union", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Intersect(DegreeSet):
    left: DegreeSet
    right: DegreeSet

    def contains(self, d: int) -> bool:
        return self.left.contains(d) and self.right.contains(d)

    def to_json(self) -> dict:
        return {"kind": "intersect", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Difference(DegreeSet):
    left: DegreeSet
    right: DegreeSet

    def contains(self, d: int) -> bool:
        return self.left.contains(d) and not self.right.contains(d)

    def to_json(self) -> dict:
        return {"kind": "difference", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Product(DegreeSet):
    """Pointwise products {a*b : a in left, b in right}.

    Membership of d only examines divisor pairs of d, so it is decidable for
    every expression even though the result need not be eventually periodic.
    """

    left: DegreeSet
    right: DegreeSet

    def contains(self, d: int) -> bool:
        for a in _divisors(d):
            if self.left.contains(a) and self.right.contains(d // a):
                return True
        return False

    def to_json(self) -> dict:
        return {"kind": "product", "left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class ScaleBy(DegreeSet):
    c: int
    arg: DegreeSet

    def __post_init__(self):
        if self.c < 1:
            raise ValueError("scale factor must be >= 1")

    def contains(self, d: int) -> bool:
        return d % self.c == 0 and self.arg.contains(d // self.c)

    def to_json(self) -> dict:
        return {"kind": "scale", "c": self.c, "arg": self.arg.to_json()}


@dataclass(frozen=True)
class Saturate(DegreeSet):
    """Closure of arg under multiplication by positive integers."""

    arg: DegreeSet

    def contains(self, d: int) -> bool:
        return any(self.arg.contains(a) for a in _divisors(d))

    def to_json(self) -> dict:
        return {"kind": "saturate", "arg": self.arg.to_json()}


# ---------------------------------------------------------------------------
# smart constructors

def finite(members: Iterable[int]) -> FiniteSet:
    return FiniteSet(tuple(sorted({int(m) for m in members})))


EMPTY = finite(())


def tail(m: int, start: int | None = None) -> Tail:
    return Tail(m, m if start is None else start)


def naturals(start: int = 1) -> Tail:
    """The integers >= start."""
    return Tail(1, start)


def multiples(m: int, start: int | None = None) -> Tail:
    """The positive multiples of m (optionally only those >= start)."""
    return tail(m, start)


def union(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    if isinstance(a, FiniteSet) and isinstance(b, FiniteSet):
        return finite(a.members + b.members)
    if isinstance(a, Tail) and isinstance(b, Tail) and a.m == b.m:
        return Tail(a.m, min(a.start, b.start))
    if a == EMPTY:
        return b
    if b == EMPTY:
        return a
    return Union(a, b)


def intersect(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    if isinstance(a, FiniteSet):
        return finite(m for m in a.members if b.contains(m))
    if isinstance(b, FiniteSet):
        return finite(m for m in b.members if a.contains(m))
    if isinstance(a, Tail) and isinstance(b, Tail):
        m = a.m * b.m // gcd(a.m, b.m)
        return Tail(m, max(a.start, b.start))
    return Intersect(a, b)


def difference(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    if isinstance(a, FiniteSet):
        return finite(m for m in a.members if not b.contains(m))
    if b == EMPTY:
        return a
    return Difference(a, b)


def product(a: DegreeSet, b: DegreeSet) -> DegreeSet:
    return Product(a, b)


def scale(c: int, a: DegreeSet) -> DegreeSet:
    if c == 0:
        raise ValueError("scale by 0 is not a degree-set operation")
    if c == 1:
        return a
    if isinstance(a, FiniteSet):
        return finite(c * m for m in a.members)
    if isinstance(a, Tail):
        return Tail(c * a.m, c * a.start)
    return ScaleBy(c, a)


def saturate(a: DegreeSet) -> DegreeSet:
    return Saturate(a)


def complement_within_naturals(removed: Iterable[int], start: int = 1) -> DegreeSet:
    """The integers >= start with the listed members removed."""
    rem = finite(removed)
    return difference(naturals(start), rem) if rem.members else naturals(start)


_OPS = {
    "union": union,
    "intersect": intersect,
    "difference": difference,
    "product": product,
}


def combine(op: str, *args) -> DegreeSet:
    """Build a combined degree set; op names the node kind."""
    if op == "scale":
        c, a = args
        return scale(c, a)
    if op == "saturate":
        (a,) = args
        return saturate(a)
    if op not in _OPS:
        raise ValueError(f"unknown degree-set operation: {op!r}")
    a, b = args
    return _OPS[op](a, b)


def from_json(obj: dict) -> DegreeSet:
    """Parse the JSON expression schema (inverse of to_json)."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValueError("degree-set JSON must be an object with a 'kind'")
    kind = obj["kind"]
    if kind == "finite":
        return finite(obj["members"])
    if kind == "tail":
        return Tail(int(obj["m"]), int(obj["start"]))
    if kind == "scale":
        return scale(int(obj["c"]), from_json(obj["arg"]))
    if kind == "saturate":
        return saturate(from_json(obj["arg"]))
    if kind in _OPS:
        return _OPS[kind](from_json(obj["left"]), from_json(obj["right"]))
    raise ValueError(f"unknown degree-set kind: {kind!r}")


def equals_on_window(a: DegreeSet, b: DegreeSet, bound: int) -> bool:
    return a.equals_on_window(b, bound)
