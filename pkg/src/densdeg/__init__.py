"""densdeg: exact-arithmetic bounds for density degree sets of curve products.

The package computes, with provenance traces, lower and upper bounds for the
set of degrees d such that the degree-d points of a product of two low-genus
curves are Zariski dense, and mechanically verifies the checkable hypotheses
(point counts, local solvability, root numbers, index obstructions) that the
bound rules consume.
"""

from .setalg import (
    DegreeSet,
    FiniteSet,
    Tail,
    finite,
    tail,
    naturals,
    multiples,
    union,
    intersect,
    difference,
    product,
    scale,
    saturate,
    from_json,
)

__all__ = [
    "DegreeSet",
    "FiniteSet",
    "Tail",
    "finite",
    "tail",
    "naturals",
    "multiples",
    "union",
    "intersect",
    "difference",
    "product",
    "scale",
    "saturate",
    "from_json",
]

__version__ = "0.1.0"
