"""Exact Newton-Okounkov bodies of graded semigroups, valuations,
filtered section rings and toric Seshadri problems.

The geometry core is exact rational arithmetic throughout; floating
point appears only in SVG emission.  All public values (points,
polytopes, PL functions, semigroups) are immutable after construction
and the operations are pure, so everything is safe to share between
threads.  Hot enumeration kernels run in a compiled extension when
available (see :mod:`okounkov.kernels`).
"""

from .geometry import (
    PLFunction,
    Polytope,
    convex_hull,
    from_halfspaces,
    integrate_pl,
    slice_polytope,
    subgraph_body,
    upper_concave_envelope,
)
from .lattices import IntegerMatrix, hnf, lattice_determinant_in_hyperplane
from .semigroups import GradedPoint, GradedSemigroup, RestrictedSemigroup
from .valuations import (
    CompositeValuation,
    FlagSpec,
    LaurentPoly,
    MonomialValuation,
    flag_evaluate,
    flag_valuation,
)

__version__ = "0.1.0"

__all__ = [
    "CompositeValuation",
    "FlagSpec",
    "GradedPoint",
    "GradedSemigroup",
    "IntegerMatrix",
    "LaurentPoly",
    "MonomialValuation",
    "PLFunction",
    "Polytope",
    "RestrictedSemigroup",
    "convex_hull",
    "flag_evaluate",
    "flag_valuation",
    "from_halfspaces",
    "hnf",
    "integrate_pl",
    "lattice_determinant_in_hyperplane",
    "slice_polytope",
    "subgraph_body",
    "upper_concave_envelope",
]
