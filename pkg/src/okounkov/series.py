"""Toric linear series: lattice polytopes as line bundles.

The section space of d times the bundle is the set of lattice points of
the d-th dilate of the divisor polytope, realized as monomials; bodies of
such series are computed honestly through the value semigroup and
certified exact by a stabilization window (for a lattice polytope the
window closes at d = 1, for rational vertices at the denominator's lcm).
Ground-truth volumes come from the toric dictionary vol_X(L) = n! vol(P),
which is the verification spine the theorem checks compare against.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .geometry import Polytope, convex_hull, slice_polytope
from .semigroups import GradedSemigroup
from .valuations import LaurentPoly, value_semigroup


@dataclass
class LatticeSeries:
    """Graded series with R_d spanned by the lattice points of d*P."""

    polytope: Polytope
    name: str = ""

    @classmethod
    def from_vertices(cls, vertices, name: str = "") -> "LatticeSeries":
        return cls(polytope=convex_hull(vertices), name=name)

    @property
    def dim(self) -> int:
        return self.polytope.ambient_dim

    def sections(self, d: int):
        """Monomial basis of R_d, deterministic order."""
        if d < 0:
            return []
        if d == 0:
            return [LaurentPoly.monomial(tuple(0 for _ in range(self.dim)))]
        return [
            LaurentPoly.monomial(alpha)
            for alpha in self.polytope.scaled(d).lattice_points()
        ]

    def hilbert(self, d: int) -> int:
        return len(self.sections(d))

    def volume_ground_truth(self) -> Fraction:
        """vol_X(L) = n! vol(P), the toric intersection number."""
        from math import factorial

        return self.polytope.volume("euclidean") * factorial(self.dim)

    def translated(self, offset) -> "LatticeSeries":
        return LatticeSeries(self.polytope.translated(offset), name=self.name)


@dataclass
class ExplicitSeries:
    """Graded series given by explicit per-degree bases."""

    n: int
    bases: dict  # degree -> list of LaurentPoly
    name: str = ""

    def sections(self, d: int):
        if d == 0 and 0 not in self.bases:
            return [LaurentPoly.monomial(tuple(0 for _ in range(self.n)))]
        return list(self.bases.get(d, []))

    def hilbert(self, d: int) -> int:
        return len(self.sections(d))


@dataclass
class SeriesBody:
    """Computed Newton-Okounkov body with its certification data."""

    body: Polytope
    semigroup: GradedSemigroup
    stabilized_at: Optional[int]
    window: tuple
    exact: bool

    @property
    def volume(self) -> Fraction:
        return self.body.volume("euclidean")


def series_body(series, v, max_degree: int = 8, window: int = 3) -> SeriesBody:
    """Body of the value semigroup, certified by stabilization.

    Computes the truncated bodies Delta_d = hull{v(s)/e : e <= d} and
    reports the first degree from which the last ``window`` of them agree;
    ``exact`` is set only when the window closed before ``max_degree``.
    """
    sigma = value_semigroup(series, v, name=getattr(series, "name", ""))
    bodies = []
    pts = []
    for d in range(1, max_degree + 1):
        for val in sigma.layer(d):
            pts.append(tuple(Fraction(x, d) for x in val))
        bodies.append(convex_hull(pts) if pts else None)
    body = bodies[-1]
    if body is None:
        raise ValueError("series has no sections up to the requested degree")
    stabilized_at = None
    run = 1
    for d in range(len(bodies) - 1, 0, -1):
        if bodies[d - 1] is not None and bodies[d - 1] == bodies[d]:
            run += 1
        else:
            break
    if run >= window:
        stabilized_at = max_degree - run + 1
    return SeriesBody(
        body=body,
        semigroup=sigma,
        stabilized_at=stabilized_at,
        window=(max_degree - run + 1, max_degree),
        exact=stabilized_at is not None,
    )


def volume_theorem_check(series: LatticeSeries, v, max_degree: int = 6) -> dict:
    """n! vol(Delta_v(L)) against the toric ground truth vol_X(L)."""
    from math import factorial

    sb = series_body(series, v, max_degree=max_degree)
    lhs = series.volume_ground_truth()
    rhs = factorial(series.dim) * sb.body.volume("euclidean")
    return {
        "vol_X": lhs,
        "n_factorial_vol_delta": rhs,
        "equal": lhs == rhs,
        "exact": sb.exact,
        "body": sb.body,
    }


@dataclass
class MultigradedSeries:
    """Z^r-graded series from r divisor polytopes (global body input).

    Sections of class (d_1..d_r) are the lattice points of the Minkowski
    sum d_1 P_1 + ... + d_r P_r; the associated degree-first semigroup has
    payload (d_2..d_r, value), total degree sum(d_i).
    """

    polytopes: tuple
    name: str = ""

    def __post_init__(self):
        self.polytopes = tuple(self.polytopes)
        if not self.polytopes:
            raise ValueError("need at least one polytope")

    @property
    def r(self) -> int:
        return len(self.polytopes)

    @property
    def n(self) -> int:
        return self.polytopes[0].ambient_dim

    def class_polytope(self, cls) -> Polytope:
        pts = None
        for d, p in zip(cls, self.polytopes):
            scaled = p.scaled(d) if d else None
            if scaled is None:
                continue
            if pts is None:
                pts = scaled.vertices
            else:
                pts = [
                    tuple(a + b for a, b in zip(x, y))
                    for x in pts
                    for y in scaled.vertices
                ]
        if pts is None:
            return convex_hull([tuple(0 for _ in range(self.n))])
        return convex_hull(pts)

    def sections(self, cls):
        return [
            LaurentPoly.monomial(alpha)
            for alpha in self.class_polytope(cls).lattice_points()
        ]


def global_body(mseries: MultigradedSeries, v, max_total_degree: int = 6) -> dict:
    """Body of the multigraded value semigroup in R^{r-1+n}.

    Elements are (total degree, (d_2..d_r, value)); slices over an integer
    class (a_1..a_r) are compared against the class's own series body
    after rescaling by the total degree (the slice of the global body at
    the normalized class is the class body divided by its degree).
    """
    r = mseries.r

    def enumerator(total):
        out = []
        for split in _compositions(total, r):
            for s in mseries.sections(split):
                val = v.evaluate(s)
                out.append(tuple(map(Fraction, split[1:] + tuple(val))))
        return out

    sigma = GradedSemigroup.from_enumerator(r - 1 + mseries.n, enumerator)
    body, flags = sigma.okounkov_body("truncated", max_total_degree)

    def slice_check(cls) -> dict:
        total = sum(cls)
        fixed = {i: Fraction(cls[i + 1], total) for i in range(r - 1)}
        sliced = slice_polytope(body, fixed)
        class_series = ExplicitSeries(
            mseries.n, {d: mseries.sections(tuple(d * c for c in cls)) for d in range(1, max_total_degree + 1)}
        )
        sb = series_body(class_series, v, max_degree=max_total_degree)
        expected = sb.body.scaled(Fraction(1, total))
        return {
            "slice": sliced,
            "class_body": sb.body,
            "expected_slice": expected,
            "equal": sliced == expected,
        }

    return {"body": body, "semigroup": sigma, "flags": flags, "slice_check": slice_check}


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
