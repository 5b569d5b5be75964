"""Homogeneous multiplicative filtrations on graded series.

A filtration is described by a level function on the per-degree monomial
basis: level(d, alpha) is the largest index t with the basis element in
F_t(d).  Order-of-vanishing filtrations along a toric divisor are linear
levels <functional, alpha> + d * offset; their multiplicativity is exact
on monomials.  Jumping numbers, masses, the V_t subseries, the bounded
Rees semigroup Sigma_{v,F,B} and the filtered body are all derived from
the level function, and the two concave-transform constructions are kept
as independent computation routes that the checks compare.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Optional, Sequence

from .errors import NotLinearlyBounded
from .geometry import (
    Polytope,
    convex_hull,
    slice_polytope,
    upper_concave_envelope,
)
from .semigroups import GradedSemigroup
from .series import series_body


class HomogeneousFiltration:
    """Levels per basis monomial; subclasses fix the level rule."""

    def __init__(self, series, denominator: int = 1, name: str = ""):
        self.series = series
        self.denominator = int(denominator)
        self.name = name

    def level(self, d: int, alpha) -> Fraction:
        raise NotImplementedError

    def levels(self, d: int) -> list[Fraction]:
        return sorted(
            (self.level(d, f.terms[0][0]) for f in self.series.sections(d)),
            reverse=True,
        )

    def e_min(self) -> Fraction:
        raise NotImplementedError

    def e_max(self) -> Fraction:
        raise NotImplementedError

    @property
    def is_trivial(self) -> bool:
        return self.e_min() == self.e_max()

    def rescaled(self, a) -> "HomogeneousFiltration":
        return RescaledFiltration(self, Fraction(a))


class OrdDivisorFiltration(HomogeneousFiltration):
    """level(x^alpha at degree d) = <functional, alpha> + d * offset.

    This is the order of vanishing along a toric divisor; linear levels
    make e_min/e_max exact optima over the divisor polytope's vertices
    and keep multiplicativity exact.
    """

    def __init__(self, series, functional, offset=0, name: str = ""):
        super().__init__(series, denominator=1, name=name)
        self.functional = tuple(int(x) for x in functional)
        self.offset = int(offset)
        poly = series.polytope
        values = [
            sum(f * x for f, x in zip(self.functional, vert)) + self.offset
            for vert in poly.vertices
        ]
        self._emin = min(values)
        self._emax = max(values)
        if self._emin < 0 and not all(
            self.level(1, f.terms[0][0]) >= self._emin for f in series.sections(1)
        ):  # pragma: no cover - linearity guarantees the bound
            raise NotLinearlyBounded("levels escape the linear bounds")

    def level(self, d: int, alpha) -> Fraction:
        return Fraction(
            sum(f * a for f, a in zip(self.functional, alpha)) + d * self.offset
        )

    def e_min(self) -> Fraction:
        return Fraction(self._emin)

    def e_max(self) -> Fraction:
        return Fraction(self._emax)


class ExplicitLevelsFiltration(HomogeneousFiltration):
    """Levels supplied per degree and exponent; bounds from the window."""

    def __init__(self, series, levels: dict, denominator: int = 1, name: str = ""):
        super().__init__(series, denominator=denominator, name=name)
        self._levels = {
            int(d): {tuple(a): Fraction(t) for a, t in per.items()}
            for d, per in levels.items()
        }

    def level(self, d: int, alpha) -> Fraction:
        return self._levels[d][tuple(alpha)]

    def e_min(self) -> Fraction:
        return min(
            t / d for d, per in self._levels.items() if d > 0 for t in per.values()
        )

    def e_max(self) -> Fraction:
        return max(
            t / d for d, per in self._levels.items() if d > 0 for t in per.values()
        )


class RescaledFiltration(HomogeneousFiltration):
    """Index rescaling F'_t = F_{t/a}, i.e. level' = a * level."""

    def __init__(self, base: HomogeneousFiltration, a: Fraction):
        super().__init__(
            base.series,
            denominator=base.denominator * a.denominator,
            name=f"{base.name}*{a}",
        )
        self.base = base
        self.a = Fraction(a)

    def level(self, d: int, alpha) -> Fraction:
        return self.a * self.base.level(d, alpha)

    def e_min(self) -> Fraction:
        return self.a * self.base.e_min()

    def e_max(self) -> Fraction:
        return self.a * self.base.e_max()


def trivial_filtration(series, name: str = "trivial") -> OrdDivisorFiltration:
    return OrdDivisorFiltration(series, tuple(0 for _ in range(series.dim)), 0, name=name)


@dataclass(frozen=True)
class JumpingProfile:
    degree: int
    levels: tuple  # sorted decreasing, length dim R_d
    mass: Fraction
    mass_plus: Fraction
    e_min_over_d: Fraction
    e_max_over_d: Fraction


def jumping_profile(filtration: HomogeneousFiltration, d: int) -> JumpingProfile:
    """Exact jumping numbers e_1 >= ... >= e_N of degree d with masses."""
    levels = tuple(filtration.levels(d))
    mass = sum(levels, Fraction(0))
    mass_plus = sum((t for t in levels if t > 0), Fraction(0))
    return JumpingProfile(
        degree=d,
        levels=levels,
        mass=mass,
        mass_plus=mass_plus,
        e_min_over_d=min(levels) / d,
        e_max_over_d=max(levels) / d,
    )


class VtSeries:
    """Graded subseries V_t(d) = F_{td}(d), realized degreewise."""

    def __init__(self, filtration: HomogeneousFiltration, t):
        self.filtration = filtration
        self.t = Fraction(t)
        self.name = f"V_{t}({filtration.name})"

    def sections(self, d: int):
        if d == 0:
            return self.filtration.series.sections(0)
        td = self.t * d
        return [
            f
            for f in self.filtration.series.sections(d)
            if self.filtration.level(d, f.terms[0][0]) >= td
        ]

    def hilbert(self, d: int) -> int:
        return len(self.sections(d))


def vt_series(filtration: HomogeneousFiltration, t) -> VtSeries:
    return VtSeries(filtration, t)


@dataclass
class ReesSemigroupSpec:
    series: object
    valuation: object
    filtration: HomogeneousFiltration
    floor: Fraction  # B, either 0 or e_min(F)

    def __post_init__(self):
        self.floor = Fraction(self.floor)


def rees_semigroup(spec: ReesSemigroupSpec) -> GradedSemigroup:
    """Sigma_{v,F,B} = {(m, x, t) : t >= Bm, x in v(F_t(m))} as an oracle.

    Payload is (value coords..., t); per degree the t-range of each value
    is the grid interval [B m, level] in (1/q)Z, where level is the
    filtration level of the unique basis monomial with that value.
    """
    filt = spec.filtration
    v = spec.valuation
    q = filt.denominator
    B = spec.floor

    def enumerator(m):
        out = []
        for f in spec.series.sections(m):
            alpha = f.terms[0][0]
            val = v.evaluate(f)
            top = filt.level(m, alpha)
            lo_num = _ceil_to_grid(B * m, q)
            hi_num = _floor_to_grid(top, q)
            for k in range(lo_num, hi_num + 1):
                out.append(tuple(map(Fraction, val)) + (Fraction(k, q),))
        return out

    rank = getattr(v, "rank")
    return GradedSemigroup.from_enumerator(rank + 1, enumerator, name=f"Rees_{B}")


def _ceil_to_grid(x: Fraction, q: int) -> int:
    return -floor(-x * q)


def _floor_to_grid(x: Fraction, q: int) -> int:
    return floor(x * q)


@dataclass
class FilteredBody:
    body: Polytope
    semigroup: GradedSemigroup
    stabilized_at: Optional[int]
    exact: bool

    def slice_at(self, t) -> Polytope:
        n = self.body.ambient_dim - 1
        return slice_polytope(self.body, {n: Fraction(t)})


def filtered_body(
    spec: ReesSemigroupSpec, max_degree: int = 8, window: int = 3
) -> FilteredBody:
    """Body of the Rees semigroup with a stabilization certificate.

    Only the extreme t-values of each fiber contribute hull points, so the
    per-degree point clouds are (value, B) and (value, level)/m.
    """
    filt = spec.filtration
    v = spec.valuation
    B = spec.floor
    pts = []
    bodies = []
    for m in range(1, max_degree + 1):
        for f in spec.series.sections(m):
            alpha = f.terms[0][0]
            val = tuple(Fraction(x, m) for x in v.evaluate(f))
            top = filt.level(m, alpha)
            if top < B * m:
                continue
            pts.append(val + (Fraction(top, m),))
            pts.append(val + (B,))
        bodies.append(convex_hull(pts) if pts else None)
    if bodies[-1] is None:
        raise ValueError("empty Rees semigroup in the requested window")
    run = 1
    for d in range(len(bodies) - 1, 0, -1):
        if bodies[d - 1] is not None and bodies[d - 1] == bodies[d]:
            run += 1
        else:
            break
    stabilized = max_degree - run + 1 if run >= window else None
    return FilteredBody(
        body=bodies[-1],
        semigroup=rees_semigroup(spec),
        stabilized_at=stabilized,
        exact=stabilized is not None,
    )


def filtered_body_slice_check(
    spec: ReesSemigroupSpec, ts, max_degree: int = 8
) -> dict:
    """Horizontal slices of the filtered body against Delta_v(V_t)."""
    fb = filtered_body(spec, max_degree=max_degree)
    results = {}
    for t in ts:
        t = Fraction(t)
        sliced = fb.slice_at(t)
        vt = vt_series(spec.filtration, t)
        try:
            sb = series_body(vt, spec.valuation, max_degree=max_degree)
            expected = sb.body
        except ValueError:
            expected = None
        if expected is None:
            results[t] = sliced.is_empty
        else:
            results[t] = sliced == expected
    return {"body": fb, "slices_equal": results, "all_equal": all(results.values())}


# ---------------------------------------------------------------------------
# concave transforms


def concave_transform_I(
    filtration: HomogeneousFiltration, v, max_degree: int = 10
) -> "ConcaveTransform":
    """Envelope of sup{level/d : v(s) = d alpha} over realized grid points.

    The per-point running maximum over degrees is monotone by Fekete
    superadditivity along multiples, so the result is a certified lower
    bound for the transform, exact wherever the degree-d value stabilizes.
    """
    best: dict[tuple, Fraction] = {}
    for d in range(1, max_degree + 1):
        for f in filtration.series.sections(d):
            alpha = f.terms[0][0]
            val = tuple(Fraction(x, d) for x in v.evaluate(f))
            ratio = filtration.level(d, alpha) / d
            if val not in best or ratio > best[val]:
                best[val] = ratio
    domain = convex_hull(list(best))
    env = upper_concave_envelope(list(best.items()), domain)
    return ConcaveTransform(function=env, samples=best, max_degree=max_degree)


def concave_transform_II(
    filtration: HomogeneousFiltration, v, t_grid: Sequence, max_degree: int = 8
) -> "ConcaveTransform":
    """Stack-of-bodies construction over a rational t-grid.

    Computes Delta_v(V_t) for each grid level and takes the concave
    envelope of the stack's upper boundary; every sample (vertex, t) lies
    on or below the true transform, so this is again a lower PL bound,
    exact at grid-reachable points.
    """
    samples = []
    stack = {}
    for t in sorted({Fraction(t) for t in t_grid}):
        vt = vt_series(filtration, t)
        try:
            sb = series_body(vt, v, max_degree=max_degree)
        except ValueError:
            continue
        stack[t] = sb.body
        for vert in sb.body.vertices:
            samples.append((vert, t))
    if not samples:
        raise ValueError("no nonempty bodies over the t-grid")
    domain = convex_hull([pt for pt, _ in samples])
    env = upper_concave_envelope(samples, domain)
    best = {}
    for pt, t in samples:
        if pt not in best or t > best[pt]:
            best[pt] = t
    return ConcaveTransform(
        function=env, samples=best, max_degree=max_degree, stack=stack
    )


@dataclass
class ConcaveTransform:
    function: object  # PLFunction
    samples: dict
    max_degree: int
    stack: Optional[dict] = None

    def value(self, point) -> Fraction:
        return self.function.value(point)

    def stack_value(self, point) -> Optional[Fraction]:
        """sup of grid levels whose body contains the point."""
        if self.stack is None:
            return None
        holding = [t for t, body in self.stack.items() if body.contains(point)]
        return max(holding) if holding else None


def transforms_agree_check(
    filtration: HomogeneousFiltration,
    v,
    max_degree: int = 10,
    t_grid: Optional[Sequence] = None,
) -> dict:
    """Sup-norm gap between the two transforms on common valuative points."""
    if t_grid is None:
        lo, hi = filtration.e_min(), filtration.e_max()
        steps = max_degree
        t_grid = [lo + (hi - lo) * Fraction(i, steps) for i in range(steps + 1)]
    t1 = concave_transform_I(filtration, v, max_degree=max_degree)
    t2 = concave_transform_II(filtration, v, t_grid, max_degree=max_degree)
    pts = set(t1.samples) | set(t2.samples)
    gap = Fraction(0)
    compared = 0
    for pt in sorted(pts):
        if not (
            t1.function.domain.contains(pt) and t2.function.domain.contains(pt)
        ):
            continue
        g = abs(t1.value(pt) - t2.value(pt))
        compared += 1
        if g > gap:
            gap = g
    return {
        "gap": gap,
        "points_compared": compared,
        "transform_I": t1,
        "transform_II": t2,
    }


def bc_volume_check(
    spec: ReesSemigroupSpec,
    max_degree: int = 8,
    mass_degrees: Sequence[int] = (),
) -> dict:
    """The three Boucksom-Chen quantities.

    (volume of the filtered body at floor 0, the exact integral over t of
    vol Delta_v(V_t), and the finite sequence mass_+(F(d)) / d^{n+1}); the
    first two are exact rationals computed along independent routes, the
    third carries its convergence gap to the exact value.
    """
    filt = spec.filtration
    v = spec.valuation
    n = getattr(v, "rank")
    spec0 = ReesSemigroupSpec(spec.series, v, filt, Fraction(0))
    if filt.e_max() <= 0:
        vol_body = Fraction(0)
        integral = Fraction(0)
    else:
        fb = filtered_body(spec0, max_degree=max_degree)
        vol_body = fb.body.volume("euclidean")
        # chamber breakpoints: t-heights of the body's vertices
        t_axis = fb.body.ambient_dim - 1
        breakpoints = sorted(
            {Fraction(vv[t_axis]) for vv in fb.body.vertices} | {Fraction(0), filt.e_max()}
        )
        breakpoints = [t for t in breakpoints if 0 <= t <= filt.e_max()]
        integral = Fraction(0)
        for lo, hi in zip(breakpoints, breakpoints[1:]):
            if lo == hi:
                continue
            nodes = [lo + (hi - lo) * Fraction(i + 1, n + 2) for i in range(n + 1)]
            vols = []
            for t in nodes:
                try:
                    sb = series_body(vt_series(filt, t), v, max_degree=max_degree)
                    vols.append(sb.body.volume("euclidean"))
                except ValueError:
                    vols.append(Fraction(0))
            from .geometry import _interp_coeffs, _poly_integral

            integral += _poly_integral(_interp_coeffs(nodes, vols), lo, hi)
    masses = {}
    for d in mass_degrees:
        prof = jumping_profile(filt, d)
        masses[d] = prof.mass_plus / Fraction(d) ** (n + 1)
    return {
        "volume_filtered_body": vol_body,
        "slice_volume_integral": integral,
        "mass_sequence": masses,
        "equal": vol_body == integral,
    }
