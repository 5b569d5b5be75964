"""Randomized property suites and the built-in theorem check battery.

Each suite is deterministic for a fixed seed and returns a small dict
with the trial count and failures; the CLI's ``check`` subcommand and the
acceptance tests share these implementations so there is exactly one
source of truth for what gets verified.

The hull/volume oracle game pairs the production hull with two
independent routes: a brute-force facet scan (every affinely independent
subset is tested as a one-sided hyperplane) and a Fubini volume obtained
by slicing, neither of which touches the incremental hull or its placing
triangulation.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .geometry import (
    convex_hull,
    slice_volume_integral,
    upper_concave_envelope,
)
from .lattices import vdot, vsub
from .valuations import LaurentPoly, MonomialValuation

F = Fraction


def _random_point(rng, dim, num=8, den=3):
    return tuple(
        F(rng.randint(-num, num), rng.randint(1, den)) for _ in range(dim)
    )


def _random_laurent(rng, n=2, terms=5):
    support = set()
    while len(support) < rng.randint(1, terms):
        support.add(tuple(rng.randint(0, 5) for _ in range(n)))
    coeffs = {}
    for alpha in support:
        c = 0
        while c == 0:
            c = rng.randint(-5, 5)
        coeffs[alpha] = c
    return LaurentPoly.from_dict(n, coeffs)


def valuation_axioms_suite(seed: int = 0, trials: int = 200) -> dict:
    """v(fg) = v(f) + v(g) exactly; v(f+g) >= min with equality off ties."""
    rng = random.Random(seed)
    v = MonomialValuation([(1, 0), (2, 1)])
    failures = 0
    for _ in range(trials):
        f = _random_laurent(rng)
        g = _random_laurent(rng)
        vf, vg = v.evaluate(f), v.evaluate(g)
        if v.evaluate(f * g) != tuple(a + b for a, b in zip(vf, vg)):
            failures += 1
            continue
        s = f + g
        if s.is_zero:
            continue
        lo = min(vf, vg)
        vs = v.evaluate(s)
        if vs < lo or (vf != vg and vs != lo):
            failures += 1
    return {"trials": trials, "failures": failures}


def brute_force_hull(points):
    """Facet scan oracle: vertices and H-rep without incremental insertion."""
    pts = sorted({tuple(map(F, p)) for p in points})
    dim = len(pts[0])
    base = pts[0]
    from .geometry import row_space_basis

    k = len(row_space_basis([vsub(p, base) for p in pts[1:]]))
    facets = []
    for combo in itertools.combinations(pts, max(k, 1)):
        normal = _normal_through(combo, dim)
        if normal is None:
            continue
        offs = [vdot(normal, p) for p in pts]
        b = vdot(normal, combo[0])
        if all(o <= b for o in offs):
            facets.append((normal, b))
        elif all(o >= b for o in offs):
            facets.append((tuple(-x for x in normal), -b))
    verts = []
    for p in pts:
        active = [a for a, b in facets if vdot(a, p) == b]
        if len(row_space_basis(active)) >= k:
            verts.append(p)
    return sorted(set(verts)), facets


def _normal_through(combo, dim):
    from .geometry import kernel_basis

    base = combo[0]
    rows = [vsub(p, base) for p in combo[1:]]
    kern = kernel_basis(rows, dim)
    if len(kern) != 1:
        return None
    return kern[0]


def hull_oracle_suite(seed: int = 0, trials: int = 100) -> dict:
    """Production hull against the facet-scan oracle and Fubini volume."""
    rng = random.Random(seed)
    failures = 0
    for trial in range(trials):
        dim = rng.choice((2, 2, 3))
        npts = rng.randint(dim + 1, 8)
        pts = [_random_point(rng, dim) for _ in range(npts)]
        hull = convex_hull(pts)
        oracle_verts, _ = brute_force_hull(pts)
        if hull.dim == dim:
            if sorted(hull.vertices) != oracle_verts:
                failures += 1
                continue
            if slice_volume_integral(hull, 0) != hull.volume():
                failures += 1
        else:
            # degenerate samples: oracle vertices still must match
            if sorted(hull.vertices) != oracle_verts:
                failures += 1
    return {"trials": trials, "failures": failures}


def _sqrt_concave_midpoint(fa, fm, fb) -> bool:
    """Exact check of sqrt(f) midpoint concavity from rational slice areas."""
    lhs = 4 * fm - fa - fb
    if lhs < 0:
        return False
    return lhs * lhs >= 4 * fa * fb


def brunn_minkowski_suite(seed: int = 0, trials: int = 20) -> dict:
    """Concavity of slice-volume^{1/(dim-1)} along the first coordinate."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        dim = rng.choice((2, 3))
        npts = rng.randint(dim + 2, 8)
        pts = [_random_point(rng, dim, num=6, den=2) for _ in range(npts)]
        hull = convex_hull(pts)
        if hull.dim != dim:
            continue
        from .geometry import slice_polytope

        lo = min(v[0] for v in hull.vertices)
        hi = max(v[0] for v in hull.vertices)
        if lo == hi:
            continue
        grid = [lo + (hi - lo) * F(i, 8) for i in range(9)]
        vols = []
        for t in grid:
            sl = slice_polytope(hull, {0: t})
            vols.append(sl.volume("euclidean") if sl.dim == dim - 1 else F(0))
        for i in range(1, len(grid) - 1):
            fa, fm, fb = vols[i - 1], vols[i], vols[i + 1]
            if dim == 2:
                ok = 2 * fm >= fa + fb
            else:
                ok = _sqrt_concave_midpoint(fa, fm, fb)
            if not ok:
                failures += 1
                break
    return {"trials": trials, "failures": failures}


def envelope_idempotence_suite(seed: int = 0, trials: int = 25) -> dict:
    """Envelope dominates its samples and is a fixed point of itself."""
    rng = random.Random(seed)
    failures = 0
    for _ in range(trials):
        xs = sorted({F(rng.randint(0, 12), 12) for _ in range(rng.randint(2, 7))})
        samples = [((x,), F(rng.randint(-6, 6), rng.randint(1, 3))) for x in xs]
        domain = convex_hull([(x,) for x in xs])
        env = upper_concave_envelope(samples, domain)
        for (x,), v in samples:
            if env.value((x,)) < v:
                failures += 1
                break
        resampled = [((x,), env.value((x,))) for x in xs]
        env2 = upper_concave_envelope(resampled, domain)
        if any(env2.value((x,)) != env.value((x,)) for x in xs):
            failures += 1
    return {"trials": trials, "failures": failures}


def property_suites(seed: int = 0) -> dict:
    """The full randomized battery; deterministic for a fixed seed."""
    return {
        "valuation_axioms": valuation_axioms_suite(seed, 200),
        "hull_oracle": hull_oracle_suite(seed + 1, 100),
        "brunn_minkowski": brunn_minkowski_suite(seed + 2, 20),
        "envelope_idempotence": envelope_idempotence_suite(seed + 3, 25),
    }


def theorem_checks(max_degree: int = 8, seed: int = 0) -> dict:
    """Quick built-in theorem battery for the CLI check subcommand."""
    from .filtrations import (
        OrdDivisorFiltration,
        ReesSemigroupSpec,
        bc_volume_check,
        transforms_agree_check,
    )
    from .semigroups import (
        GradedSemigroup,
        slice_theorem_check,
        volume_slice_integral_check,
    )
    from .series import LatticeSeries, volume_theorem_check
    from .seshadri import (
        P2,
        SeshadriProblem,
        p2_bundle_class,
        rationality_verdict,
        subgraph_equals_body_check,
    )
    from .valuations import flag_valuation

    results = {}
    p1 = LatticeSeries.from_vertices([(0,), (1,)], name="P1 O(1)")
    p2s = LatticeSeries.from_vertices([(0, 0), (1, 0), (0, 1)], name="P2 O(1)")

    rep = volume_theorem_check(p2s, flag_valuation(2), max_degree=max_degree)
    results["volume_theorem_P2"] = bool(rep["equal"])

    simplex = GradedSemigroup.from_generators(
        [(1, (0, 0)), (1, (1, 0)), (1, (0, 1))]
    )
    rep = slice_theorem_check(simplex, [(0, 1)], (F(1, 2),), up_to=10)
    results["slice_theorem_simplex"] = bool(rep["equal"])

    rep = volume_slice_integral_check(simplex, [(0, 1)])
    results["volume_slice_integral"] = bool(rep["equal"])

    filt = OrdDivisorFiltration(p1, (1,), 0, name="ord_0")
    rep = transforms_agree_check(filt, flag_valuation(1), max_degree=max_degree)
    results["transforms_agree_P1"] = rep["gap"] == 0

    spec = ReesSemigroupSpec(p1, flag_valuation(1), filt, 0)
    rep = bc_volume_check(spec, max_degree=max_degree, mass_degrees=(50,))
    results["boucksom_chen_P1"] = (
        rep["volume_filtered_body"] == F(1, 2)
        and rep["slice_volume_integral"] == F(1, 2)
    )

    prob = SeshadriProblem(P2(), p2_bundle_class(1), (0, 1))
    rep = subgraph_equals_body_check(prob, 2, max_degree=min(max_degree, 8))
    results["integrals_are_volumes_P2"] = bool(
        rep["bodies_equal"] and rep["counts_equal"]
    )

    verdict = rationality_verdict(prob, max_degree=min(max_degree, 6))
    results["seshadri_verdict_P2"] = (
        verdict["eps"] == 1 and verdict["iota"] == F(1, 3)
    )

    props = property_suites(seed)
    for name, rep in props.items():
        results[f"property_{name}"] = rep["failures"] == 0
    return results
