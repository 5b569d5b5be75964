import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov.errors import EmptyBody
from okounkov.geometry import (
    PLFunction,
    constant_function,
    convex_hull,
    fiber_envelopes,
    from_halfspaces,
    integrate_pl,
    project_polytope,
    slice_polytope,
    slice_volume_integral,
    subgraph_body,
    upper_concave_envelope,
)

F = Fraction


def brute_force_hull_vertices(points):
    """O(n^3)-style oracle: p is a vertex iff it is not in the hull of the
    others, decided by exact LP feasibility via vertex enumeration over
    barycentric combinations of small support (dimension <= 3, few points)."""
    pts = sorted({tuple(map(F, p)) for p in points})
    verts = []
    for p in pts:
        others = [q for q in pts if q != p]
        if not others or not _in_hull(p, others):
            verts.append(p)
    return verts


def _in_hull(p, pts):
    # exact membership via Caratheodory over all (dim+1)-subsets
    d = len(p)
    for k in range(1, d + 2):
        for combo in itertools.combinations(pts, k):
            lam = _barycentric(p, combo)
            if lam is not None and all(x >= 0 for x in lam):
                return True
    return False


def _barycentric(p, combo):
    from okounkov.geometry import solve_square

    k = len(combo)
    a = [[F(combo[j][c]) for j in range(k)] for c in range(len(p))]
    a.append([F(1)] * k)
    b = list(p) + [F(1)]
    # overdetermined: pick square subsystem, verify on the rest
    rows = list(range(len(a)))
    for subset in itertools.combinations(rows, k):
        sq = [a[i] for i in subset]
        rhs = [b[i] for i in subset]
        sol = solve_square(sq, rhs)
        if sol is None:
            continue
        if all(
            sum(a[i][j] * sol[j] for j in range(k)) == b[i] for i in rows
        ):
            return sol
    return None


def test_hull_triangle_drops_interior():
    p = convex_hull([(0, 0), (1, 0), (0, 1), (F(1, 4), F(1, 4))])
    assert p.vertices == ((F(0), F(0)), (F(0), F(1)), (F(1), F(0)))
    assert p.dim == 2


def test_hull_segment():
    p = convex_hull([(0,), (1,)])
    assert p.vertices == ((F(0),), (F(1),))
    assert p.dim == 1
    assert p.volume() == 1


def test_hull_contains_and_hrep_consistency():
    pts = [(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)]
    p = convex_hull(pts)
    assert p.contains((1, 1))
    assert not p.contains((3, 0))
    for v in p.vertices:
        assert p.contains(v)
        assert not p.strictly_contains(v)
    assert p.strictly_contains((1, 1))


def test_hull_random_vs_bruteforce_2d():
    rng = random.Random(7)
    for _ in range(25):
        pts = [
            (F(rng.randint(0, 12), rng.randint(1, 4)), F(rng.randint(0, 12), rng.randint(1, 4)))
            for _ in range(rng.randint(3, 9))
        ]
        p = convex_hull(pts)
        assert sorted(p.vertices) == brute_force_hull_vertices(pts)


def test_hull_random_vs_bruteforce_3d():
    rng = random.Random(11)
    for _ in range(15):
        pts = [
            tuple(F(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(3))
            for _ in range(rng.randint(4, 8))
        ]
        p = convex_hull(pts)
        assert sorted(p.vertices) == brute_force_hull_vertices(pts)


def test_volume_unit_simplices():
    for n in (1, 2, 3, 4):
        pts = [tuple(0 for _ in range(n))]
        for i in range(n):
            pts.append(tuple(int(i == j) for j in range(n)))
        p = convex_hull(pts)
        assert p.volume() == F(1, _factorial(n))


def _factorial(n):
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def test_volume_unit_square_and_cube():
    sq = convex_hull(list(itertools.product((0, 1), repeat=2)))
    assert sq.volume() == 1
    cube = convex_hull(list(itertools.product((0, 1), repeat=3)))
    assert cube.volume() == 1


def test_volume_shoelace_example():
    # quadrilateral (0,0),(3,0),(2,2),(0,3); shoelace: (0+6+6+0)/2 = 6
    p = convex_hull([(0, 0), (3, 0), (0, 3), (2, 2)])
    assert len(p.vertices) == 4
    assert p.volume() == 6


def test_volume_lower_dimensional():
    # segment embedded in R^2: euclidean volume 0, lattice-normalized 2
    p = convex_hull([(0, 0), (2, 2)])
    assert p.volume("euclidean") == 0
    assert p.volume("lattice") == 2  # (2,2) = 2 * primitive (1,1)
    assert p.dim == 1


def test_volume_oracle_simplex_decomposition():
    # exhaustive simplex decomposition oracle on random small instances
    rng = random.Random(3)
    for _ in range(10):
        pts = [
            tuple(F(rng.randint(0, 8)) for _ in range(2))
            for _ in range(rng.randint(3, 7))
        ]
        p = convex_hull(pts)
        if p.dim < 2:
            continue
        total = p.volume()
        # oracle: sum over a fan triangulation from the first vertex of the
        # sorted vertex list, using brute-force polygon ordering
        verts = sorted(p.vertices)
        ordered = _order_polygon(verts)
        fan = F(0)
        for i in range(1, len(ordered) - 1):
            a, b, c = ordered[0], ordered[i], ordered[i + 1]
            fan += abs(
                (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1])
            ) / 2
        assert fan == total


def _order_polygon(verts):
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)

    def half(v):
        dx, dy = v[0] - cx, v[1] - cy
        return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

    def cross(u, v):
        return (u[0] - cx) * (v[1] - cy) - (v[0] - cx) * (u[1] - cy)

    import functools

    return sorted(
        verts,
        key=functools.cmp_to_key(
            lambda u, v: (half(u) - half(v)) or (0 if cross(u, v) == 0 else (-1 if cross(u, v) > 0 else 1))
        ),
    )


def test_slice_triangle():
    p = convex_hull([(0, 0), (1, 0), (1, 1)])
    s = slice_polytope(p, {0: F(1, 2)})
    assert s.vertices == ((F(0),), (F(1, 2),))
    assert s.volume() == F(1, 2)


def test_slice_empty():
    p = convex_hull([(0, 0), (1, 0), (1, 1)])
    s = slice_polytope(p, {0: 5})
    assert s.is_empty


def test_slice_cube():
    cube = convex_hull(list(itertools.product((0, 1), repeat=3)))
    s = slice_polytope(cube, {0: F(1, 3)})
    assert s.volume() == 1
    assert sorted(s.vertices) == sorted(
        [(F(0), F(0)), (F(0), F(1)), (F(1), F(0)), (F(1), F(1))]
    )


def test_from_halfspaces_square():
    p = from_halfspaces(
        [((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)]
    )
    assert p.volume() == 1
    assert len(p.vertices) == 4


def test_from_halfspaces_infeasible():
    p = from_halfspaces([((1,), 0), ((-1,), -1)])
    assert p.is_empty


def test_envelope_tent_dominated_sample():
    # middle sample below the chord: envelope is the constant chord
    env = upper_concave_envelope(
        [((0,), 1), ((F(1, 2),), 0), ((1,), 1)], convex_hull([(0,), (1,)])
    )
    for x in (0, F(1, 4), F(1, 2), 1):
        assert env.value((x,)) == 1


def test_envelope_constant():
    env = upper_concave_envelope(
        [((0,), 0), ((1,), 0)], convex_hull([(0,), (1,)])
    )
    assert env.value((F(1, 3),)) == 0


def test_envelope_interpolates_concave_grid():
    dom = convex_hull([(0,), (1,)])
    # concave f(x) = x(2-x) sampled on a grid: envelope interpolates at nodes
    nodes = [F(i, 4) for i in range(5)]
    samples = [((x,), x * (2 - x)) for x in nodes]
    env = upper_concave_envelope(samples, dom)
    for x in nodes:
        assert env.value((x,)) == x * (2 - x)


def test_envelope_idempotent_and_dominates():
    rng = random.Random(5)
    dom = convex_hull([(0,), (1,)])
    for _ in range(10):
        samples = [
            ((F(rng.randint(0, 8), 8),), F(rng.randint(-4, 4), rng.randint(1, 3)))
            for _ in range(rng.randint(2, 8))
        ]
        env = upper_concave_envelope(samples, dom)
        for (x,), v in samples:
            assert env.value((x,)) >= v
        resamples = [(c[0], env.value(c[0])) for c in zip({pt for pt, _ in samples})]
        env2 = upper_concave_envelope(
            [(pt, env.value(pt)) for pt, _ in samples], convex_hull([pt for pt, _ in samples])
        )
        for pt, _ in samples:
            assert env2.value(pt) == env.value(pt)


def test_envelope_2d():
    dom = convex_hull([(0, 0), (1, 0), (0, 1)])
    samples = [((0, 0), 0), ((1, 0), 1), ((0, 1), 0)]
    env = upper_concave_envelope(samples, dom)
    assert env.value((F(1, 2), F(1, 2))) == F(1, 2)
    assert env.value((F(1, 3), F(1, 3))) == F(1, 3)


def test_integrate_constant():
    dom = convex_hull([(0, 0), (2, 0), (0, 2), (2, 2)])
    f = constant_function(dom, F(3, 2))
    assert integrate_pl(f) == 6


def test_integrate_linear_on_triangle():
    dom = convex_hull([(0, 0), (1, 0), (1, 1)])
    f = PLFunction(
        domain=dom,
        cells=(tuple(dom.vertices),),
        coeffs=(((F(1), F(0)), F(0)),),
        concave=True,
    )
    assert integrate_pl(f) == F(1, 3)


def test_integrate_linear_1d():
    dom = convex_hull([(0,), (1,)])
    f = PLFunction(
        domain=dom,
        cells=((( F(0),), (F(1),)),),
        coeffs=(((F(1),), F(0)),),
        concave=True,
    )
    assert integrate_pl(f) == F(1, 2)


def test_subgraph_triangle():
    dom = convex_hull([(0,), (1,)])
    phi = PLFunction(
        domain=dom,
        cells=(((F(0),), (F(1),)),),
        coeffs=(((F(1),), F(0)),),
        concave=True,
    )
    body = subgraph_body(dom, phi, 0)
    assert sorted(body.vertices) == [
        (F(0), F(0)),
        (F(1), F(0)),
        (F(1), F(1)),
    ]


def test_subgraph_flat_zero():
    dom = convex_hull([(0,), (1,)])
    phi = constant_function(dom, 0)
    body = subgraph_body(dom, phi, 0)
    assert body.dim == 1
    assert body.volume("euclidean") == 0


def test_subgraph_below_floor():
    dom = convex_hull([(0,), (1,)])
    phi = constant_function(dom, -2)
    with pytest.raises(EmptyBody):
        subgraph_body(dom, phi, 0)


def test_subgraph_quadrilateral_volume():
    dom = convex_hull([(0,), (1,)])
    phi = PLFunction(
        domain=dom,
        cells=(((F(0),), (F(1),)),),
        coeffs=(((F(-1),), F(1)),),
        concave=True,
    )
    body = subgraph_body(dom, phi, -1)
    assert body.volume() == F(3, 2)


def test_subgraph_volume_equals_integral():
    dom = convex_hull([(0, 0), (1, 0), (0, 1)])
    phi = upper_concave_envelope(
        [((0, 0), F(1, 2)), ((1, 0), 1), ((0, 1), 0)], dom
    )
    body = subgraph_body(dom, phi, 0)
    shifted = integrate_pl(phi)
    assert body.volume() == shifted


def test_fiber_envelopes_fubini():
    p = convex_hull([(0, 0), (3, 0), (0, 3), (2, 2)])
    base, upper, lower = fiber_envelopes(p, 1)
    assert integrate_pl(upper) - integrate_pl(lower) == p.volume()


def test_fiber_envelopes_cube():
    cube = convex_hull(list(itertools.product((0, 1), repeat=3)))
    base, upper, lower = fiber_envelopes(cube, 2)
    assert integrate_pl(upper) - integrate_pl(lower) == 1


def test_slice_volume_integral_triangle():
    p = convex_hull([(0, 0), (1, 0), (1, 1)])
    # slice at x=t has length t: integral of t dt = 1/2... over [0,1] = 1/2
    assert slice_volume_integral(p, 0) == F(1, 2)
    # weighted by t: integral of t*t = 1/3
    assert slice_volume_integral(p, 0, weight_coeffs=(0, 1)) == F(1, 3)


def test_slice_volume_integral_matches_volume_3d():
    pts = [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 1)]
    p = convex_hull(pts)
    assert slice_volume_integral(p, 0) == p.volume()


def test_project():
    p = convex_hull([(0, 0), (1, 0), (1, 1)])
    q = project_polytope(p, [1])
    assert q.vertices == ((F(0),), (F(1),))


@given(
    st.lists(
        st.tuples(st.integers(0, 6), st.integers(0, 6)),
        min_size=3,
        max_size=8,
    )
)
@settings(max_examples=40, deadline=None)
def test_hull_vertices_subset_and_containment(pts):
    p = convex_hull(pts)
    as_frac = {(F(a), F(b)) for a, b in pts}
    assert set(p.vertices) <= as_frac
    for q in as_frac:
        assert p.contains(q)


def test_hull_fifty_random_points_unit_square():
    rng = random.Random(42)
    pts = [
        (F(rng.randint(0, 24), 24), F(rng.randint(0, 24), 24))
        for _ in range(50)
    ]
    p = convex_hull(pts)
    assert sorted(p.vertices) == brute_force_hull_vertices(pts)
