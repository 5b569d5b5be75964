"""Exact rational convex geometry.

Polytopes carry both an irredundant V-representation and a consistent
H-representation; hulls are computed by an incremental beneath-beyond
pass over lexicographically sorted integer-scaled points, which also
yields the deterministic placing triangulation used for volumes and
integrals.  Piecewise-linear functions are stored cell-wise with exact
affine data; a concave function is globally the minimum of its cell
functions, which is what the envelope and subgraph constructions rely on.

Volume conventions: full-dimensional polytopes use the Euclidean form;
lower-dimensional hulls use the lattice-normalized form induced by the
integer points of the direction space (a Euclidean answer would be
irrational in general).  Requesting the Euclidean volume of a polytope of
positive codimension returns 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm, factorial
from typing import Iterable, Sequence

from .errors import DimensionMismatch, EmptyBody, NoSamples
from .lattices import saturation_basis, vdot, vsub

Point = tuple  # tuple[Fraction, ...]
Halfspace = tuple  # (integer normal tuple, Fraction offset): <a, x> <= b


def _frac_point(p) -> Point:
    return tuple(Fraction(x) for x in p)


def _primitive(normal, offset):
    """Scale (a, b) so a is a primitive integer vector; orientation kept."""
    den = 1
    for x in normal:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(Fraction(x) * den) for x in normal]
    b = Fraction(offset) * den
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g > 1:
        ints = [x // g for x in ints]
        b = b / g
    return tuple(ints), b


# ---------------------------------------------------------------------------
# exact linear algebra over Q


def solve_square(a, b):
    """Solve a*x = b exactly; returns None when a is singular."""
    n = len(b)
    m = [list(map(Fraction, row)) + [Fraction(v)] for row, v in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return tuple(m[i][n] for i in range(n))


def row_space_basis(rows):
    """Subset of the input rows forming a basis of their Q-span."""
    basis = []
    echelon = []
    for row in rows:
        vec = list(map(Fraction, row))
        for e in echelon:
            col = next(j for j, x in enumerate(e) if x)
            if vec[col]:
                f = vec[col] / e[col]
                vec = [x - f * y for x, y in zip(vec, e)]
        if any(vec):
            echelon.append(vec)
            basis.append(tuple(map(Fraction, row)))
    return basis


def kernel_basis(rows, n):
    """Basis of {x : row . x = 0 for all rows} in Q^n."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fcol in free:
        vec = [Fraction(0)] * n
        vec[fcol] = Fraction(1)
        for i, pcol in enumerate(pivots):
            vec[pcol] = -m[i][fcol]
        out.append(tuple(vec))
    return out


def _independent_columns(rows):
    cols = []
    echelon = []
    n = len(rows[0])
    for c in range(n):
        vec = [Fraction(r[c]) for r in rows]
        for e in echelon:
            col = next(j for j, x in enumerate(e) if x)
            if vec[col]:
                f = vec[col] / e[col]
                vec = [x - f * y for x, y in zip(vec, e)]
        if any(vec):
            echelon.append(vec)
            cols.append(c)
        if len(cols) == len(rows):
            break
    return cols


def _inverse(square):
    n = len(square)
    aug = [
        list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(square)
    ]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


# ---------------------------------------------------------------------------
# incremental hull over integer points (full-dimensional)


def _int_det(rows):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _hyperplane(points):
    """Primitive integer (normal, offset) through k affinely independent
    integer points in Z^k; None if they are affinely dependent."""
    base = points[0]
    diffs = [vsub(p, base) for p in points[1:]]
    k = len(base)
    normal = []
    for j in range(k):
        minor = [[d[c] for c in range(k) if c != j] for d in diffs]
        normal.append((-1) ** j * _int_det(minor))
    if not any(normal):
        return None
    g = 0
    for x in normal:
        g = gcd(g, x)
    normal = tuple(x // g for x in normal)
    return normal, vdot(normal, base)


def _hull_core(pts):
    """Beneath-beyond hull of full-dimensional integer points.

    Returns (facets, simplices): facets are (normal, offset, sorted vertex
    index tuple) with outward primitive integer normals; simplices is the
    placing triangulation (insertion in lexicographic order) as tuples of
    point indices.
    """
    k = len(pts[0])
    order = sorted(range(len(pts)), key=lambda i: pts[i])
    seed = [order[0]]
    for i in order[1:]:
        cand = [pts[j] for j in seed] + [pts[i]]
        diffs = [vsub(p, cand[0]) for p in cand[1:]]
        if len(row_space_basis(diffs)) == len(diffs):
            seed.append(i)
        if len(seed) == k + 1:
            break
    if len(seed) < k + 1:
        raise ValueError("points are not full-dimensional")
    # fixed strictly interior reference: centroid of the seed simplex,
    # kept as an exact (sum, count) pair to avoid fractions
    ref_sum = tuple(sum(c) for c in zip(*(pts[i] for i in seed)))
    ref_n = k + 1

    def oriented(idx_tuple):
        hp = _hyperplane([pts[i] for i in idx_tuple])
        if hp is None:
            return None
        normal, offset = hp
        side = vdot(normal, ref_sum) - ref_n * offset
        if side > 0:
            normal = tuple(-x for x in normal)
            offset = -offset
        elif side == 0:
            return None  # hyperplane through the interior: not a facet
        return normal, offset, tuple(sorted(idx_tuple))

    facets = []
    for drop in range(k + 1):
        f = oriented(tuple(seed[j] for j in range(k + 1) if j != drop))
        facets.append(f)
    simplices = [tuple(sorted(seed))]
    seed_set = set(seed)
    for i in order:
        if i in seed_set:
            continue
        p = pts[i]
        visible = [f for f in facets if vdot(f[0], p) > f[1]]
        if not visible:
            continue
        visible_keys = {f[2] for f in visible}
        ridge_count = {}
        for f in visible:
            for drop in f[2]:
                ridge = tuple(v for v in f[2] if v != drop)
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        new_facets = []
        for ridge, cnt in ridge_count.items():
            if cnt != 1:
                continue  # interior ridge of the visible region
            nf = oriented(ridge + (i,))
            if nf is not None:
                new_facets.append(nf)
        for f in visible:
            simplices.append(tuple(sorted(f[2] + (i,))))
        facets = [f for f in facets if f[2] not in visible_keys] + new_facets
    return facets, simplices


# ---------------------------------------------------------------------------
# Polytope


@dataclass(frozen=True)
class Polytope:
    """Bounded rational polytope with verified V- and H-representations."""

    ambient_dim: int
    vertices: tuple = ()
    halfspaces: tuple = ()
    equations: tuple = ()
    dim: int = -1
    triangulation: tuple = field(default=(), repr=False, compare=False)
    #: basis rows of the direction-space lattice (lower-dim volumes)
    direction_lattice: tuple = field(default=(), repr=False, compare=False)

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, point) -> bool:
        p = _frac_point(point)
        if len(p) != self.ambient_dim:
            raise DimensionMismatch(
                f"point in R^{len(p)}, polytope in R^{self.ambient_dim}"
            )
        if self.is_empty:
            return False
        for a, b in self.equations:
            if vdot(a, p) != b:
                return False
        return all(vdot(a, p) <= b for a, b in self.halfspaces)

    def strictly_contains(self, point) -> bool:
        """Membership in the relative interior."""
        p = _frac_point(point)
        if not self.contains(p):
            return False
        return all(vdot(a, p) < b for a, b in self.halfspaces)

    def volume(self, form: str = "auto") -> Fraction:
        """Exact volume.

        ``auto`` uses the Euclidean form for full-dimensional polytopes
        and the lattice-normalized form otherwise; ``euclidean`` returns
        0 for lower-dimensional polytopes; ``lattice`` always normalizes
        by the direction lattice.
        """
        if self.is_empty or self.dim <= 0:
            return Fraction(0)
        if self.dim < self.ambient_dim and form == "euclidean":
            return Fraction(0)
        k = self.dim
        rows, consts = chart_affine(self)
        total = Fraction(0)
        for simplex in self.triangulation:
            if len(simplex) != k + 1:
                continue
            ys = [_apply_affine(rows, consts, v) for v in simplex]
            total += _simplex_volume(ys)
        return total

    def scaled(self, factor) -> "Polytope":
        f = Fraction(factor)
        if self.is_empty:
            return self
        return convex_hull([tuple(f * x for x in v) for v in self.vertices])

    def translated(self, offset) -> "Polytope":
        off = _frac_point(offset)
        if self.is_empty:
            return self
        return convex_hull(
            [tuple(x + o for x, o in zip(v, off)) for v in self.vertices]
        )

    def lattice_points(self):
        """All integer points of the polytope, lexicographically sorted."""
        if self.is_empty:
            return []
        import math as _math

        ranges = [
            range(
                _math.ceil(min(v[i] for v in self.vertices)),
                _math.floor(max(v[i] for v in self.vertices)) + 1,
            )
            for i in range(self.ambient_dim)
        ]
        out = []
        for cand in itertools.product(*ranges):
            if self.contains(cand):
                out.append(tuple(int(c) for c in cand))
        return out


def chart_affine(p: Polytope):
    """Affine map y = rows.x + consts onto full-dimensional coordinates.

    Full-dimensional polytopes map identically; lower-dimensional ones map
    through the lattice basis of their direction space, so that simplex
    determinants realize the lattice-normalized volume form.
    """
    n = p.ambient_dim
    if p.dim == n:
        rows = [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
        return rows, tuple(Fraction(0) for _ in range(n))
    base = p.vertices[0]
    basis = p.direction_lattice
    k = len(basis)
    cols = _independent_columns(basis)
    sub = [[Fraction(basis[j][c]) for j in range(k)] for c in cols]  # S[c][j]
    inv = _inverse(sub)  # y = inv . (x - base)[cols]
    rows = []
    consts = []
    for i in range(k):
        row = [Fraction(0)] * n
        for jc, c in enumerate(cols):
            row[c] = inv[i][jc]
        rows.append(tuple(row))
        consts.append(-vdot(rows[i], base))
    return rows, tuple(consts)


def _apply_affine(rows, consts, point):
    p = _frac_point(point)
    return tuple(vdot(r, p) + c for r, c in zip(rows, consts))


def _simplex_volume(ys) -> Fraction:
    k = len(ys) - 1
    diffs = [vsub(y, ys[0]) for y in ys[1:]]
    den = 1
    for dvec in diffs:
        for x in dvec:
            den = lcm(den, Fraction(x).denominator)
    int_rows = [[int(Fraction(x) * den) for x in dvec] for dvec in diffs]
    return Fraction(abs(_int_det(int_rows)), den**k) / factorial(k)


def empty_polytope(ambient_dim: int) -> Polytope:
    return Polytope(ambient_dim=ambient_dim)


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Irredundant hull of rational points, with H-rep and triangulation."""
    pts = sorted({_frac_point(p) for p in points})
    if not pts:
        raise ValueError("convex_hull of no points")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise DimensionMismatch("mixed point dimensions")
    base = pts[0]
    diffs = [vsub(p, base) for p in pts[1:]]
    dir_basis = row_space_basis(diffs)
    k = len(dir_basis)
    equations = []
    for ker in kernel_basis(dir_basis, n) if k < n else []:
        a, b = _primitive(ker, vdot(ker, base))
        equations.append((a, b))
    equations.sort()
    if k == 0:
        return Polytope(
            ambient_dim=n,
            vertices=(base,),
            halfspaces=(),
            equations=tuple(equations),
            dim=0,
            triangulation=((base,),),
            direction_lattice=(),
        )
    lattice = tuple(tuple(x) for x in saturation_basis(dir_basis, n))
    rows, consts = _chart_from(base, lattice)
    ys = [_apply_affine(rows, consts, p) for p in pts]
    den = 1
    for y in ys:
        for x in y:
            den = lcm(den, x.denominator)
    iys = [tuple(int(x * den) for x in y) for y in ys]

    if k == 1:
        lo = min(range(len(pts)), key=lambda i: iys[i])
        hi = max(range(len(pts)), key=lambda i: iys[i])
        facet_keys = [((1,), iys[hi][0]), ((-1,), -iys[lo][0])]
        vert_idx = sorted({lo, hi}, key=lambda i: pts[i])
        tri = (tuple(pts[i] for i in sorted({lo, hi})),)
    else:
        facets, simplices = _hull_core(iys)
        facet_keys = sorted({(f[0], f[1]) for f in facets})
        candidates = sorted({i for f in facets for i in f[2]})
        vert_idx = [
            i
            for i in candidates
            if len(
                row_space_basis(
                    [a for a, b in facet_keys if vdot(a, iys[i]) == b]
                )
            )
            == k
        ]
        tri = tuple(tuple(pts[i] for i in s) for s in simplices)
    halfspaces = sorted(
        _lift_halfspace(a, Fraction(b, den), rows, consts) for a, b in facet_keys
    )
    return Polytope(
        ambient_dim=n,
        vertices=tuple(sorted(pts[i] for i in vert_idx)),
        halfspaces=tuple(halfspaces),
        equations=tuple(equations),
        dim=k,
        triangulation=tri,
        direction_lattice=lattice,
    )


def _chart_from(base, lattice):
    k = len(lattice)
    cols = _independent_columns(lattice)
    sub = [[Fraction(lattice[j][c]) for j in range(k)] for c in cols]
    inv = _inverse(sub)
    n = len(base)
    rows = []
    consts = []
    for i in range(k):
        row = [Fraction(0)] * n
        for jc, c in enumerate(cols):
            row[c] = inv[i][jc]
        rows.append(tuple(row))
        consts.append(-vdot(rows[i], base))
    return rows, tuple(consts)


def _lift_halfspace(a_chart, b_chart, rows, consts):
    """Pull a chart halfspace <a, y> <= b back to ambient coordinates."""
    n = len(rows[0])
    normal = [Fraction(0)] * n
    for g, row in zip(a_chart, rows):
        for c in range(n):
            normal[c] += Fraction(g) * row[c]
    offset = Fraction(b_chart) - sum(
        Fraction(g) * cst for g, cst in zip(a_chart, consts)
    )
    return _primitive(normal, offset)


def _echelon_system(pairs, n):
    """Row-reduce an equality system [(a, b)]; returns (basis, consistent)."""
    m = [list(map(Fraction, a)) + [Fraction(b)] for a, b in pairs]
    basis = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
    for row in m[r:]:
        if row[n] != 0:
            return [], False
    return [(tuple(row[:n]), row[n]) for row in m[:r]], True


def from_halfspaces(halfspaces, equations=(), ambient_dim=None) -> Polytope:
    """Polytope from inequalities <a,x> <= b and equalities; must be bounded.

    Vertices are enumerated as basic solutions of the constraint system
    and canonicalized through :func:`convex_hull`; an infeasible system
    yields the empty polytope.
    """
    hs = [(_frac_point(a), Fraction(b)) for a, b in halfspaces]
    eqs = [(_frac_point(a), Fraction(b)) for a, b in equations]
    if ambient_dim is None:
        probe = hs or eqs
        if not probe:
            raise ValueError("ambient dimension required")
        ambient_dim = len(probe[0][0])
    n = ambient_dim
    if n == 0:
        ok = all(b >= 0 for _, b in hs) and all(b == 0 for _, b in eqs)
        return convex_hull([()]) if ok else empty_polytope(0)
    for a, b in hs:
        if not any(a) and b < 0:
            return empty_polytope(n)
    eq_basis, consistent = _echelon_system([(a, b) for a, b in eqs if any(a) or b], n)
    if not consistent:
        return empty_polytope(n)
    free = n - len(eq_basis)
    ineq_rows = [(a, b) for a, b in hs if any(a)]
    points = set()
    for combo in itertools.combinations(range(len(ineq_rows)), free):
        system = eq_basis + [ineq_rows[i] for i in combo]
        sol = solve_square([a for a, _ in system], [b for _, b in system])
        if sol is None:
            continue
        if all(vdot(a, sol) <= b for a, b in ineq_rows) and all(
            vdot(a, sol) == b for a, b in eq_basis
        ):
            points.add(sol)
    if not points:
        return empty_polytope(n)
    return convex_hull(points)


def slice_polytope(p: Polytope, fixed: dict) -> Polytope:
    """Intersection with {x_i = c_i}, re-expressed in the remaining coords.

    An empty intersection returns the empty polytope rather than raising.
    """
    for i in fixed:
        if not 0 <= i < p.ambient_dim:
            raise DimensionMismatch(f"coordinate {i} out of range")
    keep = [i for i in range(p.ambient_dim) if i not in fixed]
    if p.is_empty:
        return empty_polytope(len(keep))
    values = {i: Fraction(v) for i, v in fixed.items()}

    def project_constraint(a, b):
        b2 = Fraction(b) - sum(Fraction(a[i]) * values[i] for i in fixed)
        a2 = tuple(Fraction(a[i]) for i in keep)
        return a2, b2

    hs = []
    for a, b in p.halfspaces:
        a2, b2 = project_constraint(a, b)
        if not any(a2):
            if b2 < 0:
                return empty_polytope(len(keep))
            continue
        hs.append((a2, b2))
    eqs = []
    for a, b in p.equations:
        a2, b2 = project_constraint(a, b)
        if not any(a2):
            if b2 != 0:
                return empty_polytope(len(keep))
            continue
        eqs.append((a2, b2))
    if not keep:
        point = tuple(values[i] for i in range(p.ambient_dim))
        return convex_hull([()]) if p.contains(point) else empty_polytope(0)
    return from_halfspaces(hs, eqs, ambient_dim=len(keep))


def project_polytope(p: Polytope, drop) -> Polytope:
    """Image under deletion of the coordinates in ``drop``."""
    drop = set(drop)
    keep = [i for i in range(p.ambient_dim) if i not in drop]
    if p.is_empty:
        return empty_polytope(len(keep))
    return convex_hull([tuple(v[i] for i in keep) for v in p.vertices])


# ---------------------------------------------------------------------------
# convex cones (linearly bounded, graded by the first coordinate)


@dataclass(frozen=True)
class ConvexCone:
    """cone(rays) for rays of positive degree (first coordinate)."""

    ambient_dim: int
    rays: tuple
    section: Polytope  # cone intersected with {degree = 1}

    def contains(self, point) -> bool:
        p = _frac_point(point)
        if not any(p):
            return True
        if p[0] <= 0:
            return False
        return self.section.contains(tuple(x / p[0] for x in p[1:]))

    def strictly_contains(self, point) -> bool:
        p = _frac_point(point)
        if p[0] <= 0:
            return False
        return self.section.strictly_contains(tuple(x / p[0] for x in p[1:]))


def cone_over_graded_rays(rays) -> ConvexCone:
    rs = tuple(_frac_point(r) for r in rays)
    if any(r[0] <= 0 for r in rs):
        raise ValueError("rays must have positive degree")
    section = convex_hull([tuple(x / r[0] for x in r[1:]) for r in rs])
    return ConvexCone(ambient_dim=len(rs[0]), rays=rs, section=section)


# ---------------------------------------------------------------------------
# piecewise-linear functions


@dataclass(frozen=True)
class PLFunction:
    """Cell-wise affine function on a polytope.

    ``cells[i]`` is a simplex (tuple of points) and ``coeffs[i]`` a pair
    (gradient, constant) with value <g, x> + c on the cell.  For a concave
    function the global value is the minimum over all cell functions,
    which is how :meth:`value` evaluates when ``concave`` is set.
    """

    domain: Polytope
    cells: tuple
    coeffs: tuple
    concave: bool = False

    def value(self, point) -> Fraction:
        p = _frac_point(point)
        if not self.domain.contains(p):
            raise ValueError(f"point {point} outside domain")
        if self.concave:
            return min(vdot(g, p) + c for g, c in self.coeffs)
        for cell, (g, c) in zip(self.cells, self.coeffs):
            if _in_simplex(p, cell):
                return vdot(g, p) + c
        raise ValueError(f"point {point} not covered by cells")

    def max_value(self) -> Fraction:
        return max(
            vdot(g, v) + c
            for cell, (g, c) in zip(self.cells, self.coeffs)
            for v in cell
        )

    def min_value(self) -> Fraction:
        return min(
            vdot(g, v) + c
            for cell, (g, c) in zip(self.cells, self.coeffs)
            for v in cell
        )


def _in_simplex(p, cell) -> bool:
    base = cell[0]
    diffs = [vsub(v, base) for v in cell[1:]]
    if not diffs:
        return tuple(p) == tuple(base)
    k = len(diffs)
    sel = _independent_columns(diffs)
    if len(sel) < k:
        return False
    a = [[diffs[j][c] for j in range(k)] for c in sel]
    b = [p[c] - base[c] for c in sel]
    lam = solve_square(a, b)
    if lam is None or any(x < 0 for x in lam) or sum(lam) > 1:
        return False
    recon = tuple(
        base[c] + sum(lam[j] * diffs[j][c] for j in range(k))
        for c in range(len(p))
    )
    return recon == tuple(p)


def constant_function(domain: Polytope, value) -> PLFunction:
    v = Fraction(value)
    zero = tuple(Fraction(0) for _ in range(domain.ambient_dim))
    cells = domain.triangulation or ((domain.vertices[0],),)
    return PLFunction(
        domain=domain,
        cells=tuple(tuple(c) for c in cells),
        coeffs=tuple((zero, v) for _ in cells),
        concave=True,
    )


def upper_concave_envelope(samples, domain: Polytope) -> PLFunction:
    """Least concave usc majorant of finitely many samples on the domain.

    Realized as the upper hull of the lifted points; the returned function
    lives on the hull of the sample points (callers include the domain's
    vertices among the samples whenever full coverage is required).
    """
    best = {}
    for p, v in samples:
        pt = _frac_point(p)
        val = Fraction(v)
        if pt not in best or val > best[pt]:
            best[pt] = val
    if not best:
        raise NoSamples("upper_concave_envelope of no samples")
    for pt in best:
        if not domain.contains(pt):
            raise ValueError(f"sample {pt} outside domain")
    support = convex_hull(list(best))
    if support.dim == 0:
        return constant_function(support, max(best.values()))
    if support.dim < support.ambient_dim:
        return _envelope_via_chart(best, support)
    return _envelope_full_dim(best, support)


def _envelope_full_dim(best, support: Polytope) -> PLFunction:
    n = support.ambient_dim
    lifted = [(*p, v) for p, v in best.items()]
    hull = convex_hull(lifted)
    cells = []
    coeffs = []
    if hull.dim <= n:
        grad, const = _affine_from_graph(list(best.items()), n)
        for simplex in support.triangulation:
            cells.append(tuple(simplex))
            coeffs.append((grad, const))
    else:
        for a, b in hull.halfspaces:
            if a[n] <= 0:
                continue
            grad = tuple(Fraction(-a[i], a[n]) for i in range(n))
            const = Fraction(b, a[n])
            cell_pts = sorted(p for p, v in best.items() if vdot(a, (*p, v)) == b)
            if len(cell_pts) < n + 1:
                continue
            piece = convex_hull(cell_pts)
            if piece.dim < n:
                continue
            for simplex in piece.triangulation:
                cells.append(tuple(simplex))
                coeffs.append((grad, const))
    if not cells:
        top = max(best.values())
        zero = tuple(Fraction(0) for _ in range(n))
        cells = [tuple(s) for s in support.triangulation]
        coeffs = [(zero, top) for _ in cells]
    return PLFunction(
        domain=support, cells=tuple(cells), coeffs=tuple(coeffs), concave=True
    )


def _envelope_via_chart(best, support: Polytope) -> PLFunction:
    """Envelope on a lower-dimensional support, through its chart."""
    rows, consts = chart_affine(support)
    chart_of = {p: _apply_affine(rows, consts, p) for p in best}
    back = {y: p for p, y in chart_of.items()}
    chart_samples = {chart_of[p]: v for p, v in best.items()}
    chart_support = convex_hull(list(chart_samples))
    env = _envelope_full_dim(chart_samples, chart_support)
    cells = tuple(tuple(back[y] for y in cell) for cell in env.cells)
    coeffs = []
    n = support.ambient_dim
    for g, c in env.coeffs:
        grad = [Fraction(0)] * n
        const = Fraction(c)
        for gi, row, cst in zip(g, rows, consts):
            for j in range(n):
                grad[j] += gi * row[j]
            const += gi * cst
        coeffs.append((tuple(grad), const))
    return PLFunction(
        domain=support, cells=cells, coeffs=tuple(coeffs), concave=True
    )


def _affine_from_graph(items, n):
    """Exact affine interpolant through graph samples lying on one plane."""
    base_p, base_v = items[0]
    rows = []
    rhs = []
    for p, v in items[1:]:
        rows.append(vsub(p, base_p))
        rhs.append(v - base_v)
    keep = []
    echelon = []
    for row, r in zip(rows, rhs):
        vec = list(map(Fraction, row))
        for e in echelon:
            col = next(j for j, x in enumerate(e) if x)
            if vec[col]:
                f = vec[col] / e[col]
                vec = [x - f * y for x, y in zip(vec, e)]
        if any(vec):
            echelon.append(vec)
            keep.append((row, r))
    grad = [Fraction(0)] * n
    if keep:
        cols = _independent_columns([row for row, _ in keep])
        a = [[row[c] for c in cols] for row, _ in keep]
        sol = solve_square(a, [r for _, r in keep])
        for c, g in zip(cols, sol):
            grad[c] = g
    const = base_v - vdot(grad, base_p)
    return tuple(grad), const


def integrate_pl(f: PLFunction) -> Fraction:
    """Exact integral of a PL function over its domain.

    An affine function integrates over a simplex to the vertex-value mean
    times the simplex volume; the volume form matches the domain's (the
    lattice-normalized form on lower-dimensional domains).
    """
    if f.domain.is_empty or f.domain.dim <= 0:
        return Fraction(0)
    k = f.domain.dim
    rows, consts = chart_affine(f.domain)
    total = Fraction(0)
    for cell, (g, c) in zip(f.cells, f.coeffs):
        if len(cell) != k + 1:
            continue
        ys = [_apply_affine(rows, consts, v) for v in cell]
        vol = _simplex_volume(ys)
        mean = sum(vdot(g, v) + c for v in cell) / (k + 1)
        total += vol * mean
    return total


def subgraph_body(delta: Polytope, phi: PLFunction, floor) -> Polytope:
    """{(x, t) : x in delta, floor <= t <= phi(x)} as a polytope.

    Requires ``phi`` concave so the region is convex (phi is the minimum
    of its cell functions).  Raises :class:`EmptyBody` if phi < floor
    everywhere.
    """
    if not phi.concave:
        raise ValueError("subgraph_body requires a concave PLFunction")
    b = Fraction(floor)
    if phi.max_value() < b:
        raise EmptyBody("function lies strictly below the floor")
    n = delta.ambient_dim
    hs = [((*map(Fraction, a), Fraction(0)), Fraction(off)) for a, off in delta.halfspaces]
    eqs = [((*map(Fraction, a), Fraction(0)), Fraction(off)) for a, off in delta.equations]
    tvec = tuple(Fraction(0) for _ in range(n)) + (Fraction(-1),)
    hs.append((tvec, -b))
    seen = set()
    for g, c in phi.coeffs:
        key = (tuple(g), c)
        if key in seen:
            continue
        seen.add(key)
        hs.append(((*(-Fraction(x) for x in g), Fraction(1)), Fraction(c)))
    body = from_halfspaces(hs, eqs, ambient_dim=n + 1)
    if body.is_empty:
        raise EmptyBody("empty subgraph")
    return body


# ---------------------------------------------------------------------------
# Fubini helpers


def fiber_envelopes(p: Polytope, axis: int):
    """Upper/lower PL envelopes of ``p`` along one coordinate.

    Returns (base, upper, lower): base is the projection of ``p`` with the
    axis deleted, and for y in base the fiber is
    {t : lower(y) <= t <= upper(y)}, so integrating upper - lower over the
    base recovers the volume by Fubini.
    """
    if p.is_empty:
        raise ValueError("empty polytope")
    keep = [i for i in range(p.ambient_dim) if i != axis]
    base = convex_hull([tuple(v[i] for i in keep) for v in p.vertices])
    samples_up = [(tuple(v[i] for i in keep), v[axis]) for v in p.vertices]
    upper = upper_concave_envelope(samples_up, base)
    samples_dn = [(pt, -t) for pt, t in samples_up]
    neg_lower = upper_concave_envelope(samples_dn, base)
    lower = PLFunction(
        domain=neg_lower.domain,
        cells=neg_lower.cells,
        coeffs=tuple(
            (tuple(-x for x in g), -c) for g, c in neg_lower.coeffs
        ),
        concave=False,
    )
    return base, upper, lower


def _poly_integral(coeffs, lo, hi):
    """Integral of sum(coeffs[i] t^i) over [lo, hi]."""
    total = Fraction(0)
    for i, c in enumerate(coeffs):
        total += c * (Fraction(hi) ** (i + 1) - Fraction(lo) ** (i + 1)) / (i + 1)
    return total


def _interp_coeffs(xs, ys):
    """Coefficients of the interpolating polynomial through (xs, ys)."""
    n = len(xs)
    a = [[Fraction(x) ** j for j in range(n)] for x in xs]
    return list(solve_square(a, ys))


def slice_volume_integral(p: Polytope, axis: int, weight_coeffs=(1,)) -> Fraction:
    """Exact integral over t of w(t) * vol(slice of p at x_axis = t).

    Requires ``p`` full-dimensional.  The slice volume is a polynomial of
    degree <= dim-1 between consecutive vertex heights, so each chamber is
    integrated via exact polynomial interpolation at interior rational
    nodes.  ``weight_coeffs`` are the coefficients of the polynomial
    weight w, constant term first.
    """
    if p.is_empty or p.dim < 1:
        return Fraction(0)
    heights = sorted({Fraction(v[axis]) for v in p.vertices})
    if len(heights) == 1:
        return Fraction(0)
    degree = (p.dim - 1) + (len(weight_coeffs) - 1)
    total = Fraction(0)
    for lo, hi in zip(heights, heights[1:]):
        nodes = [
            lo + (hi - lo) * Fraction(i + 1, degree + 2)
            for i in range(degree + 1)
        ]
        vols = []
        for t in nodes:
            sl = slice_polytope(p, {axis: t})
            vols.append(sl.volume("euclidean") if not sl.is_empty else Fraction(0))
        coeffs = _interp_coeffs(nodes, vols)
        prod = [Fraction(0)] * (len(coeffs) + len(weight_coeffs) - 1)
        for i, c in enumerate(coeffs):
            for j, w in enumerate(weight_coeffs):
                prod[i + j] += c * Fraction(w)
        total += _poly_integral(prod, lo, hi)
    return total
