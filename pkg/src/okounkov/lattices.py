"""Exact integer-lattice algebra and lexicographically ordered groups.

Everything here is arbitrary-precision integer / rational arithmetic.
Ordered value groups are realized as Z^r with the lexicographic order,
which in Python is exactly the native ordering of integer tuples, so a
``LexVec`` is a plain tuple of ints and callers may compare with ``<``.

The Hermite normal form follows the row convention: ``H = U @ A`` with
``U`` unimodular, pivots positive and placed on strictly increasing
columns, and every entry above a pivot reduced into ``[0, pivot)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from .errors import NotFullRank

LexVec = tuple  # tuple[int, ...] compared lexicographically by Python


def vadd(a: Sequence, b: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(a, b, strict=True))


def vsub(a: Sequence, b: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(a, b, strict=True))


def vscale(c, a: Sequence) -> tuple:
    return tuple(c * x for x in a)


def vdot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b, strict=True))


def is_lex_positive(v: Sequence) -> bool:
    for x in v:
        if x:
            return x > 0
    return False


@dataclass(frozen=True)
class IntegerMatrix:
    """Immutable integer matrix; rows are tuples of Python ints."""

    entries: tuple

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def row(self, i) -> tuple:
        return self.entries[i]

    def __matmul__(self, other: "IntegerMatrix") -> "IntegerMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries)) if other.entries else []
        return IntegerMatrix(
            tuple(tuple(vdot(r, c) for c in cols) for r in self.entries)
        )

    def transpose(self) -> "IntegerMatrix":
        return IntegerMatrix(tuple(zip(*self.entries)) if self.entries else ())


def identity_matrix(n: int) -> IntegerMatrix:
    return IntegerMatrix(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def det(m: IntegerMatrix) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = m.rows
    if n != m.cols:
        raise ValueError("determinant of non-square matrix")
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
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


def hnf(a: IntegerMatrix) -> tuple[IntegerMatrix, IntegerMatrix]:
    """Row Hermite normal form.

    Returns ``(H, U)`` with ``H = U @ A``, ``U`` unimodular.  Zero rows of
    ``H`` are collected at the bottom; nonzero rows have positive pivots on
    strictly increasing columns with entries above each pivot reduced.
    """
    rows = [list(r) for r in a.entries]
    m = len(rows)
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    n = a.cols
    piv_row = 0
    pivots = []
    for col in range(n):
        # find a row at or below piv_row with a nonzero entry in col
        nz = [i for i in range(piv_row, m) if rows[i][col]]
        if not nz:
            continue
        # gcd-reduce all entries in this column into one row
        i0 = nz[0]
        rows[piv_row], rows[i0] = rows[i0], rows[piv_row]
        u[piv_row], u[i0] = u[i0], u[piv_row]
        for i in range(piv_row + 1, m):
            while rows[i][col]:
                q = rows[piv_row][col] // rows[i][col]
                rows[piv_row] = [x - q * y for x, y in zip(rows[piv_row], rows[i])]
                u[piv_row] = [x - q * y for x, y in zip(u[piv_row], u[i])]
                rows[piv_row], rows[i] = rows[i], rows[piv_row]
                u[piv_row], u[i] = u[i], u[piv_row]
        if rows[piv_row][col] < 0:
            rows[piv_row] = [-x for x in rows[piv_row]]
            u[piv_row] = [-x for x in u[piv_row]]
        p = rows[piv_row][col]
        for i in range(piv_row):
            q = rows[i][col] // p
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[piv_row])]
                u[i] = [x - q * y for x, y in zip(u[i], u[piv_row])]
        pivots.append(col)
        piv_row += 1
        if piv_row == m:
            break
    return IntegerMatrix(tuple(map(tuple, rows))), IntegerMatrix(tuple(map(tuple, u)))


def lattice_rank(vectors: Iterable[Sequence[int]]) -> int:
    vecs = tuple(tuple(v) for v in vectors)
    if not vecs:
        return 0
    h, _ = hnf(IntegerMatrix(vecs))
    return sum(1 for r in h.entries if any(r))


def lattice_basis(vectors: Iterable[Sequence[int]]) -> list[tuple]:
    """Z-basis (HNF rows) of the lattice generated by integer vectors."""
    vecs = tuple(tuple(v) for v in vectors)
    if not vecs:
        return []
    h, _ = hnf(IntegerMatrix(vecs))
    return [r for r in h.entries if any(r)]


def in_lattice(point: Sequence[int], basis: Sequence[Sequence[int]]) -> bool:
    """Exact membership of an integer point in the span of an HNF basis."""
    p = list(point)
    for row in basis:
        col = next(j for j, x in enumerate(row) if x)
        if p[col] % row[col]:
            return False
        q = p[col] // row[col]
        p = [x - q * y for x, y in zip(p, row)]
    return not any(p)


def saturation_basis(directions: Sequence[Sequence], dim: int) -> list[tuple]:
    """Z-basis of (Q-span of ``directions``) intersected with Z^dim.

    The directions may be rational; the result is a basis of the saturated
    lattice, suitable as lattice-normalized coordinates on the subspace.
    """
    if not directions:
        return []
    _, rows = clear_denominators(directions)
    prim = lattice_basis(rows)
    if not prim:
        return []
    return complete_to_unimodular(prim, dim)[: len(prim)]


def complete_to_unimodular(rows: Sequence[Sequence[int]], dim: int) -> list[tuple]:
    """Extend independent integer rows to a basis of Z^dim.

    The first ``len(rows)`` output rows generate the saturation of the
    input lattice (same Q-span, primitive), the rest complete them to a
    unimodular basis.  Uses the column HNF ``A @ V = (L | 0)``: the
    saturation is spanned by the first rows of ``V^{-1}``.
    """
    k = len(rows)
    if k == 0:
        return [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    a = IntegerMatrix(tuple(tuple(r) for r in rows))
    _, u = hnf(a.transpose())
    v = u.transpose()
    vinv = unimodular_inverse(v)
    return [tuple(r) for r in vinv.entries]


def unimodular_inverse(m: IntegerMatrix) -> IntegerMatrix:
    """Inverse of a unimodular integer matrix, exact."""
    n = m.rows
    d = det(m)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    inv = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [
                [m.entries[r][c] for c in range(n) if c != i]
                for r in range(n)
                if r != j
            ]
            cof = det(IntegerMatrix(tuple(map(tuple, minor)))) if n > 1 else 1
            row.append((-1) ** (i + j) * cof * d)
        inv.append(tuple(row))
    return IntegerMatrix(tuple(inv))


def clear_denominators(points) -> tuple[int, list[tuple]]:
    """Common denominator M and integer rows M*p for rational rows p."""
    pts = [tuple(Fraction(x) for x in p) for p in points]
    den = 1
    for p in pts:
        for x in p:
            den = lcm(den, x.denominator)
    return den, [tuple(int(x * den) for x in p) for p in pts]


def lattice_determinant_in_hyperplane(gens, degree: int = 1) -> Fraction:
    """Covolume of <gens>_Z in the degree-``degree`` hyperplane.

    ``gens`` are (degree, payload) points of Z x Q^n.  The result is the
    determinant of the degree-0 difference lattice with respect to the
    Euclidean form on the payload coordinates; it is the normalization
    constant of the Hilbert-growth law.  Raises :class:`NotFullRank` if
    the difference lattice does not span the payload space.
    """
    rows = []
    for g in gens:
        d, payload = _split_point(g)
        rows.append((d, *payload))
    n = len(rows[0]) - 1
    if n == 0:
        degs = [r[0] for r in rows]
        g = 0
        for x in degs:
            g = gcd(g, x)
        if g == 0 or degree % g:
            raise NotFullRank("no lattice points at the requested degree")
        return Fraction(1)
    den, int_rows = clear_denominators([r[1:] for r in rows])
    scaled = [(rows[i][0], *int_rows[i]) for i in range(len(rows))]
    # in HNF with the degree as first column, exactly one basis row carries
    # the degree pivot; the remaining rows are a basis of the degree-0 part
    basis = lattice_basis(scaled)
    deg_rows = [b for b in basis if b[0] != 0]
    if not deg_rows:
        raise NotFullRank("no lattice points at the requested degree")
    if degree % deg_rows[0][0]:
        raise NotFullRank("no lattice points at the requested degree")
    basis0 = [b[1:] for b in basis if b[0] == 0]
    if len(basis0) < n:
        raise NotFullRank(
            f"degree-0 difference lattice has rank {len(basis0)} < {n}"
        )
    m = IntegerMatrix(tuple(basis0))
    return Fraction(abs(det(m)), den**n)


def _split_point(g):
    """Accept (degree, payload-tuple) or a flat (degree, *payload) tuple."""
    if len(g) == 2 and isinstance(g[1], (tuple, list)):
        return int(g[0]), tuple(Fraction(x) for x in g[1])
    return int(g[0]), tuple(Fraction(x) for x in g[1:])
