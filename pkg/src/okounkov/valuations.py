"""Discrete valuations of maximal rational rank on Laurent polynomials.

A monomial valuation assigns to each variable a weight vector in Z^r and
evaluates a polynomial to the lex-minimum of the weighted exponents over
its support.  Flag valuations are the iterated divide-and-restrict order
of vanishing along a coordinate flag; in the adapted chart they coincide
with the unit-weight monomial valuation, and the library keeps both
routes as mutual cross-checks.  Composite valuations evaluate a partial
flag first and a quotient valuation on the residual coordinates.

Value semigroups of graded series are built by evaluating a per-degree
monomial (or triangularized) basis; distinct basis elements must receive
distinct values, which Gaussian elimination in the value order restores
whenever a supplied basis is not adapted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CenterInSupport, ValueCollision, ZeroPolynomial
from .lattices import IntegerMatrix, det, is_lex_positive, vadd
from .semigroups import GradedSemigroup


@dataclass(frozen=True)
class LaurentPoly:
    """Laurent polynomial with rational coefficients, sparse support."""

    n: int
    terms: tuple  # sorted tuple of (exponent tuple, nonzero Fraction)

    @classmethod
    def from_dict(cls, n: int, coeffs: dict) -> "LaurentPoly":
        terms = tuple(
            sorted(
                (tuple(int(e) for e in alpha), Fraction(c))
                for alpha, c in coeffs.items()
                if Fraction(c) != 0
            )
        )
        return cls(n=n, terms=terms)

    @classmethod
    def monomial(cls, alpha, coeff=1) -> "LaurentPoly":
        return cls.from_dict(len(alpha), {tuple(alpha): coeff})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def support(self):
        return [alpha for alpha, _ in self.terms]

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        coeffs = dict(self.terms)
        for alpha, c in other.terms:
            coeffs[alpha] = coeffs.get(alpha, Fraction(0)) + c
        return LaurentPoly.from_dict(self.n, coeffs)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly.from_dict(
            self.n, {alpha: Fraction(c) * v for alpha, v in self.terms}
        )

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        coeffs: dict = {}
        for a, ca in self.terms:
            for b, cb in other.terms:
                key = vadd(a, b)
                coeffs[key] = coeffs.get(key, Fraction(0)) + ca * cb
        return LaurentPoly.from_dict(self.n, coeffs)


class MonomialValuation:
    """v(sum a_alpha x^alpha) = lex-min over the support of alpha . weights.

    ``weights`` has one integer vector per variable (the value of that
    variable); the matrix must be invertible so distinct monomials get
    distinct values, which is what makes the rational rank maximal.
    """

    def __init__(self, weights: Sequence[Sequence[int]]):
        self.weights = tuple(tuple(int(x) for x in w) for w in weights)
        self.n = len(self.weights)
        self.rank = len(self.weights[0]) if self.weights else 0
        if any(len(w) != self.rank for w in self.weights):
            raise ValueError("ragged weight matrix")
        for w in self.weights:
            if not is_lex_positive(w):
                raise ValueError(f"weight {w} is not lex-positive")
        if self.rank != self.n or det(IntegerMatrix(self.weights)) == 0:
            raise ValueError(
                "weight matrix must be square and invertible "
                "(maximal rational rank)"
            )

    def value_of_exponent(self, alpha) -> tuple:
        out = [0] * self.rank
        for a, w in zip(alpha, self.weights):
            for i, wi in enumerate(w):
                out[i] += a * wi
        return tuple(out)

    def evaluate(self, f: LaurentPoly) -> tuple:
        if f.is_zero:
            raise ZeroPolynomial("valuation of the zero polynomial")
        return min(self.value_of_exponent(alpha) for alpha in f.support)

    def leading_part(self, f: LaurentPoly):
        """(value, monomial exponent, coefficient) of the lex-min term."""
        if f.is_zero:
            raise ZeroPolynomial("valuation of the zero polynomial")
        best = None
        for alpha, c in f.terms:
            v = self.value_of_exponent(alpha)
            if best is None or v < best[0]:
                best = (v, alpha, c)
            elif v == best[0]:
                raise ValueCollision(
                    f"two monomials share the value {v}; the weight matrix "
                    "is not injective on this support"
                )
        return best


def flag_valuation(n: int) -> MonomialValuation:
    """Unit-weight lex flag in the coordinate chart (Y_i = {x_1=...=x_i=0})."""
    return MonomialValuation(
        [[int(i == j) for j in range(n)] for i in range(n)]
    )


@dataclass(frozen=True)
class FlagSpec:
    """Coordinate flag given by the order in which variables vanish."""

    order: tuple  # permutation of range(n): order[i] = variable cut at step i

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("flag order must be a permutation of the variables")


def flag_evaluate(flag: FlagSpec, f: LaurentPoly) -> tuple:
    """Iterated divide-and-restrict along the flag.

    Step i takes the order of vanishing in the flag variable, divides by
    that power and restricts to the subvariety before continuing; the
    result equals the unit-weight monomial valuation in the permuted
    chart (property-tested).
    """
    if f.is_zero:
        raise ZeroPolynomial("valuation of the zero polynomial")
    values = []
    current = {alpha: c for alpha, c in f.terms}
    remaining = list(flag.order)
    while remaining:
        var = remaining[0]
        v = min(alpha[var] for alpha in current)
        values.append(v)
        # divide by x_var^v and restrict to x_var = 0
        current = {
            alpha: c for alpha, c in current.items() if alpha[var] == v
        }
        remaining = remaining[1:]
    return tuple(values)


class CompositeValuation:
    """Partial coordinate flag followed by a quotient valuation.

    The first ``r`` steps vanish along the flag variables; the rest of
    the exponent is evaluated by the quotient valuation.  Values live in
    Z^r x Z^{n-r} ordered lexicographically by blocks.
    """

    def __init__(self, flag_vars: Sequence[int], quotient: MonomialValuation):
        self.flag_vars = tuple(int(i) for i in flag_vars)
        self.quotient = quotient
        self.n = len(self.flag_vars) + quotient.n
        self.rank = len(self.flag_vars) + quotient.rank
        rest = [i for i in range(self.n) if i not in self.flag_vars]
        self.rest_vars = tuple(rest)

    def value_of_exponent(self, alpha) -> tuple:
        head = tuple(alpha[i] for i in self.flag_vars)
        tail = self.quotient.value_of_exponent(
            [alpha[i] for i in self.rest_vars]
        )
        return head + tail

    def evaluate(self, f: LaurentPoly) -> tuple:
        if f.is_zero:
            raise ZeroPolynomial("valuation of the zero polynomial")
        return min(self.value_of_exponent(alpha) for alpha in f.support)

    def leading_part(self, f: LaurentPoly):
        return MonomialValuation.leading_part(self, f)  # same algorithm


def section_value(
    v,
    section: LaurentPoly,
    check_center: bool = True,
    polytope=None,
) -> tuple:
    """Value of a section under the Def-NOb-II normalization.

    ``polytope`` is the divisor representative (the section polytope in
    the chart); center avoidance holds exactly when every monomial of the
    representative has componentwise nonnegative exponent region, i.e.
    the polytope lies in the nonnegative orthant and touches it.  With
    ``check_center`` the value is guaranteed nonnegative; without it the
    raw (possibly negative) value is returned, which is the un-normalized
    Cartier representative semantics.
    """
    if check_center and polytope is not None:
        for vert in polytope.vertices:
            if any(x < 0 for x in vert):
                raise CenterInSupport(
                    f"representative polytope vertex {vert} has a negative "
                    "coordinate: the valuation center lies in the support"
                )
    return v.evaluate(section)


def triangularize(basis: Sequence[LaurentPoly], v) -> list[LaurentPoly]:
    """Gaussian elimination in the value order.

    Returns a basis of the same span whose members have pairwise distinct
    values; raises :class:`ValueCollision` if elimination stalls (which
    signals a linearly dependent input).
    """
    out: dict[tuple, LaurentPoly] = {}
    queue = [f for f in basis if not f.is_zero]
    guard = 0
    limit = 4 * sum(len(f.terms) for f in queue) + 16 * len(queue) + 64
    while queue:
        guard += 1
        if guard > limit:
            raise ValueCollision("triangularization did not terminate")
        f = queue.pop(0)
        if f.is_zero:
            continue
        val, alpha, coeff = v.leading_part(f)
        if val not in out:
            out[val] = f
            continue
        g = out[val]
        _, beta, gcoeff = v.leading_part(g)
        if alpha != beta:
            raise ValueCollision(
                f"distinct leading monomials {alpha}, {beta} share the "
                f"value {val}"
            )
        queue.append(f - g.scale(coeff / gcoeff))
    return [out[val] for val in sorted(out)]


def value_semigroup(
    series,
    v,
    name: str = "",
) -> GradedSemigroup:
    """Value semigroup {(d, v(s)) : s in a basis of R_d} as an oracle.

    ``series`` provides per-degree bases via ``sections(d)`` (lists of
    LaurentPoly).  Monomial bases under an injective-weight valuation give
    distinct values directly; other bases are triangularized first, so
    the degree-d layer always has exactly dim R_d values.
    """

    def enumerator(d):
        basis = series.sections(d)
        if not basis:
            return []
        if all(len(f.terms) == 1 for f in basis):
            values = sorted(v.evaluate(f) for f in basis)
            if len(set(values)) != len(values):
                raise ValueCollision(
                    f"monomial basis at degree {d} has colliding values"
                )
        else:
            values = sorted(v.evaluate(f) for f in triangularize(basis, v))
        return [tuple(Fraction(x) for x in val) for val in values]

    rank = getattr(v, "rank", None)
    return GradedSemigroup.from_enumerator(rank, enumerator, name=name)
