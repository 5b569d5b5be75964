import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from okounkov.errors import ValueCollision, ZeroPolynomial
from okounkov.valuations import (
    CompositeValuation,
    FlagSpec,
    LaurentPoly,
    MonomialValuation,
    flag_evaluate,
    flag_valuation,
    section_value,
    triangularize,
    value_semigroup,
)

F = Fraction


def poly(n, coeffs):
    return LaurentPoly.from_dict(n, coeffs)


def test_evaluate_lex_min():
    v = flag_valuation(2)
    f = poly(2, {(2, 1): 1, (3, 0): 1})  # x^2 y + x^3
    assert v.evaluate(f) == (2, 1)


def test_evaluate_constant():
    v = flag_valuation(2)
    assert v.evaluate(poly(2, {(0, 0): 5})) == (0, 0)


def test_evaluate_weighted_single_monomial():
    v = MonomialValuation([(1, 0), (1, 3)])
    assert v.evaluate(poly(2, {(1, 1): 1})) == (2, 3)


def test_evaluate_zero_raises():
    with pytest.raises(ZeroPolynomial):
        flag_valuation(1).evaluate(poly(1, {}))


def test_flag_evaluate_divide_restrict():
    # f = x1^2 x2 + x1^3: v1 = 2, f1 = (x2 + x1)|_{x1=0} = x2, v2 = 1
    f = poly(2, {(2, 1): 1, (3, 0): 1})
    assert flag_evaluate(FlagSpec((0, 1)), f) == (2, 1)


def test_flag_evaluate_unit():
    assert flag_evaluate(FlagSpec((0, 1)), poly(2, {(0, 0): 1})) == (0, 0)


def test_flag_evaluate_second_example():
    # f = x2 + x1 x2^2: v1 = 0, restrict to x1=0 leaves x2, v2 = 1
    f = poly(2, {(0, 1): 1, (1, 2): 1})
    assert flag_evaluate(FlagSpec((0, 1)), f) == (0, 1)


@st.composite
def laurent_polys(draw, n=2):
    support = draw(
        st.lists(
            st.tuples(*(st.integers(0, 5) for _ in range(n))),
            min_size=1,
            max_size=6,
            unique=True,
        )
    )
    coeffs = draw(
        st.lists(
            st.integers(-5, 5).filter(bool), min_size=len(support), max_size=len(support)
        )
    )
    return LaurentPoly.from_dict(n, dict(zip(support, coeffs)))


@given(laurent_polys(), laurent_polys())
@settings(max_examples=200, deadline=None)
def test_valuation_axioms(f, g):
    v = MonomialValuation([(1, 0), (1, 1)])
    # multiplicativity is exact
    assert v.evaluate(f * g) == tuple(
        a + b for a, b in zip(v.evaluate(f), v.evaluate(g))
    )
    s = f + g
    if not s.is_zero:
        lo = min(v.evaluate(f), v.evaluate(g))
        assert v.evaluate(s) >= lo
        if v.evaluate(f) != v.evaluate(g):
            assert v.evaluate(s) == lo


@given(laurent_polys())
@settings(max_examples=200, deadline=None)
def test_flag_matches_unit_weights(f):
    assert flag_evaluate(FlagSpec((0, 1)), f) == flag_valuation(2).evaluate(f)


def test_composite_valuation():
    # partial flag on x1, quotient valuation on x2: values in Z x Z
    v = CompositeValuation([0], flag_valuation(1))
    f = poly(2, {(2, 1): 1, (3, 0): 1})
    assert v.evaluate(f) == (2, 1)
    assert v.rank == 2


def test_composite_block_order():
    v = CompositeValuation([1], flag_valuation(1))
    # first block is x2's exponent
    f = poly(2, {(5, 1): 1, (0, 2): 1})
    assert v.evaluate(f) == (1, 5)


def test_section_value_p1():
    from okounkov.geometry import convex_hull

    v = flag_valuation(1)
    p = convex_hull([(0,), (1,)])
    assert section_value(v, poly(1, {(0,): 1}), polytope=p) == (0,)
    assert section_value(v, poly(1, {(1,): 1}), polytope=p) == (1,)


def test_section_value_center_in_support():
    from okounkov.errors import CenterInSupport
    from okounkov.geometry import convex_hull

    v = flag_valuation(1)
    p = convex_hull([(-2,), (-1,)])
    with pytest.raises(CenterInSupport):
        section_value(v, poly(1, {(-2,): 1}), polytope=p)
    # un-normalized semantics: raw value allowed
    assert section_value(v, poly(1, {(-2,): 1}), check_center=False) == (-2,)


def test_triangularize_collision():
    v = flag_valuation(2)
    f1 = poly(2, {(0, 0): 1, (1, 0): 1})
    f2 = poly(2, {(0, 0): 2, (0, 1): 1})
    tri = triangularize([f1, f2], v)
    vals = sorted(v.evaluate(f) for f in tri)
    assert vals == [(0, 0), (0, 1)]


def test_triangularize_dependent_reduces():
    # linearly dependent input: elimination drops the redundancy
    v = flag_valuation(1)
    f = poly(1, {(0,): 1, (1,): 1})
    tri = triangularize([f, f.scale(2)], v)
    assert len(tri) == 1


def test_value_semigroup_monomial_collision_raises():
    class DuplicateSeries:
        def sections(self, d):
            return [
                LaurentPoly.from_dict(1, {(0,): 1}),
                LaurentPoly.from_dict(1, {(0,): 2}),
            ]

    s = value_semigroup(DuplicateSeries(), flag_valuation(1))
    with pytest.raises(ValueCollision):
        s.layer(1)


def test_value_semigroup_p2():
    class SimplexSeries:
        def sections(self, d):
            return [
                LaurentPoly.monomial((a, b))
                for a in range(d + 1)
                for b in range(d + 1 - a)
            ]

    s = value_semigroup(SimplexSeries(), flag_valuation(2))
    assert s.hilbert(3) == [1, 3, 6, 10]
    body, flags = s.okounkov_body("truncated", 4)
    assert sorted(body.vertices) == [
        (F(0), F(0)),
        (F(0), F(1)),
        (F(1), F(0)),
    ]


def test_value_semigroup_hilbert_equals_dimension():
    rng = random.Random(2)

    class RandomSeries:
        def sections(self, d):
            # monomials of an interval series
            return [LaurentPoly.monomial((k,)) for k in range(2 * d + 1)]

    s = value_semigroup(RandomSeries(), flag_valuation(1))
    for d in range(5):
        assert s.hilbert(d)[d] == 2 * d + 1


def test_value_semigroup_zero_series():
    class ZeroSeries:
        def sections(self, d):
            return [] if d > 0 else [LaurentPoly.monomial(())]

    s = value_semigroup(ZeroSeries(), flag_valuation(0))
    assert s.hilbert(3) == [1, 0, 0, 0]
