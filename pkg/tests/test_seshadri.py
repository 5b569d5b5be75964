from fractions import Fraction

import pytest

from okounkov.errors import BTooSmall, NotAmple, NotFixedPoint
from okounkov.geometry import convex_hull
from okounkov.seshadri import (
    P2,
    P1xP1,
    SeshadriProblem,
    blowup,
    blowup_body,
    bundle_model,
    hirzebruch,
    iota,
    p1xp1_class,
    p2_bundle_class,
    rationality_verdict,
    restricted_volume_profile,
    subgraph_equals_body_check,
    thresholds,
)

F = Fraction


def p2_problem(d=1):
    return SeshadriProblem(P2(), p2_bundle_class(d), (0, 1))


def p1xp1_problem(a=1, b=1):
    return SeshadriProblem(P1xP1(), p1xp1_class(a, b), (0, 1))


def test_smoothness_and_ampleness():
    assert P2().is_smooth()
    assert P1xP1().is_smooth()
    assert hirzebruch(1).is_smooth()
    assert P2().is_ample(p2_bundle_class(1))
    assert not P2().is_ample((0, 0, 0))


def test_blowup_p2_gives_f1():
    blown, e, pull = blowup(P2(), (0, 1))
    assert blown.rays == ((1, 0), (1, 1), (0, 1), (-1, -1))
    assert blown.is_smooth()
    assert pull(p2_bundle_class(1)) == (0, 0, 0, 1)
    assert e == 1


def test_blowup_p1xp1():
    blown, e, pull = blowup(P1xP1(), (0, 1))
    assert blown.rays == ((1, 0), (1, 1), (0, 1), (-1, 0), (0, -1))
    assert blown.is_smooth()


def test_blowup_twice_same_cone_fails():
    blown, e, _ = blowup(P2(), (0, 1))
    with pytest.raises(NotFixedPoint):
        blowup(blown, (0, 2))  # the old pair is no longer a cone


def test_not_ample_rejected():
    with pytest.raises(NotAmple):
        SeshadriProblem(P2(), (0, 0, 0), (0, 1))


def test_thresholds_p2():
    eps, mu = thresholds(p2_problem())
    assert eps == 1 and mu == 1


def test_thresholds_p2_scaling():
    for d in (1, 2, 3):
        eps, mu = thresholds(p2_problem(d))
        assert eps == d and mu == d


def test_thresholds_p1xp1_balanced():
    eps, mu = thresholds(p1xp1_problem(1, 1))
    assert eps == 1 and mu == 2


def test_thresholds_p1xp1_unbalanced():
    # exact toric LP: eps = min(a,b), mu = a + b
    eps, mu = thresholds(p1xp1_problem(1, 2))
    assert eps == 1
    assert mu == 3


def test_blowup_body_p2():
    sb, series = blowup_body(p2_problem(), max_degree=5)
    assert sb.exact
    assert sorted(sb.body.vertices) == [
        (F(0), F(0)),
        (F(1), F(0)),
        (F(1), F(1)),
    ]


def test_profile_p2():
    prof = restricted_volume_profile(p2_problem(), max_degree=5)
    for t in (0, F(1, 3), F(2, 3), 1):
        assert prof.value((t,)) == t


def test_profile_ample_range_law():
    # profile(t) = t exactly on [0, eps]
    prob = p1xp1_problem(1, 1)
    eps, mu = thresholds(prob)
    prof = restricted_volume_profile(prob, max_degree=6)
    for k in range(5):
        t = eps * F(k, 4)
        assert prof.value((t,)) == t
    # beyond eps the profile drops below t
    mid = (eps + mu) / 2
    assert prof.value((mid,)) < mid


def test_iota_p2():
    rep = iota(p2_problem(), max_degree=5)
    assert rep["iota"] == F(1, 3)
    assert rep["bound_attained"]
    assert rep["factorial_variant_consistent"] is False  # 1/3 != 1/6


def test_iota_scaling():
    for d in (1, 2, 3):
        rep = iota(p2_problem(d), max_degree=5)
        assert rep["iota"] == F(d, 3)


def test_iota_p1xp1():
    # profile: t on [0,1], 2 - t on [1,2]; vol = 2
    # integral of t*profile = 1/3 + (integral_1^2 t(2-t)) = 1/3 + 2/3 = 1
    rep = iota(p1xp1_problem(1, 1), max_degree=6)
    assert rep["iota"] == F(1, 2)
    assert not rep["bound_attained"]  # eps < mu here


def test_bundle_model_smooth_and_classes():
    model = bundle_model(p2_problem(), 2)
    assert model.is_smooth()
    assert len(model.rays) == 4 + 2
    rep = model.linear_equivalence_check()
    assert rep["x2_x1_e_principal"]
    assert rep["lhat_reps_equivalent"]


def test_bundle_model_b_too_small():
    with pytest.raises(BTooSmall):
        bundle_model(p2_problem(), 1)


def test_bundle_model_product_case():
    # no-blow-up analogue: P(O + O) over the surface is surface x P^1;
    # realized by a problem whose exceptional coefficient plays no role is
    # out of scope here, but the fan with D = 0 heights is the product:
    prob = p2_problem()
    model = bundle_model(prob, 2)
    # rays over non-E rays have height 0 (product directions)
    for k, u in enumerate(model.problem.blown.rays):
        if k != prob.e_index:
            assert model.rays[k][2] == 0


def test_section_polytope_degree1():
    model = bundle_model(p2_problem(), 2)
    p = model.section_polytope(1)
    # fibers over the simplex: lambda from 0 to min(b, ord capacity)
    assert p.contains((0, 0, 0))
    assert not p.contains((0, 0, -1))
    # lambda <= ord_E level = m1 + m2 (chart): at m = (1,0): lambda <= 1
    assert p.contains((1, 0, 1))
    assert not p.contains((1, 0, 2))


def test_subgraph_equals_body_p2():
    rep = subgraph_equals_body_check(p2_problem(), 2, max_degree=8)
    assert rep["bodies_equal"]
    assert rep["counts_equal"]
    assert rep["volume"] == F(1, 3)
    assert rep["volume_equals_transform_integral"]
    expected = convex_hull(
        [
            (0, 0, 0),
            (0, 1, 0),
            (0, 1, 1),
            (1, 1, 0),
            (1, 1, 1),
        ]
    )
    assert rep["threefold_body"] == expected


def test_subgraph_equals_body_p1xp1():
    rep = subgraph_equals_body_check(p1xp1_problem(1, 1), 3, max_degree=8)
    assert rep["bodies_equal"]
    assert rep["counts_equal"]
    assert rep["volume"] == rep["transform_integral"]


def test_birational_invariance_of_integral():
    # the transform integral computed from either adjacent flag agrees
    from okounkov.geometry import slice_volume_integral

    prob = p1xp1_problem(1, 2)
    sb_after, _ = blowup_body(prob, max_degree=6, side="after")
    sb_before, _ = blowup_body(prob, max_degree=6, side="before")
    i1 = slice_volume_integral(sb_after.body, 0, weight_coeffs=(0, 1))
    i2 = slice_volume_integral(sb_before.body, 0, weight_coeffs=(0, 1))
    assert i1 == i2


def test_rationality_verdict_p2():
    rep = rationality_verdict(p2_problem(), max_degree=5)
    assert rep["eps"] == 1 and rep["mu"] == 1
    assert not rep["eps_lt_mu"]
    assert rep["iota_consistency"] and rep["bound_attained"]
    assert rep["factorial_variant_matches"] is False
    assert rep["window_corollary"] == (1, 2)
    assert rep["window_integers"] == []
    assert rep["eps_rational"]


def test_rationality_verdict_eps_lt_mu():
    rep = rationality_verdict(p1xp1_problem(1, 2), max_degree=6)
    assert rep["eps_lt_mu"]
    assert rep["verdict"].startswith("rational via KLM")


def test_eps_le_mu_always():
    instances = [
        p2_problem(1),
        p2_problem(3),
        p1xp1_problem(1, 1),
        p1xp1_problem(2, 3),
        SeshadriProblem(hirzebruch(1), (0, 0, 1, 1), (0, 1)),
    ]
    for prob in instances:
        eps, mu = thresholds(prob)
        assert 0 < eps <= mu
