"""Seshadri-constant pipeline on toric surfaces.

Everything runs on complete smooth toric surfaces where nefness and
effectivity are finitely many exact linear conditions: the nef threshold
eps of pi*L - tE is a one-variable rational LP over the fan, the
pseudo-effective threshold mu is the top of an exact 3D vertex
enumeration, the restricted-volume profile is the slice-length function
of the blow-up body for a flag through E, and the P^1-bundle
X^ = P(O + O(E)) over the blow-up is realized as an explicit smooth
toric threefold whose section polytopes drive the body computation on
the higher-dimensional side.

Ray heights follow the convention rays(X^) = {(u_rho, -[rho = E])} with
two bundle rays +-e_3; then X_2 = D_+ satisfies X_2 ~ X_1 + pi*E and
L^ = b xi + pi*(eta*L - bE) has the section decomposition
H^0(d L^) = sum over 0 <= lambda <= db of H^0(d eta*L - lambda E).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BTooSmall, NotAmple, NotFixedPoint
from .filtrations import (
    OrdDivisorFiltration,
    ReesSemigroupSpec,
    filtered_body,
)
from .geometry import (
    PLFunction,
    Polytope,
    convex_hull,
    from_halfspaces,
    slice_volume_integral,
    upper_concave_envelope,
)
from .lattices import vdot
from .series import LatticeSeries, series_body
from .valuations import flag_valuation

F = Fraction


@dataclass(frozen=True)
class ToricSurface:
    """Complete smooth toric surface: counterclockwise primitive rays."""

    rays: tuple
    name: str = ""

    def __post_init__(self):
        object.__setattr__(
            self, "rays", tuple(tuple(int(x) for x in u) for u in self.rays)
        )

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def cones(self):
        n = self.n_rays
        return [(i, (i + 1) % n) for i in range(n)]

    def cone_det(self, cone) -> int:
        u, v = self.rays[cone[0]], self.rays[cone[1]]
        return u[0] * v[1] - u[1] * v[0]

    def is_smooth(self) -> bool:
        return all(abs(self.cone_det(c)) == 1 for c in self.cones())

    def polytope_of(self, coeffs) -> Polytope:
        hs = [
            (tuple(-x for x in u), Fraction(a))
            for u, a in zip(self.rays, coeffs)
        ]
        return from_halfspaces(hs, ambient_dim=2)

    def cone_vertex(self, cone, coeffs):
        """Vertex of the divisor polytope where the cone's constraints bind."""
        from .geometry import solve_square

        i, j = cone
        sol = solve_square(
            [self.rays[i], self.rays[j]],
            [-Fraction(coeffs[i]), -Fraction(coeffs[j])],
        )
        return sol

    def is_nef(self, coeffs) -> bool:
        return self._positivity(coeffs, strict=False)

    def is_ample(self, coeffs) -> bool:
        return self._positivity(coeffs, strict=True)

    def _positivity(self, coeffs, strict: bool) -> bool:
        for cone in self.cones():
            m = self.cone_vertex(cone, coeffs)
            if m is None:
                return False
            for k, u in enumerate(self.rays):
                if k in cone:
                    continue
                slack = vdot(m, u) + Fraction(coeffs[k])
                if slack < 0 or (strict and slack == 0):
                    return False
        return True

    def canonical_coeffs(self):
        """K_X = -sum of the toric divisors."""
        return tuple(-1 for _ in self.rays)


def P2() -> ToricSurface:
    return ToricSurface(((1, 0), (0, 1), (-1, -1)), name="P2")


def P1xP1() -> ToricSurface:
    return ToricSurface(((1, 0), (0, 1), (-1, 0), (0, -1)), name="P1xP1")


def hirzebruch(a: int) -> ToricSurface:
    return ToricSurface(((1, 0), (0, 1), (-1, a), (0, -1)), name=f"F{a}")


def p2_bundle_class(d: int):
    """Coefficients of O(d) on P2: polytope = d * unit simplex."""
    return (0, 0, d)


def p1xp1_class(a: int, b: int):
    """Coefficients of O(a, b) on P1xP1: polytope = [0,a] x [0,b]."""
    return (0, 0, a, b)


def blowup(surface: ToricSurface, cone) -> tuple:
    """Star subdivision at a torus-fixed point.

    Returns (new surface, index of the exceptional ray E, pullback map on
    ray-coefficient vectors).  Raises :class:`NotFixedPoint` if the given
    ray pair is not a maximal cone of the fan (e.g. blowing up the same
    cone twice).
    """
    i, j = cone
    if (i, j) not in surface.cones():
        raise NotFixedPoint(f"rays {cone} do not span a maximal cone")
    if abs(surface.cone_det(cone)) != 1:
        raise NotFixedPoint(f"cone {cone} is singular")
    u = tuple(a + b for a, b in zip(surface.rays[i], surface.rays[j]))
    rays = surface.rays[: i + 1] + (u,) + surface.rays[i + 1 :]
    new = ToricSurface(rays, name=f"Bl({surface.name})")
    e_index = i + 1

    def pullback(coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        return coeffs[: i + 1] + (coeffs[i] + coeffs[j],) + coeffs[i + 1 :]

    return new, e_index, pullback


@dataclass
class SeshadriProblem:
    surface: ToricSurface
    ample: tuple  # ray coefficients of L
    cone: tuple  # the blown-up torus-fixed point
    blown: ToricSurface = None
    e_index: int = None
    pulled: tuple = None

    def __post_init__(self):
        if not self.surface.is_smooth():
            raise NotFixedPoint("surface fan is not smooth")
        if not self.surface.is_ample(self.ample):
            raise NotAmple(f"class {self.ample} is not ample")
        self.blown, self.e_index, self._pullback = blowup(self.surface, self.cone)
        self.pulled = self._pullback(self.ample)

    def degree(self) -> Fraction:
        """(L^2) = 2 * area of the divisor polytope."""
        return 2 * self.surface.polytope_of(self.ample).volume("euclidean")

    def class_minus_te(self, t):
        t = Fraction(t)
        return tuple(
            c - t if k == self.e_index else c for k, c in enumerate(self.pulled)
        )


def thresholds(problem: SeshadriProblem) -> tuple:
    """(eps, mu): nef and pseudo-effective thresholds of pi*L - tE.

    eps is the exact one-variable LP over the fan's nefness conditions;
    mu is the maximal t-coordinate of the lifted divisor polytope in
    (m, t)-space, both exact rationals.
    """
    x = problem.blown
    e = problem.e_index
    coeffs = problem.pulled

    def a_of(k):
        # coefficient of ray k in pi*L - tE as (constant, t-coefficient)
        return (Fraction(coeffs[k]), Fraction(-1 if k == e else 0))

    from .geometry import solve_square

    eps_bound = None
    for cone in x.cones():
        i, j = cone
        # m(t) = m0 + t m1 solving the cone's binding equations
        m0 = solve_square([x.rays[i], x.rays[j]], [-a_of(i)[0], -a_of(j)[0]])
        m1 = solve_square([x.rays[i], x.rays[j]], [-a_of(i)[1], -a_of(j)[1]])
        for k, u in enumerate(x.rays):
            if k in cone:
                continue
            c0 = vdot(m0, u) + a_of(k)[0]
            c1 = vdot(m1, u) + a_of(k)[1]
            if c1 < 0:
                bound = -c0 / c1
                eps_bound = bound if eps_bound is None else min(eps_bound, bound)
            elif c1 == 0 and c0 < 0:
                eps_bound = Fraction(0)
    eps = eps_bound if eps_bound is not None else Fraction(0)

    # mu: lift the polytope to (m, t)-space
    ub = Fraction(coeffs[e]) + max(
        vdot(v, x.rays[e]) for v in problem.surface.polytope_of(problem.ample).vertices
    ) + 1
    hs = []
    for k, u in enumerate(x.rays):
        tcoef = Fraction(1 if k == e else 0)
        hs.append(((-Fraction(u[0]), -Fraction(u[1]), tcoef), Fraction(coeffs[k])))
    hs.append(((F(0), F(0), F(-1)), F(0)))
    hs.append(((F(0), F(0), F(1)), ub))
    lifted = from_halfspaces(hs, ambient_dim=3)
    mu = max(v[2] for v in lifted.vertices)
    return eps, mu


def flag_chart_series(problem: SeshadriProblem, side: str = "after") -> LatticeSeries:
    """Sections of eta*L on the blow-up, adapted to the flag Y_1 = E.

    The chart is the smooth cone (E, adjacent ray); monomial exponents
    transform by the unimodular matrix with rows (u_E, u_adj) plus the
    degree-linear offset that places the chart vertex at the origin, so
    the unit flag valuation on the transformed series computes the flag
    values (ord_E, ord of the point on E) directly.
    """
    x = problem.blown
    e = problem.e_index
    adj = (e + 1) % x.n_rays if side == "after" else (e - 1) % x.n_rays
    u_e, u_adj = x.rays[e], x.rays[adj]
    a_e = Fraction(problem.pulled[e])
    a_adj = Fraction(problem.pulled[adj])
    p = problem.surface.polytope_of(problem.ample)
    verts = [
        (vdot(v, u_e) + a_e, vdot(v, u_adj) + a_adj) for v in p.vertices
    ]
    return LatticeSeries(convex_hull(verts), name=f"{x.name} chart {side}")


def blowup_body(problem: SeshadriProblem, max_degree: int = 6, side: str = "after"):
    series = flag_chart_series(problem, side)
    return series_body(series, flag_valuation(2), max_degree=max_degree), series


def restricted_volume_profile(
    problem: SeshadriProblem, max_degree: int = 6
) -> PLFunction:
    """t -> vol_{X~|E}(pi*L - tE) as a concave PL function on [0, mu].

    Computed as the slice-length function of the blow-up body for the
    flag with Y_1 = E (the Lazarsfeld-Mustata slice identity); the
    breakpoints are the Zariski-chamber walls.
    """
    sb, _ = blowup_body(problem, max_degree=max_degree)
    delta = sb.body
    heights = sorted({v[0] for v in delta.vertices})
    samples = []
    for t in heights:
        from .geometry import slice_polytope

        sl = slice_polytope(delta, {0: t})
        length = sl.volume("euclidean") if sl.dim == 1 else Fraction(0)
        samples.append(((t,), length))
    domain = convex_hull([(t,) for t in heights])
    return upper_concave_envelope(samples, domain)


def integrate_weighted_profile(profile: PLFunction, weight_coeffs=(0, 1)) -> Fraction:
    """Exact integral of w(t) * profile(t) over the profile's domain."""
    total = Fraction(0)
    for cell, (g, c) in zip(profile.cells, profile.coeffs):
        if len(cell) != 2:
            continue
        lo, hi = sorted(x[0] for x in cell)
        if lo == hi:
            continue
        # profile(t) = g t + c; weight = sum w_i t^i
        prod = [Fraction(0)] * (len(weight_coeffs) + 1)
        for i, w in enumerate(weight_coeffs):
            prod[i] += Fraction(w) * c
            prod[i + 1] += Fraction(w) * g[0]
        total += sum(
            co * (hi ** (i + 1) - lo ** (i + 1)) / (i + 1)
            for i, co in enumerate(prod)
        )
    return total


def iota(problem: SeshadriProblem, max_degree: int = 6) -> dict:
    """iota(L;x) = (1/vol(L)) * integral of t * vol_{X~|E}(pi*L - tE) dt.

    Exact; also reports the lower bound eps^{n+1}/((n+1)(L^n)) from the
    ample-range computation, plus the (n+1)! variant of that constant
    that is sometimes quoted for this bound.  The variant disagrees with
    the direct computation (the integral of t^n is t^{n+1}/(n+1)), so
    both are returned and the verdict flags the mismatch.
    """
    eps, mu = thresholds(problem)
    profile = restricted_volume_profile(problem, max_degree=max_degree)
    vol_l = problem.degree()
    value = integrate_weighted_profile(profile, (0, 1)) / vol_l
    bound = eps**3 / (3 * vol_l)
    variant = eps**3 / (6 * vol_l)
    return {
        "iota": value,
        "eps": eps,
        "mu": mu,
        "profile": profile,
        "lower_bound": bound,
        "lower_bound_factorial_variant": variant,
        "bound_attained": value == bound,
        "factorial_variant_consistent": value == variant if eps == mu else None,
    }


# ---------------------------------------------------------------------------
# the P^1-bundle model


@dataclass
class BundleModel:
    """X^ = P(O + O(E)) over the blow-up, as a smooth toric threefold."""

    problem: SeshadriProblem
    b: Fraction
    rays: tuple = None
    plus_index: int = None
    minus_index: int = None

    def __post_init__(self):
        eps, mu = thresholds(self.problem)
        self.b = Fraction(self.b)
        if self.b <= mu:
            raise BTooSmall(f"b = {self.b} must exceed mu = {mu}")
        x = self.problem.blown
        e = self.problem.e_index
        rays = [
            (u[0], u[1], -1 if k == e else 0) for k, u in enumerate(x.rays)
        ]
        self.plus_index = len(rays)
        rays.append((0, 0, 1))
        self.minus_index = len(rays)
        rays.append((0, 0, -1))
        self.rays = tuple(rays)

    def cones(self):
        x = self.problem.blown
        out = []
        for i, j in x.cones():
            out.append((i, j, self.plus_index))
            out.append((i, j, self.minus_index))
        return out

    def is_smooth(self) -> bool:
        from .lattices import IntegerMatrix, det

        return all(
            abs(det(IntegerMatrix((self.rays[i], self.rays[j], self.rays[k]))))
            == 1
            for i, j, k in self.cones()
        )

    def pullback_class(self, coeffs):
        """pi* of a ray-coefficient class on the blow-up."""
        return tuple(Fraction(c) for c in coeffs) + (F(0), F(0))

    def x1_class(self):
        out = [F(0)] * len(self.rays)
        out[self.minus_index] = F(1)
        return tuple(out)

    def x2_class(self):
        out = [F(0)] * len(self.rays)
        out[self.plus_index] = F(1)
        return tuple(out)

    def principal_class(self, m):
        """div of the character m in Z^3."""
        return tuple(-Fraction(vdot(m, u)) for u in self.rays)

    def lhat_normalized(self):
        """L^ ~ pi*(eta*L) + b X_1: the representative avoiding cent(v^)."""
        base = self.pullback_class(self.problem.pulled)
        x1 = self.x1_class()
        return tuple(c + self.b * d for c, d in zip(base, x1))

    def lhat_xi_form(self):
        """L^ = b xi + pi*(eta*L - bE) with xi = X_2."""
        cls = list(self.pullback_class(self.problem.class_minus_te(self.b)))
        cls[self.plus_index] += self.b
        return tuple(cls)

    def linear_equivalence_check(self) -> dict:
        """X_2 - X_1 - pi*E is the divisor of the character e_3."""
        e_class = [F(0)] * len(self.problem.blown.rays)
        e_class[self.problem.e_index] = F(1)
        lhs = tuple(
            a - b - c
            for a, b, c in zip(
                self.x2_class(), self.x1_class(), self.pullback_class(e_class)
            )
        )
        principal = self.principal_class((0, 0, 1))
        reps_equiv = tuple(
            a - b for a, b in zip(self.lhat_xi_form(), self.lhat_normalized())
        )
        # the two L^ representatives differ by b * div(chi^{e_3})
        scaled = tuple(self.b * x for x in principal)
        return {
            "x2_x1_e_principal": lhs == tuple(-x for x in principal),
            "lhat_reps_equivalent": reps_equiv in (scaled, tuple(-x for x in scaled)),
        }

    def section_polytope(self, d: int = 1, coeffs=None) -> Polytope:
        if coeffs is None:
            coeffs = self.lhat_normalized()
        hs = [
            (tuple(-Fraction(x) for x in u), d * Fraction(a))
            for u, a in zip(self.rays, coeffs)
        ]
        return from_halfspaces(hs, ambient_dim=3)

    def composite_values(self, d: int):
        """v^ values (ord_{X_2}, flag values on X_2 = blow-up) at degree d.

        Monomial (m, lambda) evaluates to (lambda, A m + d (a_E, a_adj)),
        the unimodular chart transform of the surface flag.
        """
        x = self.problem.blown
        e = self.problem.e_index
        adj = (e + 1) % x.n_rays
        u_e, u_adj = x.rays[e], x.rays[adj]
        a_e = Fraction(self.problem.pulled[e])
        a_adj = Fraction(self.problem.pulled[adj])
        out = []
        for pt in self.section_polytope(d).lattice_points():
            m = (pt[0], pt[1])
            lam = pt[2]
            out.append(
                (
                    Fraction(lam),
                    vdot(m, u_e) + d * a_e,
                    vdot(m, u_adj) + d * a_adj,
                )
            )
        return sorted(out)


def bundle_model(problem: SeshadriProblem, b) -> BundleModel:
    return BundleModel(problem=problem, b=b)


def subgraph_equals_body_check(
    problem: SeshadriProblem, b, max_degree: int = 8
) -> dict:
    """Filtered-body route against the threefold body route.

    Side one computes the filtered Newton-Okounkov body of the ord_E
    filtration over the blow-up body; side two enumerates the threefold's
    sections and their composite values.  The polytopes must agree after
    the coordinate swap chi, the per-degree value counts must match, and
    the common volume must equal the integral of the transform over the
    blow-up body.
    """
    model = bundle_model(problem, b)
    series = flag_chart_series(problem)
    filt = OrdDivisorFiltration(series, (1, 0), 0, name="ord_E")
    spec = ReesSemigroupSpec(series, flag_valuation(2), filt, 0)
    fb = filtered_body(spec, max_degree=max_degree)
    side1 = convex_hull([(v[2], v[0], v[1]) for v in fb.body.vertices])

    pts = []
    counts2 = {}
    counts1 = {}
    mismatch = None
    for d in range(1, max_degree + 1):
        vals = model.composite_values(d)
        counts2[d] = len(vals)
        counts1[d] = len(fb.semigroup.layer(d))
        if counts1[d] != counts2[d] and mismatch is None:
            mismatch = d
        pts.extend(tuple(Fraction(x, d) for x in val) for val in vals)
    side2 = convex_hull(pts)

    sb, _ = blowup_body(problem, max_degree=max_degree)
    transform_integral = slice_volume_integral(sb.body, 0, weight_coeffs=(0, 1))
    return {
        "subgraph_body": side1,
        "threefold_body": side2,
        "bodies_equal": side1 == side2,
        "volume": side2.volume("euclidean"),
        "volume_equals_transform_integral": side2.volume("euclidean")
        == transform_integral,
        "transform_integral": transform_integral,
        "counts_side1": counts1,
        "counts_side2": counts2,
        "counts_equal": mismatch is None,
        "first_count_mismatch": mismatch,
        "vol_xhat_lhat": 6 * side2.volume("euclidean"),
    }


def rationality_verdict(
    problem: SeshadriProblem, b=None, max_degree: int = 6
) -> dict:
    """Structured rationality verdict for the Seshadri constant.

    Reports eps and mu exactly, the KLM route (eps < mu forces eps
    rational), the integral invariant iota with its consistency bound
    (flagging the (n+1)! constant variant when it disagrees), and
    both integer-window criteria: the corollary's (eps, eps(L-K;x) - 2)
    and the theorem-statement variant starting at mu.
    """
    eps, mu = thresholds(problem)
    it = iota(problem, max_degree=max_degree)
    vol_l = problem.degree()
    bound = eps**3 / (3 * vol_l)
    variant = eps**3 / (6 * vol_l)
    minus_k = tuple(
        Fraction(a) - k
        for a, k in zip(problem.ample, problem.surface.canonical_coeffs())
    )
    window = None
    window_mu = None
    wintegers = []
    if problem.surface.is_ample(minus_k):
        aux = SeshadriProblem(problem.surface, minus_k, problem.cone)
        eps_mk, _ = thresholds(aux)
        upper = eps_mk - 2
        window = (eps, upper)
        window_mu = (mu, upper)
        k = int(eps) + 1
        while k < upper:
            if k > eps:
                wintegers.append(k)
            k += 1
    if b is None:
        b = int(mu) + 1
    verdict = "rational via exact toric LP"
    if eps < mu:
        verdict = "rational via KLM (eps < mu)"
    elif wintegers:
        verdict = "rational via integer window"
    return {
        "eps": eps,
        "mu": mu,
        "eps_lt_mu": eps < mu,
        "iota": it["iota"],
        "iota_consistency": it["iota"] >= bound,
        "bound_attained": it["iota"] == bound,
        "factorial_variant_constant": variant,
        "factorial_variant_matches": it["iota"] == variant,
        "window_corollary": window,
        "window_theorem_mu": window_mu,
        "window_integers": wintegers,
        "suggested_b": b,
        "verdict": verdict,
        "eps_rational": True,
        "note": "torus-fixed points only; exactness is the toric dictionary",
    }
