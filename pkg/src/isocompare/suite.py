"""One verifier per inequality.

Every verifier takes a manifold (a :class:`ManifoldSpec` or a built engine
object) and the comparison curvature ``k``, computes both sides of the
inequality from engine outputs and model kernels, and returns a
:class:`VerificationReport`.  Hypotheses are checked on samples and kept
apart from the inequality itself, so a scenario that violates a
hypothesis is reported as such instead of as a failed inequality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .convexity import toponogov_verify
from .errors import DomainError, HypothesisViolation, ScenarioError
from .geometry import engine
from .geometry.closed import FlatTorus, ProjectivePlane
from .geometry.domains import RadialDomain, WarpedBall, direction_rule, omega_of_u
from .geometry.shapes import Ball
from .geometry.spaceform import SpaceForm
from .kernels import (CurvatureContext, h_k, j_tube, l_of_lambda, lambda_admissible, lambda_of_l,
                      model_measures, model_quermass, sk, unit_sphere_area)
from .quadrature import panel_rule
from .reports import DEFAULT_TOLERANCE, EQUALITY_TOLERANCE, VerificationReport

HYPOTHESIS_TOL = 1e-5          # sampled curvature bounds are finite differences
BISHOP_GROMOV_TOL = 1e-5
SUPERLEVEL_SLACK = 1e-7        # relative; cut distances carry bisection bias


# -- shared plumbing --------------------------------------------------------------

def _new(theorem_id, tolerance=None, equality=None, scenario="") -> VerificationReport:
    rep = VerificationReport(theorem_id=theorem_id, scenario=scenario,
                             tolerance=DEFAULT_TOLERANCE if tolerance is None else float(tolerance))
    rep.equality_expected = bool(equality)
    return rep


def _domain(m):
    d = engine.resolve(m)
    if not getattr(d, "has_boundary", False) or not hasattr(d, "boundary"):
        raise DomainError(f"{getattr(d, 'kind', type(d).__name__)} is not a domain with boundary")
    return d


def _is_model_ball(d, k: float) -> bool:
    """Is the domain a geodesic ball of the model space M_k?"""
    if isinstance(d, RadialDomain):
        return isinstance(d.outer, Ball) and d.inner is None and d.k == k
    if isinstance(d, WarpedBall):
        spec = d.profile.spec
        return spec.get("type") == "sk" and float(spec.get("k")) == k
    return False


def _equality(flag, d, k) -> bool:
    return _is_model_ball(d, k) if flag is None else bool(flag)


def _ricci_hypothesis(rep, d, k):
    bounds = engine.curvature_bounds(d)
    slack = bounds.ric_lower - k
    rep.add_hypothesis("Ric >= (n-1)k", slack >= -HYPOTHESIS_TOL * max(1.0, abs(k)), slack,
                       f"sampled at {bounds.samples} points; worst at {bounds.worst_location}")
    rep.ingredient("ric_lower", bounds.ric_lower, "finite-difference curvature at sample points")
    return bounds


def _sectional_upper_hypothesis(rep, space, k):
    bounds = engine.curvature_bounds(space)
    slack = k - bounds.sec_upper
    rep.add_hypothesis("sec <= k", slack >= -HYPOTHESIS_TOL * max(1.0, abs(k)), slack,
                       f"sampled at {bounds.samples} points")
    rep.ingredient("sec_upper", bounds.sec_upper, "finite-difference curvature at sample points")
    return bounds


def _quadrature_tolerance(rep, meas):
    rep.equality_tolerance = max(EQUALITY_TOLERANCE, 10.0 * meas.rel_change)
    rep.ingredient("quadrature_rel_change", meas.rel_change, "panel doubling")


def _h(ctx, r):
    return np.asarray(h_k(ctx, np.asarray(r, dtype=float)), dtype=float)


def _grid(values, name):
    arr = np.atleast_1d(np.asarray(values, dtype=float))
    if arr.ndim != 1 or arr.size == 0 or not np.all(np.isfinite(arr)):
        raise ScenarioError(f"{name} must be a non-empty list of finite numbers")
    return arr


# -- cut distance and volume ----------------------------------------------------------

def verify_cut_isoperimetric(m, k: float, *, tolerance=None, equality=None, scenario=""):
    """Vol >= int h_k(c) dS, H <= (n-1) lambda_k(c), and the ratio bound with its corollaries."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("cut_isoperimetric", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    bounds = _ricci_hypothesis(rep, d, k)
    b = engine.boundary_samples(d)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    vol, area = meas.volume, b.area
    cut = b.cut
    c_min = float(cut.min())
    c_mean = b.integrate(cut) / area if np.all(np.isfinite(cut)) else math.inf
    rep.ingredient("volume", vol, "polar Gauss-Legendre quadrature, panel-doubled")
    rep.ingredient("area", area, "boundary Gauss-Legendre quadrature")
    rep.ingredient("cut_min", c_min, "bisection on the boundary-distance predicate")
    rep.ingredient("cut_mean", c_mean, "boundary quadrature of c(p)")
    rep.ingredient("cut_max", float(cut.max()), "bisection on the boundary-distance predicate")
    rep.ingredient("cut_focal_violations",
                   int(np.sum(cut > b.focal + engine.CUT_FOCAL_TOL * d.scale)),
                   "samples with c(p) > Focal(p)")

    if k > 0:
        rep.add_check("max c(p) <= pi/sqrt(k)", float(cut.max()), ctx.first_zero, "<=")
        cut_ok = np.minimum(cut, ctx.first_zero * (1 - 1e-15))
    else:
        cut_ok = cut
    rep.add_check("Vol >= int h_k(c) dS", vol, b.integrate(_h(ctx, cut_ok)), ">=", equality=eq)

    lam = np.asarray(lambda_of_l(ctx, cut_ok), dtype=float)
    H = b.H
    bound = ctx.m * lam
    scale = np.maximum(np.maximum(np.abs(H), np.abs(bound)), 1e-300)
    worst = int(np.argmin((bound - H) / scale))
    rep.add_check("H(p) <= (n-1) lambda_k(c(p))", float(H[worst]), float(bound[worst]), "<=",
                  x=float(worst), equality=eq)

    l = c_mean if k >= 0 else c_min
    rep.ingredient("l", l, "mean cut (k >= 0) or minimal cut (k < 0)")
    if math.isfinite(l):
        rep.add_check("Area/Vol <= 1/h_k(l)", area / vol, 1.0 / float(_h(ctx, min(l, ctx.first_zero))),
                      "<=", equality=eq)
    if k >= 0 and bounds.ric_lower >= -HYPOTHESIS_TOL:
        rep.add_check("c(Omega) Area <= n Vol", c_min * area, d.n * vol, "<=",
                      equality=eq and k == 0)
    # volume comparison: area and cut hypotheses at l = c(Omega)
    if math.isfinite(c_min) and c_min < ctx.first_zero:
        model = model_measures(ctx, c_min)
        if area >= model.sphere_area * (1 - rep.equality_tolerance):
            rep.add_check("Vol >= |B_k(c(Omega))|", vol, model.ball_volume, ">=", equality=eq)
        else:
            rep.notes.append("volume comparison not applied: Area < |S_k(c(Omega))|")
    rep.series["cut"] = [[float(i), float(c), float(f)] for i, (c, f) in enumerate(zip(cut, b.focal))]
    return rep.finalize()


def verify_superlevel(m, k: float, t_grid=None, *, tolerance=None, equality=None, scenario=""):
    """h_k(t) |{c >= t}| <= Vol for each t, plus the statements about {c = inf}."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("superlevel", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    _ricci_hypothesis(rep, d, k)
    b = engine.boundary_samples(d)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    vol = meas.volume
    cut = b.cut
    finite = np.isfinite(cut)
    if t_grid is None:
        top = float(cut[finite].max()) if finite.any() else d.scale
        t_grid = top * np.arange(1, 17) / 16
    ts = _grid(t_grid, "t_grid")
    if np.any(ts <= 0) or (k > 0 and np.any(ts >= ctx.first_zero)):
        raise DomainError("superlevel thresholds must lie in (0, pi/sqrt(k))")
    series = []
    for t in ts:
        level = b.integrate(cut >= t * (1 - SUPERLEVEL_SLACK))
        lhs = float(_h(ctx, t)) * level
        rep.add_check("h_k(t) |{c >= t}| <= Vol", lhs, vol, "<=", x=float(t),
                      equality=eq and t == ts.max())
        series.append([float(t), lhs, vol])
    rep.series["superlevel"] = series
    infinite = b.integrate(~finite)
    rep.ingredient("measure_cut_infinite", infinite, "boundary quadrature of {c = inf}")
    if k < 0:
        rep.add_check("|{c = inf}| <= sqrt(-k)(n-1) Vol", infinite, math.sqrt(-k) * ctx.m * vol, "<=")
    elif k == 0 and infinite > 0:
        rep.add_check("|{c = inf}| = 0", infinite, 0.0, "<=")
    return rep.finalize()


def verify_tube(m, k: float, rho_grid=None, *, tolerance=None, equality=None, scenario=""):
    """Vol(Omega_rho) >= int j_k(c(p), rho) dS."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("tube", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    _ricci_hypothesis(rep, d, k)
    b = engine.boundary_samples(d)
    if rho_grid is None:
        rin = engine.inradius(d)[0]
        rho_grid = rin * np.array([0.25, 0.5, 0.75, 1.0])
    rhos = _grid(rho_grid, "rho_grid")
    if np.any(rhos < 0):
        raise DomainError("tube widths must be non-negative")
    series = []
    for rho in rhos:
        lhs = engine.sublevel_volume(d, rho)
        rhs = b.integrate([j_tube(ctx, c, rho) for c in b.cut])
        rep.add_check("Vol(Omega_rho) >= int j_k(c, rho) dS", lhs, rhs, ">=", x=float(rho), equality=eq)
        series.append([float(rho), lhs, rhs])
    rep.series["tube"] = series
    return rep.finalize()


def verify_inradius(m, k: float, lam=None, *, tolerance=None, equality=None, scenario=""):
    """sup d(x, boundary) <= l_k(lambda) when H >= (n-1) lambda."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("inradius", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    _ricci_hypothesis(rep, d, k)
    b = engine.boundary_geometry(d)
    H1 = b.H1
    if lam is None:
        lam = float(H1.min())
        rep.notes.append("lambda taken as the sampled minimum of H_1")
    lam = float(lam)
    rep.ingredient("lambda", lam, "scenario or sampled min H_1")
    slack = float(H1.min()) - lam
    rep.add_hypothesis("H_1 >= lambda", slack >= -HYPOTHESIS_TOL * max(1.0, abs(lam)), slack)
    admissible = lambda_admissible(ctx, lam)
    rep.add_hypothesis("lambda admissible", admissible, lam - ctx.lambda_floor if k <= 0 else math.inf,
                       "lambda must exceed sqrt(-k) when k <= 0")
    rin, where = engine.inradius(d)
    rep.ingredient("inradius", rin, "distance field maximum refined by Nelder-Mead")
    if admissible:
        bound = float(l_of_lambda(ctx, lam))
        rep.add_check("inradius <= l_k(lambda)", rin, bound, "<=", equality=eq)
        if bound > 10 * d.scale:
            rep.notes.append("weak hypothesis: l_k(lambda) far exceeds the domain size")
    return rep.finalize()


# -- comparison with geodesic balls of the ambient space ------------------------------------

def _ball_volume_polar(M, r: float, panels: int = 512, order: int = 8) -> float:
    """|B(x0, r)| on a homogeneous closed surface or space form in geodesic polar coordinates."""
    n = M.n
    breaks = M.cut_corners() if isinstance(M, FlatTorus) else ()
    u, _, w = direction_rule(n, panels if n == 2 else 64, order, breaks)
    omega = omega_of_u(u)
    reach = np.minimum(r, np.asarray(M.cut_function(omega), dtype=float))
    x, wx = panel_rule(0.0, 1.0, 4, 12)
    t = reach[:, None] * x[None, :]
    inner = reach * np.sum(wx[None, :] * M.polar_density(t), axis=1)
    return float(np.dot(w, inner))


def verify_bishop_gromov(m, k: float, r_grid=None, center=None, *, tolerance=None, equality=None,
                         scenario=""):
    """|B(p, r)| / |B_k(r)| is non-increasing in r."""
    M = engine.resolve(m)
    if getattr(M, "has_boundary", False):
        M = engine.resolve(M.ambient)
    if not isinstance(M, (SpaceForm, FlatTorus, ProjectivePlane)):
        raise DomainError("Bishop-Gromov ratios need a space form, flat torus or RP^2")
    eq = (isinstance(M, SpaceForm) and M.k == k) if equality is None else bool(equality)
    rep = _new("bishop_gromov", tolerance, eq, scenario)
    rep.tolerance = max(rep.tolerance, BISHOP_GROMOV_TOL)
    ctx = CurvatureContext(k, M.n)
    _ricci_hypothesis(rep, M, k)
    if center is not None:
        rep.notes.append("the space is homogeneous; ratios do not depend on the centre")
    top = float(M.diameter) if math.isfinite(M.diameter) else 5.0
    if k > 0:
        top = min(top, ctx.first_zero)
    rs = _grid(top * np.arange(1, 25) / 24 if r_grid is None else r_grid, "r_grid")
    if np.any(rs <= 0) or np.any(np.diff(rs) <= 0):
        raise DomainError("r_grid must be positive and increasing")
    ratios = [_ball_volume_polar(M, r) / model_measures(ctx, r).ball_volume for r in rs]
    for i in range(1, len(rs)):
        rep.add_check("ratio(r_i) <= ratio(r_{i-1})", ratios[i], ratios[i - 1], "<=", x=float(rs[i]),
                      equality=eq)
    if len(rs) == 1:
        rep.add_check("ratio(r) <= 1", ratios[0], 1.0, "<=", x=float(rs[0]), equality=eq)
    rep.series["ratio"] = [[float(r), float(q)] for r, q in zip(rs, ratios)]
    return rep.finalize()


# -- mean curvature ---------------------------------------------------------------------

def verify_hkr(m, k: float, lam=None, *, tolerance=None, equality=None, scenario=""):
    """Vol <= int h_k(l_k(H_1)) dS and, for a uniform lambda, Vol/Area <= h_k(l_k(lambda))."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("hkr", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    _ricci_hypothesis(rep, d, k)
    b = engine.boundary_geometry(d)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    H1 = b.H1
    vol, area = meas.volume, b.area
    rep.ingredient("volume", vol, "polar Gauss-Legendre quadrature, panel-doubled")
    rep.ingredient("H1_min", float(H1.min()), "finite-difference second fundamental form")
    if k <= 0:
        slack = float(H1.min()) - ctx.lambda_floor
        rep.add_hypothesis("H_1 > sqrt(-k)", slack > 0, slack)
        if slack <= 0:
            return rep.finalize()
    rhs = b.integrate(_h(ctx, l_of_lambda(ctx, H1)))
    rep.add_check("Vol <= int h_k(l_k(H_1)) dS", vol, rhs, "<=", equality=eq)
    if lam is not None:
        lam = float(lam)
        gap = float(H1.min()) - lam
        rep.add_hypothesis("H_1 >= lambda", gap >= -HYPOTHESIS_TOL * max(1.0, abs(lam)), gap)
        if not lambda_admissible(ctx, lam):
            raise DomainError(f"lambda={lam} is not admissible for k={k}")
        rep.add_check("Vol/Area <= h_k(l_k(lambda))", vol / area, float(_h(ctx, l_of_lambda(ctx, lam))),
                      "<=", equality=eq)
    return rep.finalize()


def verify_fenchel(m, k=None, *, tolerance=None, equality=None, scenario=""):
    """Total curvature integrals of a closed curve on S^2 or H^2 (boundary of a 2-D domain)."""
    d = _domain(m)
    if d.n != 2 or not isinstance(d, RadialDomain) or d.k == 0:
        raise DomainError("the Fenchel-type integrals need a closed curve on S^2 or H^2")
    k = d.k if k is None else float(k)
    if k != d.k:
        raise DomainError("the curve must be measured with the curvature of its surface")
    eq = (isinstance(d.outer, Ball) and d.inner is None) if equality is None else bool(equality)
    rep = _new("fenchel", tolerance, eq, scenario)
    b = engine.boundary_geometry(d)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    kappa = b.kappa[:, 0]
    area = meas.volume
    gauss_bonnet = b.integrate(kappa) + k * area
    rep.ingredient("gauss_bonnet", gauss_bonnet, "int kappa ds + k Area (should be 2 pi)")
    if abs(gauss_bonnet - 2 * math.pi) > 1e-6:
        rep.notes.append(f"Gauss-Bonnet residual {gauss_bonnet - 2 * math.pi:.3g}")
    if k > 0:
        total = b.integrate(np.sqrt(kappa ** 2 + k))
        rep.add_check("int sqrt(kappa^2 + k) ds >= 2 pi", total, 2 * math.pi, ">=", equality=eq)
        rep.add_check("k Area <= int (sqrt(kappa^2 + k) - kappa) ds", k * area,
                      b.integrate(np.sqrt(kappa ** 2 + k) - kappa), "<=", equality=eq)
    else:
        floor = math.sqrt(-k)
        slack = float(kappa.min()) - floor
        rep.add_hypothesis("kappa > sqrt(-k)", slack > 0, slack)
        if slack <= 0:
            return rep.finalize()
        root = np.sqrt(kappa ** 2 + k)
        rep.add_check("int sqrt(kappa^2 + k) ds <= 2 pi", b.integrate(root), 2 * math.pi, "<=",
                      equality=eq)
        rep.add_check("|k| Area <= int (kappa - sqrt(kappa^2 + k)) ds", -k * area,
                      b.integrate(kappa - root), "<=", equality=eq)
    return rep.finalize()


# -- extrinsic radius -------------------------------------------------------------------

def _ambient(d, ambient):
    amb = engine.resolve(ambient) if ambient is not None else getattr(d, "ambient", None)
    return amb


def verify_isodiametric(m, k: float, ambient=None, *, tolerance=None, equality=None, scenario=""):
    """Area/Vol >= 1/h_k(L) with L = rad (k > 0) or avrad (k <= 0)."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("isodiametric", tolerance, eq, scenario)
    amb = _ambient(d, ambient)
    ctx = CurvatureContext(k, d.n)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    vol, area = meas.volume, meas.boundary_area
    rep.ingredient("volume", vol, "polar Gauss-Legendre quadrature, panel-doubled")
    rep.ingredient("area", area, "boundary Gauss-Legendre quadrature, panel-doubled")
    if amb is None:
        rep.add_hypothesis("Omega lies in a complete ambient manifold", False, math.nan,
                           "no ambient space with a distance oracle", applicable=False)
        rep.notes.append("not applicable: the domain has no ambient space")
        return rep.finalize()
    _sectional_upper_hypothesis(rep, amb, k)
    er = engine.extrinsic_radius(amb, d)
    rep.ingredient("rad", er.rad, "minimax over centres (Nelder-Mead, 9 seeds)")
    rep.ingredient("avrad", er.avrad, "mean boundary distance minimised over centres")
    rep.ingredient("optimizer_converged", er.converged, "scipy Nelder-Mead status")
    if not er.within_injectivity:
        rep.add_hypothesis("Omega lies in a geodesic ball", False, float(amb.inj_radius) - er.rad,
                           "only metric balls contain Omega; the comparison needs a geodesic ball",
                           applicable=False)
        rep.notes.append("not applicable: the smallest containing ball is a metric ball beyond "
                         "the injectivity radius")
        L = er.rad
        rep.ingredient("L", L, "metric-ball radius")
        rep.add_check("Area/Vol >= 1/h_k(L)", area / vol, 1.0 / float(_h(ctx, L)), ">=")
        return rep.finalize()
    if k > 0:
        slack = ctx.first_zero - er.rad
        rep.add_hypothesis("rad <= pi/sqrt(k)", slack >= 0, slack)
        L, centre = er.rad, er.center
    else:
        L, centre = er.avrad, er.avrad_center
    rep.ingredient("L", L, "rad (k > 0) or avrad (k <= 0)")
    b = engine.boundary_geometry(d)
    r = np.asarray(amb.distance(b.points, centre), dtype=float)
    rep.add_check("Vol <= int h_k(r) dS", vol, b.integrate(_h(ctx, np.maximum(r, 1e-300))), "<=",
                  equality=eq)
    rep.add_check("Area/Vol >= 1/h_k(L)", area / vol, 1.0 / float(_h(ctx, L)), ">=", equality=eq)
    return rep.finalize()


def verify_cheeger(m, k: float, ambient=None, *, tolerance=None, equality=None, scenario=""):
    """Cheeger bound 1/h_k(L) with L = rad, validated on a family of subdomains."""
    d = _domain(m)
    rep = _new("cheeger", tolerance, equality, scenario)
    amb = _ambient(d, ambient)
    ctx = CurvatureContext(k, d.n)
    if amb is None:
        rep.add_hypothesis("M lies in a complete ambient manifold", False, math.nan, applicable=False)
        return rep.finalize()
    _sectional_upper_hypothesis(rep, amb, k)
    er = engine.extrinsic_radius(amb, d)
    rep.add_hypothesis("M lies in a geodesic ball", er.within_injectivity,
                       float(amb.inj_radius) - er.rad, applicable=er.within_injectivity)
    L = er.rad
    if k > 0:
        rep.add_hypothesis("L <= pi/sqrt(k)", L <= ctx.first_zero, ctx.first_zero - L)
    hL = float(_h(ctx, L))
    bound = 1.0 / hL
    rep.ingredient("L", L, "extrinsic radius")
    rep.ingredient("cheeger_bound", bound, "Area(S_k(L))/Vol(B_k(L))")
    rep.ingredient("lambda1_bound", 1.0 / (4.0 * hL * hL), "1/(4 h_k(L)^2)")
    meas = engine.measures(d)
    rep.add_check("Area/Vol(M) >= bound", meas.boundary_area / meas.volume, bound, ">=", x=L)
    # geodesic balls around the innermost point, closed-form measures of the ambient model
    if isinstance(amb, SpaceForm):
        rin = engine.inradius(d)[0]
        amb_ctx = CurvatureContext(amb.k, amb.n)
        for frac in (0.25, 0.5, 0.75, 1.0):
            r = frac * rin
            mm = model_measures(amb_ctx, r)
            rep.add_check("Area/Vol(ball) >= bound", mm.sphere_area / mm.ball_volume, bound, ">=", x=r)
            if amb.k == 0 and amb.n == 2:
                side = math.sqrt(2.0) * r    # square inscribed in that ball
                rep.add_check("Area/Vol(square) >= bound", 4.0 / side, bound, ">=", x=side)
    rep.notes.append("the first eigenvalue is not computed; lambda1_bound is the implied bound")
    return rep.finalize()


def verify_santalo_yanez(m, k: float, radii=(5.0, 10.0, 15.0), n=None, *, tolerance=None,
                         equality=None, scenario=""):
    """Expanding geodesic balls in M_k, k <= 0: the ratio is squeezed to (n-1) sqrt(-k)."""
    space = engine.resolve(m) if m is not None else None
    if n is None:
        n = getattr(space, "n", 2)
    if k > 0:
        raise DomainError("the expanding-family limit needs k <= 0")
    rep = _new("santalo_yanez", tolerance, True if equality is None else equality, scenario)
    ctx = CurvatureContext(k, n)
    ts = _grid(radii, "radii")
    if np.any(ts <= 0) or np.any(np.diff(ts) <= 0):
        raise DomainError("radii must be positive and increasing")
    limit = ctx.m * math.sqrt(-k)
    rep.ingredient("limit", limit, "(n-1) sqrt(-k)")
    series = []
    prev = math.inf
    for t in ts:
        ball = RadialDomain(SpaceForm(k, n), Ball(t), None, "ModelBall")
        vol = ball.volume()
        try:
            area = engine.boundary_geometry(ball).area
        except DomainError:
            # the embedded normal loses its sign once cosh(t) nears 1/sqrt(eps)
            area = ball.polar_sphere_area(t)
            rep.notes.append(f"radius {t:g}: boundary area from the polar density")
        ratio = area / vol
        # c(Omega_t) = rad(Omega_t) = t for geodesic balls
        upper = 1.0 / float(_h(ctx, t))
        rep.add_check("Area/Vol <= 1/h_k(l_t)", ratio, upper, "<=", x=float(t), equality=True)
        rep.add_check("Area/Vol >= 1/h_k(L_t)", ratio, upper, ">=", x=float(t), equality=True)
        err = abs(ratio - limit)
        rep.add_check("|ratio - limit| decreasing", err, prev, "<=", x=float(t))
        prev = err
        series.append([float(t), ratio, limit])
    rep.series["ratio"] = series
    rep.notes.append("for geodesic balls c(Omega_t) = rad(Omega_t) = t, so both sandwich sides coincide")
    return rep.finalize()


def verify_quermass_ratio(m, k: float, i: int = -1, j: int = 1, ambient=None, *, tolerance=None,
                          equality=None, scenario=""):
    """I_i/I_j <= the same ratio for the geodesic sphere of radius L = rad."""
    d = _domain(m)
    i, j = int(i), int(j)
    if not -1 <= i < j <= d.n - 1:
        raise DomainError(f"need -1 <= i < j <= n-1, got i={i}, j={j}")
    eq = _equality(equality, d, k)
    rep = _new("quermass_ratio", tolerance, eq, scenario)
    amb = _ambient(d, ambient)
    if amb is None:
        rep.add_hypothesis("Omega lies in R^n or an open hemisphere", False, math.nan, applicable=False)
        return rep.finalize()
    ctx = CurvatureContext(k, d.n)
    _sectional_upper_hypothesis(rep, amb, k)
    if k < 0:
        rep.notes.append("k < 0 lies outside the stated ambient spaces; evaluated as a comparison only")
    b = engine.boundary_geometry(d)
    meas = engine.measures(d)
    _quadrature_tolerance(rep, meas)
    Hj = b.Hj
    slack = float(Hj[:, j].min())
    rep.add_hypothesis(f"H_{j} > 0", slack > 0, slack)
    er = engine.extrinsic_radius(amb, d)
    L = er.rad
    rep.ingredient("L", L, "extrinsic radius")
    if k > 0:
        rep.add_hypothesis("L < pi/(2 sqrt(k))", L < 0.5 * ctx.first_zero, 0.5 * ctx.first_zero - L)

    def integral(idx):
        return d.n * meas.volume if idx == -1 else b.integrate(Hj[:, idx])

    Ii, Ij = integral(i), integral(j)
    rep.ingredient(f"I_{i}", Ii, "n Vol" if i == -1 else "boundary quadrature of H_i")
    rep.ingredient(f"I_{j}", Ij, "boundary quadrature of H_j")
    model = model_quermass(ctx, L, i) / model_quermass(ctx, L, j)
    rep.add_check("I_i/I_j <= I_i/I_j(S_k(L))", Ii / Ij, model, "<=", equality=eq)
    return rep.finalize()


# -- weighted volume and focal distance -------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """phi(rho) from a scenario: constant, power rho^p, or linear interpolation of samples."""

    kind: str = "constant"
    p: float = 1.0
    grid: tuple = ()
    values: tuple = ()

    @classmethod
    def from_dict(cls, spec) -> "Weight":
        if callable(spec):
            raise ScenarioError("weights must be described by data")
        spec = dict(spec or {"type": "constant"})
        kind = spec.pop("type", "constant")
        if kind == "constant":
            w = cls("constant")
        elif kind == "power":
            w = cls("power", p=float(spec.pop("p", 1.0)))
        elif kind == "samples":
            grid, vals = tuple(map(float, spec.pop("grid"))), tuple(map(float, spec.pop("values")))
            if len(grid) != len(vals) or len(grid) < 2 or np.any(np.diff(grid) <= 0):
                raise ScenarioError("sampled weight needs matching increasing grid and values")
            w = cls("samples", grid=grid, values=vals)
        else:
            raise ScenarioError(f"unknown weight type {kind!r}")
        if spec:
            raise ScenarioError(f"unknown weight fields {sorted(spec)}")
        return w

    def to_dict(self):
        if self.kind == "power":
            return {"type": "power", "p": self.p}
        if self.kind == "samples":
            return {"type": "samples", "grid": list(self.grid), "values": list(self.values)}
        return {"type": "constant"}

    def __call__(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == "power":
            return np.maximum(rho, 0.0) ** self.p
        if self.kind == "samples":
            return np.interp(rho, self.grid, self.values)
        return np.ones_like(rho)


def verify_weighted(m, k: float, phi=None, *, tolerance=None, equality=None, scenario=""):
    """Area / int phi(rho) dV <= the same ratio for B_k(l), l = c(Omega)."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("weighted", tolerance, eq, scenario)
    weight = phi if isinstance(phi, Weight) else Weight.from_dict(phi)
    rep.ingredient("phi", weight.to_dict(), "scenario")
    ctx = CurvatureContext(k, d.n)
    _ricci_hypothesis(rep, d, k)
    b = engine.boundary_samples(d)
    rin = engine.inradius(d)[0]
    probe = np.linspace(0.0, rin, 65)[1:]
    low = float(np.min(weight(probe)))
    rep.add_hypothesis("phi > 0 on (0, inradius]", low > 0, low)
    l = float(b.cut.min())
    rep.ingredient("l", l, "c(Omega), minimal cut distance")
    if not math.isfinite(l):
        raise DomainError("weighted comparison needs a finite cut distance")
    lhs = b.area / d.weighted_volume(weight)
    x, w = panel_rule(0.0, l, 16, 12)
    model_int = unit_sphere_area(d.n) * float(np.dot(w, weight(l - x) * np.asarray(sk(k, x)) ** ctx.m))
    rhs = model_measures(ctx, l).sphere_area / model_int
    rep.add_check("Area / int phi(rho) dV <= model ratio", lhs, rhs, "<=", equality=eq)
    return rep.finalize()


def verify_focal_lower_bound(m, k: float, Lambda=None, cut_equals_focal: bool = False, *,
                             tolerance=None, equality=None, scenario=""):
    """Focal(Omega) >= l_k(Lambda) when sec <= k and the second fundamental form is <= Lambda."""
    d = _domain(m)
    eq = _equality(equality, d, k)
    rep = _new("focal_lower_bound", tolerance, eq, scenario)
    ctx = CurvatureContext(k, d.n)
    bounds = _sectional_upper_hypothesis(rep, d, k)
    b = engine.boundary_samples(d)
    kmax = float(b.kappa.max())
    if Lambda is None:
        Lambda = kmax
        rep.notes.append("Lambda taken as the sampled maximum principal curvature")
    Lambda = float(Lambda)
    rep.ingredient("Lambda", Lambda, "scenario or sampled max principal curvature")
    rep.add_hypothesis("II <= Lambda", kmax <= Lambda + HYPOTHESIS_TOL * max(1.0, abs(Lambda)),
                       Lambda - kmax)
    admissible = lambda_admissible(ctx, Lambda)
    rep.add_hypothesis("Lambda admissible", admissible,
                       Lambda - ctx.lambda_floor if k <= 0 else math.inf)
    if not admissible:
        return rep.finalize()
    l = float(l_of_lambda(ctx, Lambda))
    focal = float(b.focal.min())
    rep.ingredient("focal_min", focal, "Riccati blow-up, Richardson-extrapolated")
    rep.ingredient("cut_min", float(b.cut.min()), "bisection on the boundary-distance predicate")
    rep.add_check("Focal(Omega) >= l_k(Lambda)", focal, l, ">=", equality=eq)
    if cut_equals_focal:
        why = _cut_equals_focal_reason(d, k, b, bounds)
        rep.add_hypothesis("c(Omega) = Focal(Omega) justified", why is not None, 0.0,
                           why or "no sufficient condition holds")
        meas = engine.measures(d)
        rep.add_check("h_k(l) Area <= Vol", float(_h(ctx, l)) * b.area, meas.volume, "<=", equality=eq)
    return rep.finalize()


def _cut_equals_focal_reason(d, k, b, bounds):
    constant = abs(bounds.sec_upper - k) <= HYPOTHESIS_TOL and abs(bounds.sec_lower - k) <= HYPOTHESIS_TOL
    if not constant:
        return None
    n = d.n
    if k > 0:
        width = float(engine.normal_width(d, b).min())
        return "normal width >= pi/sqrt(k)" if width >= math.pi / math.sqrt(k) else None
    if k < 0 and float(b.H.min()) >= (n - 1) * math.sqrt(-k):
        return "H >= (n-1) sqrt(-k)"
    if k == 0 and float(b.H.min()) > 0:
        return "H > 0"
    floor = math.sqrt(-k) if k < 0 else 0.0
    counts = np.sum(b.kappa >= floor if k < 0 else b.kappa > floor, axis=1)
    if np.all(counts >= n / 2):
        return "at least n/2 principal curvatures above sqrt(-k) at every sample"
    return None


# -- cut locus of a point and triangle comparison -------------------------------------------

def verify_cutlocus_bound(m, k: float, x0=None, ball_radius=None, directions=None, *, tolerance=None,
                          equality=None, scenario=""):
    """Vol(Omega) <= h_k(l)(Area(boundary minus Cut) + 2 |Cut in Omega|), Omega = M or a metric ball."""
    M = engine.resolve(m)
    if isinstance(M, FlatTorus) or isinstance(M, ProjectivePlane) or isinstance(M, SpaceForm):
        pass
    else:
        raise DomainError("cut-locus bounds are computed on the flat torus, RP^2 and S^2")
    rep = _new("cutlocus_bound", tolerance, equality, scenario)
    ctx = CurvatureContext(k, M.n)
    _sectional_upper_hypothesis(rep, M, k)
    N = int(directions) if directions is not None else 2048
    cl = engine.point_cut_locus(M, x0, directions=N)
    L = cl.rad
    rep.ingredient("rad_x0", L, "max cut time over the direction grid")
    rep.ingredient("cut_measure", cl.measure, "half the closed cut polyline length")
    rep.ingredient("cut_measure_error", cl.measure_error, "difference to the half-resolution polyline")
    rep.ingredient("mesh_discrepancy", cl.mesh_discrepancy, "graph distances on a mesh minus cut times")
    rep.ingredient("directions", N, "direction grid")
    rel_err = cl.measure_error / cl.measure if cl.measure > 0 else math.inf
    rep.tolerance = max(rep.tolerance, 2.0 * rel_err) if math.isfinite(rel_err) else rep.tolerance
    vol_M = float(M.volume())
    vacuous_floor = max(1e-6 * float(M.diameter), 10.0 * cl.measure_error)
    if ball_radius is None or float(ball_radius) >= L:
        if cl.measure <= vacuous_floor:
            # nothing is asserted, so the radius hypothesis of the inequality is not tested
            rep.notes.append("measure-zero cut locus: the bound is vacuous")
            rep.ingredient("volume", vol_M, "closed-form volume")
            return rep.finalize(vacuous=True)
        if k > 0:
            rep.add_hypothesis("rad(x0) < pi/sqrt(k)", L < ctx.first_zero, ctx.first_zero - L)
        rep.add_check("Vol(M)/(2 |Cut(x0)|) <= h_k(rad(x0))", vol_M / (2.0 * cl.measure),
                      float(_h(ctx, L)), "<=")
        rep.ingredient("volume", vol_M, "closed-form volume")
        return rep.finalize()
    l = float(ball_radius)
    if l <= 0 or (k > 0 and l >= ctx.first_zero):
        raise DomainError("ball radius must lie in (0, pi/sqrt(k))")
    # Omega = closed metric ball B(x0, l) in geodesic polar coordinates over the direction grid
    dtheta = 2.0 * math.pi / N
    reach = np.minimum(cl.rho, l)
    x, wx = panel_rule(0.0, 1.0, 4, 12)
    vol = dtheta * float(np.sum(reach * np.sum(wx[None, :] * M.polar_density(reach[:, None] * x[None, :]),
                                               axis=1)))
    free = cl.rho > l
    area_free = dtheta * float(np.sum(np.asarray(M.polar_density(np.full(int(free.sum()), l)))))
    gaps = np.asarray(M.distance(cl.points, np.roll(cl.points, -1, axis=0)))
    inside = (~free) & np.roll(~free, -1)
    cut_in = 0.5 * float(np.sum(gaps[inside]))
    rep.ingredient("volume", vol, "polar quadrature of the metric ball")
    rep.ingredient("area_outside_cut", area_free, "boundary directions with rho > l")
    rep.ingredient("cut_measure_inside", cut_in, "cut polyline segments with rho <= l")
    rep.add_check("Vol <= h_k(l)(Area + 2|Cut|)", vol, float(_h(ctx, l)) * (area_free + 2.0 * cut_in), "<=")
    return rep.finalize()


def verify_toponogov(m, k: float, triangles=None, count: int = 20, seed: int = 0, t_samples: int = 50,
                     *, tolerance=None, equality=None, scenario=""):
    """Toponogov comparison over a set of triangles (q, p0, p1); random ones when not given."""
    M = engine.resolve(m)
    eq = (isinstance(M, SpaceForm) and M.k == k) if equality is None else bool(equality)
    rep = _new("toponogov", tolerance, eq, scenario)
    if triangles is None:
        rng = np.random.default_rng(seed)
        triangles = [[_random_point(M, rng) for _ in range(3)] for _ in range(int(count))]
    bounds = engine.curvature_bounds(M)
    slack = bounds.sec_lower - k
    rep.add_hypothesis("sec >= k", slack >= -HYPOTHESIS_TOL * max(1.0, abs(k)), slack)
    series = []
    for idx, (q, p0, p1) in enumerate(triangles):
        sub = toponogov_verify(M, q, p0, p1, k, t_samples, rep.tolerance, check_curvature=False)
        for h in sub.hypotheses:
            rep.add_hypothesis(f"triangle {idx}: {h.name}", h.ok, h.slack, h.detail, h.applicable)
        rep.add_check(f"triangle {idx}: min_t d(q,gamma(t)) - d(q_bar,gamma_bar(t))", sub.lhs, sub.rhs,
                      ">=", x=float(idx), equality=eq)
        series.extend([[float(idx)] + row for row in sub.series["distance"]])
    rep.series["distance"] = series
    return rep.finalize()


def _random_point(M, rng):
    if isinstance(M, FlatTorus):
        return M.wrap(rng.uniform(-0.5, 0.5, size=2) * M.periods)
    if isinstance(M, ProjectivePlane):
        v = rng.normal(size=3)
        return M.r * v / np.linalg.norm(v)
    if isinstance(M, SpaceForm):
        if M.k > 0:
            v = rng.normal(size=M.n + 1)
            return M.R * v / np.linalg.norm(v)
        return M.random_point(rng, spread=1.0)
    raise DomainError("random triangles need a closed surface or a space form")


# -- registry --------------------------------------------------------------------------------

@dataclass(frozen=True)
class Verifier:
    fn: object
    params: tuple           # scenario parameter names accepted besides tolerance/equality
    needs: str = "domain"   # domain | space


VERIFIERS = {
    "cut_isoperimetric": Verifier(verify_cut_isoperimetric, ()),
    "superlevel": Verifier(verify_superlevel, ("t_grid",)),
    "tube": Verifier(verify_tube, ("rho_grid",)),
    "inradius": Verifier(verify_inradius, ("lam",)),
    "bishop_gromov": Verifier(verify_bishop_gromov, ("r_grid", "center"), "space"),
    "hkr": Verifier(verify_hkr, ("lam",)),
    "fenchel": Verifier(verify_fenchel, ()),
    "isodiametric": Verifier(verify_isodiametric, ("ambient",)),
    "cheeger": Verifier(verify_cheeger, ("ambient",)),
    "santalo_yanez": Verifier(verify_santalo_yanez, ("radii", "n"), "space"),
    "quermass_ratio": Verifier(verify_quermass_ratio, ("i", "j", "ambient")),
    "weighted": Verifier(verify_weighted, ("phi",)),
    "focal_lower_bound": Verifier(verify_focal_lower_bound, ("Lambda", "cut_equals_focal")),
    "cutlocus_bound": Verifier(verify_cutlocus_bound, ("x0", "ball_radius", "directions"), "space"),
    "toponogov": Verifier(verify_toponogov, ("triangles", "count", "seed", "t_samples"), "space"),
}

THEOREM_IDS = tuple(sorted(VERIFIERS))


def run_verifier(theorem_id: str, m, k: float, params: dict | None = None, *, tolerance=None,
                 equality=None, scenario="") -> VerificationReport:
    """Dispatch by id; engine and domain errors become an ``error`` report."""
    from .errors import IsocompareError
    if theorem_id not in VERIFIERS:
        raise ScenarioError(f"unknown theorem id {theorem_id!r}")
    ver = VERIFIERS[theorem_id]
    params = dict(params or {})
    unknown = set(params) - set(ver.params)
    if unknown:
        raise ScenarioError(f"{theorem_id} does not accept {sorted(unknown)}")
    try:
        return ver.fn(m, k, **params, tolerance=tolerance, equality=equality, scenario=scenario)
    except (IsocompareError, HypothesisViolation, ValueError, FloatingPointError) as exc:
        return VerificationReport.failure(theorem_id, scenario, exc)
