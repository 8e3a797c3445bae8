"""Convexity with respect to F_k = span{c_k, s_k}.

A function phi is F_k-convex on an interval when, for every pair of
abscissae, the unique member of F_k through the two endpoint values lies
above phi in between.  Under the change of variables y = ct_k(t) this is
ordinary convexity of psi(y) = sqrt(k + y^2) phi(ct_k^{-1}(y)), which
gives an independent second test used as a cross-check.

The module also hosts the comparison bound for solutions of
f'' <= -k f and the Toponogov distance comparison.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import accel
from .errors import DomainError, HypothesisViolation, SingularSystemError
from .kernels import CurvatureContext, ck, ct_k, lambda_of_l, sigma, sk
from .reports import VerificationReport

DET_FLOOR = 1e-14
CHORD_SLACK = 1e-9
BOUND_SLACK = 1e-8


@dataclass(frozen=True)
class SampledFunction:
    """Values of a function on a strictly increasing grid."""

    grid: np.ndarray
    values: np.ndarray
    h_max: float | None = None

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape:
            raise ValueError("grid and values must be 1-D arrays of equal length")
        if grid.size < 3:
            raise ValueError("a sampled function needs at least 3 points")
        steps = np.diff(grid)
        if np.any(steps <= 0):
            raise ValueError("grid must be strictly increasing")
        h_max = float(steps.max()) if self.h_max is None else float(self.h_max)
        if steps.max() > h_max * (1 + 1e-12):
            raise ValueError("grid spacing exceeds the declared resolution h_max")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "h_max", h_max)

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.values))))

    @classmethod
    def from_callable(cls, fn, a: float, b: float, num: int = 201) -> "SampledFunction":
        t = np.linspace(a, b, num)
        return cls(t, np.asarray(fn(t), dtype=float))


@dataclass(frozen=True)
class FkChord:
    """h = alpha s_k + beta c_k."""

    k: float
    alpha: float
    beta: float

    def __call__(self, t):
        return self.alpha * sk(self.k, t) + self.beta * ck(self.k, t)


def chord(ctx: CurvatureContext, x1: float, y1: float, x2: float, y2: float) -> FkChord:
    """The member of F_k taking the values y1, y2 at x1 < x2."""
    if not 0.0 <= x1 < x2:
        raise DomainError("chord requires 0 <= x1 < x2")
    s1, c1 = sk(ctx.k, x1), ck(ctx.k, x1)
    s2, c2 = sk(ctx.k, x2), ck(ctx.k, x2)
    det = s1 * c2 - s2 * c1
    if abs(det) < DET_FLOOR:
        raise SingularSystemError(
            f"chord system singular for x2 - x1 = {x2 - x1} (k={ctx.k})")
    alpha = (y1 * c2 - y2 * c1) / det
    beta = (s1 * y2 - s2 * y1) / det
    return FkChord(ctx.k, alpha, beta)


def _check_interval(ctx: CurvatureContext, a: float, b: float, open_left: bool) -> None:
    if a < 0 or (open_left and a <= 0):
        raise DomainError(f"interval [{a}, {b}] must lie in (0, inf)")
    if ctx.k > 0 and (b >= ctx.first_zero if open_left else b - a >= ctx.first_zero):
        raise DomainError(f"interval [{a}, {b}] too long for k={ctx.k}")


def convexify_transform(ctx: CurvatureContext, phi: SampledFunction) -> SampledFunction:
    """psi(y) = sqrt(k + y^2) phi(ct_k^{-1}(y)) sampled at y_i = ct_k(t_i).

    Since k + ct_k^2 = 1/s_k^2, psi(y_i) = phi(t_i) / s_k(t_i).  ct_k is
    decreasing, so the output grid is reversed to increase.
    """
    a, b = phi.interval
    _check_interval(ctx, a, b, open_left=True)
    y = ct_k(ctx, phi.grid)
    psi = phi.values / sk(ctx.k, phi.grid)
    return SampledFunction(y[::-1].copy(), psi[::-1].copy())


@dataclass(frozen=True)
class ConvexityReport:
    ok: bool
    worst_violation: float
    location: float
    slack: float
    singular_pairs: int = 0
    pair: tuple[float, float] | None = None


def _sense_sign(sense: str) -> float:
    if sense == "convex":
        return 1.0
    if sense == "concave":
        return -1.0
    raise ValueError(f"sense must be 'convex' or 'concave', got {sense!r}")


def is_fk_convex(ctx: CurvatureContext, phi: SampledFunction, sense: str = "convex",
                 second_derivative_bound: float = 0.0) -> ConvexityReport:
    """Brute-force chord test over every grid pair.

    ``worst_violation`` is the largest signed amount by which phi crosses a
    chord in the forbidden direction (non-positive means no violation).
    The slack is ``1e-9 * scale`` plus ``second_derivative_bound * h_max**2 / 8``;
    the second term is only needed when the verdict is meant to transfer
    from the samples to the underlying function.
    """
    sign = _sense_sign(sense)
    a, b = phi.interval
    _check_interval(ctx, a, b, open_left=False)
    s = sk(ctx.k, phi.grid)
    c = ck(ctx.k, phi.grid)
    worst, i, j, m, singular = accel.chord_scan(s, c, phi.values, sign, DET_FLOOR)
    slack = CHORD_SLACK * phi.scale + second_derivative_bound * phi.h_max**2 / 8.0
    worst = float(worst) if np.isfinite(worst) else -math.inf
    loc = float(phi.grid[m]) if m >= 0 else math.nan
    pair = (float(phi.grid[i]), float(phi.grid[j])) if i >= 0 else None
    return ConvexityReport(ok=worst <= slack, worst_violation=worst, location=loc,
                           slack=slack, singular_pairs=int(singular), pair=pair)


def transformed_convexity(ctx: CurvatureContext, phi: SampledFunction,
                          sense: str = "convex") -> ConvexityReport:
    """Three-point convexity test of the transformed samples psi."""
    sign = _sense_sign(sense)
    psi = convexify_transform(ctx, phi)
    y, v = psi.grid, psi.values
    w = (y[2:] - y[1:-1]) / (y[2:] - y[:-2])
    interp = w * v[:-2] + (1.0 - w) * v[2:]
    viol = sign * (v[1:-1] - interp)
    idx = int(np.argmax(viol))
    slack = CHORD_SLACK * psi.scale
    # report the location in the original variable
    t_loc = float(phi.grid[::-1][idx + 1])
    return ConvexityReport(ok=float(viol[idx]) <= slack, worst_violation=float(viol[idx]),
                           location=t_loc, slack=slack)


@dataclass(frozen=True)
class ComparisonReport:
    ok: bool
    hypothesis_ok: bool
    worst_gap: float
    location: float
    lam: float
    concavity: ConvexityReport = field(repr=False)


def comparison_bound(ctx: CurvatureContext, f: SampledFunction, l: float | None = None) -> ComparisonReport:
    """Compare f against sigma_{k, lambda_k(l)} on [0, l].

    ``f`` must start at 0 with f(0) = 1 and satisfy f(l) >= 0; the differential
    inequality f'' <= -k f is checked through the concave chord test.
    """
    grid, vals = f.grid, f.values
    if grid[0] != 0.0:
        raise DomainError("comparison_bound needs a grid starting at t = 0")
    l = float(grid[-1]) if l is None else float(l)
    if not abs(vals[0] - 1.0) <= 1e-9:
        raise HypothesisViolation(f"f(0) = {vals[0]} differs from 1")
    f_l = float(np.interp(l, grid, vals))
    if f_l < -1e-9:
        raise HypothesisViolation(f"f(l) = {f_l} is negative")
    concavity = is_fk_convex(ctx, f, "concave")
    lam = lambda_of_l(ctx, l)
    mask = grid <= l * (1 + 1e-12)
    gap = vals[mask] - sigma(ctx.k, lam, grid[mask])
    idx = int(np.argmin(gap))
    worst = float(gap[idx])
    return ComparisonReport(ok=worst >= -BOUND_SLACK * f.scale, hypothesis_ok=concavity.ok,
                            worst_gap=worst, location=float(grid[mask][idx]), lam=float(lam),
                            concavity=concavity)


# --------------------------------------------------------------------------
# Toponogov comparison
# --------------------------------------------------------------------------

def comparison_angle(k: float, a: float, b: float, c: float) -> float:
    """Angle at the apex of the M_k triangle with sides a, b (adjacent) and c.

    Uses the law of cosines in the cancellation-free form
    rho(c) = rho(a) + rho(b) - k rho(a) rho(b) - s(a) s(b) cos(theta).
    """
    from .kernels import rhok

    ra, rb, rc = rhok(k, a), rhok(k, b), rhok(k, c)
    denom = sk(k, a) * sk(k, b)
    cos_t = (ra + rb - k * ra * rb - rc) / denom
    return math.acos(min(1.0, max(-1.0, cos_t)))


def _model_triangle(k: float, a: float, b: float, c: float):
    """Vertices (apex, v0, v1) of a comparison triangle in M_k^2, Newton-refined."""
    from .geometry.spaceform import SpaceForm

    model = SpaceForm(k, 2)
    apex = model.origin()
    e1, e2 = model.tangent_basis(apex)
    v0 = model.exp(apex, a * e1)
    theta = comparison_angle(k, a, b, c)

    def v1_at(th):
        return model.exp(apex, b * (math.cos(th) * e1 + math.sin(th) * e2))

    for _ in range(4):
        resid = float(model.distance(v0, v1_at(theta))) - c
        if abs(resid) < 1e-14 * max(1.0, c):
            break
        dth = 1e-7
        deriv = (float(model.distance(v0, v1_at(theta + dth))) - float(model.distance(v0, v1_at(theta - dth)))) / (2 * dth)
        if deriv == 0.0:
            break
        theta = min(math.pi, max(0.0, theta - resid / deriv))
    return model, apex, v0, v1_at(theta)


def toponogov_verify(manifold, q, p0, p1, k: float, t_samples: int = 50,
                     tolerance: float = 1e-6, check_curvature: bool = True) -> VerificationReport:
    """Compare d(q, gamma(t)) with the model d(q_bar, gamma_bar(t)).

    gamma is the minimal geodesic from p0 to p1.  Samples are the interior
    points t_i = |gamma| i / (t_samples + 1), symmetric under p0 <-> p1, so
    the margin is the same for both labellings.
    """
    from .geometry import engine

    rep = VerificationReport(theorem_id="toponogov", tolerance=tolerance)
    q, p0, p1 = (np.asarray(x, dtype=float) for x in (q, p0, p1))
    a = float(manifold.distance(q, p0))
    b = float(manifold.distance(q, p1))
    gamma = manifold.minimal_geodesic(p0, p1)
    c = gamma.length
    if abs(float(manifold.distance(p0, p1)) - c) > 1e-8 * max(1.0, c):
        raise engine.GeodesicConstructionError("minimal geodesic length disagrees with the distance")
    if check_curvature:
        bounds = engine.curvature_bounds(manifold)
        rep.add_hypothesis("sectional curvature >= k", bounds.sec_lower >= k - 1e-6,
                           bounds.sec_lower - k)
    rep.add_hypothesis("|gamma| <= |gamma0| + |gamma1|", c <= a + b + 1e-12, a + b - c)
    if k > 0:
        rep.add_hypothesis("|gamma| <= pi/sqrt(k)", c <= math.pi / math.sqrt(k), math.pi / math.sqrt(k) - c)
    rep.ingredient("sides", [a, b, c], "manifold distance oracle")

    ts = c * np.arange(1, t_samples + 1) / (t_samples + 1)
    d_actual = np.asarray(manifold.distance(np.broadcast_to(q, (ts.size, q.size)), gamma(ts)))
    if c == 0.0:
        d_model = np.full(ts.shape, a)
    elif a == 0.0:
        d_model = ts.copy()
    elif b == 0.0:
        d_model = c - ts
    else:
        model, apex, v0, v1 = _model_triangle(k, a, b, c)
        u = model.log(v0, v1)
        u = u / model.norm(v0, u)
        pts = model.exp(np.broadcast_to(v0, (ts.size, v0.size)), ts[:, None] * u[None, :])
        d_model = np.asarray(model.distance(np.broadcast_to(apex, pts.shape), pts))
    for t, da, dm in zip(ts, d_actual, d_model):
        rep.add_check("d(q,gamma(t)) >= d(q_bar,gamma_bar(t))", da, dm, ">=", x=float(t))
    rep.series["distance"] = [[float(t), float(da), float(dm)] for t, da, dm in zip(ts, d_actual, d_model)]
    return rep.finalize()
