"""Engine operations on the test-manifold zoo.

Each operation accepts either a built manifold/domain object or a
:class:`~isocompare.geometry.spec.ManifoldSpec` (anything with ``build``).
Expensive results are cached on the domain object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.integrate import solve_ivp

from ..errors import (ChartExitError, DomainError, IsocompareError, NonConvergenceError,
                      OracleResolutionError, ResolutionError)
from ..quadrature import richardson_check
from . import curvature as _curv
from .boundary import BoundarySet
from .closed import FlatTorus, ProjectivePlane
from .domains import Resolution, TorusHoleDomain
from .meshes import mesh_for
from .spaceform import SpaceForm
from .transport import JacobianTransport, riccati_transport

BISECTION_DEPTH = 40
CUT_DELTA = 1e-11           # relative to scale; the distance oracles are polished to ~1e-15
FOCAL_EPS = 1e-6            # relative to scale
CUT_FOCAL_TOL = 1e-6        # relative to scale; cut <= focal up to this slack
MEASURE_TARGET = 1e-6
GEODESIC_RTOL = 1e-10


class GeodesicConstructionError(IsocompareError):
    """A minimal geodesic could not be constructed to tolerance."""


def resolve(m):
    """Accept a ManifoldSpec or an already built object."""
    build = getattr(m, "build", None)
    return build() if callable(build) else m


def _cache(obj, key, fn):
    cached = getattr(obj, "cached", None)
    if cached is not None:
        return cached(key, fn)
    store = obj.__dict__.setdefault("_engine_cache", {})
    if key not in store:
        store[key] = fn()
    return store[key]


# -- geodesics ------------------------------------------------------------------

@dataclass
class GeodesicPath:
    t: np.ndarray
    y: np.ndarray            # (T, n) chart positions
    ydot: np.ndarray         # (T, n) chart velocities
    endpoint: np.ndarray
    speed_drift: float
    clairaut_drift: float | None = None


def _chart_valid(m, y) -> bool:
    if not np.all(np.isfinite(y)):
        return False
    if isinstance(m, (SpaceForm, ProjectivePlane)) or isinstance(getattr(m, "space", None), SpaceForm):
        space = m.sphere if isinstance(m, ProjectivePlane) else getattr(m, "space", m)
        if space.k > 0:
            return float(y @ y) < 1e8
        if space.k < 0:
            return float(y @ y) * abs(space.k) < 1.0
    return True


def geodesic(m, x, v, T: float, samples: int = 201) -> GeodesicPath:
    """Unit-speed geodesic in chart coordinates from chart point x, direction v."""
    m = resolve(m)
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    g0 = m.chart_metric(x)
    speed = math.sqrt(float(v @ g0 @ v))
    if speed == 0:
        raise DomainError("geodesic needs a non-zero initial velocity")
    v = v / speed
    n = x.size

    def rhs(_, z):
        y, p = z[:n], z[n:]
        if not _chart_valid(m, y):
            raise ChartExitError(f"geodesic left the chart at y={y}")
        gam = m.christoffel(y)
        return np.concatenate([p, -np.einsum("ijk,j,k->i", gam, p, p)])

    ts = np.linspace(0.0, float(T), samples)
    sol = solve_ivp(rhs, (0.0, float(T)), np.concatenate([x, v]), method="DOP853",
                    rtol=GEODESIC_RTOL, atol=1e-12, t_eval=ts)
    if sol.status < 0:
        raise ChartExitError(sol.message)
    y, p = sol.y[:n].T, sol.y[n:].T
    speeds = np.array([math.sqrt(float(pi @ m.chart_metric(yi) @ pi)) for yi, pi in zip(y, p)])
    end = y[-1]
    if isinstance(m, FlatTorus):
        end = m.wrap(end)
    elif isinstance(m, TorusHoleDomain):
        end = m.torus.wrap(end)
    clairaut = None
    if hasattr(m, "g") and getattr(m, "kind", "") == "SurfaceOfRevolution":
        c = m.g(y[:, 0]) ** 2 * p[:, 1]
        clairaut = float(np.max(np.abs(c - c[0])))
    return GeodesicPath(sol.t, y, p, end, float(np.max(np.abs(speeds - 1.0))), clairaut)


# -- curvature and measures -------------------------------------------------------

def curvature_bounds(m, points=None) -> _curv.CurvatureBounds:
    m = resolve(m)
    if points is not None:
        return _curv.sample_bounds(m.chart_metric, points)
    return _cache(m, ("curvature",), lambda: _curv.sample_bounds(
        m.chart_metric, m.curvature_sample_points()))


@dataclass
class Measures:
    volume: float
    boundary_area: float
    volume_refined: float
    area_refined: float
    rel_change: float
    converged: bool


def measures(m, resolution: Resolution | None = None) -> Measures:
    """Volume and boundary area with a panel-doubling convergence check."""
    m = resolve(m)
    if not getattr(m, "has_boundary", False):
        vol = float(m.volume())
        return Measures(vol, 0.0, vol, 0.0, 0.0, True)
    res = m.res(resolution)
    fine = res.refined(m.n)
    v0, v1 = m.volume(res), m.volume(fine)
    a0, a1 = boundary_geometry(m, res).area, boundary_geometry(m, fine).area
    rv, okv = richardson_check(v0, v1, MEASURE_TARGET)
    ra, oka = richardson_check(a0, a1, MEASURE_TARGET)
    rel = max(rv, ra)
    if rel > 10 * MEASURE_TARGET:
        raise NonConvergenceError(f"panel doubling changed the measures by {rel:.3g}")
    return Measures(v1, a1, v1, a1, rel, okv and oka)


# -- boundary, cut and focal distances ---------------------------------------------

def boundary_geometry(m, resolution: Resolution | None = None) -> BoundarySet:
    m = resolve(m)
    return m.boundary(resolution)


def _cut_delta(m) -> float:
    return CUT_DELTA * m.scale


def cut_distance(m, bset: BoundarySet | None = None) -> np.ndarray:
    """c(p) for every sample by bisection on d(exp_p(tN), boundary) >= t - delta."""
    m = resolve(m)
    if bset is None:
        bset = m.boundary()
    P, N = bset.points, bset.normals
    delta = _cut_delta(m)
    horizon = float(m.cut_horizon())

    def holds(t):
        return m.distance_to_boundary(m.normal_point(P, N, t)) >= t - delta

    lo = np.zeros(len(P))
    hi = np.full(len(P), horizon)
    beyond = holds(hi)
    for _ in range(BISECTION_DEPTH):
        mid = 0.5 * (lo + hi)
        ok = holds(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    cut = 0.5 * (lo + hi)
    cut[beyond] = math.inf
    return cut


def exp_normal(m, bset: BoundarySet | None = None, t_max: float | None = None) -> JacobianTransport:
    """Riccati transport of density and mean curvature along the inward normals."""
    m = resolve(m)
    if bset is None:
        bset = m.boundary()
    if t_max is None:
        t_max = 2.0 * float(m.cut_horizon())
    P, N = bset.points, bset.normals
    return riccati_transport(bset.kappa, lambda t: m.normal_sectional(P, N, np.full(len(P), t)),
                             t_max, FOCAL_EPS * m.scale)


def focal_distance(m, bset: BoundarySet | None = None, t_max: float | None = None) -> np.ndarray:
    """First blow-up of the parallel shape operator; inf past the horizon."""
    return exp_normal(m, bset, t_max).focal


def boundary_samples(m, resolution: Resolution | None = None) -> BoundarySet:
    """Boundary quadrature nodes with cut and focal distances filled in."""
    m = resolve(m)
    res = m.res(resolution)

    def build():
        b = m.boundary(res)
        full = BoundarySet(b.points, b.normals, b.kappa, b.weights, b.params, b.component,
                           extra=dict(b.extra))
        full.cut = cut_distance(m, b)
        full.focal = focal_distance(m, b)
        return full

    return m.cached(("samples", res), build)


def normal_width(m, bset: BoundarySet | None = None, steps: int = 400) -> np.ndarray:
    """First re-entry time of the inward normal geodesic into the boundary."""
    m = resolve(m)
    if bset is None:
        bset = m.boundary()
    P, N = bset.points, bset.normals
    horizon = float(m.cut_horizon())
    ts = np.linspace(0.0, horizon, steps + 1)[1:]
    out = np.full(len(P), math.inf)
    prev_in = np.ones(len(P), dtype=bool)
    for t in ts:
        now_in = m.inside(m.normal_point(P, N, np.full(len(P), t)))
        hit = prev_in & ~now_in & np.isinf(out)
        out[hit] = t
        prev_in = now_in
    return out


# -- distance field ------------------------------------------------------------------

def distance_to_boundary_field(m, points) -> np.ndarray:
    m = resolve(m)
    return m.distance_to_boundary(np.atleast_2d(np.asarray(points, dtype=float)))


def sublevel_volume(m, rho: float, resolution: Resolution | None = None) -> float:
    m = resolve(m)
    if rho < 0:
        raise DomainError("rho must be non-negative")
    return m.sublevel_volume(float(rho), resolution)


def inradius(m, resolution: Resolution | None = None):
    m = resolve(m)
    return m.inradius(resolution)


# -- extrinsic radii ------------------------------------------------------------------

@dataclass
class ExtrinsicRadius:
    rad: float
    avrad: float
    center: np.ndarray
    avrad_center: np.ndarray
    converged: bool
    within_injectivity: bool
    seeds: int = 9


def extrinsic_radius(ambient, domain) -> ExtrinsicRadius:
    """rad by minimax over centres, avrad by minimising the mean boundary distance."""
    domain = resolve(domain)
    if ambient is None:
        ambient = getattr(domain, "ambient", None)
    ambient = resolve(ambient)
    if ambient is None or not hasattr(domain, "boundary_cloud"):
        raise DomainError(f"{domain.kind} has no ambient space with a distance oracle")

    def compute():
        o = domain.center
        E = ambient.tangent_basis(o)
        n = E.shape[0]
        cloud = domain.boundary_cloud()
        b = domain.boundary()
        w = b.weights / b.weights.sum()
        pts = b.points

        def centre(y):
            return ambient.exp(o, np.asarray(y) @ E)

        farthest = getattr(domain, "farthest", None)

        def f_rad(y):
            if farthest is not None:
                return float(farthest(centre(y))[0])
            return float(np.max(ambient.distance(cloud, centre(y))))

        def f_av(y):
            return float(np.dot(w, ambient.distance(pts, centre(y))))

        s = 0.25 * domain.scale
        if n == 2:
            ang = 2 * math.pi * np.arange(8) / 8
            pert = np.column_stack([np.cos(ang), np.sin(ang)])
        else:
            pert = np.array([[i, j, l] for i in (-1, 1) for j in (-1, 1) for l in (-1, 1)]) / math.sqrt(3)
        seeds = np.vstack([np.zeros(n), s * pert])
        opts = {"xatol": 1e-11 * domain.scale, "fatol": 1e-14, "maxiter": 4000}
        best = {}
        conv = True
        for name, f in (("rad", f_rad), ("avrad", f_av)):
            results = [optimize.minimize(f, y0, method="Nelder-Mead", options=opts) for y0 in seeds]
            top = min(results, key=lambda r: r.fun)
            conv &= bool(top.success)
            best[name] = (float(top.fun), centre(top.x))
        rad, c_rad = best["rad"]
        avrad, c_av = best["avrad"]
        return ExtrinsicRadius(rad, avrad, c_rad, c_av, conv,
                               rad < float(ambient.inj_radius), len(seeds))

    return _cache(domain, ("extrinsic", id(ambient)), compute)


# -- cut locus of a point -------------------------------------------------------------

@dataclass
class CutLocus:
    x0: np.ndarray
    theta: np.ndarray
    rho: np.ndarray
    points: np.ndarray
    chart: np.ndarray         # normal coordinates t (cos theta, sin theta)
    measure: float
    rad: float
    max_gap: float
    tolerance: float
    measure_error: float = math.nan
    mesh_discrepancy: float = math.nan
    mesh_delta: float = math.nan
    notes: list = field(default_factory=list)

    @property
    def curves(self):
        return [np.vstack([self.chart, self.chart[:1]])]

    def rows(self):
        for i, (t, (cx, cy)) in enumerate(zip(self.rho, self.chart)):
            yield i, float(t), float(cx), float(cy)


def point_cut_locus(m, x0=None, directions: int = 2048, mesh_check: bool = True,
                    mesh_samples: int = 64) -> CutLocus:
    """Cut locus of x0 on a closed surface by first failure of minimality per direction."""
    m = resolve(m)
    if not isinstance(m, (FlatTorus, ProjectivePlane)) and not (
            isinstance(m, SpaceForm) and m.k > 0 and m.n == 2):
        raise DomainError("point cut loci are available on the flat torus, RP^2 and S^2")
    if directions < 8:
        raise ResolutionError("need at least 8 directions")
    x0 = m.origin() if x0 is None else np.asarray(x0, dtype=float)
    if isinstance(m, FlatTorus):
        x0 = m.wrap(x0)
    else:
        sphere = m.sphere if isinstance(m, ProjectivePlane) else m
        x0 = sphere.R * x0 / math.sqrt(float(np.dot(x0, x0)))
    E = m.tangent_basis(x0)
    theta = 2.0 * math.pi * np.arange(directions) / directions
    V = np.column_stack([np.cos(theta), np.sin(theta)]) @ E
    X0 = np.broadcast_to(x0, V.shape)
    scale = float(m.diameter)
    delta = 1e-9 * scale
    horizon = 1.05 * scale

    def holds(t):
        return np.asarray(m.distance(X0, m.exp(X0, t[:, None] * V))) >= t - delta

    lo, hi = np.zeros(directions), np.full(directions, horizon)
    if np.any(holds(hi)):
        raise ResolutionError("some geodesic from x0 stays minimising up to the horizon")
    for _ in range(BISECTION_DEPTH):
        mid = 0.5 * (lo + hi)
        ok = holds(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    rho = 0.5 * (lo + hi)
    pts = m.exp(X0, rho[:, None] * V)
    gaps = np.asarray(m.distance(pts, np.roll(pts, -1, axis=0)))
    tol = 4.0 * scale * 2.0 * math.pi / directions
    if gaps.max() > tol:
        raise ResolutionError(f"adjacent cut points {gaps.max():.3g} apart exceed tolerance {tol:.3g}")
    # generic cut points are reached from two directions, so the closed
    # polyline through the direction grid traverses the cut locus twice
    measure = 0.5 * float(gaps.sum())
    # the same polyline on every other direction estimates the discretisation error
    coarse = 0.5 * float(np.sum(m.distance(pts[::2], np.roll(pts[::2], -1, axis=0))))
    error = max(abs(measure - coarse), 1e-12 * scale)
    chart = rho[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])
    locus = CutLocus(x0, theta, rho, pts, chart, measure, float(rho.max()), float(gaps.max()), tol,
                     error)
    if mesh_check:
        _mesh_cross_check(m, locus, mesh_samples)
    return locus


def _mesh_cross_check(m, locus: CutLocus, samples: int):
    mesh = _cache(m, ("mesh",), lambda: mesh_for(m))
    idx = np.linspace(0, len(locus.rho) - 1, samples).astype(int)
    exact = locus.rho[idx]
    upper = mesh.upper_bound(m, locus.x0, locus.points[idx])
    delta = max(1e-4 * float(m.diameter), 3.0 * mesh.edge_length)
    below = float(np.max(exact - upper))
    above = float(np.max(upper - exact))
    locus.mesh_discrepancy = above
    locus.mesh_delta = delta
    if below > 1e-8 * float(m.diameter) or above > delta:
        raise OracleResolutionError(
            f"cut distances disagree with mesh distances (excess {above:.3g}, deficit {below:.3g})")
