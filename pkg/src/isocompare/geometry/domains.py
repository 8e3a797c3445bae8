"""Compact domains with boundary in the test-manifold zoo.

Every domain exposes the same small surface used by the engine:

* ``boundary(res)`` -> :class:`BoundarySet` of quadrature nodes,
* ``distance_to_boundary(points)``: the global distance oracle,
* ``normal_point(P, N, t)`` and ``normal_sectional(P, N, t)`` along the
  inward normal geodesics,
* volume and the distance-field integrals (sublevel volume, weighted
  volume, inradius),
* a chart metric plus sample points for curvature checks.
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass, replace

import numpy as np

from .. import accel
from ..errors import DomainError
from ..kernels import ck, rhok, sk, unit_sphere_area
from ..quadrature import panel_rule
from .boundary import BoundarySet, EmbeddedComponent
from .shapes import Shape, shape_to_dict
from .spaceform import SpaceForm

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Resolution:
    """Sample counts; ``None`` picks a dimension-dependent default."""

    panels: int | None = None       # angular boundary panels (azimuthal when n = 3)
    order: int = 8                  # Gauss-Legendre order per panel
    cloud: int | None = None        # foot-point cloud size per boundary component
    radial_panels: int = 8          # panels along each ray for interior integrals
    ray_samples: int = 48           # sign-change search points along a ray
    directions: int = 2048          # direction grid for point cut loci

    def boundary_panels(self, n: int) -> int:
        return self.panels if self.panels is not None else (16 if n == 2 else 8)

    def cloud_count(self, n: int) -> int:
        return self.cloud if self.cloud is not None else (8192 if n == 2 else 20000)

    def refined(self, n: int) -> "Resolution":
        return replace(self, panels=2 * self.boundary_panels(n),
                       radial_panels=2 * self.radial_panels)

    def validate(self):
        for name in ("order", "radial_panels", "ray_samples", "directions"):
            if getattr(self, name) <= 0:
                raise DomainError(f"resolution field {name!r} must be positive")
        for name in ("panels", "cloud"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise DomainError(f"resolution field {name!r} must be positive")
        return self


# -- direction rules on the unit sphere of T_o -------------------------------

def omega_of_u(u: np.ndarray) -> np.ndarray:
    """Unit vectors from polar parameters: theta (n=2) or (theta, phi) (n=3)."""
    u = np.asarray(u, dtype=float)
    if u.shape[1] == 1:
        return np.column_stack([np.cos(u[:, 0]), np.sin(u[:, 0])])
    th, ph = u[:, 0], u[:, 1]
    st = np.sin(th)
    return np.column_stack([st * np.cos(ph), st * np.sin(ph), np.cos(th)])


def direction_box(n: int):
    if n == 2:
        return [(0.0, TWO_PI)], [True]
    if n == 3:
        return [(0.0, math.pi), (0.0, TWO_PI)], [False, True]
    raise DomainError("the engine supports dimensions 2 and 3")


def direction_rule(n: int, panels: int, order: int, breakpoints=()):
    """Parameters u, parameter weights and unit-sphere weights of a product rule."""
    if n == 2:
        th, w = panel_rule(0.0, TWO_PI, panels, order, breakpoints)
        return th[:, None], w, w
    th, wt = panel_rule(0.0, math.pi, max(2, panels // 2), order)
    ph, wp = panel_rule(0.0, TWO_PI, panels, order)
    T, P = np.meshgrid(th, ph, indexing="ij")
    WT, WP = np.meshgrid(wt, wp, indexing="ij")
    u = np.column_stack([T.ravel(), P.ravel()])
    w = (WT * WP).ravel()
    return u, w, w * np.sin(u[:, 0])


def power_primitive(k: float, n: int, t):
    """int_0^t s_k^{n-1}, cancellation-free for n = 2, 3."""
    t = np.asarray(t, dtype=float)
    if n == 2:
        return np.asarray(rhok(k, t))
    if n != 3:
        raise DomainError("closed-form radial primitive only for n = 2, 3")
    x = k * t * t
    small = np.abs(x) < 1e-3
    out = np.empty_like(t)
    ts = t[small]
    xs = x[small]
    out[small] = ts ** 3 * (1.0 / 3.0 - xs / 15.0 + 2.0 * xs ** 2 / 315.0 - xs ** 3 / 2835.0)
    big = ~small
    if k == 0:
        out[big] = t[big] ** 3 / 3.0
    elif k > 0:
        a = math.sqrt(k)
        z = 2.0 * a * t[big]
        out[big] = (z - np.sin(z)) / (4.0 * a ** 3)
    else:
        a = math.sqrt(-k)
        z = 2.0 * a * t[big]
        out[big] = (np.sinh(z) - z) / (4.0 * a ** 3)
    return out


# -- foot-point oracle ---------------------------------------------------------

class FootPointOracle:
    """Distance to a union of embedded boundary components.

    A dense cloud gives the starting foot point (compiled nearest-neighbour
    scan); a vectorised compass search in parameter space then polishes it.
    The error after polishing is quadratic in the parameter tolerance.  When
    two basins of one component nearly tie, the polished basin can be the
    wrong one; the excess is then below the cloud error (spacing^2 / 8d).
    """

    PARAM_TOL = 1e-10

    def __init__(self, components, distance, metric_code: int, count: int):
        self.components = components
        self.distance = distance
        self.metric = metric_code
        clouds, params = [], []
        for comp in components:
            u = comp.cloud_params(count)
            clouds.append(comp.embed(u))
            params.append(u)
        self.cloud = np.ascontiguousarray(np.concatenate(clouds))
        self.params = params
        self.offsets = np.cumsum([0] + [len(u) for u in params])
        self.spacing = [comp.cloud_spacing(count) for comp in components]

    def query(self, x, return_foot: bool = False):
        """Distance to the boundary; every component is searched and polished separately."""
        x = np.atleast_2d(np.asarray(x, dtype=float))
        dist = np.full(len(x), np.inf)
        foot = np.empty((len(x), self.cloud.shape[1])) if return_foot else None
        for ci, comp in enumerate(self.components):
            lo, hi = self.offsets[ci], self.offsets[ci + 1]
            idx, _ = accel.nearest_points(x, self.cloud[lo:hi], self.metric)
            d, X = self._compass(comp, x, self.params[ci][idx], float(np.max(self.spacing[ci])))
            closer = d < dist
            dist[closer] = d[closer]
            if return_foot:
                foot[closer] = X[closer]
        return (dist, foot) if return_foot else dist

    @staticmethod
    def _local_chart(comp, u0):
        """Map local offsets a (Q, d) to boundary points near the start parameters."""
        if comp.dim == 1 or getattr(comp, "embed_omega", None) is None:
            return lambda a, rows: comp.embed(comp.wrap(u0[rows] + a))
        # gnomonic chart around the start direction: no pole singularity
        om0 = omega_of_u(u0)
        helper = np.where(np.abs(om0[:, :1]) < 0.9, np.array([[1.0, 0, 0]]), np.array([[0, 1.0, 0]]))
        e1 = np.cross(om0, helper)
        e1 /= np.linalg.norm(e1, axis=1, keepdims=True)
        e2 = np.cross(om0, e1)

        def embed(a, rows):
            om = om0[rows] + a[:, :1] * e1[rows] + a[:, 1:2] * e2[rows]
            return comp.embed_omega(om / np.linalg.norm(om, axis=1, keepdims=True))
        return embed

    def _compass(self, comp, x, u0, spacing):
        dim = comp.dim
        if dim == 1:
            dirs = np.array([[1.0], [-1.0]])
        else:
            dirs = np.array([[1, 0], [-1, 0], [0, 1], [0, -1],
                             [1, 1], [1, -1], [-1, 1], [-1, -1]], dtype=float)
        chart = self._local_chart(comp, comp.wrap(u0))
        a = np.zeros((len(x), dim))
        active = np.arange(len(x))
        X = chart(a, active)
        f = self.distance(x, X)
        step = np.full(len(x), spacing)
        for _ in range(400):
            if active.size == 0:
                break
            aa, fa, sa, xa = a[active], f[active], step[active], x[active]
            best_a, best_f, best_X = aa.copy(), fa.copy(), X[active].copy()
            for dvec in dirs:
                cand = aa + dvec * sa[:, None]
                Xc = chart(cand, active)
                fc = self.distance(xa, Xc)
                better = fc < best_f
                best_f[better] = fc[better]
                best_a[better] = cand[better]
                best_X[better] = Xc[better]
            # improvements at roundoff level count as stalls so flat regions terminate
            moved = best_f < fa - 1e-13 * (1.0 + fa)
            sa = np.where(moved, sa, 0.5 * sa)
            a[active], f[active], X[active], step[active] = best_a, best_f, best_X, sa
            active = active[sa > self.PARAM_TOL]
        return f, X


# -- base classes --------------------------------------------------------------

class Domain:
    """Common plumbing: resolution, per-domain cache, lock."""

    kind = "Domain"
    n = 2
    has_boundary = True

    def __init__(self, resolution: Resolution | None = None):
        self.resolution = (resolution or Resolution()).validate()
        self._cache = {}
        self._lock = threading.RLock()

    def cached(self, key, fn):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = fn()
            return self._cache[key]

    def res(self, resolution=None) -> Resolution:
        return resolution or self.resolution

    # hooks with defaults
    def christoffel(self, y):
        from .curvature import christoffel
        return christoffel(self.chart_metric, y)


class PolarDomain(Domain):
    """{exp_o(t omega): R_in(omega) <= t <= R_out(omega)} in geodesic polar coordinates."""

    INRADIUS_SEEDS = 8192

    def direction_breakpoints(self):
        return ()

    def limits(self, omega):
        raise NotImplementedError

    def point(self, omega, t):
        raise NotImplementedError

    def density(self, t):
        raise NotImplementedError

    def primitive(self, t):
        raise NotImplementedError

    def _directions(self, resolution=None):
        res = self.res(resolution)
        u, _, w_sphere = direction_rule(self.n, res.boundary_panels(self.n), res.order,
                                        self.direction_breakpoints())
        return omega_of_u(u), w_sphere

    def volume(self, resolution=None) -> float:
        omega, w = self._directions(resolution)
        rin, rout = self.limits(omega)
        return float(np.dot(w, self.primitive(rout) - self.primitive(rin)))

    def polar_sphere_area(self, t: float, resolution=None) -> float:
        """Area of the geodesic sphere of radius t about the polar centre."""
        _, w = self._directions(resolution)
        return float(np.sum(w) * self.density(np.asarray(float(t))))

    def interior_rule(self, resolution=None):
        """Nodes, volume weights, direction index and radius of a polar product rule."""
        res = self.res(resolution)

        def build():
            omega, w = self._directions(res)
            rin, rout = self.limits(omega)
            x0, w0 = np.polynomial.legendre.leggauss(res.order)
            P = res.radial_panels
            cuts = np.linspace(0.0, 1.0, P + 1)
            mid = 0.5 * (cuts[1:] + cuts[:-1])
            half = 0.5 * (cuts[1:] - cuts[:-1])
            s = (mid[:, None] + half[:, None] * x0[None, :]).ravel()
            ws = (half[:, None] * w0[None, :]).ravel()
            span = (rout - rin)[:, None]
            t = rin[:, None] + span * s[None, :]
            wt = w[:, None] * span * ws[None, :] * self.density(t)
            dirs = np.repeat(np.arange(len(omega)), s.size)
            pts = self.point(np.repeat(omega, s.size, axis=0), t.ravel())
            return pts, wt.ravel(), dirs, t.ravel()

        return self.cached(("interior", res), build)

    def distance_field(self, resolution=None):
        res = self.res(resolution)
        return self.cached(("field", res),
                           lambda: self.distance_to_boundary(self.interior_rule(res)[0]))

    def weighted_volume(self, phi, resolution=None) -> float:
        _, w, _, _ = self.interior_rule(resolution)
        rho = self.distance_field(resolution)
        return float(np.dot(w, phi(rho)))

    def sublevel_volume(self, rho: float, resolution=None) -> float:
        """Vol{x : d(x, boundary) <= rho} from sign changes along every ray."""
        res = self.res(resolution)
        omega, w = self._directions(res)
        rin, rout = self.limits(omega)
        M = res.ray_samples
        s = np.linspace(0.0, 1.0, M)
        t = rin[:, None] + (rout - rin)[:, None] * s[None, :]
        key = ("ray", res)
        field = self.cached(key, lambda: self.distance_to_boundary(
            self.point(np.repeat(omega, M, axis=0), t.ravel())).reshape(t.shape))
        g = field - rho
        total = np.zeros(len(omega))
        for j in range(M - 1):
            a, b = t[:, j], t[:, j + 1]
            ga, gb = g[:, j], g[:, j + 1]
            cross = (ga <= 0) != (gb <= 0)
            root = b.copy()
            if np.any(cross):
                idx = np.nonzero(cross)[0]
                root[idx] = self._ray_root(omega[idx], a[idx], b[idx], ga[idx], rho)
            lo_in = ga <= 0
            # inside part of [a, b]: [a, root] if lo_in else [root, b]
            seg_lo = np.where(lo_in, a, np.where(cross, root, b))
            seg_hi = np.where(lo_in, np.where(cross, root, b), b)
            total += self.primitive(seg_hi) - self.primitive(seg_lo)
        return float(np.dot(w, total))

    def _ray_root(self, omega, a, b, ga, rho, max_iter: int = 60):
        """Crossing of d(x, boundary) = rho on [a, b] by the Illinois variant of regula falsi."""
        tol = 1e-13 * self.scale
        lo, hi = a.copy(), b.copy()
        flo = ga.copy()
        fhi = self.distance_to_boundary(self.point(omega, hi)) - rho
        side = np.zeros(len(lo), dtype=int)
        root = 0.5 * (lo + hi)
        active = np.abs(hi - lo) > tol
        for _ in range(max_iter):
            idx = np.nonzero(active)[0]
            if idx.size == 0:
                break
            denom = fhi[idx] - flo[idx]
            safe = np.where(denom != 0, denom, 1.0)
            mid = np.where(denom != 0, hi[idx] - fhi[idx] * (hi[idx] - lo[idx]) / safe,
                           0.5 * (lo[idx] + hi[idx]))
            mid = np.clip(mid, np.minimum(lo[idx], hi[idx]), np.maximum(lo[idx], hi[idx]))
            fm = self.distance_to_boundary(self.point(omega[idx], mid)) - rho
            root[idx] = mid
            same = (fm <= 0) == (flo[idx] <= 0)
            # replace the endpoint on fm's side; halve the stale one after two same-side steps
            lo[idx] = np.where(same, mid, lo[idx])
            flo[idx] = np.where(same, fm, flo[idx])
            hi[idx] = np.where(same, hi[idx], mid)
            fhi[idx] = np.where(same, fhi[idx], fm)
            stale = np.where(same, side[idx] == 1, side[idx] == -1)
            fhi[idx] = np.where(same & stale, 0.5 * fhi[idx], fhi[idx])
            flo[idx] = np.where(~same & stale, 0.5 * flo[idx], flo[idx])
            side[idx] = np.where(same, 1, -1)
            active[idx] = (np.abs(hi[idx] - lo[idx]) > tol) & (fm != 0)
        return root

    def inradius(self, resolution=None):
        """max d(x, boundary): best interior seeds, then a batched pattern search.

        Each step evaluates the whole 3^n - 1 stencil in one oracle call and
        halves when no neighbour improves.  The maximum may be a cone point
        (balls), so the search runs down to 1e-12 * scale.
        """
        pts, _, dirs, t = self.interior_rule(resolution)
        stride = max(1, len(pts) // self.INRADIUS_SEEDS)
        omega_all, _ = self._directions(resolution)
        Y = omega_all[dirs[::stride]] * t[::stride, None]
        seed_vals = self._field_at(Y)
        stencil = np.array([v for v in itertools.product((-1.0, 0.0, 1.0), repeat=self.n) if any(v)])
        floor = 1e-12 * self.scale
        best_val, best_y = -np.inf, None
        for s0 in np.argsort(seed_vals)[::-1][:3]:
            y, val = Y[s0], float(seed_vals[s0])
            step = 2.0 * self.scale / max(self.res(resolution).radial_panels, 1)
            while step > floor:
                cand = y[None, :] + step * stencil
                vals = self._field_at(cand)
                k = int(np.argmax(vals))
                if vals[k] > val:
                    y, val = cand[k], float(vals[k])
                else:
                    step *= 0.5
            if val > best_val:
                best_val, best_y = val, y
        return best_val, self._point_of(best_y)

    def _point_of(self, y):
        r = float(np.linalg.norm(y))
        om = y / r if r > 0 else np.eye(self.n)[0]
        return self.point(om[None, :], np.array([r]))[0]

    def _field_at(self, Y):
        """Distance to the boundary at normal coordinates Y; -inf outside the domain."""
        r = np.linalg.norm(Y, axis=1)
        om = np.where(r[:, None] > 0, Y / np.where(r > 0, r, 1.0)[:, None], np.eye(self.n)[0])
        rin, rout = self.limits(om)
        ok = (rin <= r) & (r <= rout)
        out = np.full(len(Y), -np.inf)
        if np.any(ok):
            out[ok] = self.distance_to_boundary(self.point(om[ok], r[ok]))
        return out


# -- radial domains in a model space -------------------------------------------

class RadialDomain(PolarDomain):
    """A star-shaped (or annular) domain centred at the origin of M_k^n."""

    def __init__(self, space: SpaceForm, outer: Shape, inner: Shape | None = None,
                 kind: str = "EuclideanDomain", resolution: Resolution | None = None):
        super().__init__(resolution)
        if space.n not in (2, 3):
            raise DomainError("the engine supports dimensions 2 and 3")
        outer.check_dim(space.n)
        if inner is not None:
            inner.check_dim(space.n)
        self.space = space
        self.n = space.n
        self.k = space.k
        self.outer, self.inner = outer, inner
        self.kind = kind
        if self.k > 0 and outer.max_radius() >= math.pi / math.sqrt(self.k):
            raise DomainError("domain radius must stay below pi/sqrt(k)")
        self.o = space.origin()
        self.E = space.tangent_basis(self.o)
        box, periodic = direction_box(self.n)
        self.components = [self._component(outer, +1.0, box, periodic)]
        if inner is not None:
            self.components.append(self._component(inner, -1.0, box, periodic))

    def __repr__(self):
        return f"{self.kind}(k={self.k}, n={self.n}, shape={shape_to_dict(self.outer, self.inner)})"

    def to_dict(self):
        d = {"kind": self.kind, "k": self.k, "n": self.n}
        if self.kind == "ModelBall":
            d["radius"] = self.outer.r
        else:
            d["shape"] = shape_to_dict(self.outer, self.inner)
        return d

    @property
    def ambient(self):
        return self.space

    @property
    def center(self):
        return self.o

    @property
    def scale(self) -> float:
        return self.outer.max_radius()

    def _component(self, shape, orientation, box, periodic):
        def embed(u):
            om = omega_of_u(u)
            return self.point(om, shape.radius(om))

        def outward(u):
            om = omega_of_u(u)
            return orientation * self.space.velocity(self.o, om @ self.E, shape.radius(om))

        bps = [shape.corners()] + [()] * (len(box) - 1)
        comp = EmbeddedComponent(embed, outward, self.space._sign, self.k != 0, box, periodic, bps)
        comp.embed_omega = lambda om: self.point(om, shape.radius(om))
        return comp

    # polar structure
    def direction_breakpoints(self):
        return self.outer.corners()

    def limits(self, omega):
        rout = self.outer.radius(omega)
        rin = self.inner.radius(omega) if self.inner is not None else np.zeros(len(omega))
        return rin, rout

    def point(self, omega, t):
        v = np.asarray(omega) @ self.E
        t = np.asarray(t, dtype=float)
        if self.k == 0:
            return self.o + t[:, None] * v
        return (np.asarray(ck(self.k, t))[:, None] * self.o
                + np.asarray(sk(self.k, t))[:, None] * v)

    def density(self, t):
        return np.asarray(sk(self.k, t)) ** (self.n - 1)

    def primitive(self, t):
        return power_primitive(self.k, self.n, t)

    def polar_coordinates(self, x):
        v = self.space.log(self.o, x)
        coords = np.stack([self.space.inner(v, e) for e in self.E], axis=-1)
        t = np.linalg.norm(coords, axis=-1)
        return coords / np.where(t > 0, t, 1.0)[..., None], t

    def inside(self, x, slack: float = 0.0):
        om, t = self.polar_coordinates(np.atleast_2d(x))
        rin, rout = self.limits(om)
        return (t <= rout + slack) & (t >= rin - slack)

    # boundary
    def boundary(self, resolution=None) -> BoundarySet:
        res = self.res(resolution)
        return self.cached(("boundary", res), lambda: self._boundary(res))

    def _boundary(self, res):
        parts = []
        for ci, comp in enumerate(self.components):
            u, w_param, _ = direction_rule(self.n, res.boundary_panels(self.n), res.order,
                                           comp.breakpoints[0])
            X, N, kappa, sdet = comp.geometry(u)
            parts.append((X, N, kappa, w_param * sdet, u, np.full(len(u), ci)))
        cat = [np.concatenate(z) for z in zip(*parts)]
        return BoundarySet(*cat)

    def boundary_cloud(self, resolution=None):
        """Dense boundary points including every corner (for extrinsic radii)."""
        res = self.res(resolution)
        pts = [comp.embed(comp.cloud_params(res.cloud_count(self.n))) for comp in self.components]
        return np.concatenate(pts)

    def oracle(self, resolution=None) -> FootPointOracle:
        res = self.res(resolution)
        code = 0 if self.k == 0 else (1 if self.k > 0 else 2)
        return self.cached(("oracle", res.cloud_count(self.n)), lambda: FootPointOracle(
            self.components, self.space.distance, code, res.cloud_count(self.n)))

    def distance_to_boundary(self, x):
        return self.oracle().query(x)

    def normal_point(self, P, N, t):
        t = np.asarray(t, dtype=float)
        return self.space.exp(P, t[:, None] * N)

    def normal_sectional(self, P, N, t):
        return np.full((len(P), self.n - 1), self.k)

    def cut_horizon(self) -> float:
        h = 2.0 * self.scale * 1.05
        if self.k > 0:
            h = min(h, math.pi / math.sqrt(self.k))
        return h

    # curvature checks
    def chart_metric(self, y):
        return self.space.chart_metric(y)

    def curvature_sample_points(self, count: int = 12):
        rng = np.random.default_rng(7)
        om = rng.normal(size=(count, self.n))
        om /= np.linalg.norm(om, axis=1, keepdims=True)
        rin, rout = self.limits(om)
        t = rin + (rout - rin) * rng.uniform(0.05, 0.95, size=count)
        return self.space.to_chart(self.point(om, t))


# -- warped product balls --------------------------------------------------------

class Profile:
    """Warping function f with f(0) = 0, f'(0) = 1."""

    def __init__(self, spec: dict):
        spec = dict(spec)
        self.spec = dict(spec)
        kind = spec.pop("type", None)
        if kind == "sk":
            self.k = float(spec.pop("k"))
            self.f = lambda t: np.asarray(sk(self.k, t))
            self.fp = lambda t: np.asarray(ck(self.k, t))
            self.fpp = lambda t: -self.k * np.asarray(sk(self.k, t))
        elif kind == "poly":
            c = np.polynomial.Polynomial(np.asarray(spec.pop("coefficients"), dtype=float))
            if abs(c.coef[0]) > 0 or (c.coef.size < 2 or abs(c.coef[1] - 1.0) > 1e-12):
                raise DomainError("warping polynomial needs f(0) = 0 and f'(0) = 1")
            if np.any(c.coef[2::2] != 0):
                raise DomainError("warping polynomial must be odd for smoothness at the centre")
            d1, d2 = c.deriv(1), c.deriv(2)
            self.f = lambda t: c(np.asarray(t, dtype=float))
            self.fp = lambda t: d1(np.asarray(t, dtype=float))
            self.fpp = lambda t: d2(np.asarray(t, dtype=float))
        else:
            raise DomainError(f"unknown warping profile {kind!r}")
        if spec:
            raise DomainError(f"unknown profile fields {sorted(spec)}")

    def radial_curvature(self, r):
        r = np.maximum(np.abs(np.asarray(r, dtype=float)), 1e-6)
        return -self.fpp(r) / self.f(r)


class WarpedBall(PolarDomain):
    """dt^2 + f(t)^2 g_{S^{n-1}} on t <= T, written in normal coordinates x = t omega."""

    kind = "WarpedProduct"

    def __init__(self, profile: dict, n: int, radius: float, resolution=None):
        super().__init__(resolution)
        if n not in (2, 3):
            raise DomainError("the engine supports dimensions 2 and 3")
        self.profile = Profile(profile)
        self.n = int(n)
        self.T = float(radius)
        grid = np.linspace(1e-6, self.T, 2001)
        if np.any(self.profile.f(grid) <= 0):
            raise DomainError("warping function must stay positive on (0, T]")

    def to_dict(self):
        return {"kind": self.kind, "n": self.n, "radius": self.T, "profile": self.profile.spec}

    @property
    def scale(self):
        return self.T

    @property
    def ambient(self):
        return None

    def limits(self, omega):
        return np.zeros(len(omega)), np.full(len(omega), self.T)

    def point(self, omega, t):
        return np.asarray(omega) * np.asarray(t, dtype=float)[:, None]

    def density(self, t):
        return self.profile.f(t) ** (self.n - 1)

    def primitive(self, t):
        t = np.asarray(t, dtype=float)
        x0, w0 = np.polynomial.legendre.leggauss(40)
        s = 0.5 * (x0 + 1.0)
        nodes = t[..., None] * s
        return 0.5 * t * np.sum(w0 * self.density(nodes), axis=-1)

    def inside(self, x, slack=0.0):
        return np.linalg.norm(np.atleast_2d(x), axis=1) <= self.T + slack

    def distance_to_boundary(self, x):
        return np.abs(self.T - np.linalg.norm(np.atleast_2d(x), axis=1))

    def boundary(self, resolution=None):
        res = self.res(resolution)

        def build():
            u, _, w_sphere = direction_rule(self.n, res.boundary_panels(self.n), res.order)
            om = omega_of_u(u)
            fT, fpT = float(self.profile.f(self.T)), float(self.profile.fp(self.T))
            kappa = np.full((len(u), self.n - 1), fpT / fT)
            return BoundarySet(self.T * om, -om, kappa, w_sphere * fT ** (self.n - 1), u,
                               np.zeros(len(u), dtype=int))
        return self.cached(("boundary", res), build)

    def normal_point(self, P, N, t):
        return P + np.asarray(t, dtype=float)[:, None] * N

    def normal_sectional(self, P, N, t):
        r = self.T - np.asarray(t, dtype=float)
        K = self.profile.radial_curvature(r)
        return np.repeat(np.broadcast_to(K, (len(P),))[:, None], self.n - 1, axis=1)

    def cut_horizon(self):
        return 2.0 * self.T

    def chart_metric(self, y):
        y = np.asarray(y, dtype=float)
        r = float(np.linalg.norm(y))
        yh = y / r
        proj = np.outer(yh, yh)
        ratio = float(self.profile.f(r)) / r
        return proj + ratio ** 2 * (np.eye(self.n) - proj)

    def curvature_sample_points(self, count: int = 12):
        rng = np.random.default_rng(11)
        om = rng.normal(size=(count, self.n))
        om /= np.linalg.norm(om, axis=1, keepdims=True)
        return om * rng.uniform(0.1, 0.95, size=(count, 1)) * self.T


# -- the exponential horn ---------------------------------------------------------

class RevolutionDomain(Domain):
    """Surface of revolution of g(x) = exp(x - L), 0 <= x <= L, in R^3.

    Points are chart coordinates (x, theta) with metric
    (1 + g'^2) dx^2 + g^2 dtheta^2.
    """

    kind = "SurfaceOfRevolution"
    n = 2

    def __init__(self, L: float, resolution=None):
        super().__init__(resolution)
        if not L > 0:
            raise DomainError("profile length must be positive")
        self.L = float(L)
        self.S = float(self.arclength(np.array([self.L]))[0])

    def to_dict(self):
        return {"kind": self.kind, "profile": {"type": "exp", "L": self.L}}

    @property
    def scale(self):
        return self.L

    @property
    def ambient(self):
        return None

    def g(self, x):
        return np.exp(np.asarray(x, dtype=float) - self.L)

    @staticmethod
    def _P(u):
        w = np.sqrt(1.0 + np.exp(2.0 * u))
        return w - np.log1p(w) + u

    def arclength(self, x):
        """Meridian arclength from x = 0 (any real x: the profile extends)."""
        return self._P(np.asarray(x, dtype=float) - self.L) - self._P(-self.L)

    def x_of_s(self, s):
        s = np.asarray(s, dtype=float)
        x = np.clip(s, -50.0, None) * 1.0
        for _ in range(80):
            f = self.arclength(x) - s
            dx = f / np.sqrt(1.0 + self.g(x) ** 2)
            x = x - dx
            if np.max(np.abs(dx)) < 1e-15 * max(1.0, self.L):
                break
        return x

    def geodesic_curvature(self, x, sign):
        gx = self.g(x)
        return sign * gx / (gx * np.sqrt(1.0 + gx ** 2))

    def boundary(self, resolution=None):
        res = self.res(resolution)

        def build():
            th, w = panel_rule(0.0, TWO_PI, res.boundary_panels(2), res.order)
            pts, nrm, kap, wts, par, comp = [], [], [], [], [], []
            for ci, (x, sign) in enumerate(((0.0, -1.0), (self.L, 1.0))):
                gx = float(self.g(x))
                pts.append(np.column_stack([np.full(th.size, x), th]))
                nrm.append(np.column_stack([np.full(th.size, -sign / math.sqrt(1 + gx ** 2)),
                                            np.zeros(th.size)]))
                kap.append(np.full((th.size, 1), self.geodesic_curvature(x, sign)))
                wts.append(w * gx)
                par.append(th[:, None])
                comp.append(np.full(th.size, ci))
            return BoundarySet(*[np.concatenate(z) for z in (pts, nrm, kap, wts, par, comp)])
        return self.cached(("boundary", res), build)

    def distance_to_boundary(self, p):
        s = self.arclength(np.atleast_2d(p)[:, 0])
        return np.minimum(np.abs(s), np.abs(self.S - s))

    def normal_point(self, P, N, t):
        sign = np.sign(N[:, 0])
        s = self.arclength(P[:, 0]) + sign * np.asarray(t, dtype=float)
        return np.column_stack([self.x_of_s(s), P[:, 1]])

    def sectional(self, x):
        gx = self.g(x)
        return -1.0 / (1.0 + gx ** 2) ** 2

    def normal_sectional(self, P, N, t):
        return self.sectional(self.normal_point(P, N, t)[:, 0])[:, None]

    def inside(self, p, slack=0.0):
        x = np.atleast_2d(p)[:, 0]
        return (x >= -slack) & (x <= self.L + slack)

    def cut_horizon(self):
        return 1.05 * self.S + 1.0

    def _area_between(self, x0, x1):
        def prim(x):
            v = self.g(x)
            return math.pi * (v * np.sqrt(1.0 + v * v) + np.arcsinh(v))
        return prim(x1) - prim(x0)

    def volume(self, resolution=None):
        res = self.res(resolution)
        x, w = panel_rule(0.0, self.L, res.boundary_panels(2), res.order)
        gx = self.g(x)
        return float(TWO_PI * np.dot(w, gx * np.sqrt(1.0 + gx ** 2)))

    def exact_area(self):
        return float(self._area_between(0.0, self.L))

    def sublevel_volume(self, rho, resolution=None):
        if 2.0 * rho >= self.S:
            return self.exact_area()
        xa, xb = self.x_of_s(np.array([rho, self.S - rho]))
        return float(self._area_between(0.0, xa) + self._area_between(xb, self.L))

    def weighted_volume(self, phi, resolution=None):
        res = self.res(resolution)
        total = 0.0
        for a, b in ((0.0, 0.5 * self.S), (0.5 * self.S, self.S)):
            s, w = panel_rule(a, b, 4 * res.radial_panels, res.order)
            x = self.x_of_s(s)
            rho = np.minimum(s, self.S - s)
            total += TWO_PI * float(np.dot(w, phi(rho) * self.g(x)))
        return total

    def inradius(self, resolution=None):
        xm = float(self.x_of_s(np.array([0.5 * self.S]))[0])
        return 0.5 * self.S, np.array([xm, 0.0])

    def chart_metric(self, y):
        gx = float(self.g(y[0]))
        return np.diag([1.0 + gx ** 2, gx ** 2])

    def christoffel(self, y):
        gx = float(self.g(y[0]))
        G = np.zeros((2, 2, 2))
        G[0, 0, 0] = gx * gx / (1 + gx * gx)
        G[0, 1, 1] = -gx * gx / (1 + gx * gx)
        G[1, 0, 1] = G[1, 1, 0] = 1.0
        return G

    def curvature_sample_points(self, count: int = 12):
        return np.column_stack([np.linspace(0.05, 0.95, count) * self.L, np.zeros(count)])


# -- flat torus with a small geodesic disc removed -------------------------------------

class TorusHoleDomain(PolarDomain):
    """M minus B(x0, eps) on the flat torus: the metric-ball counterexample."""

    kind = "FlatTorusHole"
    n = 2

    def __init__(self, torus, center, eps: float, resolution=None):
        super().__init__(resolution)
        if not 0 < eps < torus.inj_radius:
            raise DomainError("hole radius must be below the injectivity radius")
        self.torus = torus
        self.c = torus.wrap(np.asarray(center, dtype=float))
        self.eps = float(eps)
        box, periodic = direction_box(2)
        self.components = [EmbeddedComponent(
            lambda u: self.c + self.eps * omega_of_u(u),
            lambda u: -omega_of_u(u), np.ones(2), False, box, periodic)]

    def to_dict(self):
        d = self.torus.to_dict()
        d["hole"] = {"center": self.c.tolist(), "radius": self.eps}
        return d

    @property
    def ambient(self):
        return self.torus

    @property
    def center(self):
        return self.c

    @property
    def scale(self):
        return self.torus.diameter

    def direction_breakpoints(self):
        return self.torus.cut_corners()

    def limits(self, omega):
        return np.full(len(omega), self.eps), self.torus.cut_function(omega)

    def point(self, omega, t):
        return self.torus.wrap(self.c + np.asarray(t, dtype=float)[:, None] * np.asarray(omega))

    def density(self, t):
        return np.asarray(t, dtype=float)

    def primitive(self, t):
        return 0.5 * np.asarray(t, dtype=float) ** 2

    def distance_to_boundary(self, x):
        return np.abs(self.torus.distance(np.atleast_2d(x), self.c) - self.eps)

    def inside(self, x, slack=0.0):
        return self.torus.distance(np.atleast_2d(x), self.c) >= self.eps - slack

    def boundary(self, resolution=None):
        res = self.res(resolution)

        def build():
            comp = self.components[0]
            u, w_param, _ = direction_rule(2, res.boundary_panels(2), res.order)
            X, N, kappa, sdet = comp.geometry(u)
            return BoundarySet(self.torus.wrap(X), N, kappa, w_param * sdet, u,
                               np.zeros(len(u), dtype=int))
        return self.cached(("boundary", res), build)

    def boundary_cloud(self, resolution=None):
        comp = self.components[0]
        return self.torus.wrap(comp.embed(comp.cloud_params(self.res(resolution).cloud_count(2))))

    def farthest(self, x):
        """sup over the domain of d(x, .): the torus diameter unless x's cut point is in the hole."""
        x = np.atleast_2d(x)
        opposite = self.torus.wrap(x + 0.5 * self.torus.periods)
        free = self.torus.distance(opposite, self.c) >= self.eps
        cloud = self.boundary_cloud()
        out = np.full(len(x), self.torus.diameter)
        for i in np.nonzero(~free)[0]:
            out[i] = float(np.max(self.torus.distance(cloud, x[i])))
        return out

    def normal_point(self, P, N, t):
        return self.torus.wrap(P + np.asarray(t, dtype=float)[:, None] * N)

    def normal_sectional(self, P, N, t):
        return np.zeros((len(P), 1))

    def cut_horizon(self):
        return 1.05 * self.torus.diameter

    def chart_metric(self, y):
        return np.eye(2)

    def curvature_sample_points(self, count: int = 12):
        return self.torus.curvature_sample_points(count)


def model_ball(k: float, n: int, radius: float, resolution=None) -> RadialDomain:
    from .shapes import Ball
    return RadialDomain(SpaceForm(k, n), Ball(radius), None, "ModelBall", resolution)


def unit_ball_volume(n: int) -> float:
    return unit_sphere_area(n) / n
