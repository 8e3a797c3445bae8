"""The model spaces M_k^n realised in a flat ambient space.

k = 0 is R^n itself; k > 0 is the sphere of radius R = 1/sqrt(k) in
R^{n+1}; k < 0 is the upper sheet of the hyperboloid <x, x> = -R^2 in
Minkowski space R^{n,1} (first coordinate timelike).  With this
embedding every geodesic is

    exp_x(t u) = c_k(t) x + s_k(t) u,

which also holds for k = 0 because c_0 = 1 and s_0(t) = t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..kernels import ck, sk, unit_sphere_area


@dataclass(frozen=True)
class Geodesic:
    """Unit-speed geodesic t -> exp_{start}(t u) for t in [0, length]."""

    space: object
    start: np.ndarray
    direction: np.ndarray
    length: float

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        pts = self.space.exp(np.broadcast_to(self.start, (t.size, self.start.size)),
                             t[:, None] * self.direction[None, :])
        return pts


class SpaceForm:
    """Constant curvature k in dimension n."""

    kind = "SpaceForm"

    def __init__(self, k: float, n: int = 2):
        if n < 2:
            raise ValueError("dimension must be at least 2")
        self.k = float(k)
        self.n = int(n)
        self.ambient_dim = self.n if self.k == 0 else self.n + 1
        self.R = math.inf if self.k == 0 else 1.0 / math.sqrt(abs(self.k))
        self._sign = np.ones(self.ambient_dim)
        if self.k < 0:
            self._sign[0] = -1.0

    def __repr__(self):
        return f"SpaceForm(k={self.k}, n={self.n})"

    def to_dict(self):
        return {"kind": "SpaceForm", "k": self.k, "n": self.n}

    # -- bilinear structure ------------------------------------------------
    def inner(self, u, v):
        return np.sum(np.asarray(u) * np.asarray(v) * self._sign, axis=-1)

    def norm(self, x, v):
        return np.sqrt(np.maximum(self.inner(v, v), 0.0))

    def project(self, x, v):
        """Orthogonal projection of an ambient vector onto T_x."""
        if self.k == 0:
            return np.asarray(v, dtype=float)
        x = np.asarray(x, dtype=float)
        return v - self.k * self.inner(x, v)[..., None] * x

    def origin(self):
        o = np.zeros(self.ambient_dim)
        if self.k != 0:
            o[0] = self.R
        return o

    def tangent_basis(self, x):
        """Orthonormal basis of T_x as rows of an (n, ambient_dim) array."""
        x = np.asarray(x, dtype=float)
        basis = []
        for e in np.eye(self.ambient_dim):
            v = self.project(x, e)
            for b in basis:
                v = v - self.inner(v, b) * b
            nv = self.norm(x, v)
            if nv > 1e-8:
                basis.append(v / nv)
            if len(basis) == self.n:
                break
        return np.array(basis)

    # -- metric ------------------------------------------------------------
    def distance(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        diff = x - y
        if self.k == 0:
            return np.linalg.norm(diff, axis=-1)
        chord = np.sqrt(np.maximum(self.inner(diff, diff), 0.0))
        if self.k > 0:
            # arcsin is ill-conditioned near the antipode: use the antipodal chord there
            summ = x + y
            anti = np.sqrt(np.maximum(self.inner(summ, summ), 0.0))
            near = 2.0 * self.R * np.arcsin(np.minimum(1.0, chord / (2.0 * self.R)))
            far = math.pi * self.R - 2.0 * self.R * np.arcsin(np.minimum(1.0, anti / (2.0 * self.R)))
            return np.where(chord <= anti, near, far)
        return 2.0 * self.R * np.arcsinh(chord / (2.0 * self.R))

    def exp(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.k == 0:
            return x + v
        t = self.norm(x, v)
        safe = np.where(t > 0, t, 1.0)
        u = v / safe[..., None]
        return np.asarray(ck(self.k, t))[..., None] * x + np.asarray(sk(self.k, t))[..., None] * u

    def velocity(self, x, u, t):
        """d/dt exp_x(t u) for a unit vector u."""
        x = np.asarray(x, dtype=float)
        t = np.asarray(t, dtype=float)
        return (-self.k * np.asarray(sk(self.k, t)))[..., None] * x + np.asarray(ck(self.k, t))[..., None] * u

    def log(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self.k == 0:
            return y - x
        w = self.project(x, y)
        nw = self.norm(x, w)
        d = self.distance(x, y)
        safe = np.where(nw > 0, nw, 1.0)
        return (d / safe)[..., None] * w

    def minimal_geodesic(self, p0, p1) -> Geodesic:
        p0 = np.asarray(p0, dtype=float)
        v = self.log(p0, p1)
        length = float(self.norm(p0, v))
        u = v / length if length > 0 else np.zeros_like(v)
        return Geodesic(self, p0, u, length)

    @property
    def inj_radius(self) -> float:
        return math.pi * self.R if self.k > 0 else math.inf

    @property
    def diameter(self) -> float:
        return math.pi * self.R if self.k > 0 else math.inf

    def volume(self) -> float:
        """Total volume (finite only for the round sphere)."""
        return unit_sphere_area(self.n + 1) * self.R ** self.n if self.k > 0 else math.inf

    def cut_function(self, omega):
        return np.full(len(np.atleast_2d(omega)), self.inj_radius)

    def christoffel(self, y):
        from .closed import conformal_christoffel
        return conformal_christoffel(self.k, y)

    def polar_density(self, t):
        return np.asarray(sk(self.k, t)) ** (self.n - 1)

    def cut_time(self, x0, directions):
        return np.full(len(directions), self.inj_radius)

    # -- conformal chart g = 4 |dy|^2 / (1 + k |y|^2)^2 ---------------------
    def chart_metric(self, y):
        y = np.asarray(y, dtype=float)
        factor = 4.0 / (1.0 + self.k * np.dot(y, y)) ** 2
        return factor * np.eye(self.n)

    def to_chart(self, x):
        x = np.asarray(x, dtype=float)
        if self.k == 0:
            return 0.5 * x
        return self.R * x[..., 1:] / (self.R + x[..., :1])

    def from_chart(self, y):
        y = np.asarray(y, dtype=float)
        if self.k == 0:
            return 2.0 * y
        z2 = np.sum(y * y, axis=-1) * abs(self.k)
        if self.k > 0:
            x0 = self.R * (1 - z2) / (1 + z2)
            xs = 2.0 * y / (1 + z2)[..., None]
        else:
            x0 = self.R * (1 + z2) / (1 - z2)
            xs = 2.0 * y / (1 - z2)[..., None]
        return np.concatenate([np.asarray(x0)[..., None], xs], axis=-1)

    def curvature_sample_points(self, count: int = 12, spread: float = 0.5, rng=None):
        """Chart points near the chart origin where curvature is sampled."""
        rng = np.random.default_rng(0) if rng is None else rng
        scale = spread * (min(1.0, self.R) if math.isfinite(self.R) else 1.0)
        return rng.uniform(-scale, scale, size=(count, self.n))

    def random_point(self, rng, spread: float = 1.0):
        o = self.origin()
        basis = self.tangent_basis(o)
        v = rng.normal(size=self.n)
        v *= spread * rng.uniform() ** (1.0 / self.n) / np.linalg.norm(v)
        return self.exp(o, v @ basis)
