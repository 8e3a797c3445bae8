"""Closed surfaces: the flat torus and the round projective plane.

Both expose the interface used by point cut loci, Toponogov checks and
extrinsic radii: ``distance``, ``exp``, ``tangent_basis``,
``minimal_geodesic``, ``volume`` and a chart metric.  The round sphere is
:class:`~isocompare.geometry.spaceform.SpaceForm` with k > 0.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import DomainError
from ..kernels import sk
from .spaceform import Geodesic, SpaceForm


class FlatTorus:
    """R^2 / (a Z x b Z); points are stored in [-a/2, a/2) x [-b/2, b/2)."""

    kind = "FlatTorus"
    n = 2
    k = 0.0

    def __init__(self, a: float = 1.0, b: float = 1.0):
        if not (a > 0 and b > 0):
            raise DomainError("torus periods must be positive")
        self.a, self.b = float(a), float(b)
        self.periods = np.array([self.a, self.b])

    def __repr__(self):
        return f"FlatTorus(a={self.a}, b={self.b})"

    def to_dict(self):
        return {"kind": self.kind, "a": self.a, "b": self.b}

    def wrap(self, x):
        x = np.asarray(x, dtype=float)
        return x - self.periods * np.floor(x / self.periods + 0.5)

    def inner(self, u, v):
        return np.sum(np.asarray(u) * np.asarray(v), axis=-1)

    def norm(self, x, v):
        return np.linalg.norm(v, axis=-1)

    def origin(self):
        return np.zeros(2)

    def tangent_basis(self, x):
        return np.eye(2)

    def distance(self, x, y):
        return np.linalg.norm(self.wrap(np.asarray(y, dtype=float) - np.asarray(x, dtype=float)),
                              axis=-1)

    def exp(self, x, v):
        return self.wrap(np.asarray(x, dtype=float) + np.asarray(v, dtype=float))

    def log(self, x, y):
        return self.wrap(np.asarray(y, dtype=float) - np.asarray(x, dtype=float))

    def minimal_geodesic(self, p0, p1) -> Geodesic:
        p0 = self.wrap(np.asarray(p0, dtype=float))
        v = self.log(p0, p1)
        length = float(np.linalg.norm(v))
        return Geodesic(self, p0, v / length if length > 0 else v, length)

    @property
    def inj_radius(self):
        return 0.5 * min(self.a, self.b)

    @property
    def diameter(self):
        return 0.5 * math.hypot(self.a, self.b)

    def volume(self):
        return self.a * self.b

    def polar_density(self, t):
        return np.asarray(t, dtype=float)

    def cut_function(self, omega):
        """Exact cut time of the unit direction omega (same at every point)."""
        omega = np.atleast_2d(omega)
        with np.errstate(divide="ignore"):
            tx = np.where(omega[:, 0] != 0, 0.5 * self.a / np.abs(omega[:, 0]), np.inf)
            ty = np.where(omega[:, 1] != 0, 0.5 * self.b / np.abs(omega[:, 1]), np.inf)
        return np.minimum(tx, ty)

    def cut_corners(self):
        t = math.atan2(self.b, self.a)
        return (t, math.pi - t, math.pi + t, 2 * math.pi - t)

    def chart_metric(self, y):
        return np.eye(2)

    def christoffel(self, y):
        return np.zeros((2, 2, 2))

    def to_chart(self, x):
        return np.asarray(x, dtype=float)

    def curvature_sample_points(self, count: int = 12):
        rng = np.random.default_rng(3)
        return rng.uniform(-0.5, 0.5, size=(count, 2)) * self.periods


class ProjectivePlane:
    """S^2(r) with antipodal points identified; curvature 1/r^2."""

    kind = "ProjectivePlaneQuotient"
    n = 2

    def __init__(self, r: float = 1.0):
        if not r > 0:
            raise DomainError("model radius must be positive")
        self.r = float(r)
        self.sphere = SpaceForm(1.0 / self.r ** 2, 2)
        self.k = self.sphere.k

    def __repr__(self):
        return f"ProjectivePlane(r={self.r})"

    def to_dict(self):
        return {"kind": self.kind, "r": self.r}

    def origin(self):
        return self.sphere.origin()

    def inner(self, u, v):
        return self.sphere.inner(u, v)

    def norm(self, x, v):
        return self.sphere.norm(x, v)

    def tangent_basis(self, x):
        return self.sphere.tangent_basis(x)

    def distance(self, x, y):
        d = self.sphere.distance(x, y)
        return np.minimum(d, math.pi * self.r - d)

    def exp(self, x, v):
        return self.sphere.exp(x, v)

    def minimal_geodesic(self, p0, p1) -> Geodesic:
        p1 = np.asarray(p1, dtype=float)
        if self.sphere.distance(p0, p1) > 0.5 * math.pi * self.r:
            p1 = -p1
        g = self.sphere.minimal_geodesic(p0, p1)
        return Geodesic(self, g.start, g.direction, g.length)

    @property
    def inj_radius(self):
        return 0.5 * math.pi * self.r

    @property
    def diameter(self):
        return 0.5 * math.pi * self.r

    def volume(self):
        return 2.0 * math.pi * self.r ** 2

    def polar_density(self, t):
        return np.asarray(sk(self.k, t))

    def cut_function(self, omega):
        return np.full(len(np.atleast_2d(omega)), 0.5 * math.pi * self.r)

    def chart_metric(self, y):
        return self.sphere.chart_metric(y)

    def christoffel(self, y):
        return conformal_christoffel(self.k, y)

    def to_chart(self, x):
        return self.sphere.to_chart(x)

    def curvature_sample_points(self, count: int = 12):
        return self.sphere.curvature_sample_points(count)


def conformal_christoffel(k: float, y):
    """Christoffel symbols of 4|dy|^2/(1 + k|y|^2)^2, i.e. e^{2u} delta with u = log 2 - log(1 + k|y|^2)."""
    y = np.asarray(y, dtype=float)
    n = y.size
    du = -2.0 * k * y / (1.0 + k * float(y @ y))
    eye = np.eye(n)
    return (np.einsum("ij,k->ijk", eye, du) + np.einsum("ik,j->ijk", eye, du)
            - np.einsum("jk,i->ijk", eye, du))
