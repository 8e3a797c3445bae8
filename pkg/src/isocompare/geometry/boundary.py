"""Boundary samples and the finite-difference hypersurface geometry.

A boundary component is a map u -> X(u) from a parameter box into the
flat ambient space of the manifold (R^n, R^{n+1} or Minkowski R^{n,1}).
Because geodesic curvature of a hypersurface of M_k only needs the
tangential part of the ambient second derivative, and the inward normal
is tangent to M, the second fundamental form is simply <N, X_ij>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ..errors import DomainError

FD_PARAM_STEP = 1e-3
_D1 = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))
_D2 = ((-2, -1.0 / 12), (-1, 16.0 / 12), (0, -30.0 / 12), (1, 16.0 / 12), (2, -1.0 / 12))


def elementary_symmetric(kappa: np.ndarray) -> np.ndarray:
    """e_0..e_m of each row of ``kappa`` (shape (N, m)) -> (N, m+1)."""
    N, m = kappa.shape
    e = np.zeros((N, m + 1))
    e[:, 0] = 1.0
    for j in range(m):
        e[:, 1:j + 2] = e[:, 1:j + 2] + kappa[:, j:j + 1] * e[:, 0:j + 1]
    return e


def normalized_mean_curvatures(kappa: np.ndarray) -> np.ndarray:
    """H_j = e_j(kappa) / binom(m, j), j = 0..m."""
    m = kappa.shape[1]
    e = elementary_symmetric(kappa)
    binom = np.array([math.comb(m, j) for j in range(m + 1)], dtype=float)
    return e / binom


@dataclass(frozen=True)
class BoundarySample:
    """One boundary point with its frame, curvatures and distances."""

    point: np.ndarray
    inward_normal: np.ndarray
    principal_curvatures: np.ndarray
    H: float
    H1: float
    Hj: np.ndarray
    cut: float
    focal: float
    weight: float


@dataclass
class BoundarySet:
    """Vectorised boundary samples of a domain (quadrature nodes)."""

    points: np.ndarray          # (N, D) manifold coordinates
    normals: np.ndarray         # (N, D) inward unit normals
    kappa: np.ndarray           # (N, n-1) principal curvatures, outward convention
    weights: np.ndarray         # (N,) area element times quadrature weight
    params: np.ndarray          # (N, n-1) boundary parameters
    component: np.ndarray       # (N,) component index
    cut: np.ndarray | None = None
    focal: np.ndarray | None = None
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.kappa.shape[1] + 1

    @property
    def H(self) -> np.ndarray:
        return self.kappa.sum(axis=1)

    @property
    def H1(self) -> np.ndarray:
        return self.H / (self.n - 1)

    @property
    def Hj(self) -> np.ndarray:
        return normalized_mean_curvatures(self.kappa)

    @property
    def area(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, np.asarray(values, dtype=float)))

    def samples(self) -> list[BoundarySample]:
        Hj = self.Hj
        H = self.H
        cut = self.cut if self.cut is not None else np.full(len(self), math.nan)
        focal = self.focal if self.focal is not None else np.full(len(self), math.nan)
        return [BoundarySample(self.points[i], self.normals[i], self.kappa[i], float(H[i]),
                               float(H[i] / (self.n - 1)), Hj[i], float(cut[i]), float(focal[i]),
                               float(self.weights[i])) for i in range(len(self))]


class EmbeddedComponent:
    """A boundary component given by an explicit embedding.

    ``embed(u)`` maps (Q, d) parameters to (Q, D) ambient points,
    ``outward(u)`` gives ambient vectors pointing out of the domain (only
    the sign of <N, outward> is used), ``inner`` is the ambient bilinear
    form and ``on_quadric`` says whether the point itself must be added to
    the constraint rows (curved model spaces).
    """

    def __init__(self, embed, outward, inner_sign, on_quadric, box, periodic,
                 breakpoints=None, measure=None):
        self.embed = embed
        self.outward = outward
        self.sign = np.asarray(inner_sign, dtype=float)
        self.on_quadric = on_quadric
        self.box = [tuple(map(float, b)) for b in box]
        self.periodic = list(periodic)
        self.breakpoints = [tuple(bp) for bp in (breakpoints or [() for _ in box])]
        self.measure = measure  # optional extra density in parameter space (unused by FD)

    @property
    def dim(self) -> int:
        return len(self.box)

    def inner(self, a, b):
        return np.sum(a * b * self.sign, axis=-1)

    def wrap(self, u):
        u = np.array(u, dtype=float, copy=True)
        for i, (lo, hi) in enumerate(self.box):
            if self.periodic[i]:
                u[:, i] = lo + np.mod(u[:, i] - lo, hi - lo)
            else:
                u[:, i] = np.clip(u[:, i], lo, hi)
        return u

    def _steps(self, u):
        """Per-node step keeping every stencil inside one smooth piece.

        Directions in which the embedding moves slowly (near the poles of a
        polar parametrisation) get longer steps, so roundoff in the second
        differences does not swamp the curvature there.
        """
        h = np.full(u.shape, FD_PARAM_STEP)
        speed = np.empty(u.shape)
        for i in range(u.shape[1]):
            up, dn = u.copy(), u.copy()
            up[:, i] += FD_PARAM_STEP
            dn[:, i] -= FD_PARAM_STEP
            speed[:, i] = np.sqrt(np.abs(self.inner(*(2 * [self.embed(up) - self.embed(dn)])))) \
                / (2 * FD_PARAM_STEP)
        fastest = speed.max(axis=1, keepdims=True)
        # square root balances roundoff (~1/h^2) against truncation (~h^4)
        h *= np.sqrt(np.clip(fastest / np.maximum(speed, 1e-300), 1.0, 1e4))
        for i, bps in enumerate(self.breakpoints):
            edges = list(bps)
            if not self.periodic[i]:
                edges += list(self.box[i])
            if not edges:
                continue
            lo, hi = self.box[i]
            per = hi - lo
            dist = np.full(u.shape[0], np.inf)
            for e in edges:
                d = np.abs(u[:, i] - e)
                if self.periodic[i]:
                    d = np.minimum(d, per - np.mod(d, per))
                dist = np.minimum(dist, d)
            h[:, i] = np.minimum(h[:, i], dist / 3.0)
        if np.any(h <= 0):
            raise DomainError("boundary sample placed on a corner")
        return h

    def derivatives(self, u):
        """X, X_i (Q, d, D) and X_ij (Q, d, d, D) by fourth-order differences."""
        u = np.asarray(u, dtype=float)
        Q, d = u.shape
        h = self._steps(u)
        X = self.embed(u)
        D = X.shape[1]
        X1 = np.zeros((Q, d, D))
        X2 = np.zeros((Q, d, d, D))
        for i in range(d):
            hi = h[:, i:i + 1]
            for off, w in _D1:
                uu = u.copy()
                uu[:, i] += off * h[:, i]
                X1[:, i] += w * self.embed(uu) / hi
            for off, w in _D2:
                uu = u.copy()
                uu[:, i] += off * h[:, i]
                X2[:, i, i] += w * self.embed(uu) / hi ** 2
        for i, j in combinations(range(d), 2):
            def mixed(scale):
                acc = 0.0
                for si in (-1, 1):
                    for sj in (-1, 1):
                        uu = u.copy()
                        uu[:, i] += si * scale * h[:, i]
                        uu[:, j] += sj * scale * h[:, j]
                        acc = acc + si * sj * self.embed(uu)
                return acc / (4.0 * scale ** 2 * h[:, i:i + 1] * h[:, j:j + 1])
            val = (4.0 * mixed(1.0) - mixed(2.0)) / 3.0
            X2[:, i, j] = val
            X2[:, j, i] = val
        return X, X1, X2

    def geometry(self, u):
        """Inward normals, principal curvatures (outward convention) and sqrt(det g)."""
        X, X1, X2 = self.derivatives(u)
        Q, d, D = X1.shape
        rows = X1 * self.sign
        if self.on_quadric:
            rows = np.concatenate([rows, (X * self.sign)[:, None, :]], axis=1)
        _, _, vh = np.linalg.svd(rows)
        w = vh[:, -1, :]
        nrm2 = self.inner(w, w)
        if np.any(nrm2 <= 0):
            raise DomainError("degenerate normal direction")
        N = w / np.sqrt(nrm2)[:, None]
        flip = self.inner(N, self.outward(u)) > 0
        N[flip] *= -1.0
        g = np.einsum("qiD,qjD->qij", X1 * self.sign, X1)
        b = np.einsum("qD,qijD->qij", N * self.sign, X2)
        det = np.linalg.det(g)
        if np.any(det <= 0):
            raise DomainError("induced metric is singular at a boundary sample")
        if d == 1:
            kappa = (b[:, 0, 0] / g[:, 0, 0])[:, None]
        else:
            L = np.linalg.cholesky(g)
            Li = np.linalg.inv(L)
            S = Li @ b @ np.swapaxes(Li, 1, 2)
            kappa = np.linalg.eigvalsh(0.5 * (S + np.swapaxes(S, 1, 2)))
        return X, N, kappa, np.sqrt(det)

    # -- dense cloud and foot-point refinement ---------------------------
    def cloud_params(self, count: int):
        if self.dim == 1:
            lo, hi = self.box[0]
            base = np.linspace(lo, hi, count, endpoint=not self.periodic[0])
            extra = np.array(self.breakpoints[0], dtype=float)
            return np.concatenate([base, extra])[:, None]
        n_th = max(8, int(round(math.sqrt(count / 2.0))))
        n_ph = 2 * n_th
        th = np.linspace(self.box[0][0], self.box[0][1], n_th + 1)
        ph = np.linspace(self.box[1][0], self.box[1][1], n_ph, endpoint=False)
        T, P = np.meshgrid(th, ph, indexing="ij")
        return np.column_stack([T.ravel(), P.ravel()])

    def cloud_spacing(self, count: int) -> np.ndarray:
        if self.dim == 1:
            lo, hi = self.box[0]
            return np.array([(hi - lo) / count])
        n_th = max(8, int(round(math.sqrt(count / 2.0))))
        return np.array([(self.box[0][1] - self.box[0][0]) / n_th,
                         (self.box[1][1] - self.box[1][0]) / (2 * n_th)])
