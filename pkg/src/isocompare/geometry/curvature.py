"""Curvature of a metric given in a chart, by nested finite differences.

Christoffel symbols come from fourth-order central differences of the
metric, and the Riemann tensor from fourth-order differences of the
Christoffel symbols.  In dimension 3 every bivector is decomposable, so
the extreme eigenvalues of the curvature operator on bivectors are the
exact extremes of the sectional curvature at a point.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy.linalg import eigh

FD_STEP = 1e-3
_STENCIL = ((-2, 1.0 / 12), (-1, -8.0 / 12), (1, 8.0 / 12), (2, -1.0 / 12))


def _derivative(fn, y, h):
    """Array of partial derivatives d fn / d y_l stacked on axis 0."""
    n = y.size
    out = []
    for l in range(n):
        acc = 0.0
        for off, wgt in _STENCIL:
            yy = y.copy()
            yy[l] += off * h
            acc = acc + wgt * fn(yy)
        out.append(acc / h)
    return np.array(out)


def christoffel(metric, y, h=FD_STEP):
    """Gamma[i, j, k] = Gamma^i_{jk}."""
    y = np.asarray(y, dtype=float)
    g = metric(y)
    dg = _derivative(metric, y, h)  # dg[l, i, j] = d_l g_ij
    ginv = np.linalg.inv(g)
    # first kind: Gamma_{l j k} = (d_j g_lk + d_k g_lj - d_l g_jk) / 2
    first = 0.5 * (np.einsum("jlk->ljk", dg) + np.einsum("klj->ljk", dg) - dg)
    return np.einsum("il,ljk->ijk", ginv, first)


def riemann_lowered(metric, y, h=FD_STEP):
    """R_{ijkl} = <R(d_k, d_l) d_j, d_i> with R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]."""
    y = np.asarray(y, dtype=float)
    gam = christoffel(metric, y, h)
    dgam = _derivative(lambda z: christoffel(metric, z, h), y, h)  # dgam[k, i, l, j]
    # R^i_{jkl} = d_k Gamma^i_{lj} - d_l Gamma^i_{kj} + Gamma^i_{km} Gamma^m_{lj} - Gamma^i_{lm} Gamma^m_{kj}
    term1 = np.einsum("kilj->ijkl", dgam)
    term2 = np.einsum("likj->ijkl", dgam)
    quad = np.einsum("ikm,mlj->ijkl", gam, gam) - np.einsum("ilm,mkj->ijkl", gam, gam)
    r_up = term1 - term2 + quad
    return np.einsum("im,mjkl->ijkl", metric(y), r_up)


@dataclass(frozen=True)
class PointCurvature:
    sec_min: float
    sec_max: float
    ric_min: float  # smallest eigenvalue of Ric relative to g (not divided by n-1)


def point_curvature(metric, y, h=FD_STEP) -> PointCurvature:
    y = np.asarray(y, dtype=float)
    n = y.size
    g = metric(y)
    R = riemann_lowered(metric, y, h)
    if n == 2:
        K = R[0, 1, 0, 1] / np.linalg.det(g)
        return PointCurvature(K, K, K)
    pairs = list(combinations(range(n), 2))
    Q = np.empty((len(pairs), len(pairs)))
    G = np.empty_like(Q)
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            Q[a, b] = R[i, j, k, l]
            G[a, b] = g[i, k] * g[j, l] - g[i, l] * g[j, k]
    Q = 0.5 * (Q + Q.T)
    sec = eigh(Q, G, eigvals_only=True)
    ginv = np.linalg.inv(g)
    ric = np.einsum("im,mjil->jl", ginv, R)
    ric = 0.5 * (ric + ric.T)
    ric_ev = eigh(ric, g, eigvals_only=True)
    return PointCurvature(float(sec.min()), float(sec.max()), float(ric_ev.min()))


@dataclass(frozen=True)
class CurvatureBounds:
    ric_lower: float  # min Ric(v,v)/|v|^2 divided by (n-1)
    sec_upper: float
    sec_lower: float
    samples: int
    worst_location: tuple


def sample_bounds(metric, points, h=FD_STEP) -> CurvatureBounds:
    points = np.atleast_2d(np.asarray(points, dtype=float))
    n = points.shape[1]
    vals = [point_curvature(metric, p, h) for p in points]
    ric = np.array([v.ric_min for v in vals]) / (n - 1)
    smax = np.array([v.sec_max for v in vals])
    smin = np.array([v.sec_min for v in vals])
    worst = int(np.argmin(ric))
    return CurvatureBounds(float(ric.min()), float(smax.max()), float(smin.min()),
                           len(points), tuple(float(c) for c in points[worst]))
