"""Pure Python/NumPy versions of the compiled inner loops in ``_core.pyx``."""

from __future__ import annotations

import heapq

import numpy as np


def chord_scan(s, c, phi, sense, det_floor=1e-14):
    s = np.asarray(s, dtype=float)
    c = np.asarray(c, dtype=float)
    phi = np.asarray(phi, dtype=float)
    n = phi.size
    worst, loc, singular = -np.inf, (-1, -1, -1), 0
    for i in range(n - 2):
        j = np.arange(i + 2, n)
        det = s[i] * c[j] - s[j] * c[i]
        bad = np.abs(det) < det_floor
        singular += int(bad.sum())
        j, det = j[~bad], det[~bad]
        if j.size == 0:
            continue
        alpha = (phi[i] * c[j] - phi[j] * c[i]) / det
        beta = (s[i] * phi[j] - s[j] * phi[i]) / det
        m = np.arange(i + 1, n - 1)
        # chord of pair (i, j) evaluated at every m; mask m >= j
        viol = sense * (phi[m][None, :] - (alpha[:, None] * s[m][None, :]
                                           + beta[:, None] * c[m][None, :]))
        viol[m[None, :] >= j[:, None]] = -np.inf
        flat = int(np.argmax(viol))
        a, b = divmod(flat, m.size)
        if viol[a, b] > worst:
            worst = float(viol[a, b])
            loc = (i, int(j[a]), int(m[b]))
    return worst, loc[0], loc[1], loc[2], singular


def nearest_points(queries, cloud, metric, chunk=256):
    queries = np.asarray(queries, dtype=float)
    cloud = np.asarray(cloud, dtype=float)
    idx = np.empty(len(queries), dtype=np.int64)
    proxy = np.empty(len(queries))
    sign = np.ones(cloud.shape[1])
    if metric == 2:
        sign[0] = -1.0
    for lo in range(0, len(queries), chunk):
        q = queries[lo:lo + chunk]
        if metric == 0:
            val = (q * q).sum(1)[:, None] - 2.0 * q @ cloud.T + (cloud * cloud).sum(1)[None, :]
        else:
            val = -(q * sign) @ cloud.T
        best = np.argmin(val, axis=1)
        idx[lo:lo + chunk] = best
        proxy[lo:lo + chunk] = val[np.arange(len(q)), best]
    return idx, proxy


def graph_dijkstra(indptr, indices, weights, sources, offsets):
    nv = len(indptr) - 1
    dist = np.full(nv, np.inf)
    heap = []
    for u, off in zip(sources, offsets):
        if off < dist[u]:
            dist[u] = off
            heap.append((float(off), int(u)))
    heapq.heapify(heap)
    indptr = np.asarray(indptr)
    indices = np.asarray(indices)
    weights = np.asarray(weights)
    while heap:
        du, u = heapq.heappop(heap)
        if du > dist[u]:
            continue
        for e in range(indptr[u], indptr[u + 1]):
            w = indices[e]
            nd = du + weights[e]
            if nd < dist[w]:
                dist[w] = nd
                heapq.heappush(heap, (nd, int(w)))
    return dist
