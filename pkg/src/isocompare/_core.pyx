# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled inner loops.  Semantics are defined by ``_fallback.py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, INFINITY
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()


def chord_scan(double[::1] s, double[::1] c, double[::1] phi, double sense,
               double det_floor=1e-14):
    """Worst signed chord violation over all grid pairs and interior points."""
    cdef Py_ssize_t n = phi.shape[0]
    cdef Py_ssize_t i, j, m
    cdef Py_ssize_t bi = -1, bj = -1, bm = -1
    cdef Py_ssize_t singular = 0
    cdef double det, alpha, beta, v
    cdef double worst = -INFINITY
    for i in range(n):
        for j in range(i + 2, n):
            det = s[i] * c[j] - s[j] * c[i]
            if fabs(det) < det_floor:
                singular += 1
                continue
            alpha = (phi[i] * c[j] - phi[j] * c[i]) / det
            beta = (s[i] * phi[j] - s[j] * phi[i]) / det
            for m in range(i + 1, j):
                v = sense * (phi[m] - (alpha * s[m] + beta * c[m]))
                if v > worst:
                    worst = v
                    bi = i
                    bj = j
                    bm = m
    return worst, bi, bj, bm, singular


def nearest_points(double[:, ::1] queries, double[:, ::1] cloud, int metric):
    """Index of the closest cloud point for every query.

    metric 0: Euclidean; 1: sphere (maximise the dot product);
    2: hyperboloid (maximise the Minkowski product).
    """
    cdef Py_ssize_t nq = queries.shape[0]
    cdef Py_ssize_t nc = cloud.shape[0]
    cdef Py_ssize_t d = queries.shape[1]
    cdef Py_ssize_t a, b, e
    cdef double best, val, diff
    cdef cnp.ndarray[cnp.int64_t, ndim=1] idx = np.empty(nq, dtype=np.int64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] proxy = np.empty(nq, dtype=np.float64)
    for a in range(nq):
        best = INFINITY
        idx[a] = -1
        for b in range(nc):
            val = 0.0
            if metric == 0:
                for e in range(d):
                    diff = queries[a, e] - cloud[b, e]
                    val += diff * diff
            elif metric == 1:
                for e in range(d):
                    val -= queries[a, e] * cloud[b, e]
            else:
                val = queries[a, 0] * cloud[b, 0]
                for e in range(1, d):
                    val -= queries[a, e] * cloud[b, e]
            if val < best:
                best = val
                idx[a] = b
        proxy[a] = best
    return idx, proxy


cdef inline void _sift_up(double* key, long* node, Py_ssize_t pos):
    cdef Py_ssize_t parent
    cdef double k = key[pos]
    cdef long v = node[pos]
    while pos > 0:
        parent = (pos - 1) >> 1
        if key[parent] <= k:
            break
        key[pos] = key[parent]
        node[pos] = node[parent]
        pos = parent
    key[pos] = k
    node[pos] = v


cdef inline void _sift_down(double* key, long* node, Py_ssize_t size):
    cdef Py_ssize_t pos = 0, child
    cdef double k = key[0]
    cdef long v = node[0]
    while True:
        child = 2 * pos + 1
        if child >= size:
            break
        if child + 1 < size and key[child + 1] < key[child]:
            child += 1
        if key[child] >= k:
            break
        key[pos] = key[child]
        node[pos] = node[child]
        pos = child
    key[pos] = k
    node[pos] = v


def graph_dijkstra(long[::1] indptr, long[::1] indices, double[::1] weights,
                   long[::1] sources, double[::1] offsets):
    """Multi-source Dijkstra on a CSR graph with non-negative weights."""
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] dist_arr = np.full(nv, np.inf)
    cdef double[::1] dist = dist_arr
    cdef Py_ssize_t cap = nv + 16, size = 0, s, e
    cdef double* key = <double*> malloc(cap * sizeof(double))
    cdef long* node = <long*> malloc(cap * sizeof(long))
    cdef long u, w
    cdef double du, nd
    if key == NULL or node == NULL:
        raise MemoryError()
    try:
        for s in range(sources.shape[0]):
            u = sources[s]
            if offsets[s] < dist[u]:
                dist[u] = offsets[s]
                if size == cap:
                    cap *= 2
                    key = <double*> realloc(key, cap * sizeof(double))
                    node = <long*> realloc(node, cap * sizeof(long))
                key[size] = offsets[s]
                node[size] = u
                size += 1
                _sift_up(key, node, size - 1)
        while size > 0:
            du = key[0]
            u = node[0]
            size -= 1
            if size > 0:
                key[0] = key[size]
                node[0] = node[size]
                _sift_down(key, node, size)
            if du > dist[u]:
                continue
            for e in range(indptr[u], indptr[u + 1]):
                w = indices[e]
                nd = du + weights[e]
                if nd < dist[w]:
                    dist[w] = nd
                    if size == cap:
                        cap *= 2
                        key = <double*> realloc(key, cap * sizeof(double))
                        node = <long*> realloc(node, cap * sizeof(long))
                    key[size] = nd
                    node[size] = w
                    size += 1
                    _sift_up(key, node, size - 1)
    finally:
        free(key)
        free(node)
    return dist_arr
