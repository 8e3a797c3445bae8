"""Select the compiled core or the pure-Python fallback at import time.

Set ``ISOCOMPARE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

import numpy as np

from . import _fallback

BACKEND = "python"
_impl = _fallback
if os.environ.get("ISOCOMPARE_PURE_PYTHON", "") != "1":
    try:
        from . import _core as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _fallback


def chord_scan(s, c, phi, sense, det_floor=1e-14):
    """Largest ``sense * (phi_m - chord_ij(t_m))`` over all i < m < j.

    Returns ``(worst, i, j, m, singular_pairs)``.
    """
    return _impl.chord_scan(np.ascontiguousarray(s, dtype=float),
                            np.ascontiguousarray(c, dtype=float),
                            np.ascontiguousarray(phi, dtype=float),
                            float(sense), float(det_floor))


def nearest_points(queries, cloud, metric: int):
    """Closest cloud index per query under a monotone distance proxy."""
    return _impl.nearest_points(np.ascontiguousarray(queries, dtype=float),
                                np.ascontiguousarray(cloud, dtype=float), int(metric))


def graph_dijkstra(indptr, indices, weights, sources, offsets=None):
    """Multi-source shortest path distances on a CSR graph."""
    sources = np.ascontiguousarray(sources, dtype=np.int64)
    if offsets is None:
        offsets = np.zeros(len(sources))
    return _impl.graph_dijkstra(np.ascontiguousarray(indptr, dtype=np.int64),
                                np.ascontiguousarray(indices, dtype=np.int64),
                                np.ascontiguousarray(weights, dtype=float),
                                sources,
                                np.ascontiguousarray(offsets, dtype=float))
