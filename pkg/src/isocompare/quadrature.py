"""Composite Gauss-Legendre rules on panels."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(a: float, b: float, panels: int, order: int = 8, breakpoints=()):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b].

    ``breakpoints`` inside (a, b) become panel edges, so piecewise smooth
    integrands (corners of a boundary, kinks of a radial function) are
    integrated at full order on every smooth piece.
    """
    if panels < 1 or order < 1:
        raise ValueError("panels and order must be positive")
    edges = {float(a), float(b)}
    edges.update(float(p) for p in breakpoints if a < p < b)
    edges = np.array(sorted(edges))
    # spread the requested panel count over the pieces by length
    lengths = np.diff(edges)
    counts = np.maximum(1, np.round(panels * lengths / lengths.sum()).astype(int))
    x0, w0 = _legendre(order)
    nodes, weights = [], []
    for lo, hi, cnt in zip(edges[:-1], edges[1:], counts):
        cuts = np.linspace(lo, hi, cnt + 1)
        mid = 0.5 * (cuts[1:] + cuts[:-1])
        half = 0.5 * (cuts[1:] - cuts[:-1])
        nodes.append((mid[:, None] + half[:, None] * x0[None, :]).ravel())
        weights.append((half[:, None] * w0[None, :]).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


def panel_edges(a: float, b: float, panels: int, breakpoints=()):
    """The panel edges used by :func:`panel_rule` (useful for dense clouds)."""
    edges = {float(a), float(b)}
    edges.update(float(p) for p in breakpoints if a < p < b)
    edges = np.array(sorted(edges))
    lengths = np.diff(edges)
    counts = np.maximum(1, np.round(panels * lengths / lengths.sum()).astype(int))
    out = [np.linspace(lo, hi, c + 1)[:-1] for lo, hi, c in zip(edges[:-1], edges[1:], counts)]
    return np.concatenate(out + [edges[-1:]])


def richardson_check(coarse: float, fine: float, target: float):
    """Relative change between two panel resolutions and whether it is acceptable.

    Returns ``(relative_change, ok)`` where ``ok`` is False when the change
    exceeds ten times ``target``.
    """
    scale = max(abs(coarse), abs(fine), 1e-300)
    rel = abs(fine - coarse) / scale
    return rel, rel <= 10.0 * target
