"""Graph distances on meshes of closed surfaces.

Shortest paths along mesh edges whose weights are true geodesic lengths
are upper bounds for the manifold distance.  They serve as an independent
cross-check of the analytic distance oracles used for point cut loci.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .. import accel
from .closed import FlatTorus, ProjectivePlane
from .spaceform import SpaceForm


@dataclass
class MeshGraph:
    vertices: np.ndarray      # manifold points
    indptr: np.ndarray
    indices: np.ndarray
    weights: np.ndarray
    edge_length: float        # longest edge: sets the cross-check tolerance

    def distances_from(self, manifold, x0, seeds: int = 8) -> np.ndarray:
        d0 = np.asarray(manifold.distance(self.vertices, x0))
        src = np.argsort(d0)[:seeds]
        return accel.graph_dijkstra(self.indptr, self.indices, self.weights, src, d0[src])

    def upper_bound(self, manifold, x0, queries, near: int = 8) -> np.ndarray:
        """Graph upper bound on d(x0, q) for each query point."""
        dv = self.distances_from(manifold, x0)
        out = np.empty(len(queries))
        for i, q in enumerate(np.atleast_2d(queries)):
            dq = np.asarray(manifold.distance(self.vertices, q))
            idx = np.argpartition(dq, near)[:near]
            out[i] = np.min(dv[idx] + dq[idx])
        return out


def _csr(count, pairs, weights):
    i, j = pairs[:, 0], pairs[:, 1]
    mat = sparse.coo_matrix((np.concatenate([weights, weights]),
                             (np.concatenate([i, j]), np.concatenate([j, i]))),
                            shape=(count, count)).tocsr()
    mat.sum_duplicates()
    return mat.indptr.astype(np.int64), mat.indices.astype(np.int64), mat.data.astype(float)


def torus_mesh(torus: FlatTorus, size: int = 96) -> MeshGraph:
    """Periodic grid with the 16-neighbour stencil (knight moves included)."""
    g = np.arange(size)
    I, J = np.meshgrid(g, g, indexing="ij")
    verts = torus.wrap(np.column_stack([I.ravel() * torus.a / size, J.ravel() * torus.b / size]))
    stencil = [(1, 0), (0, 1), (1, 1), (1, -1), (1, 2), (2, 1), (1, -2), (2, -1)]
    pairs = []
    for di, dj in stencil:
        a = (I * size + J).ravel()
        b = (((I + di) % size) * size + (J + dj) % size).ravel()
        pairs.append(np.column_stack([a, b]))
    pairs = np.concatenate(pairs)
    w = torus.distance(verts[pairs[:, 0]], verts[pairs[:, 1]])
    indptr, indices, weights = _csr(len(verts), pairs, w)
    return MeshGraph(verts, indptr, indices, weights, float(w.max()))


def icosphere(level: int):
    """Vertices and triangles of the subdivided icosahedron on the unit sphere."""
    t = (1.0 + math.sqrt(5.0)) / 2.0
    v = [(-1, t, 0), (1, t, 0), (-1, -t, 0), (1, -t, 0), (0, -1, t), (0, 1, t),
         (0, -1, -t), (0, 1, -t), (t, 0, -1), (t, 0, 1), (-t, 0, -1), (-t, 0, 1)]
    verts = [np.array(p, dtype=float) / math.sqrt(1 + t * t) for p in v]
    faces = [(0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11), (1, 5, 9), (5, 11, 4),
             (11, 10, 2), (10, 7, 6), (7, 1, 8), (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8),
             (3, 8, 9), (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1)]
    for _ in range(level):
        cache = {}

        def mid(a, b):
            key = (min(a, b), max(a, b))
            if key not in cache:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                cache[key] = len(verts) - 1
            return cache[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts), np.array(faces)


def sphere_mesh(manifold, level: int = 5) -> MeshGraph:
    """Icosphere graph with one- and two-ring edges; antipodes merged for RP^2."""
    sphere = manifold.sphere if isinstance(manifold, ProjectivePlane) else manifold
    verts, faces = icosphere(level)
    verts = verts * sphere.R
    # one-ring edges
    e = np.concatenate([faces[:, [0, 1]], faces[:, [1, 2]], faces[:, [2, 0]]])
    e = np.unique(np.sort(e, axis=1), axis=0)
    n = len(verts)
    adj = sparse.coo_matrix((np.ones(len(e)), (e[:, 0], e[:, 1])), shape=(n, n))
    adj = ((adj + adj.T) > 0).astype(float)
    two = ((adj @ adj + adj) > 0).tocoo()
    pairs = np.column_stack([two.row, two.col])
    pairs = pairs[pairs[:, 0] < pairs[:, 1]]
    w = sphere.distance(verts[pairs[:, 0]], verts[pairs[:, 1]])
    if isinstance(manifold, ProjectivePlane):
        # the icosphere is antipodally symmetric: map each vertex to one representative
        keys = np.round(verts / sphere.R, 9)
        lookup = {tuple(p): i for i, p in enumerate(keys)}
        anti = np.array([lookup[tuple(np.round(-p, 9) + 0.0)] for p in keys])
        rep = np.minimum(np.arange(n), anti)
        keep = np.unique(rep)
        renum = -np.ones(n, dtype=np.int64)
        renum[keep] = np.arange(keep.size)
        pairs = np.sort(renum[rep[pairs]], axis=1)
        ok = pairs[:, 0] != pairs[:, 1]
        pairs, w = pairs[ok], w[ok]
        order = np.lexsort((w, pairs[:, 1], pairs[:, 0]))
        pairs, w = pairs[order], w[order]
        _, first = np.unique(pairs, axis=0, return_index=True)  # shortest copy of each edge
        pairs, w = pairs[first], w[first]
        verts = verts[keep]
        n = keep.size
    indptr, indices, weights = _csr(n, pairs, w)
    return MeshGraph(verts, indptr, indices, weights, float(w.max()))


def mesh_for(manifold) -> MeshGraph:
    if isinstance(manifold, FlatTorus):
        return torus_mesh(manifold)
    if isinstance(manifold, (ProjectivePlane, SpaceForm)):
        return sphere_mesh(manifold)
    raise TypeError(f"no mesh available for {manifold!r}")
