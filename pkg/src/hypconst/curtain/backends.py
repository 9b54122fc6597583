"""CAT(0) backends: Euclidean space and finite metric trees.

A backend knows its points, its metric, geodesic segments between points,
and closest-point projection onto a segment (returned as an arc-length
parameter measured from the segment's start).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class DomainError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class GeodesicSegment:
    backend: object
    a: object
    b: object
    length: float
    # tree only: consecutive points along the segment and their parameters
    waypoints: tuple = ()
    offsets: tuple = ()

    def at(self, t):
        return self.backend.point_at(self, t)

    def reversed(self):
        return self.backend.segment(self.b, self.a)

    def key(self):
        return (self.backend.point_key(self.a), self.backend.point_key(self.b))


class EuclideanBackend:
    kind = "euclidean"

    def __init__(self, dim: int):
        if int(dim) != dim or dim < 1:
            raise ValueError(f"dimension must be a positive integer, got {dim}")
        self.dim = int(dim)

    def point(self, p):
        arr = np.atleast_1d(np.asarray(p, dtype=float))
        if arr.shape != (self.dim,) or not np.all(np.isfinite(arr)):
            raise DomainError(f"{p!r} is not a point of R^{self.dim}")
        return arr

    def point_key(self, p):
        return tuple(float(v) for v in self.point(p))

    def dist(self, p, q) -> float:
        return float(np.linalg.norm(self.point(p) - self.point(q)))

    def segment(self, a, b) -> GeodesicSegment:
        a, b = self.point(a), self.point(b)
        return GeodesicSegment(self, a, b, float(np.linalg.norm(b - a)))

    def direction(self, seg):
        if seg.length == 0:
            raise DomainError("degenerate segment has no direction")
        return (seg.b - seg.a) / seg.length

    def point_at(self, seg, t):
        if seg.length == 0:
            return seg.a.copy()
        return seg.a + self.direction(seg) * t

    def project(self, seg, p) -> float:
        p = self.point(p)
        if seg.length == 0:
            return 0.0
        return float(np.clip(np.dot(p - seg.a, self.direction(seg)), 0.0, seg.length))

    def as_dict(self):
        return {"type": "euclidean", "dim": self.dim}


class TreePoint(NamedTuple):
    """A point on edge (u, v) at distance s from u."""

    u: str
    v: str
    s: float


class TreeBackend:
    kind = "tree"

    def __init__(self, vertices, edges):
        self.vertices = [str(v) for v in vertices]
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex labels")
        self.vindex = {v: i for i, v in enumerate(self.vertices)}
        self.adj = {v: {} for v in self.vertices}
        for u, v, w in edges:
            u, v, w = str(u), str(v), float(w)
            if u not in self.adj or v not in self.adj:
                raise ValueError(f"edge ({u}, {v}) uses an unknown vertex")
            if not w > 0:
                raise ValueError(f"edge ({u}, {v}) needs a positive length, got {w}")
            if u == v or v in self.adj[u]:
                raise ValueError(f"edge ({u}, {v}) is a loop or repeated")
            self.adj[u][v] = w
            self.adj[v][u] = w
        self.edges = [(str(u), str(v), float(w)) for u, v, w in edges]
        n = len(self.vertices)
        if n == 0:
            raise ValueError("a tree needs at least one vertex")
        if len(self.edges) != n - 1:
            raise ValueError(f"{n} vertices need {n - 1} edges for a tree, got {len(self.edges)}")
        self._vd = np.full((n, n), np.inf)
        self._parent = {}
        for root in self.vertices:
            self._bfs(root)
        if np.isinf(self._vd).any():
            raise ValueError("tree is not connected")

    def _bfs(self, root):
        i = self.vindex[root]
        self._vd[i, i] = 0.0
        parent = {root: None}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v, w in self.adj[u].items():
                if v not in parent:
                    parent[v] = u
                    self._vd[i, self.vindex[v]] = self._vd[i, self.vindex[u]] + w
                    queue.append(v)
        self._parent[root] = parent

    def vertex_dist(self, u, v):
        return float(self._vd[self.vindex[u], self.vindex[v]])

    def vertex_path(self, u, v):
        parent = self._parent[u]
        out = [v]
        while out[-1] != u:
            out.append(parent[out[-1]])
        return out[::-1]

    def point(self, p):
        if isinstance(p, TreePoint) or (isinstance(p, (tuple, list)) and len(p) == 3):
            u, v, s = str(p[0]), str(p[1]), float(p[2])
            if u not in self.adj or v not in self.adj[u]:
                raise DomainError(f"{p!r} does not lie on an edge of the tree")
            w = self.adj[u][v]
            if not 0 <= s <= w:
                raise DomainError(f"{p!r} lies off edge ({u}, {v}) of length {w}")
            if s == 0:
                return u
            if s == w:
                return v
            if u > v:
                u, v, s = v, u, w - s
            return TreePoint(u, v, s)
        if isinstance(p, str) and p in self.adj:
            return p
        raise DomainError(f"{p!r} is not a point of the tree")

    def point_key(self, p):
        p = self.point(p)
        return p if isinstance(p, str) else tuple(p)

    def _anchors(self, p):
        if isinstance(p, str):
            return [(p, 0.0)]
        w = self.adj[p.u][p.v]
        return [(p.u, p.s), (p.v, w - p.s)]

    def _same_edge(self, p, q):
        if isinstance(p, TreePoint) and isinstance(q, TreePoint):
            return (p.u, p.v) == (q.u, q.v)
        if isinstance(p, TreePoint):
            return q in (p.u, p.v)
        if isinstance(q, TreePoint):
            return p in (q.u, q.v)
        return False

    def _edge_coord(self, p, u, v):
        # distance from u along edge (u, v)
        if isinstance(p, str):
            return 0.0 if p == u else self.adj[u][v]
        return p.s if p.u == u else self.adj[u][v] - p.s

    def dist(self, p, q) -> float:
        p, q = self.point(p), self.point(q)
        if self._same_edge(p, q):
            e = p if isinstance(p, TreePoint) else q
            return abs(self._edge_coord(p, e.u, e.v) - self._edge_coord(q, e.u, e.v))
        return min(dp + self.vertex_dist(a, b) + dq for a, dp in self._anchors(p) for b, dq in self._anchors(q))

    def segment(self, a, b) -> GeodesicSegment:
        a, b = self.point(a), self.point(b)
        if self._same_edge(a, b) or a == b:
            way = [a, b] if a != b else [a]
        else:
            best = min(
                ((dp + self.vertex_dist(x, y) + dq, x, y) for x, dp in self._anchors(a) for y, dq in self._anchors(b)),
                key=lambda t: t[0],
            )
            way = [a] + self.vertex_path(best[1], best[2]) + [b]
            dedup = [way[0]]
            for w in way[1:]:
                if w != dedup[-1]:
                    dedup.append(w)
            way = dedup
        offs = [0.0]
        for p, q in zip(way, way[1:]):
            offs.append(offs[-1] + self.dist(p, q))
        return GeodesicSegment(self, a, b, offs[-1], tuple(way), tuple(offs))

    def point_at(self, seg, t):
        if not -1e-12 <= t <= seg.length + 1e-12:
            raise DomainError(f"parameter {t} outside [0, {seg.length}]")
        way, offs = seg.waypoints, seg.offsets
        if len(way) == 1:
            return way[0]
        k = int(np.searchsorted(offs, t, side="right")) - 1
        k = min(max(k, 0), len(way) - 2)
        p, q = way[k], way[k + 1]
        frac = t - offs[k]
        # p and q share an edge; find it and move along it
        if isinstance(p, str) and isinstance(q, str):
            u, v = p, q
        else:
            e = p if isinstance(p, TreePoint) else q
            u, v = e.u, e.v
        start = self._edge_coord(p, u, v)
        end = self._edge_coord(q, u, v)
        s = start + (frac if end >= start else -frac)
        s = min(max(s, 0.0), self.adj[u][v])
        return self.point((u, v, s))

    def project(self, seg, p) -> float:
        # in a tree the gate of p onto [a, b] sits at Gromov product (p | b)_a from a
        d_ap = self.dist(seg.a, p)
        d_pb = self.dist(p, seg.b)
        return float(min(max(0.5 * (d_ap + seg.length - d_pb), 0.0), seg.length))

    def as_dict(self):
        return {"type": "tree", "vertices": list(self.vertices), "edges": [[u, v, w] for u, v, w in self.edges]}


def backend_from_dict(d):
    kind = d.get("type")
    if kind == "euclidean":
        return EuclideanBackend(d["dim"])
    if kind == "tree":
        return TreeBackend(d["vertices"], d["edges"])
    raise ValueError(f"unknown backend type {kind!r}")
