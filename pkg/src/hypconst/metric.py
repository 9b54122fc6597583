"""Finite metric spaces, path systems, and the checkable hypotheses of guessing geodesics.

Paths are finite point sequences.  A subpath is a contiguous run of indices,
and every quantity below is the smallest constant for which the matching
inequality holds on the instance.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import HyperbolicityBounds, QuasiParams, bounds_from_kappa, solve_kappa

METRIC_TOL = 1e-9


class MetricError(ValueError):
    def __init__(self, message, triple=None):
        super().__init__(message)
        self.triple = triple


class PathError(ValueError):
    pass


def thread_count() -> int:
    try:
        return max(1, int(os.environ.get("HYPCONST_THREADS", "1")))
    except ValueError:
        return 1


class FiniteMetricSpace:
    def __init__(self, labels, dist, validate=True, tol=METRIC_TOL):
        self.labels = [str(l) for l in labels]
        self.dist = np.asarray(dist, dtype=float)
        n = len(self.labels)
        if self.dist.shape != (n, n):
            raise MetricError(f"distance matrix shape {self.dist.shape} does not match {n} labels")
        if len(set(self.labels)) != n:
            raise MetricError("duplicate labels")
        self.index = {l: i for i, l in enumerate(self.labels)}
        if validate:
            self.validate(tol)

    def __len__(self):
        return len(self.labels)

    def validate(self, tol=METRIC_TOL):
        d = self.dist
        if not np.all(np.isfinite(d)):
            raise MetricError("non-finite distance")
        if np.any(d < 0):
            i, j = np.argwhere(d < 0)[0]
            raise MetricError(f"negative distance between {self.labels[i]} and {self.labels[j]}")
        if np.any(np.abs(np.diag(d)) > tol):
            raise MetricError("nonzero diagonal")
        if np.any(np.abs(d - d.T) > tol):
            i, j = np.argwhere(np.abs(d - d.T) > tol)[0]
            raise MetricError(f"asymmetric distance between {self.labels[i]} and {self.labels[j]}")
        scale = max(1.0, float(d.max(initial=0.0)))
        for k in range(len(d)):
            # d(i, j) <= d(i, k) + d(k, j) for this k, all i, j at once
            bad = d > d[:, k][:, None] + d[k, :][None, :] + tol * scale
            if bad.any():
                i, j = np.argwhere(bad)[0]
                trip = (self.labels[i], self.labels[k], self.labels[j])
                raise MetricError(f"triangle inequality fails for {trip}", trip)

    def scaled(self, t):
        return FiniteMetricSpace(self.labels, self.dist * t, validate=False)

    def permuted(self, perm):
        perm = list(perm)
        return FiniteMetricSpace([self.labels[p] for p in perm], self.dist[np.ix_(perm, perm)], validate=False)

    @classmethod
    def from_points(cls, points, labels=None):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        d = np.sqrt(((pts[:, None, :] - pts[None, :, :]) ** 2).sum(-1))
        labels = labels if labels is not None else [str(i) for i in range(len(pts))]
        return cls(labels, d)


class PathSystem:
    """One path per unordered pair, stored once and reversed on demand."""

    def __init__(self, n, paths):
        self.n = n
        self.paths = {}
        for (x, y), seq in paths.items():
            seq = tuple(int(p) for p in seq)
            if not seq:
                raise PathError(f"empty path for {(x, y)}")
            if seq[0] != x or seq[-1] != y:
                raise PathError(f"path for {(x, y)} runs {seq[0]} -> {seq[-1]}")
            if any(p < 0 or p >= n for p in seq):
                raise PathError(f"path for {(x, y)} leaves the space")
            if x > y:
                x, y, seq = y, x, seq[::-1]
            self.paths[(x, y)] = seq

    def __len__(self):
        return len(self.paths)

    def get(self, x, y):
        if x == y:
            return self.paths.get((x, x), (x,))
        if x < y:
            return self.paths[(x, y)]
        return self.paths[(y, x)][::-1]

    def missing_pairs(self):
        return [(i, j) for i in range(self.n) for j in range(i + 1, self.n) if (i, j) not in self.paths]

    def require_complete(self):
        if self.n >= 2 and not self.paths:
            raise PathError("empty path system")
        miss = self.missing_pairs()
        if miss:
            raise PathError(f"path system misses {len(miss)} pairs, e.g. {miss[0]}")

    def permuted(self, perm):
        # perm[new] = old
        inv = {old: new for new, old in enumerate(perm)}
        return PathSystem(self.n, {(inv[x], inv[y]): [inv[p] for p in seq] for (x, y), seq in self.paths.items()})


def _check_indices(path, space):
    n = len(space)
    for p in path:
        if not 0 <= p < n:
            raise PathError(f"unknown point index {p}")


def min_coarse_connectivity(path, space: FiniteMetricSpace) -> float:
    path = list(path)
    if not path:
        raise PathError("empty path")
    _check_indices(path, space)
    if len(path) == 1:
        return 0.0
    idx = np.asarray(path)
    return float(space.dist[idx[:-1], idx[1:]].max())


class _Tables:
    """Per-path lookups shared by the containment constants.

    pid[x, y] is the id of the stored path between x and y (the singleton path
    for x == y), member[k] marks its points and to_path[k, p] = d(p, path k).
    """

    def __init__(self, system: PathSystem, space: FiniteMetricSpace):
        system.require_complete()
        n = len(space)
        seqs = [(i,) for i in range(n)]
        pid = np.zeros((n, n), dtype=np.intp)
        for i in range(n):
            pid[i, i] = i
        for (x, y), seq in sorted(system.paths.items()):
            _check_indices(seq, space)
            if x == y:
                seqs[x] = seq
                continue
            pid[x, y] = pid[y, x] = len(seqs)
            seqs.append(seq)
        member = np.zeros((len(seqs), n), dtype=bool)
        for k, s in enumerate(seqs):
            member[k, list(s)] = True
        D = space.dist
        to_path = np.where(member[:, None, :], D[None, :, :], np.inf).min(axis=2)
        self.seqs, self.pid, self.member, self.to_path = seqs, pid, member, to_path

    def excess(self, side, others):
        """max over p on each side of min over the other paths of d(p, path)."""
        m = self.to_path[others[0]]
        for o in others[1:]:
            m = np.minimum(m, self.to_path[o])
        vals = np.where(self.member[side], m, -np.inf).max(axis=-1)
        return vals


def g1_constant(system: PathSystem, space: FiniteMetricSpace) -> float:
    system.require_complete()
    D = space.dist
    best = 0.0
    for (x, y), seq in system.paths.items():
        if D[x, y] <= 0:
            continue
        idx = np.asarray(seq)
        diam = D[np.ix_(idx, idx)].max()
        best = max(best, 2 * diam / D[x, y])
    return float(best)


def _hausdorff(D, a, b):
    sub = D[np.ix_(a, b)]
    return max(sub.min(axis=1).max(), sub.min(axis=0).max())


def g2_constant(system: PathSystem, space: FiniteMetricSpace) -> float:
    system.require_complete()
    D = space.dist
    best = 0.0
    for seq in system.paths.values():
        _check_indices(seq, space)
        for s in range(len(seq)):
            for t in range(s + 1, len(seq)):
                sub = list(seq[s : t + 1])
                again = list(system.get(seq[s], seq[t]))
                best = max(best, _hausdorff(D, sub, again))
    return float(best)


def g3_constant(system: PathSystem, space: FiniteMetricSpace) -> float:
    tab = _Tables(system, space)
    n = len(space)
    x, y, z = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    vals = tab.excess(tab.pid[x, y], [tab.pid[x, z], tab.pid[z, y]])
    return float(max(vals.max(initial=0.0), 0.0))


def thin_triangle_constant(system: PathSystem, space: FiniteMetricSpace) -> float:
    tab = _Tables(system, space)
    n = len(space)
    trip = np.array(list(itertools.combinations_with_replacement(range(n), 3)), dtype=np.intp).reshape(-1, 3)
    if len(trip) == 0:
        return 0.0
    a, b, c = trip.T
    sides = [tab.pid[a, b], tab.pid[b, c], tab.pid[c, a]]
    best = 0.0
    for i in range(3):
        others = [sides[j] for j in range(3) if j != i]
        best = max(best, float(tab.excess(sides[i], others).max()))
    return best


def thin_quadrilateral_constant(system: PathSystem, space: FiniteMetricSpace) -> float:
    tab = _Tables(system, space)
    n = len(space)
    grids = np.meshgrid(*[np.arange(n)] * 4, indexing="ij")
    v = [g.ravel() for g in grids]
    sides = [tab.pid[v[i], v[(i + 1) % 4]] for i in range(4)]
    best = 0.0
    for i in range(4):
        others = [sides[j] for j in range(4) if j != i]
        best = max(best, float(tab.excess(sides[i], others).max()))
    return best


def _four_point_block(D, quads):
    a, b, c, d = quads.T
    sums = np.stack([D[a, b] + D[c, d], D[a, c] + D[b, d], D[a, d] + D[b, c]], axis=1)
    sums.sort(axis=1)
    return float((sums[:, 2] - sums[:, 1]).max(initial=0.0))


def four_point_delta_exact(space: FiniteMetricSpace, block: int = 200_000) -> float:
    """Largest minus second-largest pairing sum, maximised over all quadruples."""
    n = len(space)
    if n < 4:
        return 0.0
    D = space.dist
    combos = itertools.combinations(range(n), 4)
    blocks = []
    while True:
        chunk = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, block)), dtype=np.intp)
        if chunk.size == 0:
            break
        blocks.append(chunk.reshape(-1, 4))
    workers = thread_count()
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(workers) as ex:
            return max(ex.map(lambda q: _four_point_block(D, q), blocks))
    return max(_four_point_block(D, q) for q in blocks)


def defect_from_matrix(dmat, params) -> float:
    t = np.asarray(params, dtype=float)
    d = np.asarray(dmat, dtype=float)
    if d.shape != (len(t), len(t)):
        raise ValueError("parametrization length does not match the path")
    if len(t) <= 1:
        return 0.0
    if np.any(np.diff(t) <= 0):
        raise ValueError("parametrization must be strictly increasing")
    return float(np.abs(d - np.abs(t[:, None] - t[None, :])).max())


def rough_geodesic_defect(path, space: FiniteMetricSpace, parametrization) -> float:
    path = list(path)
    if len(path) != len(parametrization):
        raise ValueError(f"path has {len(path)} points but {len(parametrization)} parameters")
    _check_indices(path, space)
    idx = np.asarray(path, dtype=np.intp)
    return defect_from_matrix(space.dist[np.ix_(idx, idx)], parametrization)


def arclength(path, space: FiniteMetricSpace):
    idx = np.asarray(path, dtype=np.intp)
    steps = space.dist[idx[:-1], idx[1:]]
    return np.concatenate([[0.0], np.cumsum(steps)])


def max_path_defect(system: PathSystem, space: FiniteMetricSpace) -> float:
    """Largest rough-geodesic defect over the system, each path taken at arc length.

    Paths that revisit a point (zero-length steps) are skipped.
    """
    worst = 0.0
    for seq in system.paths.values():
        t = arclength(seq, space)
        if len(seq) > 1 and np.all(np.diff(t) > 0):
            worst = max(worst, rough_geodesic_defect(seq, space, t))
    return worst


@dataclass
class VerifierReport:
    coarse_c: float
    D_g1: float
    D_g2: float
    D_g3: float
    D_combined: float
    delta_four_exact: float
    thin_triangle: float
    thin_quad: float
    q: float
    certified: HyperbolicityBounds
    max_path_defect: Optional[float] = None

    @property
    def consistent(self) -> bool:
        return self.certified.delta is not None and self.delta_four_exact <= self.certified.delta

    def as_dict(self):
        return {
            "coarse_c": self.coarse_c,
            "D_g1": self.D_g1,
            "D_g2": self.D_g2,
            "D_g3": self.D_g3,
            "D_combined": self.D_combined,
            "delta_four_exact": self.delta_four_exact,
            "thin_triangle": self.thin_triangle,
            "thin_quad": self.thin_quad,
            "q": self.q,
            "max_path_defect": self.max_path_defect,
            "certified": self.certified.as_dict(),
            "consistent": self.consistent,
        }


def certify(system: PathSystem, space: FiniteMetricSpace, q: float) -> VerifierReport:
    if q < 1:
        raise ValueError(f"q must be >= 1, got {q}")
    system.require_complete()
    if len(system) == 0:
        raise PathError("empty path system")
    coarse = max(min_coarse_connectivity(seq, space) for seq in system.paths.values())
    g1 = g1_constant(system, space)
    g2 = g2_constant(system, space)
    g3 = g3_constant(system, space)
    Dc = max(coarse, g1, g2, g3)
    params = QuasiParams(1.0, float(q), Dc)
    bounds = bounds_from_kappa(params, solve_kappa(params), "fixed-point")
    return VerifierReport(
        coarse_c=coarse,
        D_g1=g1,
        D_g2=g2,
        D_g3=g3,
        D_combined=Dc,
        delta_four_exact=four_point_delta_exact(space),
        thin_triangle=thin_triangle_constant(system, space),
        thin_quad=thin_quadrilateral_constant(system, space),
        q=float(q),
        certified=bounds,
        max_path_defect=max_path_defect(system, space),
    )
