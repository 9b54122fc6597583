"""The curtain metric: d_L bounds, their weighted sum, reparametrisation and sampling.

Every bound is relative to a finite candidate family.  A lower bound is a
witness chain that was actually found; an upper bound comes from
d_L <= 1 + d(x, y) and from the size of the family.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..metric import defect_from_matrix, thread_count
from .backends import EuclideanBackend, TreeBackend
from .curtains import EPS, ChainSearch, CurtainFamily, curtain_dual


def default_lambda(L: int) -> float:
    if L < 1:
        raise ValueError(f"L must be >= 1, got {L}")
    return 2.0**-L / 6


def default_tail(L_max: int) -> float:
    """sum of default_lambda(L) over L > L_max."""
    return 2.0**-L_max / 6


@dataclass(frozen=True)
class CurtainModelConfig:
    lam: Callable[[int], float] = default_lambda
    tail: Callable[[int], float] = default_tail
    Lambda: float = 1.0
    L_max: int = 20

    def check(self, horizon: int = 200):
        """Check the weight conditions on partial sums up to `horizon`."""
        if self.L_max < 1:
            raise ValueError("L_max must be >= 1")
        Ls = np.arange(1, horizon + 1)
        lam = np.array([self.lam(int(L)) for L in Ls])
        if not np.all((lam > 0) & (lam < 1)):
            raise ValueError("weights must lie in (0, 1)")
        s0, s1, s2 = lam.sum(), (Ls * lam).sum(), (Ls**2 * lam).sum()
        if not (s0 < s1 < s2):
            raise ValueError(f"need sum lam < sum L lam < sum L^2 lam, got {s0}, {s1}, {s2}")
        if s2 > self.Lambda * (1 + 1e-9):
            raise ValueError(f"sum L^2 lam = {s2} exceeds Lambda = {self.Lambda}")
        tail = self.tail(self.L_max)
        if tail < lam[self.L_max :].sum() * (1 - 1e-9):
            raise ValueError("tail underestimates the remaining weight")
        return self


# ---------------------------------------------------------------- candidates

def pole_grid(length: float, step: float):
    """Pole centres mid + j*step strictly inside a segment of this length."""
    if step <= 0:
        raise ValueError("grid step must be positive")
    half = (length - 1) / 2
    if half <= 1e-12:
        return []
    mid = length / 2
    jmax = int(math.floor(half / step))
    while jmax > 0 and jmax * step >= half - 1e-12:
        jmax -= 1
    return [mid + j * step for j in range(-jmax, jmax + 1)]


def geodesic_family(backend, x, y, step: float = 0.25) -> CurtainFamily:
    """Curtains dual to [x, y] on a symmetric grid of poles."""
    seg = backend.segment(x, y)
    return CurtainFamily([curtain_dual(seg, r) for r in pole_grid(seg.length, step)])


def midpoint_family(backend: TreeBackend, x, y) -> CurtainFamily:
    """Curtains dual to [x, y] at the midpoints of its edges, where they fit."""
    seg = backend.segment(x, y)
    offs = seg.offsets
    out = []
    for a, b in zip(offs, offs[1:]):
        r = (a + b) / 2
        if r - 0.5 > 0 and r + 0.5 < seg.length:
            out.append(curtain_dual(seg, r))
    return CurtainFamily(out)


def random_family(backend: EuclideanBackend, points, n_lines: int, seed: int = 0, step: float = 0.25, radius: float = 5.0):
    """Seeded random lines through the given points, each carrying a pole grid."""
    rng = np.random.default_rng(seed)
    pts = [backend.point(p) for p in points]
    out = []
    for _ in range(n_lines):
        c = pts[int(rng.integers(len(pts)))]
        u = rng.normal(size=backend.dim)
        u /= np.linalg.norm(u)
        seg = backend.segment(c - radius * u, c + radius * u)
        out.extend(curtain_dual(seg, r) for r in pole_grid(seg.length, step))
    return CurtainFamily(out)


# ---------------------------------------------------------------- d_L and the curtain metric

@dataclass(frozen=True)
class DLBounds:
    L: int
    lower: float
    upper: float
    chain_length: int
    witness: bool

    @property
    def exact(self) -> bool:
        # d_L is an integer, so a lower bound at floor(upper) pins it down
        return self.witness and math.floor(self.upper + 1e-12) == self.lower


def _dl(L, n_chain, n_candidates, d):
    upper = min(1.0 + d, n_candidates + 1.0)
    if n_chain == 0:
        return DLBounds(L, 0.0, upper, 0, False)
    return DLBounds(L, float(n_chain + 1), upper, n_chain, True)


def _same_point(backend, x, y):
    return backend.dist(x, y) == 0


def d_L_bounds(x, y, L: int, candidates, backend) -> DLBounds:
    if _same_point(backend, x, y):
        return DLBounds(L, 0.0, 0.0, 0, True)
    search = ChainSearch(x, y, candidates)
    return _dl(L, len(search.chain(L)), len(search.family), backend.dist(x, y))


@dataclass
class DistanceBounds:
    lower: float
    upper: float
    per_L: list = field(default_factory=list)

    def as_dict(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "per_L": [[b.L, b.lower, b.upper] for b in self.per_L],
        }


def curtain_distance_bounds(x, y, config: CurtainModelConfig, backend, candidates=None, step: float = 0.25) -> DistanceBounds:
    """Bounds on the weighted sum of d_L over all L.

    candidates is a family shared by every L, a callable L -> family, or
    None for the geodesic pole grid on [x, y].
    """
    if _same_point(backend, x, y):
        return DistanceBounds(0.0, 0.0, [DLBounds(L, 0.0, 0.0, 0, True) for L in range(1, config.L_max + 1)])
    d = backend.dist(x, y)
    Ls = range(1, config.L_max + 1)
    if candidates is None:
        candidates = geodesic_family(backend, x, y, step)
    if callable(candidates):
        per_L = []
        for L in Ls:
            fam = candidates(L)
            per_L.append(_dl(L, len(ChainSearch(x, y, fam).chain(L)), len(fam), d))
    else:
        search = ChainSearch(x, y, candidates)
        lengths = search.lengths(list(Ls))
        per_L = [_dl(L, lengths[L], len(search.family), d) for L in Ls]
    lam = np.array([config.lam(L) for L in Ls])
    lower = float(lam @ np.array([b.lower for b in per_L]))
    upper = float(lam @ np.array([b.upper for b in per_L]) + config.tail(config.L_max) * (1 + d))
    return DistanceBounds(lower, upper, per_L)


def curtain_oracle(backend, config: Optional[CurtainModelConfig] = None, step: float = 0.25):
    config = config or CurtainModelConfig()

    def oracle(p, q):
        b = curtain_distance_bounds(p, q, config, backend, step=step)
        return b.lower, b.upper

    return oracle


def exact_oracle(backend):
    def oracle(p, q):
        d = backend.dist(p, q)
        return d, d

    return oracle


# ---------------------------------------------------------------- reparametrisation

class DensityError(ValueError):
    def __init__(self, t):
        super().__init__(f"no sample certified to lie at curtain distance [{t}, {t + 1}] from the origin")
        self.t = t


@dataclass
class RoughGeodesic:
    indices: list
    params: list
    defect: float
    q: float

    @property
    def ok(self) -> bool:
        return self.defect <= self.q

    def as_dict(self):
        return {"indices": self.indices, "params": self.params, "defect": self.defect, "q": self.q, "ok": self.ok}


def _check_q(q, Lambda):
    need = max(6 * Lambda, 1) + 1
    if q < need:
        raise ValueError(f"q must be at least {need}, got {q}")


def _greedy(lo0, hi0):
    idx, ts = [0], [0]
    for t in range(1, int(math.floor(lo0.max())) + 1):
        ok = np.flatnonzero((lo0 >= t - EPS) & (hi0 <= t + 1 + EPS))
        if len(ok) == 0:
            raise DensityError(t)
        idx.append(int(ok[0]))
        ts.append(t)
    return idx, ts


def reparametrize_to_rough_geodesic(lower, upper, q: float, Lambda: float = 1.0) -> RoughGeodesic:
    """Greedy selection Q(0), Q(1), ... along samples ordered from the origin.

    lower and upper bound the pairwise curtain distances between samples.
    Q(t) is the first sample certified to sit at distance in [t, t + 1]
    from sample 0.  The defect is taken over the whole interval of each
    distance, so it is an upper bound for the true defect.
    """
    _check_q(q, Lambda)
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != hi.shape or lo.ndim != 2 or lo.shape[0] != lo.shape[1]:
        raise ValueError("bound matrices must be square and of equal shape")
    if np.any(lo > hi + 1e-12):
        raise ValueError("lower bound exceeds upper bound")
    if len(lo) == 0:
        raise ValueError("no samples")
    idx, ts = _greedy(lo[0], hi[0])
    sel = np.ix_(idx, idx)
    defect = max(defect_from_matrix(lo[sel], ts), defect_from_matrix(hi[sel], ts))
    return RoughGeodesic(idx, ts, defect, float(q))


def reparametrize_samples(points, oracle, q: float, Lambda: float = 1.0) -> RoughGeodesic:
    """As above, querying the oracle only from the origin and among the selection."""
    _check_q(q, Lambda)
    if not points:
        raise ValueError("no samples")
    row = np.array([[0.0, 0.0]] + [oracle(points[0], p) for p in points[1:]])
    idx, ts = _greedy(row[:, 0], row[:, 1])
    lo, hi = bound_matrices([points[i] for i in idx], oracle)
    defect = max(defect_from_matrix(lo, ts), defect_from_matrix(hi, ts))
    return RoughGeodesic(idx, ts, defect, float(q))


# ---------------------------------------------------------------- sampling and four-point defects

def sample_points(backend, n: int, seed: int = 0, region=None):
    rng = np.random.default_rng(seed)
    if isinstance(backend, EuclideanBackend):
        box = np.asarray(region if region is not None else [[0.0, 4.0]] * backend.dim, dtype=float)
        pts = box[:, 0] + rng.random((n, backend.dim)) * (box[:, 1] - box[:, 0])
        return [p for p in pts]
    edges = backend.edges if region is None else [e for e in backend.edges if (e[0], e[1]) in set(map(tuple, region))]
    if not edges:
        return list(rng.choice(backend.vertices, size=n))
    w = np.array([e[2] for e in edges])
    pick = rng.choice(len(edges), size=n, p=w / w.sum())
    return [backend.point((edges[k][0], edges[k][1], float(rng.random() * edges[k][2]))) for k in pick]


def bound_matrices(points, oracle):
    n = len(points)
    lo = np.zeros((n, n))
    hi = np.zeros((n, n))
    for i, j in itertools.combinations(range(n), 2):
        a, b = oracle(points[i], points[j])
        lo[i, j] = lo[j, i] = a
        hi[i, j] = hi[j, i] = b
    return lo, hi


def _defect_rows(lo, hi, i, trip):
    b, c, d = trip.T
    los = np.stack([lo[i, b] + lo[c, d], lo[i, c] + lo[b, d], lo[i, d] + lo[b, c]], axis=1)
    his = np.stack([hi[i, b] + hi[c, d], hi[i, c] + hi[b, d], hi[i, d] + hi[b, c]], axis=1)
    best = 0.0
    for k in range(3):
        others = np.maximum(his[:, (k + 1) % 3], his[:, (k + 2) % 3])
        best = max(best, float((los[:, k] - others).max(initial=0.0)))
    return best


def four_point_defect_lower(lower, upper) -> float:
    """Certified lower bound for the four-point defect from interval distances.

    For each quadruple the defect is at least the lower bound of one pairing
    sum minus the upper bounds of the other two.  With lower == upper this
    is the exact four-point delta.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    n = len(lo)
    if n < 4:
        return 0.0
    trip = np.array(list(itertools.combinations(range(n), 3)), dtype=np.intp)
    # triples are lexicographic, so those above i form a suffix
    start = np.searchsorted(trip[:, 0], np.arange(n), side="left")
    jobs = [(i, trip[start[i + 1] :]) for i in range(n - 3)]
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            return max(ex.map(lambda job: _defect_rows(lo, hi, *job), jobs))
    return max(_defect_rows(lo, hi, i, t) for i, t in jobs)


def empirical_four_point_delta(backend, oracle, n_samples: int, seed: int = 0, region=None) -> float:
    if n_samples < 4:
        raise ValueError("need at least 4 samples")
    pts = sample_points(backend, n_samples, seed, region)
    return four_point_defect_lower(*bound_matrices(pts, oracle))
