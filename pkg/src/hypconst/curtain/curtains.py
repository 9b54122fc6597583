"""Curtains, halfspaces, chains and L-separation.

A curtain dual to a segment alpha at r is the set of points whose projection
onto alpha lands in the pole [r - 1/2, r + 1/2].  Points projecting below the
pole form the minus halfspace, above it the plus halfspace.

Set-level relations between curtains are exact on both backends:

* Euclidean: an interior pole makes the curtain an infinite slab normal to
  alpha, so two curtains can only be disjoint when their slabs are parallel.
* Tree: the minus halfspace is the branch at alpha(r - 1/2) containing
  alpha(0), and similarly for plus.  Containment between such branches is
  decided by Gromov products.

All strict comparisons carry a margin of EPS so that touching boundaries
count as meeting.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .backends import DomainError, EuclideanBackend, GeodesicSegment

EPS = 1e-9


class Side(enum.Enum):
    MINUS = "minus"
    ON = "on"
    PLUS = "plus"


@dataclass(frozen=True, eq=False)
class Curtain:
    base: GeodesicSegment
    r: float

    @property
    def backend(self):
        return self.base.backend

    @property
    def pole(self):
        return (self.r - 0.5, self.r + 0.5)

    def flipped(self):
        return Curtain(self.base.reversed(), self.base.length - self.r)

    def as_dict(self):
        b = self.backend
        enc = (lambda p: [float(v) for v in p]) if isinstance(b, EuclideanBackend) else (lambda p: p if isinstance(p, str) else list(p))
        return {"a": enc(self.base.a), "b": enc(self.base.b), "r": self.r}

    # halfspace boundaries as (point, direction-witness) pairs, tree only
    @cached_property
    def _tree_minus(self):
        return self.base.at(self.r - 0.5), self.base.a

    @cached_property
    def _tree_plus(self):
        return self.base.at(self.r + 0.5), self.base.b


def curtain_dual(geodesic: GeodesicSegment, r: float) -> Curtain:
    lo, hi = r - 0.5, r + 0.5
    if not (lo > 0 and hi < geodesic.length):
        raise DomainError(f"pole [{lo}, {hi}] is not interior to [0, {geodesic.length}]")
    return Curtain(geodesic, float(r))


def projection(curtain: Curtain, p) -> float:
    return curtain.backend.project(curtain.base, p)


def side_of(curtain: Curtain, p) -> Side:
    t = projection(curtain, p)
    lo, hi = curtain.pole
    if t < lo - EPS:
        return Side.MINUS
    if t > hi + EPS:
        return Side.PLUS
    return Side.ON


def contains(curtain: Curtain, p) -> bool:
    return side_of(curtain, p) is Side.ON


def separates_points(curtain: Curtain, x, y) -> bool:
    sx, sy = side_of(curtain, x), side_of(curtain, y)
    return {sx, sy} == {Side.MINUS, Side.PLUS}


# ---------------------------------------------------------------- set relations

def _slab(c: Curtain):
    b = c.backend
    u = b.direction(c.base)
    return u, float(np.dot(c.base.a, u) + c.r)


def _in_branch(backend, z, w, p):
    # p lies in the component of T \ {z} containing w
    gp = backend.dist(z, p) + backend.dist(z, w) - backend.dist(p, w)
    return gp > 2 * EPS


def _tree_subset(k: Curtain, h: Curtain, side: Side) -> bool:
    b = h.backend
    z, w = h._tree_minus if side is Side.MINUS else h._tree_plus
    for zk, wk in (k._tree_minus, k._tree_plus):
        if _in_branch(b, z, w, zk) and _in_branch(b, zk, wk, z):
            return True
    return False


def subset_of_side(k: Curtain, h: Curtain, side: Side) -> bool:
    """Whether the whole curtain k lies in the given open halfspace of h."""
    if side is Side.ON:
        raise ValueError("side must be MINUS or PLUS")
    b = h.backend
    if b is not k.backend:
        raise ValueError("curtains live on different backends")
    if isinstance(b, EuclideanBackend):
        uh, ch = _slab(h)
        uk, ck = _slab(k)
        dot = float(np.dot(uh, uk))
        if abs(dot) < 1 - 1e-12:
            return False
        lo, hi = (ck - 0.5, ck + 0.5) if dot > 0 else (-ck - 0.5, -ck + 0.5)
        if side is Side.MINUS:
            return hi < ch - 0.5 - EPS
        return lo > ch + 0.5 + EPS
    return _tree_subset(k, h, side)


def disjoint(h: Curtain, k: Curtain) -> bool:
    return subset_of_side(k, h, Side.MINUS) or subset_of_side(k, h, Side.PLUS)


def meets(h: Curtain, k: Curtain) -> bool:
    return not disjoint(h, k)


def separates(h: Curtain, a: Curtain, b: Curtain) -> bool:
    return (subset_of_side(a, h, Side.MINUS) and subset_of_side(b, h, Side.PLUS)) or (
        subset_of_side(a, h, Side.PLUS) and subset_of_side(b, h, Side.MINUS)
    )


def is_chain(curtains) -> bool:
    cs = list(curtains)
    if not cs:
        raise ValueError("empty curtain list")
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            if not disjoint(cs[i], cs[j]):
                return False
    return all(separates(cs[i], cs[i - 1], cs[i + 1]) for i in range(1, len(cs) - 1))


# ---------------------------------------------------------------- families

class CurtainFamily:
    """A finite candidate family with cached pairwise relations.

    below[i, j] means curtain i lies in the minus halfspace of curtain j,
    above[i, j] that it lies in the plus halfspace.
    """

    def __init__(self, curtains):
        self.curtains = list(curtains)
        backends = {id(c.backend) for c in self.curtains}
        if len(backends) > 1:
            raise ValueError("family mixes backends")
        self._mc = {}

    def __len__(self):
        return len(self.curtains)

    def __iter__(self):
        return iter(self.curtains)

    @cached_property
    def _relations(self):
        m = len(self.curtains)
        below = np.zeros((m, m), dtype=bool)
        above = np.zeros((m, m), dtype=bool)
        if m == 0:
            return below, above
        b = self.curtains[0].backend
        if isinstance(b, EuclideanBackend):
            U = np.array([_slab(c)[0] for c in self.curtains])
            C = np.array([_slab(c)[1] for c in self.curtains])
            dot = U @ U.T  # dot[i, j] = u_i . u_j
            par = np.abs(dot) >= 1 - 1e-12
            # range of p . u_j over slab i, for parallel pairs
            sgn = np.where(dot > 0, 1.0, -1.0)
            lo = sgn * C[:, None] - 0.5
            hi = sgn * C[:, None] + 0.5
            below = par & (hi < C[None, :] - 0.5 - EPS)
            above = par & (lo > C[None, :] + 0.5 + EPS)
        else:
            for i, k in enumerate(self.curtains):
                for j, h in enumerate(self.curtains):
                    if i != j:
                        below[i, j] = _tree_subset(k, h, Side.MINUS)
                        above[i, j] = _tree_subset(k, h, Side.PLUS)
        return below, above

    @property
    def below(self):
        return self._relations[0]

    @property
    def above(self):
        return self._relations[1]

    @cached_property
    def disjoint(self):
        return self.below | self.above

    @cached_property
    def single_axis(self) -> bool:
        """All curtains are slabs along one common axis (or duals to one tree segment).

        For such families, every candidate meeting two disjoint curtains
        covers the gap between them, so no two of those candidates are
        disjoint and chains meeting both have length at most 1.
        """
        if not self.curtains:
            return True
        b = self.curtains[0].backend
        if isinstance(b, EuclideanBackend):
            U = np.array([_slab(c)[0] for c in self.curtains])
            return bool(np.all(np.abs(U @ U[0]) >= 1 - 1e-12))
        first = self.curtains[0].base.key()
        allowed = {first, (first[1], first[0])}
        return all(c.base.key() in allowed for c in self.curtains)

    def oriented_edges(self, subset=None):
        """Chain steps over oriented curtains.

        Node 2i is curtain i, node 2i+1 its flip.  An edge a -> b means a
        lies in the minus side of b and b in the plus side of a.
        """
        idx = np.arange(len(self)) if subset is None else np.asarray(subset, dtype=np.intp)
        B = self.below[np.ix_(idx, idx)]
        A = self.above[np.ix_(idx, idx)]
        m = len(idx)
        E = np.zeros((2 * m, 2 * m), dtype=bool)
        # a = (i, o), b = (j, o'); i in (j, o')^- ; j in (i, o)^+
        # (j, +)^- = j^-, (j, -)^- = j^+ ; (i, +)^+ = i^+, (i, -)^+ = i^-
        E[0::2, 0::2] = B & A.T
        E[0::2, 1::2] = A & A.T
        E[1::2, 0::2] = B & B.T
        E[1::2, 1::2] = A & B.T
        return E

    def max_chain_meeting(self, i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in self._mc:
            if not self.disjoint[i, j]:
                raise ValueError("curtains are not disjoint")
            S = np.flatnonzero(~self.disjoint[i] & ~self.disjoint[j])
            if len(S) == 0:
                self._mc[key] = 0
            elif self.single_axis:
                self._mc[key] = 1
            else:
                self._mc[key] = longest_path(self.oriented_edges(S))[0]
        return self._mc[key]

    def max_chain_meeting_exact(self, i: int, j: int) -> int:
        """Same as max_chain_meeting but never takes the single-axis shortcut."""
        S = np.flatnonzero(~self.disjoint[i] & ~self.disjoint[j])
        return longest_path(self.oriented_edges(S))[0] if len(S) else 0

    def to_list(self):
        return [c.as_dict() for c in self.curtains]


def longest_path(E):
    """Longest path (counted in nodes) in the DAG with adjacency matrix E.

    Layered topological sort: a node is released once all its predecessors
    are, so its layer is the length of the longest path ending there.
    Returns (length, nodes); an empty graph gives (0, []).
    """
    E = np.asarray(E, dtype=bool)
    m = len(E)
    if m == 0:
        return 0, []
    indeg = E.sum(axis=0)
    layer = np.zeros(m, dtype=np.int64)
    done = np.zeros(m, dtype=bool)
    frontier = np.flatnonzero(indeg == 0)
    k = 0
    while frontier.size:
        k += 1
        layer[frontier] = k
        done[frontier] = True
        indeg = indeg - E[frontier].sum(axis=0)
        frontier = np.flatnonzero((indeg == 0) & ~done)
    if not done.all():
        raise ValueError("graph has a cycle")
    path = [int(layer.argmax())]
    while layer[path[-1]] > 1:
        v = path[-1]
        path.append(int(np.flatnonzero(E[:, v] & (layer == layer[v] - 1))[0]))
    return k, path[::-1]


def _family(candidates):
    return candidates if isinstance(candidates, CurtainFamily) else CurtainFamily(candidates)


def _locate(family, h):
    for i, c in enumerate(family.curtains):
        if c is h:
            return i
    return None


def max_chain_meeting_both(h1: Curtain, h2: Curtain, candidates) -> int:
    """Longest chain from the candidates all of whose members meet h1 and h2."""
    if not disjoint(h1, h2):
        raise ValueError("h1 and h2 must be disjoint")
    fam = _family(candidates)
    i, j = _locate(fam, h1), _locate(fam, h2)
    if i is not None and j is not None:
        return fam.max_chain_meeting(i, j)
    S = [k for k, c in enumerate(fam.curtains) if meets(c, h1) and meets(c, h2)]
    if not S:
        return 0
    return longest_path(fam.oriented_edges(S))[0]


def is_L_separated(h1: Curtain, h2: Curtain, L: int, candidates) -> bool:
    """Candidate-relative: True only certifies against the given family."""
    return max_chain_meeting_both(h1, h2, candidates) <= L


@dataclass
class Chain:
    curtains: list
    indices: list

    def __len__(self):
        return len(self.curtains)


class ChainSearch:
    """Longest L-chains separating x from y for every L, sharing one family.

    Candidates that separate x from y are oriented with x on the minus side;
    an edge i -> j requires i in the minus side of j, j in the plus side of
    i, and the pair L-separated relative to the whole family.
    """

    def __init__(self, x, y, candidates):
        self.family = _family(candidates)
        fam = self.family
        sep, flip = [], []
        for k, c in enumerate(fam.curtains):
            sx, sy = side_of(c, x), side_of(c, y)
            if sx is Side.MINUS and sy is Side.PLUS:
                sep.append(k)
                flip.append(False)
            elif sx is Side.PLUS and sy is Side.MINUS:
                sep.append(k)
                flip.append(True)
        self.sep = np.asarray(sep, dtype=np.intp)
        fl = np.asarray(flip, dtype=bool)
        B = fam.below[np.ix_(self.sep, self.sep)]
        A = fam.above[np.ix_(self.sep, self.sep)]
        # orient each curtain so that x is on its minus side; flipping j swaps
        # its halfspaces, the set i itself is unchanged
        below_o = np.where(fl[None, :], A, B)
        above_o = np.where(fl[None, :], B, A)
        self.edges = below_o & above_o.T
        self._mc = None

    def _mc_matrix(self):
        if self._mc is None:
            m = len(self.sep)
            fam = self.family
            if fam.single_axis:
                # chains meeting both have length at most 1; 1 iff some candidate meets both
                M = (~fam.disjoint[self.sep]).astype(np.float32)
                self._mc = ((M @ M.T) > 0).astype(np.int64) & self.edges
                return self._mc
            mc = np.zeros((m, m), dtype=np.int64)
            for a, b in zip(*np.nonzero(self.edges)):
                mc[a, b] = fam.max_chain_meeting(int(self.sep[a]), int(self.sep[b]))
            self._mc = mc
        return self._mc

    def chain(self, L: int) -> Chain:
        if L < 1:
            raise ValueError("L must be a positive integer")
        if len(self.sep) == 0:
            return Chain([], [])
        E = self.edges & (self._mc_matrix() <= L)
        _, nodes = longest_path(E)
        idx = [int(self.sep[n]) for n in nodes]
        return Chain([self.family.curtains[k] for k in idx], idx)

    def lengths(self, Ls):
        """Chain length for each L, recomputing only where L crosses a pair's threshold."""
        out = {}
        if len(self.sep) == 0:
            return {L: 0 for L in Ls}
        mc = self._mc_matrix()
        cache = {}
        for L in Ls:
            key = tuple(np.flatnonzero(self.edges & (mc > L)))
            if key not in cache:
                cache[key] = longest_path(self.edges & (mc <= L))[0]
            out[L] = cache[key]
        return out


def longest_L_chain_separating(x, y, L: int, candidates) -> Chain:
    return ChainSearch(x, y, candidates).chain(L)
