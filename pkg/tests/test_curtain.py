import itertools
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import packing_chain_length
from hypconst.curtain import (
    CurtainFamily,
    CurtainModelConfig,
    DensityError,
    DomainError,
    EuclideanBackend,
    Side,
    TreeBackend,
    backend_from_dict,
    bound_matrices,
    curtain_distance_bounds,
    curtain_dual,
    curtain_oracle,
    d_L_bounds,
    default_lambda,
    default_tail,
    disjoint,
    empirical_four_point_delta,
    exact_oracle,
    four_point_defect_lower,
    geodesic_family,
    is_chain,
    is_L_separated,
    longest_L_chain_separating,
    longest_path,
    max_chain_meeting_both,
    midpoint_family,
    pole_grid,
    projection,
    random_family,
    reparametrize_samples,
    reparametrize_to_rough_geodesic,
    sample_points,
    separates,
    separates_points,
    side_of,
)
from hypconst.metric import FiniteMetricSpace, four_point_delta_exact

R1 = EuclideanBackend(1)
R2 = EuclideanBackend(2)
CFG = CurtainModelConfig()


def path_tree():
    return TreeBackend("abc", [("a", "b", 1), ("b", "c", 1)])


def line_slab(lo, base=(-10.0, 10.0)):
    """Curtain on the real line occupying [lo, lo + 1]."""
    seg = R1.segment(base[0], base[1])
    return curtain_dual(seg, lo + 0.5 - base[0])


def line_grid(lo, hi, spacing, base=(-10.0, 10.0)):
    out = []
    k = 0
    while lo + k * spacing <= hi + 1e-9:
        out.append(line_slab(lo + k * spacing, base))
        k += 1
    return out


# ---------------------------------------------------------------- backends

def test_projection_onto_axis():
    seg = R2.segment((-5, 0), (5, 0))
    assert R2.project(seg, (3, 4)) == pytest.approx(8.0)


def test_projection_clamps_to_endpoint():
    seg = R2.segment((-5, 0), (5, 0))
    assert R2.project(seg, (9, 1)) == pytest.approx(10.0)
    assert np.allclose(seg.at(10.0), (5, 0))


def test_tree_gate_projection():
    t = TreeBackend("abcd", [("a", "b", 1), ("b", "c", 1), ("b", "d", 1)])
    seg = t.segment("a", "c")
    assert t.project(seg, "d") == pytest.approx(1.0)
    assert seg.at(1.0) == "b"


def test_projection_rejects_foreign_points():
    seg = R2.segment((0, 0), (1, 0))
    with pytest.raises(DomainError):
        R2.project(seg, (1, 2, 3))
    t = path_tree()
    with pytest.raises(DomainError):
        t.project(t.segment("a", "c"), "z")
    with pytest.raises(DomainError):
        t.point(("a", "b", 1.5))


@pytest.mark.parametrize(
    "vertices, edges",
    [
        ("abc", [("a", "b", 1), ("b", "c", 1), ("c", "a", 1)]),
        ("abcd", [("a", "b", 1), ("c", "d", 1)]),
        ("ab", [("a", "b", 0)]),
        ("ab", [("a", "x", 1)]),
    ],
)
def test_tree_validation(vertices, edges):
    with pytest.raises(ValueError):
        TreeBackend(vertices, edges)


def test_euclidean_validation():
    with pytest.raises(ValueError):
        EuclideanBackend(0)


def test_backend_round_trip():
    t = TreeBackend("abc", [("a", "b", 1.5), ("b", "c", 2)])
    assert backend_from_dict(t.as_dict()).as_dict() == t.as_dict()
    assert backend_from_dict(R2.as_dict()).dim == 2


def test_tree_dist_matches_networkx(rng):
    g = nx.Graph()
    for v in range(1, 12):
        g.add_edge(str(rng.randrange(v)), str(v), weight=rng.uniform(0.2, 3))
    t = TreeBackend(sorted(g.nodes), [(u, v, w["weight"]) for u, v, w in g.edges(data=True)])
    ref = dict(nx.all_pairs_dijkstra_path_length(g))
    for u, v in itertools.combinations(g.nodes, 2):
        assert t.dist(u, v) == pytest.approx(ref[u][v])


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 1), st.floats(0, 1))
def test_tree_segment_is_arc_length(seed, s, u):
    r = random.Random(seed)
    verts = [str(i) for i in range(8)]
    edges = [(verts[r.randrange(i)], verts[i], r.uniform(0.3, 2)) for i in range(1, 8)]
    t = TreeBackend(verts, edges)
    a, b = r.sample(verts, 2)
    seg = t.segment(a, b)
    s, u = s * seg.length, u * seg.length
    assert t.dist(seg.at(s), seg.at(u)) == pytest.approx(abs(s - u), abs=1e-9)
    assert t.project(seg, seg.at(s)) == pytest.approx(s, abs=1e-9)


# ---------------------------------------------------------------- curtains and sides

def test_midpoint_curtain_is_unit_slab():
    c = curtain_dual(R2.segment((-5, 0), (5, 0)), 5.0)
    assert side_of(c, (0.5, 30)) is Side.ON
    assert side_of(c, (-0.5, -30)) is Side.ON
    assert side_of(c, (0.51, 0)) is Side.PLUS
    assert side_of(c, (-0.51, 0)) is Side.MINUS


@pytest.mark.parametrize("r", [0.5, 0.2, 9.5, 9.9, -1, 11])
def test_pole_must_be_interior(r):
    with pytest.raises(DomainError):
        curtain_dual(R2.segment((-5, 0), (5, 0)), r)


def test_real_line_curtain_is_unit_interval():
    c = curtain_dual(R1.segment(0, 4), 1.7)
    assert [side_of(c, p) for p in (1.19, 1.2, 2.2, 2.21)] == [Side.MINUS, Side.ON, Side.ON, Side.PLUS]


def test_side_examples():
    c = curtain_dual(R2.segment((-5, 0), (5, 0)), 5.0)
    assert side_of(c, (3, 4)) is Side.PLUS
    assert side_of(c, (0, 100)) is Side.ON
    assert side_of(c, (-2, 1)) is Side.MINUS


def test_separates_points_examples():
    c = curtain_dual(R2.segment((-5, 0), (5, 0)), 5.0)
    assert separates_points(c, (-2, 0), (2, 7))
    assert not separates_points(c, (0, 0), (2, 7))
    assert not separates_points(c, (2, 0), (3, 7))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-20, 20), min_size=4, max_size=4), st.floats(0.6, 9.4))
def test_partition(coords, r):
    c = curtain_dual(R2.segment(coords[:2], np.add(coords[:2], (10, 0))), r)
    p = coords[2:]
    t = projection(c, p)
    flags = [t < r - 0.5, r - 0.5 <= t <= r + 0.5, t > r + 0.5]
    assert sum(flags) == 1
    assert side_of(c, p) in (Side.MINUS, Side.ON, Side.PLUS)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-50, 50), min_size=8, max_size=8))
def test_projection_is_1_lipschitz(v):
    a, b, p, q = np.reshape(v, (4, 2))
    if np.linalg.norm(b - a) < 1e-6:
        return
    seg = R2.segment(a, b)
    assert abs(R2.project(seg, p) - R2.project(seg, q)) <= np.linalg.norm(p - q) + 1e-9


def test_is_chain_examples():
    ax = R2.segment((-5, 0), (5, 0))
    slabs = [curtain_dual(ax, 5 + r) for r in (-2, 0, 2)]
    assert is_chain(slabs)
    assert not is_chain([curtain_dual(ax, 5), curtain_dual(ax, 5.5)])
    assert is_chain(slabs[:1])
    with pytest.raises(ValueError):
        is_chain([])


def test_is_chain_needs_order():
    ax = R2.segment((-5, 0), (5, 0))
    a, b, c = (curtain_dual(ax, 5 + r) for r in (-2, 0, 2))
    assert not is_chain([a, c, b])


def test_crossing_slabs_are_not_disjoint():
    h = curtain_dual(R2.segment((-5, 0), (5, 0)), 5)
    v = curtain_dual(R2.segment((0, -5), (0, 5)), 5)
    assert not disjoint(h, v)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(1.2, 3.0), min_size=1, max_size=6), st.floats(1.2, 3.0))
def test_chain_monotonicity(gaps, extra):
    ax = R2.segment((-30, 1), (30, 1))
    pos = 1.0 + np.cumsum([0.0] + list(gaps))
    cs = [curtain_dual(ax, r) for r in pos]
    assert is_chain(cs)
    nxt = curtain_dual(ax, pos[-1] + extra)
    if len(cs) == 1 or separates(cs[-1], cs[-2], nxt):
        assert is_chain(cs + [nxt])


def test_tree_curtain_relations():
    t = TreeBackend("abcde", [("a", "b", 2), ("b", "c", 2), ("c", "d", 2), ("b", "e", 3)])
    seg = t.segment("a", "d")
    c1, c2, c3 = (curtain_dual(seg, r) for r in (1, 3, 5))
    assert is_chain([c1, c2, c3])
    assert separates(c2, c1, c3)
    # a curtain on the side branch meets the curtain around b only
    side = curtain_dual(t.segment("a", "e"), 2.5)
    assert not disjoint(side, c1) or not disjoint(side, c2)


# ---------------------------------------------------------------- L-separation

def test_max_chain_real_line_gap_one():
    h1, h2 = line_slab(0), line_slab(2)
    cands = line_grid(-3, 5, 0.1)
    assert max_chain_meeting_both(h1, h2, cands) == 1
    fam = CurtainFamily([h1, h2] + cands)
    assert max_chain_meeting_both(h1, h2, fam) == 1
    assert fam.max_chain_meeting_exact(0, 1) == 1


def test_max_chain_gap_three():
    h1, h2 = line_slab(0), line_slab(4)
    assert max_chain_meeting_both(h1, h2, line_grid(-3, 8, 0.1)) == 0


def test_max_chain_empty_candidates():
    assert max_chain_meeting_both(line_slab(0), line_slab(2), []) == 0


def test_max_chain_requires_disjoint():
    with pytest.raises(ValueError):
        max_chain_meeting_both(line_slab(0), line_slab(0.5), [])


def test_is_L_separated_real_line():
    cands = line_grid(-3, 8, 0.1)
    for gap in (1.0, 1.5, 3.0):
        assert is_L_separated(line_slab(0), line_slab(1 + gap), 1, cands)


def test_plane_witness_breaks_1_separation():
    x_axis = R2.segment((-10, 0), (10, 0))
    y_axis = R2.segment((0, -10), (0, 10))
    h1, h2 = curtain_dual(x_axis, 10), curtain_dual(x_axis, 13)
    chain = [curtain_dual(y_axis, 10), curtain_dual(y_axis, 12)]
    assert is_chain(chain)
    assert max_chain_meeting_both(h1, h2, chain) == 2
    assert not is_L_separated(h1, h2, 1, chain)
    assert is_L_separated(h1, h2, 2, chain)


def test_L_beyond_family_size():
    x_axis = R2.segment((-10, 0), (10, 0))
    y_axis = R2.segment((0, -10), (0, 10))
    cands = [curtain_dual(y_axis, r) for r in np.arange(1, 19, 1.5)]
    h1, h2 = curtain_dual(x_axis, 10), curtain_dual(x_axis, 13)
    assert is_L_separated(h1, h2, len(cands) + 1, cands)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_shortcut_matches_exact_search(seed):
    r = np.random.default_rng(seed)
    u = r.normal(size=2)
    a = r.normal(size=2)
    seg = R2.segment(a, a + 12 * u / np.linalg.norm(u))
    flip = R2.segment(seg.b, seg.a)
    cs = [curtain_dual(seg if r.random() < 0.5 else flip, x) for x in r.uniform(0.6, 11.4, size=12)]
    fam = CurtainFamily(cs)
    assert fam.single_axis
    for i, j in zip(*np.nonzero(np.triu(fam.disjoint))):
        assert fam.max_chain_meeting(i, j) == fam.max_chain_meeting_exact(i, j)


def test_longest_path_matches_networkx(rng):
    for _ in range(20):
        n = rng.randint(1, 12)
        E = np.zeros((n, n), dtype=bool)
        for i, j in itertools.combinations(range(n), 2):
            E[i, j] = rng.random() < 0.3
        g = nx.DiGraph()
        g.add_nodes_from(range(n))
        g.add_edges_from(zip(*np.nonzero(E)))
        length, nodes = longest_path(E)
        assert length == nx.dag_longest_path_length(g) + 1
        assert len(nodes) == length
        assert all(E[a, b] for a, b in zip(nodes, nodes[1:]))


def test_longest_path_rejects_cycles():
    with pytest.raises(ValueError):
        longest_path(np.array([[0, 1], [1, 0]], dtype=bool))


# ---------------------------------------------------------------- chains separating points

def test_dense_chain_between_0_and_2_5():
    chain = longest_L_chain_separating(0.0, 2.5, 3, geodesic_family(R1, 0.0, 2.5, 0.05))
    assert len(chain) == 2
    assert is_chain(chain.curtains)
    assert all(separates_points(c, 0.0, 2.5) for c in chain.curtains)


def test_short_pair_has_no_chain():
    fam = geodesic_family(R1, 0.0, 0.8, 0.05)
    assert len(fam) == 0
    assert len(longest_L_chain_separating(0.0, 0.8, 1, fam)) == 0
    b = d_L_bounds(0.0, 0.8, 1, fam, R1)
    assert (b.lower, b.witness) == (0.0, False)


def test_tree_midpoint_chain():
    t = TreeBackend("abcdef", [("a", "b", 2), ("b", "c", 0.4), ("c", "d", 0.4), ("d", "e", 2), ("b", "f", 1)])
    fam = midpoint_family(t, "a", "e")
    # brute force: largest subset of midpoint curtains that forms a chain in path order
    best = max(
        (len(s) for k in range(1, len(fam) + 1) for s in itertools.combinations(fam.curtains, k) if is_chain(s)),
        default=0,
    )
    assert len(fam) == 4
    assert len(longest_L_chain_separating("a", "e", 1, fam)) == best == 3


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_plane_chains_are_real_chains(seed):
    r = np.random.default_rng(seed)
    x, y = r.uniform(0, 5, size=(2, 2))
    fam = random_family(R2, [x, y], 4, seed=seed, step=0.5)
    for L in (1, 2, 3):
        chain = longest_L_chain_separating(x, y, L, fam)
        if len(chain):
            assert is_chain(chain.curtains)
            assert all(separates_points(c, x, y) for c in chain.curtains)
            for a, b in zip(chain.curtains, chain.curtains[1:]):
                assert is_L_separated(a, b, L, fam)


# ---------------------------------------------------------------- d_L bounds

def test_d_L_example():
    b = d_L_bounds(0.0, 2.5, 3, geodesic_family(R1, 0.0, 2.5, 0.05), R1)
    assert (b.lower, b.upper) == (3.0, 3.5)
    assert b.exact


def test_d_L_same_point():
    b = d_L_bounds(1.0, 1.0, 2, [], R1)
    assert (b.lower, b.upper) == (0.0, 0.0)


def test_tree_unit_edge_has_no_witness():
    t = TreeBackend("ab", [("a", "b", 1)])
    with pytest.raises(DomainError):
        curtain_dual(t.segment("a", "b"), 0.5)
    b = d_L_bounds("a", "b", 1, midpoint_family(t, "a", "b"), t)
    assert (b.lower, b.witness) == (0.0, False)
    assert b.upper <= 2


def test_tree_long_edge_single_witness():
    t = TreeBackend("ab", [("a", "b", 2)])
    b = d_L_bounds("a", "b", 1, midpoint_family(t, "a", "b"), t)
    assert (b.lower, b.upper, b.chain_length) == (2.0, 2.0, 1)
    b = d_L_bounds("a", "b", 1, geodesic_family(t, "a", "b", 0.25), t)
    assert b.lower == 2.0 and b.upper == 3.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_d_L_monotone_and_bounded(x, y):
    fam = geodesic_family(R1, x, y, 0.2)
    lows = [d_L_bounds(x, y, L, fam, R1).lower for L in range(1, 5)]
    assert lows == sorted(lows)
    assert max(lows) <= 1 + abs(x - y) + 1e-12


def test_pole_grid_is_symmetric_and_interior():
    for length in (1.0, 1.3, 2.5, 3.0, 7.77):
        poles = pole_grid(length, 0.25)
        assert all(r - 0.5 > 0 and r + 0.5 < length for r in poles)
        assert np.allclose(poles, [length - r for r in poles[::-1]])
    assert pole_grid(1.0, 0.25) == []


# ---------------------------------------------------------------- weights and the curtain metric

def test_default_lambda():
    assert default_lambda(1) == pytest.approx(1 / 12)
    with pytest.raises(ValueError):
        default_lambda(0)


def test_weight_sums():
    Ls = np.arange(1, 61)
    assert (Ls**2 * 0.5**Ls).sum() == pytest.approx(6, abs=1e-10)
    lam = np.array([default_lambda(L) for L in Ls])
    s0, s1, s2 = lam.sum(), (Ls * lam).sum(), (Ls**2 * lam).sum()
    assert s0 == pytest.approx(1 / 6) and s1 == pytest.approx(1 / 3) and s2 == pytest.approx(1.0)
    assert s0 < s1 < s2


def test_default_tail_is_exact():
    for L_max in (1, 5, 20):
        assert default_tail(L_max) == pytest.approx(sum(default_lambda(L) for L in range(L_max + 1, 200)))


def test_config_check():
    CFG.check()
    with pytest.raises(ValueError):
        CurtainModelConfig(lam=lambda L: 0.5 * 2.0**-L).check()
    with pytest.raises(ValueError):
        CurtainModelConfig(tail=lambda L: 0.0).check()
    with pytest.raises(ValueError):
        CurtainModelConfig(L_max=0).check()


def test_distance_same_point():
    b = curtain_distance_bounds((1, 2), (1, 2), CFG, R2)
    assert (b.lower, b.upper) == (0.0, 0.0)


def test_distance_example_width():
    b = curtain_distance_bounds(0.0, 2.5, CFG, R1, step=0.05)
    gap = sum(default_lambda(p.L) * (p.upper - p.lower) for p in b.per_L)
    assert b.upper - b.lower <= default_tail(20) * 3.5 + gap + 1e-12
    assert b.lower == pytest.approx(3 * (1 - 2.0**-20) / 6)
    assert b.upper == pytest.approx(3.5 / 6)


def test_shared_and_per_L_candidates_agree():
    fam = geodesic_family(R2, (0, 0), (3, 1), 0.25)
    a = curtain_distance_bounds((0, 0), (3, 1), CFG, R2, candidates=fam)
    b = curtain_distance_bounds((0, 0), (3, 1), CFG, R2, candidates=lambda L: fam)
    assert a.as_dict() == b.as_dict()


def test_bracketing_on_random_pairs():
    pts = np.random.default_rng(7).uniform(0, 6, size=(200, 2))
    for x, y in zip(pts[::2], pts[1::2]):
        b = curtain_distance_bounds(x, y, CFG, R2)
        assert b.lower <= b.upper
        for p in b.per_L:
            assert p.lower <= 1 + np.linalg.norm(x - y) + 1e-12


def test_triangle_inequality_of_bounds():
    pts = np.random.default_rng(8).uniform(0, 6, size=(60, 2))
    for x, y, z in zip(pts[::3], pts[1::3], pts[2::3]):
        lo_xz = curtain_distance_bounds(x, z, CFG, R2).lower
        assert lo_xz <= curtain_distance_bounds(x, y, CFG, R2).upper + curtain_distance_bounds(y, z, CFG, R2).upper


def test_reverse_triangle_collinear():
    r = np.random.default_rng(9)
    for _ in range(30):
        x = r.uniform(-5, 5, size=2)
        u = r.normal(size=2)
        u /= np.linalg.norm(u)
        s, t = np.sort(r.uniform(0, 8, size=2))
        z, y = x + s * u, x + t * u
        lhs = curtain_distance_bounds(x, z, CFG, R2).lower + curtain_distance_bounds(z, y, CFG, R2).lower
        assert lhs <= curtain_distance_bounds(x, y, CFG, R2).upper + 6 * CFG.Lambda


def test_bounds_are_deterministic():
    a = curtain_distance_bounds((0.3, 0.1), (4.2, 2.9), CFG, R2).as_dict()
    b = curtain_distance_bounds((0.3, 0.1), (4.2, 2.9), CFG, R2).as_dict()
    assert a == b


# ---------------------------------------------------------------- reparametrisation

def test_reparametrize_exact_line():
    s = np.arange(0, 12.01, 0.1)
    d = np.abs(s[:, None] - s[None, :])
    g = reparametrize_to_rough_geodesic(d, d, 7)
    assert g.params == list(range(len(g.params)))
    assert np.allclose(np.diff(s[g.indices]), 1.0)
    assert g.defect <= 2 and g.ok


def test_reparametrize_curtain_bounds_on_line():
    s = np.arange(0, 40.01, 0.25)
    g = reparametrize_samples(list(s), curtain_oracle(R1, step=0.05), 7)
    assert len(g.indices) >= 6
    assert g.defect <= 2 and g.ok


def test_reparametrize_threshold():
    d = np.zeros((1, 1))
    assert reparametrize_to_rough_geodesic(d, d, 7).defect == 0
    with pytest.raises(ValueError):
        reparametrize_to_rough_geodesic(d, d, 6.9)
    assert reparametrize_to_rough_geodesic(d, d, 13, Lambda=2).ok


def test_lazy_reparametrize_matches_matrix_form():
    s = list(np.arange(0, 15.01, 0.5))
    oracle = curtain_oracle(R1, step=0.05)
    full = reparametrize_to_rough_geodesic(*bound_matrices(s, oracle), 7)
    lazy = reparametrize_samples(s, oracle, 7)
    assert full.as_dict() == lazy.as_dict()


def test_reparametrize_density_failure():
    s = np.array([0.0, 0.5, 3.5])
    d = np.abs(s[:, None] - s[None, :])
    with pytest.raises(DensityError) as err:
        reparametrize_to_rough_geodesic(d, d, 7)
    assert err.value.t == 1


# ---------------------------------------------------------------- four-point defects

def test_tree_exact_defect_is_zero():
    t = TreeBackend("abcdefg", [("a", "b", 1), ("b", "c", 2), ("b", "d", 0.5), ("d", "e", 3), ("d", "f", 1), ("a", "g", 2.5)])
    assert empirical_four_point_delta(t, exact_oracle(t), 30, seed=3) <= 1e-12


def test_exact_defect_matches_verifier():
    pts = sample_points(R2, 14, seed=5)
    lo, hi = bound_matrices(pts, exact_oracle(R2))
    assert four_point_defect_lower(lo, hi) == pytest.approx(four_point_delta_exact(FiniteMetricSpace.from_points(np.array(pts))), abs=1e-12)


def test_interval_defect_is_conservative():
    r = np.random.default_rng(11)
    pts = r.uniform(0, 5, size=(12, 2))
    d = np.sqrt(((pts[:, None] - pts[None]) ** 2).sum(-1))
    w = np.triu(r.uniform(0, 0.3, size=d.shape), 1)
    w = w + w.T
    assert four_point_defect_lower(d - w, d + w) <= four_point_delta_exact(FiniteMetricSpace.from_points(pts)) + 1e-12


def test_curtain_defect_below_ceiling():
    est = empirical_four_point_delta(R2, curtain_oracle(R2), 20, seed=42)
    assert 0 <= est <= 5.56e5


def test_sampling_is_seeded(monkeypatch):
    a = empirical_four_point_delta(R2, curtain_oracle(R2), 12, seed=1)
    monkeypatch.setenv("HYPCONST_THREADS", "4")
    assert empirical_four_point_delta(R2, curtain_oracle(R2), 12, seed=1) == a
    with pytest.raises(ValueError):
        empirical_four_point_delta(R2, curtain_oracle(R2), 3)


# ---------------------------------------------------------------- real-line oracle

def test_real_line_packing_oracle(rng):
    for _ in range(20):
        x = Fraction(rng.randint(-40, 40), 8)
        y = Fraction(rng.randint(-40, 40), 8)
        if x == y:
            continue
        fam = geodesic_family(R1, float(x), float(y), 0.05)
        L = rng.randint(1, 6)
        assert len(longest_L_chain_separating(float(x), float(y), L, fam)) == packing_chain_length(x, y)
