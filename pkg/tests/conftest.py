import itertools
import math
import random
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from hypconst.metric import FiniteMetricSpace, PathSystem


def line_space(coords):
    return FiniteMetricSpace.from_points(np.asarray(coords, dtype=float))


def unit_square():
    return FiniteMetricSpace(["a", "b", "c", "d"], [[0, 1, math.sqrt(2), 1], [1, 0, 1, math.sqrt(2)], [math.sqrt(2), 1, 0, 1], [1, math.sqrt(2), 1, 0]])


def direct_system(n):
    return PathSystem(n, {(i, j): (i, j) for i in range(n) for j in range(i + 1, n)})


def random_tree_graph(n, rng, exact=False):
    g = nx.Graph()
    g.add_node(0)
    for v in range(1, n):
        u = rng.randrange(v)
        w = Fraction(rng.randint(1, 40), 8) if exact else rng.uniform(0.1, 5.0)
        g.add_edge(u, v, weight=w)
    return g


def graph_instance(g):
    """Shortest-path metric plus the shortest-path system (deterministic ties)."""
    nodes = sorted(g.nodes)
    n = len(nodes)
    lengths = dict(nx.all_pairs_dijkstra_path_length(g))
    paths = dict(nx.all_pairs_dijkstra_path(g))
    dist = [[float(lengths[a][b]) for b in nodes] for a in nodes]
    space = FiniteMetricSpace([str(v) for v in nodes], dist)
    pos = {v: i for i, v in enumerate(nodes)}
    system = PathSystem(n, {(pos[a], pos[b]): [pos[p] for p in paths[a][b]] for a, b in itertools.combinations(nodes, 2)})
    return space, system


def random_graph(n, rng, p=0.35):
    while True:
        g = nx.gnp_random_graph(n, p, seed=rng.randrange(10**9))
        if nx.is_connected(g):
            break
    for u, v in g.edges:
        g[u][v]["weight"] = rng.uniform(0.5, 3.0)
    return g


@pytest.fixture
def rng():
    return random.Random(20261016)


def packing_chain_length(x, y, step=Fraction(1, 20)):
    """Longest run of unit poles with gaps > 1 on the symmetric grid inside (x, y).

    Exact rational arithmetic and a direct recursion over the grid, sharing
    nothing with the curtain code.
    """
    x, y, step = Fraction(x), Fraction(y), Fraction(step)
    length = abs(y - x)
    half = (length - 1) / 2
    if half <= 0:
        return 0
    poles = []
    j = 0
    while j * step < half:
        j += 1
    jmax = j - 1
    poles = [length / 2 + k * step for k in range(-jmax, jmax + 1)]
    best = [1] * len(poles)
    for i in reversed(range(len(poles))):
        for k in range(i + 1, len(poles)):
            if poles[k] - poles[i] > 1:
                best[i] = max(best[i], 1 + best[k])
    return max(best, default=0)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def record_criterion(number, title, ok, detail):
    line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}: {title} | {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
