import itertools

import networkx as nx
import numpy as np
import pytest

from twoface.algebra import PolyContext
from twoface.graph_model import PlainGraph
from twoface.oracle import (
    OracleSizeError, cover_monomials, cover_paths, enumerate_cycle_covers, enumerate_path_systems,
    random_plain_graph, random_two_face, shortest_disjoint_paths, template_annulus,
)
from twoface.paths import assemble_paths, greedy_upper_bound
from twoface.permanent import naive_perm
from twoface.system import PreprocessedDigraph, closing_arcs, orient_arcs


def to_nx(g):
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    for u, v, w in g.edges:
        G.add_edge(u, v, weight=w)
    return G


def test_single_pair_matches_dijkstra():
    rng = np.random.default_rng(0)
    for _ in range(20):
        g = random_plain_graph(rng, 9, 14, 1, 1)
        s, t = g.A[0], g.B[0]
        opt, sols = shortest_disjoint_paths(g, [(s, t)])
        assert opt == nx.dijkstra_path_length(to_nx(g), s, t)
        assert all(sol.weight == opt for sol in sols)


def brute_two_pairs(g, pairs):
    """Minimum over all pairs of simple paths that share no vertex."""
    G = to_nx(g)
    (s1, t1), (s2, t2) = pairs
    best = float("inf")
    for p in nx.all_simple_paths(G, s1, t1):
        if {s2, t2} & set(p):
            continue
        H = G.subgraph([v for v in G if v not in p])
        if s2 in H and t2 in H and nx.has_path(H, s2, t2):
            w1 = nx.path_weight(G, p, "weight")
            best = min(best, w1 + nx.dijkstra_path_length(H, s2, t2))
    return best


def test_two_pairs_match_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(15):
        g = random_plain_graph(rng, 8, 12, 2, 2)
        pairs = [(g.A[0], g.B[0]), (g.A[1], g.B[1])]
        opt, _ = shortest_disjoint_paths(g, pairs)
        assert opt == brute_two_pairs(g, pairs)


def test_systems_are_disjoint_and_respect_cap():
    rng = np.random.default_rng(2)
    g, layout = random_two_face(rng, 3, 1)
    every = enumerate_path_systems(g, layout.pairs)
    capped = enumerate_path_systems(g, layout.pairs, weight_cap=min(s.weight for s in every) + 2)
    assert 0 < len(capped) <= len(every)
    assert all(s.weight <= min(x.weight for x in every) + 2 for s in capped)
    for sol in every:
        paths = sol.vertices(g)
        used = [v for p in paths for v in p]
        assert len(used) == len(set(used))
        assert [(p[0], p[-1]) for p in paths] == list(layout.pairs)
        assert sum(g.edges[d >> 1][2] for ds in sol.darts for d in ds) == sol.weight


def test_infeasible_gives_infinity():
    # a path graph cannot join (0, 2) and (1, 3) disjointly
    g = PlainGraph((0, 1, 2, 3), ((0, 1, 1), (1, 2, 1), (2, 3, 1)), (0, 1), (2, 3))
    assert shortest_disjoint_paths(g, [(0, 2), (1, 3)]) == (float("inf"), [])


def test_size_guards():
    g, layout = template_annulus(1, 1, 4, 5)
    with pytest.raises(OracleSizeError):
        enumerate_path_systems(g, layout.pairs)
    H = PreprocessedDigraph(12, tuple((i, i, 0, 0) for i in range(12)), PolyContext(8))
    with pytest.raises(OracleSizeError):
        enumerate_cycle_covers(H)


def test_cycle_covers_count_the_permanent():
    rng = np.random.default_rng(3)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        arcs = [(i, j, 1, 0) for i, j in itertools.product(range(n), repeat=2) if rng.random() < 0.5]
        H = PreprocessedDigraph(n, tuple(arcs), PolyContext(32))
        assert sum(cover_monomials(H).values()) == sum(naive_perm(H.matrix()).terms.values())


def test_covers_of_closed_paths_give_the_pairing():
    g = PlainGraph(tuple(range(4)), ((0, 1, 1), (1, 2, 1), (2, 3, 1), (3, 0, 1)), (0,), (2,))
    arcs = orient_arcs(g.edges, 4, [0], [2]) + closing_arcs(4, [0], [2])
    H = PreprocessedDigraph(4, tuple(arcs), PolyContext(8))
    covers = enumerate_cycle_covers(H)
    # either way round the square, with a self-loop on the vertex left over
    assert {cover_paths(H, c, [0], [2])[0] for c in covers} == {(0, 2)}
    assert sorted(cover_monomials(H).items()) == [((2, 0), 2)]


def canon(p):
    return tuple(p) if p[0] < p[-1] else tuple(p[::-1])


def test_greedy_bound_is_an_upper_bound():
    rng = np.random.default_rng(4)
    for _ in range(20):
        g, layout = random_two_face(rng, 3, 1)
        opt, sols = shortest_disjoint_paths(g, layout.pairs)
        assert greedy_upper_bound(g.n, g.edges, layout.pairs, [e[2] for e in g.edges]) >= opt
        kept = {d >> 1 for ds in sols[0].darts for d in ds}
        paths = assemble_paths(g.n, g.edges, kept, [v for p in layout.pairs for v in p])
        assert sorted(map(canon, paths)) == sorted(map(canon, sols[0].vertices(g)))


def test_fixtures_are_valid():
    rng = np.random.default_rng(5)
    for k1, k2 in ((1, 1), (3, 1), (1, 3), (3, 3)):
        g, layout = random_two_face(rng, k1, k2)
        layout.validate(g, require_odd=True)
        assert g.n <= 18
    g = random_plain_graph(rng, 10, 15, 3, 1)
    assert len(g.edges) == 15 and not set(g.A) & set(g.B)
