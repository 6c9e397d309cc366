"""Exhaustive ground truth for small instances.

Everything here is exponential and guarded by size limits. It supplies
optimal path systems, all instances of a configuration with their signed
axis crossings, cycle covers of preprocessed digraphs, and annulus fixtures.
"""

from __future__ import annotations

from collections import Counter, deque
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .algebra.poly import PolyContext
from .configurations import OUTER, PathConfiguration, enumerate_configs
from .graph_model import AxisDescriptor, EmbeddedGraph, TerminalLayout
from .paths import adjacency, dijkstra, greedy_upper_bound
from .system import PreprocessedDigraph

MAX_PATH_N = 18
MAX_COVER_N = 10


class OracleSizeError(ValueError):
    pass


@dataclass(frozen=True)
class Instance:
    """k vertex-disjoint paths; ``darts[i]`` runs from ``pairs[i][0]`` to ``pairs[i][1]``."""

    pairs: tuple[tuple[int, int], ...]
    darts: tuple[tuple[int, ...], ...]
    weight: int

    def vertices(self, g: EmbeddedGraph) -> list[list[int]]:
        out = []
        for (s, _), ds in zip(self.pairs, self.darts):
            out.append([s] + [g.head(d) for d in ds])
        return out

    def vertices_plain(self, g) -> list[list[int]]:
        """Like :meth:`vertices` for any graph with an ``edges`` list."""
        out = []
        for (s, _), ds in zip(self.pairs, self.darts):
            out.append([s] + [g.edges[d >> 1][1 - (d & 1)] for d in ds])
        return out

    def edges(self) -> frozenset[int]:
        return frozenset(d >> 1 for ds in self.darts for d in ds)

    def y_exponent(self, axis: AxisDescriptor, sources: Iterable[int]) -> int:
        """Signed axis crossings with every path run from its source end."""
        sources = set(sources)
        total = 0
        for (s, _), ds in zip(self.pairs, self.darts):
            sign = 1 if s in sources else -1
            total += sign * sum(axis.y_exponent(d) for d in ds)
        return total


def enumerate_path_systems(
    g,
    pairs: Sequence[tuple[int, int]],
    weight_cap: float | None = None,
    weights: Sequence[int] | None = None,
    deleted: Iterable[int] = (),
    max_n: int = MAX_PATH_N,
) -> list[Instance]:
    """All systems of vertex-disjoint simple paths joining the given pairs.

    ``g`` may be embedded or plain; only ``n`` and ``edges`` are used.
    Terminals of other pairs are never used as interior vertices. Systems of
    weight above ``weight_cap`` are skipped.
    """
    if g.n > max_n:
        raise OracleSizeError(f"oracle limited to n <= {max_n}")
    w = [e[2] for e in g.edges] if weights is None else list(weights)
    deleted = set(deleted)
    cap = float("inf") if weight_cap is None else weight_cap
    terms = {v for p in pairs for v in p}
    adj = adjacency(g.n, g.edges, deleted)
    # lower bounds ignoring disjointness
    dist_to = {t: dijkstra(adj, t, w)[0] for _, t in pairs}
    rest_lb = [0.0] * (len(pairs) + 1)
    for i in range(len(pairs) - 1, -1, -1):
        s, t = pairs[i]
        rest_lb[i] = rest_lb[i + 1] + dist_to[t][s]
    if rest_lb[0] > cap:
        return []
    out: list[Instance] = []
    used = [False] * g.n
    for v in terms:
        used[v] = True
    cur: list[tuple[int, ...]] = []

    def route(i: int, acc: int) -> None:
        if i == len(pairs):
            out.append(Instance(tuple(pairs), tuple(cur), acc))
            return
        s, t = pairs[i]
        dt = dist_to[t]
        path: list[int] = []

        def walk(u: int, acc2: int) -> None:
            for v, d in adj[u]:
                nw = acc2 + w[d >> 1]
                if v == t:
                    if nw + rest_lb[i + 1] <= cap:
                        path.append(d)
                        cur.append(tuple(path))
                        route(i + 1, nw)
                        cur.pop()
                        path.pop()
                    continue
                if used[v] or nw + dt[v] + rest_lb[i + 1] > cap:
                    continue
                used[v] = True
                path.append(d)
                walk(v, nw)
                path.pop()
                used[v] = False

        walk(s, acc)

    route(0, 0)
    return out


def shortest_disjoint_paths(g, pairs, weights=None, deleted=()) -> tuple[float, list[Instance]]:
    """Optimal weight and every optimal system (``inf`` and [] if none exists)."""
    w = [e[2] for e in g.edges] if weights is None else list(weights)
    best = greedy_upper_bound(g.n, g.edges, pairs, w, deleted)
    sols = enumerate_path_systems(g, pairs, best, w, deleted)
    if not sols and best != float("inf"):
        sols = enumerate_path_systems(g, pairs, None, w, deleted)
    if not sols:
        return float("inf"), []
    opt = min(s.weight for s in sols)
    return opt, [s for s in sols if s.weight == opt]


def enumerate_instances(
    g: EmbeddedGraph,
    layout: TerminalLayout,
    config: PathConfiguration,
    axis: AxisDescriptor,
    weight_cap: float | None = None,
) -> list[Instance]:
    """All instances of an axis-frame configuration."""
    return enumerate_path_systems(g, _config_pairs(layout, config, axis), weight_cap)


def _config_pairs(layout: TerminalLayout, config: PathConfiguration, axis: AxisDescriptor):
    pairs = []
    for face, pairs_f in ((OUTER, config.within1), (2, config.within2)):
        for a, b in pairs_f:
            pairs.append((axis.terminal_at(layout, face, a), axis.terminal_at(layout, face, b)))
    for a, b in config.cross:
        pairs.append((axis.terminal_at(layout, OUTER, a), axis.terminal_at(layout, 2, b)))
    return pairs


def config_generating_function(g: EmbeddedGraph, layout: TerminalLayout, config: PathConfiguration,
                               axis: AxisDescriptor, weights: Sequence[int] | None = None) -> Counter:
    """x-degree counts of the cycle covers whose paths realise ``config``.

    Each instance contributes its weight times the cycle covers of the
    vertices it leaves untouched. Those cycles cannot wind around the inner
    face because every configuration has a cross path.
    """
    w = [e[2] for e in g.edges] if weights is None else list(weights)
    pairs = _config_pairs(layout, config, axis)
    acc: Counter = Counter()
    for inst in enumerate_path_systems(g, pairs, None, w):
        used = {v for p in inst.vertices(g) for v in p}
        rest = [v for v in range(g.n) if v not in used]
        for x, c in _rest_cover_counts(g.n, g.edges, w, rest).items():
            acc[inst.weight + x] += c
    return acc


# -- cycle covers --------------------------------------------------------------------

def enumerate_cycle_covers(H: PreprocessedDigraph, max_n: int = MAX_COVER_N) -> list[tuple[int, ...]]:
    """All cycle covers as tuples of arc indices (the arc leaving each vertex)."""
    if H.n > max_n:
        raise OracleSizeError(f"cycle-cover oracle limited to n <= {max_n}")
    out_arcs = [[] for _ in range(H.n)]
    for idx, (i, j, _, _) in enumerate(H.arcs):
        out_arcs[i].append(idx)
    covers = []
    taken = [False] * H.n
    chosen: list[int] = []

    def rec(i: int) -> None:
        if i == H.n:
            covers.append(tuple(chosen))
            return
        for idx in out_arcs[i]:
            j = H.arcs[idx][1]
            if taken[j]:
                continue
            taken[j] = True
            chosen.append(idx)
            rec(i + 1)
            chosen.pop()
            taken[j] = False

    rec(0)
    return covers


def cover_monomial(H: PreprocessedDigraph, cover: Sequence[int]) -> tuple[int, int]:
    x = sum(H.arcs[a][2] for a in cover)
    y = sum(H.arcs[a][3] for a in cover) % H.ctx.q
    return x, y


def cover_monomials(H: PreprocessedDigraph) -> Counter:
    return Counter(cover_monomial(H, c) for c in enumerate_cycle_covers(H))


def cover_paths(H: PreprocessedDigraph, cover: Sequence[int], sources: Iterable[int],
                sinks: Iterable[int]) -> list[tuple[int, int]]:
    """(source, sink) pairs joined by the primal paths inside a cycle cover."""
    succ = {H.arcs[a][0]: H.arcs[a][1] for a in cover}
    sinks = set(sinks)
    pairs = []
    for s in sources:
        v = succ[s]
        while v not in sinks:
            v = succ[v]
        pairs.append((s, v))
    return pairs


# -- fixtures ----------------------------------------------------------------------------

def template_annulus(
    k1: int,
    k2: int,
    rings: int,
    spokes: int,
    outer_positions: Sequence[int] | None = None,
    inner_positions: Sequence[int] | None = None,
    pairs: Sequence[tuple[tuple[int, int], tuple[int, int]]] | None = None,
    weights: Callable[[int], int] | Sequence[int] | None = None,
) -> tuple[EmbeddedGraph, TerminalLayout]:
    """Concentric cycles joined by radial spokes, terminals on the outermost and innermost ring.

    Vertex ``r * spokes + j`` sits on ring r (0 outermost) at position j,
    increasing clockwise. ``pairs`` refer to terminals as ``(face, index)``
    into the clockwise terminal lists; by default the first enumerated
    configuration (in list-index labels) is used.
    """
    if rings < 2 or spokes < 2:
        raise ValueError("need at least two rings and two spokes")
    if max(k1, k2) > spokes:
        raise ValueError("more terminals than positions on a ring")
    S, R = spokes, rings

    def vid(r, j):
        return r * S + j % S

    edges = []
    ring_edge = {}
    spoke_edge = {}
    for r in range(R):
        for j in range(S):
            ring_edge[(r, j)] = len(edges)  # (r, j) -- (r, j+1)
            edges.append((vid(r, j), vid(r, j + 1)))
    for r in range(R - 1):
        for j in range(S):
            spoke_edge[(r, j)] = len(edges)  # (r, j) -- (r+1, j)
            edges.append((vid(r, j), vid(r + 1, j)))
    if weights is None:
        wts = [1] * len(edges)
    elif callable(weights):
        wts = [int(weights(e)) for e in range(len(edges))]
    else:
        wts = [int(x) for x in weights]
    rotation = []
    for r in range(R):
        for j in range(S):
            rot = [ring_edge[(r, j)]]
            if r > 0:
                rot.append(spoke_edge[(r - 1, j)])
            rot.append(ring_edge[(r, (j - 1) % S)])
            if r < R - 1:
                rot.append(spoke_edge[(r, j)])
            rotation.append(rot)
    names = list(range(R * S))
    g = EmbeddedGraph(
        names,
        [(u, v, w) for (u, v), w in zip(edges, wts)],
        rotation,
        2 * ring_edge[(0, 0)],
        2 * ring_edge[(R - 1, 0)] + 1,
    )
    op = list(range(k1)) if outer_positions is None else list(outer_positions)
    ip = list(range(k2)) if inner_positions is None else list(inner_positions)
    K1 = tuple(vid(0, j) for j in op)
    K2 = tuple(vid(R - 1, j) for j in ip)
    if pairs is None:
        P = enumerate_configs(k1, k2)[0]
        pairs = [((1, a), (1, b)) for a, b in P.within1]
        pairs += [((2, a), (2, b)) for a, b in P.within2]
        pairs += [((1, a), (2, b)) for a, b in P.cross]

    def term(t):
        face, i = t
        return K1[i] if face == 1 else K2[i]

    layout = TerminalLayout(K1, K2, tuple((term(a), term(b)) for a, b in pairs))
    layout.validate(g)
    return g, layout


def perturb_template(g: EmbeddedGraph, layout: TerminalLayout, rng: np.random.Generator,
                     deletions: int = 0, chords: int = 0, wmax: int = 5) -> tuple[EmbeddedGraph, TerminalLayout]:
    """Random weights, interior edge deletions and chords across interior faces.

    Edges on the two designated faces are never deleted, so terminal order is
    preserved; deletions keep the graph connected.
    """
    protected = {d >> 1 for d in g.faces[g.outer_face]} | {d >> 1 for d in g.faces[g.inner_face]}
    edges = [(u, v) for u, v, _ in g.edges]
    rotation = [list(r) for r in g.rotation]
    outer_d, inner_d = g.faces[g.outer_face][0], g.faces[g.inner_face][0]
    cur = g
    for _ in range(chords):
        faces = [f for f in range(len(cur.faces))
                 if f not in (cur.outer_face, cur.inner_face) and len(cur.faces[f]) >= 4]
        if not faces:
            break
        f = faces[int(rng.integers(len(faces)))]
        walk = cur.faces[f]
        L = len(walk)
        i = int(rng.integers(L))
        j = (i + 2 + int(rng.integers(L - 3))) % L
        u, v = cur.tail(walk[i]), cur.tail(walk[j])
        if u == v:
            continue
        new = len(edges)
        edges.append((u, v))
        for x, pos in ((u, i), (v, j)):
            d_in = walk[pos - 1]
            p = rotation[x].index(d_in >> 1)
            rotation[x].insert(p, new)
        cur = EmbeddedGraph(g.names, [(a, b, 1) for a, b in edges], rotation, outer_d, inner_d)
    removable = [e for e in range(len(edges)) if e not in protected]
    rng.shuffle(removable)
    removed: set[int] = set()
    for e in removable:
        if len(removed) >= deletions:
            break
        trial = removed | {e}
        if _connected(g.n, [x for k, x in enumerate(edges) if k not in trial]):
            removed = trial
    keep = [e for e in range(len(edges)) if e not in removed]
    new_id = {e: k for k, e in enumerate(keep)}
    new_edges = [(edges[e][0], edges[e][1], int(rng.integers(0, wmax + 1))) for e in keep]
    new_rot = [[new_id[e] for e in rot if e in new_id] for rot in rotation]

    def dart(d):
        return 2 * new_id[d >> 1] + (d & 1)

    h = EmbeddedGraph(g.names, new_edges, new_rot, dart(outer_d), dart(inner_d))
    layout.validate(h)
    return h, layout


def _connected(n: int, edges) -> bool:
    adj = [[] for _ in range(n)]
    for u, v, *_ in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0}
    todo = deque([0])
    while todo:
        x = todo.popleft()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return len(seen) == n


# -- (A+B, q) ground truth ------------------------------------------------------------------

def _rest_cover_counts(n: int, edges, weights, free: Sequence[int]) -> Counter:
    """x-degree counts of cycle covers on ``free`` (self-loops plus both arc directions)."""
    idx = {v: i for i, v in enumerate(free)}
    arcs = [(i, i, 0, 0) for i in range(len(free))]
    for e, (u, v, _) in enumerate(edges):
        if u in idx and v in idx:
            arcs += [(idx[u], idx[v], weights[e], 0), (idx[v], idx[u], weights[e], 0)]
    if not free:
        return Counter({0: 1})
    H = PreprocessedDigraph(len(free), tuple(arcs), PolyContext(64, 1))
    return Counter({x: c for (x, _), c in cover_monomials(H).items()})


def ab_generating_functions(g, weights=None) -> dict[int, Counter]:
    """``H_i`` for every crossing count i, as x-degree counts over Z.

    Each configuration instance contributes its path weight times the cycle
    covers of the vertices it leaves untouched.
    """
    from .solver import ab_pairings  # enumeration of pairings only

    w = [e[2] for e in g.edges] if weights is None else list(weights)
    k1, k2 = len(g.A), len(g.B)
    out: dict[int, Counter] = {}
    for i in range(min(k1, k2) % 2, min(k1, k2) + 1, 2):
        if (k1 - i) % 2:
            continue
        acc: Counter = Counter()
        for pairing in ab_pairings(g, i):
            for inst in enumerate_path_systems(g, pairing, None, w):
                used = {v for p in inst.vertices_plain(g) for v in p}
                rest = [v for v in range(g.n) if v not in used]
                for x, c in _rest_cover_counts(g.n, g.edges, w, rest).items():
                    acc[inst.weight + x] += c
        out[i] = acc
    return out


# -- random fixtures ----------------------------------------------------------------------

def random_two_face(rng: np.random.Generator, k1: int, k2: int, rings: int = 3, spokes: int = 6,
                    wmax: int = 7, deletions: int | None = None, chords: int | None = None):
    """Perturbed annulus with random terminal positions, a random realisable pairing and weights."""
    cfgs = enumerate_configs(k1, k2)
    P = cfgs[int(rng.integers(len(cfgs)))]
    outer = sorted(rng.choice(spokes, k1, replace=False).tolist())
    inner = sorted(rng.choice(spokes, k2, replace=False).tolist())
    pairs = [((OUTER, a), (OUTER, b)) for a, b in P.within1]
    pairs += [((2, a), (2, b)) for a, b in P.within2]
    pairs += [((OUTER, a), (2, b)) for a, b in P.cross]
    g, layout = template_annulus(k1, k2, rings, spokes, outer, inner, pairs,
                                 weights=lambda e: int(rng.integers(1, wmax + 1)))
    dels = int(rng.integers(0, 4)) if deletions is None else deletions
    chs = int(rng.integers(0, 3)) if chords is None else chords
    return perturb_template(g, layout, rng, dels, chs, wmax)


def random_plain_graph(rng: np.random.Generator, n: int, m: int, k1: int, k2: int, wmax: int = 5):
    """Connected random graph (spanning tree plus extra edges) with random A and B."""
    from .graph_model import PlainGraph

    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        u, v = int(order[i]), int(order[rng.integers(0, i)])
        edges.add((min(u, v), max(u, v)))
    m = min(m, n * (n - 1) // 2)
    while len(edges) < m:
        u, v = (int(x) for x in rng.choice(n, 2, replace=False))
        edges.add((min(u, v), max(u, v)))
    E = tuple((u, v, int(rng.integers(1, wmax + 1))) for u, v in sorted(edges))
    T = [int(x) for x in rng.choice(n, k1 + k2, replace=False)]
    return PlainGraph(tuple(range(n)), E, tuple(T[:k1]), tuple(T[k1:]))
