"""Shortest-path helpers shared by the solver and the oracle.

Darts follow the graph model: dart ``2e`` runs along edge ``e`` as stored,
``2e + 1`` against it.
"""

from __future__ import annotations

import heapq
import itertools
from collections.abc import Iterable, Sequence

INF = float("inf")


def adjacency(n: int, edges, deleted: Iterable[int] = ()) -> list[list[tuple[int, int]]]:
    """``adj[u]`` lists ``(v, dart)`` for every surviving edge at u."""
    deleted = set(deleted)
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v, *_) in enumerate(edges):
        if e in deleted:
            continue
        adj[u].append((v, 2 * e))
        adj[v].append((u, 2 * e + 1))
    return adj


def dijkstra(adj, src: int, weights: Sequence[int], avoid: Iterable[int] = ()) -> tuple[list[float], list[int]]:
    """Distances from src and the dart used to enter each vertex (-1 if none).

    Vertices in ``avoid`` may be reached but are not expanded.
    """
    n = len(adj)
    avoid = set(avoid)
    dist = [INF] * n
    via = [-1] * n
    dist[src] = 0
    pq = [(0, src)]
    while pq:
        d, u = heapq.heappop(pq)
        if d > dist[u] or (u in avoid and u != src):
            continue
        for v, dart in adj[u]:
            nd = d + weights[dart >> 1]
            if nd < dist[v]:
                dist[v] = nd
                via[v] = dart
                heapq.heappush(pq, (nd, v))
    return dist, via


def connected_pairs(n: int, edges, pairs, deleted: Iterable[int] = ()) -> bool:
    adj = adjacency(n, edges, deleted)
    for s, t in pairs:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v, _ in adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        if t not in seen:
            return False
    return True


def greedy_upper_bound(n: int, edges, pairs, weights, deleted: Iterable[int] = (), orders: int = 24) -> float:
    """Weight of some feasible disjoint system built from sequential shortest paths, or inf."""
    adj = adjacency(n, edges, deleted)
    terms = {v for p in pairs for v in p}
    best = INF
    for order in itertools.islice(itertools.permutations(range(len(pairs))), orders):
        used = set(terms)
        total = 0
        for i in order:
            s, t = pairs[i]
            blocked = used - {s, t}
            sub = [[(v, d) for v, d in nb if v not in blocked] for nb in adj]
            dist, via = dijkstra(sub, s, weights)
            if dist[t] == INF:
                total = INF
                break
            total += dist[t]
            v = t
            while v != s:
                used.add(v)
                d = via[v]
                v = edges[d >> 1][0] if d % 2 == 0 else edges[d >> 1][1]
        best = min(best, total)
    return best


def assemble_paths(n: int, edges, kept: Iterable[int], terminals: Iterable[int]) -> list[list[int]] | None:
    """Split an edge set into terminal-to-terminal vertex paths.

    Returns None unless every terminal has degree 1, every other touched vertex
    degree 2, and no edge is left over (no stray cycles).
    """
    kept = sorted(set(kept))
    terminals = set(terminals)
    nbrs: dict[int, list[tuple[int, int]]] = {}
    for e in kept:
        u, v = edges[e][0], edges[e][1]
        nbrs.setdefault(u, []).append((v, e))
        nbrs.setdefault(v, []).append((u, e))
    for v, lst in nbrs.items():
        if len(lst) != (1 if v in terminals else 2):
            return None
    if any(t not in nbrs for t in terminals):
        return None
    seen_edges: set[int] = set()
    out: list[list[int]] = []
    done: set[int] = set()
    for s in sorted(terminals):
        if s in done:
            continue
        path = [s]
        prev_e = -1
        u = s
        while True:
            nxt = [(v, e) for v, e in nbrs[u] if e != prev_e]
            if not nxt:
                break
            v, e = nxt[0]
            seen_edges.add(e)
            path.append(v)
            prev_e, u = e, v
            if v in terminals:
                break
        done.update((path[0], path[-1]))
        out.append(path)
    if len(seen_edges) != len(kept):
        return None
    return out


def path_weight(path: Sequence[int], edges, weights=None) -> int | None:
    """Weight of a vertex path using the cheapest edge between consecutive vertices."""
    best: dict[tuple[int, int], int] = {}
    for e, (u, v, w) in enumerate(edges):
        w = w if weights is None else weights[e]
        key = (min(u, v), max(u, v))
        best[key] = min(best.get(key, w), w)
    total = 0
    for a, b in zip(path, path[1:]):
        key = (min(a, b), max(a, b))
        if key not in best:
            return None
        total += best[key]
    return total
