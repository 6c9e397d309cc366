"""End-to-end solvers.

``solve`` handles the odd two-face problem: isolate with random low-order
weights, evaluate the permanent vector, read ``det(M) * h_P`` off the
adjugate row, take its least x-degree, then recover the paths by deleting
edges one at a time. ``solve_ab`` does the same for (A+B, q) paths on an
arbitrary graph, peeling the per-level generating functions from the top
number of crossing paths downward.

Both wrap the Monte Carlo core in a retry loop: every candidate answer is
verified, and a fresh seed is drawn when verification fails.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .algebra.poly import PolyContext, UniPoly
from .configurations import PathConfiguration
from .errors import ProbabilisticFailure
from .graph_model import EmbeddedGraph, PlainGraph, TerminalLayout, dual_axis
from .paths import INF, adjacency, assemble_paths, connected_pairs, dijkstra, greedy_upper_bound
from .system import (
    PreprocessedDigraph, build_p, closing_arcs, config_system, orient_arcs, solve_config,
    target_configuration,
)

RETRY_CAP = 16


# -- isolation ------------------------------------------------------------------------

@dataclass(frozen=True)
class IsolationWeights:
    """``w'_e = scale * w_e + r_e`` with ``r_e`` uniform in ``[1, 4n^2]``.

    ``scale = 4n^3`` exceeds the largest possible sum of low-order parts over
    a path system, so ``w' // scale`` is the original weight.
    """

    seed: int
    trial: int
    n: int
    draws: tuple[int, ...]
    weights: tuple[int, ...]

    @property
    def scale(self) -> int:
        return 4 * self.n ** 3

    def recover(self, scaled: int) -> int:
        return scaled // self.scale


def randomize(g, seed: int, trial: int = 0) -> IsolationWeights:
    n = g.n
    rng = np.random.default_rng([seed, trial])
    r = rng.integers(1, 4 * n * n, size=len(g.edges), endpoint=True)
    scale = 4 * n ** 3
    draws = tuple(int(x) for x in r)
    weights = tuple(scale * int(w) + x for (_, _, w), x in zip(g.edges, draws))
    return IsolationWeights(seed, trial, n, draws, weights)


# -- reports ----------------------------------------------------------------------------

@dataclass
class SolveReport:
    status: str  # "solved", "infeasible" or "not_found"
    weight: int | None = None
    paths: list[list[int]] = field(default_factory=list)
    trials: int = 0
    verified: bool = False
    definitive: bool = True
    target: dict | None = None
    seed: int | None = None
    detail: str = ""

    def as_dict(self, names: Sequence | None = None) -> dict:
        name = (lambda v: v) if names is None else (lambda v: names[v])
        return {
            "status": self.status,
            "weight": self.weight,
            "paths": [[name(v) for v in p] for p in self.paths],
            "trials": self.trials,
            "verified": self.verified,
            "definitive": self.definitive,
            "target": self.target,
            "seed": self.seed,
            "detail": self.detail,
        }


def verify_paths(g, paths: Sequence[Sequence[int]], pairs: Sequence[tuple[int, int]] | None,
                 weight: int | None, endpoints=None) -> bool:
    """Paths are simple, use existing edges, are pairwise disjoint and realise the pairing.

    ``pairs`` is an unordered pairing to match exactly; alternatively
    ``endpoints(path_list)`` may judge the endpoints. The total original
    weight must equal ``weight`` when given.
    """
    cheapest: dict[tuple[int, int], int] = {}
    for u, v, w in g.edges:
        key = (min(u, v), max(u, v))
        cheapest[key] = min(cheapest.get(key, w), w)
    seen: set[int] = set()
    total = 0
    for p in paths:
        if len(p) < 2 or len(set(p)) != len(p) or seen & set(p):
            return False
        seen.update(p)
        for a, b in zip(p, p[1:]):
            key = (min(a, b), max(a, b))
            if key not in cheapest:
                return False
            total += cheapest[key]
    if pairs is not None:
        want = sorted(tuple(sorted(x)) for x in pairs)
        got = sorted(tuple(sorted((p[0], p[-1]))) for p in paths)
        if want != got:
            return False
    if endpoints is not None and not endpoints(paths):
        return False
    return weight is None or total == weight


def verify_solution(report: SolveReport, g: EmbeddedGraph, layout: TerminalLayout) -> bool:
    if report.status != "solved" or report.weight is None:
        return False
    return verify_paths(g, report.paths, layout.pairs, report.weight)


# -- shared search --------------------------------------------------------------------

def _mapper(jobs: int):
    if jobs <= 1:
        return map, None
    pool = ProcessPoolExecutor(max_workers=jobs)
    return pool.map, pool


class _Engine:
    """Evaluates the least term of the isolated generating function for a deletion set."""

    n: int
    edges: Sequence[tuple[int, int, int]]
    terminals: tuple[int, ...]

    def least(self, weights: Sequence[int], deleted: frozenset, truncate: int | None) -> tuple[int, int] | None:
        raise NotImplementedError

    def lower_bound(self, adj, weights) -> Callable[[int], float]:
        raise NotImplementedError

    def feasible_quick(self, deleted) -> bool:
        raise NotImplementedError


def _prune(engine: _Engine, weights: Sequence[int], bound: float, deleted: set[int]) -> set[int]:
    """Add every edge that lies on no system of weight <= bound by the distance lower bound."""
    if bound == INF:
        return deleted
    adj = adjacency(engine.n, engine.edges, deleted)
    lb = engine.lower_bound(adj, weights)
    for e in range(len(engine.edges)):
        if e not in deleted and lb(e) > bound:
            deleted.add(e)
    return deleted


def _decide(engine: _Engine, weights: Sequence[int], bound: float) -> tuple[int, int] | None:
    deleted = frozenset(_prune(engine, weights, bound, set()))
    return engine.least(weights, deleted, None if bound == INF else int(bound))


def _search(engine: _Engine, weights: Sequence[int], target: int) -> list[list[int]] | None:
    """Delete every edge whose removal keeps a term of degree ``target``."""
    m = len(engine.edges)
    deleted = _prune(engine, weights, target, set())
    for e in range(m):
        if e in deleted:
            continue
        if sum(weights[f] for f in range(m) if f not in deleted) == target:
            break
        trial = frozenset(deleted | {e})
        if not engine.feasible_quick(trial):
            continue
        got = engine.least(weights, trial, target)
        if got is not None and got[0] == target:
            deleted.add(e)
            _prune(engine, weights, target, deleted)
    kept = [e for e in range(m) if e not in deleted]
    return assemble_paths(engine.n, engine.edges, kept, engine.terminals)


# -- odd two-face solver --------------------------------------------------------------

class _TwoFaceEngine(_Engine):
    def __init__(self, g: EmbeddedGraph, layout: TerminalLayout, P: PathConfiguration,
                 modulus_bits: int | None, mapper):
        self.g, self.layout, self.P = g, layout, P
        self.n, self.edges = g.n, g.edges
        self.terminals = layout.terminals
        self.axis = dual_axis(g, layout)
        self.sys = config_system(layout.k1, layout.k2)
        self.bits = self.sys.modulus_bits(modulus_bits)
        self.rows = self.sys.support_rows(P, self.bits)
        self.mapper = mapper

    def least(self, weights, deleted, truncate):
        p = build_p(self.g, self.layout, self.axis, self.sys, self.bits, self.rows, weights,
                    sorted(deleted), truncate, self.mapper)
        h = solve_config(self.P, p, self.sys, self.bits)
        return h.lowest_term()

    def lower_bound(self, adj, weights):
        pairs = self.layout.pairs
        ds = [dijkstra(adj, s, weights)[0] for s, _ in pairs]
        dt = [dijkstra(adj, t, weights)[0] for _, t in pairs]
        base = [ds[i][t] for i, (_, t) in enumerate(pairs)]
        total = sum(base)

        def lb(e: int) -> float:
            u, v, _ = self.edges[e]
            w = weights[e]
            best = INF
            for i in range(len(pairs)):
                via = min(ds[i][u] + w + dt[i][v], ds[i][v] + w + dt[i][u])
                best = min(best, total - base[i] + via)
            return best

        return lb

    def feasible_quick(self, deleted) -> bool:
        return connected_pairs(self.n, self.edges, self.layout.pairs, deleted)


def decide(g: EmbeddedGraph, layout: TerminalLayout, seed: int = 0, trial: int = 0,
           modulus_bits: int | None = None, jobs: int = 1) -> tuple[int | None, IsolationWeights]:
    """Least scaled degree of ``det(M) h_P`` for one isolation draw (None if it vanishes)."""
    axis = dual_axis(g, layout)
    P = target_configuration(layout, axis)
    iso = randomize(g, seed, trial)
    mapper, pool = _mapper(jobs)
    try:
        eng = _TwoFaceEngine(g, layout, P, modulus_bits, mapper)
        got = _decide(eng, iso.weights, greedy_upper_bound(g.n, g.edges, layout.pairs, iso.weights))
    finally:
        if pool:
            pool.shutdown()
    return (None if got is None else got[0]), iso


def solve(g: EmbeddedGraph, layout: TerminalLayout, seed: int = 0, trials: int = RETRY_CAP,
          modulus_bits: int | None = None, jobs: int = 1) -> SolveReport:
    """Shortest disjoint paths for the layout's pairing, verified.

    Raises :class:`ProbabilisticFailure` if a nonzero answer was seen but
    never verified within ``trials`` draws.
    """
    layout.validate(g, require_odd=True)
    axis = dual_axis(g, layout)
    try:
        P = target_configuration(layout, axis)
    except ValueError as exc:
        return SolveReport("infeasible", detail=f"pairing not realisable: {exc}", seed=seed)
    target = P.as_dict()
    if not connected_pairs(g.n, g.edges, layout.pairs):
        return SolveReport("infeasible", target=target, seed=seed, detail="a pair is disconnected")
    mapper, pool = _mapper(jobs)
    try:
        eng = _TwoFaceEngine(g, layout, P, modulus_bits, mapper)
        nonzero = False
        for t in range(trials):
            iso = randomize(g, seed, t)
            got = _decide(eng, iso.weights, greedy_upper_bound(g.n, g.edges, layout.pairs, iso.weights))
            if got is None:
                continue
            nonzero = True
            paths = _search(eng, iso.weights, got[0])
            if paths is None:
                continue
            paths = _orient(paths, layout.pairs)
            W = iso.recover(got[0])
            if verify_paths(g, paths, layout.pairs, W):
                return SolveReport("solved", W, paths, t + 1, True, True, target, seed)
    finally:
        if pool:
            pool.shutdown()
    if nonzero:
        raise ProbabilisticFailure(f"no verified solution after {trials} trials")
    return SolveReport("not_found", trials=trials, definitive=False, target=target, seed=seed,
                       detail="generating function vanished in every trial")


def _orient(paths: list[list[int]], pairs) -> list[list[int]]:
    """Order paths like ``pairs``, each running from its first terminal."""
    by_end = {}
    for p in paths:
        by_end[p[0]] = p
        by_end[p[-1]] = p[::-1]
    return [by_end[s] for s, _ in pairs if s in by_end]


# -- (A+B, q) solver ------------------------------------------------------------------

def ab_levels(k1: int, k2: int, q: int) -> list[int]:
    """Crossing counts t = q, q+2, ..., min(k1, k2)."""
    return list(range(q, min(k1, k2) + 1, 2))


def ab_bits(g: PlainGraph) -> int:
    return len(g.A) + len(g.B) + 1


def ab_roles(g: PlainGraph, t: int):
    """All (sources, sinks) for level t: sinks J1 in A, sources J2 in B."""
    A, B = sorted(g.A), sorted(g.B)
    t1, t2 = (len(A) - t) // 2, (len(B) - t) // 2
    for J1 in itertools.combinations(A, t1):
        for J2 in itertools.combinations(B, t2):
            sources = [a for a in A if a not in J1] + list(J2)
            sinks = list(J1) + [b for b in B if b not in J2]
            yield sources, sinks


def ab_digraph(g: PlainGraph, sources, sinks, bits: int, weights=None, deleted=()) -> PreprocessedDigraph:
    deleted = set(deleted)
    keep = [e for e in range(len(g.edges)) if e not in deleted]
    arcs = orient_arcs([g.edges[e] for e in keep], g.n, sources, sinks,
                       None if weights is None else [weights[e] for e in keep])
    arcs += closing_arcs(g.n, sources, sinks)
    return PreprocessedDigraph(g.n, tuple(arcs), PolyContext(bits, 1))


def _level_job(args) -> UniPoly:
    g, t, bits, weights, deleted, truncate = args
    ctx = PolyContext(bits, 1)
    total = UniPoly.zero(ctx)
    for sources, sinks in ab_roles(g, t):
        perm = ab_digraph(g, sources, sinks, bits, weights, deleted).permanent(truncate)
        total = total + UniPoly._raw(dict(perm.terms), ctx)
    return total


def ab_level_sums(g: PlainGraph, q: int, bits: int, weights=None, deleted=(), truncate=None,
                  mapper=map) -> dict[int, UniPoly]:
    """Summed permanents over all role choices, per level t >= q."""
    levels = ab_levels(len(g.A), len(g.B), q)
    jobs = [(g, t, bits, weights, tuple(sorted(deleted)), truncate) for t in levels]
    return dict(zip(levels, mapper(_level_job, jobs)))


def ab_coefficient(i: int, t: int) -> int:
    """How many role choices at level t see one fixed configuration with i crossing paths, beyond 2^(within paths)."""
    return math.comb(i, (i - t) // 2)


def ab_peel(sums: dict[int, UniPoly], k1: int, k2: int) -> dict[int, UniPoly]:
    """``G_t = 2^((k1+k2-2t)/2) H_t`` from the level sums, top level first.

    A configuration with i >= t crossing paths appears at level t once for
    every choice of which (i - t)/2 crossing paths run from B to A, times the
    free orientation of each within-face path.
    """
    out: dict[int, UniPoly] = {}
    for t in sorted(sums, reverse=True):
        g_t = sums[t]
        for i, g_i in out.items():
            g_t = g_t - g_i.scale(ab_coefficient(i, t))
        out[t] = g_t
    return out


class _ABEngine(_Engine):
    def __init__(self, g: PlainGraph, q: int, mapper):
        self.g, self.q = g, q
        self.n, self.edges = g.n, g.edges
        self.terminals = tuple(sorted(g.A + g.B))
        self.bits = ab_bits(g)
        self.mapper = mapper

    def least(self, weights, deleted, truncate):
        sums = ab_level_sums(self.g, self.q, self.bits, weights, deleted, truncate, self.mapper)
        return ab_peel(sums, len(self.g.A), len(self.g.B))[self.q].lowest_term()

    def lower_bound(self, adj, weights):
        dist = {v: dijkstra(adj, v, weights)[0] for v in self.terminals}

        def lb(e: int) -> float:
            u, v, _ = self.edges[e]
            best = INF
            for a, b in itertools.permutations(self.terminals, 2):
                best = min(best, dist[a][u] + weights[e] + dist[b][v])
            return best

        return lb

    def feasible_quick(self, deleted) -> bool:
        return True

    def endpoints_ok(self, paths) -> bool:
        A = set(self.g.A)
        cross = sum((p[0] in A) != (p[-1] in A) for p in paths)
        return cross == self.q and len(paths) * 2 == len(self.terminals)


def ab_pairings(g: PlainGraph, q: int):
    """All perfect pairings of A + B with exactly q pairs across."""
    A, B = sorted(g.A), sorted(g.B)

    def matchings(xs):
        if not xs:
            yield []
            return
        a = xs[0]
        for i in range(1, len(xs)):
            for rest in matchings(xs[1:i] + xs[i + 1:]):
                yield [(a, xs[i])] + rest

    for SA in itertools.combinations(A, q):
        for SB in itertools.permutations(B, q):
            cross = list(zip(SA, SB))
            for ma in matchings([a for a in A if a not in SA]):
                for mb in matchings([b for b in B if b not in SB]):
                    yield cross + ma + mb


def _ab_bound(g: PlainGraph, q: int, weights, cap: int = 64) -> float:
    best = INF
    for pairing in itertools.islice(ab_pairings(g, q), cap):
        best = min(best, greedy_upper_bound(g.n, g.edges, pairing, weights, orders=6))
    return best


def solve_ab(g: PlainGraph, q: int, seed: int = 0, trials: int = RETRY_CAP, jobs: int = 1) -> SolveReport:
    """Shortest disjoint paths pairing A + B with exactly q paths across."""
    k1, k2 = len(g.A), len(g.B)
    if q > min(k1, k2) or (k1 - q) % 2 or (k2 - q) % 2:
        raise ValueError("q must satisfy q <= min(|A|, |B|) and q = |A| = |B| mod 2")
    target = {"k1": k1, "k2": k2, "q": q}
    mapper, pool = _mapper(jobs)
    try:
        eng = _ABEngine(g, q, mapper)
        nonzero = False
        for t in range(trials):
            iso = randomize(g, seed, t)
            got = _decide(eng, iso.weights, _ab_bound(g, q, iso.weights))
            if got is None:
                continue
            nonzero = True
            paths = _search(eng, iso.weights, got[0])
            if paths is None:
                continue
            W = iso.recover(got[0])
            if verify_paths(g, paths, None, W, eng.endpoints_ok):
                return SolveReport("solved", W, paths, t + 1, True, True, target, seed)
    finally:
        if pool:
            pool.shutdown()
    if nonzero:
        raise ProbabilisticFailure(f"no verified solution after {trials} trials")
    return SolveReport("not_found", trials=trials, definitive=False, target=target, seed=seed,
                       detail="generating function vanished in every trial")
