"""The linear system relating permanents to per-configuration generating functions.

Rows are role assignments ``(q, J1, J2, tau)``: J1 are the sinks on the outer
face, J2 the sources on the inner face, tau a residue of the y-exponent.
Columns are configurations. ``M[row, P] = 1`` iff P is compatible with the
roles and its axis crossing is tau modulo q, so that ``M . h = p`` where p
collects the y-components of the permanents. ``L`` is a signed combination
of rows per configuration with ``F = L . M`` triangular up to a permutation;
the checks below verify this on any given face sizes.
"""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from graphlib import CycleError, TopologicalSorter
import itertools

import numpy as np

from .algebra.poly import BiPoly, PolyContext, UniPoly
from .configurations import (
    INNER,
    OUTER,
    PathConfiguration,
    RowIndex,
    axis_crossing_int,
    bad_paths,
    compatible,
    config_row,
    delta,
    enumerate_configs,
    enumerate_rows,
    f1f2_equivalent,
    frame_shift,
    phi,
    prec,
    rightmost_pivots,
)
from .errors import InvariantViolation, TerminalPlacementError
from .graph_model import AxisDescriptor, EmbeddedGraph, TerminalLayout
from .permanent import PolyMatrix, sparse_perm

HEADROOM_BITS = 8


# -- integer linear algebra -------------------------------------------------------

def bareiss_det(M) -> int:
    """Exact determinant by fraction-free elimination."""
    A = [[int(x) for x in row] for row in M]
    n = len(A)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def det_adj(M) -> tuple[int, list[list[int]]]:
    """Determinant and adjugate of an integer matrix.

    The adjugate is ``det * M^-1`` from rational Gauss-Jordan elimination and
    is checked to be integral.
    """
    n = len(M)
    det = bareiss_det(M)
    if det == 0:
        raise InvariantViolation("configuration matrix is singular")
    A = [[Fraction(int(x)) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        piv = next(i for i in range(col, n) if A[i][col] != 0)
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [x * inv for x in A[col]]
        for i in range(n):
            if i != col and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    adj = []
    for i in range(n):
        row = []
        for x in A[i][n:]:
            v = x * det
            if v.denominator != 1:
                raise InvariantViolation("adjugate is not integral")
            row.append(int(v))
        adj.append(row)
    return det, adj


def det_ceiling_bits(k: int, dim: int) -> float:
    """Ceiling on log2|det M|: the analytic bound, or log2(dim!) + 1 when that is larger."""
    f0 = 2 * k * k * math.log2(k) * 4**k if k > 1 else 0.0
    return max(f0, math.lgamma(dim + 1) / math.log(2) + 1)


def modulus_bits_for(det: int, headroom: int = HEADROOM_BITS) -> int:
    return abs(det).bit_length() + 1 + headroom


def verify_triangular(F) -> list[int]:
    """Topological order of the nonzero pattern of F; raises if it has a cycle.

    In the returned order F is upper triangular. Zero diagonal entries also raise.
    """
    F = np.asarray(F, dtype=object)
    n = F.shape[0]
    preds = {j: {i for i in range(n) if i != j and F[i, j] != 0} for j in range(n)}
    for i in range(n):
        if F[i, i] == 0:
            raise InvariantViolation(f"zero diagonal entry at {i}")
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        raise InvariantViolation(f"nonzero pattern has a cycle: {exc.args[1]}") from None
    return order


def is_power_of_two(v: int) -> bool:
    v = abs(int(v))
    return v > 0 and v & (v - 1) == 0


# -- role-sum counts ------------------------------------------------------------------

@lru_cache(maxsize=None)
def _sum_counts(length: int, q: int) -> tuple[int, ...]:
    """Number of I in Z_q^length with sum(I) = s (mod 2q), for s in [0, 2q)."""
    counts = [0] * (2 * q)
    counts[0] = 1
    for _ in range(length):
        new = [0] * (2 * q)
        for s, c in enumerate(counts):
            if c:
                for i in range(q):
                    new[(s + i) % (2 * q)] += c
        counts = new
    return tuple(counts)


@dataclass(frozen=True)
class LTerm:
    """One aggregated summand of a configuration's signed row combination."""

    row: RowIndex           # in the axis frame
    J1: tuple[int, ...]     # roles in the configuration's own frame
    J2: tuple[int, ...]
    weight: int


def l_terms(P: PathConfiguration) -> list[LTerm]:
    """Signed summands of L's row for P, aggregated over the I vectors.

    P is moved to the frame where its smallest free labels are 0; y-offsets are
    mapped back to the axis frame with :func:`frame_shift`.
    """
    k1, k2, q = P.k1, P.k2, P.q
    s1, s2 = P.canonical_offsets()
    Pr = P.rotated(s1, s2)
    piv = phi(Pr)
    l1, l2 = len(P.within1), len(P.within2)
    base = axis_crossing_int(Pr, Pr.alphas(OUTER), Pr.alphas(INNER))
    c1, c2 = _sum_counts(l1, q), _sum_counts(l2, q)
    out: dict[tuple, int] = defaultdict(int)
    for J1 in itertools.combinations(range(k1), l1):
        _, d1 = delta(J1, piv.expanded1)
        J1f = tuple(sorted((j + s1) % k1 for j in J1))
        for J2 in itertools.combinations(range(k2), l2):
            _, d2 = delta(J2, piv.expanded2)
            J2f = tuple(sorted((j + s2) % k2 for j in J2))
            shift = frame_shift(J1f, J2f, s1, s2)
            sj = sum(J1) + sum(J2) + d1 + d2
            for a, na in enumerate(c1):
                if not na:
                    continue
                for b, nb in enumerate(c2):
                    if not nb:
                        continue
                    tau = (2 * a + 2 * d1 - 2 * b - 2 * d2) % q
                    sigma = (a + b + sj) % 2
                    row = (q, J1f, J2f, (base + tau - shift) % q)
                    out[(row, J1, J2)] += (-1) ** sigma * na * nb
    return [LTerm(row, J1, J2, w) for (row, J1, J2), w in sorted(out.items()) if w]


# -- the system ---------------------------------------------------------------------

class ConfigSystem:
    """Matrices M, L, F and the determinant/adjugate of M for given face sizes."""

    def __init__(self, k1: int, k2: int):
        if k1 % 2 == 0 or k2 % 2 == 0:
            raise TerminalPlacementError("both faces need an odd number of terminals")
        self.k1, self.k2 = k1, k2
        self.rows: tuple[RowIndex, ...] = enumerate_rows(k1, k2)
        self.cols: tuple[PathConfiguration, ...] = enumerate_configs(k1, k2)
        self.row_index = {r: i for i, r in enumerate(self.rows)}
        self.col_index = {P.matching(): i for i, P in enumerate(self.cols)}

    @property
    def k(self) -> int:
        return (self.k1 + self.k2) // 2

    @cached_property
    def M(self) -> np.ndarray:
        M = np.zeros((len(self.rows), len(self.cols)), dtype=np.int64)
        by_roles: dict[tuple, list[int]] = defaultdict(list)
        for i, (q, J1, J2, tau) in enumerate(self.rows):
            by_roles[(q, J1, J2)].append(i)
        for (q, J1, J2), idx in by_roles.items():
            for c, P in enumerate(self.cols):
                if compatible(P, J1, J2):
                    tau = axis_crossing_int(P, J1, J2) % q
                    M[self.row_index[(q, J1, J2, tau)], c] = 1
        return M

    @cached_property
    def terms(self) -> list[list[LTerm]]:
        return [l_terms(P) for P in self.cols]

    @cached_property
    def L(self) -> np.ndarray:
        L = np.zeros((len(self.cols), len(self.rows)), dtype=np.int64)
        for c, terms in enumerate(self.terms):
            for t in terms:
                L[c, self.row_index[t.row]] += t.weight
        return L

    @cached_property
    def F(self) -> np.ndarray:
        return self.L @ self.M

    @cached_property
    def _det_adj(self) -> tuple[int, list[list[int]]]:
        return det_adj(self.M.tolist())

    @property
    def det(self) -> int:
        return self._det_adj[0]

    @property
    def adj(self) -> list[list[int]]:
        return self._det_adj[1]

    def modulus_bits(self, override: int | None = None) -> int:
        need = modulus_bits_for(self.det, 0)
        if override is not None:
            if override < need:
                raise ValueError(f"modulus of {override} bits cannot hold det(M) = {self.det}")
            return override
        bits = modulus_bits_for(self.det)
        if math.log2(abs(self.det)) >= det_ceiling_bits(self.k, len(self.rows)):
            raise InvariantViolation("det(M) exceeds its analytic ceiling")
        return bits

    def column(self, P: PathConfiguration) -> int:
        return self.col_index[P.matching()]

    def support_rows(self, P: PathConfiguration, bits: int) -> list[int]:
        """Rows whose adjugate coefficient for P is nonzero modulo 2^bits."""
        c = self.column(P)
        mod = 1 << bits
        return [r for r, a in enumerate(self.adj[c]) if a % mod]

    def as_dict(self) -> dict:
        return {
            "k1": self.k1,
            "k2": self.k2,
            "rows": [[q, list(J1), list(J2), tau] for q, J1, J2, tau in self.rows],
            "columns": [P.as_dict() for P in self.cols],
            "M": self.M.tolist(),
            "L": self.L.tolist(),
            "F": self.F.tolist(),
            "det": self.det,
            "adj": self.adj,
        }


@lru_cache(maxsize=None)
def config_system(k1: int, k2: int) -> ConfigSystem:
    return ConfigSystem(k1, k2)


# -- structural checks ---------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    passed: bool
    detail: str = ""
    failures: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail,
                "failures": [str(f) for f in self.failures[:20]]}


def check_squareness(sys: ConfigSystem) -> CheckReport:
    """Rows and columns have equal count and P -> (alpha sets, crossing) is a bijection."""
    images = [config_row(P) for P in sys.cols]
    fails = []
    if len(sys.rows) != len(sys.cols):
        fails.append(f"{len(sys.rows)} rows vs {len(sys.cols)} columns")
    if len(set(images)) != len(images):
        fails.append("map to rows is not injective")
    if set(images) != set(sys.rows):
        fails.append("map to rows is not surjective")
    return CheckReport("squareness", not fails, f"dim={len(sys.cols)}", fails)


def f_split(sys: ConfigSystem) -> tuple[np.ndarray, np.ndarray]:
    """F separated into contributions from good and from bad role assignments."""
    n = len(sys.cols)
    good = np.zeros((n, n), dtype=np.int64)
    bad = np.zeros((n, n), dtype=np.int64)
    M = sys.M
    rotated_cache: dict[tuple, PathConfiguration] = {}
    for p, (P, terms) in enumerate(zip(sys.cols, sys.terms)):
        s1, s2 = P.canonical_offsets()
        piv = phi(P.rotated(s1, s2))
        for t in terms:
            r = sys.row_index[t.row]
            for c in np.nonzero(M[r])[0]:
                key = (int(c), s1, s2)
                Cr = rotated_cache.get(key)
                if Cr is None:
                    Cr = rotated_cache[key] = sys.cols[c].rotated(s1, s2)
                if bad_paths(Cr, t.J1, t.J2, piv):
                    bad[p, c] += t.weight
                else:
                    good[p, c] += t.weight
    return good, bad


def check_cancellation(sys: ConfigSystem) -> CheckReport:
    """Bad occurrences cancel, and face-equivalent distinct columns vanish."""
    good, bad = f_split(sys)
    F = sys.F
    fails = []
    if not np.array_equal(good + bad, F):
        fails.append("good/bad split does not add up to F")
    for p, c in zip(*np.nonzero(bad)):
        fails.append(f"bad contributions of column {c} do not cancel in row {p}")
    for p, P in enumerate(sys.cols):
        for c, C in enumerate(sys.cols):
            if c != p and f1f2_equivalent(P, C) and F[p, c] != 0:
                fails.append(f"face-equivalent column {c} survives in row {p}")
    return CheckReport("cancellation", not fails, "", fails)


def check_diagonal(sys: ConfigSystem) -> CheckReport:
    diag = np.diag(sys.F)
    fails = [f"F[{i},{i}] = {v}" for i, v in enumerate(diag) if not is_power_of_two(v)]
    return CheckReport("diagonal", not fails, f"values={sorted(set(int(abs(v)) for v in diag))}", fails)


def check_acyclic(sys: ConfigSystem) -> tuple[CheckReport, list[int] | None]:
    try:
        order = verify_triangular(sys.F)
    except InvariantViolation as exc:
        return CheckReport("acyclic", False, str(exc), [str(exc)]), None
    Fp = sys.F[np.ix_(order, order)]
    ok = np.array_equal(Fp, np.triu(Fp))
    return CheckReport("acyclic", ok, "topological order found"), order


def _pivot_profile(P: PathConfiguration):
    data = phi(P)
    rp = rightmost_pivots(P)
    return (
        (frozenset(data.A1), frozenset(data.A2)),
        rp,
        (data.multiplicity(OUTER), data.multiplicity(INNER)),
    )


def check_rightmost_chain(sys: ConfigSystem) -> CheckReport:
    """Pivot-set, rightmost-pivot and multiplicity conditions on nonzero entries."""
    F = sys.F
    prof = [_pivot_profile(P) for P in sys.cols]
    fails = []
    for p, c in zip(*np.nonzero(F)):
        if p == c:
            continue
        (A_P, R_P, N_P), (A_C, R_C, N_C) = prof[p], prof[c]
        # subset of pivots holds for every nonzero entry
        if not (A_C[0] <= A_P[0] and A_C[1] <= A_P[1]):
            fails.append(f"pivots of column {c} not within those of row {p}")
            continue
        if sys.cols[p].q != sys.cols[c].q:
            continue
        if A_C != A_P:
            continue
        if not (R_C[0] <= R_P[0] and R_C[1] <= R_P[1]):
            fails.append(f"rightmost pivots of column {c} not within those of row {p}")
            continue
        if R_C != R_P:
            continue
        for face in (0, 1):
            for a in R_C[face]:
                if N_C[face][a] > N_P[face][a]:
                    fails.append(f"multiplicity of pivot {a} grows from row {p} to column {c}")
    return CheckReport("rightmost_chain", not fails, "", fails)


def run_checks(k1: int, k2: int) -> dict:
    sys = config_system(k1, k2)
    reports = [check_squareness(sys), check_cancellation(sys), check_diagonal(sys)]
    acyc, order = check_acyclic(sys)
    reports.append(acyc)
    reports.append(check_rightmost_chain(sys))
    return {
        "k1": k1,
        "k2": k2,
        "dimension": len(sys.cols),
        "det": sys.det,
        "witness_order": order,
        "checks": [r.as_dict() for r in reports],
        "passed": all(r.passed for r in reports),
    }


# -- instance side ----------------------------------------------------------------------

def target_configuration(layout: TerminalLayout, axis: AxisDescriptor) -> PathConfiguration:
    """The configuration demanded by the layout's pairs, in the axis frame.

    Raises ValueError if the pairs cannot be realised by disjoint paths in
    any embedding of the annulus (interlacing or trapped terminals).
    """
    labels = axis.labels(layout)
    w1, w2, cross = [], [], []
    for s, t in layout.pairs:
        (fs, ls), (ft, lt) = labels[s], labels[t]
        if fs == ft:
            k = layout.k1 if fs == OUTER else layout.k2
            pair = (ls, lt) if prec(ls, lt, k) else (lt, ls)
            (w1 if fs == OUTER else w2).append(pair)
        elif fs == OUTER:
            cross.append((ls, lt))
        else:
            cross.append((lt, ls))
    P = PathConfiguration(layout.k1, layout.k2, w1, w2, cross)
    P.validate()
    return P


@dataclass(frozen=True)
class PreprocessedDigraph:
    """Digraph with monomial arc weights ``(tail, head, xdeg, ydeg)``."""

    n: int
    arcs: tuple[tuple[int, int, int, int], ...]
    ctx: PolyContext

    def sparse_rows(self) -> list[list[tuple[int, list[tuple[int, int, int]]]]]:
        acc: list[dict[int, dict[tuple[int, int], int]]] = [defaultdict(dict) for _ in range(self.n)]
        for i, j, xd, yd in self.arcs:
            key = (xd, yd % self.ctx.q)
            acc[i][j][key] = acc[i][j].get(key, 0) + 1
        return [
            [(j, [(x, y, c) for (x, y), c in sorted(terms.items())]) for j, terms in sorted(row.items())]
            for row in acc
        ]

    def matrix(self) -> PolyMatrix:
        return PolyMatrix.from_monomials(self.n, self.arcs, self.ctx)

    def permanent(self, truncate: int | None = None) -> BiPoly:
        return sparse_perm(n=self.n, rows=self.sparse_rows(), ctx=self.ctx, truncate=truncate)


def orient_arcs(edges, n: int, sources: Iterable[int], sinks: Iterable[int], weights=None,
                yexp=None) -> list[tuple[int, int, int, int]]:
    """Primal arcs after orienting: out of sources, into sinks."""
    sources, sinks = set(sources), set(sinks)
    arcs = []
    for e, (u, v, w) in enumerate(edges):
        w = w if weights is None else weights[e]
        for d, (a, b) in enumerate(((u, v), (v, u))):
            if a in sinks or b in sources:
                continue
            y = 0 if yexp is None else yexp(2 * e + d)
            arcs.append((a, b, int(w), y))
    return arcs


def closing_arcs(n: int, sources: Sequence[int], sinks: Sequence[int]) -> list[tuple[int, int, int, int]]:
    """Demand arcs (i-th sink to i-th source) and self-loops on the other vertices."""
    arcs = [(t, s, 0, 0) for t, s in zip(sorted(sinks), sorted(sources))]
    terms = set(sources) | set(sinks)
    arcs += [(v, v, 0, 0) for v in range(n) if v not in terms]
    return arcs


def roles_to_vertices(layout: TerminalLayout, axis: AxisDescriptor, J1, J2) -> tuple[list[int], list[int]]:
    """Source and sink vertex lists for roles given as axis-frame labels."""
    sinks = [axis.terminal_at(layout, OUTER, j) for j in J1]
    sources = [axis.terminal_at(layout, OUTER, j) for j in range(layout.k1) if j not in set(J1)]
    sources += [axis.terminal_at(layout, INNER, j) for j in J2]
    sinks += [axis.terminal_at(layout, INNER, j) for j in range(layout.k2) if j not in set(J2)]
    return sources, sinks


def build_H(g: EmbeddedGraph, layout: TerminalLayout, roles: tuple[int, Sequence[int], Sequence[int]],
            axis: AxisDescriptor, bits: int = 64, weights: Sequence[int] | None = None,
            deleted: Iterable[int] = ()) -> PreprocessedDigraph:
    """Oriented, y-weighted digraph for the role assignment ``(q, J1, J2)``."""
    q, J1, J2 = roles
    if len(J1) != (layout.k1 - q) // 2 or len(J2) != (layout.k2 - q) // 2 or (layout.k1 - q) % 2:
        raise ValueError("role sizes do not match q")
    sources, sinks = roles_to_vertices(layout, axis, J1, J2)
    deleted = set(deleted)
    edges = [(u, v, w) if e not in deleted else None for e, (u, v, w) in enumerate(g.edges)]
    keep = [(e, t) for e, t in enumerate(edges) if t is not None]
    arcs = orient_arcs([t for _, t in keep], g.n, sources, sinks,
                       None if weights is None else [weights[e] for e, _ in keep],
                       lambda d: axis.y_exponent(2 * keep[d >> 1][0] + (d & 1)) % q)
    arcs += closing_arcs(g.n, sources, sinks)
    return PreprocessedDigraph(g.n, tuple(arcs), PolyContext(bits, q))


def build_p(g: EmbeddedGraph, layout: TerminalLayout, axis: AxisDescriptor, sys: ConfigSystem,
            bits: int, rows: Sequence[int] | None = None, weights=None, deleted=(),
            truncate: int | None = None, mapper=map) -> dict[int, UniPoly]:
    """y-components of the permanents, one per requested row index."""
    wanted = range(len(sys.rows)) if rows is None else rows
    groups: dict[tuple, list[int]] = defaultdict(list)
    for r in wanted:
        q, J1, J2, tau = sys.rows[r]
        groups[(q, J1, J2)].append(r)
    keys = sorted(groups)
    jobs = [(g, layout, key, axis, bits, weights, tuple(deleted), truncate) for key in keys]
    perms = list(mapper(_perm_job, jobs))
    out = {}
    for key, perm in zip(keys, perms):
        for r in groups[key]:
            out[r] = perm.y_component(sys.rows[r][3])
    return out


def _perm_job(args) -> BiPoly:
    g, layout, roles, axis, bits, weights, deleted, truncate = args
    return build_H(g, layout, roles, axis, bits, weights, deleted).permanent(truncate)


def solve_config(P: PathConfiguration, p: Mapping[int, UniPoly], sys: ConfigSystem, bits: int) -> UniPoly:
    """``det(M) * h_P`` modulo 2^bits from the adjugate row of P."""
    if (1 << bits) <= abs(sys.det):
        raise ValueError("modulus too small for det(M)")
    c = sys.column(P)
    ctx = PolyContext(bits, 1)
    acc: dict[int, int] = {}
    mask = (1 << bits) - 1
    for r, a in enumerate(sys.adj[c]):
        if a % (1 << bits) == 0 or r not in p:
            continue
        for (x, _), v in p[r].terms.items():
            acc[x] = (acc.get(x, 0) + a * v) & mask
    missing = [r for r, a in enumerate(sys.adj[c]) if a % (1 << bits) and r not in p]
    if missing:
        raise ValueError(f"permanent vector lacks rows {missing}")
    return UniPoly._raw({(x, 0): v for x, v in acc.items() if v}, ctx)
