import itertools

import numpy as np
import pytest

from twoface.algebra import BiPoly, PolyContext, UniPoly
from twoface.oracle import cover_monomials
from twoface.permanent import (
    PolyMatrix, bandwidth_order, naive_perm, perm_y_coeff, ryser_perm, sparse_perm,
)
from twoface.system import PreprocessedDigraph


def random_matrix(rng, n, ctx, density=0.7, terms=2):
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            if rng.random() < density:
                row.append(BiPoly({(int(rng.integers(0, 5)), int(rng.integers(0, ctx.q))): int(rng.integers(1, 9))
                                   for _ in range(terms)}, ctx))
            else:
                row.append(BiPoly.zero(ctx))
        rows.append(row)
    return PolyMatrix(rows, ctx)


def mono(c, i, j, ctx):
    return BiPoly.monomial(c, i, j, ctx)


def test_identity_and_permutation_matrix():
    ctx = PolyContext(8, 1)
    for n in (1, 3, 5):
        eye = PolyMatrix([[BiPoly.one(ctx) if i == j else BiPoly.zero(ctx) for j in range(n)] for i in range(n)])
        assert ryser_perm(eye) == BiPoly.one(ctx)
        assert naive_perm(eye) == BiPoly.one(ctx)
    perm = [2, 0, 3, 1]
    P = PolyMatrix([[BiPoly.one(ctx) if perm[i] == j else BiPoly.zero(ctx) for j in range(4)] for i in range(4)])
    assert naive_perm(P) == BiPoly.one(ctx) == sparse_perm(P)


def test_two_by_two():
    ctx = PolyContext(16, 2)
    a, b, c, d = mono(1, 1, 0, ctx), mono(2, 0, 1, ctx), mono(3, 2, 1, ctx), mono(5, 1, 1, ctx)
    M = PolyMatrix([[a, b], [c, d]])
    want = a * d + b * c
    assert ryser_perm(M) == want == naive_perm(M) == sparse_perm(M)


def test_one_by_one():
    ctx = PolyContext(8, 3)
    f = BiPoly({(1, 2): 3, (0, 0): 1}, ctx)
    assert naive_perm(PolyMatrix([[f]])) == f


def test_empty_and_ragged_rejected():
    with pytest.raises(ValueError):
        PolyMatrix([])
    ctx = PolyContext(8)
    with pytest.raises(ValueError):
        PolyMatrix([[BiPoly.one(ctx), BiPoly.one(ctx)]])
    with pytest.raises(ValueError):
        naive_perm(random_matrix(np.random.default_rng(0), 9, ctx))


def test_backends_agree():
    rng = np.random.default_rng(1)
    for _ in range(40):
        n = int(rng.integers(1, 7))
        ctx = PolyContext(int(rng.integers(3, 40)), int(rng.integers(1, 4)))
        M = random_matrix(rng, n, ctx, density=rng.uniform(0.3, 1.0))
        ref = naive_perm(M)
        assert ryser_perm(M) == ref
        assert sparse_perm(M) == ref
        assert sparse_perm(M, order=list(range(n))) == ref


def test_truncation_drops_only_high_degrees():
    rng = np.random.default_rng(2)
    ctx = PolyContext(20, 2)
    for _ in range(10):
        M = random_matrix(rng, 5, ctx)
        full = naive_perm(M)
        cut = sparse_perm(M, truncate=6)
        assert cut.terms == {k: v for k, v in full.terms.items() if k[0] <= 6}


def test_invariant_under_row_and_column_permutations():
    rng = np.random.default_rng(3)
    ctx = PolyContext(12, 3)
    M = random_matrix(rng, 5, ctx)
    ref = ryser_perm(M)
    for _ in range(5):
        r, c = rng.permutation(5), rng.permutation(5)
        assert ryser_perm(M.permuted(r, c)) == ref


def test_multilinear_in_rows():
    rng = np.random.default_rng(4)
    ctx = PolyContext(12, 2)
    U, V = random_matrix(rng, 4, ctx), random_matrix(rng, 4, ctx)
    r = 2
    rows = [list(row) for row in U.entries]
    rows[r] = [u + v for u, v in zip(U.entries[r], V.entries[r])]
    with_v = [list(row) for row in U.entries]
    with_v[r] = list(V.entries[r])
    assert naive_perm(PolyMatrix(rows)) == naive_perm(U) + naive_perm(PolyMatrix(with_v))


def test_y_coefficients():
    ctx = PolyContext(8, 3)
    y = mono(1, 0, 1, ctx)
    z = BiPoly.zero(ctx)
    D = PolyMatrix([[y, z, z], [z, y, z], [z, z, y]])
    assert perm_y_coeff(D, 0) == UniPoly.one(PolyContext(8))
    assert not perm_y_coeff(D, 1) and not perm_y_coeff(D, 2)
    with pytest.raises(ValueError):
        perm_y_coeff(D, 3)


def test_y_components_reassemble():
    rng = np.random.default_rng(5)
    ctx = PolyContext(16, 3)
    M = random_matrix(rng, 4, ctx)
    total = BiPoly.zero(ctx)
    for tau in range(3):
        part = perm_y_coeff(M, tau)
        total = total + BiPoly({(x, tau): c for (x, _), c in part.terms.items()}, ctx)
    assert total == ryser_perm(M)


def test_q1_gives_whole_permanent():
    rng = np.random.default_rng(6)
    ctx = PolyContext(16, 1)
    M = random_matrix(rng, 4, ctx)
    assert perm_y_coeff(M, 0).terms == ryser_perm(M).terms


def test_parallel_ryser_matches_serial():
    rng = np.random.default_rng(7)
    ctx = PolyContext(16, 1)
    M = random_matrix(rng, 10, ctx, density=0.3, terms=1)
    assert ryser_perm(M, jobs=2) == ryser_perm(M) == sparse_perm(M)


def test_cycle_covers_biject_with_monomials():
    rng = np.random.default_rng(8)
    for _ in range(10):
        n = int(rng.integers(2, 7))
        arcs = [(i, i, 0, 0) for i in range(n) if rng.random() < 0.6]
        for i, j in itertools.permutations(range(n), 2):
            if rng.random() < 0.5:
                arcs.append((i, j, int(rng.integers(1, 6)), int(rng.integers(0, 2))))
        H = PreprocessedDigraph(n, tuple(arcs), PolyContext(40, 2))
        covers = cover_monomials(H)
        perm = naive_perm(H.matrix())
        assert perm.terms == {k: v for k, v in covers.items()}


def test_bandwidth_order_is_a_permutation():
    order = bandwidth_order(6, [(0, 5), (5, 2), (2, 4)])
    assert sorted(order) == list(range(6))
