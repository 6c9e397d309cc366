import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoface.algebra import (
    BiPoly, GaloisRing, GF2m, PolyContext, UniPoly, character_sum, extract_coeffs_mod2,
    extract_coeffs_mod2k, field_evaluator, find_irreducible, is_irreducible, ring_evaluator,
)
from twoface.algebra.fields import clmul, gf2_mod
from twoface.errors import DegreeCapError


# -- BiPoly ---------------------------------------------------------------------------

def test_y_wraps_around():
    ctx = PolyContext(8, 5)
    a = BiPoly.monomial(1, 0, 4, ctx)
    b = BiPoly.monomial(1, 0, 1, ctx)
    assert (a * b).terms == {(0, 0): 1}


def test_difference_of_squares_q2():
    ctx = PolyContext(3, 2)
    x = BiPoly.monomial(1, 1, 0, ctx)
    y = BiPoly.monomial(1, 0, 1, ctx)
    # y^2 = 1 when q = 2, and -1 = 7 mod 8
    assert ((x + y) * (x - y)).terms == {(2, 0): 1, (0, 0): 7}


def test_y_component():
    ctx = PolyContext(16, 3)
    f = BiPoly({(3, 2): 1, (1, 5): 1}, ctx)
    assert f.y_component(2) == UniPoly({(3, 0): 1, (1, 0): 1}, PolyContext(16, 1))
    with pytest.raises(ValueError):
        f.y_component(3)


def test_mixed_contexts_rejected():
    a = BiPoly({(0, 0): 1}, PolyContext(8, 1))
    b = BiPoly({(0, 0): 1}, PolyContext(8, 2))
    with pytest.raises(ValueError):
        a + b


def test_degree_cap():
    ctx = PolyContext(8, 1, cap=3)
    a = BiPoly({(2, 0): 1}, ctx)
    with pytest.raises(DegreeCapError):
        a * a


def naive_product(a, b, bits, q):
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            k = (i1 + i2, (j1 + j2) % q)
            out[k] = (out.get(k, 0) + c1 * c2) % (1 << bits)
    return {k: v for k, v in out.items() if v}


def test_products_match_convolution():
    rng = np.random.default_rng(0)
    for _ in range(30):
        bits, q = int(rng.integers(1, 20)), int(rng.integers(1, 6))
        ctx = PolyContext(bits, q)
        raw = [{(int(rng.integers(0, 12)), int(rng.integers(0, q))): int(rng.integers(0, 1 << 20))
                for _ in range(20)} for _ in range(2)]
        a, b = BiPoly(raw[0], ctx), BiPoly(raw[1], ctx)
        assert (a * b).terms == naive_product(a.terms, b.terms, bits, q)


terms = st.dictionaries(st.tuples(st.integers(0, 6), st.integers(0, 3)), st.integers(0, 255), max_size=6)


@settings(max_examples=60, deadline=None)
@given(terms, terms, terms)
def test_ring_laws(ta, tb, tc):
    ctx = PolyContext(8, 4)
    a, b, c = (BiPoly(t, ctx) for t in (ta, tb, tc))
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b - b == a
    assert a * BiPoly.one(ctx) == a


def test_lowest_term_and_coeffs():
    u = UniPoly.from_coeffs({5: 3, 2: 4, 9: 0}, 3)
    assert u.lowest_term() == (2, 4)
    assert u.coeffs() == {5: 3, 2: 4}
    assert UniPoly.zero(PolyContext(3)).lowest_term() is None


# -- GF(2^m) --------------------------------------------------------------------------

def test_carryless_multiply():
    assert clmul(0b11, 0b11) == 0b101
    assert gf2_mod(0b1000, 0b1011) == 0b011


def test_irreducible_small():
    assert find_irreducible(1) == 0b11
    cubics = [p for p in range(8, 16) if is_irreducible(p)]
    assert sorted(cubics) == [0b1011, 0b1101]
    assert is_irreducible(find_irreducible(3))
    assert is_irreducible(find_irreducible(8))
    assert is_irreducible(find_irreducible(64))
    assert not is_irreducible(0b101)  # (x + 1)^2


def test_irreducible_matches_brute_force():
    def brute(p):
        d = p.bit_length() - 1
        return all(gf2_mod(p, r) != 0 for r in range(2, 1 << d) if 0 < r.bit_length() - 1 < d)

    for p in range(4, 1 << 8):
        assert is_irreducible(p) == brute(p), p


def test_field_axioms():
    F = GF2m(5)
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, b, c = (int(x) for x in rng.integers(0, 32, 3))
        assert F.mul(a, F.mul(b, c)) == F.mul(F.mul(a, b), c)
        assert F.mul(a, b ^ c) == F.mul(a, b) ^ F.mul(a, c)
        # squaring is additive
        assert F.mul(a ^ b, a ^ b) == F.mul(a, a) ^ F.mul(b, b)
        if a:
            assert F.mul(a, F.inv(a)) == 1
    assert F.pow(0, 0) == 1 and F.pow(0, 3) == 0
    u = F.units()
    assert np.all(F.vpow(u, 31) == 1)


def test_character_sum_orthogonality():
    F = GF2m(3)
    Q = F.order
    for m1 in range(2 * (Q - 1) + 1):
        for m2 in range(2 * (Q - 1) + 1):
            want = 1 if m1 % (Q - 1) == 0 and m2 % (Q - 1) == 0 else 0
            assert character_sum(F, m1, m2) == want


# -- Galois ring ------------------------------------------------------------------------

def test_ring_reduces_to_field():
    R = GaloisRing(4, 3)
    rng = np.random.default_rng(2)
    a, b = (int(x) for x in rng.integers(0, 16, 2))
    prod = R.mul(R.lift(a), R.lift(b))
    assert int(R.reduce_to_field(prod)) == R.field.mul(a, b)


def test_teichmuller_is_multiplicative_subgroup():
    R = GaloisRing(4, 4)
    T = R.teichmuller(R.field.units())
    ones = R.pow(T, R.field.order - 1)
    assert np.all(ones == R.one((len(T),)))
    # reduction is a bijection onto the units
    assert sorted(R.reduce_to_field(T).tolist()) == list(range(1, 16))


# -- extraction -----------------------------------------------------------------------------

def test_extract_constant_and_read_off():
    F = GF2m(5)
    t = extract_coeffs_mod2(field_evaluator({(0, 0): 1}, F), 4, F)
    assert t[0, 0] == 1 and t.sum() == 1
    t = extract_coeffs_mod2(field_evaluator({(2, 1): 1, (1, 0): 1}, F), 4, F)
    assert {tuple(x) for x in np.argwhere(t)} == {(2, 1), (1, 0)}


def test_extract_mod2k_small_cases():
    R = GaloisRing(5, 4)
    t = extract_coeffs_mod2k(ring_evaluator({(2, 1): 3}, R), 3, R)
    assert t[2, 1] == 3 and t.sum() == 3
    R = GaloisRing(5, 3)
    t = extract_coeffs_mod2k(ring_evaluator({(1, 0): 2, (0, 0): 6}, R), 3, R)
    assert (t[1, 0], t[0, 0]) == (2, 6) and t.sum() == 8


@pytest.mark.parametrize("c", [1, 3, 5])
def test_extract_random(c):
    rng = np.random.default_rng(c)
    R = GaloisRing(5, c)
    for _ in range(3):
        coeffs = {(i, j): int(rng.integers(0, 1000)) for i, j in itertools.product(range(11), repeat=2)
                  if rng.random() < 0.4}
        t = extract_coeffs_mod2k(ring_evaluator(coeffs, R), 10, R)
        want = np.zeros((11, 11), dtype=np.int64)
        for (i, j), v in coeffs.items():
            want[i, j] = v % (1 << c)
        assert np.array_equal(t, want)


def test_mod2k_with_c1_agrees_with_field():
    rng = np.random.default_rng(9)
    coeffs = {(int(rng.integers(0, 8)), int(rng.integers(0, 8))): int(rng.integers(0, 50)) for _ in range(15)}
    R = GaloisRing(4, 1)
    a = extract_coeffs_mod2k(ring_evaluator(coeffs, R), 7, R)
    b = extract_coeffs_mod2(field_evaluator(coeffs, R.field), 7, R.field)
    assert np.array_equal(a, b)


def test_degree_bound_checked():
    F = GF2m(3)
    with pytest.raises(ValueError):
        extract_coeffs_mod2(field_evaluator({(0, 0): 1}, F), 7, F)
    R = GaloisRing(3, 3)
    # x^7 equals 1 on every unit of GF(8), so a term past the bound folds onto degree 0
    t = extract_coeffs_mod2k(ring_evaluator({(7, 0): 1, (0, 0): 2}, R), 5, R)
    assert t[0, 0] == 3
