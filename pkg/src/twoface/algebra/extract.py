"""Recover polynomial coefficients from evaluations by character sums.

For f(x, y) with individual degrees <= d < Q - 1 (Q = 2^m), summing
``a^(Q-1-t1) b^(Q-1-t2) f(a, b)`` over all units a, b isolates the
coefficient of x^t1 y^t2, scaled by (Q-1)^2. Over GF(2^m) the scale is 1;
in the Galois ring the units are replaced by their Teichmuller images and
the odd scale is divided out.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping

import numpy as np

from ..errors import ExtractionError
from .fields import GF2m, GaloisRing

Evaluator = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _check_degree(d: int, order: int) -> None:
    if not 0 <= d < order - 1:
        raise ValueError(f"degree bound {d} must be below 2^m - 1 = {order - 1}")


def extract_coeffs_mod2(f: Evaluator, d: int, field: GF2m) -> np.ndarray:
    """Coefficient table ``[t1, t2]`` of f modulo 2.

    ``f`` takes two broadcastable int arrays of field elements and returns
    f evaluated pointwise.
    """
    _check_degree(d, field.order)
    u = field.units()
    vals = np.asarray(f(u[:, None], u[None, :]), dtype=np.int64)
    exps = field.order - 1 - np.arange(d + 1)
    U = field.vpow(u[None, :], exps[:, None])  # (d+1, Q-1)
    out = np.zeros((d + 1, d + 1), dtype=np.int64)
    for t1 in range(d + 1):
        g = np.bitwise_xor.reduce(field.vmul(U[t1][:, None], vals), axis=0)
        out[t1] = np.bitwise_xor.reduce(field.vmul(U, g[None, :]), axis=1)
    if np.any(out > 1):
        raise ExtractionError("character sum left GF(2); the degree bound is violated")
    return out


def extract_coeffs_mod2k(f: Evaluator, d: int, ring: GaloisRing) -> np.ndarray:
    """Coefficient table ``[t1, t2]`` of f modulo 2^c.

    ``f`` takes two broadcastable ring-element arrays ``(..., m)`` and returns
    f evaluated pointwise in the ring.
    """
    Q = ring.field.order
    _check_degree(d, Q)
    T = ring.teichmuller(ring.field.units())  # (Q-1, m)
    vals = np.asarray(f(T[:, None, :], T[None, :, :]))  # (Q-1, Q-1, m)
    # U[t] = T^(Q-1-t)
    U = [ring.pow(T, Q - 1 - d)]
    for _ in range(d):
        U.append(ring.mul(U[-1], T))
    U = np.stack(U[::-1])  # (d+1, Q-1, m)
    G = ring.mul(U[:, :, None, :], vals[None]).sum(axis=1) % ring.mod  # (d+1, Q-1, m)
    R = ring.mul(U[None, :, :, :], G[:, None, :, :]).sum(axis=2) % ring.mod  # (d+1, d+1, m)
    if not np.all(ring.is_scalar(R)):
        raise ExtractionError("character sum is not a scalar; the degree bound is violated")
    scale = pow((Q - 1) ** 2, -1, ring.mod)
    return (R[..., 0].astype(object) * scale % ring.mod).astype(np.int64)


def field_evaluator(coeffs: Mapping[tuple[int, int], int], field: GF2m) -> Evaluator:
    """Evaluator of an integer polynomial ``{(i, j): c}`` read modulo 2."""
    odd = [(i, j) for (i, j), c in coeffs.items() if c % 2]

    def f(a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = np.zeros(a.shape, dtype=np.int64)
        for i, j in odd:
            out ^= field.vmul(field.vpow(a, i), field.vpow(b, j))
        return out

    return f


def ring_evaluator(coeffs: Mapping[tuple[int, int], int], ring: GaloisRing) -> Evaluator:
    """Evaluator of an integer polynomial ``{(i, j): c}`` over the Galois ring."""
    items = sorted((k, c % ring.mod) for k, c in coeffs.items() if c % ring.mod)
    dx = max((i for (i, _), _ in items), default=0)
    dy = max((j for (_, j), _ in items), default=0)

    def powers(a, top):
        out = [ring.one(a.shape[:-1])]
        for _ in range(top):
            out.append(ring.mul(out[-1], a))
        return out

    def f(a, b):
        a, b = np.broadcast_arrays(a, b)
        pa, pb = powers(a, dx), powers(b, dy)
        out = ring.zeros(a.shape[:-1])
        for (i, j), c in items:
            out = ring.add(out, ring.smul(c, ring.mul(pa[i], pb[j])))
        return out

    return f


def character_sum(field: GF2m, m1: int, m2: int) -> int:
    """Sum of a^m1 b^m2 over all units a, b (an element of GF(2^m))."""
    u = field.units()
    s1 = np.bitwise_xor.reduce(field.vpow(u, m1))
    s2 = np.bitwise_xor.reduce(field.vpow(u, m2))
    return field.mul(int(s1), int(s2))
