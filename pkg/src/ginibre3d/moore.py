"""Moore determinant of self-dual quaternion matrices.

Matrices are arrays of shape ``(..., k, k, 4)``.  A matrix is self-dual when
``A[j, i] == conj(A[i, j])``; then its Moore determinant is real and

    Mdet(A) = sum over permutations p of sgn(p) * prod over cycles c of p
              Re(A[c0, c1] A[c1, c2] ... A[cm, c0]).

Taking the real part of each cycle product makes the result independent of
the starting index and of the order in which cycles are multiplied, and it
agrees with Moore's ordered-cycle definition on self-dual input.  The
determinant of the ``2k x 2k`` complex embedding equals ``Mdet(A)**2``, which
gives an independent check.
"""
from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import quaternion as qt
from .errors import SelfDualityError, UnsupportedSizeError

MAX_SIZE = 6
SELF_DUAL_RTOL = 1e-9


@lru_cache(maxsize=None)
def _cycle_table(k):
    table = []
    for perm in itertools.permutations(range(k)):
        seen = [False] * k
        cycles = []
        for start in range(k):
            if seen[start]:
                continue
            cycle = []
            i = start
            while not seen[i]:
                seen[i] = True
                cycle.append(i)
                i = perm[i]
            cycles.append(tuple(cycle))
        sign = -1.0 if (k - len(cycles)) % 2 else 1.0
        table.append((sign, tuple(cycles)))
    return tuple(table)


def validate_self_dual(A):
    """Return ``(ok, deviation)`` where deviation is max |A[j,i] - conj(A[i,j])|.

    ``ok`` compares the deviation to ``1e-9`` times the largest diagonal
    magnitude (or 1 when the diagonal vanishes).
    """
    A = np.asarray(A, dtype=float)
    dev = np.abs(np.swapaxes(A, -3, -2) - qt.conj(A))
    deviation = float(dev.max()) if dev.size else 0.0
    diag = np.diagonal(A, axis1=-3, axis2=-2)  # (..., 4, k)
    scale = max(1.0, float(np.abs(diag).max())) if diag.size else 1.0
    return deviation <= SELF_DUAL_RTOL * scale, deviation


def _cycle_real(A, cycle):
    if len(cycle) == 1:
        return A[..., cycle[0], cycle[0], 0]
    prod = A[..., cycle[0], cycle[1], :]
    for a, b in zip(cycle[1:], cycle[2:] + cycle[:1]):
        prod = qt.mul(prod, A[..., a, b, :])
    return prod[..., 0]


def moore_det(A, max_size=MAX_SIZE, check=True):
    """Moore determinant of a self-dual quaternion matrix (batched).

    Raises SelfDualityError for non-self-dual input and
    UnsupportedSizeError when ``k > max_size``.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim < 3 or A.shape[-1] != 4 or A.shape[-2] != A.shape[-3]:
        raise ValueError("expected an array of shape (..., k, k, 4)")
    k = A.shape[-2]
    if k > max_size:
        raise UnsupportedSizeError(f"size {k} exceeds maximum {max_size}")
    if check:
        ok, deviation = validate_self_dual(A)
        if not ok:
            raise SelfDualityError(f"matrix is not self-dual (deviation {deviation:.3g})")
    if k == 0:
        return np.ones(A.shape[:-3])
    # cache cycle values; many permutations share cycles
    cache = {}
    total = np.zeros(A.shape[:-3])
    for sign, cycles in _cycle_table(k):
        term = sign
        for c in cycles:
            key = _canonical(c)
            if key not in cache:
                cache[key] = _cycle_real(A, c)
            term = term * cache[key]
        total = total + term
    return total


def _canonical(cycle):
    i = cycle.index(min(cycle))
    return cycle[i:] + cycle[:i]


def complex_embedding(A) -> np.ndarray:
    """The ``2k x 2k`` complex matrix obtained by embedding each entry."""
    A = np.asarray(A, dtype=float)
    k = A.shape[-2]
    blocks = qt.embed(A)  # (..., k, k, 2, 2)
    blocks = np.swapaxes(blocks, -3, -2)  # (..., k, 2, k, 2)
    return blocks.reshape(A.shape[:-3] + (2 * k, 2 * k))


def embedding_det(A) -> np.ndarray:
    """Determinant of the complex embedding; equals ``moore_det(A)**2``."""
    return np.linalg.det(complex_embedding(A)).real


def moore_det_via_embedding(A) -> np.ndarray:
    """``|Mdet(A)|`` from the complex embedding, with the sign of the expansion."""
    root = np.sqrt(np.clip(embedding_det(A), 0.0, None))
    sign = np.where(moore_det(A) < 0.0, -1.0, 1.0)
    return sign * root


def gram_matrix(kernel, points) -> np.ndarray:
    """``[kernel(x_i, x_j)]`` for a sequence of points; kernel returns a quaternion."""
    k = len(points)
    G = np.empty((k, k, 4))
    for i in range(k):
        for j in range(k):
            G[i, j] = kernel(points[i], points[j])
    return G
