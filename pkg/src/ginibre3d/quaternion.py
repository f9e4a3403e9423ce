"""Quaternion arithmetic on numpy arrays.

A quaternion ``w + x i + y j + z k`` is stored as a float array whose last
axis has length 4, ordered ``(w, x, y, z)``.  Points of R^3 are pure
quaternions (``w == 0``).  Every function broadcasts over leading axes, so
batches of quaternions are handled without Python loops.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError

ONE = np.array([1.0, 0.0, 0.0, 0.0])
I = np.array([0.0, 1.0, 0.0, 0.0])
J = np.array([0.0, 0.0, 1.0, 0.0])
K = np.array([0.0, 0.0, 0.0, 1.0])


def quat(w=0.0, x=0.0, y=0.0, z=0.0) -> np.ndarray:
    return np.array([w, x, y, z], dtype=float)


def pure(x, y=None, z=None) -> np.ndarray:
    """Pure quaternion from three coordinates, or from a (..., 3) array."""
    if y is None and z is None:
        v = np.asarray(x, dtype=float)
        if v.shape[-1] != 3:
            raise ValueError("expected a trailing axis of length 3")
        out = np.zeros(v.shape[:-1] + (4,))
        out[..., 1:] = v
        return out
    return np.array([0.0, x, y, z], dtype=float)


def mul(q, r) -> np.ndarray:
    """Hamilton product ``q * r``."""
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(q, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(r, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def conj(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def norm2(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.sum(q * q, axis=-1)


def norm(q) -> np.ndarray:
    return np.sqrt(norm2(q))


def inv(q) -> np.ndarray:
    n2 = norm2(q)
    if np.any(n2 == 0.0):
        raise DomainError("zero quaternion has no inverse")
    return conj(q) / np.asarray(n2)[..., None]


def real(q) -> np.ndarray:
    return np.asarray(q, dtype=float)[..., 0]


def vector(q) -> np.ndarray:
    return np.asarray(q, dtype=float)[..., 1:]


def scalar(a) -> np.ndarray:
    """Embed real numbers as quaternions."""
    a = np.asarray(a, dtype=float)
    out = np.zeros(a.shape + (4,))
    out[..., 0] = a
    return out


def power(q, k: int) -> np.ndarray:
    """``q**k`` for integer ``k >= 0`` by repeated squaring."""
    if k < 0:
        raise ValueError("negative powers are not supported")
    q = np.asarray(q, dtype=float)
    result = np.broadcast_to(ONE, q.shape).copy()
    base = q
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result


def polar(x):
    """Split a pure quaternion as ``x = u * s`` with ``|u| = 1``, ``s = |x|``.

    For ``x = 0`` the returned axis is ``i`` by convention; callers must not
    rely on ``u`` when ``s == 0``.
    """
    x = np.asarray(x, dtype=float)
    s = norm(x)
    safe = np.where(s > 0.0, s, 1.0)
    u = x / np.asarray(safe)[..., None]
    u = np.where(np.asarray(s)[..., None] > 0.0, u, np.broadcast_to(I, x.shape))
    return u, s


def adjoint_action(q, x) -> np.ndarray:
    """Rotation ``q x q^{-1}`` of a pure quaternion ``x``."""
    q = np.asarray(q, dtype=float)
    if np.any(norm2(q) == 0.0):
        raise DomainError("adjoint action needs a nonzero quaternion")
    out = mul(mul(q, x), inv(q))
    out[..., 0] = 0.0
    return out


def rotation_quaternion(axis, angle) -> np.ndarray:
    """Unit quaternion whose adjoint action rotates by ``angle`` about ``axis``."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis, axis=-1, keepdims=True)
    half = 0.5 * np.asarray(angle, dtype=float)
    out = np.empty(np.broadcast_shapes(axis.shape[:-1], half.shape) + (4,))
    out[..., 0] = np.cos(half)
    out[..., 1:] = axis * np.sin(half)[..., None]
    return out


def embed(q) -> np.ndarray:
    """2x2 complex matrix of ``q``; a real-algebra homomorphism into M_2(C).

    ``w + x i + y j + z k`` maps to ``[[w + x i, y + z i], [-y + z i, w - x i]]``.
    """
    q = np.asarray(q, dtype=float)
    w, x, y, z = np.moveaxis(q, -1, 0)
    out = np.empty(q.shape[:-1] + (2, 2), dtype=complex)
    out[..., 0, 0] = w + 1j * x
    out[..., 0, 1] = y + 1j * z
    out[..., 1, 0] = -y + 1j * z
    out[..., 1, 1] = w - 1j * x
    return out


def unembed(m) -> np.ndarray:
    """Inverse of :func:`embed` for matrices in its image."""
    m = np.asarray(m)
    a, b = m[..., 0, 0], m[..., 0, 1]
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


def random_unit(rng, size=None) -> np.ndarray:
    """Uniformly distributed unit quaternions (Haar measure on SU(2))."""
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    g = rng.standard_normal(shape + (4,))
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def random_unit_pure(rng, size=None) -> np.ndarray:
    """Uniform points of the unit sphere as pure quaternions."""
    shape = () if size is None else (size,) if np.isscalar(size) else tuple(size)
    g = rng.standard_normal(shape + (3,))
    return pure(g / np.linalg.norm(g, axis=-1, keepdims=True))
