"""The quaternion kernel K_n and the correlation functions it defines.

``K_n(x, y) = sum_{k=0}^{n} P_k(x) conj(P_k(y)) / h_k`` on pure quaternions,
so the point field has ``N = n + 1`` points.  Writing ``x = u s``,
``y = v t`` with unit ``u, v``,

    K_n(us, vt) = rho_n(s, t) (1 - uv)/2 + (-1)^n delta_n(s, t) (1 + uv)/2,

with ``rho_n``, ``delta_n`` built from ``Q_n`` and ``Q_{n+1}``.  The closed
form is evaluated through the scaled orthonormal recurrence, so functions
with a ``weighted`` flavour return the kernel times ``exp(-(s^2 + t^2)/4)``
and remain finite for very large n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import quaternion as qt
from .errors import DomainError, ExactRangeError
from .moore import moore_det
from .polynomials import _RESCALE_AT, EXACT_MAX_DEGREE, beta, h_norm, p_poly

SEAM_EPS = 1e-3
TWO_PI_POW = (2.0 * math.pi) ** -1.5


def background_density(r):
    """Gaussian background density ``(2 pi)^{-3/2} exp(-r^2/2)`` at radius r."""
    r = np.asarray(r, dtype=float)
    return TWO_PI_POW * np.exp(-0.5 * r * r)


@dataclass(frozen=True)
class KernelValue:
    """K_n(us, vt) together with its scalar decomposition."""

    value: np.ndarray
    rho: float | np.ndarray
    delta: float | np.ndarray
    parity_sign: int
    u_dot_v: float
    uv: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return _assemble(1 if self.parity_sign < 0 else 0, self.rho, self.delta, self.uv)


# ---------------------------------------------------------------------------
# exact-coefficient path


def kernel_sum(n: int, x, y) -> np.ndarray:
    """Kernel by its defining sum; coefficients evaluated in floating point."""
    if n > EXACT_MAX_DEGREE:
        raise ExactRangeError(
            f"kernel_sum is limited to n <= {EXACT_MAX_DEGREE}; use kernel_closed for larger n"
        )
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast_shapes(x.shape, y.shape))
    for k in range(n + 1):
        p = p_poly(k)
        total = total + qt.mul(p.eval_quaternion(x), qt.conj(p.eval_quaternion(y))) / h_norm(k)
    return total


def cd_terms(n: int, x, y):
    """Left and right sides of the Christoffel-Darboux relation, plus a magnitude scale."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    K = kernel_sum(n, x, y)
    left = qt.mul(x, K) + qt.mul(K, qt.conj(y))
    pn, pn1 = p_poly(n), p_poly(n + 1)
    a_n, a_n1 = pn.eval_quaternion(x), pn1.eval_quaternion(x)
    b_n, b_n1 = pn.eval_quaternion(y), pn1.eval_quaternion(y)
    h = h_norm(n)
    right = (qt.mul(a_n1, qt.conj(b_n)) + qt.mul(a_n, qt.conj(b_n1))) / h
    kn = qt.norm(K)
    scale = (
        qt.norm(x) * kn
        + kn * qt.norm(y)
        + (qt.norm(a_n1) * qt.norm(b_n) + qt.norm(a_n) * qt.norm(b_n1)) / h
    )
    return left, right, scale


def cd_residual(n: int, x, y):
    """``|x K_n + K_n conj(y) - (P_{n+1}(x) conj(P_n(y)) + P_n(x) conj(P_{n+1}(y))) / h_n|``."""
    if n > 40:
        raise ExactRangeError("cd_residual is limited to n <= 40")
    left, right, _ = cd_terms(n, x, y)
    return qt.norm(left - right)


# ---------------------------------------------------------------------------
# closed form


class _PairSums(NamedTuple):
    qs: tuple
    qt: tuple
    log_s: np.ndarray
    log_t: np.ndarray
    same: np.ndarray
    alternating: np.ndarray


def _pair_recurrence(n, s, t, derivative):
    """Orthonormal q_k at s and t (k = n, n+1) plus the running sums
    ``sum_k q_k(s) q_k(t)`` and ``sum_k (-1)^k q_k(s) q_k(t)`` over k <= n.

    All quantities are scaled; sums are in units of ``exp(log_s + log_t)``.
    """
    x = np.concatenate([s, t])
    m = s.size
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    dprev = np.zeros_like(x)
    dcur = np.zeros_like(x)
    log = -0.25 * x * x
    same = np.zeros(m)
    alt = np.zeros(m)
    for k in range(n + 1):
        prod = cur[:m] * cur[m:]
        same += prod
        alt += prod if k % 2 == 0 else -prod
        ak = math.sqrt(beta(k)) if k >= 1 else 0.0
        bk = math.sqrt(beta(k + 1))
        nxt = (x * cur - ak * prev) / bk
        if derivative:
            dnxt = (cur + x * dcur - ak * dprev) / bk
            dprev, dcur = dcur, dnxt
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            f = np.where(big, np.abs(cur), 1.0)
            prev = prev / f
            cur = cur / f
            if derivative:
                dprev = dprev / f
                dcur = dcur / f
            log = log + np.log(f)
            g = f[:m] * f[m:]
            same = same / g
            alt = alt / g
    qs = (prev[:m], cur[:m], dprev[:m], dcur[:m])
    qt_ = (prev[m:], cur[m:], dprev[m:], dcur[m:])
    return _PairSums(qs, qt_, log[:m], log[m:], same, alt)


def _weighted_rho_delta(n, s, t):
    """``(rho_n(s,t), delta_n(s,t)) * exp(-(s^2+t^2)/4)`` for arrays s, t >= 0.

    Away from the diagonal the two-term quotients are used.  Inside a band
    ``|t - s| <= SEAM_EPS * max(1, s, t)`` the quotient loses digits, so rho
    comes from the equivalent sum ``sum_k Q_k(s) Q_k(t) / h_k``; on the exact
    diagonal it is the confluent Wronskian form.  delta switches to
    ``(-1)^n sum_k (-1)^k Q_k(s) Q_k(t) / h_k`` only when ``s + t`` is small.
    """
    s, t = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    shape = s.shape
    s, t = s.ravel().copy(), t.ravel().copy()
    eps = SEAM_EPS * np.maximum(1.0, np.maximum(s, t))
    diagonal = s == t
    band = np.abs(t - s) <= eps
    near_origin = (s + t) <= SEAM_EPS

    sums = _pair_recurrence(n, s, t, derivative=bool(diagonal.any()))
    qn_s, qn1_s, dqn_s, dqn1_s = sums.qs
    qn_t, qn1_t, _, _ = sums.qt
    w = np.exp(sums.log_s + sums.log_t)
    sb = math.sqrt(beta(n + 1))
    sign = -1.0 if n % 2 else 1.0

    with np.errstate(divide="ignore", invalid="ignore"):
        quotient = sb * (qn_s * qn1_t - qn1_s * qn_t) / (t - s)
        dquotient = sb * (qn_s * qn1_t + qn1_s * qn_t) / (s + t)
    rho = np.where(band, sums.same, quotient)
    confluent = sb * (qn_s * dqn1_s - qn1_s * dqn_s)
    rho = np.where(diagonal, confluent, rho) * w
    delta = np.where(near_origin, sign * sums.alternating, dquotient) * w
    return rho.reshape(shape), delta.reshape(shape)


def _check_positive(*radii):
    for r in radii:
        if np.any(np.asarray(r) <= 0.0):
            raise DomainError("radii must be positive")


def rho_delta_weighted(n: int, s, t):
    """``rho_n(s,t) exp(-(s^2+t^2)/4)`` and ``delta_n(s,t) exp(-(s^2+t^2)/4)``."""
    _check_positive(s, t)
    return _weighted_rho_delta(n, s, t)


def rho_delta(n: int, s, t):
    """``(rho_n(s, t), delta_n(s, t))``; the diagonal ``s == t`` uses the confluent form."""
    _check_positive(s, t)
    rho_w, delta_w = _weighted_rho_delta(n, s, t)
    g = np.exp(0.25 * (np.asarray(s, dtype=float) ** 2 + np.asarray(t, dtype=float) ** 2))
    return rho_w * g, delta_w * g


def rho_diagonal_weighted(n: int, s):
    """``rho_n(s) exp(-s^2/2)`` for ``s >= 0``; regular at the origin."""
    s = np.asarray(s, dtype=float)
    if np.any(s < 0.0):
        raise DomainError("radius must be nonnegative")
    return _weighted_rho_delta(n, s, s)[0]


def delta_diagonal(n: int, s):
    """``delta_n(s) = Q_n(s) Q_{n+1}(s) / (s h_n)``, the t -> s limit of delta_n(s, t)."""
    _check_positive(s)
    return rho_delta(n, s, s)[1]


def _assemble(n, rho, delta, uv):
    sign = -1.0 if n % 2 else 1.0
    one = qt.ONE
    rho = np.asarray(rho)[..., None]
    delta = np.asarray(delta)[..., None]
    return 0.5 * rho * (one - uv) + 0.5 * sign * delta * (one + uv)


def kernel_weighted(n: int, x, y) -> np.ndarray:
    """``K_n(x, y) exp(-(|x|^2 + |y|^2)/4)`` for pure quaternion arrays x, y."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u, s = qt.polar(x)
    v, t = qt.polar(y)
    rho, delta = _weighted_rho_delta(n, s, t)
    return _assemble(n, rho, delta, qt.mul(u, v))


def kernel(n: int, x, y) -> np.ndarray:
    """K_n(x, y) from the closed form, vectorized over pure quaternion arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    g = np.exp(0.25 * (qt.norm2(x) + qt.norm2(y)))
    return kernel_weighted(n, x, y) * np.asarray(g)[..., None]


def _plain(a):
    a = np.asarray(a, dtype=float)
    return float(a) if a.ndim == 0 else a


def kernel_closed(n: int, u, s, v, t) -> KernelValue:
    """K_n(us, vt) for unit pure u, v and radii s, t > 0 (scalars or arrays)."""
    _check_positive(s, t)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    rho, delta = rho_delta(n, s, t)
    uv = qt.mul(u, v)
    value = _assemble(n, rho, delta, uv)
    return KernelValue(
        value=value,
        rho=_plain(rho),
        delta=_plain(delta),
        parity_sign=-1 if n % 2 else 1,
        u_dot_v=_plain(np.sum(u[..., 1:] * v[..., 1:], axis=-1)),
        uv=uv,
    )


def kernel_gram(n: int, points) -> np.ndarray:
    """``[K_n(x_i, x_j)]`` for points of shape (..., k, 4); result (..., k, k, 4)."""
    pts = np.asarray(points, dtype=float)
    return kernel(n, pts[..., :, None, :], pts[..., None, :, :])


# ---------------------------------------------------------------------------
# correlation functions


def intensity_background(n: int, s):
    """One-point correlation with respect to the background measure, ``rho_n(s)``."""
    _check_positive(s)
    s = np.asarray(s, dtype=float)
    return rho_diagonal_weighted(n, s) * np.exp(0.5 * s * s)


def intensity_lebesgue_radius(n: int, r):
    """Lebesgue intensity ``rho_n(r) f(r)`` at radius ``r >= 0``."""
    return TWO_PI_POW * rho_diagonal_weighted(n, r)


def intensity_lebesgue(n: int, x):
    """Lebesgue intensity of the field at the pure quaternion(s) ``x``."""
    return intensity_lebesgue_radius(n, qt.norm(x))


def radial_density(n: int, r):
    """Expected number of points per unit radius, ``4 pi r^2 rho_n(r) f(r)``."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0.0):
        raise DomainError("radius must be nonnegative")
    return 4.0 * math.pi * r * r * intensity_lebesgue_radius(n, r)


def pair_correlation(n: int, x, y):
    """Two-point correlation with respect to the background measure.

    ``rho_n(s) rho_n(t) - [rho_n(s,t)^2 (1 + cos a)/2 + delta_n(s,t)^2 (1 - cos a)/2]``
    where ``a`` is the angle between x and y.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    u, s = qt.polar(x)
    v, t = qt.polar(y)
    _check_positive(s, t)
    cos_a = np.clip(np.sum(u[..., 1:] * v[..., 1:], axis=-1), -1.0, 1.0)
    rs, _ = rho_delta(n, s, s)
    rt, _ = rho_delta(n, t, t)
    rst, dst = rho_delta(n, s, t)
    return rs * rt - (rst**2 * (1.0 + cos_a) / 2.0 + dst**2 * (1.0 - cos_a) / 2.0)


def pair_correlation_moore(n: int, x, y):
    """Two-point correlation as the Moore determinant of the 2x2 kernel matrix."""
    pts = np.stack(np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float)), axis=-2)
    return moore_det(kernel_gram(n, pts), check=False)


def triple_gram_det(n: int, points, rtol=1e-9):
    """Moore determinant of the 3x3 kernel matrix of three points on one sphere.

    Returns ``(det, scale)`` with ``scale`` the product of the diagonal
    entries; on a sphere the determinant vanishes because the kernel has
    rank two in the angular variables.
    """
    pts = np.asarray(points, dtype=float)
    if pts.shape[-2:] != (3, 4):
        raise ValueError("expected three quaternions")
    r = qt.norm(pts)
    if np.any(np.abs(r - r[..., :1]) > rtol * r[..., :1]):
        raise DomainError("triple_gram_det needs three points of equal radius")
    G = kernel_gram(n, pts)
    det = moore_det(G, check=False)
    scale = np.prod(np.diagonal(G[..., 0], axis1=-2, axis2=-1), axis=-1)
    return det, scale
