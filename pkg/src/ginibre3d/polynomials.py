"""Orthogonal polynomials P_n, Q_n and monic Hermite H_n.

``P_n`` are the monic orthogonal polynomials in a pure-quaternion variable
(real coefficients, ``P_{n+1} = z P_n + beta_n P_{n-1}``); ``Q_n`` are the
real polynomials with ``P_n(u s) = u^n Q_n(s)`` for unit pure ``u``
(``Q_{n+1} = x Q_n - beta_n Q_{n-1}``).  ``Q_n`` are orthogonal on the line
for the weight ``t^2 exp(-t^2/2) / sqrt(2 pi)`` with squared norms ``h_n``.

Coefficients are exact integers.  Large-degree evaluation never touches the
coefficients: :func:`weighted_q` runs the orthonormal recurrence with a
running log-scale so that ``exp(-s^2/4) Q_n(s) / sqrt(h_n)`` stays finite for
``n`` in the hundreds of thousands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from . import quaternion as qt
from .errors import DomainError

# coefficient evaluation in floating point is only trusted up to this degree
EXACT_MAX_DEGREE = 60

_RESCALE_AT = 1e150


@dataclass(frozen=True)
class RealPolynomial:
    """Polynomial with exact real coefficients, ascending order."""

    coeffs: tuple

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __call__(self, x):
        """Horner evaluation in floating point (real scalars or arrays)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for c in reversed(self.coeffs):
            out = out * x + float(c)
        return out

    def eval_exact(self, x) -> Fraction:
        x = Fraction(x)
        out = Fraction(0)
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    def eval_quaternion(self, x) -> np.ndarray:
        """Horner evaluation at a quaternion argument (coefficients commute)."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape)
        for c in reversed(self.coeffs):
            out = qt.mul(out, x)
            out[..., 0] += float(c)
        return out

    def derivative(self) -> "RealPolynomial":
        return RealPolynomial(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,))

    def format(self, var="z") -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                mono = var if k == 1 else f"{var}^{k}"
                body = mono if mag == 1 else f"{mag}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out

    def __str__(self):
        return self.format()


def _require_index(n):
    if n < 0:
        raise DomainError(f"index must be nonnegative, got {n}")


def h_norm(n: int) -> int:
    """Squared norm of P_n: ``n!(n+2)`` for odd n, ``(n+1)!`` for even n."""
    _require_index(n)
    if n % 2:
        return math.factorial(n) * (n + 2)
    return math.factorial(n + 1)


def beta(n: int) -> int:
    """Recurrence coefficient ``h_n / h_{n-1}``: ``n+2`` for odd n, ``n`` for even."""
    if n < 1:
        raise DomainError("beta is defined for n >= 1")
    return n + 2 if n % 2 else n


def log_h_norm(n):
    """``log h_n`` for large n, via lgamma."""
    if n % 2:
        return math.lgamma(n + 1) + math.log(n + 2)
    return math.lgamma(n + 2)


def _recurrence_family(n, sign, coeff):
    prev, cur = (0,), (1,)
    if n == 0:
        return [cur]
    out = [cur]
    for k in range(n):
        shifted = (0,) + cur
        b = coeff(k) if k >= 1 else 0
        nxt = [shifted[i] + sign * b * (prev[i] if i < len(prev) else 0) for i in range(len(shifted))]
        prev, cur = cur, tuple(nxt)
        out.append(cur)
    return out


@lru_cache(maxsize=None)
def _p_table(n):
    return tuple(RealPolynomial(c) for c in _recurrence_family(n, +1, beta))


@lru_cache(maxsize=None)
def _q_table(n):
    return tuple(RealPolynomial(c) for c in _recurrence_family(n, -1, beta))


@lru_cache(maxsize=None)
def _h_table(n):
    return tuple(RealPolynomial(c) for c in _recurrence_family(n, -1, lambda k: k))


def p_poly(n: int) -> RealPolynomial:
    _require_index(n)
    return _p_table(n)[n]


def q_poly(n: int) -> RealPolynomial:
    _require_index(n)
    return _q_table(n)[n]


def hermite_monic(n: int) -> RealPolynomial:
    """Monic Hermite polynomial ``He_n``: ``H_{n+1} = x H_n - n H_{n-1}``."""
    _require_index(n)
    return _h_table(n)[n]


def _hermite_values(n, s):
    """(H_n(s), H_{n+1}(s)) by the unnormalized three-term recurrence."""
    prev = np.zeros_like(s)
    cur = np.ones_like(s)
    for k in range(n):
        prev, cur = cur, s * cur - k * prev
    return cur, s * cur - n * prev


def p_eval_hermite(n: int, u, s) -> np.ndarray:
    """P_n(u s) through its representation by monic Hermite polynomials."""
    _require_index(n)
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("the Hermite representation needs s > 0")
    hn, hn1 = _hermite_values(n, s)
    if n % 2 == 0:
        val = hn1 / s
    else:
        val = (s * hn1 + hn) / s**2
    un = qt.power(u, n)
    return un * np.asarray(val)[..., None]


class ScaledValues(NamedTuple):
    """Recurrence output ``value * exp(log_scale)``; ``log_scale`` includes the Gaussian weight."""

    cur: np.ndarray
    nxt: np.ndarray
    dcur: np.ndarray
    dnxt: np.ndarray
    log_scale: np.ndarray

    def weighted(self):
        f = np.exp(self.log_scale)
        return self.cur * f, self.nxt * f, self.dcur * f, self.dnxt * f


def _scaled_recurrence(n, x, a, b, derivative):
    """Run ``y_{k+1} = (x y_k - a(k) y_{k-1}) / b(k)`` from ``y_0 = 1``.

    Returns rows ``n`` and ``n+1`` (and their x-derivatives) with the weight
    ``exp(-x^2/4)`` folded into the log-scale.
    """
    x = np.asarray(x, dtype=float)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    dprev = np.zeros_like(x)
    dcur = np.zeros_like(x)
    log_scale = -0.25 * x * x
    for k in range(n + 1):
        bk = b(k)
        ak = a(k)
        nxt = (x * cur - ak * prev) / bk
        if derivative:
            dnxt = (cur + x * dcur - ak * dprev) / bk
            dprev, dcur = dcur, dnxt
        prev, cur = cur, nxt
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            m = np.where(big, np.abs(cur), 1.0)
            prev = prev / m
            cur = cur / m
            if derivative:
                dprev = dprev / m
                dcur = dcur / m
            log_scale = log_scale + np.log(m)
    # after the loop: prev is row n, cur is row n+1
    if not derivative:
        dprev = dcur = np.zeros_like(x)
    return ScaledValues(prev, cur, dprev, dcur, log_scale)


def _sqrt_beta(k):
    return math.sqrt(beta(k)) if k >= 1 else 0.0


def orthonormal_q(n: int, s, derivative=False) -> ScaledValues:
    """Scaled ``q_n, q_{n+1}`` with ``q_k = Q_k / sqrt(h_k)`` and weight ``exp(-s^2/4)``."""
    _require_index(n)
    return _scaled_recurrence(n, s, _sqrt_beta, lambda k: _sqrt_beta(k + 1), derivative)


def hermite_functions(n: int, x, derivative=False) -> ScaledValues:
    """Scaled ``psi_n, psi_{n+1}`` with ``psi_k = exp(-x^2/4) He_k(x) / sqrt(k!)``."""
    _require_index(n)
    return _scaled_recurrence(n, x, math.sqrt, lambda k: math.sqrt(k + 1), derivative)


def weighted_q(n: int, s) -> np.ndarray:
    """``exp(-s^2/4) Q_n(s) / sqrt(h_n)``, stable for large n."""
    vals = orthonormal_q(n, s)
    return vals.cur * np.exp(vals.log_scale)


def weighted_q_hermite(n: int, s) -> np.ndarray:
    """Same quantity as :func:`weighted_q`, assembled from Hermite functions.

    Needs ``s != 0``; loses relative accuracy like ``1/s^2`` near the origin.
    """
    _require_index(n)
    s = np.asarray(s, dtype=float)
    vals = hermite_functions(n, s)
    f = np.exp(vals.log_scale)
    psi_n, psi_n1 = vals.cur * f, vals.nxt * f
    if n % 2 == 0:
        return psi_n1 / s
    return (s * math.sqrt(n + 1) * psi_n1 + psi_n) / (math.sqrt(n + 2) * s * s)


def q_zeros(n: int, tol=1e-12) -> np.ndarray:
    """Sorted real zeros of Q_n, 1 <= n <= 40, by grid bracketing and bisection."""
    if not 1 <= n <= 40:
        raise DomainError("q_zeros supports 1 <= n <= 40")
    half = 2.0 * math.sqrt(n + 2)
    grid = np.linspace(-half, half, 10 * n)
    vals = weighted_q(n, grid)
    exact = grid[vals == 0.0]
    change = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
    lo, hi = grid[change].copy(), grid[change + 1].copy()
    flo = vals[change].copy()
    while lo.size and np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        fm = weighted_q(n, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    roots = np.sort(np.concatenate([exact, 0.5 * (lo + hi)]))
    if roots.size != n:
        raise RuntimeError(f"found {roots.size} zeros of Q_{n}, expected {n}")
    return roots
