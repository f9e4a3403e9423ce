"""Large-n approximations and their exact finite-n counterparts.

Bulk quantities are parametrized by ``x0 = cos(phi)`` in (0, 1), the radius
in units of ``2 sqrt(n + 3/2)``.  All factorials and Gamma functions are
handled in log space.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quaternion as qt
from .errors import DomainError
from .kernel import TWO_PI_POW, _assemble, _weighted_rho_delta, intensity_lebesgue_radius, radial_density
from .polynomials import hermite_functions

BULK_EPS = 0.2


def ac(x):
    """``sin(2x) - 2x``."""
    x = np.asarray(x, dtype=float)
    return np.sin(2.0 * x) - 2.0 * x


def daleth(n, phi, psi):
    return 0.5 * (n + 1.5) * (ac(phi) - ac(psi))


def shin(n, phi, psi):
    return 0.5 * (n + 1.5) * (ac(phi) + ac(psi))


def sinc(x):
    """``sin(x)/x`` with value 1 at 0 (unnormalized, unlike numpy.sinc)."""
    return np.sinc(np.asarray(x, dtype=float) / math.pi)


# ---------------------------------------------------------------------------
# Hermite approximations


def exact_hermite_function(n, x):
    """``exp(-x^2/4) He_n(x) / sqrt(n!)`` by the stable recurrence."""
    vals = hermite_functions(n, x)
    return vals.cur * np.exp(vals.log_scale)


def pr_amplitude(n, phi):
    """Envelope ``(2/(pi n))^{1/4} / sqrt(sin phi)`` of the normalized oscillatory term."""
    return (2.0 / (math.pi * n)) ** 0.25 / np.sqrt(np.sin(phi))


def pr_weighted_hermite(n: int, phi, normalized=True):
    """Oscillatory-region approximation of ``exp(-x^2/4) He_n(x)`` at ``x = 2 sqrt(n+1/2) cos phi``.

    With ``normalized=True`` the result is divided by ``sqrt(n!)`` so that it
    is comparable with :func:`exact_hermite_function`; otherwise the
    ``sqrt(n!)`` factor is applied through ``lgamma``.
    """
    phi = np.asarray(phi, dtype=float)
    if np.any(phi <= 0.0) or np.any(phi >= math.pi):
        raise DomainError("phi must lie strictly inside (0, pi)")
    osc = np.sin((2 * n + 1) / 4.0 * ac(phi) + 0.75 * math.pi)
    out = pr_amplitude(n, phi) * osc
    if normalized:
        return out
    return out * math.exp(0.5 * math.lgamma(n + 1))


def pr_log_weighted_hermite(n: int, phi):
    """``(log|approx|, sign)`` of the unnormalized oscillatory approximation.

    Stays finite for any n because ``sqrt(n!)`` is only ever added as a log.
    """
    phi = np.asarray(phi, dtype=float)
    val = pr_weighted_hermite(n, phi, normalized=True)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(val)) + 0.5 * math.lgamma(n + 1), np.sign(val)


def pr_argument(n, phi):
    return 2.0 * math.sqrt(n + 0.5) * np.cos(np.asarray(phi, dtype=float))


def center_prefactor_log(n):
    """``(log|c_n|, sign)`` of the leading constant in the near-origin approximation."""
    if n % 2:
        logc = math.lgamma(n / 2 + 1) + (n + 1) / 2 * math.log(2) - 0.5 * math.log(math.pi * (n + 0.5))
        sign = -1.0 if ((n - 1) // 2) % 2 else 1.0
    else:
        logc = math.lgamma((n + 1) / 2) + n / 2 * math.log(2) - 0.5 * math.log(math.pi)
        sign = -1.0 if (n // 2) % 2 else 1.0
    return logc, sign


def center_hermite(n: int, s, normalized=True, odd_correction=-1.0):
    """Near-origin approximation of ``exp(-s^2/4) He_n(s)``.

    The oscillating factor is ``sin`` (odd n) or ``cos`` (even n) of
    ``s sqrt(n+1/2)`` with an ``s^3 / (24 sqrt(n+1/2))`` correction term.
    For odd n the correction enters as ``-corr * cos``; passing
    ``odd_correction=+1`` flips it, which leaves an O(n^{-1/2}) error.  With
    ``normalized=True`` the result is divided by ``|c_n|``, the size of the
    leading constant, so values are O(1).
    """
    s = np.asarray(s, dtype=float)
    if np.any(np.abs(s) > 10.0):
        raise DomainError("center_hermite is meant for |s| <= 10")
    r = math.sqrt(n + 0.5)
    arg = s * r
    corr = s**3 / (24.0 * r)
    if n % 2:
        osc = np.sin(arg) + odd_correction * corr * np.cos(arg)
    else:
        osc = np.cos(arg) + corr * np.sin(arg)
    logc, sign = center_prefactor_log(n)
    out = sign * osc
    return out if normalized else out * math.exp(logc)


def exact_center_hermite(n, s):
    """``exp(-s^2/4) He_n(s) / |c_n|`` with the same normalization as :func:`center_hermite`."""
    vals = hermite_functions(n, s)
    logc, _ = center_prefactor_log(n)
    return vals.cur * np.exp(vals.log_scale + 0.5 * math.lgamma(n + 1) - logc)


# ---------------------------------------------------------------------------
# limit densities


def rho_limit(s):
    """Limit of the rescaled Lebesgue intensity, ``sqrt(1-s^2) / ((2 pi)^2 s^2)``.

    Returns 0 for ``s >= 1``; raises for ``s <= 0``.
    """
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("rho_limit needs s > 0")
    inside = s < 1.0
    safe = np.where(inside, s, 0.5)
    return np.where(inside, np.sqrt(1.0 - safe**2) / ((2.0 * math.pi) ** 2 * safe**2), 0.0)


def radial_limit(s):
    """Limit of the rescaled radial density, ``sqrt(1-s^2) / pi`` (0 outside)."""
    s = np.asarray(s, dtype=float)
    if np.any(s <= 0.0):
        raise DomainError("radial_limit needs s > 0")
    return np.where(s < 1.0, np.sqrt(np.clip(1.0 - s**2, 0.0, None)) / math.pi, 0.0)


def density_limit_check(n: int, s):
    """``(approx, limit, abs_err)`` for ``2 sqrt(n) rho_n^Leb(2 sqrt(n) s)`` vs ``rho_limit(s)``."""
    s = np.asarray(s, dtype=float)
    r = 2.0 * math.sqrt(n)
    approx = r * intensity_lebesgue_radius(n, r * s)
    limit = rho_limit(s)
    return approx, limit, np.abs(approx - limit)


def radial_limit_check(n: int, s):
    s = np.asarray(s, dtype=float)
    r = 2.0 * math.sqrt(n)
    approx = radial_density(n, r * s) / r
    limit = radial_limit(s)
    return approx, limit, np.abs(approx - limit)


# ---------------------------------------------------------------------------
# bulk kernel


@dataclass(frozen=True)
class BulkCoordinates:
    n: int
    x0: float
    sigma: float
    tau: float

    def __post_init__(self):
        if not BULK_EPS <= self.x0 <= 1.0 - BULK_EPS:
            raise DomainError(f"x0 must lie in [{BULK_EPS}, {1 - BULK_EPS}]")

    @property
    def phi(self):
        return math.acos(self.x0)

    def radius(self, offset):
        phi = self.phi
        return 2.0 * math.sqrt(self.n + 1.5) * math.cos(phi + offset / (2.0 * math.sin(phi) ** 2) / self.n)

    @property
    def s_n(self):
        return self.radius(self.sigma)

    @property
    def t_n(self):
        return self.radius(self.tau)


def bulk_radii(n, x0, offset):
    x0 = np.asarray(x0, dtype=float)
    if np.any(x0 < BULK_EPS) or np.any(x0 > 1.0 - BULK_EPS):
        raise DomainError(f"x0 must lie in [{BULK_EPS}, {1 - BULK_EPS}]")
    phi = np.arccos(x0)
    return 2.0 * math.sqrt(n + 1.5) * np.cos(phi + np.asarray(offset) / (2.0 * np.sin(phi) ** 2) / n)


def bulk_kernel_KK(n: int, u, sigma, v, tau, x0) -> np.ndarray:
    """Rescaled kernel ``2 sqrt(n+3/2) / rho(x0) * K_n(u s_n, v t_n) sqrt(f(s_n) f(t_n))``."""
    s = bulk_radii(n, x0, sigma)
    t = bulk_radii(n, x0, tau)
    rho_w, delta_w = _weighted_rho_delta(n, s, t)
    # sqrt(f(s) f(t)) = (2 pi)^{-3/2} exp(-(s^2 + t^2)/4)
    factor = 2.0 * math.sqrt(n + 1.5) * TWO_PI_POW / rho_limit(x0)
    uv = qt.mul(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return _assemble(n, rho_w * factor, delta_w * factor, uv)


def bulk_kernel_limit(u, sigma, v, tau) -> np.ndarray:
    """``sin(tau - sigma)/(tau - sigma) * (1 - uv)/2``."""
    uv = qt.mul(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return np.asarray(sinc(np.asarray(tau) - np.asarray(sigma)))[..., None] * 0.5 * (qt.ONE - uv)


def bulk_delta_weighted(n: int, sigma, tau, x0):
    """``delta_n(s_n, t_n) exp(-(s_n^2 + t_n^2)/4)`` on the bulk grid."""
    s = bulk_radii(n, x0, sigma)
    t = bulk_radii(n, x0, tau)
    return _weighted_rho_delta(n, s, t)[1]


def _bulk_angles(n, s, t):
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    lo, hi = BULK_EPS * math.sqrt(n), (2.0 - BULK_EPS) * math.sqrt(n)
    if np.any((s < lo) | (s > hi) | (t < lo) | (t > hi)):
        raise DomainError("s and t must lie in the bulk [eps sqrt(n), (2 - eps) sqrt(n)]")
    if np.any(s == t):
        raise DomainError("the bulk main term needs s != t")
    r = 2.0 * math.sqrt(n + 1.5)
    return np.arccos(s / r), np.arccos(t / r)


def bulk_rho_prefactor(n, phi, psi):
    cp, cq = np.cos(phi), np.cos(psi)
    return (
        math.sqrt(2.0 / math.pi)
        / 8.0
        * (n + 1.5) ** -1.5
        / ((cp - cq) * cp * cq * np.sqrt(np.sin(phi) * np.sin(psi)))
    )


def bulk_rho_mainterm(n: int, s, t, as_printed=False):
    """Main term for ``rho_n(s,t) exp(-(s^2+t^2)/4)`` in the bulk.

    ``prefactor * 1/2 {cos(D - phi) - cos(D + psi) + sin(S - psi) - sin(S - phi)}``
    with ``D = daleth_n(phi, psi)``, ``S = shin_n(phi, psi)``.  Expanding the
    product form (:func:`bulk_rho_twoproduct`) gives this sign pattern for the
    two sine terms; ``as_printed=True`` flips them, which leaves an error of
    about 30% of the prefactor scale that does not decay with n.
    """
    phi, psi = _bulk_angles(n, s, t)
    d = daleth(n, phi, psi)
    sh = shin(n, phi, psi)
    sines = np.sin(sh - psi) - np.sin(sh - phi)
    if as_printed:
        sines = -sines
    bracket = np.cos(d - phi) - np.cos(d + psi) + sines
    return bulk_rho_prefactor(n, phi, psi) * 0.5 * bracket


def bulk_rho_twoproduct(n: int, s, t):
    """The unsimplified product form behind the bulk main term.

    Built from the oscillatory Hermite approximation at orders n+1 and n+2,
    before the phase expansions in 1/n are applied.
    """
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    _bulk_angles(n, s, t)
    r1 = 2.0 * math.sqrt(n + 1.5)
    r2 = 2.0 * math.sqrt(n + 2.5)
    p1, p2 = np.arccos(s / r1), np.arccos(s / r2)
    q1, q2 = np.arccos(t / r1), np.arccos(t / r2)

    def osc(order, angle):
        return np.sin((2 * order + 1) / 4.0 * ac(angle) + 0.75 * math.pi)

    first = osc(n + 2, p2) * osc(n + 1, q1) / np.sqrt(np.sin(p2) * np.sin(q1))
    second = osc(n + 2, q2) * osc(n + 1, p1) / np.sqrt(np.sin(p1) * np.sin(q2))
    return math.sqrt(2.0 / math.pi) / ((s - t) * s * t) * (first - second)


def exact_rho_weighted(n: int, s, t):
    return _weighted_rho_delta(n, s, t)[0]


# ---------------------------------------------------------------------------
# center


def center_kernel_approx(n: int, u, s, v, t) -> np.ndarray:
    """Approximation of ``K_n(us, vt) exp(-(s^2+t^2)/4)`` near the origin."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    rn = math.sqrt(n)
    pref = math.sqrt(2.0 / math.pi) / (s * t)
    with np.errstate(invalid="ignore", divide="ignore"):
        minus = np.where(t == s, rn, np.sin(rn * (t - s)) / np.where(t == s, 1.0, t - s))
    plus = np.sin(rn * (t + s)) / (t + s)
    uv = qt.mul(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    one = qt.ONE
    # delta_n carries an extra (-1)^(n+1) near the origin, so the (1 + uv) part
    # enters with a minus sign for every n
    return (pref * minus)[..., None] * 0.5 * (one - uv) - (pref * plus)[..., None] * 0.5 * (one + uv)


def center_kernel_exact(n: int, u, s, v, t) -> np.ndarray:
    """``K_n(us, vt) exp(-(s^2+t^2)/4)`` from the exact recurrence."""
    rho_w, delta_w = _weighted_rho_delta(n, s, t)
    uv = qt.mul(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return _assemble(n, rho_w, delta_w, uv)
