"""Rejection sampling of the point field for small N, with simple estimators.

For ``N = n + 1`` points the joint density on ``(R^3)^N`` is

    p(x_1..x_N) = Mdet[K_n(x_i, x_j)] * prod f(x_i) / N!.

Proposals draw each point independently from the one-point intensity
normalized to a probability density, ``K_n(x, x) f(x) / N``.  The ratio of
target to proposal is then proportional to ``Mdet[K] / prod K(x_i, x_i)``,
which lies in ``[0, 1]`` by the Hadamard-Fischer bound; the bound is
checked on every proposal.

The one-point draw mixes over ``k = 0..n`` (``|P_k(x)|^2 f(x) / h_k`` is a
probability density).  Radii for a fixed ``k`` are drawn by rejection from
a finite mixture of chi distributions that dominates ``r^2 Q_k(r)^2``.
"""
from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate

from . import quaternion as qt
from .errors import DomainError, EnvelopeViolation
from .kernel import kernel_gram, pair_correlation, radial_density
from .moore import moore_det
from .polynomials import q_poly

MAX_N = 2
ENVELOPE_TOL = 1e-9
RADIAL_RANGE = (0.0, 6.0)
ANGULAR_RANGE = (-1.0, 1.0)
N_BINS = 50


@dataclass(frozen=True)
class PointConfiguration:
    """One configuration of ``N = n + 1`` points, stored as an ``(N, 4)`` array."""

    points: np.ndarray

    @property
    def size(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class SamplerConfig:
    n: int = 1
    count: int = 10_000
    seed: int = 0
    proposal_scale: float = 1.0
    workers: int = 1
    batch: int = 8192
    parallel: bool = True

    def __post_init__(self):
        if not 0 <= self.n <= MAX_N:
            raise DomainError(f"the sampler supports 0 <= n <= {MAX_N}, got {self.n}")
        if self.count < 0 or self.workers < 1:
            raise DomainError("count must be >= 0 and workers >= 1")
        if self.proposal_scale != 1.0:
            # the intensity proposal has no free scale; anything else breaks the bound
            raise DomainError("proposal_scale must be 1.0 for the intensity proposal")


@dataclass
class SampleSet:
    """Accepted configurations and sampler bookkeeping."""

    n: int
    points: np.ndarray  # (M, N, 4)
    proposals: int
    max_ratio: float
    seed: int
    workers: int

    @property
    def acceptance_rate(self) -> float:
        return self.points.shape[0] / self.proposals if self.proposals else float("nan")

    def configurations(self) -> list[PointConfiguration]:
        return [PointConfiguration(p) for p in self.points]

    def __len__(self):
        return self.points.shape[0]


@dataclass
class EstimatorResult:
    bin_edges: np.ndarray
    counts: np.ndarray
    expected: np.ndarray
    acceptance_rate: float
    max_ratio: float
    ks: float = float("nan")
    max_z: float = float("nan")
    mean: float = float("nan")
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# joint density


def joint_density(n: int, pts) -> np.ndarray:
    """Joint density of the N = n+1 point field at ``pts`` of shape (..., N, 4)."""
    if isinstance(pts, PointConfiguration):
        pts = pts.points
    pts = np.asarray(pts, dtype=float)
    N = n + 1
    if pts.shape[-2] != N:
        raise DomainError(f"expected {N} points for n = {n}, got {pts.shape[-2]}")
    if n > MAX_N:
        raise DomainError(f"joint_density supports n <= {MAX_N}")
    det = moore_det(kernel_gram(n, pts), check=False)
    f = np.prod((2.0 * np.pi) ** -1.5 * np.exp(-0.5 * qt.norm2(pts)), axis=-1)
    return det * f / math.factorial(N)


# ---------------------------------------------------------------------------
# one-point draws


def _radial_envelope(k):
    """Coefficients ``e_m`` of ``r^2 (sum |c_j| r^j)^2`` and the matching mixture weights."""
    c = np.abs(np.array([float(x) for x in q_poly(k).coeffs]))
    sq = np.convolve(c, c)
    e = np.concatenate([[0.0, 0.0], sq])
    m = np.arange(e.size)
    # integral of r^m exp(-r^2/2) over (0, inf)
    mass = np.where(e > 0, 2.0 ** ((m - 1) / 2.0) * np.exp([math.lgamma((j + 1) / 2.0) for j in m]), 0.0)
    w = e * mass
    return np.asarray(c), m, w / w.sum()


def _sample_radius(k, rng, size):
    """Radii with density proportional to ``r^2 Q_k(r)^2 exp(-r^2/2)``."""
    qk = q_poly(k)
    c, m, w = _radial_envelope(k)
    out = np.empty(size)
    filled = 0
    while filled < size:
        need = size - filled
        draw = max(64, 2 * need)
        comp = rng.choice(m, size=draw, p=w)
        r = np.sqrt(rng.chisquare(comp + 1))
        env = np.polynomial.polynomial.polyval(r, c) ** 2
        ratio = np.where(env > 0, qk(r) ** 2 / np.where(env > 0, env, 1.0), 1.0)
        keep = r[rng.random(draw) < ratio][:need]
        out[filled:filled + keep.size] = keep
        filled += keep.size
    return out


def sample_intensity(n: int, rng, size: int) -> np.ndarray:
    """Points drawn from ``K_n(x, x) f(x) / (n + 1)``, shape (size, 4)."""
    ks = rng.integers(0, n + 1, size=size)
    r = np.empty(size)
    for k in range(n + 1):
        idx = np.nonzero(ks == k)[0]
        if idx.size:
            r[idx] = _sample_radius(k, rng, idx.size)
    u = qt.random_unit_pure(rng, size)
    return u * r[:, None]


# ---------------------------------------------------------------------------
# rejection sampler


def acceptance_ratio(n: int, pts) -> np.ndarray:
    """``Mdet[K] / prod K(x_i, x_i)`` for configurations of shape (..., N, 4)."""
    pts = np.asarray(pts, dtype=float)
    if n == 0:
        return np.ones(pts.shape[:-2])
    G = kernel_gram(n, pts)
    det = moore_det(G, check=False)
    diag = np.prod(np.diagonal(G[..., 0], axis1=-2, axis2=-1), axis=-1)
    return det / diag


def _run_worker(n, target, seed_seq, batch):
    rng = np.random.default_rng(seed_seq)
    N = n + 1
    chunks = []
    accepted = 0
    proposals = 0
    max_ratio = 0.0
    while accepted < target:
        draw = max(batch, 1)
        pts = sample_intensity(n, rng, draw * N).reshape(draw, N, 4)
        ratio = acceptance_ratio(n, pts)
        worst = int(np.argmax(ratio))
        if ratio[worst] > 1.0 + ENVELOPE_TOL:
            config = {"n": n, "ratio": float(ratio[worst]), "points": pts[worst].tolist()}
            raise EnvelopeViolation(
                f"acceptance ratio {ratio[worst]!r} exceeds 1", json.dumps(config)
            )
        max_ratio = max(max_ratio, float(ratio[worst]))
        accept = rng.random(draw) < ratio
        idx = np.nonzero(accept)[0]
        need = target - accepted
        if idx.size > need:
            # proposals after the last needed acceptance are not counted
            proposals += int(idx[need - 1]) + 1
            idx = idx[:need]
        else:
            proposals += draw
        chunks.append(pts[idx])
        accepted += idx.size
    points = np.concatenate(chunks) if chunks else np.empty((0, N, 4))
    return points, proposals, max_ratio


def rejection_sample(cfg: SamplerConfig) -> SampleSet:
    """Independent configurations from the joint density, deterministic in (seed, workers)."""
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.workers)
    base, extra = divmod(cfg.count, cfg.workers)
    targets = [base + (1 if i < extra else 0) for i in range(cfg.workers)]
    jobs = [(cfg.n, t, s, cfg.batch) for t, s in zip(targets, children)]
    if cfg.workers > 1 and cfg.parallel:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_run_worker, *zip(*jobs)))
    else:
        results = [_run_worker(*job) for job in jobs]
    points = np.concatenate([r[0] for r in results])
    return SampleSet(
        n=cfg.n,
        points=points,
        proposals=sum(r[1] for r in results),
        max_ratio=max(r[2] for r in results),
        seed=cfg.seed,
        workers=cfg.workers,
    )


# ---------------------------------------------------------------------------
# exact marginals


def radial_cdf(n: int, r, grid_size=24001, r_max=14.0) -> np.ndarray:
    """Per-point radial CDF, ``int_0^r radial_density / (n+1)``, by composite Simpson."""
    grid = np.linspace(0.0, r_max, grid_size)
    dens = radial_density(n, grid) / (n + 1)
    cdf = integrate.cumulative_simpson(dens, x=grid, initial=0.0)
    cdf = cdf / cdf[-1]
    return np.interp(np.asarray(r, dtype=float), grid, cdf)


@lru_cache(maxsize=None)
def angular_coefficients(n: int, r_max=12.0):
    """``(A, B)`` with the exact cos-angle density ``g(c) = A + B c`` for ``n = 1``.

    The two-point correlation is affine in ``c``, so two radial quadratures of
    ``pair_correlation`` fix ``g``.  The normalization divides by ``N(N-1)``.
    """
    if n < 1:
        raise DomainError("the angle between two points needs n >= 1")
    N = n + 1
    z = qt.pure(0.0, 0.0, 1.0)

    def at(c):
        dirn = qt.pure(math.sqrt(max(0.0, 1.0 - c * c)), 0.0, c)

        def integrand(t, s):
            x = z * s
            y = dirn * t
            f = (2.0 * np.pi) ** -3 * math.exp(-0.5 * (s * s + t * t))
            return float(pair_correlation(n, x, y)) * f * s * s * t * t

        val, _ = integrate.dblquad(integrand, 0.0, r_max, 0.0, r_max, epsabs=1e-12, epsrel=1e-10)
        return val * 4.0 * np.pi * 2.0 * np.pi / (N * (N - 1))

    g0, g1 = at(0.0), at(1.0)
    return g0, g1 - g0


def angular_bin_probabilities(n: int, edges) -> np.ndarray:
    a, b = angular_coefficients(n)
    edges = np.asarray(edges, dtype=float)
    cum = a * edges + 0.5 * b * edges**2
    return np.diff(cum)


# ---------------------------------------------------------------------------
# estimators


def _ks(sample, cdf):
    x = np.sort(sample)
    m = x.size
    F = cdf(x)
    hi = np.arange(1, m + 1) / m
    lo = np.arange(0, m) / m
    return float(max(np.max(hi - F), np.max(F - lo)))


MIN_EXPECTED = 5.0


def _max_z(counts, probs):
    """Largest ``|observed - expected| / sigma`` over bins with at least 5 expected counts.

    ``sigma`` is the multinomial standard deviation; sparse tail bins are left
    out because the normal approximation behind a z-score fails there.
    """
    total = counts.sum()
    expected = total * probs
    sigma = np.sqrt(total * probs * (1.0 - probs))
    use = expected >= MIN_EXPECTED
    with np.errstate(divide="ignore", invalid="ignore"):
        z = np.where(use & (sigma > 0), np.abs(counts - expected) / sigma, 0.0)
    return expected, float(z.max())


def estimate_radial(samples: SampleSet) -> EstimatorResult:
    """Per-point radial histogram and KS distance against the exact radial law.

    Radii from one configuration are dependent when n >= 1, so ``max_z``
    (a multinomial z-score) is a diagnostic here; the KS distance is the
    statistic to compare against a bound.
    """
    n = samples.n
    r = qt.norm(samples.points).ravel()
    edges = np.linspace(*RADIAL_RANGE, N_BINS + 1)
    counts, _ = np.histogram(r, bins=edges)
    F = radial_cdf(n, edges)
    probs = np.diff(F)
    expected, max_z = _max_z(counts, probs / probs.sum())
    return EstimatorResult(
        bin_edges=edges,
        counts=counts,
        expected=expected,
        acceptance_rate=samples.acceptance_rate,
        max_ratio=samples.max_ratio,
        ks=_ks(r, lambda x: radial_cdf(n, x)),
        max_z=max_z,
        mean=float(r.mean()),
    )


def cos_angles(samples: SampleSet) -> np.ndarray:
    """cos of the angle between the first two points of every configuration."""
    u, _ = qt.polar(samples.points[:, 0])
    v, _ = qt.polar(samples.points[:, 1])
    return np.clip(np.sum(u[:, 1:] * v[:, 1:], axis=-1), -1.0, 1.0)


def estimate_angular(samples: SampleSet) -> EstimatorResult:
    """Histogram of cos(angle) between two points against the exact marginal."""
    n = samples.n
    if n != 1:
        raise DomainError("the angular estimator compares against the n = 1 marginal")
    c = cos_angles(samples)
    edges = np.linspace(*ANGULAR_RANGE, N_BINS + 1)
    counts, _ = np.histogram(c, bins=edges)
    probs = angular_bin_probabilities(n, edges)
    expected, max_z = _max_z(counts, probs)
    a, b = angular_coefficients(n)
    return EstimatorResult(
        bin_edges=edges,
        counts=counts,
        expected=expected,
        acceptance_rate=samples.acceptance_rate,
        max_ratio=samples.max_ratio,
        ks=_ks(c, lambda x: a * (x + 1.0) + 0.5 * b * (x * x - 1.0)),
        max_z=max_z,
        mean=float(c.mean()),
        extra={"density_intercept": a, "density_slope": b, "exact_mean": 2.0 * b / 3.0},
    )
