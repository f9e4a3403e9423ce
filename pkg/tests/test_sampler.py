import math

import numpy as np
import pytest
from scipy import stats

from ginibre3d import kernel as ker
from ginibre3d import quaternion as qt
from ginibre3d import sampler as S
from ginibre3d.errors import DomainError, EnvelopeViolation


def gaussian_density(x):
    return (2 * math.pi) ** -1.5 * np.exp(-0.5 * qt.norm2(x))


def test_config_validation():
    with pytest.raises(DomainError):
        S.SamplerConfig(n=3)
    with pytest.raises(DomainError):
        S.SamplerConfig(workers=0)
    with pytest.raises(DomainError):
        S.SamplerConfig(proposal_scale=2.0)


def test_joint_density_small_cases(rng):
    x = qt.pure(rng.standard_normal((5, 1, 3)))
    assert np.allclose(S.joint_density(0, x), gaussian_density(x[:, 0]))
    pts = qt.pure(rng.standard_normal((5, 2, 3)))
    dens = S.joint_density(1, pts)
    kxx = ker.kernel(1, pts[:, 0], pts[:, 0])[:, 0]
    kyy = ker.kernel(1, pts[:, 1], pts[:, 1])[:, 0]
    kxy = ker.kernel(1, pts[:, 0], pts[:, 1])
    expected = (kxx * kyy - qt.norm2(kxy)) * gaussian_density(pts[:, 0]) * gaussian_density(pts[:, 1]) / 2
    assert np.allclose(dens, expected, rtol=1e-12)
    same = np.stack([pts[:, 0], pts[:, 0]], axis=1)
    assert np.allclose(S.joint_density(1, same), 0.0, atol=1e-15)
    assert S.joint_density(1, S.PointConfiguration(pts[0])) == pytest.approx(dens[0])
    with pytest.raises(DomainError):
        S.joint_density(2, pts)


def test_joint_density_normalized():
    # importance sampling against the Gaussian product for N = 2
    rng = np.random.default_rng(9)
    pts = qt.pure(rng.standard_normal((200_000, 2, 3)))
    w = S.joint_density(1, pts) / np.prod(gaussian_density(pts), axis=-1)
    assert w.mean() == pytest.approx(1.0, abs=0.02)


def test_radial_cdf_n1_against_chi_mixture():
    # per-point radial law at n = 1 is the average of chi(3) and chi(5)
    r = np.linspace(0, 8, 81)
    exact = 0.5 * (stats.chi(3).cdf(r) + stats.chi(5).cdf(r))
    assert np.allclose(S.radial_cdf(1, r), exact, atol=1e-7)


def test_angular_marginal_n1():
    a, b = S.angular_coefficients(1)
    assert a == pytest.approx(0.5, abs=1e-8)
    assert b == pytest.approx(-4 / (3 * math.pi), abs=1e-8)
    probs = S.angular_bin_probabilities(1, np.linspace(-1, 1, 51))
    assert probs.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(probs > 0)


def test_intensity_draws_match_radial_law():
    rng = np.random.default_rng(4)
    for n in (0, 1, 2):
        x = S.sample_intensity(n, rng, 40_000)
        r = qt.norm(x)
        ks = stats.kstest(r, lambda v: S.radial_cdf(n, v)).statistic
        assert ks < 0.01


def test_n0_is_gaussian():
    samples = S.rejection_sample(S.SamplerConfig(n=0, count=100_000, seed=5))
    assert samples.acceptance_rate == 1.0
    r = qt.norm(samples.points[:, 0])
    assert stats.kstest(r, stats.chi(3).cdf).statistic <= 0.01


def test_envelope_never_exceeded():
    rng = np.random.default_rng(10)
    for n in (1, 2):
        worst = 0.0
        for _ in range(5):
            pts = S.sample_intensity(n, rng, 200_000 * (n + 1)).reshape(200_000, n + 1, 4)
            worst = max(worst, float(S.acceptance_ratio(n, pts).max()))
        assert worst <= 1 + S.ENVELOPE_TOL


def test_envelope_violation_reports_configuration(monkeypatch):
    monkeypatch.setattr(S, "acceptance_ratio", lambda n, pts: np.full(pts.shape[0], 1.5))
    with pytest.raises(EnvelopeViolation) as info:
        S.rejection_sample(S.SamplerConfig(n=1, count=5, seed=1, batch=16))
    assert '"points"' in info.value.configuration


def test_determinism_and_worker_split():
    cfg = S.SamplerConfig(n=1, count=3000, seed=77, workers=3)
    a = S.rejection_sample(cfg)
    b = S.rejection_sample(cfg)
    c = S.rejection_sample(S.SamplerConfig(n=1, count=3000, seed=77, workers=3, parallel=False))
    assert np.array_equal(a.points, b.points) and np.array_equal(a.points, c.points)
    assert a.proposals == c.proposals
    assert len(a) == 3000 and a.points.shape == (3000, 2, 4)
    d = S.rejection_sample(S.SamplerConfig(n=1, count=3000, seed=78, workers=3))
    assert not np.array_equal(a.points, d.points)
    assert 0.0 < a.acceptance_rate < 1.0
    assert len(a.configurations()) == 3000


def test_angular_repulsion_and_estimators():
    samples = S.rejection_sample(S.SamplerConfig(n=1, count=20_000, seed=3))
    ang = S.estimate_angular(samples)
    assert ang.mean < 0
    assert ang.mean == pytest.approx(-8 / (9 * math.pi), abs=0.02)
    assert ang.counts.sum() == 20_000 and ang.bin_edges.size == 51
    rad = S.estimate_radial(samples)
    assert rad.counts.sum() <= 40_000
    assert rad.ks < 0.02
    assert rad.max_ratio <= 1 + S.ENVELOPE_TOL
    with pytest.raises(DomainError):
        S.estimate_angular(S.rejection_sample(S.SamplerConfig(n=0, count=10, seed=1)))


def test_ks_shrinks_with_more_samples():
    def median_ks(count):
        vals = []
        for seed in range(5):
            s = S.rejection_sample(S.SamplerConfig(n=1, count=count, seed=100 + seed))
            vals.append(S.estimate_radial(s).ks)
        return np.median(vals)

    assert median_ks(8000) < median_ks(2000)
