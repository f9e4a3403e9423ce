import math

import numpy as np
import pytest
from hypothesis import given

from ginibre3d import quaternion as qt
from ginibre3d.errors import DomainError

from conftest import pure_quaternions, quaternions, unit_quaternions


def test_basis_products():
    assert np.allclose(qt.mul(qt.I, qt.J), qt.K)
    assert np.allclose(qt.mul(qt.J, qt.K), qt.I)
    assert np.allclose(qt.mul(qt.K, qt.I), qt.J)
    assert np.allclose(qt.mul(qt.J, qt.I), -qt.K)
    for e in (qt.I, qt.J, qt.K):
        assert np.allclose(qt.mul(e, e), -qt.ONE)


def test_pure_square_is_minus_norm_squared():
    x = qt.pure(1.0, 2.0, -2.0)
    assert np.allclose(qt.mul(x, x), -9.0 * qt.ONE)


@given(quaternions(), quaternions(), quaternions())
def test_associative(a, b, c):
    lhs = qt.mul(qt.mul(a, b), c)
    rhs = qt.mul(a, qt.mul(b, c))
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + qt.norm(a) * qt.norm(b) * qt.norm(c)))


@given(quaternions(), quaternions())
def test_norm_multiplicative_and_conj_antihomomorphism(a, b):
    ab = qt.mul(a, b)
    assert math.isclose(qt.norm(ab), qt.norm(a) * qt.norm(b), rel_tol=1e-12, abs_tol=1e-12)
    assert np.allclose(qt.conj(ab), qt.mul(qt.conj(b), qt.conj(a)), atol=1e-10)


@given(quaternions())
def test_inverse(q):
    if qt.norm(q) < 1e-3:
        return
    assert np.allclose(qt.mul(q, qt.inv(q)), qt.ONE, atol=1e-10)


def test_inverse_of_zero_raises():
    with pytest.raises(DomainError):
        qt.inv(np.zeros(4))


@given(quaternions(), quaternions())
def test_embedding_is_homomorphism(a, b):
    lhs = qt.embed(qt.mul(a, b))
    rhs = qt.embed(a) @ qt.embed(b)
    assert np.allclose(lhs, rhs, atol=1e-9)
    assert np.allclose(qt.unembed(qt.embed(a)), a)
    assert math.isclose(np.linalg.det(qt.embed(a)).real, qt.norm2(a), rel_tol=1e-10, abs_tol=1e-10)


@given(unit_quaternions(), pure_quaternions(), pure_quaternions())
def test_adjoint_action_is_rotation(q, x, y):
    ax, ay = qt.adjoint_action(q, x), qt.adjoint_action(q, y)
    assert ax[0] == 0.0
    assert math.isclose(qt.norm(ax), qt.norm(x), rel_tol=1e-12)
    # inner products preserved
    assert math.isclose(np.dot(ax[1:], ay[1:]), np.dot(x[1:], y[1:]), abs_tol=1e-9)


def test_rotation_quaternion_quarter_turn():
    q = qt.rotation_quaternion([0.0, 0.0, 1.0], math.pi / 2)
    assert np.allclose(qt.adjoint_action(q, qt.I), qt.J)


def test_power_matches_repeated_product():
    q = qt.quat(0.3, -1.2, 0.5, 2.0)
    expected = qt.ONE
    for k in range(7):
        assert np.allclose(qt.power(q, k), expected)
        expected = qt.mul(expected, q)


def test_power_of_unit_pure_cycles():
    u = qt.pure(0.0, 0.6, 0.8)
    assert np.allclose(qt.power(u, 2), -qt.ONE)
    assert np.allclose(qt.power(u, 3), -u)
    assert np.allclose(qt.power(u, 4), qt.ONE)


def test_polar_and_zero_convention():
    u, s = qt.polar(qt.pure(0.0, 3.0, 4.0))
    assert s == 5.0 and np.allclose(u, qt.pure(0.0, 0.6, 0.8))
    u0, s0 = qt.polar(np.zeros(4))
    assert s0 == 0.0 and np.allclose(u0, qt.I)


def test_random_unit_pure_is_uniform(rng):
    u = qt.random_unit_pure(rng, 20000)
    assert np.allclose(qt.norm(u), 1.0)
    assert np.all(u[:, 0] == 0.0)
    # mean of each coordinate is 0, second moment 1/3
    assert np.all(np.abs(u[:, 1:].mean(axis=0)) < 0.02)
    assert np.all(np.abs((u[:, 1:] ** 2).mean(axis=0) - 1 / 3) < 0.01)
