import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginibre3d import polynomials as P
from ginibre3d import quaternion as qt
from ginibre3d.errors import DomainError
from ginibre3d.verify import TABLE_2, TABLE_3, q_gram_matrix


def test_table_rows():
    assert P.p_poly(6).format("z") == "z^6+21z^4+105z^2+105"
    assert P.h_norm(6) == 5040 and P.beta(6) == 6
    for n, (poly, h, b) in enumerate(TABLE_2):
        assert P.p_poly(n).format("z") == poly.replace(" ", "")
        assert P.h_norm(n) == h
        if b is not None:
            assert P.beta(n) == b
    for n, poly in enumerate(TABLE_3):
        assert P.q_poly(n).format("x") == poly.replace(" ", "")


def test_beta_domain():
    with pytest.raises(DomainError):
        P.beta(0)
    with pytest.raises(DomainError):
        P.h_norm(-1)


@given(st.integers(1, 40))
def test_beta_is_norm_ratio(n):
    assert Fraction(P.h_norm(n), P.h_norm(n - 1)) == P.beta(n)
    assert P.log_h_norm(n) == pytest.approx(math.log(P.h_norm(n)), rel=1e-12)


@given(st.integers(0, 30))
def test_q_coefficients_are_sign_twisted_p(n):
    # P_n(u s) = u^n Q_n(s): coefficient of s^k in Q_n is (-1)^((n-k)/2) times that of P_n
    p, q = P.p_poly(n), P.q_poly(n)
    for k in range(n + 1):
        if (n - k) % 2:
            assert p[k] == 0 and q[k] == 0
        else:
            assert q[k] == (-1) ** ((n - k) // 2) * p[k]


@given(st.integers(0, 12), st.floats(0.1, 4.0))
def test_p_at_pure_point_is_u_power_times_q(n, s):
    u = qt.pure(0.48, 0.6, 0.64)
    lhs = P.p_poly(n).eval_quaternion(u * s)
    rhs = qt.power(u, n) * P.q_poly(n)(s)
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * (1 + s) ** n)


def test_hermite_family():
    assert P.hermite_monic(4).coeffs == (3, 0, -6, 0, 1)
    assert P.hermite_monic(5).format("x") == "x^5-10x^3+15x"


def test_p_eval_hermite_domain():
    with pytest.raises(DomainError):
        P.p_eval_hermite(3, qt.I, 0.0)


@given(st.integers(0, 15), st.floats(0.1, 5.0))
def test_hermite_representation(n, s):
    u = qt.pure(0.0, 0.0, 1.0)
    direct = P.p_poly(n).eval_quaternion(u * s)
    herm = P.p_eval_hermite(n, u, s)
    assert qt.norm(herm - direct) <= 1e-10 * qt.norm(direct)


def test_derivative_and_exact_eval():
    q = P.q_poly(4)
    assert q.derivative().coeffs == (0, -20, 0, 4)
    assert q.eval_exact(Fraction(1, 2)) == Fraction(1, 16) - Fraction(10, 4) + 15


def test_format_edge_cases():
    assert P.RealPolynomial((0,)).format() == "0"
    assert P.RealPolynomial((-1, 0, -2)).format("t") == "-2t^2-1"
    assert P.RealPolynomial((1, 0, 0, 0)).degree == 0


@given(st.integers(0, 40), st.floats(-8.0, 8.0))
def test_weighted_q_matches_coefficients(n, s):
    expected = math.exp(-s * s / 4) * P.q_poly(n)(s) / math.sqrt(P.h_norm(n))
    scale = math.exp(-s * s / 4) * sum(abs(float(c)) * abs(s) ** k for k, c in enumerate(P.q_poly(n).coeffs))
    assert P.weighted_q(n, s) == pytest.approx(expected, abs=1e-12 * scale / math.sqrt(P.h_norm(n)) + 1e-300)


def test_weighted_q_hermite_route_agrees():
    s = np.linspace(0.3, 40.0, 300)
    for n in (0, 1, 7, 50, 401, 2000):
        a = P.weighted_q(n, s)
        b = P.weighted_q_hermite(n, s)
        env = np.max(np.abs(a))
        assert np.max(np.abs(a - b)) < 1e-9 * env


def test_weighted_q_large_n_finite():
    s = np.linspace(0.0, 2 * math.sqrt(1e5), 50)
    vals = P.weighted_q(100_000, s)
    assert np.all(np.isfinite(vals))


def test_orthonormal_derivative_matches_polynomial():
    s = np.linspace(-3, 3, 13)
    vals = P.orthonormal_q(6, s, derivative=True)
    _, _, d6, d7 = vals.weighted()
    dq = P.q_poly(6).derivative()(s) / math.sqrt(P.h_norm(6)) * np.exp(-s * s / 4)
    assert np.allclose(d6, dq, atol=1e-12)
    dq7 = P.q_poly(7).derivative()(s) / math.sqrt(P.h_norm(7)) * np.exp(-s * s / 4)
    assert np.allclose(d7, dq7, atol=1e-12)


def test_gauss_hermite_orthogonality():
    G = q_gram_matrix(15, 200)
    h = np.array([float(P.h_norm(k)) for k in range(16)])
    assert np.max(np.abs(G - np.diag(h)) / h[None, :]) <= 1e-8


def test_orthogonality_against_quad():
    from scipy import integrate

    for m, n in [(2, 4), (3, 3), (5, 7), (6, 6)]:
        f = lambda t: P.q_poly(m)(t) * P.q_poly(n)(t) * t * t * math.exp(-t * t / 2) / math.sqrt(2 * math.pi)
        val, _ = integrate.quad(f, -np.inf, np.inf)
        expected = P.h_norm(n) if m == n else 0.0
        assert val == pytest.approx(expected, abs=1e-8 * P.h_norm(max(m, n)))


def test_zeros_and_interlacing():
    z3 = P.q_zeros(3)
    assert np.allclose(z3, [-math.sqrt(5), 0.0, math.sqrt(5)], atol=1e-11)
    prev = P.q_zeros(1)
    for n in range(2, 41):
        cur = P.q_zeros(n)
        assert np.all(cur[:-1] < prev) and np.all(prev < cur[1:])
        prev = cur
    with pytest.raises(DomainError):
        P.q_zeros(41)
