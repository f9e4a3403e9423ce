import numpy as np
import pytest
from hypothesis import given, strategies as st

from ginibre3d import moore
from ginibre3d import quaternion as qt
from ginibre3d.errors import SelfDualityError, UnsupportedSizeError


def random_self_dual(rng, k, batch=()):
    A = rng.standard_normal(batch + (k, k, 4))
    A = 0.5 * (A + qt.conj(np.swapaxes(A, -3, -2)))
    return A


def test_one_by_one_is_real_entry():
    A = np.array([[[2.5, 0.0, 0.0, 0.0]]])
    assert moore.moore_det(A) == pytest.approx(2.5)


def test_two_by_two_expansion():
    a, d = 2.0, 3.0
    b = qt.quat(0.1, 0.4, -0.7, 1.1)
    A = np.stack([np.stack([qt.scalar(a), b]), np.stack([qt.conj(b), qt.scalar(d)])])
    assert moore.moore_det(A) == pytest.approx(a * d - qt.norm2(b))


def test_real_symmetric_matches_ordinary_determinant(rng):
    M = rng.standard_normal((5, 5))
    M = M + M.T
    A = qt.scalar(M)
    assert moore.moore_det(A) == pytest.approx(np.linalg.det(M), rel=1e-10)


def test_complex_hermitian_matches_ordinary_determinant(rng):
    # entries a + b i embed Hermitian matrices, whose Moore determinant is det
    H = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    H = H + H.conj().T
    A = np.zeros((4, 4, 4))
    A[..., 0], A[..., 1] = H.real, H.imag
    assert moore.moore_det(A) == pytest.approx(np.linalg.det(H).real, rel=1e-10)


@given(st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_embedding_oracle(k, seed):
    rng = np.random.default_rng(seed)
    A = random_self_dual(rng, k)
    d = moore.moore_det(A)
    assert moore.embedding_det(A) == pytest.approx(d * d, rel=1e-8, abs=1e-8)
    assert moore.moore_det_via_embedding(A) == pytest.approx(d, rel=1e-6, abs=1e-6)


def test_batched(rng):
    A = random_self_dual(rng, 3, (7,))
    dets = moore.moore_det(A)
    assert dets.shape == (7,)
    for i in range(7):
        assert dets[i] == pytest.approx(moore.moore_det(A[i]))


def test_repeated_row_vanishes(rng):
    x = qt.pure(rng.standard_normal((3, 3)))
    # Gram matrix of a rank-one self-dual form: a_i conj(a_j)
    a = rng.standard_normal((3, 4))
    A = qt.mul(a[:, None, :], qt.conj(a[None, :, :]))
    assert abs(moore.moore_det(A)) < 1e-10 * np.prod(qt.norm2(a))
    del x


def test_rejects_non_self_dual(rng):
    A = rng.standard_normal((3, 3, 4))
    with pytest.raises(SelfDualityError):
        moore.moore_det(A)
    ok, dev = moore.validate_self_dual(A)
    assert not ok and dev > 0


def test_rejects_large(rng):
    with pytest.raises(UnsupportedSizeError):
        moore.moore_det(random_self_dual(rng, 7))


def test_cycle_table_counts():
    for k in range(1, 6):
        table = moore._cycle_table(k)
        assert len(table) == int(np.prod(range(1, k + 1)))
        assert sum(s for s, _ in table) == (1 if k == 1 else 0)


def test_validate_examples():
    A = np.zeros((2, 2, 4))
    A[0, 0, 0] = A[1, 1, 0] = 1.0
    assert moore.validate_self_dual(A) == (True, 0.0)
    A[0, 1] = qt.I
    A[1, 0] = qt.I
    ok, dev = moore.validate_self_dual(A)
    assert not ok and dev == pytest.approx(2.0)


def test_kernel_gram_psd_bounds():
    # 10^4 random kernel Gram matrices: 0 <= Mdet <= prod diag, and the embedding oracle agrees
    from ginibre3d import kernel as ker

    rng = np.random.default_rng(21)
    for n, k in [(1, 2), (2, 3), (5, 3), (10, 4)]:
        pts = qt.random_unit_pure(rng, (2500, k)) * rng.uniform(0.1, 4.0, (2500, k, 1))
        G = ker.kernel_gram(n, pts)
        ok, _ = moore.validate_self_dual(G)
        assert ok
        det = moore.moore_det(G)
        diag = np.prod(np.diagonal(G[..., 0], axis1=-2, axis2=-1), axis=-1)
        assert np.all(det >= -1e-9 * diag)
        assert np.all(det <= diag * (1 + 1e-9))
        emb = moore.embedding_det(G)
        assert np.allclose(emb, det**2, rtol=1e-8, atol=1e-12 * diag**2)
