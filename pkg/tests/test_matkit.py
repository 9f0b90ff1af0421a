import numpy as np
import pytest

from wernerdecay.errors import NegativeEigenvalue, NotHermitian
from wernerdecay.matkit import hermitian_eigen, hermiticity_defect, kron, psd_sqrt
from wernerdecay.states import WernerSpec, bell_state, werner

SIGMA_Y = np.array([[0, -1j], [1j, 0]])


def _brute_correlation_matrix(rho):
    """Oracle: t[n, m] = Tr(rho sigma_n x sigma_m) by explicit loops."""
    paulis = [
        np.array([[0, 1], [1, 0]], dtype=complex),
        np.array([[0, -1j], [1j, 0]], dtype=complex),
        np.array([[1, 0], [0, -1]], dtype=complex),
    ]
    t = np.zeros((3, 3))
    for n in range(3):
        for m in range(3):
            t[n, m] = np.trace(rho @ np.kron(paulis[n], paulis[m])).real
    return t


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(2)), np.eye(4))


def test_kron_sigma_y_pair():
    expected = np.array(
        [
            [0, 0, 0, -1],
            [0, 0, 1, 0],
            [0, 1, 0, 0],
            [-1, 0, 0, 0],
        ],
        dtype=complex,
    )
    assert np.abs(kron(SIGMA_Y, SIGMA_Y) - expected).max() == 0.0


def test_kron_basis_projectors():
    got = kron(np.diag([1.0, 0.0]), np.diag([0.0, 1.0]))
    assert np.array_equal(got, np.diag([0.0, 1.0, 0.0, 0.0]).astype(complex))


def test_kron_shapes():
    a = np.ones((2, 3))
    b = np.ones((3, 2))
    assert kron(a, b).shape == (6, 6)


def test_kron_rejects_nonfinite():
    with pytest.raises(ValueError):
        kron(np.array([[np.nan, 0], [0, 1]]), np.eye(2))


def test_kron_associative_and_bilinear(rng):
    for _ in range(20):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        c = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        assert np.abs(kron(kron(a, b), c) - kron(a, kron(b, c))).max() < 1e-13
        alpha, beta = rng.standard_normal(2)
        lhs = kron(alpha * a + beta * c, b)
        rhs = alpha * kron(a, b) + beta * kron(c, b)
        assert np.abs(lhs - rhs).max() < 1e-13
        lhs = kron(b, alpha * a + beta * c)
        rhs = alpha * kron(b, a) + beta * kron(b, c)
        assert np.abs(lhs - rhs).max() < 1e-13


def test_hermitian_eigen_diagonal():
    values, _ = hermitian_eigen(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(values, [1.0, 2.0, 3.0], atol=1e-14)


def test_hermitian_eigen_pauli_y():
    values, _ = hermitian_eigen(SIGMA_Y)
    assert np.allclose(values, [-1.0, 1.0], atol=1e-14)


def test_hermitian_eigen_werner_correlation_matrix():
    # correlation matrix of the p = 0.8 Werner state built by the
    # brute-force trace oracle: all three eigenvalues equal p^2
    t = _brute_correlation_matrix(werner(WernerSpec("X", 0.8)))
    values, _ = hermitian_eigen(t.T @ t)
    assert np.allclose(values, [0.64, 0.64, 0.64], atol=1e-13)


def test_hermitian_eigen_reconstruction(rng):
    for _ in range(30):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        h = (g + g.conj().T) / 2
        values, vectors = hermitian_eigen(h)
        assert abs(h.trace().real - values.sum()) < 1e-11
        assert np.abs(h @ vectors - vectors * values).max() < 1e-11
        assert np.abs(vectors.conj().T @ vectors - np.eye(4)).max() < 1e-12
        assert np.all(np.diff(values) >= 0)


def test_hermitian_eigen_deterministic():
    h = np.array([[1.0, 2.0 + 1j], [2.0 - 1j, -1.0]])
    first = hermitian_eigen(h)
    second = hermitian_eigen(h)
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def test_hermitian_eigen_rejects_non_hermitian():
    bad = np.array([[0.0, 1.0], [0.0, 0.0]])
    with pytest.raises(NotHermitian) as excinfo:
        hermitian_eigen(bad)
    assert excinfo.value.defect == pytest.approx(1.0)


def test_hermiticity_defect():
    assert hermiticity_defect(np.eye(3)) == 0.0
    assert hermiticity_defect([[0, 1j], [1j, 0]]) == pytest.approx(2.0)


def test_psd_sqrt_identity():
    assert np.abs(psd_sqrt(np.eye(4)) - np.eye(4)).max() < 1e-14


def test_psd_sqrt_diagonal():
    got = psd_sqrt(np.diag([4.0, 1.0, 0.0, 9.0]))
    assert np.abs(got - np.diag([2.0, 1.0, 0.0, 3.0])).max() < 1e-14


def test_psd_sqrt_projector_idempotent():
    proj = bell_state("X")
    assert np.abs(psd_sqrt(proj) - proj).max() < 1e-14


def test_psd_sqrt_roundtrip(rng):
    for _ in range(30):
        g = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
        a = g.conj().T @ g
        s = psd_sqrt(a)
        assert hermiticity_defect(s) < 1e-13
        assert np.linalg.norm(s @ s - a) < 1e-10


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NegativeEigenvalue):
        psd_sqrt(np.diag([1.0, -0.5]))


def test_psd_sqrt_clamps_round_off_negatives():
    got = psd_sqrt(np.diag([1.0, -5e-11]))
    assert np.abs(got - np.diag([1.0, 0.0])).max() < 1e-14
