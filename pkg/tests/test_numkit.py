import numpy as np
import pytest
import scipy.linalg

from darkstate.errors import DomainError, NumericalFailure
from darkstate.numkit import (
    defect_report,
    eig_general,
    eigvals_general,
    evolve,
    fit_decay,
    ground_subspace,
)
from tests.utils import charpoly, gauss_rank, match_sorted, rk4


def test_random_matrix_matches_characteristic_polynomial(rng):
    M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    values = eigvals_general(M)

    assert match_sorted(values, np.roots(charpoly(M))) < 1e-8


def test_trace_and_determinant(rng):
    for _ in range(20):
        M = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        values = eigvals_general(M)
        scale = 1 + np.linalg.norm(M)

        assert abs(values.sum() - np.trace(M)) < 1e-10 * scale
        assert abs(np.prod(values) - np.linalg.det(M)) < 1e-12 * scale**6


def test_hermitian_input_has_real_spectrum(rng):
    X = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    M = X + X.conj().T

    assert np.max(np.abs(eigvals_general(M).imag)) < 1e-12 * np.linalg.norm(M)


def test_eigenvalues_are_sorted_by_real_then_imag():
    M = np.diag([1 + 2j, -1, 1 - 1j, 0.5j])
    values = eigvals_general(M)

    assert list(values) == [-1, 0.5j, 1 - 1j, 1 + 2j]


def test_residual_contract_on_random_matrix(rng):
    M = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    spectrum = eig_general(M)
    scale = 1 + np.linalg.norm(M)

    assert spectrum.residuals.max() <= 1e-10 * scale
    assert not spectrum.defect_flags.any()
    assert np.allclose(np.linalg.norm(spectrum.right_vectors, axis=0), 1.0)


def test_left_vectors_annihilate_from_the_left(rng):
    M = rng.normal(size=(5, 5))
    spectrum = eig_general(M)

    for i, lam in enumerate(spectrum.eigenvalues):
        y = spectrum.left_vectors[:, i]
        assert np.linalg.norm(y.conj() @ M - lam * y.conj()) < 1e-9


def test_jordan_block_is_flagged():
    J = np.array([[2.0, 1.0], [0.0, 2.0]])
    spectrum = eig_general(J)

    assert np.allclose(spectrum.eigenvalues, [2, 2])
    assert spectrum.defect_flags.all()
    # both reported vectors are the single eigenvector e_0
    assert np.allclose(np.abs(spectrum.right_vectors[0]), 1.0)


def test_upper_triangular_spectrum_is_exact():
    # unidirectional coupling: eigenvalues are the diagonal, not a sqrt(eps) smear
    M = np.array([[1.0, 5.0, 0.0], [0.0, 1.0, 5.0], [0.0, 0.0, 1.0]])

    assert np.array_equal(eigvals_general(M), np.ones(3, dtype=complex))


def test_degenerate_semisimple_cluster_gets_a_full_kernel():
    M = np.diag([1.0, 1.0, 3.0])
    spectrum = eig_general(M)

    assert not spectrum.defect_flags.any()
    assert gauss_rank(spectrum.right_vectors[:, :2]) == 2


@pytest.mark.parametrize(
    "matrix,eigenvalue,algebraic,geometric",
    [
        ([[0, 1], [0, 0]], 0, 2, 1),
        ([[1, 0], [0, 1]], 1, 2, 2),
        ([[3, 1, 0], [0, 3, 1], [0, 0, 3]], 3, 3, 1),
        ([[3, 1, 0], [0, 3, 0], [0, 0, 3]], 3, 3, 2),
    ],
)
def test_defect_report_against_elimination_rank(matrix, eigenvalue, algebraic, geometric):
    M = np.asarray(matrix, dtype=complex)
    report = defect_report(M, eigenvalue)

    assert report.algebraic_multiplicity == algebraic
    assert report.geometric_multiplicity == geometric
    assert geometric == M.shape[0] - gauss_rank(M - eigenvalue * np.eye(M.shape[0]))


def test_defect_report_rejects_non_eigenvalue():
    with pytest.raises(DomainError):
        defect_report(np.diag([1.0, 2.0]), 5.0)


def test_rejects_bad_input():
    with pytest.raises(DomainError):
        eigvals_general(np.zeros((2, 3)))
    with pytest.raises(DomainError):
        eigvals_general(np.array([[np.nan]]))
    with pytest.raises(DomainError):
        eig_general(np.eye(2), tol=0.0)


def test_ground_subspace_dimension():
    M = np.diag([-1.0, -1.0, 0.0, 2.0])
    Q = ground_subspace(M, -1.0)

    assert Q.shape == (4, 2)
    assert np.allclose(Q.conj().T @ Q, np.eye(2))


def test_evolve_matches_rk4_for_non_hermitian_matrix(rng):
    H = rng.normal(size=(3, 3)) + 0.3j * rng.normal(size=(3, 3))
    psi0 = np.array([1.0, 0.0, 0.0], dtype=complex)

    assert np.allclose(evolve(H, psi0, 1.5), rk4(H, psi0, 1.5), atol=1e-9)


def test_evolve_at_zero_time_is_identity():
    psi0 = np.array([0.6, 0.8j])
    out = evolve(np.array([[0, 1], [1, 0]]), psi0, 0.0)

    assert np.array_equal(out, psi0)
    assert out is not psi0


def test_evolve_handles_defective_matrix():
    J = np.array([[0.0, 1.0], [0.0, 0.0]])
    psi = evolve(J, np.array([0.0, 1.0]), 2.0)

    # exp(-iJt) = 1 - iJt
    assert np.allclose(psi, [-2j, 1.0])


def test_fit_decay_recovers_rate():
    samples = [(n, 3.0 * np.exp(-0.7 * n)) for n in range(8)]

    assert fit_decay(samples) == pytest.approx(0.7, rel=1e-12)


def test_fit_decay_needs_three_positive_samples():
    with pytest.raises(DomainError):
        fit_decay([(0, 1.0), (1, 0.5)])
    with pytest.raises(DomainError):
        fit_decay([(0, 1.0), (1, 0.0), (2, 0.1)])


def test_ground_subspace_svd_failure_is_numerical(monkeypatch):
    def boom(*args, **kwargs):
        raise scipy.linalg.LinAlgError("SVD did not converge")

    monkeypatch.setattr(scipy.linalg, "svd", boom)
    with pytest.raises(NumericalFailure):
        ground_subspace(np.diag([-1.0, 0.0]), -1.0)


def test_evolve_composes_in_time(rng):
    H = rng.normal(size=(4, 4)) + 0.3j * rng.normal(size=(4, 4))
    psi0 = rng.normal(size=4) + 1j * rng.normal(size=4)
    s, t = 0.7, 1.1

    direct = evolve(H, psi0, s + t)
    stepped = evolve(H, evolve(H, psi0, s), t)

    assert np.linalg.norm(direct - stepped) < 1e-9 * np.linalg.norm(direct)


def test_fit_decay_of_constant_samples_is_zero():
    assert fit_decay([(n, 1.0) for n in range(5)]) == pytest.approx(0.0, abs=1e-14)
