"""
Dense complex linear algebra for small non-Hermitian matrices.

Conventions:
- matrices are indexed (row = target mode, column = source mode)
- eigenvalues are sorted by ascending real part, then ascending imaginary part
- tolerances are relative to 1 + ||M||_F
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from darkstate.errors import DomainError, NumericalFailure
from darkstate.logging.events import log_debug, log_warning

DEFAULT_TOL = 1e-10


# ------------------------------------------------------------------
# Result types
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Spectrum:
    """
    Full eigendecomposition of a square complex matrix.

    right_vectors[:, i] and left_vectors[:, i] belong to eigenvalues[i];
    all vectors have unit 2-norm. For a defective cluster the eigenvalue is
    reported as the cluster centroid and the vectors cycle through the
    null space that was found.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    residuals: np.ndarray
    defect_flags: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def max_imag(self) -> float:
        return float(np.max(np.abs(self.eigenvalues.imag))) if self.dim else 0.0


@dataclass(frozen=True)
class DefectReport:
    eigenvalue: complex
    algebraic_multiplicity: int
    geometric_multiplicity: int

    @property
    def defective(self) -> bool:
        return self.geometric_multiplicity < self.algebraic_multiplicity


# ------------------------------------------------------------------
# Input handling
# ------------------------------------------------------------------

def as_cmatrix(M) -> np.ndarray:
    """
    Validate and convert to a square, finite complex array.
    """
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise DomainError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise DomainError("matrix has non-finite entries")
    return A


def frobenius_scale(M: np.ndarray) -> float:
    return 1.0 + float(la.norm(M))


def _cluster_radius(M: np.ndarray, tol: float) -> float:
    # eigenvalues of a perturbed 2x2 Jordan block split like sqrt(eps)
    return np.sqrt(tol) * frobenius_scale(M)


def _check_tol(tol: float):
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")


# ------------------------------------------------------------------
# Eigenvalues
# ------------------------------------------------------------------

def _block_eigenvalues(block: np.ndarray, tol: float) -> np.ndarray:
    if block.shape[0] == 1:
        return block[0].copy()

    if la.norm(block - block.conj().T) <= tol * frobenius_scale(block):
        return la.eigvalsh(0.5 * (block + block.conj().T)).astype(complex)

    T, _ = la.schur(block, output="complex")
    return np.diag(T).copy()


def eigvals_general(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    All eigenvalues of M, with algebraic multiplicity, sorted.

    The sparsity graph of M is split into strongly connected components.
    Permuted to block-triangular form the spectrum is the union of the
    spectra of the diagonal blocks, so each block is solved on its own:
    Hermitian blocks with a Hermitian solver, the rest through a complex
    Schur form (Hessenberg reduction + shifted QR).
    """
    _check_tol(tol)
    A = as_cmatrix(M)

    n_comp, labels = connected_components(
        csr_matrix(A != 0), directed=True, connection="strong"
    )

    values = []
    for comp in range(n_comp):
        idx = np.flatnonzero(labels == comp)
        try:
            values.append(_block_eigenvalues(A[np.ix_(idx, idx)], tol))
        except la.LinAlgError as e:
            partial = np.concatenate(values) if values else np.empty(0, dtype=complex)
            raise NumericalFailure(f"Schur iteration did not converge: {e}", partial=partial)

    values = np.concatenate(values)
    if not np.all(np.isfinite(values)):
        raise NumericalFailure("non-finite eigenvalues", partial=values)

    order = np.lexsort((values.imag, values.real))
    return values[order]


def _cluster_labels(values: np.ndarray, radius: float) -> Tuple[int, np.ndarray]:
    close = np.abs(values[:, None] - values[None, :]) <= radius
    return connected_components(csr_matrix(close), directed=False)


def _kernel(A: np.ndarray, mu: complex, values: np.ndarray):
    """
    Right and left singular vectors of (A - mu), smallest singular value first.
    """
    n = A.shape[0]
    try:
        U, s, Vh = la.svd(A - mu * np.eye(n))
    except la.LinAlgError as e:
        raise NumericalFailure(f"SVD failed near eigenvalue {mu}: {e}", partial=values)
    return Vh.conj().T[:, ::-1], U[:, ::-1], s[::-1]


# ------------------------------------------------------------------
# Full eigendecomposition
# ------------------------------------------------------------------

def eig_general(M, tol: float = DEFAULT_TOL) -> Spectrum:
    """
    Eigenvalues with right/left eigenvectors, residuals and defect flags.

    RULES:
    - eigenvalues come from eigvals_general (exact per irreducible block)
    - eigenvalues closer than sqrt(tol)*(1+||M||_F) form one cluster
    - each cluster's eigenvectors span ker(M - mu) with mu the cluster centroid
    - a cluster whose kernel is smaller than its size is defective
    """
    _check_tol(tol)
    A = as_cmatrix(M)
    n = A.shape[0]
    scale = frobenius_scale(A)
    radius = _cluster_radius(A, tol)

    values = eigvals_general(A, tol)
    n_clusters, labels = _cluster_labels(values, radius)

    right = np.zeros((n, n), dtype=complex)
    left = np.zeros((n, n), dtype=complex)
    flags = np.zeros(n, dtype=bool)

    for c in range(n_clusters):
        idx = np.flatnonzero(labels == c)
        k = idx.size
        mu = values[idx].mean()
        null_right, null_left, s = _kernel(A, mu, values)

        g = 1 if k == 1 else int(np.clip(np.count_nonzero(s <= radius), 1, k))

        if g < k:
            flags[idx] = True
            values[idx] = mu
            log_debug(
                "defective_cluster",
                {"eigenvalue": complex(mu), "algebraic": k, "geometric": g},
            )
            for j, i in enumerate(idx):
                right[:, i] = null_right[:, j % g]
                left[:, i] = null_left[:, j % g]
            continue

        if k == 1:
            right[:, idx[0]] = null_right[:, 0]
            left[:, idx[0]] = null_left[:, 0]
            continue

        # close but semisimple: one kernel per group of (numerically) equal values
        n_sub, sub_labels = _cluster_labels(values[idx], tol * scale)
        for sc in range(n_sub):
            sub = idx[sub_labels == sc]
            sub_right, sub_left, _ = _kernel(A, values[sub].mean(), values)
            right[:, sub] = sub_right[:, : sub.size]
            left[:, sub] = sub_left[:, : sub.size]

    order = np.lexsort((values.imag, values.real))
    values, right, left, flags = values[order], right[:, order], left[:, order], flags[order]

    residuals = la.norm(A @ right - right * values[None, :], axis=0)

    worst = float(residuals.max())
    if worst > tol * scale:
        log_warning("residual_contract", {"max_residual": worst, "bound": tol * scale})

    return Spectrum(
        eigenvalues=values,
        right_vectors=right,
        left_vectors=left,
        residuals=residuals,
        defect_flags=flags,
    )


def ground_subspace(M, energy: complex, tol: float = DEFAULT_TOL) -> np.ndarray:
    """
    Orthonormal basis (columns) of ker(M - energy) at the clustering tolerance.
    """
    _check_tol(tol)
    A = as_cmatrix(M)
    n = A.shape[0]
    try:
        _, s, Vh = la.svd(A - energy * np.eye(n))
    except la.LinAlgError as e:
        raise NumericalFailure(f"SVD failed near eigenvalue {energy}: {e}")
    g = int(np.count_nonzero(s <= _cluster_radius(A, tol)))
    return Vh[n - g:].conj().T


def defect_report(M, eigenvalue: complex, tol: float = DEFAULT_TOL) -> DefectReport:
    """
    Algebraic and geometric multiplicity of an eigenvalue of M.

    The geometric multiplicity is dim minus the numerical rank of
    (M - eigenvalue); singular values below sqrt(tol)*(1+||M||_F) count
    as zero.
    """
    _check_tol(tol)
    A = as_cmatrix(M)
    n = A.shape[0]
    radius = _cluster_radius(A, tol)

    values = eigvals_general(A, tol)
    near = np.abs(values - eigenvalue) <= radius
    algebraic = int(np.count_nonzero(near))
    if algebraic == 0:
        raise DomainError(f"{eigenvalue} is not an eigenvalue within tolerance")

    try:
        s = la.svd(A - eigenvalue * np.eye(n), compute_uv=False)
    except la.LinAlgError as e:
        raise NumericalFailure(f"SVD failed near eigenvalue {eigenvalue}: {e}", partial=values)
    rank = int(np.count_nonzero(s > radius))
    geometric = int(np.clip(n - rank, 1, algebraic))

    return DefectReport(
        eigenvalue=complex(eigenvalue),
        algebraic_multiplicity=algebraic,
        geometric_multiplicity=geometric,
    )


# ------------------------------------------------------------------
# Dynamics and fitting
# ------------------------------------------------------------------

def evolve(H, psi0, t: float) -> np.ndarray:
    """
    exp(-i H t) psi0 by scaling and squaring (valid for defective H too).
    """
    A = as_cmatrix(H)
    psi = np.asarray(psi0, dtype=complex)
    if psi.shape != (A.shape[0],):
        raise DomainError(f"state of shape {psi.shape} does not match {A.shape}")
    if t == 0:
        return psi.copy()

    try:
        with np.errstate(over="raise", invalid="raise"):
            out = la.expm(-1j * t * A) @ psi
    except (FloatingPointError, OverflowError) as e:
        raise NumericalFailure(f"matrix exponential overflowed at t={t}: {e}")

    if not np.all(np.isfinite(out)):
        raise NumericalFailure(f"matrix exponential overflowed at t={t}")
    return out


def fit_decay(samples: Iterable[Sequence[float]]) -> float:
    """
    Decay rate kappa of magnitudes ~ C * exp(-kappa * n), by least squares on ln|.|.
    """
    data = np.asarray(list(samples), dtype=float)
    if data.ndim != 2 or data.shape[0] < 3 or data.shape[1] != 2:
        raise DomainError("fit_decay needs at least 3 (index, magnitude) samples")

    n, magnitude = data[:, 0], data[:, 1]
    if np.any(magnitude <= 0) or not np.all(np.isfinite(magnitude)):
        raise DomainError("magnitudes must be positive and finite")

    slope, _ = np.polyfit(n, np.log(magnitude), 1)
    return float(-slope)
