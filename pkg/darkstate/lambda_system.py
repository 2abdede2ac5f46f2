"""
The three-level Lambda system and the complex field that restores its dark state.

Basis ordering: (|up>, |down>, |3>). The (up, down) block carries the
spin Hamiltonian B.S with S = sigma/2 and B = B_R + i B_I.

Conventions:
- |D> = (cos(theta/2), sin(theta/2)), |B> = (-sin(theta/2), cos(theta/2))
- couplings m_DB = <D|H|B>, m_BD = <B|H|D> are true matrix elements,
  i.e. half of the t_L, t_R of the two-level rewriting
- the restoring condition is m_BD = 0 (no leakage out of |D>) together
  with Im(delta) = 0
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from darkstate.errors import DomainError, NumericalFailure
from darkstate.logging.events import log_debug
from darkstate.models.params import ComplexField, RabiPair
from darkstate.numkit import evolve

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

_TINY = 1e-300


# ------------------------------------------------------------------
# Result types
# ------------------------------------------------------------------

@dataclass(frozen=True)
class DBCouplings:
    """Dark/bright two-level couplings of the (up, down) block."""

    m_db: complex
    m_bd: complex
    delta: complex


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    bloch: np.ndarray
    dark_fidelity: float


# ------------------------------------------------------------------
# Dark and bright states
# ------------------------------------------------------------------

def _dark_bright_vectors(theta: float) -> Tuple[np.ndarray, np.ndarray]:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([c, s], dtype=complex), np.array([-s, c], dtype=complex)


def dark_bright(rabi: RabiPair) -> Tuple[float, np.ndarray, np.ndarray]:
    """
    Mixing angle and the dark/bright vectors in the (up, down) basis.
    """
    if rabi.omega <= 0:
        raise DomainError("dark state needs a nonzero Rabi coupling")
    theta = rabi.theta
    dark, bright = _dark_bright_vectors(theta)
    return theta, dark, bright


def spin_block(field: ComplexField) -> np.ndarray:
    """The 2x2 (up, down) Hamiltonian B.S for the complex field B."""
    return spin_matrix(field.vector)


def spin_matrix(b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    return 0.5 * (b[0] * SIGMA_X + b[1] * SIGMA_Y + b[2] * SIGMA_Z)


def h_lambda(rabi: RabiPair, field: ComplexField) -> np.ndarray:
    """
    3x3 Hamiltonian in the (up, down, 3) basis.

    Light couplings omega1 (up <-> 3) and -omega2 (down <-> 3) are real
    and symmetric; the upper-left block is (B_R + i B_I).S.
    """
    H = np.zeros((3, 3), dtype=complex)
    H[0, 2] = H[2, 0] = rabi.omega1
    H[1, 2] = H[2, 1] = -rabi.omega2
    H[:2, :2] += spin_block(field)
    return H


# ------------------------------------------------------------------
# Field rotation into the dark/bright frame
# ------------------------------------------------------------------

def rotate_field(b, theta: float) -> np.ndarray:
    b = np.asarray(b, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([b[0] * c - b[2] * s, b[1], b[0] * s + b[2] * c])


def inverse_rotate(b_rotated, theta: float) -> np.ndarray:
    b = np.asarray(b_rotated, dtype=complex)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([b[0] * c + b[2] * s, b[1], -b[0] * s + b[2] * c])


# ------------------------------------------------------------------
# Couplings and compensation
# ------------------------------------------------------------------

def _couplings(theta: float, b: np.ndarray) -> DBCouplings:
    dark, bright = _dark_bright_vectors(theta)
    H = spin_matrix(b)
    return DBCouplings(
        m_db=complex(dark.conj() @ H @ bright),
        m_bd=complex(bright.conj() @ H @ dark),
        delta=complex(dark.conj() @ H @ dark - bright.conj() @ H @ bright),
    )


def db_couplings(rabi: RabiPair, field: ComplexField) -> DBCouplings:
    """
    Matrix elements of the (up, down) block between the fixed |D>, |B>.

    delta equals the rotated B'^z; m_BD = (B'^x + i B'^y)/2 and
    m_DB = (B'^x - i B'^y)/2.
    """
    return _couplings(rabi.theta, field.vector)


def compensate(b_real, theta: float) -> np.ndarray:
    """
    Imaginary field B_I that makes |D> an exact eigenstate with real energy.

        B_I^x = -B_R^y cos(theta)
        B_I^y =  B_R^x cos(theta) - B_R^z sin(theta)
        B_I^z =  B_R^y sin(theta)
    """
    bx, by, bz = np.asarray(b_real, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    return np.array([-by * c, bx * c - bz * s, by * s])


def _restoring_conditions(theta: float, b: np.ndarray) -> np.ndarray:
    m = _couplings(theta, b)
    return np.array([m.m_bd.real, m.m_bd.imag, m.delta.imag])


def compensate_linear(b_real, theta: float) -> np.ndarray:
    """
    Solve Re m_BD = Im m_BD = Im delta = 0 for B_I as a 3x3 linear system.

    The conditions are affine in B_I; the matrix is assembled column by
    column by evaluating the couplings on unit imaginary fields, so this
    does not share any algebra with compensate().
    """
    b_real = np.asarray(b_real, dtype=float)
    base = _restoring_conditions(theta, b_real.astype(complex))

    A = np.empty((3, 3))
    for j in range(3):
        unit = np.zeros(3)
        unit[j] = 1.0
        A[:, j] = _restoring_conditions(theta, b_real + 1j * unit) - base

    if np.linalg.cond(A) > 1e12:
        raise NumericalFailure("restoring conditions are singular", partial=A)
    return np.linalg.solve(A, -base)


def compensated_field(b_real, theta: float) -> ComplexField:
    b_real = np.asarray(b_real, dtype=float)
    return ComplexField.from_vector(b_real + 1j * compensate(b_real, theta))


def dark_energy(b_real, theta: float) -> float:
    """lambda_D = (B_R^x sin(theta) + B_R^z cos(theta)) / 2 for a compensated field."""
    bx, _, bz = np.asarray(b_real, dtype=float)
    return 0.5 * (bx * np.sin(theta) + bz * np.cos(theta))


def verify_dark(rabi: RabiPair, field: ComplexField) -> Tuple[float, complex]:
    """
    Residual of |D> (embedded with zero |3> amplitude) as a right eigenvector.
    """
    _, dark, _ = dark_bright(rabi)
    dark3 = np.append(dark, 0.0)
    H = h_lambda(rabi, field)

    lambda_d = complex(dark3.conj() @ H @ dark3)
    residual = float(np.linalg.norm(H @ dark3 - lambda_d * dark3))
    return residual, lambda_d


# ------------------------------------------------------------------
# Dynamics
# ------------------------------------------------------------------

def bloch_vector(psi) -> np.ndarray:
    """
    Bloch vector of the normalized (up, down) block; zero if the block is empty.
    """
    a, b = np.asarray(psi, dtype=complex)[:2]
    weight = abs(a) ** 2 + abs(b) ** 2
    if weight < _TINY:
        return np.zeros(3)
    cross = np.conj(a) * b
    return np.array([2 * cross.real, 2 * cross.imag, abs(a) ** 2 - abs(b) ** 2]) / weight


def bloch_trajectory(
    rabi: RabiPair,
    field: ComplexField,
    psi0,
    t_grid: Sequence[float],
) -> List[TrajectoryPoint]:
    """
    Evolve psi0 under the 3x3 Hamiltonian and record the spin and dark fidelity.

    dark_fidelity = |<D|psi(t)>| / ||psi(t)||; the norm is not conserved
    for a non-Hermitian field.
    """
    psi0 = np.asarray(psi0, dtype=complex)
    if psi0.shape == (2,):
        psi0 = np.append(psi0, 0.0)
    if psi0.shape != (3,):
        raise DomainError("initial state must live on (up, down, 3)")

    _, dark, _ = dark_bright(rabi)
    H = h_lambda(rabi, field)
    points = []

    for t in t_grid:
        psi = evolve(H, psi0, float(t))
        norm = float(np.linalg.norm(psi))
        if not np.isfinite(norm) or norm < _TINY:
            raise NumericalFailure(f"state norm underflowed at t={t}", partial=points)
        points.append(
            TrajectoryPoint(
                t=float(t),
                bloch=bloch_vector(psi),
                dark_fidelity=float(abs(dark.conj() @ psi[:2]) / norm),
            )
        )

    log_debug("bloch_trajectory", {"n_points": len(points), "theta": rabi.theta})
    return points
