"""
Independent oracles: nothing here calls into darkstate.numkit.
"""

from math import comb

import numpy as np


def charpoly(M) -> np.ndarray:
    """
    Characteristic polynomial coefficients (highest power first) by Faddeev-LeVerrier.
    """
    A = np.asarray(M, dtype=complex)
    n = A.shape[0]
    coeffs = [1.0 + 0j]
    Mk = np.zeros_like(A)
    I = np.eye(n)
    for k in range(1, n + 1):
        Mk = A @ Mk + coeffs[-1] * I
        coeffs.append(-np.trace(A @ Mk) / k)
    return np.array(coeffs)


def gauss_rank(M, tol: float = 1e-9) -> int:
    """Rank by Gaussian elimination with partial pivoting."""
    A = np.array(M, dtype=complex)
    rows, cols = A.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        pivot = rank + int(np.argmax(np.abs(A[rank:, c])))
        if abs(A[pivot, c]) <= tol:
            continue
        A[[rank, pivot]] = A[[pivot, rank]]
        A[rank + 1 :] -= np.outer(A[rank + 1 :, c] / A[rank, c], A[rank])
        rank += 1
    return rank


def rk4(H, psi0, t: float, steps: int = 4000) -> np.ndarray:
    """Fixed-step RK4 for i d(psi)/dt = H psi."""
    H = np.asarray(H, dtype=complex)
    psi = np.asarray(psi0, dtype=complex)
    h = t / steps
    f = lambda y: -1j * (H @ y)
    for _ in range(steps):
        k1 = f(psi)
        k2 = f(psi + 0.5 * h * k1)
        k3 = f(psi + 0.5 * h * k2)
        k4 = f(psi + h * k3)
        psi = psi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return psi


def stars_and_bars(n_modes: int, n_particles: int) -> int:
    return comb(n_modes + n_particles - 1, n_particles)


def match_sorted(a, b) -> float:
    """Largest distance after greedily pairing two multisets of complex numbers."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b.pop(j)))
    return worst
