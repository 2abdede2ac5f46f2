"""
Non-Hermitian two-leg ladder: two SSH chains coupled by asymmetric on-rung hoppings.

Mode bookkeeping (b-basis, the normative model):
- modes are (n, leg) with n = 0..L-1 and leg 0 = up, 1 = down; index 2n + leg
- up-bonds (2m, 2m+1) and down-bonds (2m+1, 2m+2) carry the symmetric hopping t
- periodic ladders (even L) close the down chain with the bond (L-1, 0)
- on rung n: +omega_x on up, -omega_x on down, t_up at (up, down), t_down at (down, up)

At the flat-band point gamma = -omega_y we have t_up = 0: amplitude flows
from the upper leg to the lower one and never back.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as la
from joblib import Parallel, delayed

from darkstate.errors import DomainError, NumericalFailure
from darkstate.logging.events import log_debug
from darkstate.models.params import LadderParams
from darkstate.numkit import (
    DEFAULT_TOL,
    Spectrum,
    eig_general,
    eigvals_general,
    fit_decay,
)

UP, DOWN = 0, 1
LEG_NAMES = ("up", "down")

Side = Literal["left", "right"]

# an orbital is accepted as an eigenvector of the full ladder below this residual
_ORBITAL_TOL = 1e-12
# amplitudes below this (relative to the largest) do not count as support
_SUPPORT_TOL = 1e-14
# |amplitude|^2 above this counts as support of a numerically found edge state
_EDGE_WEIGHT_TOL = 1e-10
# decay fits stop where amplitudes reach the round-off floor
_FIT_FLOOR = 1e-10


# ------------------------------------------------------------------
# Result types
# ------------------------------------------------------------------

@dataclass(frozen=True)
class Orbital:
    """
    A localized eigenmode of the ladder.

    label is one of down_minus, down_plus, up_minus, up_plus, edge_down, edge_up.
    amplitudes maps (rung, leg) -> complex and has unit 2-norm.
    """

    label: str
    center: int
    amplitudes: Dict[Tuple[int, int], complex] = field(hash=False)
    energy: complex

    @property
    def support_size(self) -> int:
        peak = max(abs(a) for a in self.amplitudes.values())
        return sum(1 for a in self.amplitudes.values() if abs(a) > _SUPPORT_TOL * peak)

    def vector(self, L: int) -> np.ndarray:
        v = np.zeros(2 * L, dtype=complex)
        for (n, leg), a in self.amplitudes.items():
            v[mode(n, leg)] = a
        return v


@dataclass(frozen=True)
class BandSweep:
    k_grid: np.ndarray
    bands: np.ndarray  # (n_k, 4), each row sorted
    flatness: np.ndarray  # (4, 2): spread of real and imaginary parts


@dataclass(frozen=True)
class EdgeState:
    energy: complex
    vector: np.ndarray
    side: Side
    support_size: int
    kappa: Optional[float]


@dataclass(frozen=True)
class EdgeReport:
    """
    Edge states of an open ladder.

    Decay rates are fitted per two-rung cell: along the dominant sublattice
    the n-th sample sits 2n rungs from the edge, and sigma = 1/kappa.
    """

    states: List[EdgeState]
    fitted_kappa: Optional[float]
    predicted_sigma: Optional[float]
    e_window: float

    @property
    def fitted_sigma(self) -> Optional[float]:
        if self.fitted_kappa is None or self.fitted_kappa <= 0:
            return None
        return 1.0 / self.fitted_kappa


@dataclass(frozen=True)
class ScanPoint:
    gamma: float
    omega_y: float
    n_edge_states: int
    max_bulk_im: float
    spectral_real: bool
    winding: int


# ------------------------------------------------------------------
# Bond bookkeeping
# ------------------------------------------------------------------

def mode(n: int, leg: int) -> int:
    return 2 * n + leg


def up_bonds(L: int) -> List[Tuple[int, int]]:
    return [(n, n + 1) for n in range(0, L - 1, 2)]


def down_bonds(L: int, boundary: str) -> List[Tuple[int, int]]:
    bonds = [(n, n + 1) for n in range(1, L - 1, 2)]
    if boundary == "periodic":
        bonds.append((L - 1, 0))
    return bonds


def unpaired_rungs(L: int, boundary: str, leg: int) -> List[int]:
    bonds = up_bonds(L) if leg == UP else down_bonds(L, boundary)
    paired = {n for bond in bonds for n in bond}
    return [n for n in range(L) if n not in paired]


def _down_cluster(n: int, p: LadderParams) -> Tuple[int, ...]:
    for bond in down_bonds(p.L, p.boundary):
        if n in bond:
            return bond
    return (n,)


def _require_flat_band(p: LadderParams, what: str):
    if not p.is_flat_band:
        raise DomainError(
            f"{what} is defined at the flat-band point gamma = -omega_y "
            f"(got gamma={p.gamma}, omega_y={p.omega_y}); only there is t_up = 0 "
            f"and the lower leg decoupled from the upper one"
        )


# ------------------------------------------------------------------
# Hamiltonians
# ------------------------------------------------------------------

def build_ladder_b(p: LadderParams) -> np.ndarray:
    """
    2L x 2L b-basis Hamiltonian (row = target mode, column = source mode).
    """
    H = np.zeros((p.dim, p.dim), dtype=complex)

    for n in range(p.L):
        up, down = mode(n, UP), mode(n, DOWN)
        H[up, up] = p.omega_x
        H[down, down] = -p.omega_x
        H[up, down] = p.t_up
        H[down, up] = p.t_down

    for a, b in up_bonds(p.L):
        H[mode(a, UP), mode(b, UP)] = H[mode(b, UP), mode(a, UP)] = p.t

    for a, b in down_bonds(p.L, p.boundary):
        H[mode(a, DOWN), mode(b, DOWN)] = H[mode(b, DOWN), mode(a, DOWN)] = p.t

    return H


def build_ladder_a(p: LadderParams) -> np.ndarray:
    """
    a-basis (spin) Hamiltonian.

    Rung block: -i*gamma*sz + omega_x*sx + omega_y*sy.
    Bond n -> n+1: (t/2)(1 + (-1)^n sx), i.e. spin-conserving t/2 plus the
    alternating spin flip in both up->down and down->up components.
    Its per-rung Hadamard conjugate equals build_ladder_b with omega_y negated.
    """
    sx = np.array([[0, 1], [1, 0]], dtype=complex)
    sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
    sz = np.array([[1, 0], [0, -1]], dtype=complex)
    onsite = -1j * p.gamma * sz + p.omega_x * sx + p.omega_y * sy

    H = np.zeros((p.dim, p.dim), dtype=complex)
    for n in range(p.L):
        H[2 * n : 2 * n + 2, 2 * n : 2 * n + 2] = onsite

    last = p.L if p.boundary == "periodic" else p.L - 1
    for n in range(last):
        m = (n + 1) % p.L
        hop = 0.5 * p.t * (np.eye(2) + (-1) ** n * sx)
        H[2 * n : 2 * n + 2, 2 * m : 2 * m + 2] += hop
        H[2 * m : 2 * m + 2, 2 * n : 2 * n + 2] += hop.conj().T

    return H


def hadamard_transform(M) -> np.ndarray:
    """
    Conjugate by the per-rung Hadamard |+> = (up + down)/sqrt2, |-> = (up - down)/sqrt2.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DomainError(f"need an even-dimensional square matrix, got {M.shape}")
    hd = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    W = np.kron(np.eye(M.shape[0] // 2), hd)
    return W @ M @ W


def local_block(p: LadderParams) -> np.ndarray:
    """
    The 6x6 block that closes on one upper dimer and the two lower dimers it feeds.

    Realised on the modes local_block_modes(n, p) for even n.
    """
    _require_flat_band(p, "local_block")
    t, ox, feed = p.t, p.omega_x, -2j * p.gamma
    return np.array(
        [
            [-ox, t, 0, 0, 0, 0],
            [t, -ox, feed, 0, 0, 0],
            [0, 0, ox, t, 0, 0],
            [0, 0, t, ox, 0, 0],
            [0, 0, 0, feed, -ox, t],
            [0, 0, 0, 0, t, -ox],
        ],
        dtype=complex,
    )


def local_block_modes(n: int, p: LadderParams) -> List[int]:
    """
    Modes (down n-1, down n, up n, up n+1, down n+1, down n+2) for an upper dimer at even n.
    """
    L = p.L
    rungs = [(n - 1) % L, n, n + 1, (n + 2) % L]
    return [
        mode(rungs[0], DOWN),
        mode(rungs[1], DOWN),
        mode(rungs[1], UP),
        mode(rungs[2], UP),
        mode(rungs[2], DOWN),
        mode(rungs[3], DOWN),
    ]


# ------------------------------------------------------------------
# Flat-band orbitals
# ------------------------------------------------------------------

def _orbital_tol(H: np.ndarray) -> float:
    return _ORBITAL_TOL * (1.0 + float(np.max(np.abs(H))))


def _check_orbital(H: np.ndarray, orbital: Orbital, L: int):
    v = orbital.vector(L)
    residual = float(np.linalg.norm(H @ v - orbital.energy * v))
    if residual > _orbital_tol(H):
        raise NumericalFailure(
            f"{orbital.label} orbital at rung {orbital.center} is not an eigenvector "
            f"(residual {residual:.3e})"
        )


def _upper_orbitals(
    H: np.ndarray,
    modes: Sequence[int],
    center: int,
    labels: Sequence[str],
) -> Optional[List[Orbital]]:
    """
    Eigenvectors of H on a closed mode set whose upper modes feed lower ones.

    The upper part is an eigenvector of the (Hermitian) upper block; the
    lower part solves (E - H_QQ) x = H_QP u. Returns None when E hits a
    lower-block eigenvalue (the ladder is defective there).
    """
    modes = np.asarray(modes)
    P = np.flatnonzero(modes % 2 == UP)
    Q = np.flatnonzero(modes % 2 == DOWN)
    sub = H[np.ix_(modes, modes)]

    try:
        energies, vectors = la.eigh(sub[np.ix_(P, P)])
    except la.LinAlgError as e:
        raise NumericalFailure(f"upper dimer block at rung {center} did not diagonalize: {e}")
    orbitals = []
    for E, u, label in zip(energies, vectors.T, labels):
        A = E * np.eye(Q.size) - sub[np.ix_(Q, Q)]
        if np.linalg.cond(A) > 1e10:
            return None
        x = np.linalg.solve(A, sub[np.ix_(Q, P)] @ u)

        v = np.zeros(modes.size, dtype=complex)
        v[P] = u
        v[Q] = x
        v /= np.linalg.norm(v)
        orbitals.append(
            Orbital(
                label=label,
                center=center,
                amplitudes={(int(m) // 2, int(m) % 2): complex(a) for m, a in zip(modes, v)},
                energy=complex(E),
            )
        )
    return orbitals


def _down_dimer_orbitals(p: LadderParams) -> List[Orbital]:
    orbitals = []
    r = 1.0 / np.sqrt(2.0)
    for a, b in down_bonds(p.L, p.boundary):
        for sign, label in ((-1.0, "down_minus"), (1.0, "down_plus")):
            orbitals.append(
                Orbital(
                    label=label,
                    center=a,
                    amplitudes={(a, DOWN): complex(r), (b, DOWN): complex(sign * r)},
                    energy=complex(-p.omega_x + sign * p.t),
                )
            )
    return orbitals


def bulk_orbitals(p: LadderParams, allow_defective: bool = False) -> List[Orbital]:
    """
    Compact localized eigenstates at the flat-band point.

    - down orbitals (b_n + - b_{n+1})/sqrt2 on each lower dimer, E = -omega_x +- t
    - up orbitals on each upper dimer with their lower-leg tails, E = omega_x +- t

    With allow_defective the up orbitals whose energy coincides with a lower
    dimer energy (omega_x = 0 or |omega_x| = |t|, no eigenvector exists) are
    skipped instead of raising.
    """
    _require_flat_band(p, "bulk_orbitals")
    H = build_ladder_b(p)
    orbitals = _down_dimer_orbitals(p)

    for a, b in up_bonds(p.L):
        left = _down_cluster(a, p)
        right = _down_cluster(b, p)
        modes = [mode(n, DOWN) for n in left] + [mode(a, UP), mode(b, UP)]
        modes += [mode(n, DOWN) for n in right]

        found = _upper_orbitals(H, modes, a, ("up_minus", "up_plus"))
        if found is None:
            if not allow_defective:
                raise DomainError(
                    f"up orbitals at rung {a} do not exist: omega_x={p.omega_x} makes the "
                    f"ladder defective (pass allow_defective=True to skip them)"
                )
            log_debug("orbital_skipped", {"center": a, "omega_x": p.omega_x})
            continue
        orbitals.extend(found)

    for orbital in orbitals:
        _check_orbital(H, orbital, p.L)

    return orbitals


def edge_block(p: LadderParams) -> Tuple[np.ndarray, Orbital]:
    """
    The 3x3 block at the right end of an odd open ladder, and its edge orbital.

    With 0-based rungs an odd L leaves the upper site L-1 unbonded; the
    block lives on (up L-1, down L-1, down L-2) and its third eigenvector,
    with energy omega_x, is the three-site edge state.
    """
    _require_flat_band(p, "edge_block")
    if p.boundary != "open" or p.L % 2 == 0:
        raise DomainError("the three-site edge needs an open ladder with odd L")

    H = build_ladder_b(p)
    n = p.L - 1
    modes = [mode(n, UP), mode(n, DOWN), mode(n - 1, DOWN)]

    found = _upper_orbitals(H, modes, n, ("edge_up",))
    if found is None:
        raise DomainError(f"edge orbital does not exist for |2 omega_x| = t (omega_x={p.omega_x})")
    _check_orbital(H, found[0], p.L)

    return H[np.ix_(modes, modes)], found[0]


def single_site_edges(p: LadderParams) -> List[Orbital]:
    """Unbonded lower sites of an open ladder, each an eigenstate with E = -omega_x."""
    _require_flat_band(p, "single_site_edges")
    if p.boundary == "periodic":
        return []

    H = build_ladder_b(p)
    orbitals = [
        Orbital(
            label="edge_down",
            center=n,
            amplitudes={(n, DOWN): 1.0 + 0j},
            energy=complex(-p.omega_x),
        )
        for n in unpaired_rungs(p.L, p.boundary, DOWN)
    ]
    for orbital in orbitals:
        _check_orbital(H, orbital, p.L)
    return orbitals


def flat_band_orbitals(p: LadderParams, allow_defective: bool = False) -> List[Orbital]:
    """Bulk orbitals plus every edge orbital; 2L of them when nothing is defective."""
    orbitals = bulk_orbitals(p, allow_defective) + single_site_edges(p)
    if p.boundary == "open" and p.L % 2:
        orbitals.append(edge_block(p)[1])
    return orbitals


# ------------------------------------------------------------------
# Bands
# ------------------------------------------------------------------

def bloch_hamiltonian(p: LadderParams, k: float) -> np.ndarray:
    """
    4x4 Bloch Hamiltonian of the two-rung cell (modes up 0, down 0, up 1, down 1).

    The intra-cell and inter-cell blocks are read off a three-cell periodic ladder.
    """
    H = build_ladder_b(p.with_updates(L=6, boundary="periodic"))
    intra = H[0:4, 0:4]
    forward = H[0:4, 4:8]
    backward = H[0:4, 8:12]
    return intra + forward * np.exp(1j * k) + backward * np.exp(-1j * k)


def band_sweep(p: LadderParams, n_k: int, tol: float = DEFAULT_TOL) -> BandSweep:
    if n_k < 2:
        raise DomainError("band_sweep needs at least two k points")

    k_grid = np.linspace(-np.pi, np.pi, n_k, endpoint=False)
    bands = np.array([eigvals_general(bloch_hamiltonian(p, k), tol) for k in k_grid])
    flatness = np.stack([np.ptp(bands.real, axis=0), np.ptp(bands.imag, axis=0)], axis=1)

    return BandSweep(k_grid=k_grid, bands=bands, flatness=flatness)


# ------------------------------------------------------------------
# Edge states
# ------------------------------------------------------------------

def predicted_sigma(p: LadderParams) -> Optional[float]:
    """Localization length 1/ln(t^2/|t_up t_down|) in two-rung cells; None past the critical point."""
    product = abs(p.rung_product)
    if product >= p.t**2:
        return None
    if product == 0:
        return 0.0
    return 1.0 / np.log(p.t**2 / product)


def critical_gamma(omega_y: float, t: float) -> Optional[float]:
    """Gamma at which omega_y^2 - gamma^2 = t^2 (edge states appear), if omega_y > t."""
    if abs(omega_y) <= t:
        return None
    return float(np.sqrt(omega_y**2 - t**2))


def _chain_order(p: LadderParams) -> List[int]:
    # the bipartite path down0-up0-up1-down1-down2-up2-... of the omega_x = 0 ladder
    order = []
    for n in range(p.L):
        legs = (DOWN, UP) if n % 2 == 0 else (UP, DOWN)
        order.extend(mode(n, leg) for leg in legs)
    return order


def analytic_edge_state(p: LadderParams, side: Side = "left") -> Orbital:
    """
    Zero-energy edge state from the Schroedinger recursion.

    Along the path of the omega_x = 0 ladder the state lives on every other
    site; each amplitude follows from the row in between:
        psi[c_{2j+2}] = -H[c_{2j+1}, c_{2j}] / H[c_{2j+1}, c_{2j+2}] * psi[c_{2j}]
    On the left this gives psi(1, up) = -(t_up/t) psi(0, down) and
    psi(2n+2, down) = (t_up t_down / t^2) psi(2n, down).
    """
    if p.omega_x != 0:
        raise DomainError("the analytic zero mode needs omega_x = 0")
    if p.boundary != "open":
        raise DomainError("edge states need an open ladder")
    if abs(p.rung_product) >= p.t**2:
        raise DomainError("no edge state: |t_up t_down| >= t^2")

    H = build_ladder_b(p)
    chain = _chain_order(p)
    if side == "right":
        chain = chain[::-1]

    psi = np.zeros(p.dim, dtype=complex)
    psi[chain[0]] = 1.0
    for j in range(0, len(chain) - 2, 2):
        a, mid, b = chain[j], chain[j + 1], chain[j + 2]
        psi[b] = -H[mid, a] / H[mid, b] * psi[a]
    psi /= np.linalg.norm(psi)

    start = chain[0]
    support = np.flatnonzero(psi)
    return Orbital(
        label="edge_down" if start % 2 == DOWN else "edge_up",
        center=start // 2,
        amplitudes={(int(m) // 2, int(m) % 2): complex(psi[m]) for m in support},
        energy=0j,
    )


def localize_edge_subspace(vectors: np.ndarray, L: int) -> np.ndarray:
    """
    Rotate an (almost) degenerate eigenspace into half-chain-localized vectors.

    Columns are returned ordered from most left-localized to most right-localized.
    """
    left = np.zeros(2 * L)
    left[: 2 * (L // 2)] = 1.0
    if L % 2:
        left[2 * (L // 2) : 2 * (L // 2) + 2] = 0.5

    try:
        Q = la.orth(vectors)
        weight = Q.conj().T @ (left[:, None] * Q)
        _, rot = la.eigh(0.5 * (weight + weight.conj().T))
    except la.LinAlgError as e:
        raise NumericalFailure(f"edge subspace could not be localized: {e}", partial=vectors)
    return (Q @ rot)[:, ::-1]


def _edge_kappa(v: np.ndarray, L: int, side: Side) -> Optional[float]:
    amps = np.abs(v).reshape(L, 2)
    rungs = np.arange(L) if side == "left" else np.arange(L)[::-1]

    # dominant sublattice: one leg on every other rung, starting at the edge
    best = None
    for leg in (UP, DOWN):
        for start in (0, 1):
            samples = amps[rungs[start::2], leg]
            if best is None or samples.sum() > best.sum():
                best = samples

    keep = best > _FIT_FLOOR * best.max()
    # stop at the first sample below the floor
    cut = np.argmin(keep) if not keep.all() else keep.size
    samples = best[:cut]
    if samples.size < 3:
        return None
    return fit_decay(zip(range(samples.size), samples))


def numeric_edge_states(
    p: LadderParams,
    e_window: Optional[float] = None,
    tol: float = DEFAULT_TOL,
) -> EdgeReport:
    """
    Edge states of the open ladder from full diagonalization.

    RULES:
    - candidates have |E| < e_window (omega_x = 0) or |E -+ omega_x| < e_window
    - each candidate eigenspace is rotated into left/right-localized vectors
    - kappa is fitted on the dominant sublattice, one sample per two rungs
    - an empty window gives an empty report
    """
    if p.boundary != "open":
        raise DomainError("edge states need an open ladder")
    if e_window is None:
        e_window = 1e-6 * p.t

    H = build_ladder_b(p)
    spectrum = eig_general(H, tol)
    targets = [0.0] if p.omega_x == 0 else [-p.omega_x, p.omega_x]

    states = []
    for target in targets:
        selected = np.abs(spectrum.eigenvalues - target) < e_window
        if not selected.any():
            continue

        for v in localize_edge_subspace(spectrum.right_vectors[:, selected], p.L).T:
            v = v / np.linalg.norm(v)
            weight = np.abs(v.reshape(p.L, 2)) ** 2
            left_weight = weight[: (p.L + 1) // 2].sum()
            side: Side = "left" if left_weight >= 0.5 else "right"
            states.append(
                EdgeState(
                    energy=complex(v.conj() @ H @ v),
                    vector=v,
                    side=side,
                    support_size=int(np.count_nonzero(np.abs(v) ** 2 > _EDGE_WEIGHT_TOL)),
                    kappa=_edge_kappa(v, p.L, side),
                )
            )

    kappas = [s.kappa for s in states if s.kappa is not None]
    log_debug("edge_states", {"count": len(states), "e_window": e_window})

    return EdgeReport(
        states=states,
        fitted_kappa=float(np.mean(kappas)) if kappas else None,
        predicted_sigma=predicted_sigma(p),
        e_window=e_window,
    )


# ------------------------------------------------------------------
# Spectra and phase scans
# ------------------------------------------------------------------

def spectrum_report(p: LadderParams, tol: float = DEFAULT_TOL) -> Spectrum:
    return eig_general(build_ladder_b(p), tol)


def nonbloch_winding(p: LadderParams, n_k: int = 512) -> int:
    """
    Winding of v + t e^{ik} around the origin, with v^2 = t_up t_down.

    At omega_x = 0 a diagonal similarity maps the open ladder onto an SSH
    chain with intra-cell hopping v and inter-cell hopping t; the winding
    is 1 exactly when that chain has edge states.
    """
    v = np.sqrt(complex(p.rung_product))
    k = np.linspace(0.0, 2 * np.pi, n_k + 1)
    phase = np.unwrap(np.angle(v + p.t * np.exp(1j * k)))
    return int(round((phase[-1] - phase[0]) / (2 * np.pi)))


def _scan_point(
    t: float,
    omega_x: float,
    L: int,
    gamma: float,
    omega_y: float,
    tol_edge: float,
    tol: float,
) -> ScanPoint:
    p = LadderParams(t=t, gamma=gamma, omega_x=omega_x, omega_y=omega_y, L=L, boundary="open")
    energies = eigvals_general(build_ladder_b(p), tol)

    zero = np.abs(energies) < tol_edge
    bulk = energies[~zero]
    max_bulk_im = float(np.max(np.abs(bulk.imag))) if bulk.size else 0.0

    return ScanPoint(
        gamma=float(gamma),
        omega_y=float(omega_y),
        n_edge_states=int(np.count_nonzero(zero)),
        max_bulk_im=max_bulk_im,
        spectral_real=bool(np.max(np.abs(energies.imag)) < 1e-10 * t),
        winding=nonbloch_winding(p),
    )


def phase_scan(
    t: float,
    omega_x: float,
    L: int,
    gamma_grid: Sequence[float],
    omega_y_grid: Sequence[float],
    tol_edge: Optional[float] = None,
    n_jobs: int = 1,
    tol: float = DEFAULT_TOL,
) -> Dict[Tuple[float, float], ScanPoint]:
    """
    Zero-mode count and spectral reality over a (gamma, omega_y) grid.

    Grid points are independent and run through joblib; results come back
    in grid order (omega_y outer, gamma inner).
    """
    if omega_x != 0:
        raise DomainError("the zero-mode criterion needs omega_x = 0")
    if tol_edge is None:
        tol_edge = 1e-6 * t

    grid = [(float(g), float(oy)) for oy in omega_y_grid for g in gamma_grid]
    log_debug("phase_scan", {"points": len(grid), "L": L, "n_jobs": n_jobs})

    points = Parallel(n_jobs=n_jobs)(
        delayed(_scan_point)(t, omega_x, L, g, oy, tol_edge, tol) for g, oy in grid
    )
    return {(pt.gamma, pt.omega_y): pt for pt in points}


def transition_gamma(
    scan: Dict[Tuple[float, float], ScanPoint],
    omega_y: float,
    criterion: Literal["winding", "zero_modes"] = "winding",
) -> Optional[float]:
    """
    Smallest gamma on the omega_y line from which edge states are present for all larger gamma.
    """
    line = sorted((pt for pt in scan.values() if pt.omega_y == omega_y), key=lambda pt: pt.gamma)
    flags = [
        (pt.winding == 1) if criterion == "winding" else (pt.n_edge_states > 0) for pt in line
    ]
    if not flags or not flags[-1]:
        return None

    start = len(flags) - 1
    while start > 0 and flags[start - 1]:
        start -= 1
    return line[start].gamma
