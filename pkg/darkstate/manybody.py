"""
Interacting bosons on the ladder in a fixed-particle-number Fock basis.

Modes are the 2L single-particle modes of ladder.build_ladder_b, index 2n + leg.
States are occupation tuples, enumerated in ascending lexicographic order.
Sparse Fock vectors are dicts {occupation tuple: amplitude}.

H = sum_ij H1[i, j] a_i^dag a_j + U sum_n n(n, up) n(n, down)
"""

from dataclasses import dataclass, field
from math import sqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from darkstate.errors import DomainError, ResourceLimitError
from darkstate.ladder import UP, DOWN, Orbital, bulk_orbitals, build_ladder_b, mode
from darkstate.logging.events import log_debug, log_warning
from darkstate.models.params import LadderParams
from darkstate.numkit import DEFAULT_TOL, eig_general, eigvals_general, ground_subspace

Occupation = Tuple[int, ...]
FockVector = Dict[Occupation, complex]

DEFAULT_BASIS_LIMIT = 200_000
DENSE_LIMIT = 5_000


# ------------------------------------------------------------------
# Fock basis
# ------------------------------------------------------------------

def count_states(n_modes: int, n_particles: int, cap: int) -> int:
    """Number of occupations of n_modes modes with n_particles bosons, at most cap per mode."""
    ways = [1] + [0] * n_particles
    for _ in range(n_modes):
        nxt = [0] * (n_particles + 1)
        for total, w in enumerate(ways):
            if not w:
                continue
            for occ in range(min(cap, n_particles - total) + 1):
                nxt[total + occ] += w
        ways = nxt
    return ways[n_particles]


def _occupations(n_modes: int, n_particles: int, cap: int):
    if n_modes == 1:
        if n_particles <= cap:
            yield (n_particles,)
        return
    for first in range(min(cap, n_particles) + 1):
        for rest in _occupations(n_modes - 1, n_particles - first, cap):
            yield (first,) + rest


@dataclass(frozen=True)
class FockBasis:
    n_modes: int
    n_particles: int
    cap: int
    states: Tuple[Occupation, ...]
    index: Dict[Occupation, int] = field(repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.states)

    def to_dense(self, vector: FockVector) -> np.ndarray:
        out = np.zeros(len(self), dtype=complex)
        for occ, amp in vector.items():
            if occ not in self.index:
                raise DomainError(f"occupation {occ} is not in the basis")
            out[self.index[occ]] += amp
        return out

    def from_dense(self, array, cutoff: float = 0.0) -> FockVector:
        array = np.asarray(array, dtype=complex)
        if array.shape != (len(self),):
            raise DomainError(f"vector of shape {array.shape} does not match basis of size {len(self)}")
        return {self.states[i]: complex(array[i]) for i in np.flatnonzero(np.abs(array) > cutoff)}


def fock_basis(
    L: int,
    n_particles: int,
    cap: Optional[int] = None,
    limit: int = DEFAULT_BASIS_LIMIT,
) -> FockBasis:
    """
    All occupations of the 2L ladder modes with n_particles bosons.

    cap defaults to n_particles (unconstrained bosons). Needs L >= 4 and N >= 1.
    """
    if L < 4:
        raise DomainError(f"a ladder needs at least 4 rungs, got L={L}")
    if n_particles < 1:
        raise DomainError(f"particle number must be at least 1, got {n_particles}")
    cap = n_particles if cap is None else cap
    if cap < 0:
        raise DomainError("occupation cap must be non-negative")

    n_modes = 2 * L
    size = count_states(n_modes, n_particles, cap)
    if size > limit:
        raise ResourceLimitError(f"Fock basis has {size} states (limit {limit})")
    if size == 0:
        raise DomainError(f"no occupations with N={n_particles} under cap {cap}")

    states = tuple(_occupations(n_modes, n_particles, cap))
    return FockBasis(
        n_modes=n_modes,
        n_particles=n_particles,
        cap=cap,
        states=states,
        index={s: i for i, s in enumerate(states)},
    )


# ------------------------------------------------------------------
# Many-body Hamiltonian
# ------------------------------------------------------------------

@dataclass(frozen=True)
class ManyBodyOperator:
    basis: FockBasis
    matrix: np.ndarray
    U: float

    @property
    def dim(self) -> int:
        return len(self.basis)


def rung_interaction(occ: Occupation, U: float) -> float:
    return U * sum(occ[mode(n, UP)] * occ[mode(n, DOWN)] for n in range(len(occ) // 2))


def build_manybody(
    p: LadderParams,
    U: float,
    n_particles: int,
    cap: Optional[int] = None,
    limit: int = DEFAULT_BASIS_LIMIT,
) -> ManyBodyOperator:
    """
    Dense many-body matrix (row = target state) of the interacting ladder.

    Each nonzero H1[i, j] moves one boson j -> i with the bosonic factor
    sqrt(n_j) sqrt(n_i + 1); moves that would exceed the cap are dropped.
    """
    if U < 0:
        raise DomainError(f"interaction U must be non-negative, got {U}")

    basis = fock_basis(p.L, n_particles, cap, limit)
    if len(basis) > DENSE_LIMIT:
        raise ResourceLimitError(f"dense many-body matrix of size {len(basis)} exceeds {DENSE_LIMIT}")

    H1 = build_ladder_b(p)
    targets, sources = np.nonzero(H1)
    M = np.zeros((len(basis), len(basis)), dtype=complex)

    for col, occ in enumerate(basis.states):
        M[col, col] += rung_interaction(occ, U)
        for i, j in zip(targets, sources):
            if occ[j] == 0:
                continue
            if i == j:
                M[col, col] += H1[i, i] * occ[i]
                continue
            if occ[i] + 1 > basis.cap:
                continue
            new = list(occ)
            new[j] -= 1
            new[i] += 1
            row = basis.index[tuple(new)]
            M[row, col] += H1[i, j] * sqrt(occ[j]) * sqrt(occ[i] + 1)

    log_debug("manybody_built", {"dim": len(basis), "N": n_particles, "cap": basis.cap})
    return ManyBodyOperator(basis=basis, matrix=M, U=float(U))


@dataclass(frozen=True)
class GroundManifold:
    energies: Tuple[complex, ...]
    vectors: np.ndarray
    degeneracy: int

    def pairs(self) -> List[Tuple[complex, np.ndarray]]:
        return [(e, self.vectors[:, i]) for i, e in enumerate(self.energies)]


def ground_manifold(
    op: ManyBodyOperator,
    k: int = 1,
    tol: float = DEFAULT_TOL,
) -> GroundManifold:
    """
    The k eigenpairs with the smallest real parts and the ground degeneracy.

    The degeneracy is dim ker(H - E0) at the clustering tolerance, with E0
    the eigenvalue of minimal real part; it does not depend on k.
    """
    if not 1 <= k <= op.dim:
        raise DomainError(f"k={k} outside 1..{op.dim}")
    spectrum = eig_general(op.matrix, tol)
    ground = ground_subspace(op.matrix, spectrum.eigenvalues[0], tol)

    manifold = GroundManifold(
        energies=tuple(complex(e) for e in spectrum.eigenvalues[:k]),
        vectors=spectrum.right_vectors[:, :k].copy(),
        degeneracy=int(ground.shape[1]),
    )
    log_debug("ground_manifold", {"k": k, "degeneracy": manifold.degeneracy, "E0": manifold.energies[0]})
    return manifold


# ------------------------------------------------------------------
# Orbitals in Fock space
# ------------------------------------------------------------------

def vacuum(n_modes: int) -> FockVector:
    return {(0,) * n_modes: 1.0 + 0j}


def lift_orbital(
    orbital: Orbital,
    basis: FockBasis,
    vector: Optional[FockVector] = None,
) -> FockVector:
    """
    Apply the creation operator sum_m phi_m a_m^dag of an orbital to a sparse Fock vector.

    basis fixes the mode count and the occupation cap; vector defaults to
    the vacuum. The result has one more boson than vector.
    """
    if vector is None:
        vector = vacuum(basis.n_modes)

    out: FockVector = {}
    for occ, amp in vector.items():
        if len(occ) != basis.n_modes:
            raise DomainError(f"occupation {occ} does not have {basis.n_modes} modes")
        for (n, leg), phi in orbital.amplitudes.items():
            m = mode(n, leg)
            if m >= basis.n_modes:
                raise DomainError(f"orbital mode ({n}, {leg}) outside the {basis.n_modes}-mode basis")
            if phi == 0:
                continue
            if occ[m] + 1 > basis.cap:
                raise DomainError(f"creating a boson in mode {m} exceeds the cap {basis.cap}")
            new = list(occ)
            new[m] += 1
            new = tuple(new)
            out[new] = out.get(new, 0j) + amp * phi * sqrt(occ[m] + 1)
    return out


def _lowest_up_band(p: LadderParams, orbitals: Sequence[Orbital]) -> str:
    up = [o for o in orbitals if o.label.startswith("up_")]
    lowest = min(up, key=lambda o: o.energy.real)
    down_min = min(o.energy.real for o in orbitals if o.label.startswith("down_"))
    if down_min < lowest.energy.real:
        log_warning(
            "cdw_not_lowest_band",
            {"up_energy": lowest.energy, "down_energy": down_min, "omega_x": p.omega_x},
        )
    return lowest.label


def cdw_state(p: LadderParams, offset: int) -> np.ndarray:
    """
    Charge-density-wave state with N = L/4 bosons in the lowest up band.

    Orbitals centred on rungs n = 2*offset (mod 4) are filled; the state is
    a dense normalized vector over fock_basis(L, L // 4).
    """
    if not p.is_flat_band:
        raise DomainError("the CDW state is built at the flat-band point gamma = -omega_y")
    if p.boundary != "periodic" or p.L % 4:
        raise DomainError("the CDW state needs a periodic ladder with L divisible by 4")
    if offset not in (0, 1):
        raise DomainError(f"offset must be 0 or 1, got {offset}")

    orbitals = bulk_orbitals(p)
    label = _lowest_up_band(p, orbitals)
    selected = [o for o in orbitals if o.label == label and o.center % 4 == 2 * offset]

    basis = fock_basis(p.L, p.L // 4)
    vector = vacuum(basis.n_modes)
    for orbital in selected:
        vector = lift_orbital(orbital, basis, vector)

    dense = basis.to_dense(vector)
    return dense / np.linalg.norm(dense)


def _densities(orbital: Orbital) -> Dict[Tuple[int, int], float]:
    return {key: abs(a) ** 2 for key, a in orbital.amplitudes.items()}


def projected_interaction(orbitals: Sequence[Orbital], U: float) -> np.ndarray:
    """
    Two-orbital density-density energies of the rung interaction.

    V[i, j] = U sum_n (rho_i(n, up) rho_j(n, down) + rho_i(n, down) rho_j(n, up)).
    """
    rho = [_densities(o) for o in orbitals]
    V = np.zeros((len(orbitals), len(orbitals)))
    for i, a in enumerate(rho):
        for j, b in enumerate(rho):
            V[i, j] = U * sum(
                w * b.get((n, 1 - leg), 0.0) for (n, leg), w in a.items()
            )
    return V


# ------------------------------------------------------------------
# CDW verification
# ------------------------------------------------------------------

@dataclass(frozen=True)
class CDWReport:
    energy: float
    residuals: Tuple[float, float]
    ground_energy: complex
    ground_dimension: int
    fidelities: Tuple[float, float]
    offset_overlap: float
    penalty_table: np.ndarray
    penalty_centers: Tuple[int, ...]
    basis_size: int
    tol: float

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "residuals": list(self.residuals),
            "ground_energy": {"re": self.ground_energy.real, "im": self.ground_energy.imag},
            "ground_dimension": self.ground_dimension,
            "fidelities": list(self.fidelities),
            "offset_overlap": self.offset_overlap,
            "penalty_table": self.penalty_table.tolist(),
            "penalty_centers": list(self.penalty_centers),
            "basis_size": self.basis_size,
            "tol": self.tol,
        }


def verify_cdw(p: LadderParams, U: float, tol: float = DEFAULT_TOL) -> CDWReport:
    """
    Check both CDW states against the interacting Hamiltonian.

    Fidelity is the norm of the projection onto the ground eigenspace;
    overlaps between the two offsets come only from lower-leg tails.
    """
    n_particles = p.L // 4
    op = build_manybody(p, U, n_particles)
    states = [cdw_state(p, 0), cdw_state(p, 1)]

    orbitals = bulk_orbitals(p)
    label = _lowest_up_band(p, orbitals)
    band = sorted((o for o in orbitals if o.label == label), key=lambda o: o.center)
    energy = n_particles * band[0].energy.real

    residuals = tuple(float(np.linalg.norm(op.matrix @ g - energy * g)) for g in states)

    values = eigvals_general(op.matrix, tol)
    ground = values[0]
    ground_vectors = ground_subspace(op.matrix, ground, tol)
    fidelities = tuple(float(np.linalg.norm(ground_vectors.conj().T @ g)) for g in states)

    report = CDWReport(
        energy=float(energy),
        residuals=residuals,
        ground_energy=complex(ground),
        ground_dimension=int(ground_vectors.shape[1]),
        fidelities=fidelities,
        offset_overlap=float(abs(np.vdot(states[0], states[1]))),
        penalty_table=projected_interaction(band, U),
        penalty_centers=tuple(o.center for o in band),
        basis_size=op.dim,
        tol=tol,
    )
    log_debug("cdw_verified", report.to_dict())
    return report
