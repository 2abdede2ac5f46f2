import numpy as np
import pytest

from darkstate.errors import DomainError, ResourceLimitError
from darkstate.ladder import DOWN, UP, Orbital, build_ladder_b, bulk_orbitals, mode
from darkstate.manybody import (
    build_manybody,
    cdw_state,
    count_states,
    fock_basis,
    ground_manifold,
    lift_orbital,
    projected_interaction,
    rung_interaction,
    verify_cdw,
)
from darkstate.models.params import LadderParams
from darkstate.numkit import eigvals_general
from tests.utils import match_sorted, stars_and_bars


# ------------------------------------------------------------------
# Fock basis
# ------------------------------------------------------------------

@pytest.mark.parametrize("L,N", [(4, 1), (4, 2), (8, 2), (5, 3)])
def test_basis_size_matches_stars_and_bars(L, N):
    basis = fock_basis(L, N)

    assert len(basis) == stars_and_bars(2 * L, N)
    assert all(sum(s) == N for s in basis.states)


def test_basis_is_lexicographic_and_indexed():
    basis = fock_basis(4, 2)

    assert list(basis.states) == sorted(basis.states)
    assert all(basis.index[s] == i for i, s in enumerate(basis.states))
    assert len(fock_basis(8, 2)) == 136


def test_cap_restricts_occupations():
    basis = fock_basis(4, 2, cap=1)

    assert len(basis) == count_states(8, 2, 1) == 28
    assert all(max(s) <= 1 for s in basis.states)


def test_basis_limit():
    with pytest.raises(ResourceLimitError):
        fock_basis(20, 6, limit=1000)


def test_basis_preconditions():
    with pytest.raises(DomainError):
        fock_basis(3, 1)
    with pytest.raises(DomainError):
        fock_basis(4, 0)


def test_dense_sparse_conversion():
    basis = fock_basis(4, 1)
    vector = {basis.states[2]: 0.5 + 0j, basis.states[5]: -1j}
    dense = basis.to_dense(vector)

    assert basis.from_dense(dense) == vector
    with pytest.raises(DomainError):
        basis.to_dense({(9,) * 8: 1.0})


# ------------------------------------------------------------------
# Hamiltonian
# ------------------------------------------------------------------

def test_single_particle_sector_is_the_ladder():
    p = LadderParams(t=1.0, gamma=0.2, omega_x=0.3, omega_y=0.5, L=4)
    op = build_manybody(p, U=0.7, n_particles=1)
    H1 = build_ladder_b(p)

    # with one boson, state index i has the boson in mode 2L-1-i
    order = [op.basis.states.index(tuple(int(m == k) for m in range(8))) for k in range(8)]
    assert np.allclose(op.matrix[np.ix_(order, order)], H1)


def test_noninteracting_spectrum_is_pair_sums():
    p = LadderParams(t=1.0, gamma=0.2, omega_x=0.3, omega_y=0.5, L=4)
    single = eigvals_general(build_ladder_b(p))
    pairs = [single[i] + single[j] for i in range(8) for j in range(i, 8)]

    op = build_manybody(p, U=0.0, n_particles=2)
    assert match_sorted(eigvals_general(op.matrix), pairs) < 1e-9


def test_interaction_only_on_shared_rungs():
    p = LadderParams(t=1.0, gamma=0.2, omega_x=0.3, omega_y=0.5, L=4)
    U = 0.9
    diff = build_manybody(p, U, 2).matrix - build_manybody(p, 0.0, 2).matrix
    basis = fock_basis(4, 2)

    expected = [U * sum(s[2 * n] * s[2 * n + 1] for n in range(4)) for s in basis.states]
    assert np.allclose(diff, np.diag(expected))


def test_hopping_moves_exactly_one_boson():
    p = LadderParams(t=1.0, gamma=0.2, omega_x=0.3, omega_y=0.5, L=4)
    op = build_manybody(p, U=0.7, n_particles=3)
    states = np.array(op.basis.states)

    assert np.all(states.sum(axis=1) == 3)
    for row, col in zip(*np.nonzero(op.matrix)):
        assert np.abs(states[row] - states[col]).sum() in (0, 2)


def test_interaction_is_non_negative(cdw_params):
    basis = fock_basis(cdw_params.L, 3)
    diag = np.array([rung_interaction(s, 0.05) for s in basis.states])

    assert np.all(diag >= 0)
    assert np.any(diag > 0)


def test_negative_interaction_rejected():
    with pytest.raises(DomainError):
        build_manybody(LadderParams(t=1.0, L=4), U=-1.0, n_particles=1)


def test_ground_manifold_at_zero_interaction(cdw_params):
    op = build_manybody(cdw_params, U=0.0, n_particles=2)
    energies = ground_manifold(op, k=11).energies

    # two bosons in the lowest band at Omega_x - t, next level one boson promoted by 2t
    assert energies[0].real == pytest.approx(2 * (-2.5), abs=1e-10)
    assert energies[10].real == pytest.approx(2 * (-2.5) + 2 * 0.5, abs=1e-10)
    with pytest.raises(DomainError):
        ground_manifold(op, k=0)


def test_ground_degeneracy(cdw_params):
    op = build_manybody(cdw_params, U=0.05, n_particles=2)
    manifold = ground_manifold(op, k=4)

    assert manifold.degeneracy == 10
    assert manifold.energies[0].real == pytest.approx(-5.0, abs=1e-9)
    assert manifold.vectors.shape == (136, 4)
    assert len(manifold.pairs()) == 4


# ------------------------------------------------------------------
# Orbitals in Fock space
# ------------------------------------------------------------------

def test_lift_orbital_bosonic_factor():
    orbital = Orbital(label="edge_down", center=0, amplitudes={(0, UP): 1.0 + 0j}, energy=0j)
    basis = fock_basis(4, 2)
    twice = lift_orbital(orbital, basis, lift_orbital(orbital, basis))

    assert twice == pytest.approx({(2, 0, 0, 0, 0, 0, 0, 0): np.sqrt(2)})
    with pytest.raises(DomainError):
        lift_orbital(orbital, basis, twice)


def test_lift_dimer_orbital_twice():
    phi = {(1, DOWN): 0.6 + 0j, (2, DOWN): 0.8j}
    orbital = Orbital(label="down_minus", center=1, amplitudes=phi, energy=0j)
    basis = fock_basis(4, 2)
    twice = lift_orbital(orbital, basis, lift_orbital(orbital, basis))

    a, b = mode(1, DOWN), mode(2, DOWN)
    doublon_a = tuple(2 if m == a else 0 for m in range(8))
    doublon_b = tuple(2 if m == b else 0 for m in range(8))
    mixed = tuple(1 if m in (a, b) else 0 for m in range(8))

    assert twice[doublon_a] == pytest.approx(np.sqrt(2) * 0.36)
    assert twice[doublon_b] == pytest.approx(np.sqrt(2) * (0.8j) ** 2)
    assert twice[mixed] == pytest.approx(2 * 0.6 * 0.8j)
    assert len(twice) == 3


def test_one_particle_lifts_are_orthonormal(cdw_params):
    down = [o for o in bulk_orbitals(cdw_params) if o.label.startswith("down_")]
    basis = fock_basis(cdw_params.L, 1)
    lifted = np.column_stack([basis.to_dense(lift_orbital(o, basis)) for o in down])

    assert lifted.shape[1] == cdw_params.L
    assert np.allclose(lifted.conj().T @ lifted, np.eye(cdw_params.L), atol=1e-12)


def test_cdw_states_are_exact_eigenvectors(cdw_params):
    op = build_manybody(cdw_params, U=0.05, n_particles=2)

    for offset in (0, 1):
        g = cdw_state(cdw_params, offset)
        assert np.linalg.norm(g) == pytest.approx(1.0)
        assert np.linalg.norm(op.matrix @ g + 5.0 * g) < 1e-10


def test_cdw_preconditions(cdw_params):
    with pytest.raises(DomainError):
        cdw_state(cdw_params, 2)
    with pytest.raises(DomainError):
        cdw_state(cdw_params.with_updates(boundary="open"), 0)
    with pytest.raises(DomainError):
        cdw_state(cdw_params.with_updates(L=6), 0)


def test_projected_interaction(cdw_params):
    band = sorted(
        (o for o in bulk_orbitals(cdw_params) if o.label == "up_minus"),
        key=lambda o: o.center,
    )
    V = projected_interaction(band, 0.05)

    assert V[0, 1] > 0
    assert V[0, 2] == 0.0
    assert V[1, 3] == 0.0
    assert np.allclose(V, V.T)


def test_verify_cdw(cdw_params):
    report = verify_cdw(cdw_params, 0.05)

    assert report.energy == pytest.approx(-5.0)
    assert max(report.residuals) < 1e-10
    assert report.ground_energy.real == pytest.approx(-5.0, abs=1e-9)
    assert min(report.fidelities) > 1 - 1e-8
    # two bosons in four degenerate lowest orbitals
    assert report.ground_dimension == 10
    assert 0 <= report.offset_overlap < 0.1
    assert report.penalty_centers == (0, 2, 4, 6)
