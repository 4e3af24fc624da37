import math

import numpy as np
import pytest
import torch

from efcost.linalg import kron
from efcost.measures import (
    bell_mix_optimal_decomposition,
    binary_entropy,
    concurrence,
    constant_entanglement_check,
    ec_bell_mix,
    ed_hashing,
    ef_constant_subspace,
    ef_from_concurrence,
    ef_two_qubit,
    entropy_of_entanglement,
    irreversibility_gap,
    reduced_spectrum,
    ssa_check,
    von_neumann_entropy,
)
from efcost.states import (
    DensityMatrix,
    PureState,
    bell_mix,
    bell_state,
    density_from_pure,
    embed,
    random_density,
    random_pure,
    random_subspace_density,
    subspace_basis,
)
from efcost.utils.exceptions import DimensionError, DomainError

DTYPE = torch.complex128
H2_THIRD = 0.918295834054489
GRID = np.linspace(0.0, 0.5, 101)


def _random_unitary(d, seed):
    rng = np.random.default_rng(seed)
    g = torch.from_numpy(rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d)))
    q, _ = torch.linalg.qr(g)
    return q.to(DTYPE)


def test_binary_entropy_values():
    assert binary_entropy(0) == 0.0
    assert binary_entropy(1) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0, abs=1e-12)
    assert binary_entropy(1 / 3) == pytest.approx(0.918296, abs=1e-6)
    with pytest.raises(DomainError):
        binary_entropy(1.1)
    with pytest.raises(DomainError):
        binary_entropy(-1e-6)


def test_von_neumann_entropy_values():
    assert von_neumann_entropy(density_from_pure(bell_state("phi+"))) == pytest.approx(0.0, abs=1e-12)
    for d in (2, 3, 4):
        assert von_neumann_entropy(torch.eye(d, dtype=torch.float64) / d) == pytest.approx(math.log2(d), abs=1e-12)
    assert von_neumann_entropy(torch.diag(torch.tensor([0.5, 0.25, 0.25]))) == pytest.approx(1.5, abs=1e-12)


def test_entropy_of_entanglement_values():
    assert entropy_of_entanglement(bell_state("phi+")) == pytest.approx(1.0, abs=1e-12)
    product = PureState(torch.tensor([1, 0, 0, 0], dtype=DTYPE), (2, 2))
    assert entropy_of_entanglement(product) == pytest.approx(0.0, abs=1e-12)
    rng = np.random.default_rng(3)
    for _ in range(5):
        c = torch.from_numpy(rng.standard_normal(2) + 1j * rng.standard_normal(2))
        assert entropy_of_entanglement(embed(c, subspace_basis(3))) == pytest.approx(H2_THIRD, abs=1e-9)


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 4), (4, 4)])
def test_entropy_of_entanglement_both_sides_agree(dims):
    for seed in range(5):
        psi = random_pure(dims[0] * dims[1], seed, split=dims)
        a = entropy_of_entanglement(psi, keep="A")
        b = entropy_of_entanglement(psi, keep="B")
        assert abs(a - b) < 1e-9


def test_reduced_spectrum_of_example4():
    psi = embed([1, 2j, -1], subspace_basis(4))
    np.testing.assert_allclose(reduced_spectrum(psi).numpy(), [0.25, 0.25, 0.5], atol=1e-12)


def test_concurrence_values():
    assert concurrence(density_from_pure(bell_state("phi+"))) == pytest.approx(1.0, abs=1e-9)
    assert concurrence(bell_mix(0.5)) == pytest.approx(0.0, abs=1e-9)
    for p in (0.0, 0.1, 0.25, 0.4, 0.5):
        assert concurrence(bell_mix(p)) == pytest.approx(abs(1 - 2 * p), abs=1e-9)
    with pytest.raises(DimensionError):
        concurrence(random_density(6, 2, 0, split=(2, 3)))


def test_ef_two_qubit_values():
    assert ef_two_qubit(bell_mix(0.5)) == pytest.approx(0.0, abs=1e-9)
    assert ef_two_qubit(density_from_pure(bell_state("phi+"))) == pytest.approx(1.0, abs=1e-9)
    assert ef_two_qubit(bell_mix(0.25)) == pytest.approx(binary_entropy(0.5 + math.sqrt(3) / 4), abs=1e-12)
    assert ef_two_qubit(bell_mix(0.25)) == pytest.approx(0.354579, abs=1e-5)
    values = [ef_from_concurrence(c) for c in np.linspace(0, 1, 21)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_concurrence_local_unitary_invariance():
    for seed in range(5):
        rho = random_density(4, 3, seed, split=(2, 2))
        u = kron(_random_unitary(2, 100 + seed), _random_unitary(2, 200 + seed))
        moved = DensityMatrix(u @ rho.mat @ u.conj().T, (2, 2))
        assert abs(concurrence(rho) - concurrence(moved)) < 1e-9


def test_bell_mix_formulas():
    assert ec_bell_mix(0) == pytest.approx(1.0, abs=1e-12)
    assert ec_bell_mix(0.5) == pytest.approx(0.0, abs=1e-12)
    assert ec_bell_mix(0.25) == pytest.approx(0.354579, abs=1e-5)
    assert ed_hashing(0) == pytest.approx(1.0, abs=1e-12)
    assert ed_hashing(0.5) == pytest.approx(0.0, abs=1e-12)
    assert ed_hashing(0.25) == pytest.approx(0.188722, abs=1e-5)
    with pytest.raises(DomainError):
        ec_bell_mix(0.6)
    with pytest.raises(DomainError):
        ed_hashing(-0.1)


def test_concurrence_route_equals_cost_formula_on_grid():
    for p in GRID:
        assert abs(ef_two_qubit(bell_mix(p)) - ec_bell_mix(p)) < 1e-9


def test_irreversibility_gap_on_grid():
    for p in GRID:
        gap = irreversibility_gap(p)
        assert ed_hashing(p) <= ec_bell_mix(p) + 1e-12
        if 0.01 <= p <= 0.49:
            assert gap > 1e-6


@pytest.mark.parametrize("p", [0.0, 0.1, 0.25, 0.4, 0.5])
def test_bell_mix_optimal_decomposition(p):
    dec = bell_mix_optimal_decomposition(p)
    assert dec.reconstruction_residual(bell_mix(p)) < 1e-12
    for psi in dec.states:
        assert entropy_of_entanglement(psi) == pytest.approx(ec_bell_mix(p), abs=1e-9)


@pytest.mark.parametrize(
    "example_id, spectrum, value",
    [
        (2, [0.0, 0.5, 0.5], 1.0),
        (3, [1 / 3, 2 / 3], H2_THIRD),
        (4, [0.25, 0.25, 0.5], 1.5),
    ],
)
def test_constant_entanglement_examples(example_id, spectrum, value):
    report = constant_entanglement_check(subspace_basis(example_id), samples=64, seed=0)
    assert report.is_constant
    np.testing.assert_allclose(report.spectrum, spectrum, atol=1e-9)
    assert report.value == pytest.approx(value, abs=1e-9)


def test_constancy_rejects_non_constant_subspaces():
    assert not constant_entanglement_check(subspace_basis(1), samples=16).is_constant
    assert not constant_entanglement_check(subspace_basis(4, verbatim=True), samples=16).is_constant
    with pytest.raises(DomainError):
        constant_entanglement_check(subspace_basis(2), samples=1)


def test_ef_constant_subspace():
    basis = subspace_basis(3)
    rho = random_subspace_density(basis, 2, 5)
    assert ef_constant_subspace(rho, basis) == pytest.approx(H2_THIRD, abs=1e-9)
    with pytest.raises(DomainError):
        ef_constant_subspace(random_density(6, 2, 5, split=(2, 3)), basis)
    with pytest.raises(DomainError):
        ef_constant_subspace(bell_mix(0.25), subspace_basis(1))


def test_ssa_examples():
    zero = torch.zeros(8, dtype=DTYPE)
    zero[0] = 1
    assert ssa_check(zero, (2, 2, 2)) == pytest.approx(0.0, abs=1e-12)
    phi_zero = torch.kron(bell_state("phi+").vec, torch.tensor([1, 0], dtype=DTYPE))
    assert ssa_check(phi_zero, (2, 2, 2)) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(DimensionError):
        ssa_check(zero, (2, 2, 3))


def test_ssa_sweep_small():
    for seed in range(50):
        assert ssa_check(random_pure(8, seed), (2, 2, 2)) >= -1e-9
    for seed in range(10):
        assert ssa_check(random_pure(27, seed), (3, 3, 3)) >= -1e-9


@pytest.mark.slow
def test_ssa_sweep_full():
    for seed in range(200):
        assert ssa_check(random_pure(8, 1000 + seed), (2, 2, 2)) >= -1e-9
    for seed in range(100):
        assert ssa_check(random_pure(27, 2000 + seed), (3, 3, 3)) >= -1e-9
