import numpy as np
import pytest
import torch

from efcost.linalg import kron, partial_trace
from efcost.measures import binary_entropy, ef_two_qubit
from efcost.states import (
    bell_mix,
    bell_state,
    density_from_pure,
    random_density,
    random_subspace_density,
    subspace_basis,
)
from efcost.utils.exceptions import DimensionError, DomainError, SizeError
from efcost.variational import (
    OptimizerConfig,
    additivity_gap,
    average_entanglement,
    decompose_sqrt,
    ef_reference,
    ef_upper_bound,
    ensemble_from_isometry,
    isometry_from_ensemble,
    joint_state,
    product_decomposition,
)

DTYPE = torch.complex128
EF_QUARTER = 0.354579
H2_THIRD = 0.918295834054489


def _random_isometry(m, r, seed):
    rng = np.random.default_rng(seed)
    g = torch.from_numpy(rng.standard_normal((m, r)) + 1j * rng.standard_normal((m, r)))
    q, _ = torch.linalg.qr(g)
    return q.to(DTYPE)


def test_decompose_sqrt_reconstructs():
    rho = random_density(6, 3, 4, split=(2, 3))
    dec = decompose_sqrt(rho)
    assert dec.size == 3
    assert dec.reconstruction_residual(rho) < 1e-12
    assert list(dec.weights) == sorted(dec.weights, reverse=True)


def test_ensemble_from_identity_isometry_is_eigen_ensemble():
    rho = bell_mix(0.25)
    dec = ensemble_from_isometry(rho, torch.eye(2, dtype=DTYPE))
    np.testing.assert_allclose(dec.weights, [0.75, 0.25], atol=1e-12)
    assert dec.reconstruction_residual(rho) < 1e-12


def test_ensemble_from_hadamard_isometry():
    rho = bell_mix(0.25)
    hadamard = torch.tensor([[1, 1], [1, -1]], dtype=DTYPE) / 2 ** 0.5
    dec = ensemble_from_isometry(rho, hadamard)
    np.testing.assert_allclose(dec.weights, [0.5, 0.5], atol=1e-12)
    assert dec.reconstruction_residual(rho) < 1e-12


def test_ensemble_from_isometry_drops_empty_members():
    rho = bell_mix(0.25)
    u = torch.zeros(4, 2, dtype=DTYPE)
    u[:2] = torch.eye(2, dtype=DTYPE)
    assert ensemble_from_isometry(rho, u).size == 2


def test_ensemble_from_isometry_errors():
    rho = bell_mix(0.25)
    with pytest.raises(DimensionError):
        ensemble_from_isometry(rho, torch.eye(3, dtype=DTYPE))
    with pytest.raises(DomainError):
        ensemble_from_isometry(rho, 2 * torch.eye(2, dtype=DTYPE))


@pytest.mark.parametrize("seed", range(5))
def test_random_isometries_reconstruct(seed):
    rho = random_density(9, 3, seed, split=(3, 3))
    u = _random_isometry(9, 3, 100 + seed)
    dec = ensemble_from_isometry(rho, u)
    assert dec.reconstruction_residual(rho) < 1e-9
    back = isometry_from_ensemble(rho, dec)
    assert (back - u).abs().max().item() < 1e-9
    padded = isometry_from_ensemble(rho, dec, m=12)
    assert padded.shape == (12, 3)
    assert padded[9:].abs().max().item() == 0.0


def test_isometry_from_ensemble_rejects_foreign_decomposition():
    dec = decompose_sqrt(bell_mix(0.1))
    with pytest.raises(DomainError):
        isometry_from_ensemble(bell_mix(0.3), dec)
    with pytest.raises(DomainError):
        isometry_from_ensemble(bell_mix(0.1), dec, m=1)


def test_optimizer_config():
    cfg = OptimizerConfig()
    assert cfg.resolve_size(3) == 9
    assert OptimizerConfig(ensemble_size=5).resolve_size(3) == 5
    with pytest.raises(DomainError):
        OptimizerConfig(ensemble_size=2).resolve_size(3)
    with pytest.raises(DomainError):
        OptimizerConfig(restarts=0)
    with pytest.raises(DomainError):
        OptimizerConfig(max_iters=0)
    with pytest.raises(DomainError):
        OptimizerConfig(value_tol=0.0)


def test_ef_upper_bound_pure_state(fast_config):
    result = ef_upper_bound(density_from_pure(bell_state("phi+")), fast_config)
    assert result.value == pytest.approx(1.0, abs=1e-9)
    assert result.decomposition.size == 1


def test_ef_upper_bound_bell_mix(fast_config):
    rho = bell_mix(0.25)
    result = ef_upper_bound(rho, fast_config)
    assert result.value == pytest.approx(EF_QUARTER, abs=5e-3)
    assert result.value >= ef_two_qubit(rho) - 1e-6
    assert result.decomposition.reconstruction_residual(rho) < 1e-8
    assert average_entanglement(result.decomposition) == pytest.approx(result.value, abs=1e-9)
    assert result.ensemble_size == 4


def test_ef_upper_bound_constant_subspace(fast_config):
    basis = subspace_basis(3)
    rho = random_subspace_density(basis, 2, 8)
    result = ef_upper_bound(rho, fast_config)
    assert result.value == pytest.approx(H2_THIRD, abs=1e-9)


def test_ef_upper_bound_is_deterministic(fast_config):
    rho = random_density(4, 2, 21, split=(2, 2))
    first = ef_upper_bound(rho, fast_config)
    second = ef_upper_bound(rho, fast_config)
    assert first.value == second.value
    assert first.history == second.history
    assert first.best_restart == second.best_restart


def test_ef_upper_bound_keeps_best_restart(fast_config):
    rho = random_density(6, 2, 5, split=(2, 3))
    start = average_entanglement(decompose_sqrt(rho))
    result = ef_upper_bound(rho, fast_config)
    assert len(result.history) == fast_config.restarts
    assert result.value == min(result.history)
    assert result.history[result.best_restart] == result.value
    assert result.history.index(result.value) == result.best_restart
    assert result.history[0] <= start + 1e-12


def test_more_restarts_never_worse():
    rho = random_density(6, 2, 17, split=(2, 3))
    results = [ef_upper_bound(rho, OptimizerConfig(restarts=k, max_iters=200, seed=3)) for k in range(1, 5)]
    for fewer, more in zip(results, results[1:]):
        assert more.history[:len(fewer.history)] == fewer.history
        assert more.value <= fewer.value


def test_ef_upper_bound_warm_start_never_worse(fast_config):
    rho = bell_mix(0.2)
    warm = ef_reference(rho).decomposition
    result = ef_upper_bound(rho, fast_config, initial=warm)
    assert result.history[0] <= average_entanglement(warm) + 1e-12


@pytest.mark.parametrize(
    "rho, method",
    [
        (bell_mix(0.25), "bell_mix"),
        (density_from_pure(bell_state("psi-")), "pure"),
        (random_density(4, 2, 3, split=(2, 2)), "wootters"),
        (random_density(6, 2, 3, split=(2, 3)), "variational"),
    ],
)
def test_ef_reference_methods(rho, method, fast_config):
    ref = ef_reference(rho, fast_config)
    assert ref.method == method
    assert ref.decomposition.reconstruction_residual(rho) < 1e-8


def test_ef_reference_bell_mix_value():
    ref = ef_reference(bell_mix(0.25))
    assert ref.value == pytest.approx(binary_entropy(0.5 + 3 ** 0.5 / 4), abs=1e-12)


def test_joint_state_layout():
    rho, sigma = bell_mix(0.1), density_from_pure(bell_state("phi+"))
    joint = joint_state(rho, sigma)
    assert tuple(joint.split) == (4, 4)
    assert torch.trace(joint.mat).real.item() == pytest.approx(1.0, abs=1e-12)
    reduced = partial_trace(joint.mat, joint.split, keep="A")
    expected = kron(partial_trace(rho.mat, rho.split, keep="A"), partial_trace(sigma.mat, sigma.split, keep="A"))
    assert (reduced - expected).abs().max().item() < 1e-12
    with pytest.raises(SizeError):
        big = random_density(18, 1, 0, split=(3, 6))
        joint_state(big, big)


def test_product_decomposition_realizes_joint():
    rho, sigma = bell_mix(0.1), bell_mix(0.3)
    dec = product_decomposition(rho, sigma, decompose_sqrt(rho), decompose_sqrt(sigma))
    assert dec.size == 4
    assert dec.reconstruction_residual(joint_state(rho, sigma)) < 1e-12


def test_additivity_of_pure_states(fast_config):
    phi = density_from_pure(bell_state("phi+"))
    result = additivity_gap(phi, phi, fast_config)
    assert result.gap == pytest.approx(0.0, abs=1e-6)
    assert result.joint.value == pytest.approx(2.0, abs=1e-9)


@pytest.mark.parametrize("p, q", [(0.25, 0.25), (0.1, 0.0)])
def test_additivity_of_bell_mixtures(p, q, fast_config):
    result = additivity_gap(bell_mix(p), bell_mix(q), fast_config)
    assert result.gap >= -1e-6
    assert abs(result.gap) <= 1e-2
    assert result.joint.decomposition.reconstruction_residual(joint_state(bell_mix(p), bell_mix(q))) < 1e-8


@pytest.mark.slow
def test_upper_bound_matches_two_qubit_formula():
    cfg = OptimizerConfig(restarts=20, seed=0)
    close = 0
    for seed in range(50):
        rho = random_density(4, 2 + seed % 3, 500 + seed, split=(2, 2))
        exact = ef_two_qubit(rho)
        result = ef_upper_bound(rho, cfg)
        assert result.value >= exact - 1e-6
        assert result.decomposition.reconstruction_residual(rho) < 1e-8
        close += int(result.value - exact <= 5e-3)
    assert close >= 48


@pytest.mark.slow
def test_additivity_grid_on_bell_mixtures():
    cfg = OptimizerConfig(restarts=4, max_iters=300, seed=0)
    grid = [0.1, 0.25, 0.4]
    for p in grid:
        for q in grid:
            result = additivity_gap(bell_mix(p), bell_mix(q), cfg)
            assert -1e-6 <= result.gap <= 1e-2
