"""
Multi-start search for the entanglement of formation.

The search variable is an unconstrained complex ``m x r`` matrix ``Z``; its
polar factor ``Z (Z^dagger Z)^{-1/2}`` is the isometry that generates the
ensemble. Each restart runs L-BFGS-B on the real and imaginary parts of ``Z``
with the gradient from torch autograd. Restart 0 starts from the eigen-ensemble
(or a supplied warm start); restart ``i > 0`` starts from a complex Gaussian
drawn from stream ``i`` of ``SeedSequence(seed).spawn(restarts)``.
"""
import logging
from dataclasses import asdict, dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
import torch
from scipy.optimize import minimize
from tqdm import tqdm

from efcost.linalg import ensemble_objective, max_abs_diff
from efcost.measures import EbitValue, bell_mix_optimal_decomposition, entropy_of_entanglement, ef_two_qubit
from efcost.states import Decomposition, DensityMatrix, bell_mix
from efcost.utils.constants import DTYPE
from efcost.utils.exceptions import ContractViolation, DomainError
from efcost.utils.helper import spawn_generators

from .ensembles import (
    average_entanglement,
    decompose_sqrt,
    ensemble_from_isometry,
    isometry_from_ensemble,
    scaled_eigenvectors,
)

logger = logging.getLogger(__name__)

__all__ = [
    "OptimizerConfig",
    "EfResult",
    "EfReference",
    "ef_upper_bound",
    "ef_reference",
]

_FEASIBILITY_TOL = 1e-8


@dataclass(frozen=True)
class OptimizerConfig:
    """
    Settings of the variational search.

    ensemble_size: members of the searched ensemble; ``None`` means ``rank**2``.
    restarts: independent starting points (at least 1).
    max_iters: L-BFGS-B iteration cap per restart.
    value_tol: L-BFGS-B ``ftol`` (relative decrease of the objective).
    step_tol: L-BFGS-B ``gtol`` (projected gradient).
    seed: root of the restart streams.
    verbose: show a progress bar over restarts.
    """
    ensemble_size: Optional[int] = None
    restarts: int = 8
    max_iters: int = 500
    value_tol: float = 1e-12
    step_tol: float = 1e-9
    seed: int = 0
    verbose: bool = False

    def __post_init__(self):
        if self.ensemble_size is not None and int(self.ensemble_size) < 1:
            raise DomainError(f"ensemble_size should be positive, but the input is `{self.ensemble_size}`")
        if int(self.restarts) < 1:
            raise DomainError(f"restarts should be at least 1, but the input is `{self.restarts}`")
        if int(self.max_iters) < 1:
            raise DomainError(f"max_iters should be at least 1, but the input is `{self.max_iters}`")
        if not (self.value_tol > 0 and self.step_tol > 0):
            raise DomainError(f"Tolerances should be positive, got value_tol={self.value_tol}, step_tol={self.step_tol}")

    def resolve_size(self, rank: int) -> int:
        m = rank * rank if self.ensemble_size is None else int(self.ensemble_size)
        if m < rank:
            raise DomainError(f"ensemble_size {m} is below the rank {rank} of the state.")
        return m

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True, eq=False)
class EfResult:
    """Best ensemble found by ``ef_upper_bound``; ``value`` is its average entanglement."""
    value: EbitValue
    decomposition: Decomposition
    restarts_converged: int
    history: Tuple[float, ...]
    best_restart: int = 0
    ensemble_size: int = 1

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "restarts_converged": self.restarts_converged,
            "best_restart": self.best_restart,
            "ensemble_size": self.ensemble_size,
            "history": list(self.history),
            "decomposition": self.decomposition.to_dict(),
        }


class EfReference(NamedTuple):
    value: EbitValue
    decomposition: Decomposition
    method: str


def _polar(z: torch.Tensor) -> torch.Tensor:
    w, _, vh = torch.linalg.svd(z, full_matrices=False)
    return w @ vh


class _Objective:
    """Objective value and gradient on the flattened real view of ``Z``."""

    def __init__(self, scaled: torch.Tensor, m: int, dA: int, dB: int):
        self.scaled = scaled
        self.shape = (m, scaled.shape[1])
        self.dA, self.dB = dA, dB
        self.calls = 0

    def to_z(self, x: np.ndarray) -> torch.Tensor:
        return torch.view_as_complex(torch.from_numpy(x).reshape(*self.shape, 2))

    @staticmethod
    def to_x(z: torch.Tensor) -> np.ndarray:
        return torch.view_as_real(z.to(DTYPE)).reshape(-1).numpy().copy()

    def __call__(self, x: np.ndarray) -> Tuple[float, np.ndarray]:
        self.calls += 1
        params = torch.tensor(x, dtype=torch.float64, requires_grad=True)
        z = torch.view_as_complex(params.reshape(*self.shape, 2))
        value = ensemble_objective(z, self.scaled, self.dA, self.dB)
        value.backward()
        return value.item(), params.grad.numpy().copy()


def _gaussian_start(rng: np.random.Generator, shape) -> torch.Tensor:
    return torch.from_numpy(rng.standard_normal(shape) + 1j * rng.standard_normal(shape)).to(DTYPE)


def ef_upper_bound(
        rho: DensityMatrix,
        cfg: Optional[OptimizerConfig] = None,
        initial: Optional[Decomposition] = None,
) -> EfResult:
    """
    Best average entanglement found over ensembles realizing ``rho``.

    Parameters
    ----------
    rho: DensityMatrix
    cfg: OptimizerConfig
        Defaults to ``OptimizerConfig()``.
    initial: Decomposition
        Optional warm start for restart 0 (must realize ``rho``).

    Returns
    -------
    EfResult
        The value is an upper bound on the entanglement of formation and is never
        above the value of the starting ensemble of restart 0. Ties between
        restarts go to the lowest restart index.
    """
    cfg = OptimizerConfig() if cfg is None else cfg
    scaled = scaled_eigenvectors(rho)
    rank = scaled.shape[1]
    m = cfg.resolve_size(rank)
    if initial is not None:
        m = max(m, initial.size)
    dA, dB = rho.split

    if rank == 1:
        dec = decompose_sqrt(rho)
        value = entropy_of_entanglement(dec.states[0])
        logger.info(f"[EfSearch] pure state, value {value:.9f}")
        return EfResult(value, dec, cfg.restarts, (value,) * cfg.restarts, 0, 1)

    objective = _Objective(scaled, m, dA, dB)
    streams = spawn_generators(cfg.seed, cfg.restarts)
    if initial is not None:
        start = isometry_from_ensemble(rho, initial, m)
    else:
        start = torch.zeros(m, rank, dtype=DTYPE)
        start[:rank] = torch.eye(rank, dtype=DTYPE)

    best: Optional[Tuple[float, Decomposition, int]] = None
    history, converged = [], 0
    for idx in tqdm(range(cfg.restarts), desc="[EfSearch] restarts", disable=not cfg.verbose):
        z0 = start if idx == 0 else _gaussian_start(streams[idx], (m, rank))
        x0 = objective.to_x(z0)
        f0, _ = objective(x0)
        res = minimize(
            objective, x0, jac=True, method="L-BFGS-B",
            options={"maxiter": cfg.max_iters, "ftol": cfg.value_tol, "gtol": cfg.step_tol},
        )
        converged += int(res.success)
        x = res.x if res.fun <= f0 else x0
        dec = ensemble_from_isometry(rho, _polar(objective.to_z(x)))
        value = average_entanglement(dec)
        history.append(value)
        logger.debug(f"[EfSearch] restart {idx}: start {f0:.9f}, end {value:.9f}, iterations {res.nit}, {res.message}")
        if best is None or value < best[0]:
            best = (value, dec, idx)

    value, dec, best_idx = best
    residual = dec.reconstruction_residual(rho)
    if residual > _FEASIBILITY_TOL:
        raise ContractViolation(f"Best decomposition misses the state by {residual:.3e}.")
    logger.info(
        f"[EfSearch] rank {rank}, ensemble size {m}: best {value:.9f} at restart {best_idx}, "
        f"{converged}/{cfg.restarts} converged, {objective.calls} evaluations"
    )
    return EfResult(value, dec, converged, tuple(history), best_idx, m)


def _as_bell_mix(rho: DensityMatrix) -> Optional[float]:
    if tuple(rho.split) != (2, 2):
        return None
    p = 0.5 - rho.mat[0, 3].real.item()
    if not 0.0 <= p <= 0.5:
        return None
    return p if max_abs_diff(rho.mat, bell_mix(p).mat) <= 1e-12 else None


def ef_reference(rho: DensityMatrix, cfg: Optional[OptimizerConfig] = None) -> EfReference:
    """
    Best available value of the entanglement of formation and an ensemble attaining it.

    Pure states use the entropy of entanglement; the two-Bell-state mixture uses
    its closed-form optimal ensemble; other two-qubit states use the concurrence
    formula for the value and the variational search for the ensemble; anything
    else falls back to ``ef_upper_bound``.
    """
    p = _as_bell_mix(rho)
    if p is not None:
        dec = bell_mix_optimal_decomposition(p)
        return EfReference(average_entanglement(dec), dec, "bell_mix")
    dec = decompose_sqrt(rho)
    if dec.size == 1:
        return EfReference(entropy_of_entanglement(dec.states[0]), dec, "pure")
    found = ef_upper_bound(rho, cfg)
    if tuple(rho.split) == (2, 2):
        return EfReference(ef_two_qubit(rho), found.decomposition, "wootters")
    return EfReference(found.value, found.decomposition, "variational")
