"""
Entropies in ebits (log base 2) with ``0 log 0 := 0``.
"""
import logging
from typing import Sequence, Union

import numpy as np
import torch
from scipy.special import entr

from efcost.linalg import as_matrix, eig_hermitian, outer, partial_trace, partial_trace_multi
from efcost.states import DensityMatrix, PureState
from efcost.utils.constants import LOG2, PSD_CLIP
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError

logger = logging.getLogger(__name__)

__all__ = [
    "EbitValue",
    "as_ebits",
    "binary_entropy",
    "shannon_entropy",
    "von_neumann_entropy",
    "reduced_spectrum",
    "entropy_of_entanglement",
    "ssa_check",
]

EbitValue = float

_EBIT_FLOOR = 1e-12
_SSA_TOL = 1e-9


def as_ebits(value: float) -> EbitValue:
    """Check an entanglement value and clip tiny negatives to 0."""
    value = float(value)
    if not np.isfinite(value):
        raise ContractViolation(f"Entanglement value is not finite: {value}.")
    if value < -_EBIT_FLOOR:
        raise ContractViolation(f"Entanglement value should be non-negative, but got {value:.3e}.")
    return max(value, 0.0)


def binary_entropy(x: float) -> EbitValue:
    """
    ``H_2(x) = -x log2 x - (1 - x) log2 (1 - x)``.

    Examples
    --------
    >>> round(binary_entropy(0.5), 12)
    1.0
    >>> round(binary_entropy(1 / 3), 6)
    0.918296
    """
    x = float(x)
    if not np.isfinite(x) or x < -_EBIT_FLOOR or x > 1.0 + _EBIT_FLOOR:
        raise DomainError(f"Accepted arguments of H_2 are in [0, 1], but the input is `{x}`")
    x = min(max(x, 0.0), 1.0)
    return as_ebits((entr(x) + entr(1.0 - x)) / LOG2)


def shannon_entropy(probs: Union[Sequence[float], np.ndarray, torch.Tensor]) -> EbitValue:
    if isinstance(probs, torch.Tensor):
        probs = probs.detach().cpu().numpy()
    probs = np.clip(np.asarray(probs, dtype=np.float64), 0.0, None)
    return as_ebits(entr(probs).sum() / LOG2)


def _spectrum(mat: torch.Tensor) -> torch.Tensor:
    evals, _ = eig_hermitian(mat)
    if evals.numel() and evals.min().item() < -PSD_CLIP:
        raise ContractViolation(f"Operator is not positive semidefinite: smallest eigenvalue {evals.min().item():.3e}.")
    return evals.clamp_min(0.0)


def von_neumann_entropy(rho: Union[DensityMatrix, torch.Tensor]) -> EbitValue:
    """
    ``-sum_i lambda_i log2 lambda_i``; accepts a ``DensityMatrix`` or a raw PSD matrix.

    Examples
    --------
    >>> round(von_neumann_entropy(torch.diag(torch.tensor([0.5, 0.25, 0.25]))), 12)
    1.5
    """
    mat = rho.mat if isinstance(rho, DensityMatrix) else as_matrix(rho)
    return shannon_entropy(_spectrum(mat))


def reduced_spectrum(psi: PureState, keep: str = "A") -> torch.Tensor:
    """Ascending eigenvalues of the reduced state of ``psi`` on factor ``keep``."""
    reduced = partial_trace(psi.projector(), psi.split, keep=keep)
    return _spectrum(reduced)


def entropy_of_entanglement(psi: PureState, keep: str = "A") -> EbitValue:
    """
    Von Neumann entropy of either reduction of a bipartite pure state.

    Examples
    --------
    >>> from efcost.states import bell_state
    >>> round(entropy_of_entanglement(bell_state("phi+")), 12)
    1.0
    """
    return shannon_entropy(reduced_spectrum(psi, keep))


def ssa_check(psi: Union[PureState, torch.Tensor], dims: Sequence[int]) -> float:
    """
    ``S(12) + S(23) - S(123) - S(2)`` for a tripartite pure state.

    Strong subadditivity says this is never negative; a value below ``-1e-9``
    raises ``ContractViolation``.
    """
    dims = [int(d) for d in dims]
    if len(dims) != 3 or min(dims) < 1:
        raise DimensionError(f"Expected three positive factor dimensions, but got {dims}.")
    vec = psi.vec if isinstance(psi, PureState) else torch.as_tensor(psi)
    if vec.ndim != 1 or vec.shape[0] != int(np.prod(dims)):
        raise DimensionError(f"State of shape {tuple(vec.shape)} does not match factors {dims}.")
    rho = outer(vec.to(torch.complex128))
    s12 = von_neumann_entropy(partial_trace_multi(rho, dims, [0, 1]))
    s23 = von_neumann_entropy(partial_trace_multi(rho, dims, [1, 2]))
    s2 = von_neumann_entropy(partial_trace_multi(rho, dims, [1]))
    s123 = von_neumann_entropy(rho)
    value = s12 + s23 - s123 - s2
    if value < -_SSA_TOL:
        raise ContractViolation(f"Strong subadditivity violated by {value:.3e}.")
    return value
