"""
Pure-state ensembles realizing a density matrix.

With ``rho = sum_i lambda_i |e_i><e_i|`` (rank ``r``), every ensemble of ``m``
unnormalized vectors realizing ``rho`` is ``|psi~_k> = sum_i U_ki sqrt(lambda_i) |e_i>``
for an ``m x r`` isometry ``U``.
"""
import logging
from typing import Optional, Tuple

import torch

from efcost.linalg import dagger, eig_hermitian
from efcost.measures import EbitValue, as_ebits, entropy_of_entanglement
from efcost.states import Decomposition, DensityMatrix, PureState
from efcost.utils.constants import DTYPE, RANK_TOL, WEIGHT_TOL
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError

logger = logging.getLogger(__name__)

__all__ = [
    "eigen_frame",
    "scaled_eigenvectors",
    "decompose_sqrt",
    "ensemble_from_isometry",
    "isometry_from_ensemble",
    "average_entanglement",
]

_ISOMETRY_TOL = 1e-9


def eigen_frame(rho: DensityMatrix) -> Tuple[torch.Tensor, torch.Tensor]:
    """Eigenvalues above ``RANK_TOL`` (descending) and their eigenvectors as columns."""
    evals, evecs = eig_hermitian(rho.mat)
    order = torch.argsort(evals, descending=True, stable=True)
    evals, evecs = evals[order], evecs[:, order]
    keep = evals > RANK_TOL
    if not bool(keep.any()):
        raise ContractViolation("Density matrix has no eigenvalue above the rank tolerance.")
    return evals[keep], evecs[:, keep]


def scaled_eigenvectors(rho: DensityMatrix) -> torch.Tensor:
    """``n x r`` matrix with columns ``sqrt(lambda_i) e_i``."""
    evals, evecs = eigen_frame(rho)
    return evecs * evals.sqrt().to(DTYPE)


def decompose_sqrt(rho: DensityMatrix) -> Decomposition:
    """
    Eigen-ensemble ``{lambda_i, |e_i>}`` over the non-negligible eigenvalues.

    Examples
    --------
    >>> from efcost.states import bell_mix
    >>> [round(w, 12) for w in decompose_sqrt(bell_mix(0.25)).weights]
    [0.75, 0.25]
    """
    evals, evecs = eigen_frame(rho)
    states = tuple(PureState(evecs[:, i], rho.split) for i in range(evecs.shape[1]))
    return Decomposition(tuple(evals.tolist()), states)


def ensemble_from_isometry(rho: DensityMatrix, u: torch.Tensor) -> Decomposition:
    """
    Ensemble generated by the ``m x r`` isometry ``u``.

    Members with weight at most ``WEIGHT_TOL`` are omitted.
    """
    a = scaled_eigenvectors(rho)
    r = a.shape[1]
    u = u.detach().to(DTYPE)
    if u.ndim != 2 or u.shape[1] != r:
        raise DimensionError(f"Isometry should have {r} columns (the rank), but has shape {tuple(u.shape)}.")
    deviation = (dagger(u) @ u - torch.eye(r, dtype=DTYPE)).abs().max().item()
    if deviation > _ISOMETRY_TOL:
        raise DomainError(f"Matrix is not an isometry: max |U^dagger U - I| is {deviation:.3e}.")
    members = u @ a.T
    weights = torch.linalg.vector_norm(members, dim=1) ** 2
    kept_w, kept_s = [], []
    for k in range(members.shape[0]):
        p = weights[k].item()
        if p <= WEIGHT_TOL:
            continue
        kept_w.append(p)
        kept_s.append(PureState(members[k] / p ** 0.5, rho.split))
    return Decomposition(tuple(kept_w), tuple(kept_s))


def isometry_from_ensemble(rho: DensityMatrix, decomposition: Decomposition, m: Optional[int] = None) -> torch.Tensor:
    """
    Inverse of ``ensemble_from_isometry``: ``U_ki = <e_i|psi~_k> / sqrt(lambda_i)``,
    zero-padded to ``m`` rows.
    """
    evals, evecs = eigen_frame(rho)
    m = decomposition.size if m is None else int(m)
    if m < decomposition.size:
        raise DomainError(f"Ensemble size {m} is smaller than the decomposition ({decomposition.size} members).")
    vecs = torch.stack([s.vec for s in decomposition.states], dim=0)
    scaled = vecs * torch.tensor(decomposition.weights, dtype=torch.float64).sqrt().to(DTYPE).unsqueeze(1)
    u = (scaled @ evecs.conj()) / evals.sqrt().to(DTYPE)
    deviation = (dagger(u) @ u - torch.eye(u.shape[1], dtype=DTYPE)).abs().max().item()
    if deviation > _ISOMETRY_TOL:
        raise DomainError(f"Decomposition does not realize the state: max |U^dagger U - I| is {deviation:.3e}.")
    padded = torch.zeros(m, u.shape[1], dtype=DTYPE)
    padded[: u.shape[0]] = u
    return padded


def average_entanglement(decomposition: Decomposition) -> EbitValue:
    return as_ebits(sum(p * entropy_of_entanglement(s) for p, s in zip(decomposition.weights, decomposition.states)))
