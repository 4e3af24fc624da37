"""
Constant-entanglement subspaces.

If every state of a subspace ``V`` has the same reduced spectrum, all of them
are related by local unitaries, and every mixed state supported on ``V`` has
entanglement of formation equal to that common entropy.
"""
import logging
from typing import List, NamedTuple

import torch

from efcost.linalg import dagger
from efcost.states import DensityMatrix, SubspaceBasis, embed, random_coefficients, state_rng
from efcost.utils.constants import CONSTANCY_TOL
from efcost.utils.exceptions import DimensionError, DomainError

from .entropy import EbitValue, reduced_spectrum, shannon_entropy

logger = logging.getLogger(__name__)

__all__ = [
    "ConstancyReport",
    "constant_entanglement_check",
    "ef_constant_subspace",
]

_SUPPORT_TOL = 1e-9


class ConstancyReport(NamedTuple):
    is_constant: bool
    spectrum: List[float]
    value: EbitValue
    max_deviation: float


def constant_entanglement_check(basis: SubspaceBasis, samples: int = 64, seed: int = 0) -> ConstancyReport:
    """
    Sample random states of ``span(basis)`` and compare their reduced spectra.

    Parameters
    ----------
    basis: SubspaceBasis
    samples: int
        Number of random coefficient vectors, at least 2.
    seed: int
        Seed of the coefficient stream (``state_rng``).

    Returns
    -------
    ConstancyReport
        ``is_constant`` holds when every sorted A-side spectrum agrees with the
        first one within ``CONSTANCY_TOL``; ``spectrum`` (ascending) and ``value``
        describe the first sample.
    """
    if samples < 2:
        raise DomainError(f"Constancy needs at least 2 samples, but got {samples}.")
    rng = state_rng(seed)
    spectra = []
    for _ in range(samples):
        psi = embed(random_coefficients(basis.size, rng), basis)
        spectra.append(reduced_spectrum(psi, keep="A"))
    stacked = torch.stack(spectra)
    deviation = (stacked - stacked[0]).abs().max().item()
    reference = spectra[0]
    report = ConstancyReport(
        is_constant=deviation <= CONSTANCY_TOL,
        spectrum=reference.tolist(),
        value=shannon_entropy(reference),
        max_deviation=deviation,
    )
    logger.info(
        f"[Constancy] {basis.label or 'basis'}: constant={report.is_constant}, "
        f"max deviation {deviation:.3e} over {samples} samples"
    )
    return report


def ef_constant_subspace(rho: DensityMatrix, basis: SubspaceBasis, samples: int = 64, seed: int = 0) -> EbitValue:
    """Entanglement of formation of a state supported on a constant-entanglement subspace."""
    if rho.split != basis.ambient:
        raise DimensionError(f"State split {tuple(rho.split)} differs from the subspace ambient {tuple(basis.ambient)}.")
    proj = basis.projector()
    leak = (rho.mat - proj @ rho.mat @ dagger(proj)).abs().max().item()
    if leak > _SUPPORT_TOL:
        raise DomainError(f"State is not supported on the subspace: deviation {leak:.3e}.")
    report = constant_entanglement_check(basis, samples=samples, seed=seed)
    if not report.is_constant:
        raise DomainError(
            f"Subspace {basis.label or ''} does not have constant entanglement (deviation {report.max_deviation:.3e})."
        )
    return report.value
