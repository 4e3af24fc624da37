"""
Closed forms for two qubits and for the two-Bell-state mixture.
"""
import logging
import math
from typing import Union

import torch

from efcost.linalg import DimSplit, kron, psd_sqrt
from efcost.states import BellMixParam, Decomposition, DensityMatrix, PureState, bell_state
from efcost.utils.constants import DTYPE
from efcost.utils.exceptions import DimensionError

from .entropy import EbitValue, as_ebits, binary_entropy

logger = logging.getLogger(__name__)

__all__ = [
    "concurrence",
    "ef_from_concurrence",
    "ef_two_qubit",
    "ec_bell_mix",
    "ed_hashing",
    "irreversibility_gap",
    "bell_mix_optimal_decomposition",
]

_SIGMA_Y = torch.tensor([[0, -1j], [1j, 0]], dtype=DTYPE)


def _param(param: Union[BellMixParam, float]) -> BellMixParam:
    return param if isinstance(param, BellMixParam) else BellMixParam(param)


def _check_two_qubit(rho: DensityMatrix):
    if tuple(rho.split) != (2, 2):
        raise DimensionError(f"Two-qubit formulas need the split (2, 2), but got {tuple(rho.split)}.")


def concurrence(rho: DensityMatrix) -> float:
    """
    ``max(0, l1 - l2 - l3 - l4)`` with ``l_i`` the decreasing square roots of the
    spectrum of ``sqrt(rho) rho_tilde sqrt(rho)``, ``rho_tilde = (Y x Y) rho* (Y x Y)``.

    The square roots are taken as the singular values of ``sqrt(rho) sqrt(rho_tilde)``,
    which keeps them accurate to machine precision near zero.

    Examples
    --------
    >>> from efcost.states import bell_mix
    >>> round(concurrence(bell_mix(0.25)), 9)
    0.5
    """
    _check_two_qubit(rho)
    yy = kron(_SIGMA_Y, _SIGMA_Y)
    root = psd_sqrt(rho.mat)
    flipped_root = yy @ root.conj() @ yy
    lam = sorted(torch.linalg.svdvals(root @ flipped_root).tolist(), reverse=True)
    value = lam[0] - lam[1] - lam[2] - lam[3]
    return min(max(value, 0.0), 1.0)


def ef_from_concurrence(c: float) -> EbitValue:
    c = min(max(float(c), 0.0), 1.0)
    return binary_entropy((1.0 + math.sqrt(max(1.0 - c * c, 0.0))) / 2.0)


def ef_two_qubit(rho: DensityMatrix) -> EbitValue:
    """Entanglement of formation of a two-qubit state, ``H_2((1 + sqrt(1 - C^2)) / 2)``."""
    return ef_from_concurrence(concurrence(rho))


def ec_bell_mix(param: Union[BellMixParam, float]) -> EbitValue:
    """
    Entanglement cost of the mixture, ``H_2(1/2 + sqrt(p (1 - p)))``.

    Examples
    --------
    >>> round(ec_bell_mix(0.25), 6)
    0.354579
    """
    p = _param(param).p
    return binary_entropy(0.5 + math.sqrt(p * (1.0 - p)))


def ed_hashing(param: Union[BellMixParam, float]) -> EbitValue:
    """
    Hashing value ``1 - H_2(p)`` of the distillable entanglement, clipped at 0.

    Examples
    --------
    >>> round(ed_hashing(0.25), 6)
    0.188722
    """
    p = _param(param).p
    return max(1.0 - binary_entropy(p), 0.0)


def irreversibility_gap(param: Union[BellMixParam, float]) -> float:
    param = _param(param)
    return ec_bell_mix(param) - ed_hashing(param)


def bell_mix_optimal_decomposition(param: Union[BellMixParam, float]) -> Decomposition:
    """
    Two-member ensemble ``(sqrt(1-p) |Phi+> +- sqrt(p) |Phi->)`` with weights 1/2.

    Both members have entropy of entanglement ``ec_bell_mix(p)``, so this ensemble
    attains the entanglement of formation of the mixture.
    """
    p = _param(param).p
    plus, minus = bell_state("phi+").vec, bell_state("phi-").vec
    a, b = math.sqrt(1.0 - p), math.sqrt(p)
    states = (
        PureState(a * plus + b * minus, DimSplit(2, 2)),
        PureState(a * plus - b * minus, DimSplit(2, 2)),
    )
    return Decomposition((0.5, 0.5), states)
