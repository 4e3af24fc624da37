"""
Complex projective 2-designs built from mutually unbiased bases.

For ``d = 3`` the four bases are the computational basis and, for ``a = 0, 1, 2``,
the vectors ``(1/sqrt3) [w^(a x^2 + b x)]_x`` (``b = 0, 1, 2``, ``w = exp(2 pi i / 3)``),
twelve vectors in that order. The qubit design is the six Pauli eigenstates.
"""
import cmath
import logging
from typing import List

import torch

from efcost.linalg import DimSplit, kron, outer
from efcost.states import PureState
from efcost.utils.constants import DTYPE
from efcost.utils.exceptions import DomainError

logger = logging.getLogger(__name__)

__all__ = [
    "mub_two_design",
    "qubit_six_state",
    "design_second_moment",
    "symmetric_projector",
    "antisymmetric_projector",
    "swap_operator",
]


def mub_two_design(d: int = 3) -> List[PureState]:
    """
    The ``d (d + 1)`` vectors of a complete set of mutually unbiased bases of ``C^d``.

    Examples
    --------
    >>> phis = mub_two_design(3)
    >>> len(phis), round(abs(phis[0].inner(phis[3])) ** 2, 12)
    (12, 0.333333333333)
    """
    if d != 3:
        raise DomainError(f"Mutually unbiased bases are only built for d = 3, but the input is `{d}`")
    omega = cmath.exp(2j * cmath.pi / d)
    vectors = [torch.eye(d, dtype=DTYPE)[k] for k in range(d)]
    for a in range(d):
        for b in range(d):
            amps = [omega ** ((a * x * x + b * x) % d) / d ** 0.5 for x in range(d)]
            vectors.append(torch.tensor(amps, dtype=DTYPE))
    return [PureState(v, DimSplit(d, 1)) for v in vectors]


def qubit_six_state() -> List[PureState]:
    """Eigenstates of Z, X and Y: ``|0>, |1>, |+>, |->, |+i>, |-i>``."""
    r = 2 ** -0.5
    amps = [[1, 0], [0, 1], [r, r], [r, -r], [r, 1j * r], [r, -1j * r]]
    return [PureState(torch.tensor(a, dtype=DTYPE), DimSplit(2, 1)) for a in amps]


def design_second_moment(design: List[PureState]) -> torch.Tensor:
    """``(1/N) sum_i |phi_i><phi_i| x |phi_i><phi_i|``."""
    return sum(kron(outer(s.vec), outer(s.vec)) for s in design) / len(design)


def swap_operator(d: int) -> torch.Tensor:
    swap = torch.zeros(d * d, d * d, dtype=DTYPE)
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return swap


def symmetric_projector(d: int) -> torch.Tensor:
    return (torch.eye(d * d, dtype=DTYPE) + swap_operator(d)) / 2


def antisymmetric_projector(d: int) -> torch.Tensor:
    return (torch.eye(d * d, dtype=DTYPE) - swap_operator(d)) / 2
