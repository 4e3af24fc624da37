"""
Measure-and-prepare (Holevo) forms ``X -> sum_k tr(M_k X) rho_k``.
"""
import logging
from typing import List, NamedTuple, Sequence

import torch

from efcost.linalg import as_matrix, dagger, is_hermitian, outer
from efcost.utils.constants import DTYPE, TP_TOL
from efcost.utils.exceptions import DimensionError, DomainError

from .designs import mub_two_design, qubit_six_state

logger = logging.getLogger(__name__)

__all__ = [
    "HolevoTerm",
    "check_povm",
    "holevo_apply",
    "holevo_form",
]


class HolevoTerm(NamedTuple):
    measurement: torch.Tensor
    output: torch.Tensor


def check_povm(form: Sequence[HolevoTerm]):
    """Raise ``DomainError`` unless the measurement operators are PSD and sum to the identity."""
    if not form:
        raise DomainError("A measure-and-prepare form needs at least one term.")
    din = form[0].measurement.shape[0]
    total = torch.zeros(din, din, dtype=DTYPE)
    for m, _ in form:
        m = as_matrix(m)
        if tuple(m.shape) != (din, din):
            raise DimensionError(f"Measurement operators should be {din}x{din}, but got {tuple(m.shape)}.")
        if not is_hermitian(m, TP_TOL):
            raise DomainError("Measurement operators should be Hermitian.")
        min_eig = torch.linalg.eigvalsh((m + dagger(m)) / 2).min().item()
        if min_eig < -TP_TOL:
            raise DomainError(f"Measurement operators should be PSD, but one has eigenvalue {min_eig:.3e}.")
        total = total + m
    deviation = (total - torch.eye(din, dtype=DTYPE)).abs().max().item()
    if deviation > TP_TOL:
        raise DomainError(f"Measurement operators do not sum to the identity: deviation {deviation:.3e}.")


def holevo_apply(form: Sequence[HolevoTerm], x: torch.Tensor) -> torch.Tensor:
    """
    ``sum_k tr(M_k X) rho_k``.

    Examples
    --------
    >>> plus = torch.full((2, 2), 0.5, dtype=torch.complex128)
    >>> holevo_apply(holevo_form(1), plus).real.tolist()
    [[0.5, 0.0], [0.0, 0.5]]
    """
    check_povm(form)
    x = as_matrix(x)
    din = form[0].measurement.shape[0]
    if tuple(x.shape) != (din, din):
        raise DimensionError(f"Input should have shape ({din}, {din}), but got {tuple(x.shape)}.")
    return sum(torch.trace(m @ x) * rho for m, rho in form)


def holevo_form(example_id: int) -> List[HolevoTerm]:
    """
    Explicit measure-and-prepare form of an example's trace-out channel.

    * 1: measure in the computational basis and prepare the outcome.
    * 3: six-state POVM ``|phi_i><phi_i| / 3`` with outputs ``I - |phi_i><phi_i|``.
    * 4: POVM ``conj(|phi_i><phi_i|) / 4`` over the qutrit MUB vectors with outputs
      ``|phi_i><phi_i|``.

    Example 2 is not entanglement breaking and has no such form.
    """
    if example_id == 1:
        basis = torch.eye(2, dtype=DTYPE)
        return [HolevoTerm(outer(basis[k]), outer(basis[k])) for k in range(2)]
    if example_id == 3:
        eye = torch.eye(2, dtype=DTYPE)
        return [HolevoTerm(s.projector() / 3, eye - s.projector()) for s in qubit_six_state()]
    if example_id == 4:
        return [HolevoTerm(s.projector().conj() / 4, s.projector()) for s in mub_two_design(3)]
    if example_id == 2:
        raise DomainError("Example 2 is not entanglement breaking and has no measure-and-prepare form.")
    raise DomainError(f"Accepted example ids are (1, 2, 3, 4), but the input is `{example_id}`")
