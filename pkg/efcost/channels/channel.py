"""
Quantum channels in Kraus form, Choi matrices and the trace-out channel of a subspace.

Conventions: ``N(X) = sum_k K_k X K_k^dagger`` with ``K_k`` of shape ``dout x din``;
the Choi matrix is ``(id x N)(|Omega><Omega|)`` with ``|Omega> = sum_i |ii> / sqrt(din)``,
a unit-trace operator with split ``(din, dout)``.
"""
import logging
from dataclasses import dataclass
from typing import List, NamedTuple, Sequence, Tuple

import torch

from efcost.linalg import DimSplit, as_matrix, dagger, eig_hermitian, partial_transpose
from efcost.states import DensityMatrix, SubspaceBasis
from efcost.utils.constants import DTYPE, PPT_TOL, RANK_TOL, TP_TOL
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError

logger = logging.getLogger(__name__)

__all__ = [
    "QuantumChannel",
    "PptResult",
    "choi",
    "choi_from_kraus",
    "kraus_from_choi",
    "trace_out_map",
    "is_ppt",
    "matrix_units",
]


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """Completely positive trace-preserving map ``B(C^din) -> B(C^dout)`` in Kraus form."""
    din: int
    dout: int
    kraus: Tuple[torch.Tensor, ...]

    def __post_init__(self):
        din, dout = int(self.din), int(self.dout)
        if din < 1 or dout < 1:
            raise DimensionError(f"Channel dimensions should be positive, but got ({din}, {dout}).")
        kraus = tuple(as_matrix(k) for k in self.kraus)
        if not kraus:
            raise DomainError("A channel needs at least one Kraus operator.")
        for k in kraus:
            if tuple(k.shape) != (dout, din):
                raise DimensionError(f"Kraus operators should have shape ({dout}, {din}), but got {tuple(k.shape)}.")
        completeness = sum(dagger(k) @ k for k in kraus)
        deviation = (completeness - torch.eye(din, dtype=DTYPE)).abs().max().item()
        if deviation > TP_TOL:
            raise ContractViolation(f"Channel is not trace preserving: max |sum K^dagger K - I| is {deviation:.3e}.")
        object.__setattr__(self, "din", din)
        object.__setattr__(self, "dout", dout)
        object.__setattr__(self, "kraus", kraus)

    @classmethod
    def identity(cls, d: int) -> "QuantumChannel":
        return cls(d, d, (torch.eye(d, dtype=DTYPE),))

    @classmethod
    def from_choi(cls, choi_mat: torch.Tensor, din: int, dout: int) -> "QuantumChannel":
        return cls(din, dout, tuple(kraus_from_choi(choi_mat, din, dout)))

    def apply(self, x: torch.Tensor) -> torch.Tensor:
        x = as_matrix(x)
        if tuple(x.shape) != (self.din, self.din):
            raise DimensionError(f"Channel input should have shape ({self.din}, {self.din}), but got {tuple(x.shape)}.")
        return sum(k @ x @ dagger(k) for k in self.kraus)

    @property
    def rank(self) -> int:
        return len(self.kraus)


class PptResult(NamedTuple):
    passes: bool
    min_eig: float
    witness: torch.Tensor


def matrix_units(d: int) -> List[Tuple[int, int, torch.Tensor]]:
    units = []
    for i in range(d):
        for j in range(d):
            e = torch.zeros(d, d, dtype=DTYPE)
            e[i, j] = 1.0
            units.append((i, j, e))
    return units


def _choi_from_action(action, din: int, dout: int) -> torch.Tensor:
    """``(1/din) sum_ij |i><j| x N(|i><j|)`` where ``action(i, j)`` returns ``N(|i><j|)``."""
    blocks = torch.zeros(din, dout, din, dout, dtype=DTYPE)
    for i in range(din):
        for j in range(din):
            blocks[i, :, j, :] = action(i, j)
    return blocks.reshape(din * dout, din * dout) / din


def choi_from_kraus(kraus: Sequence[torch.Tensor], din: int, dout: int) -> torch.Tensor:
    vecs = [as_matrix(k).T.reshape(din * dout) for k in kraus]
    stacked = torch.stack(vecs, dim=1) / din ** 0.5
    return stacked @ dagger(stacked)


def kraus_from_choi(choi_mat: torch.Tensor, din: int, dout: int) -> List[torch.Tensor]:
    """
    Kraus operators from the eigendecomposition of a (unit-trace) Choi matrix.

    ``K_k[o, i] = sqrt(din mu_k) v_k[i * dout + o]``; eigenvalues ``mu_k`` below
    ``RANK_TOL`` are dropped.
    """
    choi_mat = as_matrix(choi_mat)
    DimSplit(din, dout).check(choi_mat.shape[0])
    evals, evecs = eig_hermitian(choi_mat)
    if evals.min().item() < -PPT_TOL:
        raise ContractViolation(f"Choi matrix is not PSD: smallest eigenvalue {evals.min().item():.3e}.")
    kraus = []
    for mu, v in zip(evals.tolist(), evecs.T):
        if mu <= RANK_TOL:
            continue
        kraus.append((din * mu) ** 0.5 * v.reshape(din, dout).T)
    return kraus


def choi(ch: QuantumChannel) -> DensityMatrix:
    """
    Choi state of a channel.

    Examples
    --------
    >>> j = choi(QuantumChannel.identity(2))
    >>> [round(x, 6) for x in j.mat.real.diagonal().tolist()]
    [0.5, 0.0, 0.0, 0.5]
    """
    mat = choi_from_kraus(ch.kraus, ch.din, ch.dout)
    return DensityMatrix(mat, DimSplit(ch.din, ch.dout))


def trace_out_map(basis: SubspaceBasis) -> QuantumChannel:
    """
    Channel ``X -> tr_B(W X W^dagger)`` on ``C^r``, ``W`` the basis isometry.

    It sends ``|a><b|`` to ``tr_B(|a>_V <b|)``; its Kraus operators are read off
    the Choi eigendecomposition.
    """
    dA, dB = basis.ambient
    r = basis.size
    members = [v.vec.reshape(dA, dB) for v in basis.vectors]

    def action(i: int, j: int) -> torch.Tensor:
        return members[i] @ dagger(members[j])

    choi_mat = _choi_from_action(action, r, dA)
    kraus = kraus_from_choi(choi_mat, r, dA)
    logger.debug(f"[Channels] trace-out map of {basis.label or 'basis'}: {len(kraus)} Kraus operators")
    return QuantumChannel(r, dA, tuple(kraus))


def is_ppt(rho: DensityMatrix, side: str = "B") -> PptResult:
    """
    Smallest eigenvalue of the partial transpose and its eigenvector.

    Examples
    --------
    >>> from efcost.states import bell_state, density_from_pure
    >>> res = is_ppt(density_from_pure(bell_state("phi+")))
    >>> res.passes, round(res.min_eig, 9)
    (False, -0.5)
    """
    evals, evecs = eig_hermitian(partial_transpose(rho.mat, rho.split, side=side))
    min_eig = evals[0].item()
    return PptResult(min_eig >= -PPT_TOL, min_eig, evecs[:, 0])
