import logging
from dataclasses import dataclass
from typing import Sequence, Tuple

import torch

from efcost.linalg import DimSplit
from efcost.utils.constants import DTYPE
from efcost.utils.exceptions import DimensionError, DomainError

from .bipartite import DensityMatrix, PureState

logger = logging.getLogger(__name__)

__all__ = ["Decomposition"]


@dataclass(frozen=True, eq=False)
class Decomposition:
    """
    Pure-state ensemble ``{p_k, |psi_k>}``.

    Weights are non-negative and sum to one; every member shares one split.
    Whether it realizes a particular density matrix is checked with
    ``reconstruction_residual``.
    """
    weights: Tuple[float, ...]
    states: Tuple[PureState, ...]

    def __post_init__(self):
        weights = tuple(float(w) for w in self.weights)
        states = tuple(self.states)
        if not states or len(weights) != len(states):
            raise DomainError(f"A decomposition needs one weight per state, got {len(weights)} and {len(states)}.")
        if min(weights) < 0.0:
            raise DomainError(f"Decomposition weights should be non-negative, but got {min(weights):.3e}.")
        if abs(sum(weights) - 1.0) > 1e-9:
            raise DomainError(f"Decomposition weights should sum to 1, but sum to {sum(weights):.12f}.")
        split = states[0].split
        if any(s.split != split for s in states):
            raise DimensionError("All members of a decomposition should share one bipartite split.")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "states", states)

    @property
    def split(self) -> DimSplit:
        return self.states[0].split

    @property
    def size(self) -> int:
        return len(self.states)

    def density(self) -> torch.Tensor:
        vecs = torch.stack([s.vec for s in self.states], dim=1)
        w = torch.tensor(self.weights, dtype=DTYPE)
        return (vecs * w) @ vecs.conj().T

    def reconstruction_residual(self, rho: DensityMatrix) -> float:
        if rho.split != self.split:
            raise DimensionError(f"Decomposition split {tuple(self.split)} differs from the state {tuple(rho.split)}.")
        return (self.density() - rho.mat).abs().max().item()

    def to_dict(self) -> dict:
        return {
            "dims": [int(self.split.dA), int(self.split.dB)],
            "weights": list(self.weights),
            "states": [{"re": s.vec.real.tolist(), "im": s.vec.imag.tolist()} for s in self.states],
        }

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, PureState]]) -> "Decomposition":
        return cls(tuple(p for p, _ in pairs), tuple(s for _, s in pairs))
