"""
Orthonormal subspace bases of a bipartite space and the four worked examples.

Example bases (index ``i * dB + j`` for ``|i>_A |j>_B``):

* 1, ``C^2 x C^2``: ``|00>``, ``|11>``.
* 2, ``C^3 x C^3``: the antisymmetric vectors ``(|12> - |21>)/sqrt2``,
  ``(|20> - |02>)/sqrt2``, ``(|01> - |10>)/sqrt2``.
* 3, ``C^2 x C^3``: ``(|0,2> - sqrt2 |1,0>)/sqrt3``, ``-(|1,2> - sqrt2 |0,1>)/sqrt3``.
* 4, ``C^3 x C^6``: ``(|i,j> + |j,i> + sqrt2 |a,a+3>)/2`` for ``a = 0, 1, 2`` and
  ``{i, j}`` the two other values of ``A``. ``verbatim=True`` returns the third
  vector as originally printed, with ``|0>_A |5>_B`` in place of ``|2>_A |5>_B``;
  that basis is still orthonormal but its entanglement is not constant.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import torch

from efcost.linalg import DimSplit, as_vector, dagger
from efcost.utils.constants import DTYPE, ORTHONORMAL_TOL
from efcost.utils.exceptions import DimensionError, DomainError

from .bipartite import DensityMatrix, PureState, SplitLike, _as_split, _gaussian, state_rng

logger = logging.getLogger(__name__)

__all__ = [
    "SubspaceBasis",
    "EXAMPLE_IDS",
    "subspace_basis",
    "embed",
    "random_coefficients",
    "random_subspace_density",
    "example_catalogue",
]

EXAMPLE_IDS = (1, 2, 3, 4)


@dataclass(frozen=True, eq=False)
class SubspaceBasis:
    """Ordered orthonormal vectors spanning a subspace of ``C^dA x C^dB``."""
    ambient: DimSplit
    vectors: Tuple[PureState, ...]
    label: str = ""

    def __post_init__(self):
        ambient = _as_split(self.ambient)
        vectors = tuple(self.vectors)
        if not vectors:
            raise DomainError("A subspace basis needs at least one vector.")
        for v in vectors:
            if v.split != ambient:
                raise DimensionError(f"Basis vector split {tuple(v.split)} differs from the ambient {tuple(ambient)}.")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "vectors", vectors)
        residual = self.orthonormality_residual()
        if residual > ORTHONORMAL_TOL:
            raise DomainError(f"Basis vectors are not orthonormal: max |<a|b> - delta_ab| is {residual:.3e}.")

    @classmethod
    def from_columns(cls, columns: torch.Tensor, ambient: SplitLike, label: str = "") -> "SubspaceBasis":
        ambient = _as_split(ambient)
        return cls(ambient, tuple(PureState(columns[:, k], ambient) for k in range(columns.shape[1])), label)

    @property
    def size(self) -> int:
        return len(self.vectors)

    def matrix(self) -> torch.Tensor:
        """``dA*dB x r`` matrix whose columns are the basis vectors."""
        return torch.stack([v.vec for v in self.vectors], dim=1)

    def orthonormality_residual(self) -> float:
        b = self.matrix()
        gram = dagger(b) @ b
        return (gram - torch.eye(self.size, dtype=DTYPE)).abs().max().item()

    def projector(self) -> torch.Tensor:
        b = self.matrix()
        return b @ dagger(b)


def _basis_vector(terms: Sequence[Tuple[complex, int, int]], split: DimSplit) -> torch.Tensor:
    vec = torch.zeros(split.dim, dtype=DTYPE)
    for amp, a, b in terms:
        vec[a * split.dB + b] += amp
    return vec


def _example_terms(example_id: int, verbatim: bool) -> Tuple[DimSplit, List[List[Tuple[complex, int, int]]]]:
    r2, r3 = 2 ** 0.5, 3 ** 0.5
    if example_id == 1:
        return DimSplit(2, 2), [[(1.0, 0, 0)], [(1.0, 1, 1)]]
    if example_id == 2:
        return DimSplit(3, 3), [
            [(1 / r2, 1, 2), (-1 / r2, 2, 1)],
            [(1 / r2, 2, 0), (-1 / r2, 0, 2)],
            [(1 / r2, 0, 1), (-1 / r2, 1, 0)],
        ]
    if example_id == 3:
        return DimSplit(2, 3), [
            [(1 / r3, 0, 2), (-r2 / r3, 1, 0)],
            [(-1 / r3, 1, 2), (r2 / r3, 0, 1)],
        ]
    if example_id == 4:
        last = 0 if verbatim else 2
        return DimSplit(3, 6), [
            [(0.5, 1, 2), (0.5, 2, 1), (r2 / 2, 0, 3)],
            [(0.5, 2, 0), (0.5, 0, 2), (r2 / 2, 1, 4)],
            [(0.5, 0, 1), (0.5, 1, 0), (r2 / 2, last, 5)],
        ]
    raise DomainError(f"Accepted example ids are {EXAMPLE_IDS}, but the input is `{example_id}`")


def subspace_basis(example_id: int, verbatim: bool = False) -> SubspaceBasis:
    """
    Basis of one of the four example subspaces.

    Examples
    --------
    >>> basis = subspace_basis(3)
    >>> tuple(basis.ambient), basis.size
    ((2, 3), 2)
    """
    try:
        example_id = int(example_id)
    except (TypeError, ValueError):
        raise DomainError(f"Accepted example ids are {EXAMPLE_IDS}, but the input is `{example_id}`")
    split, terms = _example_terms(example_id, verbatim)
    if verbatim and example_id == 4:
        logger.warning("[States] example 4 built with the printed |0>_A|5>_B term; its entanglement is not constant")
    vectors = tuple(PureState(_basis_vector(t, split), split) for t in terms)
    label = f"example-{example_id}" + ("-verbatim" if verbatim and example_id == 4 else "")
    return SubspaceBasis(split, vectors, label)


def embed(coeffs, basis: SubspaceBasis) -> PureState:
    """
    Normalized ``sum_a c_a |a>_V`` in the ambient space.

    Examples
    --------
    >>> psi = embed([1, 1], subspace_basis(1))
    >>> [round(x, 6) for x in psi.vec.real.tolist()]
    [0.707107, 0.0, 0.0, 0.707107]
    """
    c = as_vector(coeffs)
    if c.shape[0] != basis.size:
        raise DimensionError(f"Got {c.shape[0]} coefficients for a basis of size {basis.size}.")
    return PureState.normalized(basis.matrix() @ c, basis.ambient)


def random_coefficients(size: int, rng) -> torch.Tensor:
    g = _gaussian(rng, size)
    return g / torch.linalg.vector_norm(g)


def random_subspace_density(basis: SubspaceBasis, rank: int, seed: int) -> DensityMatrix:
    """Random mixed state of the given rank supported on ``span(basis)``."""
    if rank < 1 or rank > basis.size:
        raise DomainError(f"Rank should be in [1, {basis.size}], but got {rank}.")
    g = _gaussian(state_rng(seed), (basis.size, rank))
    lifted = basis.matrix() @ g
    return DensityMatrix.from_tensor(lifted @ dagger(lifted), basis.ambient, normalize=True)


def example_catalogue() -> Dict[int, SubspaceBasis]:
    return {k: subspace_basis(k) for k in EXAMPLE_IDS}
