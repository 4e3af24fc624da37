"""
Bipartite state value types and constructors.

Amplitude ``|i>_A |j>_B`` sits at index ``i * dB + j`` of a state vector.
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
import torch

from efcost.linalg import DimSplit, as_matrix, as_vector, dagger, is_hermitian, max_abs_diff, outer
from efcost.utils.constants import DTYPE, HERMITIAN_TOL, NORM_TOL, PSD_CLIP, TRACE_TOL
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError

logger = logging.getLogger(__name__)

__all__ = [
    "PureState",
    "DensityMatrix",
    "BellMixParam",
    "BELL_KINDS",
    "bell_state",
    "bell_mix",
    "density_from_pure",
    "mixture",
    "random_pure",
    "random_density",
    "state_rng",
]

SplitLike = Union[DimSplit, Tuple[int, int], Sequence[int]]


def _as_split(split: SplitLike) -> DimSplit:
    if isinstance(split, DimSplit):
        return split
    split = tuple(int(d) for d in split)
    if len(split) != 2:
        raise DimensionError(f"A bipartite split has two dimensions, but got {split}.")
    return DimSplit(*split)


@dataclass(frozen=True, eq=False)
class PureState:
    """Unit vector tagged with its bipartite split."""
    vec: torch.Tensor
    split: DimSplit

    def __post_init__(self):
        vec = as_vector(self.vec)
        split = _as_split(self.split).check(vec.shape[0])
        norm = torch.linalg.vector_norm(vec).item()
        if abs(norm - 1.0) > NORM_TOL:
            raise ContractViolation(f"A pure state should have unit norm, but the norm is {norm:.12f}.")
        object.__setattr__(self, "vec", vec)
        object.__setattr__(self, "split", split)

    @classmethod
    def normalized(cls, vec: torch.Tensor, split: SplitLike) -> "PureState":
        vec = as_vector(vec)
        norm = torch.linalg.vector_norm(vec).item()
        if norm <= NORM_TOL:
            raise DomainError("Cannot normalize a zero vector.")
        return cls(vec / norm, _as_split(split))

    @property
    def dim(self) -> int:
        return self.vec.shape[0]

    def projector(self) -> torch.Tensor:
        return outer(self.vec)

    def inner(self, other: "PureState") -> complex:
        return torch.vdot(self.vec, other.vec).item()


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator tagged with its bipartite split."""
    mat: torch.Tensor
    split: DimSplit

    def __post_init__(self):
        mat = as_matrix(self.mat)
        if mat.shape[0] != mat.shape[1]:
            raise DimensionError(f"A density matrix should be square, but got shape {tuple(mat.shape)}.")
        split = _as_split(self.split).check(mat.shape[0])
        if not is_hermitian(mat, HERMITIAN_TOL):
            raise ContractViolation(
                f"A density matrix should be Hermitian; max |rho - rho^dagger| is {max_abs_diff(mat, dagger(mat)):.3e}."
            )
        trace = torch.trace(mat).real.item()
        if abs(trace - 1.0) > TRACE_TOL:
            raise ContractViolation(f"A density matrix should have unit trace, but the trace is {trace:.12f}.")
        mat = (mat + dagger(mat)) / 2
        min_eig = torch.linalg.eigvalsh(mat).min().item()
        if min_eig < -PSD_CLIP:
            raise ContractViolation(f"A density matrix should be PSD, but its smallest eigenvalue is {min_eig:.3e}.")
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "split", split)

    @classmethod
    def from_tensor(cls, mat, split: SplitLike, normalize: bool = False) -> "DensityMatrix":
        """Build from any array-like; ``normalize`` divides by the trace first."""
        mat = as_matrix(mat)
        if normalize:
            trace = torch.trace(mat).real.item()
            if trace <= 0:
                raise DomainError(f"Cannot normalize an operator with trace {trace:.3e}.")
            mat = mat / trace
        return cls(mat, _as_split(split))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def spectrum(self) -> torch.Tensor:
        return torch.linalg.eigvalsh(self.mat)

    def rank(self, tol: float = 1e-10) -> int:
        return int((self.spectrum() > tol).sum().item())


@dataclass(frozen=True)
class BellMixParam:
    """Mixing weight ``p`` of the two-Bell-state mixture, restricted to ``[0, 1/2]``."""
    p: float

    def __post_init__(self):
        p = float(self.p)
        if not np.isfinite(p) or p < 0.0 or p > 0.5:
            raise DomainError(f"Accepted mixing weights are in [0, 1/2], but the input is `{self.p}`")
        object.__setattr__(self, "p", p)


BELL_KINDS = ("phi+", "phi-", "psi+", "psi-")
_BELL_ALIASES = {"Φ+": "phi+", "Φ-": "phi-", "Φ−": "phi-", "Ψ+": "psi+", "Ψ-": "psi-", "Ψ−": "psi-"}


def bell_state(kind: str = "phi+") -> PureState:
    """
    One of the four Bell states on two qubits.

    Examples
    --------
    >>> [round(x, 6) for x in bell_state("phi-").vec.real.tolist()]
    [0.707107, 0.0, 0.0, -0.707107]
    """
    key = _BELL_ALIASES.get(kind, str(kind).lower())
    amp = 2 ** -0.5
    table = {
        "phi+": [amp, 0, 0, amp],
        "phi-": [amp, 0, 0, -amp],
        "psi+": [0, amp, amp, 0],
        "psi-": [0, amp, -amp, 0],
    }
    if key not in table:
        raise DomainError(f"Accepted Bell states are {BELL_KINDS}, but the input is `{kind}`")
    return PureState(torch.tensor(table[key], dtype=DTYPE), DimSplit(2, 2))


def bell_mix(param: Union[BellMixParam, float]) -> DensityMatrix:
    """``(1 - p) |Phi+><Phi+| + p |Phi-><Phi-|``."""
    if not isinstance(param, BellMixParam):
        param = BellMixParam(param)
    p = param.p
    mat = (1 - p) * bell_state("phi+").projector() + p * bell_state("phi-").projector()
    return DensityMatrix(mat, DimSplit(2, 2))


def density_from_pure(state: PureState) -> DensityMatrix:
    return DensityMatrix(state.projector(), state.split)


def mixture(weights: Sequence[float], states: Sequence[PureState]) -> DensityMatrix:
    """``sum_k p_k |psi_k><psi_k|`` for a normalized probability vector."""
    if len(weights) != len(states) or not states:
        raise DomainError(f"Got {len(weights)} weights for {len(states)} states.")
    weights = [float(w) for w in weights]
    if min(weights) < 0 or abs(sum(weights) - 1.0) > TRACE_TOL:
        raise DomainError(f"Mixture weights should be a probability vector, but got {weights}.")
    split = states[0].split
    mat = torch.zeros(split.dim, split.dim, dtype=DTYPE)
    for w, s in zip(weights, states):
        if s.split != split:
            raise DimensionError(f"Mixed splits {tuple(split)} and {tuple(s.split)}.")
        mat = mat + w * s.projector()
    return DensityMatrix(mat, split)


def state_rng(seed: int) -> np.random.Generator:
    """PCG64 stream used by every random state constructor: ``default_rng(SeedSequence(seed))``."""
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def _gaussian(rng: np.random.Generator, shape) -> torch.Tensor:
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return torch.from_numpy(real + 1j * imag).to(DTYPE)


def random_pure(
        dim: int,
        seed: int,
        split: Optional[SplitLike] = None,
        rng: Optional[np.random.Generator] = None,
) -> PureState:
    """
    Haar-random pure state: a normalized vector of i.i.d. standard complex Gaussians.

    ``split`` defaults to ``(dim, 1)``. Passing ``rng`` draws from an existing
    stream instead of ``state_rng(seed)``.
    """
    if dim < 1:
        raise DomainError(f"Dimension should be positive, but got {dim}.")
    split = DimSplit(dim, 1) if split is None else _as_split(split)
    split.check(dim)
    rng = state_rng(seed) if rng is None else rng
    return PureState.normalized(_gaussian(rng, dim), split)


def random_density(
        dim: int,
        rank: int,
        seed: int,
        split: Optional[SplitLike] = None,
        rng: Optional[np.random.Generator] = None,
) -> DensityMatrix:
    """Random mixed state ``G G^dagger / tr(G G^dagger)`` with ``G`` a ``dim x rank`` complex Gaussian."""
    if dim < 1:
        raise DomainError(f"Dimension should be positive, but got {dim}.")
    if rank < 1 or rank > dim:
        raise DomainError(f"Rank should be in [1, {dim}], but got {rank}.")
    split = DimSplit(dim, 1) if split is None else _as_split(split)
    split.check(dim)
    rng = state_rng(seed) if rng is None else rng
    g = _gaussian(rng, (dim, rank))
    return DensityMatrix.from_tensor(g @ dagger(g), split, normalize=True)
