"""
Dense complex linear algebra for small bipartite operators.

Every matrix is a 2-D ``torch.Tensor`` of dtype ``complex128``; vectors are 1-D
tensors of the same dtype. Operations are pure and never modify their inputs.
"""
import logging
from typing import NamedTuple, Sequence, Tuple, Union

import numpy as np
import torch

from efcost.utils.constants import (
    DTYPE,
    EIG_RESIDUAL_TOL,
    HERMITIAN_TOL,
    MAX_KRON_DIM,
    PSD_CLIP,
)
from efcost.utils.exceptions import ContractViolation, DimensionError, DomainError, SizeError

from .jacobi import jacobi_eigh

logger = logging.getLogger(__name__)

__all__ = [
    "DimSplit",
    "as_matrix",
    "as_vector",
    "dagger",
    "is_hermitian",
    "kron",
    "outer",
    "partial_trace",
    "partial_trace_multi",
    "partial_transpose",
    "permute_subsystems",
    "eig_hermitian",
    "psd_sqrt",
    "max_abs_diff",
]

ArrayLike = Union[torch.Tensor, np.ndarray, Sequence]


class DimSplit(NamedTuple):
    """Bipartite dimension split ``(dA, dB)`` of a Hilbert space of dimension ``dA * dB``."""
    dA: int
    dB: int

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def check(self, dim: int) -> "DimSplit":
        if self.dA < 1 or self.dB < 1:
            raise DimensionError(f"Split dimensions should be positive, but got {tuple(self)}.")
        if self.dA * self.dB != dim:
            raise DimensionError(
                f"Split {tuple(self)} describes dimension {self.dA * self.dB}, but the operator has dimension {dim}."
            )
        return self

    def swapped(self) -> "DimSplit":
        return DimSplit(self.dB, self.dA)


def as_matrix(x: ArrayLike) -> torch.Tensor:
    """
    Convert ``x`` into a finite complex128 matrix.

    Examples
    --------
    >>> as_matrix([[1, 0], [0, 1]]).dtype
    torch.complex128
    """
    mat = torch.as_tensor(x, dtype=DTYPE) if not isinstance(x, torch.Tensor) else x.to(DTYPE)
    if mat.ndim != 2:
        raise DimensionError(f"Expected a 2-D matrix, but got a tensor of shape {tuple(mat.shape)}.")
    if mat.shape[0] < 1 or mat.shape[1] < 1:
        raise DimensionError(f"Matrix dimensions should be positive, but got {tuple(mat.shape)}.")
    if not bool(torch.isfinite(mat).all()):
        raise ContractViolation("Matrix has non-finite entries.")
    return mat


def as_vector(x: ArrayLike) -> torch.Tensor:
    vec = torch.as_tensor(x, dtype=DTYPE) if not isinstance(x, torch.Tensor) else x.to(DTYPE)
    if vec.ndim != 1 or vec.shape[0] < 1:
        raise DimensionError(f"Expected a non-empty 1-D vector, but got a tensor of shape {tuple(vec.shape)}.")
    if not bool(torch.isfinite(vec).all()):
        raise ContractViolation("Vector has non-finite entries.")
    return vec


def dagger(mat: torch.Tensor) -> torch.Tensor:
    return mat.transpose(-2, -1).conj()


def outer(u: torch.Tensor, v: torch.Tensor = None) -> torch.Tensor:
    """|u><v| (|u><u| when ``v`` is omitted)."""
    v = u if v is None else v
    return torch.outer(u, v.conj())


def max_abs_diff(a: torch.Tensor, b: torch.Tensor) -> float:
    return (a - b).abs().max().item()


def is_hermitian(mat: torch.Tensor, tol: float = HERMITIAN_TOL) -> bool:
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        return False
    return max_abs_diff(mat, dagger(mat)) <= tol


def kron(a: ArrayLike, b: ArrayLike) -> torch.Tensor:
    """
    Kronecker product; entry ``A[i,j] B[k,l]`` sits at ``(i*rows_B + k, j*cols_B + l)``.

    Examples
    --------
    >>> kron(torch.eye(2), torch.eye(2)).real.diagonal().tolist()
    [1.0, 1.0, 1.0, 1.0]
    """
    a, b = as_matrix(a), as_matrix(b)
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > MAX_KRON_DIM:
        raise SizeError(f"Kronecker product of shape ({rows}, {cols}) exceeds the maximum dimension {MAX_KRON_DIM}.")
    return torch.kron(a.contiguous(), b.contiguous())


def _square_split(mat: torch.Tensor, split: Tuple[int, int]) -> DimSplit:
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"Expected a square matrix, but got shape {tuple(mat.shape)}.")
    return DimSplit(*split).check(mat.shape[0])


def partial_trace(mat: torch.Tensor, split: Tuple[int, int], keep: str = "A") -> torch.Tensor:
    """
    Trace out one factor of a bipartite operator, keeping ``A`` or ``B``.

    Examples
    --------
    >>> phi = torch.tensor([1, 0, 0, 1], dtype=torch.complex128) / 2 ** 0.5
    >>> [[round(x, 12) for x in row] for row in partial_trace(outer(phi), (2, 2), keep="A").real.tolist()]
    [[0.5, 0.0], [0.0, 0.5]]
    """
    mat = as_matrix(mat)
    dA, dB = _square_split(mat, split)
    blocks = mat.reshape(dA, dB, dA, dB)
    if keep == "A":
        return torch.einsum("ijkj->ik", blocks)
    if keep == "B":
        return torch.einsum("ijil->jl", blocks)
    raise DomainError(f"Accepted `keep` are `A` and `B`, but the input is `{keep}`")


def partial_trace_multi(mat: torch.Tensor, dims: Sequence[int], keep: Sequence[int]) -> torch.Tensor:
    """Reduce an operator on ``prod(dims)`` onto the factors listed in ``keep`` (kept in the given order)."""
    mat = as_matrix(mat)
    dims = [int(d) for d in dims]
    n = len(dims)
    total = int(np.prod(dims))
    if mat.shape != (total, total):
        raise DimensionError(f"Factor dimensions {dims} describe {total}, but the operator has shape {tuple(mat.shape)}.")
    keep = [int(k) for k in keep]
    if len(set(keep)) != len(keep) or any(k < 0 or k >= n for k in keep):
        raise DomainError(f"Invalid factor selection {keep} for {n} factors.")
    traced = [k for k in range(n) if k not in keep]
    tensor = mat.reshape(dims + dims)
    # bring traced pairs to the end, then contract them one at a time
    order = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    tensor = tensor.permute(order)
    kd = int(np.prod([dims[k] for k in keep])) if keep else 1
    td = int(np.prod([dims[k] for k in traced])) if traced else 1
    tensor = tensor.reshape(kd, td, kd, td)
    return torch.einsum("ijkj->ik", tensor)


def partial_transpose(mat: torch.Tensor, split: Tuple[int, int], side: str = "B") -> torch.Tensor:
    """
    Transpose one factor of a bipartite operator.

    Examples
    --------
    >>> phi = torch.tensor([1, 0, 0, 1], dtype=torch.complex128) / 2 ** 0.5
    >>> pt = partial_transpose(outer(phi), (2, 2), side="A")
    >>> [round(x, 6) for x in torch.linalg.eigvalsh(pt).tolist()]
    [-0.5, 0.5, 0.5, 0.5]
    """
    mat = as_matrix(mat)
    dA, dB = _square_split(mat, split)
    blocks = mat.reshape(dA, dB, dA, dB)
    if side == "A":
        blocks = blocks.permute(2, 1, 0, 3)
    elif side == "B":
        blocks = blocks.permute(0, 3, 2, 1)
    else:
        raise DomainError(f"Accepted `side` are `A` and `B`, but the input is `{side}`")
    return blocks.reshape(dA * dB, dA * dB)


def permute_subsystems(x: torch.Tensor, dims: Sequence[int], perm: Sequence[int]) -> torch.Tensor:
    """
    Reorder tensor factors: factor ``perm[i]`` of the input becomes factor ``i`` of the output.

    Works on state vectors and on square operators.
    """
    dims = [int(d) for d in dims]
    perm = [int(p) for p in perm]
    n = len(dims)
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{perm} is not a permutation of {n} factors.")
    total = int(np.prod(dims))
    if x.ndim == 1:
        if x.shape[0] != total:
            raise DimensionError(f"Vector of length {x.shape[0]} does not match factors {dims}.")
        return x.reshape(dims).permute(perm).reshape(total)
    if tuple(x.shape) != (total, total):
        raise DimensionError(f"Operator of shape {tuple(x.shape)} does not match factors {dims}.")
    return x.reshape(dims + dims).permute(perm + [n + p for p in perm]).reshape(total, total)


def eig_hermitian(mat: torch.Tensor, method: str = "lapack") -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Eigendecomposition of a Hermitian matrix.

    Parameters
    ----------
    mat: torch.Tensor
        Hermitian within ``HERMITIAN_TOL`` (max entrywise ``|H - H^dagger|``).
    method: str
        ``lapack`` (``torch.linalg.eigh``) or ``jacobi`` (cyclic complex Jacobi rotations).

    Returns
    -------
    eigenvalues: torch.Tensor, float64, ascending
    eigenvectors: torch.Tensor, complex128, orthonormal columns

    Examples
    --------
    >>> evals, _ = eig_hermitian(torch.diag(torch.tensor([3.0, 1.0, 2.0])))
    >>> evals.tolist()
    [1.0, 2.0, 3.0]
    """
    mat = as_matrix(mat)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionError(f"Expected a square matrix, but got shape {tuple(mat.shape)}.")
    if not is_hermitian(mat):
        raise ContractViolation(
            f"eig_hermitian needs a Hermitian matrix; max |H - H^dagger| is {max_abs_diff(mat, dagger(mat)):.3e}."
        )
    mat = (mat + dagger(mat)) / 2
    if method == "lapack":
        evals, evecs = torch.linalg.eigh(mat)
    elif method == "jacobi":
        evals, evecs = jacobi_eigh(mat)
        residual = (mat @ evecs - evecs * evals.to(DTYPE)).abs().max().item()
        if residual > EIG_RESIDUAL_TOL * max(1.0, torch.linalg.matrix_norm(mat, ord=2).item()):
            raise ContractViolation(f"Jacobi eigenpairs miss the residual bound: max |Hv - lambda v| is {residual:.3e}.")
    else:
        raise DomainError(f"Accepted eigensolvers are `lapack` and `jacobi`, but the input is `{method}`")
    return evals, evecs


def psd_function(mat: torch.Tensor, fn, clip: float = PSD_CLIP) -> torch.Tensor:
    """Apply ``fn`` to the spectrum of a PSD matrix; eigenvalues in ``[-clip, 0)`` are treated as 0."""
    evals, evecs = eig_hermitian(mat)
    if evals.numel() and evals.min().item() < -clip:
        raise ContractViolation(f"Matrix is not positive semidefinite: smallest eigenvalue {evals.min().item():.3e}.")
    evals = evals.clamp_min(0.0)
    return (evecs * fn(evals).to(DTYPE)) @ dagger(evecs)


def psd_sqrt(mat: torch.Tensor) -> torch.Tensor:
    """
    Principal square root of a PSD matrix.

    Examples
    --------
    >>> psd_sqrt(torch.diag(torch.tensor([4.0, 9.0]))).real.diagonal().tolist()
    [2.0, 3.0]
    """
    return psd_function(mat, torch.sqrt)
