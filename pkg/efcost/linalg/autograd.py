"""
Differentiable spectral maps used by the variational E_f search.

torch's generic ``eigh`` backward divides by eigenvalue gaps and blows up on the
degenerate spectra this package deals with all the time (maximally mixed
reductions, constant-entanglement subspaces). The two Functions here use
closed-form backward rules that stay finite there.
"""
import logging

import torch

from efcost.utils.constants import LOG2, PSD_CLIP

logger = logging.getLogger(__name__)

__all__ = [
    "InvSqrtPsd",
    "TraceEntropy",
    "inv_sqrt_psd",
    "polar_isometry",
    "trace_entropy",
    "ensemble_objective",
]

_GAP_TOL = 1e-12
_EIG_FLOOR = 1e-300


def _dagger(mat: torch.Tensor) -> torch.Tensor:
    return mat.transpose(-2, -1).conj()


class InvSqrtPsd(torch.autograd.Function):
    """
    ``S^{-1/2}`` for a positive definite Hermitian ``S``.

    The backward is the Daleckii-Krein formula
    ``V (D o (V^dagger G V)) V^dagger`` with ``D`` the first divided differences of
    ``x^{-1/2}`` on the spectrum (the derivative on the diagonal and for
    near-equal pairs).
    """

    @staticmethod
    def forward(ctx, mat: torch.Tensor) -> torch.Tensor:
        herm = (mat + _dagger(mat)) / 2
        evals, evecs = torch.linalg.eigh(herm)
        evals = evals.clamp_min(PSD_CLIP)
        ctx.save_for_backward(evals, evecs)
        return (evecs * evals.rsqrt().to(mat.dtype)) @ _dagger(evecs)

    @staticmethod
    def backward(ctx, grad_out: torch.Tensor) -> torch.Tensor:
        evals, evecs = ctx.saved_tensors
        g = evals.rsqrt()
        dg = -0.5 * evals.pow(-1.5)
        diff = evals.unsqueeze(-1) - evals.unsqueeze(-2)
        close = diff.abs() <= _GAP_TOL * (1.0 + evals.abs().unsqueeze(-1))
        safe = torch.where(close, torch.ones_like(diff), diff)
        divided = torch.where(
            close,
            (dg.unsqueeze(-1) + dg.unsqueeze(-2)) / 2,
            (g.unsqueeze(-1) - g.unsqueeze(-2)) / safe,
        )
        inner = _dagger(evecs) @ grad_out @ evecs
        return evecs @ (divided.to(inner.dtype) * inner) @ _dagger(evecs)


class TraceEntropy(torch.autograd.Function):
    """
    ``-sum_k tr(sigma_k log2 sigma_k)`` over a batch of PSD matrices ``sigma_k``.

    Eigenvalues are floored at a tiny positive number before the logarithm, so
    the gradient ``-(ln(sigma) + 1) / ln(2)`` stays finite on singular members.
    """

    @staticmethod
    def forward(ctx, sigma: torch.Tensor) -> torch.Tensor:
        herm = (sigma + _dagger(sigma)) / 2
        evals, evecs = torch.linalg.eigh(herm)
        evals = evals.clamp_min(_EIG_FLOOR)
        ctx.save_for_backward(evals, evecs)
        return -(evals * torch.log(evals)).sum() / LOG2

    @staticmethod
    def backward(ctx, grad_out: torch.Tensor) -> torch.Tensor:
        evals, evecs = ctx.saved_tensors
        weight = -(torch.log(evals) + 1.0) / LOG2
        grad = (evecs * weight.unsqueeze(-2).to(evecs.dtype)) @ _dagger(evecs)
        return grad * grad_out


def inv_sqrt_psd(mat: torch.Tensor) -> torch.Tensor:
    return InvSqrtPsd.apply(mat)


def trace_entropy(sigma: torch.Tensor) -> torch.Tensor:
    return TraceEntropy.apply(sigma)


def polar_isometry(z: torch.Tensor) -> torch.Tensor:
    """
    Polar projection ``Z (Z^dagger Z)^{-1/2}`` of a full-column-rank ``m x r`` matrix.

    Examples
    --------
    >>> z = torch.tensor([[2.0, 0.0], [0.0, 3.0], [0.0, 0.0]], dtype=torch.complex128)
    >>> u = polar_isometry(z)
    >>> torch.allclose(u.conj().T @ u, torch.eye(2, dtype=torch.complex128))
    True
    """
    return z @ inv_sqrt_psd(_dagger(z) @ z)


def ensemble_objective(z: torch.Tensor, scaled_eigvecs: torch.Tensor, dA: int, dB: int) -> torch.Tensor:
    """
    Average entanglement (ebits) of the ensemble generated by the isometry ``polar(z)``.

    Parameters
    ----------
    z: torch.Tensor
        Unconstrained ``m x r`` complex parameter.
    scaled_eigvecs: torch.Tensor
        ``n x r`` matrix whose column ``i`` is ``sqrt(lambda_i) e_i``.
    dA, dB: int
        Bipartite split of ``n``.

    The unnormalized members are the rows of ``U A^T``; with ``sigma_k`` the
    unnormalized A-reduction of member ``k`` and ``p_k = tr sigma_k`` the value is
    ``sum_k [S(sigma_k) + p_k log2 p_k] = sum_k p_k S(sigma_k / p_k)``.
    """
    u = polar_isometry(z)
    members = (u @ scaled_eigvecs.transpose(0, 1)).reshape(-1, dA, dB)
    sigma = members @ _dagger(members)
    weights = sigma.diagonal(dim1=-2, dim2=-1).real.sum(-1)
    weights = weights.clamp_min(_EIG_FLOOR)
    return trace_entropy(sigma) + (weights * torch.log(weights)).sum() / LOG2
