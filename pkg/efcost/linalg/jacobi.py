"""
Cyclic Jacobi eigensolver for complex Hermitian matrices.

Each rotation first removes the phase of ``a[p, q]`` with a diagonal unitary and
then applies the real symmetric Jacobi rotation that zeroes it; sweeps visit
every ``p < q`` pair until the off-diagonal Frobenius norm reaches the
roundoff floor ``n * eps * ||A||_F``.
"""
import logging
from typing import Optional, Tuple

import numpy as np
import torch

from efcost.utils.constants import DTYPE, REAL_DTYPE
from efcost.utils.exceptions import ContractViolation

logger = logging.getLogger(__name__)

__all__ = ["jacobi_eigh"]

_EPS = np.finfo(np.float64).eps


def _off_norm(a: np.ndarray) -> float:
    return float(np.sqrt(max(np.sum(np.abs(a) ** 2) - np.sum(np.abs(np.diag(a)) ** 2), 0.0)))


def jacobi_eigh(
        mat: torch.Tensor,
        tol: Optional[float] = None,
        max_sweeps: int = 100,
) -> Tuple[torch.Tensor, torch.Tensor]:
    """
    Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Parameters
    ----------
    mat: torch.Tensor
        Hermitian matrix (not checked here; ``eig_hermitian`` validates).
    tol: float
        Threshold on the off-diagonal norm relative to the Frobenius norm.
        Defaults to ``n * eps``.
    max_sweeps: int
        Upper bound on full cyclic sweeps.

    Examples
    --------
    >>> h = torch.tensor([[2.0, 1j], [-1j, 2.0]], dtype=torch.complex128)
    >>> [round(x, 12) for x in jacobi_eigh(h)[0].tolist()]
    [1.0, 3.0]
    """
    h = mat.detach().cpu().numpy().astype(np.complex128)
    a = h.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    tol = n * _EPS if tol is None else float(tol)
    floor = _EPS * _EPS * scale

    converged = scale == 0.0
    sweep = 0
    while not converged and sweep < max_sweeps:
        sweep += 1
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= _EPS * np.sqrt(abs(a[p, p].real * a[q, q].real)) or mag <= floor:
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = D R with D = diag(1, conj(phase)) on (p, q)
                g = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]], dtype=np.complex128)
                cols = [p, q]
                a[:, cols] = a[:, cols] @ g
                a[cols, :] = g.conj().T @ a[cols, :]
                v[:, cols] = v[:, cols] @ g
                a[p, q] = 0.0
                a[q, p] = 0.0
        converged = _off_norm(a) <= tol * scale
    if not converged:
        raise ContractViolation(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps: off-diagonal norm {_off_norm(a):.3e}."
        )
    logger.debug(f"[Jacobi] dimension {n} converged after {sweep} sweeps")

    # Rayleigh quotients against the input, not the rotated copy
    evals = np.real(np.einsum("ij,ik,kj->j", v.conj(), h, v))
    order = np.argsort(evals, kind="stable")
    return (
        torch.from_numpy(evals[order].copy()).to(REAL_DTYPE),
        torch.from_numpy(v[:, order].copy()).to(DTYPE),
    )
