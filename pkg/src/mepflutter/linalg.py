"""Dense complex linear algebra kernel.

Kronecker products, SVD-based rank decisions and the generalized eigenvalue
solve used by every other module.  All functions are pure; arrays are never
modified in place, so values can be shared freely between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from .errors import DimensionCapError, GepConvergenceError

#: Per-side size limit for Kronecker results.  Operator determinants grow as
#: the product of all equation sizes, so failing fast beats exhausting memory.
DEFAULT_DIMENSION_CAP = 4096

#: Chordal-style threshold separating finite from infinite eigenvalue ratios.
DEFAULT_FINITE_TOL = 1e-10


def as_matrix(a, name="matrix") -> np.ndarray:
    """Coerce to a 2-d complex array and reject non-finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def default_rank_tol(shape: Tuple[int, int]) -> float:
    """Relative rank tolerance: max(rows, cols) * unit roundoff * 100."""
    return max(shape) * np.finfo(float).eps * 100.0


def kron(a, b, cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """Kronecker product with a per-side dimension cap.

    Block (i, j) of the result equals a[i, j] * b.  Raises
    :class:`DimensionCapError` with a sizing report when either result side
    would exceed ``cap``.
    """
    a = as_matrix(a, "kron operand a")
    b = as_matrix(b, "kron operand b")
    rows, cols = a.shape[0] * b.shape[0], a.shape[1] * b.shape[1]
    if max(rows, cols) > cap:
        raise DimensionCapError(
            "kron result would be %dx%d (operands %dx%d and %dx%d), "
            "exceeding the dimension cap of %d per side"
            % (rows, cols, a.shape[0], a.shape[1], b.shape[0], b.shape[1], cap),
            requested=(rows, cols),
            cap=cap,
        )
    return np.kron(a, b)


def kron_chain(mats, cap: int = DEFAULT_DIMENSION_CAP) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    out = None
    for m in mats:
        out = as_matrix(m) if out is None else kron(out, m, cap=cap)
    if out is None:
        raise ValueError("kron_chain needs at least one matrix")
    return out


@dataclass
class GepSolution:
    """All eigenvalue ratio pairs of a pencil (A, B).

    Eigenvalue i equals ``alphas[i] / betas[i]`` when ``finite_mask[i]`` is
    set; infinite eigenvalues stay as ratio pairs and are never collapsed to
    inf floats.  Eigenvectors are columns, normalized to unit 2-norm.
    """

    alphas: np.ndarray
    betas: np.ndarray
    finite_mask: np.ndarray
    right_vectors: np.ndarray
    left_vectors: Optional[np.ndarray] = None

    @property
    def n(self) -> int:
        return len(self.alphas)

    def finite_values(self) -> Tuple[np.ndarray, np.ndarray]:
        """Finite eigenvalues and their indices into the ratio arrays."""
        idx = np.flatnonzero(self.finite_mask)
        return self.alphas[idx] / self.betas[idx], idx


def solve_gep(A, B, want_left: bool = False,
              finite_tol: float = DEFAULT_FINITE_TOL) -> GepSolution:
    """Solve the generalized eigenvalue problem A z = lambda B z by QZ.

    Returns every ratio pair (alpha, beta); pairs with
    ``|beta| <= finite_tol * hypot(|alpha|, |beta|)`` are flagged infinite
    rather than dropped.  Right (and optionally left) eigenvectors are
    renormalized to unit 2-norm.
    """
    A = as_matrix(A, "A")
    B = as_matrix(B, "B")
    if A.shape[0] != A.shape[1] or B.shape[0] != B.shape[1]:
        raise ValueError("solve_gep requires square matrices, got %s and %s"
                         % (A.shape, B.shape))
    if A.shape != B.shape:
        raise ValueError("solve_gep requires equal sizes, got %s and %s"
                         % (A.shape, B.shape))
    try:
        if want_left:
            ab, vl, vr = sla.eig(A, B, left=True, right=True,
                                 homogeneous_eigvals=True)
        else:
            ab, vr = sla.eig(A, B, right=True, homogeneous_eigvals=True)
            vl = None
    except sla.LinAlgError as exc:  # pragma: no cover - backend dependent
        raise GepConvergenceError("QZ iteration failed: %s" % exc,
                                  info=str(exc)) from exc
    alphas, betas = np.asarray(ab[0]), np.asarray(ab[1])
    scale = np.hypot(np.abs(alphas), np.abs(betas))
    finite = np.abs(betas) > finite_tol * np.where(scale > 0, scale, 1.0)
    norms = np.linalg.norm(vr, axis=0)
    vr = vr / np.where(norms > 0, norms, 1.0)
    if vl is not None:
        norms = np.linalg.norm(vl, axis=0)
        vl = vl / np.where(norms > 0, norms, 1.0)
    return GepSolution(alphas=alphas, betas=betas, finite_mask=finite,
                       right_vectors=vr, left_vectors=vl)


def gep_residual(A, B, value: complex, vector: np.ndarray) -> float:
    """Relative residual ||(A - lambda B) z|| / (||A||_F + |lambda| ||B||_F)."""
    num = np.linalg.norm(A @ vector - value * (B @ vector))
    den = np.linalg.norm(A, "fro") + abs(value) * np.linalg.norm(B, "fro")
    return float(num / den) if den > 0 else float(num)


def numerical_rank(A, rel_tol: Optional[float] = None):
    """Numerical rank and orthonormal bases from an SVD.

    Args:
        A: matrix to factor.
        rel_tol: singular values above ``rel_tol * sigma_max`` count toward
            the rank.  Defaults to :func:`default_rank_tol`.

    Returns:
        ``(rank, row_basis, col_basis, null_basis)`` where the bases hold
        orthonormal columns spanning the row space, column space and right
        null space respectively.
    """
    A = as_matrix(A, "A")
    if rel_tol is None:
        rel_tol = default_rank_tol(A.shape)
    if not 0.0 < rel_tol < 1.0:
        raise ValueError("rel_tol must lie in (0, 1), got %g" % rel_tol)
    U, s, Vh = np.linalg.svd(A)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.count_nonzero(s > rel_tol * s[0]))
    row_basis = Vh[:rank].conj().T
    col_basis = U[:, :rank]
    null_basis = Vh[rank:].conj().T
    return rank, row_basis, col_basis, null_basis
