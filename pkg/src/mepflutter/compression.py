"""Regular-part extraction for singular operator-determinant pencils.

When ``Delta_0`` is rank deficient the pencils ``Delta_k - eta Delta_0`` are
singular and their raw QZ spectra are meaningless.  This module compresses
the triple (Delta_0, Delta_1, Delta_2) with an SVD staircase so that only
the finite regular eigenvalues survive:

* a column step removes the kernel of Delta_0 together with the rows spanned
  by its image under Delta_1 and Delta_2 (infinite chains); kernel directions
  annihilated by both pencils carry right singular structure and cost no rows;
* a row step is the conjugate-transposed dual.

Steps alternate until Delta_0 is square and full rank.  All transformations
are unitary; deflated blocks are truncated.  Rank decisions use a threshold
anchored to the spectral norms of the input triple: deflated blocks shrink
toward zero norm, so thresholds relative to each intermediate matrix would
mistake noise for structure.

For problems with more than two parameters only the first three determinants
are compressed and the result is flagged heuristic; the two-parameter theory
is not known to extend, but the procedure is observed to work.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .errors import SingularStructureError
from .determinants import OperatorDeterminants
from .linalg import default_rank_tol

_MAX_STAGES = 512


@dataclass
class CompressionStage:
    side: str                 # "col" or "row"
    rank: int
    size_before: tuple
    size_after: tuple
    norm_drift: float         # relative Frobenius change before truncation
    warning: Optional[str] = None

    def to_json(self) -> dict:
        out = {
            "side": self.side,
            "rank": self.rank,
            "size_before": list(self.size_before),
            "size_after": list(self.size_after),
            "norm_drift": self.norm_drift,
        }
        if self.warning:
            out["warning"] = self.warning
        return out


@dataclass
class CompressionResult:
    compressed: OperatorDeterminants
    original_size: int
    compressed_size: int
    stage_log: List[CompressionStage] = field(default_factory=list)
    heuristic_n_gt_2: bool = False

    def to_json(self) -> dict:
        return {
            "original_size": self.original_size,
            "compressed_size": self.compressed_size,
            "heuristic_n_gt_2": self.heuristic_n_gt_2,
            "stages": [s.to_json() for s in self.stage_log],
        }


def _rank_with_warning(s: np.ndarray, atol: float):
    """Count singular values above atol; flag decisions within 10x of it."""
    rank = int(np.count_nonzero(s > atol))
    ambiguous = bool(np.any((s > atol / 10.0) & (s < atol * 10.0)))
    return rank, ambiguous


def _norms(*mats) -> float:
    return float(np.sqrt(sum(np.linalg.norm(m, "fro") ** 2 for m in mats)))


def compress(d: OperatorDeterminants, rel_tol: Optional[float] = None) -> CompressionResult:
    """Extract the common regular part of the first three determinants.

    Returns a :class:`CompressionResult` whose leading determinant is square
    and full rank at the configured tolerance.  A full-rank input passes
    through untouched.  Raises :class:`SingularStructureError` when a full
    column-plus-row pass makes no progress.
    """
    if len(d.deltas) < 3:
        raise ValueError("compression needs Delta_0, Delta_1 and Delta_2")
    n0 = d.deltas[0].shape[0]
    if rel_tol is None:
        rel_tol = default_rank_tol((n0, n0))
    heuristic = d.n_params > 2

    scale = max(np.linalg.norm(x, 2) for x in d.deltas[:3])
    if scale == 0.0:
        raise SingularStructureError("all operator determinants are zero")
    atol = rel_tol * scale

    # fast path: values-only SVD, no transformation when already regular
    s = np.linalg.svd(d.deltas[0], compute_uv=False)
    if s[-1] > atol:
        return CompressionResult(
            compressed=OperatorDeterminants(
                deltas=[m.copy() for m in d.deltas[:3]],
                method=d.method, sizes=d.sizes),
            original_size=n0, compressed_size=n0,
            stage_log=[], heuristic_n_gt_2=heuristic)

    d0, d1, d2 = (np.array(d.deltas[k], dtype=complex) for k in range(3))
    log: List[CompressionStage] = []

    for _ in range(_MAX_STAGES):
        m, n = d0.shape
        if m == 0 or n == 0:
            empty = np.zeros((0, 0), dtype=complex)
            d0, d1, d2 = empty, empty.copy(), empty.copy()
            break
        U, s, Vh = np.linalg.svd(d0)
        rank, amb = _rank_with_warning(s, atol)
        if rank == m == n:
            break
        warn = "rank decision within 10x of tolerance" if amb else None
        progressed = False

        if rank < n:
            # column step: drop ker(Delta_0) columns and the joint image rows
            V = Vh.conj().T
            V1, V2 = V[:, :rank], V[:, rank:]
            T = np.hstack([d1 @ V2, d2 @ V2])
            if min(T.shape):
                UT, sT, _ = np.linalg.svd(T)
            else:
                UT, sT = np.eye(m, dtype=complex), np.array([])
            rT, ambT = _rank_with_warning(sT, atol)
            if ambT and warn is None:
                warn = "rank decision within 10x of tolerance"
            U2 = UT[:, rT:]
            before = _norms(d0, d1, d2)
            after = _norms(*(UT.conj().T @ x @ V for x in (d0, d1, d2)))
            drift = abs(after - before) / before if before > 0 else 0.0
            nd0 = U2.conj().T @ d0 @ V1
            nd1 = U2.conj().T @ d1 @ V1
            nd2 = U2.conj().T @ d2 @ V1
            log.append(CompressionStage("col", rank, (m, n), nd0.shape,
                                        float(drift), warn))
            if nd0.shape != (m, n):
                d0, d1, d2 = nd0, nd1, nd2
                progressed = True

        if not progressed and rank < m:
            # row step: dual of the column step on the conjugate transpose
            U1, U2 = U[:, :rank], U[:, rank:]
            T = np.vstack([U2.conj().T @ d1, U2.conj().T @ d2])
            if min(T.shape):
                _, sT, VhT = np.linalg.svd(T)
            else:
                VhT, sT = np.eye(n, dtype=complex), np.array([])
            rT, ambT = _rank_with_warning(sT, atol)
            if ambT and warn is None:
                warn = "rank decision within 10x of tolerance"
            Vk = VhT[rT:].conj().T
            before = _norms(d0, d1, d2)
            after = _norms(*(U.conj().T @ x @ VhT.conj().T for x in (d0, d1, d2)))
            drift = abs(after - before) / before if before > 0 else 0.0
            nd0 = U1.conj().T @ d0 @ Vk
            nd1 = U1.conj().T @ d1 @ Vk
            nd2 = U1.conj().T @ d2 @ Vk
            log.append(CompressionStage("row", rank, (m, n), nd0.shape,
                                        float(drift), warn))
            if nd0.shape != (m, n):
                d0, d1, d2 = nd0, nd1, nd2
                progressed = True

        if not progressed:
            raise SingularStructureError(
                "compression stalled at shape %s with rank %d"
                % (d0.shape, rank),
                stage_log=[st.to_json() for st in log])

    if d0.shape[0] != d0.shape[1]:
        raise SingularStructureError(
            "compression ended non-square at shape %s" % (d0.shape,),
            stage_log=[st.to_json() for st in log])

    return CompressionResult(
        compressed=OperatorDeterminants(deltas=[d0, d1, d2],
                                        method=d.method, sizes=d.sizes),
        original_size=n0,
        compressed_size=d0.shape[0],
        stage_log=log,
        heuristic_n_gt_2=heuristic)
