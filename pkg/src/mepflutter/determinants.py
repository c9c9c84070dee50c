"""Kronecker operator determinants of a linear multiparameter problem.

For an N-equation, N-parameter problem with coefficient array
``[A_i0 | A_i1 ... A_iN]`` the N + 1 operator determinants are Kronecker
analogues of determinants over that array:

* ``Delta_0`` is the determinant of the columns 1..N;
* ``Delta_k`` replaces column k by ``-A_i0``.

They reduce every solvable problem to a family of generalized eigenproblems
``Delta_k z = eta_k Delta_0 z`` sharing the eigenvector ``z = x_1 (x) ...
(x) x_N``.  Factor order in every Kronecker term is the equation order, so
equation i always acts on tensor slot i; this is the canonical layout that
makes the shared-eigenvector identity hold exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import DimensionCapError
from .linalg import DEFAULT_DIMENSION_CAP, kron
from .problems import LinearMEP


@dataclass
class OperatorDeterminants:
    """The determinants Delta_0 .. Delta_N plus provenance."""

    deltas: List[np.ndarray]
    method: str
    sizes: Tuple[int, ...]

    @property
    def size(self) -> int:
        return self.deltas[0].shape[0]

    @property
    def n_params(self) -> int:
        return len(self.deltas) - 1


def permutation_sign(perm) -> int:
    """Parity of a permutation via inversion count."""
    perm = list(perm)
    inversions = sum(
        1
        for i in range(len(perm))
        for j in range(i + 1, len(perm))
        if perm[i] > perm[j]
    )
    return -1 if inversions % 2 else 1


def _check_total_size(mep: LinearMEP, cap: int) -> None:
    total = 1
    for n in mep.sizes:
        total *= n
    if total > cap:
        raise DimensionCapError(
            "operator determinants would be %dx%d (equation sizes %s), "
            "exceeding the dimension cap of %d per side"
            % (total, total, mep.sizes, cap),
            requested=(total, total), cap=cap)


def deltas_two_param(mep: LinearMEP,
                     cap: int = DEFAULT_DIMENSION_CAP) -> OperatorDeterminants:
    """Closed-form determinants for the two-parameter case.

    With equations (a_i + eta_1 b_i + eta_2 c_i) x_i = 0:

        Delta_0 = b1 (x) c2 - c1 (x) b2
        Delta_1 = c1 (x) a2 - a1 (x) c2
        Delta_2 = a1 (x) b2 - b1 (x) a2
    """
    if mep.n_params != 2:
        raise ValueError("deltas_two_param needs exactly 2 equations, got %d"
                         % mep.n_params)
    _check_total_size(mep, cap)
    (a1, b1, c1), (a2, b2, c2) = mep.equations
    d0 = kron(b1, c2, cap) - kron(c1, b2, cap)
    d1 = kron(c1, a2, cap) - kron(a1, c2, cap)
    d2 = kron(a1, b2, cap) - kron(b1, a2, cap)
    return OperatorDeterminants(deltas=[d0, d1, d2], method="two_param",
                                sizes=mep.sizes)


def _delta_array(mep: LinearMEP, k: int) -> List[List[np.ndarray]]:
    """Column array for Delta_k: columns 1..N, column k swapped for -A_i0."""
    N = mep.n_params
    arr = []
    for i in range(N):
        row = []
        for col in range(1, N + 1):
            if k > 0 and col == k:
                row.append(-mep.equations[i][0])
            else:
                row.append(mep.equations[i][col])
        arr.append(row)
    return arr


def deltas_leibniz(mep: LinearMEP,
                   cap: int = DEFAULT_DIMENSION_CAP) -> OperatorDeterminants:
    """Determinants by the permutation sum with parity signs.

    ``Delta(M) = sum over permutations s of sgn(s) * (x)_i M[i][s_i]``.
    The term ordering is fixed (lexicographic permutations, equation-order
    factors), so results are bit-identical across runs.
    """
    N = mep.n_params
    if N < 2:
        raise ValueError("operator determinants need at least 2 equations")
    _check_total_size(mep, cap)
    deltas = []
    perms = list(itertools.permutations(range(N)))
    signs = [permutation_sign(p) for p in perms]
    for k in range(N + 1):
        arr = _delta_array(mep, k)
        acc = None
        for perm, sign in zip(perms, signs):
            term = None
            for i in range(N):
                m = arr[i][perm[i]]
                term = m if term is None else kron(term, m, cap)
            acc = sign * term if acc is None else acc + sign * term
        deltas.append(acc)
    return OperatorDeterminants(deltas=deltas, method="leibniz", sizes=mep.sizes)


def _laplace(arr: List[List[np.ndarray]], cap: int) -> np.ndarray:
    """Cofactor recursion along the first row of the array.

    Expanding along the first row keeps Kronecker factors in equation order
    (row 1 leads, minors preserve the order of the remaining rows), so the
    result matches the permutation sum entrywise.  Expanding along a column
    instead would reorder tensor slots and change the pencil spectra.
    """
    N = len(arr)
    if N == 1:
        return arr[0][0]
    acc = None
    for j in range(N):
        minor = [[arr[r][c] for c in range(N) if c != j] for r in range(1, N)]
        term = kron(arr[0][j], _laplace(minor, cap), cap)
        if j % 2:
            term = -term
        acc = term if acc is None else acc + term
    return acc


def deltas_laplace(mep: LinearMEP,
                   cap: int = DEFAULT_DIMENSION_CAP) -> OperatorDeterminants:
    """Determinants by recursive cofactor expansion (first-row path)."""
    N = mep.n_params
    if N < 2:
        raise ValueError("operator determinants need at least 2 equations")
    _check_total_size(mep, cap)
    deltas = [_laplace(_delta_array(mep, k), cap) for k in range(N + 1)]
    return OperatorDeterminants(deltas=deltas, method="laplace", sizes=mep.sizes)


def assemble_geps(d: OperatorDeterminants):
    """Pencil pairs (Delta_k, Delta_0) for k = 1..N, in parameter order."""
    return [(d.deltas[k], d.deltas[0]) for k in range(1, len(d.deltas))]
