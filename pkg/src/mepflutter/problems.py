"""Data model for linear and polynomial multiparameter eigenvalue problems.

A two-parameter polynomial problem is stored as a map from exponent pairs
(p, q) to coefficient matrices; a linear N-parameter problem as N equations,
each a list of N + 1 square matrices [A_i0, A_i1, ..., A_iN] so that equation
i reads ``(A_i0 + sum_j eta_j A_ij) x_i = 0``.

Conjugate augmentation pairs a problem with its entrywise conjugate; real
parameter tuples solving both simultaneously are the stability-relevant
solutions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ProblemFormatError, ValidationError
from .linalg import as_matrix

#: A parameter value is treated as real when |Im| <= tol * (1 + |Re|).
REALNESS_TOL = 1e-8


@dataclass(frozen=True)
class PolynomialMEP2:
    """Two-parameter polynomial eigenvalue problem of size n.

    ``terms[(p, q)]`` multiplies ``param1**p * param2**q``.  Immutable after
    construction; matrices are defensively copied and never mutated.
    """

    size: int
    terms: Dict[Tuple[int, int], np.ndarray]
    param_names: Tuple[str, str] = ("p1", "p2")

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError("problem size must be positive")
        clean = {}
        for key, mat in self.terms.items():
            p, q = int(key[0]), int(key[1])
            if p < 0 or q < 0:
                raise ValidationError("term exponents must be non-negative, got (%d, %d)" % (p, q))
            m = as_matrix(mat, "term (%d, %d)" % (p, q))
            if m.shape != (self.size, self.size):
                raise ValidationError(
                    "term (%d, %d) has shape %s, expected (%d, %d)"
                    % (p, q, m.shape, self.size, self.size))
            m = m.copy()
            m.flags.writeable = False
            clean[(p, q)] = m
        if not any(p + q >= 1 for (p, q) in clean):
            raise ValidationError("problem needs at least one term of degree >= 1")
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "param_names",
                           (str(self.param_names[0]), str(self.param_names[1])))

    @property
    def degree(self) -> int:
        return max(p + q for (p, q), m in self.terms.items() if np.any(m))

    def term(self, p: int, q: int) -> np.ndarray:
        """Coefficient of param1**p * param2**q, zero matrix if absent."""
        m = self.terms.get((p, q))
        return m if m is not None else np.zeros((self.size, self.size), dtype=complex)

    def has_term(self, p: int, q: int) -> bool:
        m = self.terms.get((p, q))
        return m is not None and bool(np.any(m))

    def conjugate(self) -> "PolynomialMEP2":
        return PolynomialMEP2(
            size=self.size,
            terms={k: m.conj() for k, m in self.terms.items()},
            param_names=self.param_names,
        )

    def equals(self, other: "PolynomialMEP2") -> bool:
        """Structural equality, exact on entries."""
        if self.size != other.size or self.param_names != other.param_names:
            return False
        if set(self.terms) != set(other.terms):
            return False
        return all(np.array_equal(self.terms[k], other.terms[k]) for k in self.terms)

    def norm(self) -> float:
        """Frobenius norm over all term matrices, the problem scale."""
        return float(np.sqrt(sum(np.linalg.norm(m, "fro") ** 2 for m in self.terms.values())))


@dataclass(frozen=True)
class LinearMEP:
    """Linear N-parameter problem: N equations of N + 1 coefficients each."""

    equations: List[List[np.ndarray]]

    def __post_init__(self):
        n_eq = len(self.equations)
        if n_eq < 1:
            raise ValidationError("a linear problem needs at least one equation")
        clean = []
        for i, eq in enumerate(self.equations):
            if len(eq) != n_eq + 1:
                raise ValidationError(
                    "equation %d has %d coefficient matrices, expected %d"
                    % (i, len(eq), n_eq + 1))
            mats = [as_matrix(m, "equation %d coefficient %d" % (i, j))
                    for j, m in enumerate(eq)]
            n_i = mats[0].shape[0]
            for j, m in enumerate(mats):
                if m.shape != (n_i, n_i):
                    raise ValidationError(
                        "equation %d coefficient %d has shape %s, expected (%d, %d)"
                        % (i, j, m.shape, n_i, n_i))
            frozen = []
            for m in mats:
                c = m.copy()
                c.flags.writeable = False
                frozen.append(c)
            clean.append(frozen)
        object.__setattr__(self, "equations", clean)

    @property
    def n_params(self) -> int:
        return len(self.equations)

    @property
    def sizes(self) -> Tuple[int, ...]:
        return tuple(eq[0].shape[0] for eq in self.equations)

    def evaluate_equation(self, i: int, params: Sequence[complex]) -> np.ndarray:
        eq = self.equations[i]
        W = eq[0].copy()
        for j, eta in enumerate(params):
            W = W + eta * eq[j + 1]
        return W


@dataclass(frozen=True)
class EigenTuple:
    """One solution point of a multiparameter problem."""

    params: np.ndarray
    vectors: List[np.ndarray]
    residual: float
    is_real: bool
    is_physical: bool

    def to_json(self) -> dict:
        return {
            "params": [[float(v.real), float(v.imag)] for v in self.params],
            "residual": float(self.residual),
            "is_real": bool(self.is_real),
            "is_physical": bool(self.is_physical),
            "vectors": [[[float(c.real), float(c.imag)] for c in vec]
                        for vec in self.vectors],
        }


def is_real_value(value: complex, tol: float = REALNESS_TOL) -> bool:
    return abs(value.imag) <= tol * (1.0 + abs(value.real))


def conjugate_augment(p: PolynomialMEP2) -> Tuple[PolynomialMEP2, PolynomialMEP2]:
    """Pair a problem with its entrywise conjugate.

    Real parameter pairs solving both problems at once are exactly the
    stability-relevant solutions of the original.
    """
    return p, p.conjugate()


def evaluate(p: PolynomialMEP2, params: Sequence[complex]) -> np.ndarray:
    """Sum of term matrices weighted by param1**p * param2**q."""
    p1, p2 = complex(params[0]), complex(params[1])
    if not (np.isfinite(p1) and np.isfinite(p2)):
        raise ValueError("parameters must be finite")
    W = np.zeros((p.size, p.size), dtype=complex)
    for (a, b), M in p.terms.items():
        W = W + M * (p1 ** a * p2 ** b)
    return W


def singularity_residual(W: np.ndarray) -> float:
    """Smallest singular value of W over its Frobenius norm."""
    norm = np.linalg.norm(W, "fro")
    if norm == 0.0:
        return 0.0
    return float(np.linalg.svd(W, compute_uv=False)[-1] / norm)


def residual_at(problem: Union[PolynomialMEP2, LinearMEP],
                params: Sequence[complex]) -> float:
    """Max over equations of sigma_min(W_i(params)) / ||W_i||."""
    if isinstance(problem, PolynomialMEP2):
        return singularity_residual(evaluate(problem, params))
    return max(singularity_residual(problem.evaluate_equation(i, params))
               for i in range(problem.n_params))


def residual(problem: Union[PolynomialMEP2, LinearMEP], tup: EigenTuple) -> float:
    """Residual of an eigentuple against a problem; deterministic."""
    return residual_at(problem, tup.params)


def make_eigen_tuple(problem: PolynomialMEP2, params: Sequence[complex],
                     realness_tol: float = REALNESS_TOL,
                     airspeed_index: int = 0,
                     vectors: Optional[List[np.ndarray]] = None) -> EigenTuple:
    """Assemble an EigenTuple with flags and residual for a poly2 problem.

    The eigenvector defaults to the singular vector of the smallest singular
    value of the evaluated problem.  Physicality means real with a positive
    airspeed-like parameter (index ``airspeed_index``).
    """
    params = np.asarray([complex(v) for v in params])
    W = evaluate(problem, params)
    if vectors is None:
        _, s, Vh = np.linalg.svd(W)
        vectors = [Vh[-1].conj()]
    norm = np.linalg.norm(W, "fro")
    res = float(np.linalg.svd(W, compute_uv=False)[-1] / norm) if norm > 0 else 0.0
    real = all(is_real_value(v, realness_tol) for v in params)
    physical = real and params[airspeed_index].real > 0
    return EigenTuple(params=params, vectors=vectors, residual=res,
                      is_real=real, is_physical=physical)


# ---------------------------------------------------------------------------
# problem file I/O (JSON, complex numbers as [re, im] pairs)
# ---------------------------------------------------------------------------

def _matrix_to_json(m: np.ndarray) -> dict:
    return {
        "rows": int(m.shape[0]),
        "cols": int(m.shape[1]),
        "data": [[float(c.real), float(c.imag)] for c in m.reshape(-1)],
    }


def _matrix_from_json(obj, where: str) -> np.ndarray:
    if not isinstance(obj, dict):
        raise ProblemFormatError("%s: expected a matrix object" % where)
    for key in ("rows", "cols", "data"):
        if key not in obj:
            raise ProblemFormatError("%s: missing field '%s'" % (where, key))
    rows, cols = int(obj["rows"]), int(obj["cols"])
    data = obj["data"]
    if len(data) != rows * cols:
        raise ProblemFormatError(
            "%s: data has %d entries, expected rows*cols = %d"
            % (where, len(data), rows * cols))
    try:
        flat = [complex(float(re), float(im)) for re, im in data]
    except (TypeError, ValueError) as exc:
        raise ProblemFormatError("%s: entries must be [re, im] pairs" % where) from exc
    return np.array(flat, dtype=complex).reshape(rows, cols)


def problem_to_json(problem: Union[PolynomialMEP2, LinearMEP]) -> dict:
    if isinstance(problem, PolynomialMEP2):
        return {
            "kind": "poly2",
            "size": problem.size,
            "param_names": list(problem.param_names),
            "terms": [
                {"p": p, "q": q, "matrix": _matrix_to_json(m)}
                for (p, q), m in sorted(problem.terms.items())
            ],
        }
    return {
        "kind": "linear",
        "n_params": problem.n_params,
        "equations": [
            {"matrices": [_matrix_to_json(m) for m in eq]}
            for eq in problem.equations
        ],
    }


def problem_from_json(doc) -> Union[PolynomialMEP2, LinearMEP]:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ProblemFormatError("problem file must be an object with a 'kind' field")
    kind = doc["kind"]
    try:
        if kind == "poly2":
            if "size" not in doc or "terms" not in doc:
                raise ProblemFormatError("poly2 problem needs 'size' and 'terms'")
            names = doc.get("param_names", ["p1", "p2"])
            if len(names) != 2:
                raise ProblemFormatError("param_names must hold exactly two labels")
            terms = {}
            for i, t in enumerate(doc["terms"]):
                where = "terms[%d]" % i
                if "p" not in t or "q" not in t or "matrix" not in t:
                    raise ProblemFormatError("%s: needs fields p, q, matrix" % where)
                terms[(int(t["p"]), int(t["q"]))] = _matrix_from_json(
                    t["matrix"], where + ".matrix")
            return PolynomialMEP2(size=int(doc["size"]), terms=terms,
                                  param_names=(names[0], names[1]))
        if kind == "linear":
            if "equations" not in doc:
                raise ProblemFormatError("linear problem needs 'equations'")
            eqs = []
            for i, e in enumerate(doc["equations"]):
                if "matrices" not in e:
                    raise ProblemFormatError("equations[%d]: missing 'matrices'" % i)
                eqs.append([
                    _matrix_from_json(m, "equations[%d].matrices[%d]" % (i, j))
                    for j, m in enumerate(e["matrices"])
                ])
            mep = LinearMEP(equations=eqs)
            if "n_params" in doc and int(doc["n_params"]) != mep.n_params:
                raise ProblemFormatError(
                    "n_params is %s but %d equations were given"
                    % (doc["n_params"], mep.n_params))
            return mep
        raise ProblemFormatError("unknown problem kind %r" % kind)
    except ValidationError as exc:
        raise ProblemFormatError(str(exc)) from exc


def save_problem(problem: Union[PolynomialMEP2, LinearMEP], path) -> None:
    with open(path, "w") as fh:
        json.dump(problem_to_json(problem), fh, indent=1)
        fh.write("\n")


def load_problem(path) -> Union[PolynomialMEP2, LinearMEP]:
    with open(path) as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProblemFormatError("invalid JSON in %s: %s" % (path, exc)) from exc
    return problem_from_json(doc)
