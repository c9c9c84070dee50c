"""Turn quadratic two-parameter problems into linear multiparameter ones.

Two routes:

* strict linearization enlarges the coefficient matrices (2n when only one
  parameter is quadratic, 3n in general) while keeping two parameters;
* quasi-linearization keeps the original matrix size but adds auxiliary
  parameters (alpha = p1^2, beta = p2^2, gamma = p1*p2) together with 2x2
  determinant-constraint equations, one per auxiliary relation.

Both return a :class:`LinearizationRecord` describing how the original
eigenvector and parameters embed into the linearized system.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .errors import UnsupportedDegreeError
from .problems import PolynomialMEP2

# constraint pencil building blocks; [[s, t], [t, 1]] is singular iff s = t*t
_C_ONE = np.array([[0, 0], [0, 1]], dtype=complex)
_C_LIN = np.array([[0, 1], [1, 0]], dtype=complex)
_C_SQ = np.array([[1, 0], [0, 0]], dtype=complex)
_Z22 = np.zeros((2, 2), dtype=complex)


@dataclass
class LinearizationRecord:
    """How a quadratic problem embeds into its linearized form.

    Attributes:
        kind: "strict" or "quasi".
        slot_names: parameter labels of the linear system, in slot order.
        block_map: human-readable embedding of the enlarged eigenvector.
        blocks: per-block content of the enlarged eigenvector for the strict
            route, e.g. ["x", "p1*x"]; empty for quasi.
        primary_recovery: for each original parameter, ("slot", i) when it is
            a slot value directly, or ("ratio", i, j) for slot_i / slot_j.
        aux_relations: (slot_index, relation) pairs where relation is
            ("sq", k) for original_param_k**2 or ("prod",) for p1*p2.
    """

    kind: str
    slot_names: List[str]
    block_map: str
    blocks: List[str] = field(default_factory=list)
    primary_recovery: List[tuple] = field(default_factory=list)
    aux_relations: List[tuple] = field(default_factory=list)

    def expected_aux(self, slot: int, primaries) -> complex:
        """Value an auxiliary slot should take given recovered primaries."""
        for s, rel in self.aux_relations:
            if s == slot:
                if rel[0] == "sq":
                    return primaries[rel[1]] ** 2
                if rel[0] == "prod":
                    return primaries[0] * primaries[1]
        raise KeyError("slot %d records no auxiliary relation" % slot)


def _check_degree(p: PolynomialMEP2) -> None:
    for (a, b), m in p.terms.items():
        if a + b > 2 and np.any(m):
            raise UnsupportedDegreeError(
                "term (%d, %d) has degree %d; only quadratic problems are supported"
                % (a, b, a + b))


def linearize_strict(p: PolynomialMEP2):
    """Linearize by enlarging the coefficient matrices.

    Returns one linearized equation ``[A0, A1, A2]`` (constant, then one
    coefficient per original parameter) plus the record.  The conjugate
    equation of an augmented pair is not linearized separately: conjugating
    these coefficients entrywise is the linearization of the conjugate.
    """
    _check_degree(p)
    n = p.size
    I = np.eye(n, dtype=complex)
    Z = np.zeros((n, n), dtype=complex)
    t00, t10, t01 = p.term(0, 0), p.term(1, 0), p.term(0, 1)
    q20, q11, q02 = p.has_term(2, 0), p.has_term(1, 1), p.has_term(0, 2)

    names = list(p.param_names)
    if not (q20 or q11 or q02):
        record = LinearizationRecord(
            kind="strict", slot_names=names, block_map="q = x", blocks=["x"],
            primary_recovery=[("slot", 0), ("slot", 1)])
        return [t00.copy(), t10.copy(), t01.copy()], record

    if q20 and not q11 and not q02:
        # quadratic in param1 only: double size, q = [x; p1 x]
        A0 = np.block([[t00, Z], [Z, -I]])
        A1 = np.block([[t10, p.term(2, 0)], [I, Z]])
        A2 = np.block([[t01, Z], [Z, Z]])
        record = LinearizationRecord(
            kind="strict", slot_names=names,
            block_map="q = [x; %s*x]" % names[0], blocks=["x", "p1*x"],
            primary_recovery=[("slot", 0), ("slot", 1)])
        return [A0, A1, A2], record

    if q02 and not q11 and not q20:
        # mirrored: quadratic in param2 only
        A0 = np.block([[t00, Z], [Z, -I]])
        A1 = np.block([[t10, Z], [Z, Z]])
        A2 = np.block([[t01, p.term(0, 2)], [I, Z]])
        record = LinearizationRecord(
            kind="strict", slot_names=names,
            block_map="q = [x; %s*x]" % names[1], blocks=["x", "p2*x"],
            primary_recovery=[("slot", 0), ("slot", 1)])
        return [A0, A1, A2], record

    # general quadratic: triple size, q = [x; p1 x; p2 x]
    A0 = np.block([[t00, t10, t01], [Z, -I, Z], [Z, Z, -I]])
    A1 = np.block([[Z, p.term(2, 0), p.term(1, 1)], [I, Z, Z], [Z, Z, Z]])
    A2 = np.block([[Z, Z, p.term(0, 2)], [Z, Z, Z], [I, Z, Z]])
    record = LinearizationRecord(
        kind="strict", slot_names=names,
        block_map="q = [x; %s*x; %s*x]" % (names[0], names[1]),
        blocks=["x", "p1*x", "p2*x"],
        primary_recovery=[("slot", 0), ("slot", 1)])
    return [A0, A1, A2], record


def _constraint(n_slots: int, sq_slot: int, lin_slot: int) -> List[np.ndarray]:
    """2x2 equation forcing slot[sq_slot] = slot[lin_slot]**2."""
    eq = [_C_ONE] + [_Z22] * n_slots
    eq[1 + lin_slot] = _C_LIN
    eq[1 + sq_slot] = _C_SQ
    return eq


def linearize_quasi(p: PolynomialMEP2):
    """Linearize by adding auxiliary parameters and constraint equations.

    Returns the equations to stack (the rewritten original first, then one
    2x2 constraint per auxiliary relation) and the record.  The conjugate of
    the rewritten equation must be inserted by the caller right after it;
    constraint equations are real and are not duplicated.
    """
    _check_degree(p)
    names = list(p.param_names)
    t00, t10, t01 = p.term(0, 0), p.term(1, 0), p.term(0, 1)
    q20, q11, q02 = p.has_term(2, 0), p.has_term(1, 1), p.has_term(0, 2)

    if not (q20 or q11 or q02):
        record = LinearizationRecord(
            kind="quasi", slot_names=names, block_map="identity",
            primary_recovery=[("slot", 0), ("slot", 1)])
        return [[t00.copy(), t10.copy(), t01.copy()]], record

    if not q11:
        # pure squares: slots (p1, p2[, alpha][, beta])
        slots = list(names)
        rewritten = [t00, t10, t01]
        aux = []
        if q20:
            slots.append("alpha")
            aux.append((len(slots) - 1, ("sq", 0)))
            rewritten.append(p.term(2, 0))
        if q02:
            slots.append("beta")
            aux.append((len(slots) - 1, ("sq", 1)))
            rewritten.append(p.term(0, 2))
        n_slots = len(slots)
        constraints = [_constraint(n_slots, slot, rel[1]) for slot, rel in aux]
        record = LinearizationRecord(
            kind="quasi", slot_names=slots, block_map="identity",
            primary_recovery=[("slot", 0), ("slot", 1)],
            aux_relations=aux)
        return [list(rewritten)] + constraints, record

    if q11 and not p.has_term(1, 0) and q20 and q02:
        # cross term with no linear-p1 term: eliminate p1 entirely.
        # slots (p2, gamma = p1*p2, alpha = p2^2, beta = p1^2)
        slots = [names[1], "gamma", "alpha", "beta"]
        rewritten = [t00, t01, p.term(1, 1), p.term(0, 2), p.term(2, 0)]
        c_alpha = _constraint(4, 2, 0)
        # gamma^2 = alpha * beta as det [[gamma, alpha], [beta, gamma]] = 0
        c_gamma = [
            _Z22, _Z22,
            np.eye(2, dtype=complex),
            np.array([[0, 1], [0, 0]], dtype=complex),
            np.array([[0, 0], [1, 0]], dtype=complex),
        ]
        record = LinearizationRecord(
            kind="quasi", slot_names=slots, block_map="identity",
            primary_recovery=[("ratio", 1, 0), ("slot", 0)],
            aux_relations=[(1, ("prod",)), (2, ("sq", 1)), (3, ("sq", 0))])
        return [rewritten, c_alpha, c_gamma], record

    # general quadratic with a cross term: keep both primaries as slots and
    # constrain gamma = p1*p2 with the linear pencil det [[gamma, p1], [p2, 1]]
    slots = list(names)
    rewritten = [t00, t10, t01]
    aux = []
    if q20:
        slots.append("alpha")
        aux.append((len(slots) - 1, ("sq", 0)))
        rewritten.append(p.term(2, 0))
    if q02:
        slots.append("beta")
        aux.append((len(slots) - 1, ("sq", 1)))
        rewritten.append(p.term(0, 2))
    slots.append("gamma")
    aux.append((len(slots) - 1, ("prod",)))
    rewritten.append(p.term(1, 1))
    n_slots = len(slots)
    constraints = []
    for slot, rel in aux:
        if rel[0] == "sq":
            constraints.append(_constraint(n_slots, slot, rel[1]))
        else:
            # det [[gamma, p1], [p2, 1]] = gamma - p1*p2, linear in all slots
            c = [_C_ONE] + [_Z22] * n_slots
            c[1 + 0] = np.array([[0, 1], [0, 0]], dtype=complex)
            c[1 + 1] = np.array([[0, 0], [1, 0]], dtype=complex)
            c[1 + slot] = _C_SQ
            constraints.append(c)
    record = LinearizationRecord(
        kind="quasi", slot_names=slots, block_map="identity",
        primary_recovery=[("slot", 0), ("slot", 1)],
        aux_relations=aux)
    return [list(rewritten)] + constraints, record
