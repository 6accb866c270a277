"""Builds the reversible circuit that evaluates a CNF formula into a result qubit.

Register layout: input qubits 0..n-1, work ancillas next, result qubit last.
On every computational basis input |eps, 0...0> the circuit leaves the inputs
in |eps> and writes eval_formula(f, eps) into the result qubit; work ancillas
hold per-branch garbage unless built with uncompute=True.

Construction: a clause OR is De Morgan'd into a Toffoli chain over literal
complements (a literal's complement is read off its input qubit, X-wrapped for
polarity), with a final X turning the accumulated AND into the OR. Clause
outputs are folded into the result through a second Toffoli chain. Clauses
holding a complementary pair are satisfied identically and are skipped; an
empty clause makes the formula constant 0 and the build degenerates to an
idle circuit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cnf import Clause, CnfFormula, is_minimal
from .errors import QubitCapError
from .statevector import Circuit, Gate, StateVector, max_qubits


@dataclass(frozen=True)
class CircuitLayout:
    """Where the three register sections live inside the built circuit."""

    n_input: int
    work_qubits: range
    result_qubit: int
    mu: int

    @property
    def num_qubits(self) -> int:
        return self.n_input + self.mu


def required_ancillas(formula: CnfFormula) -> int:
    """Ancilla count mu for the standard construction (before any cap check).

    mu = sum over kept clauses of (|C|-1) + (m-1) + 1, degenerating to 1 for
    constant formulas; linear in m*n since kept clauses are minimal.
    """
    active = [c for c in formula.clauses if is_minimal(c)]
    if not active or any(len(c) == 0 for c in active):
        return 1
    m = len(active)
    return sum(len(c) - 1 for c in active) + (m - 1) + 1


@dataclass(frozen=True)
class _Value:
    """A Boolean value readable from a qubit; `invert` means the qubit holds
    its complement."""

    qubit: int
    invert: bool


def build_sat_circuit(formula: CnfFormula, uncompute: bool = False) -> tuple[Circuit, CircuitLayout]:
    """Build the formula-evaluation circuit out of X/CNOT/Toffoli gates only.

    With uncompute=True the clause machinery is re-run in reverse after the
    result is copied out, returning every work ancilla to |0>.
    """
    n = formula.n
    mu = required_ancillas(formula)
    total = n + mu
    cap = max_qubits()
    if total > cap:
        raise QubitCapError(
            f"formula needs {total} qubits ({n} inputs + {mu} ancillas), over the "
            f"cap of {cap}; use oracle mode or raise QSAT_MAX_QUBITS"
        )
    layout = CircuitLayout(
        n_input=n,
        work_qubits=range(n, total - 1),
        result_qubit=total - 1,
        mu=mu,
    )
    assert mu <= n * formula.num_clauses + 2, "ancilla budget not linear in m*n"

    circuit = Circuit(total)
    active = [c for c in formula.clauses if is_minimal(c)]

    if any(len(c) == 0 for c in active):
        return circuit, layout  # constant 0: result qubit never touched
    if not active:
        circuit.append(Gate.x(layout.result_qubit))  # constant 1
        return circuit, layout

    compute: list[Gate] = []
    next_work = n

    def fresh() -> int:
        nonlocal next_work
        q = next_work
        next_work += 1
        return q

    def toffoli(a: _Value, b: _Value, target: int) -> None:
        wraps = [v.qubit for v in (a, b) if v.invert]
        for q in wraps:
            compute.append(Gate.x(q))
        compute.append(Gate.toffoli(a.qubit, b.qubit, target))
        for q in reversed(wraps):
            compute.append(Gate.x(q))

    def and_pair(a: _Value, b: _Value, target: int) -> None:
        # Two unit clauses may read the same input qubit: v AND v copies
        # through, v AND NOT v is constant 0 (target stays |0>).
        if a.qubit != b.qubit:
            toffoli(a, b, target)
        elif a.invert == b.invert:
            if a.invert:
                compute.append(Gate.x(a.qubit))
            compute.append(Gate.cnot(a.qubit, target))
            if a.invert:
                compute.append(Gate.x(a.qubit))

    def clause_value(clause: Clause) -> _Value:
        literals = clause.sorted_literals()
        if len(literals) == 1:
            lit = literals[0]
            return _Value(lit.var - 1, invert=lit.negated)
        # AND of literal complements: a positive literal's complement needs an
        # X-wrap on its input qubit, a negated literal's complement is the raw bit.
        complements = [_Value(l.var - 1, invert=not l.negated) for l in literals]
        acc = fresh()
        toffoli(complements[0], complements[1], acc)
        for comp in complements[2:]:
            nxt = fresh()
            toffoli(_Value(acc, False), comp, nxt)
            acc = nxt
        compute.append(Gate.x(acc))  # NOT(AND of complements) = clause OR
        return _Value(acc, invert=False)

    values = [clause_value(c) for c in active]

    if len(values) == 1:
        running = values[0]
    else:
        acc = fresh()
        and_pair(values[0], values[1], acc)
        for v in values[2:]:
            nxt = fresh()
            toffoli(_Value(acc, False), v, nxt)
            acc = nxt
        running = _Value(acc, False)
    assert next_work == total - 1, "ancilla accounting drifted"

    copy_out: list[Gate] = []
    if running.invert:
        copy_out.append(Gate.x(running.qubit))
    copy_out.append(Gate.cnot(running.qubit, layout.result_qubit))
    if running.invert:
        copy_out.append(Gate.x(running.qubit))

    for gate in compute:
        circuit.append(gate)
    for gate in copy_out:
        circuit.append(gate)
    if uncompute:
        for gate in reversed(compute):  # X/CNOT/Toffoli are self-inverse
            circuit.append(gate)
    return circuit, layout


def _result_bit_view(state: StateVector, layout: CircuitLayout) -> np.ndarray:
    view = state.amps.reshape([2] * state.num_qubits)
    return np.moveaxis(view, layout.result_qubit, -1)


def success_probability(state: StateVector, layout: CircuitLayout) -> float:
    """Total weight on basis states whose result qubit reads 1; clipped to 1.0
    against summation roundoff (the state norm is 1 within 1e-10)."""
    view = _result_bit_view(state, layout)
    return min(float(np.sum(np.abs(view[..., 1]) ** 2)), 1.0)


def post_measure(state: StateVector, layout: CircuitLayout) -> StateVector | None:
    """Project onto result = 1 and renormalize; None when the projection
    carries (numerically) no weight, i.e. the UNSAT branch."""
    norm = math.sqrt(success_probability(state, layout))
    if norm < 1e-14:
        return None
    amps = state.amps.copy()
    view = np.moveaxis(amps.reshape([2] * state.num_qubits), layout.result_qubit, -1)
    view[..., 0] = 0.0
    amps /= norm
    return StateVector(state.num_qubits, amps)


def collapse_to_qubit(q_squared: float | Fraction) -> tuple[float, float]:
    """Amplitudes (sqrt(1-q^2), sqrt(q^2)) of the single-qubit summary state
    handed to the amplifiers."""
    q2 = float(q_squared)
    if q2 < 0.0 or q2 > 1.0:
        if -1e-12 <= q2 < 0.0 or 1.0 < q2 <= 1.0 + 1e-12:
            q2 = min(max(q2, 0.0), 1.0)  # forgive float roundoff at the edges
        else:
            raise ValueError(f"q_squared={q2} outside [0, 1]")
    return math.sqrt(1.0 - q2), math.sqrt(q2)
