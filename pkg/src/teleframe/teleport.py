"""Teleportation of one qubit over a shared |Phi+> pair.

Subsystems are ``A1`` (Alice's unknown qubit), ``A`` (Alice's half of the
pair) and ``B`` (Bob's half). Bell outcomes are numbered 1..4:

    1: Phi+  with correction I
    2: Psi+  with correction X
    3: Phi-  with correction Z
    4: Psi-  with correction X·Z  (= -iY)
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import qcore
from .qcore import ATOL, Operator, StateVector

A1, A, B = "A1", "A", "B"
LABELS = (A1, A, B)
OUTCOMES = (1, 2, 3, 4)


class ProtocolError(qcore.QuantumError):
    """A protocol step was handed a state it cannot have come from."""


@dataclass(frozen=True, eq=False)
class BellBasis:
    states: tuple          # four two-qubit StateVectors, index 0 <-> outcome 1
    corrections: tuple     # four single-qubit Operators U_i
    epr_index: int = 1

    def __post_init__(self):
        if len(self.states) != 4 or len(self.corrections) != 4:
            raise ValueError("a Bell basis needs four states and four corrections")
        for u in self.corrections:
            if not u.unitary or u.dim != 2:
                raise qcore.NotUnitaryError("corrections must be single-qubit unitaries")
        gram = np.array([[np.vdot(a.amplitudes, b.amplitudes) for b in self.states]
                         for a in self.states])
        if np.max(np.abs(gram - np.eye(4))) > ATOL:
            raise ValueError("Bell states are not orthonormal")

    def state(self, i: int) -> StateVector:
        _check_outcome(i)
        return self.states[i - 1]

    def correction(self, i: int) -> Operator:
        _check_outcome(i)
        return self.corrections[i - 1]

    @property
    def epr(self) -> StateVector:
        return self.state(self.epr_index)

    def projectors(self) -> list:
        return [qcore.projector(s) for s in self.states]


@dataclass(frozen=True, eq=False)
class TeleportScenario:
    psi: StateVector
    forced_i0: Optional[int] = None    # None: drawn from ``seed``
    confirmation_enabled: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.psi.n_qubits != 1:
            raise ValueError("psi must be a single qubit")
        if self.forced_i0 is not None:
            _check_outcome(self.forced_i0)

    def resolved_i0(self) -> int:
        """The Bell outcome of this run's single history."""
        if self.forced_i0 is not None:
            return self.forced_i0
        # same draw that an unforced Bell measurement with this seed makes
        return 1 + qcore.sample_index([0.25] * 4, self.seed)


def _check_outcome(i) -> None:
    if i not in OUTCOMES:
        raise ValueError(f"Bell outcome must be in 1..4, got {i!r}")


def standard_bell_basis() -> BellBasis:
    r = 1 / np.sqrt(2)
    amps = {
        "phi+": [r, 0, 0, r],
        "psi+": [0, r, r, 0],
        "phi-": [r, 0, 0, -r],
        "psi-": [0, r, -r, 0],
    }
    states = tuple(StateVector((A1, A), np.array(v)) for v in amps.values())
    corrections = (qcore.I2, qcore.X, qcore.Z, qcore.X @ qcore.Z)
    return BellBasis(states, corrections, epr_index=1)


def build_initial(psi: StateVector, basis: BellBasis) -> StateVector:
    """|psi>_A1 ⊗ |EPR>_{A,B}."""
    if psi.n_qubits != 1:
        raise qcore.DimensionError("psi must be a single qubit")
    return qcore.tensor(psi.relabel(A1), basis.epr.relabel(A, B))


def extract_psi(initial: StateVector, basis: BellBasis) -> StateVector:
    """Recover |psi> from psi ⊗ |EPR> by contracting A,B against <EPR|."""
    if set(initial.labels) != set(LABELS):
        raise qcore.LabelError(f"expected labels {LABELS}, got {initial.labels}")
    m = initial.reorder(LABELS).amplitudes.reshape(2, 4)
    v = m @ basis.epr.amplitudes.conj()
    if abs(np.linalg.norm(v) - 1.0) > 1e-8:
        raise ProtocolError("state is not of the form psi ⊗ |EPR>")
    return StateVector((A1,), v / np.linalg.norm(v))


def bell_branches(initial: StateVector, basis: BellBasis) -> list:
    """The four terms ``(|EPR_i>_{A1,A} ⊗ U_i|psi>_B, 1/2)`` of the Bell rewrite."""
    psi = extract_psi(initial, basis).relabel(B)
    return [
        (qcore.tensor(basis.state(i), qcore.apply(basis.correction(i), [B], psi)), 0.5)
        for i in OUTCOMES
    ]


def reassemble(branches) -> np.ndarray:
    """Weighted branch sum as a raw amplitude vector in (A1, A, B) order."""
    return sum(w * s.reorder(LABELS).amplitudes for s, w in branches)


def alice_measure(state: StateVector, basis: BellBasis, forced_i0: Optional[int] = None,
                  seed=None):
    """Bell measurement on (A1, A). The record's ``outcome_index`` is 1-based."""
    forced = None
    if forced_i0 is not None:
        _check_outcome(forced_i0)
        forced = forced_i0 - 1
    record, post = qcore.measure(state, basis.projectors(), [A1, A], forced=forced, rng_seed=seed)
    return replace(record, outcome_index=record.outcome_index + 1), post


def in_branch(state: StateVector, basis: BellBasis, i0: int, atol: float = ATOL) -> bool:
    rho = qcore.partial_trace(state, [A1, A])
    return qcore.fidelity(rho, basis.state(i0)) >= 1.0 - atol


def bob_correct(state: StateVector, basis: BellBasis, i0: int) -> StateVector:
    """Apply U_{i0}^† to B after Alice's outcome ``i0``."""
    _check_outcome(i0)
    if not in_branch(state, basis, i0):
        raise ProtocolError(f"(A1, A) is not in Bell state {i0}; refusing to correct")
    return qcore.apply(basis.correction(i0).dagger, [B], state)


def dennis_precorrect(initial: StateVector, basis: BellBasis, i0: int) -> StateVector:
    """U_{i0}^† applied to B of the unmeasured initial state."""
    _check_outcome(i0)
    return qcore.apply(basis.correction(i0).dagger, [B], initial)


def dennis_forms(psi: StateVector, basis: BellBasis, i0: int):
    """Both sides of the pre-correction identity as independent constructions.

    Returns ``(branch_sum, product)`` with
    ``branch_sum = 1/2 Σ_i |EPR_i> ⊗ U_{i0}^† U_i |psi>`` and
    ``product = |psi>_A1 ⊗ (I ⊗ U_{i0}^†)|EPR>_{A,B}``.
    """
    _check_outcome(i0)
    udag = basis.correction(i0).dagger
    psi_b = psi.relabel(B)
    total = np.zeros(8, dtype=complex)
    for i in OUTCOMES:
        bob = qcore.apply(udag @ basis.correction(i), [B], psi_b)
        total += 0.5 * qcore.tensor(basis.state(i), bob).amplitudes
    branch_sum = StateVector(LABELS, total)
    pair = qcore.apply(udag, [B], basis.epr.relabel(A, B))
    return branch_sum, qcore.tensor(psi.relabel(A1), pair)


def confirmation_projectors(psi: StateVector) -> list:
    yes = qcore.projector(psi)
    return [yes, Operator(np.eye(2) - yes.matrix, unitary=False)]


def confirmation_measure(state: StateVector, psi: StateVector, forced_yes: bool = False,
                         seed=None):
    """Ask whether B is in |psi>. Outcome 0 is "yes", 1 is "no"."""
    if psi.n_qubits != 1:
        raise qcore.DimensionError("psi must be a single qubit")
    return qcore.measure(state, confirmation_projectors(psi), [B],
                         forced=0 if forced_yes else None, rng_seed=seed)
