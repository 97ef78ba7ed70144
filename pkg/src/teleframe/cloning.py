"""Executable no-cloning checks."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore, teleport
from .qcore import Operator, StateVector


@dataclass(frozen=True)
class CloneAttemptResult:
    fidelity_psi: float
    fidelity_phi: float
    overlap: complex


def no_cloning_witness(psi: StateVector, phi: StateVector) -> float:
    """Residual ``| |<psi|phi>| - |<psi|phi>|^2 |``.

    A unitary cloning both states (up to phase) preserves inner products, so
    the overlap ``c`` would have to satisfy ``|c| = |c|^2``. A nonzero
    residual rules such a unitary out.
    """
    c = abs(np.vdot(psi.amplitudes, phi.amplitudes))
    return float(abs(c - c * c))


def clone_attempt(u: Operator, psi: StateVector, phi: StateVector,
                  blank: StateVector) -> CloneAttemptResult:
    """Fidelity of ``u|chi, blank>`` with ``|chi, chi>`` for chi in {psi, phi}."""
    if u.dim != 4:
        raise qcore.DimensionError(f"cloner must act on two qubits, got dim {u.dim}")
    if psi.dim != 2 or phi.dim != 2 or blank.dim != 2:
        raise qcore.DimensionError("psi, phi and blank must be single qubits")

    def fid(chi):
        out = u.matrix @ np.kron(chi.amplitudes, blank.amplitudes)
        target = np.kron(chi.amplitudes, chi.amplitudes)
        return float(abs(np.vdot(target, out)) ** 2)

    return CloneAttemptResult(fid(psi), fid(phi), complex(np.vdot(psi.amplitudes, phi.amplitudes)))


def known_state_cloner(state: StateVector, psi: StateVector) -> StateVector:
    """Project B onto |psi> with a device built from knowledge of ``psi``.

    Only a party who knows ``psi`` can build this measurement, so whatever
    copies it produces do not contradict no-cloning.
    """
    _, post = teleport.confirmation_measure(state, psi, forced_yes=True)
    return post
