"""Teleportation with superluminal signaling, replayed in several Lorentz frames."""
from .qcore import (DensityMatrix, MeasurementRecord, Operator, StateVector, apply, fidelity,
                    measure, partial_trace, random_pure_state, tensor)
from .teleport import BellBasis, TeleportScenario, standard_bell_basis

__version__ = "0.1.0"
