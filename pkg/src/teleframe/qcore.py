"""Dense pure-state simulation over labeled qubits.

Basis encoding: index bits are read most-significant-first in label order, so
for labels ``("A1", "A", "B")`` the amplitude of ``|A1=1, A=0, B=1>`` lives at
index ``0b101 = 5``.

All values are immutable; every operation returns a new object.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

ATOL = 1e-10
POSITIVITY_ATOL = 1e-9
IMPOSSIBLE_PROB = 1e-12


class QuantumError(ValueError):
    """Base class for errors raised by the simulator."""


class LabelError(QuantumError):
    pass


class DimensionError(QuantumError):
    pass


class NotUnitaryError(QuantumError):
    pass


class InvalidMeasurementError(QuantumError):
    pass


class ImpossibleConditioningError(QuantumError):
    """Raised when a forced outcome has (numerically) zero probability."""


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex, copy=True)
    arr.setflags(write=False)
    return arr


def _n_qubits(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two")
    return n


@dataclass(frozen=True, eq=False)
class StateVector:
    labels: tuple
    amplitudes: np.ndarray

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(set(labels)) != len(labels):
            raise LabelError(f"duplicate labels in {labels}")
        amps = _frozen(np.ravel(self.amplitudes))
        if amps.size != 2 ** len(labels):
            raise DimensionError(
                f"{amps.size} amplitudes for {len(labels)} labels")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > ATOL:
            raise QuantumError(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def relabel(self, *labels) -> "StateVector":
        """Same amplitudes under new names (one per existing label)."""
        if len(labels) != len(self.labels):
            raise LabelError(
                f"need {len(self.labels)} labels, got {len(labels)}")
        return StateVector(labels, self.amplitudes)

    def index_of(self, label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise LabelError(f"unknown label {label!r}") from None

    def inner(self, other: "StateVector") -> complex:
        """<self|other>, after bringing ``other`` into this label order."""
        other = other.reorder(self.labels)
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def reorder(self, labels: Sequence) -> "StateVector":
        labels = tuple(labels)
        if labels == self.labels:
            return self
        if sorted(map(str, labels)) != sorted(map(str, self.labels)):
            raise LabelError(f"cannot reorder {self.labels} into {labels}")
        perm = [self.index_of(lab) for lab in labels]
        tensor_ = self.amplitudes.reshape([2] * self.n_qubits)
        return StateVector(labels, np.transpose(tensor_, perm).ravel())

    def __repr__(self):
        return f"StateVector(labels={self.labels}, amplitudes={np.round(self.amplitudes, 6)})"


@dataclass(frozen=True, eq=False)
class Operator:
    matrix: np.ndarray
    unitary: bool = True

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got {m.shape}")
        _n_qubits(m.shape[0])
        if self.unitary and not is_unitary(m):
            raise NotUnitaryError("matrix flagged unitary is not unitary")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_qubits(self) -> int:
        return _n_qubits(self.dim)

    @property
    def dagger(self) -> "Operator":
        return Operator(self.matrix.conj().T, self.unitary)

    def __matmul__(self, other: "Operator") -> "Operator":
        return Operator(self.matrix @ other.matrix,
                        self.unitary and other.unitary)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    matrix: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"density matrix must be square, got {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > ATOL:
            raise QuantumError("density matrix is not Hermitian")
        if abs(np.trace(m) - 1.0) > ATOL:
            raise QuantumError(f"density matrix trace is {np.trace(m)!r}")
        if np.min(np.linalg.eigvalsh(m)) < -POSITIVITY_ATOL:
            raise QuantumError("density matrix has negative eigenvalues")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))


@dataclass(frozen=True)
class MeasurementRecord:
    outcome_index: int
    predicted_probability: float
    forced: bool
    probabilities: tuple = field(default=())


def is_unitary(m, atol: float = ATOL) -> bool:
    m = np.asarray(m)
    return bool(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))) <= atol)


def ket(bits: str, labels: Optional[Sequence] = None) -> StateVector:
    """Computational basis state, e.g. ``ket("01", ["A", "B"])``."""
    labels = tuple(labels) if labels is not None else tuple(f"q{k}" for k in range(len(bits)))
    amps = np.zeros(2 ** len(bits), dtype=complex)
    amps[int(bits, 2)] = 1.0
    return StateVector(labels, amps)


def qubit(alpha: complex, beta: complex, label="q0") -> StateVector:
    return StateVector((label,), np.array([alpha, beta], dtype=complex))


def projector(state: StateVector) -> Operator:
    v = state.amplitudes
    return Operator(np.outer(v, v.conj()), unitary=False)


def same_state(a: StateVector, b: StateVector, atol: float = ATOL) -> bool:
    """Equality up to global phase: |<a|b>|^2 >= 1 - atol."""
    return abs(a.inner(b)) ** 2 >= 1.0 - atol


def phase_aligned_deviation(a: StateVector, b: StateVector) -> float:
    """Max-entry distance between ``a`` and ``b`` after removing the relative global phase."""
    b = b.reorder(a.labels)
    ov = np.vdot(b.amplitudes, a.amplitudes)
    phase = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.max(np.abs(a.amplitudes - phase * b.amplitudes)))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    overlap = set(a.labels) & set(b.labels)
    if overlap:
        raise LabelError(f"labels {sorted(map(str, overlap))} appear in both factors")
    return StateVector(a.labels + b.labels, np.kron(a.amplitudes, b.amplitudes))


def _target_axes(labels: tuple, targets: Sequence) -> list:
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise LabelError(f"repeated target in {targets}")
    axes = []
    for t in targets:
        if t not in labels:
            raise LabelError(f"unknown label {t!r}")
        axes.append(labels.index(t))
    return axes


def _apply_matrix(m: np.ndarray, axes: list, amps: np.ndarray, n: int) -> np.ndarray:
    k = len(axes)
    psi = amps.reshape([2] * n)
    op = m.reshape([2] * (2 * k))
    out = np.tensordot(op, psi, axes=(list(range(k, 2 * k)), axes))
    # tensordot puts the operator's output axes first
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(-1)


def apply(u: Operator, targets: Sequence, s: StateVector) -> StateVector:
    """Apply ``u`` to the ``targets`` of ``s``, identity elsewhere."""
    if not u.unitary:
        raise NotUnitaryError("apply() needs an operator flagged unitary")
    axes = _target_axes(s.labels, targets)
    if u.dim != 2 ** len(axes):
        raise DimensionError(
            f"operator of dim {u.dim} on {len(axes)} target qubit(s)")
    return StateVector(s.labels, _apply_matrix(u.matrix, axes, s.amplitudes, s.n_qubits))


def _check_resolution(projectors: Sequence[Operator], dim: int) -> None:
    total = np.zeros((dim, dim), dtype=complex)
    mats = [p.matrix for p in projectors]
    for i, p in enumerate(mats):
        if p.shape != (dim, dim):
            raise DimensionError(f"projector {i} has shape {p.shape}, expected {(dim, dim)}")
        if np.max(np.abs(p - p.conj().T)) > ATOL:
            raise InvalidMeasurementError(f"projector {i} is not Hermitian")
        if np.max(np.abs(p @ p - p)) > ATOL:
            raise InvalidMeasurementError(f"projector {i} is not idempotent")
        for j in range(i):
            if np.max(np.abs(p @ mats[j])) > ATOL:
                raise InvalidMeasurementError(f"projectors {j} and {i} are not orthogonal")
        total += p
    if np.max(np.abs(total - np.eye(dim))) > ATOL:
        raise InvalidMeasurementError("projectors do not sum to the identity")


def measure(s: StateVector, projectors: Sequence[Operator], targets: Sequence,
            forced: Optional[int] = None, rng_seed=None):
    """Projective measurement of ``targets``.

    Returns ``(record, collapsed_state)``. Outcome indices are positions in
    ``projectors``. With ``forced`` the given outcome is selected whatever its
    probability, provided that probability exceeds 1e-12.
    """
    axes = _target_axes(s.labels, targets)
    _check_resolution(projectors, 2 ** len(axes))

    branches = [_apply_matrix(p.matrix, axes, s.amplitudes, s.n_qubits) for p in projectors]
    probs = [float(np.real(np.vdot(s.amplitudes, b))) for b in branches]

    if forced is not None:
        if not 0 <= forced < len(projectors):
            raise InvalidMeasurementError(f"forced outcome {forced} out of range")
        k = forced
        if probs[k] <= IMPOSSIBLE_PROB:
            raise ImpossibleConditioningError(
                f"outcome {k} has probability {probs[k]:.3e}; cannot condition on it")
    else:
        k = sample_index(probs, rng_seed)

    collapsed = branches[k] / np.linalg.norm(branches[k])
    record = MeasurementRecord(k, probs[k], forced is not None, tuple(probs))
    return record, StateVector(s.labels, collapsed)


def sample_index(probs: Sequence[float], seed=None) -> int:
    """Inverse-CDF draw from ``probs`` with one uniform variate from ``seed``."""
    u = np.random.default_rng(seed).random()
    cdf = np.cumsum(np.clip(probs, 0.0, None))
    k = int(np.searchsorted(cdf / cdf[-1], u, side="right"))
    return min(k, len(probs) - 1)


def partial_trace(s: StateVector, keep: Sequence) -> DensityMatrix:
    keep = list(keep)
    if not keep:
        raise LabelError("keep list is empty")
    axes = _target_axes(s.labels, keep)
    rest = [k for k in range(s.n_qubits) if k not in axes]
    m = np.transpose(s.amplitudes.reshape([2] * s.n_qubits), axes + rest)
    m = m.reshape(2 ** len(axes), 2 ** len(rest))
    rho = m @ m.conj().T
    return DensityMatrix(rho, tuple(keep))


def fidelity(rho: DensityMatrix, psi: StateVector) -> float:
    """<psi|rho|psi> for a pure reference state."""
    if rho.dim != psi.dim:
        raise DimensionError(f"density matrix dim {rho.dim} vs state dim {psi.dim}")
    v = psi.amplitudes
    return float(np.real(np.vdot(v, rho.matrix @ v)))


def random_pure_state(seed, n_qubits: int, labels: Optional[Sequence] = None) -> StateVector:
    """Haar-random state: normalized i.i.d. complex Gaussian amplitudes."""
    if n_qubits < 1:
        raise DimensionError("n_qubits must be >= 1")
    rng = np.random.default_rng(seed)
    dim = 2 ** n_qubits
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    if labels is None:
        labels = [f"q{k}" for k in range(n_qubits)]
    return StateVector(tuple(labels), v / np.linalg.norm(v))


def random_unitary(seed, dim: int) -> Operator:
    """Haar-random unitary from the QR decomposition of a complex Gaussian matrix."""
    _n_qubits(dim)
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return Operator(q * (d / np.abs(d)))


I2 = Operator(np.eye(2))
X = Operator(np.array([[0, 1], [1, 0]]))
Y = Operator(np.array([[0, -1j], [1j, 0]]))
Z = Operator(np.array([[1, 0], [0, -1]]))
H = Operator(np.array([[1, 1], [1, -1]]) / np.sqrt(2))
CNOT = Operator(np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))
