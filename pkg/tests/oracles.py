"""Slow reference computations, written without the package's tensor code."""
import itertools

import numpy as np


def embed(u, position, n):
    """Single-qubit matrix ``u`` acting on qubit ``position`` of ``n`` (MSB first)."""
    out = np.eye(1)
    for k in range(n):
        out = np.kron(out, u if k == position else np.eye(2))
    return out


def reduced_by_loops(amps, n, keep):
    """Reduced density matrix of ``keep`` (list of qubit positions) by summing over bit strings."""
    rest = [k for k in range(n) if k not in keep]
    d = 2 ** len(keep)
    rho = np.zeros((d, d), dtype=complex)
    for r_bits in itertools.product((0, 1), repeat=len(rest)):
        for i_bits in itertools.product((0, 1), repeat=len(keep)):
            for j_bits in itertools.product((0, 1), repeat=len(keep)):
                full_i = [0] * n
                full_j = [0] * n
                for pos, b in zip(rest, r_bits):
                    full_i[pos] = full_j[pos] = b
                for pos, b in zip(keep, i_bits):
                    full_i[pos] = b
                for pos, b in zip(keep, j_bits):
                    full_j[pos] = b
                ii = int("".join(map(str, full_i)), 2)
                jj = int("".join(map(str, full_j)), 2)
                ri = int("".join(map(str, i_bits)), 2)
                rj = int("".join(map(str, j_bits)), 2)
                rho[ri, rj] += amps[ii] * np.conj(amps[jj])
    return rho


R = 1 / np.sqrt(2)
# Bell vectors written out by hand, (A1, A) order
BELL = {
    1: np.array([R, 0, 0, R]),
    2: np.array([0, R, R, 0]),
    3: np.array([R, 0, 0, -R]),
    4: np.array([0, R, -R, 0]),
}
PAULI = {
    1: np.eye(2),
    2: np.array([[0, 1], [1, 0]]),
    3: np.array([[1, 0], [0, -1]]),
    4: np.array([[0, 1], [1, 0]]) @ np.array([[1, 0], [0, -1]]),
}


def random_qubit(rng):
    v = rng.standard_normal(2) + 1j * rng.standard_normal(2)
    return v / np.linalg.norm(v)
