import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import BELL, PAULI, embed, reduced_by_loops
from teleframe import qcore
from teleframe.qcore import (CNOT, H, I2, X, Z, DensityMatrix, Operator, StateVector,
                             apply, fidelity, ket, measure, partial_trace, projector,
                             qubit, random_pure_state, tensor)

R = 1 / np.sqrt(2)
seeds = st.integers(0, 2**32 - 1)


def phi_plus(labels=("A", "B")):
    return StateVector(labels, [R, 0, 0, R])


class TestStateVector:
    def test_rejects_unnormalized(self):
        with pytest.raises(qcore.QuantumError):
            StateVector(("a",), [1, 1])

    def test_rejects_wrong_length(self):
        with pytest.raises(qcore.DimensionError):
            StateVector(("a", "b"), [1, 0])

    def test_rejects_duplicate_labels(self):
        with pytest.raises(qcore.LabelError):
            StateVector(("a", "a"), [1, 0, 0, 0])

    def test_amplitudes_are_read_only(self):
        s = ket("0")
        with pytest.raises(ValueError):
            s.amplitudes[0] = 0

    def test_reorder_swaps_bits(self):
        s = ket("01", ["a", "b"]).reorder(["b", "a"])
        assert s.labels == ("b", "a")
        np.testing.assert_allclose(s.amplitudes, [0, 0, 1, 0])


class TestTensor:
    def test_basis_product(self):
        s = tensor(ket("0", ["A1"]), ket("0", ["A"]))
        np.testing.assert_array_equal(s.amplitudes, [1, 0, 0, 0])
        assert s.labels == ("A1", "A")

    def test_qubit_times_bell_pair(self):
        a, b = 0.6, 0.8j
        s = tensor(qubit(a, b, "A1"), phi_plus())
        expected = np.array([a, 0, 0, a, b, 0, 0, b]) * R
        np.testing.assert_allclose(s.amplitudes, expected, atol=1e-15)
        assert s.labels == ("A1", "A", "B")

    def test_swapped_operands_permute_blocks(self):
        a = random_pure_state(1, 1, ["x"])
        b = random_pure_state(2, 2, ["y", "z"])
        ab, ba = tensor(a, b), tensor(b, a)
        # index (i, jk) in ab is (jk, i) in ba
        for i in range(2):
            for jk in range(4):
                assert ab.amplitudes[i * 4 + jk] == pytest.approx(ba.amplitudes[jk * 2 + i])
        np.testing.assert_allclose(ba.reorder(ab.labels).amplitudes, ab.amplitudes)

    def test_overlapping_labels(self):
        with pytest.raises(qcore.LabelError):
            tensor(ket("0", ["A"]), ket("1", ["A"]))


class TestApply:
    def test_pauli_x(self):
        out = apply(X, ["B"], ket("0", ["B"]))
        np.testing.assert_array_equal(out.amplitudes, [0, 1])

    def test_identity_is_exact(self):
        s = random_pure_state(3, 3, ["A1", "A", "B"])
        np.testing.assert_array_equal(apply(I2, ["A"], s).amplitudes, s.amplitudes)

    def test_x_on_bell_pair_gives_psi_plus(self):
        out = apply(X, ["A"], phi_plus())
        np.testing.assert_allclose(out.amplitudes, [0, R, R, 0], atol=1e-15)

    @pytest.mark.parametrize("pos", [0, 1, 2])
    def test_matches_full_matrix(self, pos):
        s = random_pure_state(11, 3, ["a", "b", "c"])
        u = qcore.random_unitary(5, 2)
        out = apply(u, [s.labels[pos]], s)
        np.testing.assert_allclose(out.amplitudes, embed(u.matrix, pos, 3) @ s.amplitudes, atol=1e-12)

    def test_two_qubit_target_order(self):
        s = ket("100", ["a", "b", "c"])
        # control c, target a: c is 0 so nothing happens
        assert apply(CNOT, ["c", "a"], s).amplitudes[4] == 1
        # control a, target c
        assert apply(CNOT, ["a", "c"], s).amplitudes[5] == 1

    def test_dimension_mismatch(self):
        with pytest.raises(qcore.DimensionError):
            apply(CNOT, ["A"], phi_plus())

    def test_unknown_label(self):
        with pytest.raises(qcore.LabelError):
            apply(X, ["Q"], phi_plus())

    def test_non_unitary_rejected(self):
        with pytest.raises(qcore.NotUnitaryError):
            apply(Operator(np.diag([1, 0]), unitary=False), ["A"], phi_plus())
        with pytest.raises(qcore.NotUnitaryError):
            Operator(np.diag([1, 0.5]))


class TestMeasure:
    Z_BASIS = [projector(ket("0")), projector(ket("1"))]

    def test_plus_state(self):
        plus = apply(H, ["q0"], ket("0"))
        rec, _ = measure(plus, self.Z_BASIS, ["q0"], rng_seed=0)
        assert rec.probabilities == pytest.approx((0.5, 0.5), abs=1e-12)
        assert not rec.forced

    def test_forced_outcome(self):
        plus = apply(H, ["q0"], ket("0"))
        rec, post = measure(plus, self.Z_BASIS, ["q0"], forced=1)
        assert rec.outcome_index == 1 and rec.forced
        assert rec.predicted_probability == pytest.approx(0.5)
        np.testing.assert_allclose(post.amplitudes, [0, 1], atol=1e-15)

    def test_impossible_forcing(self):
        with pytest.raises(qcore.ImpossibleConditioningError):
            measure(ket("0"), self.Z_BASIS, ["q0"], forced=1)

    def test_incomplete_projectors(self):
        with pytest.raises(qcore.InvalidMeasurementError):
            measure(ket("0"), self.Z_BASIS[:1], ["q0"])

    def test_non_orthogonal_projectors(self):
        plus = apply(H, ["q0"], ket("0"))
        with pytest.raises(qcore.InvalidMeasurementError):
            measure(ket("0"), [self.Z_BASIS[0], projector(plus)], ["q0"])

    def test_sampling_is_seeded(self):
        plus = apply(H, ["q0"], ket("0"))
        outs = {measure(plus, self.Z_BASIS, ["q0"], rng_seed=s)[0].outcome_index for s in range(40)}
        assert outs == {0, 1}
        a = [measure(plus, self.Z_BASIS, ["q0"], rng_seed=s)[0].outcome_index for s in range(10)]
        b = [measure(plus, self.Z_BASIS, ["q0"], rng_seed=s)[0].outcome_index for s in range(10)]
        assert a == b

    def test_sampled_frequencies_follow_born_rule(self):
        s = qubit(np.sqrt(0.2), np.sqrt(0.8))
        hits = sum(measure(s, self.Z_BASIS, ["q0"], rng_seed=k)[0].outcome_index for k in range(4000))
        # binomial sd = sqrt(4000 * 0.16) ≈ 25
        assert abs(hits - 3200) < 5 * 25.3

    def test_bell_measurement_of_three_qubit_state(self):
        s = tensor(qubit(0.6, 0.8, "A1"), phi_plus())
        projs = [Operator(np.outer(v, v), unitary=False) for v in BELL.values()]
        rec, _ = measure(s, projs, ["A1", "A"], rng_seed=1)
        assert rec.probabilities == pytest.approx((0.25,) * 4, abs=1e-12)


class TestPartialTrace:
    def test_product_state(self):
        psi = qubit(0.6, 0.8j, "A1")
        rho = partial_trace(tensor(psi, phi_plus()), ["A1"])
        np.testing.assert_allclose(rho.matrix, projector(psi).matrix, atol=1e-15)

    def test_bell_half(self):
        np.testing.assert_allclose(partial_trace(phi_plus(), ["B"]).matrix, np.eye(2) / 2)

    @pytest.mark.parametrize("keep", [[0], [1], [2], [0, 2], [2, 0], [1, 2]])
    def test_matches_loop_oracle(self, keep):
        s = random_pure_state(21, 3, ["a", "b", "c"])
        rho = partial_trace(s, [s.labels[k] for k in keep])
        np.testing.assert_allclose(rho.matrix, reduced_by_loops(s.amplitudes, 3, keep), atol=1e-14)

    def test_errors(self):
        with pytest.raises(qcore.LabelError):
            partial_trace(phi_plus(), [])
        with pytest.raises(qcore.LabelError):
            partial_trace(phi_plus(), ["C"])


class TestFidelity:
    def test_pure(self):
        psi = random_pure_state(4, 1)
        assert fidelity(partial_trace(psi, ["q0"]), psi) == pytest.approx(1, abs=1e-12)

    def test_maximally_mixed(self):
        assert fidelity(DensityMatrix(np.eye(2) / 2), random_pure_state(9, 1)) == pytest.approx(0.5)

    def test_orthogonal(self):
        assert fidelity(DensityMatrix(np.diag([1, 0])), ket("1")) == 0

    def test_dimension_mismatch(self):
        with pytest.raises(qcore.DimensionError):
            fidelity(DensityMatrix(np.eye(4) / 4), ket("1"))

    def test_density_matrix_validation(self):
        with pytest.raises(qcore.QuantumError):
            DensityMatrix(np.diag([1.5, -0.5]))
        with pytest.raises(qcore.QuantumError):
            DensityMatrix(np.eye(2))


class TestRandomState:
    def test_deterministic(self):
        np.testing.assert_array_equal(random_pure_state(5, 2).amplitudes, random_pure_state(5, 2).amplitudes)

    @given(seeds, st.integers(1, 5))
    @settings(max_examples=50, deadline=None)
    def test_normalized(self, seed, n):
        assert np.linalg.norm(random_pure_state(seed, n).amplitudes) == pytest.approx(1, abs=1e-10)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_first_amplitude_weight_is_uniform_on_average(self, n):
        w = np.array([abs(random_pure_state(k, n).amplitudes[0]) ** 2 for k in range(10_000)])
        se = w.std(ddof=1) / np.sqrt(w.size)
        assert abs(w.mean() - 2.0 ** -n) < 5 * se

    def test_rejects_zero_qubits(self):
        with pytest.raises(qcore.DimensionError):
            random_pure_state(0, 0)

    def test_random_unitary(self):
        u = qcore.random_unitary(3, 4)
        assert qcore.is_unitary(u.matrix)
        np.testing.assert_array_equal(u.matrix, qcore.random_unitary(3, 4).matrix)


# properties

@given(seeds, st.sampled_from(list(PAULI)), st.integers(0, 2))
@settings(max_examples=100, deadline=None)
def test_unitaries_preserve_norm(seed, which, pos):
    s = random_pure_state(seed, 3, ["A1", "A", "B"])
    out = apply(Operator(PAULI[which]), [s.labels[pos]], s)
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-10
    out = apply(qcore.random_unitary(seed, 4), ["B", "A1"], s)
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-10


@given(seeds, seeds)
@settings(max_examples=100, deadline=None)
def test_measurement_probabilities_and_collapse(state_seed, basis_seed):
    s = random_pure_state(state_seed, 3, ["a", "b", "c"])
    u = qcore.random_unitary(basis_seed, 4).matrix
    projs = [Operator(np.outer(u[:, k], u[:, k].conj()), unitary=False) for k in range(4)]
    rec, post = measure(s, projs, ["c", "a"], rng_seed=state_seed)
    assert abs(sum(rec.probabilities) - 1) <= 1e-10
    # P_k |s'> = |s'>
    again, _ = measure(post, projs, ["c", "a"], forced=rec.outcome_index)
    assert again.predicted_probability == pytest.approx(1, abs=1e-10)


@given(seeds, seeds)
@settings(max_examples=100, deadline=None)
def test_product_factors_are_pure(seed_a, seed_b):
    s = tensor(random_pure_state(seed_a, 1, ["a"]), random_pure_state(seed_b, 2, ["b", "c"]))
    assert abs(partial_trace(s, ["a"]).purity() - 1) <= 1e-9
    assert abs(partial_trace(s, ["b", "c"]).purity() - 1) <= 1e-9


@pytest.mark.parametrize("i", list(BELL))
@pytest.mark.parametrize("half", ["A", "B"])
def test_bell_halves_are_maximally_mixed(i, half):
    rho = partial_trace(StateVector(("A", "B"), BELL[i]), [half])
    assert np.max(np.abs(rho.matrix - np.eye(2) / 2)) <= 1e-10


def test_same_state_ignores_global_phase():
    s = random_pure_state(8, 2)
    t = StateVector(s.labels, 1j * s.amplitudes)
    assert qcore.same_state(s, t)
    assert qcore.phase_aligned_deviation(s, t) < 1e-15
    assert not qcore.same_state(ket("00"), ket("01"))
