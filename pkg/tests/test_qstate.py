import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nlsearch.qstate import (
    DensityMatrix,
    QStateError,
    StateVector,
    apply_single_qubit_gate,
    partial_trace,
    purity,
)

ROOT_HALF = 1.0 / np.sqrt(2.0)
# U|0> = (|0>+|1>)/sqrt(2), U|1> = (-|0>+|1>)/sqrt(2)
U = np.array([[1.0, -1.0], [1.0, 1.0]]) * ROOT_HALF


def basis_state(n_inputs, index):
    amps = np.zeros(2 ** (n_inputs + 1), dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(n_inputs, amps)


def rotation_gate(theta, phi):
    """Unitary built from two angles; covers a 2-parameter family."""
    return np.array(
        [
            [np.cos(theta), -np.sin(theta) * np.exp(1j * phi)],
            [np.sin(theta) * np.exp(-1j * phi), np.cos(theta)],
        ]
    )


class TestApplyGate:
    def test_spread_gate_on_zero(self):
        # |00> with U on qubit 0 -> (|0>+|1>)/sqrt(2) on that qubit
        out = apply_single_qubit_gate(basis_state(1, 0b00), 0, U)
        expected = np.array([ROOT_HALF, 0.0, ROOT_HALF, 0.0])
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    def test_spread_gate_on_one(self):
        out = apply_single_qubit_gate(basis_state(1, 0b10), 0, U)
        expected = np.array([-ROOT_HALF, 0.0, ROOT_HALF, 0.0])
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    def test_identity_gate(self):
        state = StateVector(1, np.array([0.5, 0.5, 0.5, 0.5]))
        out = apply_single_qubit_gate(state, 1, np.eye(2))
        np.testing.assert_array_equal(out.amplitudes, state.amplitudes)

    def test_flag_qubit_addressable(self):
        out = apply_single_qubit_gate(basis_state(2, 0), 2, U)
        expected = np.zeros(8)
        expected[0] = expected[1] = ROOT_HALF
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-15)

    def test_non_unitary_rejected(self):
        with pytest.raises(QStateError, match="not unitary"):
            apply_single_qubit_gate(basis_state(1, 0), 0, np.array([[1, 0], [0, 2]]))

    def test_index_out_of_range(self):
        with pytest.raises(QStateError, match="out of range"):
            apply_single_qubit_gate(basis_state(1, 0), 2, np.eye(2))

    @given(
        theta=st.floats(-np.pi, np.pi),
        phi=st.floats(-np.pi, np.pi),
        qubit=st.integers(0, 2),
    )
    @settings(max_examples=50, deadline=None)
    def test_norm_preserved_and_inverse_restores(self, theta, phi, qubit):
        rng = np.random.default_rng(7)
        amps = rng.normal(size=8) + 1j * rng.normal(size=8)
        amps /= np.linalg.norm(amps)
        state = StateVector(2, amps)
        gate = rotation_gate(theta, phi)
        forward = apply_single_qubit_gate(state, qubit, gate)
        assert abs(forward.norm() - 1.0) < 1e-12
        back = apply_single_qubit_gate(forward, qubit, gate.conj().T)
        np.testing.assert_allclose(back.amplitudes, state.amplitudes, atol=1e-12)


def reference_flag_reduction(state):
    """Independent oracle: accumulate the 2x2 reduction entry by entry."""
    dim = state.amplitudes.size
    rho = np.zeros((2, 2), dtype=np.complex128)
    for b in range(dim):
        for c in range(dim):
            if b >> 1 == c >> 1:  # same input bits
                rho[b & 1, c & 1] += state.amplitudes[b] * np.conj(state.amplitudes[c])
    return rho


class TestPartialTrace:
    def test_flag_reduction_worked_example(self):
        # post-oracle state for n=3, marked input 110: 8 components of
        # weight 1/8, exactly one carrying flag 1
        amps = np.zeros(16, dtype=np.complex128)
        for x in range(8):
            flag = 1 if x == 0b110 else 0
            amps[(x << 1) | flag] = ROOT_HALF**3
        state = StateVector(3, amps)
        rho = partial_trace(state, "flag")
        np.testing.assert_allclose(rho.entries, reference_flag_reduction(state), atol=1e-15)
        np.testing.assert_allclose(rho.entries, np.diag([7 / 8, 1 / 8]), atol=1e-12)

    def test_product_state(self):
        rho = partial_trace(basis_state(3, 0), "flag")
        np.testing.assert_allclose(rho.entries, np.diag([1.0, 0.0]), atol=1e-15)

    def test_bell_pair_input_qubit(self):
        bell = StateVector(1, np.array([ROOT_HALF, 0.0, 0.0, ROOT_HALF]))
        rho = partial_trace(bell, 0)
        np.testing.assert_allclose(rho.entries, np.diag([0.5, 0.5]), atol=1e-15)

    def test_random_states_give_valid_density_matrices(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            amps = rng.normal(size=16) + 1j * rng.normal(size=16)
            amps /= np.linalg.norm(amps)
            state = StateVector(3, amps)
            for keep in (0, 1, 2, "flag"):
                rho = partial_trace(state, keep)
                assert np.max(np.abs(rho.entries - rho.entries.conj().T)) < 1e-12
                assert abs(np.trace(rho.entries).real - 1.0) < 1e-12
                assert np.min(np.linalg.eigvalsh(rho.entries)) > -1e-12

    def test_bad_selector(self):
        with pytest.raises(QStateError):
            partial_trace(basis_state(1, 0), 5)


class TestPurity:
    def test_maximally_mixed(self):
        assert purity(DensityMatrix(2, np.diag([0.5, 0.5]))) == pytest.approx(0.5)

    def test_pure_projector(self):
        v = np.array([0.6, 0.8j])
        assert purity(DensityMatrix(2, np.outer(v, v.conj()))) == pytest.approx(1.0)

    def test_worked_example_value(self):
        # Tr diag(7/8, 1/8)^2 = 49/64 + 1/64 = 50/64
        rho = DensityMatrix(2, np.diag([7 / 8, 1 / 8]))
        assert purity(rho) == pytest.approx(50 / 64, abs=1e-15)


class TestValidation:
    def test_wrong_length_rejected(self):
        with pytest.raises(QStateError, match="length"):
            StateVector(2, np.zeros(4))

    def test_non_normalized_rejected(self):
        with pytest.raises(QStateError, match="norm"):
            StateVector(1, np.array([1.0, 1.0, 0.0, 0.0]))

    def test_density_matrix_negative_eigenvalue_rejected(self):
        with pytest.raises(QStateError):
            DensityMatrix(2, np.diag([1.5, -0.5]))
