"""Dense qubit-register states, single-qubit gates, partial traces, purity.

Basis convention, shared by every module: a basis index b encodes the input
bits i_1 ... i_n (i_1 most significant) followed by the flag bit as the
least significant bit. Qubit 0 is i_1, qubit n_inputs is the flag.
"""

from dataclasses import dataclass

import numpy as np

from . import kernels

STATE_TOL = 1e-12
GATE_UNITARY_TOL = 1e-10
DENSE_CAP = 20


class QStateError(ValueError):
    """Invalid state, gate, or subsystem selector."""


@dataclass(frozen=True)
class StateVector:
    """Unit-norm amplitude vector over n_inputs input qubits plus one flag."""

    n_inputs: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        object.__setattr__(self, "amplitudes", amps)
        if self.n_inputs < 1:
            raise QStateError("need at least one input qubit")
        expected = 2 ** (self.n_inputs + 1)
        if amps.shape != (expected,):
            raise QStateError(
                f"amplitude array has length {amps.shape}, expected ({expected},)"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > STATE_TOL:
            raise QStateError(f"state norm {norm} deviates from 1 beyond {STATE_TOL}")
        amps.flags.writeable = False

    @property
    def n_qubits(self):
        return self.n_inputs + 1

    @property
    def flag_qubit(self):
        """Index of the flag qubit in the qubit numbering."""
        return self.n_inputs

    def bit_position(self, qubit):
        """Bit position of `qubit` inside a basis index (flag = bit 0)."""
        if not 0 <= qubit <= self.n_inputs:
            raise QStateError(f"qubit index {qubit} out of range [0, {self.n_inputs}]")
        return self.n_inputs - qubit

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive, trace-1 matrix (2x2 for single-qubit reductions)."""

    dim: int
    entries: np.ndarray

    def __post_init__(self):
        mat = np.ascontiguousarray(self.entries, dtype=np.complex128)
        object.__setattr__(self, "entries", mat)
        if mat.shape != (self.dim, self.dim):
            raise QStateError(f"matrix shape {mat.shape} does not match dim {self.dim}")
        if np.max(np.abs(mat - mat.conj().T)) > STATE_TOL:
            raise QStateError("density matrix is not Hermitian")
        if abs(np.trace(mat).real - 1.0) > STATE_TOL:
            raise QStateError("density matrix trace deviates from 1")
        if np.min(np.linalg.eigvalsh(mat)) < -STATE_TOL:
            raise QStateError("density matrix has a negative eigenvalue")
        mat.flags.writeable = False


def is_unitary(gate, tol=GATE_UNITARY_TOL):
    gate = np.asarray(gate, dtype=np.complex128)
    if gate.shape != (2, 2):
        return False
    return np.max(np.abs(gate.conj().T @ gate - np.eye(2))) <= tol


def apply_single_qubit_gate(state, qubit_index, gate):
    """Apply a 2x2 unitary to one tensor factor of the register.

    `qubit_index` runs over 0 .. n_inputs, the last value addressing the
    flag qubit. Non-unitary gates and out-of-range indices are rejected.
    """
    gate = np.ascontiguousarray(gate, dtype=np.complex128)
    if not is_unitary(gate):
        dev = np.max(np.abs(gate.conj().T @ gate - np.eye(2)))
        raise QStateError(
            f"gate is not unitary within {GATE_UNITARY_TOL} (deviation {dev:.3e})"
        )
    bit = state.bit_position(qubit_index)
    out = kernels.apply_gate(state.amplitudes, gate, bit)
    return StateVector(state.n_inputs, out)


def partial_trace(state, keep):
    """Reduced 2x2 density matrix of one qubit.

    `keep` is either the string "flag" or a qubit index (0 .. n_inputs).
    """
    if keep == "flag":
        qubit = state.flag_qubit
    else:
        qubit = int(keep)
    state.bit_position(qubit)  # validates the index
    tensor = state.amplitudes.reshape([2] * state.n_qubits)
    # qubit q sits on tensor axis q (axis 0 = i_1, last axis = flag)
    rows = np.moveaxis(tensor, qubit, 0).reshape(2, -1)
    rho = rows @ rows.conj().T
    # symmetrize away last-bit rounding so the validator never trips
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix(2, rho)


def purity(rho):
    """Tr rho^2; 1 for pure states, 1/dim for maximally mixed."""
    return float(np.trace(rho.entries @ rho.entries).real)
