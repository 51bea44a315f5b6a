"""Steps 1-4 of the search pipeline with the idealized pairwise flag pass.

Step 4 is the exact combinatorial map: for every pair of input strings
differing in one bit, a flag-0 component paired with a flag-1 component has
its flag switched to 1. One pass per input bit saturates the flags whenever
at least one input is marked.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .qstate import DENSE_CAP, QStateError, StateVector, apply_single_qubit_gate

# U|0> = (|0>+|1>)/sqrt(2), U|1> = (-|0>+|1>)/sqrt(2)
SPREAD_GATE = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2.0)


class PipelineError(ValueError):
    """State outside the class the pairwise pass is defined on."""


class MarkedCountWarning(UserWarning):
    """More than one marked input: outside the algorithm's s <= 1 assumption."""


@dataclass(frozen=True)
class OracleSpec:
    """Marked set S defining the hidden predicate f (f(x)=1 iff x in S)."""

    n_inputs: int
    marked: frozenset

    def __post_init__(self):
        object.__setattr__(self, "marked", frozenset(int(x) for x in self.marked))
        limit = 2**self.n_inputs
        bad = [x for x in self.marked if not 0 <= x < limit]
        if bad:
            raise PipelineError(f"marked values {bad} outside [0, {limit})")
        if self.s >= 2:
            warnings.warn(
                f"{self.s} marked inputs: the algorithm's correctness "
                "assumption is s <= 1; simulating anyway",
                MarkedCountWarning,
                stacklevel=2,
            )

    @property
    def s(self):
        return len(self.marked)


@dataclass(frozen=True)
class PipelineState:
    """Pipeline output: state plus pass/operation accounting."""

    state: StateVector
    pass_count: int
    op_count: int


def init_state(n):
    """|0...0>|0>: amplitude 1 at basis index 0."""
    if not 1 <= n <= DENSE_CAP:
        raise QStateError(f"n={n} outside dense range [1, {DENSE_CAP}]")
    amps = np.zeros(2 ** (n + 1), dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(n, amps)


def apply_walsh(state):
    """Apply the spreading gate U to every input qubit; flag untouched."""
    for q in range(state.n_inputs):
        state = apply_single_qubit_gate(state, q, SPREAD_GATE)
    return state


def apply_oracle(state, oracle):
    """XOR the predicate into the flag: |x>|b> -> |x>|b ^ f(x)>."""
    if oracle.n_inputs != state.n_inputs:
        raise PipelineError(
            f"oracle is over {oracle.n_inputs} inputs, state over {state.n_inputs}"
        )
    rows = state.amplitudes.reshape(-1, 2).copy()
    idx = sorted(oracle.marked)
    rows[idx] = rows[idx, ::-1]
    return StateVector(state.n_inputs, rows.reshape(-1))


def pairwise_pass(state, pair_bit):
    """One nonlinear pass pairing input strings that differ in slot `pair_bit`.

    `pair_bit` is 0-based: 0 pairs strings differing in i_1. For each pair
    carrying flags {0, 1} the flag-0 amplitude is moved to the flag-1 basis
    state of the same input string; {0,0} and {1,1} pairs are untouched.
    """
    n = state.n_inputs
    if not 0 <= pair_bit < n:
        raise PipelineError(f"pair_bit {pair_bit} out of range [0, {n})")
    rows = state.amplitudes.reshape(-1, 2).copy()
    supp0 = rows[:, 0] != 0
    supp1 = rows[:, 1] != 0
    if np.any(supp0 & supp1):
        bad = int(np.flatnonzero(supp0 & supp1)[0])
        raise PipelineError(
            f"input string {bad:0{n}b} has support on both flag values; "
            "state is outside the algorithm's state class"
        )
    mask = 1 << (n - 1 - pair_bit)
    x = np.flatnonzero((np.arange(2**n) & mask) == 0)
    y = x | mask
    for lo, hi in ((x, y), (y, x)):
        move = supp0[lo] & supp1[hi]
        src = lo[move]
        rows[src, 1] = rows[src, 0]
        rows[src, 0] = 0.0
    return StateVector(n, rows.reshape(-1))


def step4_pairwise(state, op_count=0):
    """Run one pairwise pass per input bit, in slot order.

    If any input is marked every flag ends up 1; for an empty marked set the
    state is unchanged. Adds exactly n to the operation count.
    """
    n = state.n_inputs
    for bit in range(n):
        state = pairwise_pass(state, bit)
    return PipelineState(state=state, pass_count=n, op_count=op_count + n)


def measure_flag(state):
    """Probability of reading flag = 1 (exact, no sampling).

    Normalized by the total weight so that an empty flag sector yields
    exactly 0.0 or 1.0 despite rounding in the 1/sqrt(2) amplitudes.
    """
    rows = state.amplitudes.reshape(-1, 2)
    weights = (np.abs(rows) ** 2).sum(axis=0)
    return float(weights[1] / weights.sum())


def post_step3(oracle):
    """Steps 1-3: uniform superposition with flags set by the oracle."""
    return apply_oracle(apply_walsh(init_state(oracle.n_inputs)), oracle)


def run_pairwise(oracle):
    """Full Steps 1-4 for `oracle`; op_count counts gate, oracle and passes."""
    state = init_state(oracle.n_inputs)
    state = apply_walsh(state)
    state = apply_oracle(state, oracle)
    ops_so_far = oracle.n_inputs + 1
    return step4_pairwise(state, op_count=ops_so_far)
