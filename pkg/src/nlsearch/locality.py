"""Signaling vs no-signaling contrast for the two flavors of Step 4.

The idealized pairwise map changes reduced density matrices of qubits it
never touches (the Bell-pair transformation purifies a remote maximally
mixed state); the local closed-form dynamics leaves every input-qubit
reduction invariant.
"""

from dataclasses import dataclass, field

import numpy as np

from .dynamics import closed_form_evolve
from .pipeline import post_step3, step4_pairwise
from .qstate import StateVector, partial_trace, purity

SIGNALING_THRESHOLD = 1e-9


class LocalityError(ValueError):
    """Input state outside the domain of the requested transformation."""


@dataclass(frozen=True)
class QubitReport:
    """Pre/post reduced density matrices and purities for one qubit."""

    qubit: int
    rho_pre: np.ndarray
    rho_post: np.ndarray
    purity_pre: float
    purity_post: float
    max_deviation: float


@dataclass(frozen=True)
class LocalityReport:
    """Per-qubit reduction changes and the resulting verdict."""

    transformation: str
    qubits: list
    max_deviation: float
    verdict: str
    meta: dict = field(default_factory=dict)

    def to_dict(self):
        def c2l(mat):
            return [[[float(z.real), float(z.imag)] for z in row] for row in mat]

        return {
            "transformation": self.transformation,
            "qubits": [
                {
                    "qubit": q.qubit,
                    "rho_pre": c2l(q.rho_pre),
                    "rho_post": c2l(q.rho_post),
                    "purity_pre": q.purity_pre,
                    "purity_post": q.purity_post,
                    "max_deviation": q.max_deviation,
                }
                for q in self.qubits
            ],
            "max_deviation": self.max_deviation,
            "verdict": self.verdict,
            "meta": self.meta,
        }


def mob_transform(state):
    """(|0>|0> + |1>|1>)/sqrt(2)  ->  (|0>|1> + |1>|1>)/sqrt(2).

    Defined only on the Bell-type input (up to global phase); anything else
    is rejected rather than extrapolated to a full nonlinear map.
    """
    if state.n_inputs != 1:
        raise LocalityError("the transformation is defined on a 2-qubit state")
    a = state.amplitudes
    root_half = 1.0 / np.sqrt(2.0)
    ok = (
        abs(a[1]) < 1e-12
        and abs(a[2]) < 1e-12
        and abs(a[0] - a[3]) < 1e-12
        and abs(abs(a[0]) - root_half) < 1e-12
    )
    if not ok:
        raise LocalityError("input is not the Bell-type state (up to global phase)")
    out = np.zeros(4, dtype=np.complex128)
    out[1] = a[0]
    out[3] = a[3]
    return StateVector(1, out)


def _qubit_report(qubit, pre_state, post_state):
    rho_pre = partial_trace(pre_state, qubit)
    rho_post = partial_trace(post_state, qubit)
    dev = float(np.max(np.abs(rho_post.entries - rho_pre.entries)))
    return QubitReport(
        qubit=qubit,
        rho_pre=rho_pre.entries,
        rho_post=rho_post.entries,
        purity_pre=purity(rho_pre),
        purity_post=purity(rho_post),
        max_deviation=dev,
    )


def _verdict(reports):
    dev = max((q.max_deviation for q in reports), default=0.0)
    return dev, ("signaling" if dev > SIGNALING_THRESHOLD else "no-signaling")


def signaling_check_mob():
    """Bell-pair transformation: the untouched qubit's reduction purifies."""
    root_half = 1.0 / np.sqrt(2.0)
    bell = StateVector(1, np.array([root_half, 0.0, 0.0, root_half]))
    post = mob_transform(bell)
    reports = [_qubit_report(0, bell, post)]
    dev, verdict = _verdict(reports)
    return LocalityReport(
        transformation="pairwise-bell",
        qubits=reports,
        max_deviation=dev,
        verdict=verdict,
    )


def no_signaling_check(n, oracle, p, times):
    """Flag-local closed-form evolution leaves every input reduction fixed."""
    if oracle.n_inputs != n:
        raise LocalityError("oracle size does not match n")
    pre = post_step3(oracle)
    worst = {k: 0.0 for k in range(n)}
    last_post = pre
    for t in times:
        post = closed_form_evolve(pre, t, p)
        last_post = post
        for k in range(n):
            dev = float(
                np.max(
                    np.abs(partial_trace(post, k).entries - partial_trace(pre, k).entries)
                )
            )
            worst[k] = max(worst[k], dev)
    reports = []
    for k in range(n):
        rep = _qubit_report(k, pre, last_post)
        reports.append(
            QubitReport(
                qubit=k,
                rho_pre=rep.rho_pre,
                rho_post=rep.rho_post,
                purity_pre=rep.purity_pre,
                purity_post=rep.purity_post,
                max_deviation=worst[k],
            )
        )
    dev, verdict = _verdict(reports)
    return LocalityReport(
        transformation="flag-local-closed-form",
        qubits=reports,
        max_deviation=dev,
        verdict=verdict,
        meta={"times": [float(t) for t in times], "s": oracle.s},
    )


def pairwise_signaling_check(oracle):
    """Same reduction comparison run against the idealized pairwise Step 4."""
    pre = post_step3(oracle)
    post = step4_pairwise(pre).state
    reports = [_qubit_report(k, pre, post) for k in range(oracle.n_inputs)]
    dev, verdict = _verdict(reports)
    return LocalityReport(
        transformation="pairwise-step4",
        qubits=reports,
        max_deviation=dev,
        verdict=verdict,
        meta={"s": oracle.s},
    )
