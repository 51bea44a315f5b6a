"""Pure-Python (NumPy) kernels.

Fallback implementations of the hot inner loops; the compiled backend in
``_kernels_cy`` exposes the same functions with identical signatures.
"""

import numpy as np


def apply_gate(amps, gate, bit):
    """Apply a 2x2 gate to the qubit living at bit position `bit`.

    `amps` is the dense amplitude vector, basis index bit `bit` selects the
    target qubit (bit 0 = least significant). Returns a new array.
    """
    n = amps.shape[0]
    stride = 1 << bit
    a = amps.reshape(-1, 2, stride)
    out = np.einsum("ab,ibk->iak", gate, a)
    return np.ascontiguousarray(out.reshape(n))


def rk4_nonlinear(psi0, eta, eps, alpha, dt, n_steps):
    """Integrate the flag-local nonlinear equation with classical RK4.

    i dpsi/dt = eps * tanh(alpha * <psi|1 (x) (A - eta*1)|psi>) * (1 (x) A) psi

    with A = [[eta, beta], [beta, -eta]], beta = sqrt(1 - eta^2), acting on
    the flag (least significant) bit. `psi0` has even length 2*m.

    Returns (psi_final, sigma3, a_expect, norm) where the three arrays have
    n_steps + 1 entries sampled before each step and after the last.
    """
    beta = np.sqrt(1.0 - eta * eta)
    a_mat = np.array([[eta, beta], [beta, -eta]])

    psi = psi0.astype(np.complex128).reshape(-1, 2)
    sigma3 = np.empty(n_steps + 1)
    a_expect = np.empty(n_steps + 1)
    norm = np.empty(n_steps + 1)

    def rhs(p):
        theta = np.einsum("xf,fg,xg->", p.conj(), a_mat, p).real - eta * (
            np.abs(p) ** 2
        ).sum()
        g = eps * np.tanh(alpha * theta)
        return -1j * g * (p @ a_mat)

    def observe(k, p):
        pops = (np.abs(p) ** 2).sum(axis=0)
        sigma3[k] = pops[0] - pops[1]
        a_expect[k] = np.einsum("xf,fg,xg->", p.conj(), a_mat, p).real
        norm[k] = np.sqrt(pops.sum())

    observe(0, psi)
    for k in range(n_steps):
        k1 = rhs(psi)
        k2 = rhs(psi + 0.5 * dt * k1)
        k3 = rhs(psi + 0.5 * dt * k2)
        k4 = rhs(psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        observe(k + 1, psi)

    return np.ascontiguousarray(psi.reshape(-1)), sigma3, a_expect, norm
