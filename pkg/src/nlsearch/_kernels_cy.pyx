# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: gate application and the RK4 nonlinear integrator.

Mirrors the API of ``_kernels_py``; selected at import time by ``kernels``.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt, tanh

cnp.import_array()

ctypedef double complex cplx


def apply_gate(const cplx[::1] amps, const cplx[:, ::1] gate, int bit):
    """Apply a 2x2 gate to the qubit at bit position `bit` (0 = LSB)."""
    cdef Py_ssize_t n = amps.shape[0]
    cdef Py_ssize_t stride = 1 << bit
    out_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] out = out_arr
    cdef cplx g00 = gate[0, 0], g01 = gate[0, 1]
    cdef cplx g10 = gate[1, 0], g11 = gate[1, 1]
    cdef Py_ssize_t block, j
    cdef cplx a0, a1
    for block in range(0, n, 2 * stride):
        for j in range(block, block + stride):
            a0 = amps[j]
            a1 = amps[j + stride]
            out[j] = g00 * a0 + g01 * a1
            out[j + stride] = g10 * a0 + g11 * a1
    return out_arr


cdef double _a_expect(cplx[::1] psi, double eta, double beta) nogil:
    cdef Py_ssize_t m = psi.shape[0] // 2
    cdef double acc = 0.0
    cdef Py_ssize_t i
    cdef cplx p0, p1
    for i in range(m):
        p0 = psi[2 * i]
        p1 = psi[2 * i + 1]
        acc += eta * (p0.real * p0.real + p0.imag * p0.imag
                      - p1.real * p1.real - p1.imag * p1.imag)
        acc += 2.0 * beta * (p0.real * p1.real + p0.imag * p1.imag)
    return acc


cdef double _norm2(cplx[::1] psi) nogil:
    cdef Py_ssize_t i
    cdef double acc = 0.0
    for i in range(psi.shape[0]):
        acc += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    return acc


cdef void _rhs(cplx[::1] psi, cplx[::1] out, double eta, double beta,
               double eps, double alpha) nogil:
    cdef double theta = _a_expect(psi, eta, beta) - eta * _norm2(psi)
    cdef double g = eps * tanh(alpha * theta)
    cdef Py_ssize_t m = psi.shape[0] // 2
    cdef Py_ssize_t i
    cdef cplx p0, p1
    # out = -i * g * (A psi) rowwise on the flag factor
    for i in range(m):
        p0 = psi[2 * i]
        p1 = psi[2 * i + 1]
        out[2 * i] = -1j * g * (eta * p0 + beta * p1)
        out[2 * i + 1] = -1j * g * (beta * p0 - eta * p1)


def rk4_nonlinear(const cplx[::1] psi0, double eta, double eps, double alpha,
                  double dt, Py_ssize_t n_steps):
    """RK4 integration of the flag-local nonlinear Schrodinger equation.

    Returns (psi_final, sigma3, a_expect, norm); see ``_kernels_py`` for the
    sampling convention.
    """
    cdef double beta = sqrt(1.0 - eta * eta)
    cdef Py_ssize_t n = psi0.shape[0]
    cdef Py_ssize_t m = n // 2

    psi_arr = np.array(psi0, dtype=np.complex128, copy=True)
    sigma3_arr = np.empty(n_steps + 1)
    a_expect_arr = np.empty(n_steps + 1)
    norm_arr = np.empty(n_steps + 1)

    cdef cplx[::1] psi = psi_arr
    cdef double[::1] sigma3 = sigma3_arr
    cdef double[::1] a_expect = a_expect_arr
    cdef double[::1] norm = norm_arr

    k1_arr = np.empty(n, dtype=np.complex128)
    k2_arr = np.empty(n, dtype=np.complex128)
    k3_arr = np.empty(n, dtype=np.complex128)
    k4_arr = np.empty(n, dtype=np.complex128)
    tmp_arr = np.empty(n, dtype=np.complex128)
    cdef cplx[::1] k1 = k1_arr, k2 = k2_arr, k3 = k3_arr, k4 = k4_arr
    cdef cplx[::1] tmp = tmp_arr

    cdef Py_ssize_t step, i
    cdef double pop0, pop1
    cdef cplx p

    with nogil:
        for step in range(n_steps + 1):
            pop0 = 0.0
            pop1 = 0.0
            for i in range(m):
                p = psi[2 * i]
                pop0 += p.real * p.real + p.imag * p.imag
                p = psi[2 * i + 1]
                pop1 += p.real * p.real + p.imag * p.imag
            sigma3[step] = pop0 - pop1
            a_expect[step] = _a_expect(psi, eta, beta)
            norm[step] = sqrt(pop0 + pop1)
            if step == n_steps:
                break

            _rhs(psi, k1, eta, beta, eps, alpha)
            for i in range(n):
                tmp[i] = psi[i] + 0.5 * dt * k1[i]
            _rhs(tmp, k2, eta, beta, eps, alpha)
            for i in range(n):
                tmp[i] = psi[i] + 0.5 * dt * k2[i]
            _rhs(tmp, k3, eta, beta, eps, alpha)
            for i in range(n):
                tmp[i] = psi[i] + dt * k3[i]
            _rhs(tmp, k4, eta, beta, eps, alpha)
            for i in range(n):
                psi[i] = psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i]
                                                + 2.0 * k3[i] + k4[i])

    return psi_arr, sigma3_arr, a_expect_arr, norm_arr
