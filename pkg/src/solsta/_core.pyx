# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: fixed-step RK4 for the soliton ODE system and the
Crank-Nicolson stepping loop. Must stay semantically identical to _pycore.py."""

import numpy as np
cimport numpy as cnp
from libc.math cimport isfinite

cnp.import_array()

cdef double PI2 = 3.141592653589793 ** 2


cdef inline void _rhs(double* y, double g, double omega, double n_norm,
                      double x0, double* out) noexcept nogil:
    cdef double a = y[0]
    cdef double b = y[1]
    cdef double a2 = a * a
    out[0] = 2.0 * a * b
    out[1] = 2.0 / (a2 * a2 * PI2) - 2.0 * b * b \
        - 2.0 * g * n_norm / (PI2 * a2 * a) - 2.0 * omega * omega
    out[2] = y[3]
    out[3] = -4.0 * omega * omega * (y[2] - x0)


def rk4_soliton(y0, cnp.ndarray[double, ndim=1] g_nodes,
                cnp.ndarray[double, ndim=1] g_mid,
                cnp.ndarray[double, ndim=1] x0_nodes,
                cnp.ndarray[double, ndim=1] x0_mid,
                double omega, double n_norm, double dt,
                double collapse_threshold=1e-6):
    """Classical fixed-step RK4 for (a, b, zeta, c); see _pycore.rk4_soliton."""
    cdef Py_ssize_t n_steps = g_mid.shape[0]
    cdef cnp.ndarray[double, ndim=2] out = np.empty((n_steps + 1, 4))
    cdef double[4] y, k1, k2, k3, k4, ytmp
    cdef Py_ssize_t i, j
    cdef double h = dt

    y0 = np.asarray(y0, dtype=float)
    for j in range(4):
        y[j] = y0[j]
        out[0, j] = y[j]
    if y[0] <= collapse_threshold:
        return out, 0

    for i in range(n_steps):
        _rhs(y, g_nodes[i], omega, n_norm, x0_nodes[i], k1)
        for j in range(4):
            ytmp[j] = y[j] + 0.5 * h * k1[j]
        if ytmp[0] <= collapse_threshold:
            return out, i
        _rhs(ytmp, g_mid[i], omega, n_norm, x0_mid[i], k2)
        for j in range(4):
            ytmp[j] = y[j] + 0.5 * h * k2[j]
        if ytmp[0] <= collapse_threshold:
            return out, i
        _rhs(ytmp, g_mid[i], omega, n_norm, x0_mid[i], k3)
        for j in range(4):
            ytmp[j] = y[j] + h * k3[j]
        if ytmp[0] <= collapse_threshold:
            return out, i
        _rhs(ytmp, g_nodes[i + 1], omega, n_norm, x0_nodes[i + 1], k4)
        for j in range(4):
            y[j] = y[j] + (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            out[i + 1, j] = y[j]
        if y[0] <= collapse_threshold or not isfinite(y[0]):
            return out, i
    return out, -1


def cn_evolve(cnp.ndarray[complex, ndim=1] psi,
              cnp.ndarray[double, ndim=1] x,
              double omega,
              cnp.ndarray[double, ndim=1] x0_mid,
              cnp.ndarray[double, ndim=1] g_mid,
              double dx, double dt, int n_corr=2, double tol=1e-12):
    """Advance psi in place by len(g_mid) CN steps; see _pycore.cn_evolve."""
    cdef Py_ssize_t n = psi.shape[0]
    cdef Py_ssize_t n_steps = g_mid.shape[0]
    cdef double kin = 1.0 / (2.0 * dx * dx)
    cdef double complex off = 0.5j * dt * (-kin)
    cdef double om2 = omega * omega

    cdef cnp.ndarray[double, ndim=1] rho_n = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] rho_eff = np.empty(n)
    cdef cnp.ndarray[double, ndim=1] diag_h = np.empty(n)
    cdef cnp.ndarray[complex, ndim=1] rhs = np.empty(n, dtype=complex)
    cdef cnp.ndarray[complex, ndim=1] psi_new = np.empty(n, dtype=complex)
    cdef cnp.ndarray[complex, ndim=1] psi_prev = np.empty(n, dtype=complex)
    cdef cnp.ndarray[complex, ndim=1] cprime = np.empty(n, dtype=complex)
    cdef cnp.ndarray[complex, ndim=1] dprime = np.empty(n, dtype=complex)

    cdef Py_ssize_t m, j, p
    cdef double g, xs, v, change, prev_change, dv, mag
    cdef double complex lap, diag_a, inv, hpsi
    cdef int ok

    for m in range(n_steps):
        g = g_mid[m]
        xs = x0_mid[m]
        for j in range(n):
            dv = psi[j].real * psi[j].real + psi[j].imag * psi[j].imag
            rho_n[j] = dv
            rho_eff[j] = dv
            psi_new[j] = psi[j]
        prev_change = 1e300
        for p in range(n_corr + 1):
            with nogil:
                for j in range(n):
                    v = x[j] - xs
                    diag_h[j] = 2.0 * kin + om2 * v * v - g * rho_eff[j]
                for j in range(n):
                    if j == 0:
                        lap = psi[1]
                    elif j == n - 1:
                        lap = psi[n - 2]
                    else:
                        lap = psi[j - 1] + psi[j + 1]
                    hpsi = -kin * lap + diag_h[j] * psi[j]
                    rhs[j] = psi[j] - 0.5j * dt * hpsi
                # Thomas solve of (I + i dt/2 H) psi_new = rhs
                inv = 1.0 / (1.0 + 0.5j * dt * diag_h[0])
                cprime[0] = off * inv
                dprime[0] = rhs[0] * inv
                for j in range(1, n):
                    diag_a = 1.0 + 0.5j * dt * diag_h[j]
                    inv = 1.0 / (diag_a - off * cprime[j - 1])
                    cprime[j] = off * inv
                    dprime[j] = (rhs[j] - off * dprime[j - 1]) * inv
                for j in range(n):
                    psi_prev[j] = psi_new[j]
                psi_new[n - 1] = dprime[n - 1]
                for j in range(n - 2, -1, -1):
                    psi_new[j] = dprime[j] - cprime[j] * psi_new[j + 1]
            if p >= 1:
                change = 0.0
                for j in range(n):
                    mag = abs(psi_new[j] - psi_prev[j])
                    if mag > change:
                        change = mag
                if change < tol:
                    break
                if change > 10.0 * prev_change and change > 1e-8:
                    return 1
                prev_change = change
            for j in range(n):
                rho_eff[j] = 0.5 * (rho_n[j]
                                    + psi_new[j].real * psi_new[j].real
                                    + psi_new[j].imag * psi_new[j].imag)
        ok = 1
        for j in range(n):
            if not (isfinite(psi_new[j].real) and isfinite(psi_new[j].imag)):
                ok = 0
                break
        if not ok:
            return 1
        for j in range(n):
            psi[j] = psi_new[j]
    return 0
