"""Pure NumPy/SciPy implementation of the hot kernels.

Used as the import-time fallback when the compiled extension is missing and
as the cross-check reference in the backend-consistency tests. Semantics must
match ``_core.pyx`` exactly (same formulas, same stage ordering).
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import solve_banded

PI2 = np.pi * np.pi


def _rhs(y, g, omega, n_norm, x0):
    a, b, zeta, c = y
    adot = 2.0 * a * b
    bdot = 2.0 / (a**4 * PI2) - 2.0 * b * b - 2.0 * g * n_norm / (PI2 * a**3) - 2.0 * omega * omega
    zetadot = c
    cdot = -4.0 * omega * omega * (zeta - x0)
    return np.array([adot, bdot, zetadot, cdot])


def rk4_soliton(y0, g_nodes, g_mid, x0_nodes, x0_mid, omega, n_norm, dt,
                collapse_threshold=1e-6):
    """Classical fixed-step RK4 for the (a, b, zeta, c) system.

    Returns ``(out, fail_idx)`` where ``out`` has shape (n_steps+1, 4) and
    ``fail_idx`` is -1 on success or the index of the first step at which the
    width fell to or below ``collapse_threshold`` at any stage.
    """
    n_steps = len(g_mid)
    out = np.empty((n_steps + 1, 4))
    y = np.asarray(y0, dtype=float).copy()
    out[0] = y
    if y[0] <= collapse_threshold:
        return out, 0
    h = dt
    for i in range(n_steps):
        k1 = _rhs(y, g_nodes[i], omega, n_norm, x0_nodes[i])
        y2 = y + 0.5 * h * k1
        if y2[0] <= collapse_threshold:
            return out, i
        k2 = _rhs(y2, g_mid[i], omega, n_norm, x0_mid[i])
        y3 = y + 0.5 * h * k2
        if y3[0] <= collapse_threshold:
            return out, i
        k3 = _rhs(y3, g_mid[i], omega, n_norm, x0_mid[i])
        y4 = y + h * k3
        if y4[0] <= collapse_threshold:
            return out, i
        k4 = _rhs(y4, g_nodes[i + 1], omega, n_norm, x0_nodes[i + 1])
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if y[0] <= collapse_threshold or not np.isfinite(y[0]):
            out[i + 1] = y
            return out, i
        out[i + 1] = y
    return out, -1


def cn_evolve(psi, x, omega, x0_mid, g_mid, dx, dt, n_corr=2, tol=1e-12):
    """Advance psi by len(g_mid) Crank-Nicolson steps in place.

    Nonlinearity enters through a predictor pass using the current density
    followed by up to ``n_corr`` corrector passes using the average of the
    current and predicted densities. Hard-wall (zero ghost) boundaries.
    Returns 0 on success, 1 on corrector divergence / non-finite values.
    """
    n = psi.shape[0]
    kin = 1.0 / (2.0 * dx * dx)
    off = 0.5j * dt * (-kin)  # i(dt/2) * H_offdiag with H_offdiag = -kin
    ab = np.empty((3, n), dtype=complex)
    ab[0, :] = off
    ab[2, :] = off
    ab[0, 0] = 0.0
    ab[2, -1] = 0.0
    for m in range(len(g_mid)):
        g = g_mid[m]
        v = omega * omega * (x - x0_mid[m]) ** 2
        rho_n = np.abs(psi) ** 2
        rho_eff = rho_n
        psi_new = psi
        prev_change = np.inf
        for p in range(n_corr + 1):
            diag_h = 2.0 * kin + v - g * rho_eff
            # rhs = (I - i dt/2 H) psi
            lap = np.zeros(n, dtype=complex)
            lap[1:-1] = psi[2:] + psi[:-2]
            lap[0] = psi[1]
            lap[-1] = psi[-2]
            hpsi = -kin * lap + diag_h * psi
            rhs = psi - 0.5j * dt * hpsi
            ab[1, :] = 1.0 + 0.5j * dt * diag_h
            prev = psi_new
            psi_new = solve_banded((1, 1), ab, rhs)
            if p >= 1:
                change = float(np.max(np.abs(psi_new - prev)))
                if change < tol:
                    break
                if change > 10.0 * prev_change and change > 1e-8:
                    return 1
                prev_change = change
            rho_eff = 0.5 * (rho_n + np.abs(psi_new) ** 2)
        if not np.all(np.isfinite(psi_new)):
            return 1
        psi[:] = psi_new
    return 0
