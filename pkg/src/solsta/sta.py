"""Inverse engineering of the compression protocol.

The width trajectory is fixed first (a quintic through six boundary
conditions taken from the adiabatic reference at the time edges) and the
driving nonlinearity is then read off the width equation:

    g(t) = 1/(a N) - [pi^2 a^2 / (4 N)] * (d2a/dt2 + 4 a w^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import adiabatic
from .errors import DomainError, InfeasibleTrajectoryError
from .types import (BoundaryConditions, PhysicalConfig, ProtocolCurve,
                    SwitchingParams, WidthTrajectory)

PI2 = np.pi * np.pi


def boundary_conditions(p: SwitchingParams, config: PhysicalConfig,
                        method: str = "perturbative") -> BoundaryConditions:
    """Evaluate the adiabatic reference and its first two derivatives at the
    time edges; these are the six constraints the designed trajectory meets."""
    (a0, d0, dd0), (af, df, ddf) = adiabatic._edge_values(p, config, method)
    return BoundaryConditions(a0, d0, dd0, af, df, ddf, source=method)


def design_polynomial(bc: BoundaryConditions, t_f: float,
                      n_samples: int = 1001) -> WidthTrajectory:
    """Unique quintic a(t) meeting all six boundary conditions.

    The 6x6 system is solved in normalized time tau = t/t_f for conditioning
    and the coefficients are mapped back to powers of t.
    """
    if t_f <= 0:
        raise DomainError("t_f must be positive")
    # conditions in tau: value, first and second tau-derivatives at tau = 0, 1
    rhs = np.array([bc.a0, bc.adot0 * t_f, bc.addot0 * t_f**2,
                    bc.af, bc.adotf * t_f, bc.addotf * t_f**2])
    mat = np.zeros((6, 6))
    j = np.arange(6)
    mat[0, 0] = 1.0
    mat[1, 1] = 1.0
    mat[2, 2] = 2.0
    mat[3, :] = 1.0
    mat[4, :] = j
    mat[5, :] = j * (j - 1)
    c_tau = np.linalg.solve(mat, rhs)
    coeffs = c_tau / t_f**j
    traj_a = np.polynomial.Polynomial(coeffs)(np.linspace(0.0, t_f, max(n_samples, 1001)))
    if np.any(traj_a <= 0):
        raise InfeasibleTrajectoryError(
            "designed quintic is non-positive somewhere on [0, t_f]")
    return WidthTrajectory.from_quintic(coeffs, t_f, n_samples)


def reconstruct_g(traj: WidthTrajectory, config: PhysicalConfig) -> ProtocolCurve:
    """Invert the width equation for the nonlinearity along a trajectory."""
    if np.any(traj.a <= 0):
        raise DomainError("trajectory width must be positive everywhere")
    n = config.n_norm
    a = traj.a
    g = 1.0 / (a * n) - (PI2 * a * a / (4.0 * n)) * (traj.addot + 4.0 * a * config.omega**2)
    return ProtocolCurve(traj.times, g, provenance="sta-designed")


@dataclass(eq=False)
class ProtocolDesign:
    """Designed width trajectory, the protocol driving it, and its g-range."""

    trajectory: WidthTrajectory
    protocol: ProtocolCurve
    g_min: float
    g_max: float
    changes_sign: bool

    @property
    def feasible(self) -> bool:
        return not self.changes_sign and self.g_min > 0


def design_protocol(p: SwitchingParams, config: PhysicalConfig,
                    method: str = "perturbative",
                    n_samples: int = 1001) -> ProtocolDesign:
    """Full inverse-engineering pipeline: boundary conditions -> quintic ->
    reconstructed g(t), with a feasibility report (g < 0 is flagged, not
    rejected)."""
    bc = boundary_conditions(p, config, method)
    traj = design_polynomial(bc, p.t_f, n_samples)
    curve = reconstruct_g(traj, config)
    g_min = float(np.min(curve.g))
    g_max = float(np.max(curve.g))
    return ProtocolDesign(traj, curve, g_min, g_max, changes_sign=g_min < 0 < g_max)


PROTOCOL_CSV_HEADER = "t,g,a_design,adot_design,addot_design"


def protocol_csv_rows(design: ProtocolDesign) -> np.ndarray:
    t = design.trajectory
    return np.column_stack([t.times, design.protocol.g, t.a, t.adot, t.addot])


def protocol_sidecar(design: ProtocolDesign, p: SwitchingParams, method: str) -> dict:
    """JSON-serializable metadata for a protocol export."""
    return {
        "switching": {"g_base": p.g_base, "a_s_amp": p.a_s_amp,
                      "s_rate": p.s_rate, "t_f": p.t_f},
        "method": method,
        "g_min": design.g_min,
        "g_max": design.g_max,
        "changes_sign": design.changes_sign,
    }
