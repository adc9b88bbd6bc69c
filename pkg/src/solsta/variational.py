"""Reduced variational dynamics of the sech soliton ansatz.

The ansatz parameters obey the coupled first-order system

    da/dt    = 2 a b
    db/dt    = 2/(a^4 pi^2) - 2 b^2 - 2 g(t) N / (pi^2 a^3) - 2 w^2
    dzeta/dt = c
    dc/dt    = -4 w^2 [zeta - x0(t)]

whose width channel is equivalent to the second-order equation

    d2a/dt2 + 4 a w^2 = 4/(a^3 pi^2) - 4 g(t) N / (pi^2 a^2).

The global phase decouples and is not evolved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import CollapseError, DomainError
from .types import PhysicalConfig, ProtocolCurve, SolitonState, WidthTrajectory

PI2 = np.pi * np.pi

#: widths below this are treated as collapse (1/a^4 terms overflow usable range)
COLLAPSE_THRESHOLD = 1e-6

#: default step count for t_f <= 100 scenarios
DEFAULT_N_STEPS = 100_000


def ode_rhs(state: SolitonState, g: float, config: PhysicalConfig, t: float = 0.0):
    """Time derivatives (da/dt, db/dt, dzeta/dt, dc/dt) of the ansatz parameters."""
    a, b = state.a, state.b
    if a <= 0:
        raise DomainError(f"width must be positive, got {a}")
    n = config.n_norm
    w2 = config.omega**2
    adot = 2.0 * a * b
    bdot = 2.0 / (a**4 * PI2) - 2.0 * b * b - 2.0 * g * n / (PI2 * a**3) - 2.0 * w2
    zetadot = state.c
    cdot = -4.0 * w2 * (state.zeta - config.x0_schedule(t))
    return adot, bdot, zetadot, cdot


def width_accel(a, adot, g, config: PhysicalConfig):
    """d2a/dt2 from the second-order width equation (never finite differences)."""
    n = config.n_norm
    return 4.0 / (np.asarray(a) ** 3 * PI2) - 4.0 * np.asarray(g) * n / (PI2 * np.asarray(a) ** 2) \
        - 4.0 * np.asarray(a) * config.omega**2


@dataclass(eq=False)
class SolitonTrajectory:
    """Sampled (a, b, zeta, c) trajectory on a uniform time grid, together with
    the protocol samples used at the nodes."""

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    zeta: np.ndarray
    c: np.ndarray
    g: np.ndarray

    def state_at(self, i: int) -> SolitonState:
        return SolitonState(a=float(self.a[i]), b=float(self.b[i]),
                            c=float(self.c[i]), zeta=float(self.zeta[i]))

    def width_trajectory(self, config: PhysicalConfig) -> WidthTrajectory:
        adot = 2.0 * self.a * self.b
        addot = width_accel(self.a, adot, self.g, config)
        return WidthTrajectory(self.times, self.a, adot, addot)


def _stage_samples(g: ProtocolCurve, config: PhysicalConfig, n_steps: int):
    t_f = g.t_f
    nodes = np.linspace(0.0, t_f, n_steps + 1)
    mids = nodes[:-1] + 0.5 * (t_f / n_steps)
    g_nodes = np.atleast_1d(np.asarray(g(nodes), dtype=float))
    g_mid = np.atleast_1d(np.asarray(g(mids), dtype=float))
    x0 = config.x0_schedule
    x0_nodes = np.array([x0(float(t)) for t in nodes])
    x0_mid = np.array([x0(float(t)) for t in mids])
    return nodes, g_nodes, g_mid, x0_nodes, x0_mid


def integrate_full(g: ProtocolCurve, initial: SolitonState, config: PhysicalConfig,
                   n_steps: int = DEFAULT_N_STEPS) -> SolitonTrajectory:
    """Evolve (a, b, zeta, c) jointly under the protocol g over [0, t_f]."""
    if initial.a <= 0:
        raise DomainError("initial width must be positive")
    nodes, g_nodes, g_mid, x0_nodes, x0_mid = _stage_samples(g, config, n_steps)
    dt = g.t_f / n_steps
    y0 = np.array([initial.a, initial.b, initial.zeta, initial.c])
    out, fail = kernels.rk4_soliton(y0, g_nodes, g_mid, x0_nodes, x0_mid,
                                    config.omega, config.n_norm, dt,
                                    COLLAPSE_THRESHOLD)
    if fail >= 0:
        raise CollapseError(time=float(nodes[fail]), width=float(out[fail, 0]))
    return SolitonTrajectory(times=nodes, a=out[:, 0], b=out[:, 1],
                             zeta=out[:, 2], c=out[:, 3], g=g_nodes)


def integrate_width(g: ProtocolCurve, a0: float, adot0: float, config: PhysicalConfig,
                    n_steps: int = DEFAULT_N_STEPS) -> WidthTrajectory:
    """Solve the second-order width equation with fixed-step RK4.

    Internally propagates the equivalent (a, b = adot/2a) pair so that the
    width channel agrees exactly with :func:`integrate_full`. The reported
    second derivative comes from the ODE right-hand side.
    """
    if a0 <= 0:
        raise DomainError("a0 must be positive")
    if n_steps < 10:
        raise DomainError("n_steps must be at least 10")
    initial = SolitonState(a=a0, b=adot0 / (2.0 * a0))
    traj = integrate_full(g, initial, config, n_steps)
    return traj.width_trajectory(config)


def trajectory_csv_rows(traj: SolitonTrajectory, config: PhysicalConfig):
    """Rows for the `t,a,adot,addot,b,c,zeta,g` export schema."""
    adot = 2.0 * traj.a * traj.b
    addot = width_accel(traj.a, adot, traj.g, config)
    return np.column_stack([traj.times, traj.a, adot, addot,
                            traj.b, traj.c, traj.zeta, traj.g])


TRAJECTORY_CSV_HEADER = "t,a,adot,addot,b,c,zeta,g"
