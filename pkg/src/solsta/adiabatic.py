"""Adiabatic reference: arctan switching protocol and the instantaneous
minimum of the perturbed-Kepler width potential

    U(a) = 2 a^2 w^2 - 4 g N / (a pi^2) + 2 / (pi^2 a^2).

The minimum a_c solves the quartic  a^4 w^2 pi^2 + g N a - 1 = 0; for small
trap frequency the perturbative closed form
a_c = [1/(N g)] [1 - pi^2 w^2 / (g^4 N^4)] applies.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, NoRootError
from .types import PhysicalConfig, ProtocolCurve, SwitchingParams, WidthTrajectory

PI = np.pi
PI2 = np.pi * np.pi


def switching_g(t, p: SwitchingParams):
    """Arctan switching protocol; accepts scalar or array t."""
    u = p.s_rate * PI * (np.asarray(t, dtype=float) - p.t_f / 2.0)
    out = p.g_base + p.a_s_amp * (0.5 + np.arctan(u) / PI)
    return float(out) if np.ndim(t) == 0 else out


def switching_g_dot(t, p: SwitchingParams):
    """dg/dt of the switching protocol."""
    u = p.s_rate * PI * (np.asarray(t, dtype=float) - p.t_f / 2.0)
    out = p.a_s_amp * p.s_rate / (1.0 + u * u)
    return float(out) if np.ndim(t) == 0 else out


def switching_g_ddot(t, p: SwitchingParams):
    """d2g/dt2 of the switching protocol."""
    u = p.s_rate * PI * (np.asarray(t, dtype=float) - p.t_f / 2.0)
    out = -2.0 * p.a_s_amp * p.s_rate * p.s_rate * PI * u / (1.0 + u * u) ** 2
    return float(out) if np.ndim(t) == 0 else out


def g_edges(p: SwitchingParams) -> tuple[float, float]:
    """Closed-form (g(0), g(t_f)) of the switching protocol."""
    edge = np.arctan(p.s_rate * PI * p.t_f / 2.0) / PI
    return (p.g_base + p.a_s_amp * (0.5 - edge),
            p.g_base + p.a_s_amp * (0.5 + edge))


def protocol_curve(p: SwitchingParams, n_samples: int = 2001) -> ProtocolCurve:
    """Sample the switching protocol into an interpolable ProtocolCurve."""
    return ProtocolCurve.from_function(lambda t: switching_g(t, p), p.t_f,
                                       n_samples, provenance="switching-function")


def kepler_potential(a, g, config: PhysicalConfig):
    """Effective potential governing the width of the fictitious particle."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise DomainError("kepler_potential requires a > 0")
    n = config.n_norm
    out = 2.0 * a * a * config.omega**2 - 4.0 * np.asarray(g) * n / (a * PI2) + 2.0 / (PI2 * a * a)
    return float(out) if out.ndim == 0 else out


def ac_perturbative(g, config: PhysicalConfig):
    """Small-omega closed form of the equilibrium width."""
    g = np.asarray(g, dtype=float)
    if np.any(g <= 0):
        raise DomainError("perturbative equilibrium width requires g > 0")
    n = config.n_norm
    out = (1.0 / (n * g)) * (1.0 - PI2 * config.omega**2 / (g**4 * n**4))
    return float(out) if out.ndim == 0 else out


def _ac_perturbative_dg(g, config: PhysicalConfig):
    """d a_c / d g of the perturbative form."""
    n = config.n_norm
    w2p = PI2 * config.omega**2
    return -1.0 / (n * g**2) + 5.0 * w2p / (n**5 * g**6)


def _ac_perturbative_d2g(g, config: PhysicalConfig):
    n = config.n_norm
    w2p = PI2 * config.omega**2
    return 2.0 / (n * g**3) - 30.0 * w2p / (n**5 * g**7)


def ac_exact(g: float, config: PhysicalConfig) -> float:
    """Positive real root of a^4 w^2 pi^2 + g N a - 1 = 0 connected to the
    zero-trap limit 1/(N g); safeguarded Newton with bisection fallback."""
    n = config.n_norm
    w2p2 = config.omega**2 * PI2
    if w2p2 == 0.0:
        if g <= 0:
            raise NoRootError("no positive equilibrium width for g <= 0 and omega = 0")
        return 1.0 / (n * g)

    def f(a):
        return a**4 * w2p2 + g * n * a - 1.0

    def fp(a):
        return 4.0 * a**3 * w2p2 + g * n

    a = 1.0 / (n * g) if g > 0 else (1.0 / w2p2) ** 0.25
    converged = False
    for _ in range(50):
        step = f(a) / fp(a)
        a_new = a - step
        if a_new <= 0:
            a_new = 0.5 * a
        if abs(a_new - a) <= 1e-15 * max(1.0, abs(a_new)):
            a = a_new
            converged = True
            break
        a = a_new
    if not converged or abs(f(a)) > 1e-12:
        lo, hi = 1e-9, min(10.0 / (n * config.omega + 1e-12), 1e9)
        if f(lo) > 0 or f(hi) < 0:
            raise NoRootError(f"no positive real root for g = {g}")
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if f(mid) <= 0:
                lo = mid
            else:
                hi = mid
        a = 0.5 * (lo + hi)
    if a <= 0 or abs(f(a)) > 1e-12:
        raise NoRootError(f"quartic root refinement failed for g = {g}")
    return float(a)


def ac_of_g(g: float, config: PhysicalConfig, method: str = "perturbative") -> float:
    if method == "perturbative":
        return float(ac_perturbative(g, config))
    if method == "exact":
        return ac_exact(g, config)
    raise DomainError(f"unknown reference method {method!r}")


def _edge_values(p: SwitchingParams, config: PhysicalConfig, method: str):
    """(a_c, da_c/dt, d2a_c/dt2) at t = 0 and t = t_f; shared by the
    trajectory sampler and the boundary-condition builder so that both
    agree bit for bit."""
    out = []
    for t in (0.0, p.t_f):
        out.append(_reference_at(t, p, config, method))
    return tuple(out)


def _reference_at(t: float, p: SwitchingParams, config: PhysicalConfig, method: str):
    g = switching_g(t, p)
    if method == "perturbative":
        gd = switching_g_dot(t, p)
        gdd = switching_g_ddot(t, p)
        a = ac_perturbative(g, config)
        da = _ac_perturbative_dg(g, config)
        d2a = _ac_perturbative_d2g(g, config)
        return a, da * gd, d2a * gd * gd + da * gdd
    if method == "exact":
        h = 1e-6 * p.t_f
        am = ac_exact(switching_g(t - h, p), config)
        a0 = ac_exact(g, config)
        ap = ac_exact(switching_g(t + h, p), config)
        return a0, (ap - am) / (2.0 * h), (ap - 2.0 * a0 + am) / (h * h)
    raise DomainError(f"unknown reference method {method!r}")


def ac_trajectory(p: SwitchingParams, config: PhysicalConfig, n_samples: int = 1001,
                  method: str = "perturbative") -> WidthTrajectory:
    """Adiabatic reference width a_c(t) with its first two time derivatives
    on a uniform grid over [0, t_f]."""
    if n_samples < 3:
        raise DomainError("n_samples must be at least 3")
    times = np.linspace(0.0, p.t_f, n_samples)
    if method == "perturbative":
        g = switching_g(times, p)
        gd = switching_g_dot(times, p)
        gdd = switching_g_ddot(times, p)
        a = ac_perturbative(g, config)
        da = _ac_perturbative_dg(g, config)
        d2a = _ac_perturbative_d2g(g, config)
        return WidthTrajectory(times, a, da * gd, d2a * gd * gd + da * gdd)
    if method == "exact":
        rows = [_reference_at(float(t), p, config, "exact") for t in times]
        arr = np.array(rows)
        return WidthTrajectory(times, arr[:, 0], arr[:, 1], arr[:, 2])
    raise DomainError(f"unknown reference method {method!r}")
