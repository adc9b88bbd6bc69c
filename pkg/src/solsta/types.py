"""Shared value types: physical configuration, soliton parameters, control curves.

All quantities are in the dimensionless units of the governing equation
i psi_t + (1/2) psi_xx + g(t) |psi|^2 psi - w^2 [x - x0(t)]^2 psi = 0,
with normalization integral |psi|^2 dx = 2N.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import ConfigError, DomainError


def zero_schedule(t: float) -> float:
    """Static trap center at the origin (the only schedule used in practice)."""
    return 0.0


@dataclass(frozen=True)
class PhysicalConfig:
    """Trap frequency, norm parameter and trap-center schedule."""

    omega: float = 0.04
    n_norm: float = 1.0
    x0_schedule: Callable[[float], float] = zero_schedule

    def __post_init__(self):
        if self.omega < 0:
            raise ConfigError(f"omega must be >= 0, got {self.omega}")
        if self.n_norm <= 0:
            raise ConfigError(f"n_norm must be > 0, got {self.n_norm}")


@dataclass(frozen=True)
class SolitonState:
    """Variational parameters of the sech ansatz: width, chirp, velocity,
    center and global phase. The amplitude sqrt(N/a) is always derived,
    never stored."""

    a: float
    b: float = 0.0
    c: float = 0.0
    zeta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.a <= 0:
            raise DomainError(f"soliton width must be positive, got {self.a}")

    def amplitude(self, n_norm: float) -> float:
        return float(np.sqrt(n_norm / self.a))


@dataclass(frozen=True)
class SwitchingParams:
    """Parameters of the arctan switching protocol
    g(t) = g_base + a_s_amp * {1/2 + arctan[s_rate*pi*(t - t_f/2)]/pi}."""

    g_base: float = 2.0
    a_s_amp: float = 10.0
    s_rate: float = 1.0
    t_f: float = 100.0

    def __post_init__(self):
        if self.t_f <= 0:
            raise ConfigError(f"t_f must be > 0, got {self.t_f}")
        if self.s_rate <= 0:
            raise ConfigError(f"s_rate must be > 0, got {self.s_rate}")


@dataclass(eq=False)
class ProtocolCurve:
    """Sampled nonlinearity schedule g(t) on a uniform grid over [0, t_f],
    evaluable anywhere in between by piecewise-cubic interpolation."""

    times: np.ndarray
    g: np.ndarray
    provenance: str = "constant"
    interpolation: str = "cubic-spline"
    _spline: CubicSpline | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.g = np.asarray(self.g, dtype=float)
        if self.times.ndim != 1 or self.times.size < 2:
            raise ConfigError("protocol needs at least two time samples")
        if self.times.shape != self.g.shape:
            raise ConfigError("time and g sample arrays must match in length")
        dt = np.diff(self.times)
        if np.any(dt <= 0):
            raise ConfigError("protocol time samples must be strictly increasing")
        if self.times[0] != 0.0:
            raise ConfigError("protocol must start at t = 0")

    @property
    def t_f(self) -> float:
        return float(self.times[-1])

    def _get_spline(self) -> CubicSpline:
        if self._spline is None:
            self._spline = CubicSpline(self.times, self.g)
        return self._spline

    def __call__(self, t):
        """Evaluate g(t); accepts scalars or arrays within [0, t_f]."""
        if self.g.size == 2 or np.all(self.g == self.g[0]):
            return np.full_like(np.asarray(t, dtype=float), self.g[0]) if np.ndim(t) else float(self.g[0])
        out = self._get_spline()(t)
        return float(out) if np.ndim(t) == 0 else out

    @classmethod
    def constant(cls, g_value: float, t_f: float, n_samples: int = 2) -> "ProtocolCurve":
        times = np.linspace(0.0, t_f, n_samples)
        return cls(times, np.full(n_samples, float(g_value)), provenance="constant")

    @classmethod
    def from_function(cls, fn: Callable, t_f: float, n_samples: int = 2001,
                      provenance: str = "switching-function") -> "ProtocolCurve":
        times = np.linspace(0.0, t_f, n_samples)
        return cls(times, np.asarray(fn(times), dtype=float), provenance=provenance)

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_spline"] = None  # rebuild lazily after unpickling
        return state


@dataclass(eq=False)
class WidthTrajectory:
    """Sampled width trajectory a(t) with first and second derivatives.

    ``representation`` is either "sampled" or "quintic"; in the quintic case
    ``coeffs`` holds b0..b5 of a(t) = sum_j b_j t^j and the sampled arrays are
    the polynomial evaluated on the grid."""

    times: np.ndarray
    a: np.ndarray
    adot: np.ndarray
    addot: np.ndarray
    representation: str = "sampled"
    coeffs: np.ndarray | None = None

    def __post_init__(self):
        for name in ("times", "a", "adot", "addot"):
            setattr(self, name, np.asarray(getattr(self, name), dtype=float))
        if not (self.times.shape == self.a.shape == self.adot.shape == self.addot.shape):
            raise ConfigError("width-trajectory arrays must share one shape")
        if np.any(self.a <= 0):
            raise DomainError("width trajectory contains non-positive samples")

    @property
    def t_f(self) -> float:
        return float(self.times[-1])

    @classmethod
    def from_quintic(cls, coeffs: np.ndarray, t_f: float, n_samples: int = 1001) -> "WidthTrajectory":
        """Sample a quintic a(t) = sum_j coeffs[j] t^j and its derivatives."""
        poly = np.polynomial.Polynomial(coeffs)
        d1 = poly.deriv(1)
        d2 = poly.deriv(2)
        times = np.linspace(0.0, t_f, n_samples)
        return cls(times, poly(times), d1(times), d2(times),
                   representation="quintic", coeffs=np.asarray(coeffs, dtype=float))


@dataclass(frozen=True)
class BoundaryConditions:
    """Width value and first two derivatives at both time edges."""

    a0: float
    adot0: float
    addot0: float
    af: float
    adotf: float
    addotf: float
    source: str = "custom"

    def __post_init__(self):
        if self.a0 <= 0 or self.af <= 0:
            raise DomainError("boundary widths must be positive")

    def mirrored(self) -> "BoundaryConditions":
        """Boundary set of the time-reversed trajectory a(t_f - t)."""
        return BoundaryConditions(self.af, -self.adotf, self.addotf,
                                  self.a0, -self.adot0, self.addot0,
                                  source=self.source)


__all__ = [
    "PhysicalConfig", "SolitonState", "SwitchingParams", "ProtocolCurve",
    "WidthTrajectory", "BoundaryConditions", "zero_schedule", "replace",
]
