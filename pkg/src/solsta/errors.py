"""Exception types shared across the package."""


class SolstaError(Exception):
    """Base class for all package errors."""


class ConfigError(SolstaError):
    """Invalid configuration value or document."""


class DomainError(SolstaError):
    """Input outside the mathematical domain of an operation."""


class CollapseError(SolstaError):
    """Soliton width dropped below the collapse threshold during integration."""

    def __init__(self, time: float, width: float):
        self.time = time
        self.width = width
        super().__init__(f"width collapse: a = {width:g} at t = {time:g}")


class StabilityError(SolstaError):
    """Crank-Nicolson corrector diverged; a smaller dt is needed."""


class NoRootError(SolstaError):
    """The equilibrium-width quartic has no positive real root."""


class InfeasibleTrajectoryError(SolstaError):
    """Designed width trajectory is non-positive somewhere on [0, t_f]."""
