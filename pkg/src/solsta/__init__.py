"""Fast compression of bright-soliton matter waves in a static harmonic trap
by inverse-engineering the time-dependent nonlinearity, with every designed
protocol validated against full Gross-Pitaevskii dynamics."""

from ._backend import backend_name
from .types import (BoundaryConditions, PhysicalConfig, ProtocolCurve,
                    SolitonState, SwitchingParams, WidthTrajectory)

__version__ = "0.1.0"

__all__ = [
    "backend_name", "PhysicalConfig", "SolitonState", "SwitchingParams",
    "ProtocolCurve", "WidthTrajectory", "BoundaryConditions", "__version__",
]
