"""Interacting Polya urns: simulation, exact moments and fluctuation statistics."""

from ._core import *  # noqa: F401,F403
from ._core import (
    ArgumentError,
    ConfigError,
    Ensemble,
    ModelParams,
    PolyaError,
    PreconditionError,
    ResourceBoundError,
    Trajectory,
    UrnSystemState,
)

__version__ = "0.1.0"
