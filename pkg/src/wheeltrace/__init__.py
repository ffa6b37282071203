"""Simulation and analysis of the nested rotating-wheel scriber."""

from .wheel_model import (
    ConvergenceError,
    PhaseBudgetError,
    PlanarPoint,
    SystemConfig,
    WheelError,
    fundamental_period,
    max_radius,
    max_speed,
    position,
    positions,
    self_similarity_residual,
    velocities,
    velocity,
)

__version__ = "0.1.0"
