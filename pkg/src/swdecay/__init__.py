"""Radiative decay of two-level atoms scattered by a resonant standing light wave."""
from ._kernels import BACKEND
from .model import ModelParams, SpatialGrid, TimeGrid, validate_regime

__all__ = ["BACKEND", "ModelParams", "SpatialGrid", "TimeGrid", "validate_regime"]
__version__ = "0.1.0"
