"""Spectral simulation of Hele-Shaw flow with surface tension and fluid injection."""

__version__ = "0.1.0"

from .errors import ConfigError, GeometryError, HeleShawError, OutputError, SolverError
from .schedule import InjectionSchedule, classify
from .spectral import PeriodicField, derivative, product, sobolev_norm, transform_forward

__all__ = [
    "ConfigError",
    "GeometryError",
    "HeleShawError",
    "InjectionSchedule",
    "OutputError",
    "PeriodicField",
    "SolverError",
    "classify",
    "derivative",
    "product",
    "sobolev_norm",
    "transform_forward",
]
