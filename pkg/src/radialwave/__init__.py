"""Exact solutions, symmetry structure and simulation of u_tt - u_rr - (n-1)u_r/r = k u^q."""
from .core import (
    ModelParams,
    PowerKind,
    SpecialPower,
    classify_power,
    exponent_p,
    DomainError,
    UnsupportedParams,
    CompatibilityError,
    PathSingular,
    InsufficientWindow,
    NonMonotone,
    ConfigError,
)

__version__ = "0.1.0"
