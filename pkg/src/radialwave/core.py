"""Model parameters, special powers and the error hierarchy.

The equation handled throughout the package is

    u_tt - u_rr - (n-1) u_r / r = k u^q

with integer dimension n >= 2, real power q != 1 and sign k = +1 or -1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

POWER_TOL = 1e-12


class RadialWaveError(Exception):
    """Base class for all package errors."""


class DomainError(RadialWaveError, ValueError):
    """A point lies outside the real-valued domain of a formula."""


class UnsupportedParams(RadialWaveError, ValueError):
    """Parameters violate a side condition of the requested object."""


class CompatibilityError(RadialWaveError):
    """Two integration orders of a first-order system disagree."""


class PathSingular(RadialWaveError):
    """An integration path runs into a singular point."""


class InsufficientWindow(RadialWaveError):
    """Too few samples are available for a fit."""


class NonMonotone(RadialWaveError):
    """An inversion was requested across a turning point."""


class ConfigError(RadialWaveError, ValueError):
    """Invalid user configuration."""


class PowerKind(str, enum.Enum):
    CRITICAL = "critical"
    CONFORMAL = "conformal"
    INVERSE_DILATION = "inverse-dilation"
    STATIC_LINE = "static-line"
    MINUS_THREE = "minus-three"
    GENERIC = "generic"


@dataclass(frozen=True)
class SpecialPower:
    kind: PowerKind
    value: float


def critical_power(n: int) -> float:
    if n == 2:
        return math.inf
    return (n + 2) / (n - 2)


def conformal_power(n: int) -> float:
    return (n + 3) / (n - 1)


def inverse_dilation_power(n: int) -> float:
    if n == 2:
        return math.inf
    return (4 - n) / (n - 2)


def static_line_power(n: int) -> float:
    if n == 2:
        return math.inf
    return (n - 1) / (n - 2)


def special_power_value(kind: PowerKind, n: int) -> float:
    return {
        PowerKind.CRITICAL: critical_power,
        PowerKind.CONFORMAL: conformal_power,
        PowerKind.INVERSE_DILATION: inverse_dilation_power,
        PowerKind.STATIC_LINE: static_line_power,
        PowerKind.MINUS_THREE: lambda _n: -3.0,
    }[kind](n)


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int,)) and not (
        isinstance(n, float) and float(n).is_integer()
    ):
        raise ConfigError(f"dimension n must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ConfigError(f"dimension n must be >= 2, got {n}")
    return n


@dataclass(frozen=True)
class ModelParams:
    """Dimension n, power q and sign k of the radial wave equation."""

    n: int
    q: float
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        q = float(self.q)
        if not math.isfinite(q):
            raise ConfigError(f"power q must be finite, got {self.q!r}")
        if abs(q - 1.0) < POWER_TOL:
            raise ConfigError("q = 1 gives a linear equation and is not supported")
        object.__setattr__(self, "q", q)
        if self.k not in (1, -1):
            raise ConfigError(f"sign k must be +1 or -1, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    @property
    def p(self) -> float:
        return exponent_p(self)

    @property
    def q_exact(self) -> Fraction:
        """Best small-denominator rational for q (exact for every special power)."""
        return Fraction(self.q).limit_denominator(10**6)

    def is_power(self, kind: PowerKind) -> bool:
        return abs(self.q - special_power_value(kind, self.n)) < POWER_TOL

    @classmethod
    def at_power(cls, kind: PowerKind, n: int, k: int = 1) -> "ModelParams":
        return cls(n=n, q=special_power_value(kind, n), k=k)


def exponent_p(params: ModelParams) -> float:
    """Return p = 2/(1-q)."""
    if abs(params.q - 1.0) < POWER_TOL:
        raise UnsupportedParams("p is undefined at q = 1")
    if params.is_power(PowerKind.CONFORMAL):
        return (1 - params.n) / 2
    return 2.0 / (1.0 - params.q)


def classify_power(params: ModelParams) -> list[SpecialPower]:
    """All special-power labels matched by q; an empty list means generic."""
    out = []
    for kind in (
        PowerKind.CRITICAL,
        PowerKind.CONFORMAL,
        PowerKind.INVERSE_DILATION,
        PowerKind.STATIC_LINE,
        PowerKind.MINUS_THREE,
    ):
        value = special_power_value(kind, params.n)
        if math.isfinite(value) and abs(params.q - value) < POWER_TOL:
            out.append(SpecialPower(kind, value))
    return out


def power_tag(params: ModelParams) -> PowerKind:
    """Single label for q; special powers never coincide for integer n >= 2."""
    labels = classify_power(params)
    return labels[0].kind if labels else PowerKind.GENERIC


@dataclass
class CheckReport:
    """One named scalar check against a tolerance."""

    name: str
    value: float
    tol: float
    passed: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.name, "value": self.value, "tol": self.tol, "pass": self.passed,
                "detail": self.detail}


def check(name: str, value: float, tol: float, **detail) -> CheckReport:
    """Pass iff ``value`` is finite and below ``tol``."""
    value = float(value)
    return CheckReport(name, value, tol, bool(math.isfinite(value) and value < tol), detail)
