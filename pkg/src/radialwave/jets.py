"""Second-order truncated Taylor arithmetic in two variables.

A ``Jet2`` carries a value together with its first and second partial
derivatives with respect to two independent variables (called a and b).
Arithmetic and elementary functions propagate the derivatives exactly up to
rounding.  Fields may be Python floats or numpy arrays of equal shape, so the
same code evaluates one point or a whole grid.
"""
from __future__ import annotations

import math

import numpy as np

from .core import DomainError

INT_TOL = 1e-12


def _is_integer(e: float) -> bool:
    return abs(e - round(e)) < INT_TOL


class Jet2:
    __slots__ = ("v", "a", "b", "aa", "ab", "bb")

    def __init__(self, v, a=0.0, b=0.0, aa=0.0, ab=0.0, bb=0.0):
        self.v = v
        self.a = a
        self.b = b
        self.aa = aa
        self.ab = ab
        self.bb = bb

    @classmethod
    def var_a(cls, x) -> "Jet2":
        return cls(x, 1.0, 0.0)

    @classmethod
    def var_b(cls, x) -> "Jet2":
        return cls(x, 0.0, 1.0)

    @classmethod
    def const(cls, x) -> "Jet2":
        return cls(x)

    def fields(self) -> tuple:
        return (self.v, self.a, self.b, self.aa, self.ab, self.bb)

    def __repr__(self):
        return "Jet2(v={}, a={}, b={}, aa={}, ab={}, bb={})".format(*self.fields())

    # -- arithmetic -------------------------------------------------------
    def __add__(self, o):
        if isinstance(o, Jet2):
            return Jet2(self.v + o.v, self.a + o.a, self.b + o.b,
                        self.aa + o.aa, self.ab + o.ab, self.bb + o.bb)
        return Jet2(self.v + o, self.a, self.b, self.aa, self.ab, self.bb)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.a, -self.b, -self.aa, -self.ab, -self.bb)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet2):
            return Jet2(
                self.v * o.v,
                self.a * o.v + self.v * o.a,
                self.b * o.v + self.v * o.b,
                self.aa * o.v + 2.0 * self.a * o.a + self.v * o.aa,
                self.ab * o.v + self.a * o.b + self.b * o.a + self.v * o.ab,
                self.bb * o.v + 2.0 * self.b * o.b + self.v * o.bb,
            )
        return Jet2(self.v * o, self.a * o, self.b * o,
                    self.aa * o, self.ab * o, self.bb * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        if isinstance(o, Jet2):
            return self * o.reciprocal()
        return self * (1.0 / o)

    def __rtruediv__(self, o):
        return self.reciprocal() * o

    def __pow__(self, e):
        if isinstance(e, Jet2):
            return exp(e * log(self))
        return power(self, float(e))

    def __rpow__(self, base):
        if base <= 0:
            raise DomainError(f"base {base} of a variable exponent must be positive")
        return exp(self * math.log(base))

    def reciprocal(self) -> "Jet2":
        return power(self, -1.0)

    # -- composition ------------------------------------------------------
    def chain(self, f0, f1, f2) -> "Jet2":
        """Compose with a scalar function whose value, first and second
        derivatives at ``self.v`` are f0, f1, f2."""
        return Jet2(
            f0,
            f1 * self.a,
            f1 * self.b,
            f2 * self.a * self.a + f1 * self.aa,
            f2 * self.a * self.b + f1 * self.ab,
            f2 * self.b * self.b + f1 * self.bb,
        )


def as_jet(x) -> Jet2:
    return x if isinstance(x, Jet2) else Jet2.const(x)


def _value(x):
    return x.v if isinstance(x, Jet2) else x


def power(x, e: float):
    """Real power x**e with the package's real-valued convention.

    Positive bases use exp(e ln x).  Integer exponents accept any nonzero base
    (and zero for non-negative exponents).  A base <= 0 with a non-integer
    exponent raises DomainError.
    """
    if not isinstance(x, Jet2):
        return _scalar_power(x, e)
    v = x.v
    if _is_integer(e):
        m = int(round(e))
        if m == 0:
            return Jet2.const(np.ones_like(v) if isinstance(v, np.ndarray) else 1.0)
        if m < 2 and np.any(np.asarray(v) == 0):
            raise DomainError("zero base with an exponent below 2")
        f0 = v ** m if m > 0 else 1.0 / v ** (-m)
        f1 = m * (v ** (m - 1) if m >= 1 else 1.0 / v ** (1 - m))
        f2 = m * (m - 1) * (v ** (m - 2) if m >= 2 else 1.0 / v ** (2 - m))
        return x.chain(f0, f1, f2)
    if np.any(np.asarray(v) <= 0):
        raise DomainError(f"non-positive base for the non-integer exponent {e}")
    lv = np.log(v)
    f0 = np.exp(e * lv)
    return x.chain(f0, e * f0 / v, e * (e - 1.0) * f0 / (v * v))


def _scalar_power(v, e: float):
    if _is_integer(e):
        m = int(round(e))
        if m < 0 and np.any(np.asarray(v) == 0):
            raise DomainError("zero base with a negative exponent")
        return v ** m if m >= 0 else 1.0 / v ** (-m)
    if np.any(np.asarray(v) <= 0):
        raise DomainError(f"non-positive base for the non-integer exponent {e}")
    return np.exp(e * np.log(v))


def sqrt(x):
    return power(x, 0.5)


def exp(x):
    if not isinstance(x, Jet2):
        return np.exp(x)
    f = np.exp(x.v)
    return x.chain(f, f, f)


def log(x):
    if not isinstance(x, Jet2):
        if np.any(np.asarray(x) <= 0):
            raise DomainError("logarithm of a non-positive number")
        return np.log(x)
    v = x.v
    if np.any(np.asarray(v) <= 0):
        raise DomainError("logarithm of a non-positive number")
    return x.chain(np.log(v), 1.0 / v, -1.0 / (v * v))


def all_finite(j: Jet2) -> bool:
    return all(bool(np.all(np.isfinite(f))) for f in j.fields())
