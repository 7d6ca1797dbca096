"""Closed-form exact solutions with jet evaluation and residual checks.

Every family is written as a function of the time and radius jets, so the
same formula yields u and all partials through second order.  Families are
immutable values; evaluation is pure.

Branch labels: for U8 and U9 the label ``branch=-1`` is the globally smooth
member and ``branch=+1`` the member that is singular on a pair of shifted
light cones; U9 with ``c_tilde=0`` coincides with U8 of the same label.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable, Optional

import numpy as np

from .core import (
    DomainError,
    ModelParams,
    PowerKind,
    UnsupportedParams,
    critical_power,
    conformal_power,
    inverse_dilation_power,
    static_line_power,
    POWER_TOL,
)
from .jets import Jet2, power, sqrt, all_finite, _scalar_power, _is_integer

DEFAULT_GUARD = 1e-8

FAMILY_IDS = (
    "U1", "U2", "U3", "U4", "U5", "U6", "U7", "U8", "U9",
    "IV1", "IV2", "IV3", "IV4", "IV5", "IV6",
)


# ---------------------------------------------------------------------------
# singular sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularComponent:
    """One curve of a singular set in the (r, t) half-plane.

    kind     meaning of ``value`` (and ``sign``)
    line     t = value
    axis     r = 0
    cone     r = |t - value|
    null     t - sign*r = value, r >= 0
    sphere   r = value
    hyperbola |t + value| = sqrt(r^2 + value^2)
    """

    kind: str
    value: float = 0.0
    sign: int = 0

    def distance(self, t, r):
        t = np.asarray(t, dtype=float)
        r = np.asarray(r, dtype=float)
        if self.kind == "line":
            return np.abs(t - self.value)
        if self.kind == "axis":
            return np.abs(r)
        if self.kind == "cone":
            return np.abs(r - np.abs(t - self.value)) / math.sqrt(2.0)
        if self.kind == "null":
            return np.abs(t - self.sign * r - self.value) / math.sqrt(2.0)
        if self.kind == "sphere":
            return np.abs(r - self.value)
        if self.kind == "hyperbola":
            s = self.value
            f = (t + s) ** 2 - r**2 - s**2
            g = 2.0 * np.sqrt((t + s) ** 2 + r**2)
            return np.abs(f) / np.maximum(g, 1e-300)
        raise ValueError(self.kind)

    def radii_at(self, t: float) -> list[float]:
        """Radii r >= 0 where the component meets the slice at time t."""
        if self.kind == "line":
            return [math.nan] if abs(t - self.value) < 1e-14 else []
        if self.kind == "axis":
            return [0.0]
        if self.kind == "cone":
            return [abs(t - self.value)]
        if self.kind == "null":
            rr = self.sign * (t - self.value)
            return [rr] if rr >= 0 else []
        if self.kind == "sphere":
            return [self.value]
        if self.kind == "hyperbola":
            s = self.value
            rr2 = (t + s) ** 2 - s**2
            return [math.sqrt(rr2)] if rr2 >= 0 else []
        raise ValueError(self.kind)

    def times_at_axis(self) -> list[float]:
        """Times at which the component touches r = 0."""
        if self.kind == "line":
            return [self.value]
        if self.kind in ("cone", "null"):
            return [self.value]
        if self.kind == "hyperbola":
            return [0.0, -2.0 * self.value]
        return []

    def describe(self) -> str:
        v = self.value
        return {
            "line": f"t = {v:.17g}",
            "axis": "r = 0",
            "cone": f"r = |t - ({v:.17g})|",
            "null": f"t - ({self.sign})*r = {v:.17g}",
            "sphere": f"r = {v:.17g}",
            "hyperbola": f"|t + ({v:.17g})| = sqrt(r^2 + ({v:.17g})^2)",
        }[self.kind]


@dataclass(frozen=True)
class SingularSetDescriptor:
    components: tuple = ()

    def distance(self, t, r):
        if not self.components:
            return np.full(np.broadcast(np.asarray(t), np.asarray(r)).shape, np.inf)
        return np.min([c.distance(t, r) for c in self.components], axis=0)

    def to_json(self) -> list:
        return [
            {"kind": c.kind, "value": c.value, "sign": c.sign, "curve": c.describe()}
            for c in self.components
        ]


# ---------------------------------------------------------------------------
# family value type
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SolutionFamily:
    """A closed-form solution: family id, model parameters and constants.

    ``shift`` translates time, u(t, r) -> u(t + shift, r).  ``sign`` is the
    overall sign of U5.  ``as_printed`` selects the uncorrected prefactor
    of the static conformal monopole (IV6), which is not a solution.
    """

    id: str
    params: ModelParams
    c: float = 0.0
    c_tilde: float = 0.0
    branch: int = 1
    sign: int = 1
    shift: float = 0.0
    as_printed: bool = False

    def __post_init__(self):
        if self.id not in _REGISTRY:
            raise UnsupportedParams(f"unknown family {self.id!r}")
        if self.branch not in (1, -1) or self.sign not in (1, -1):
            raise UnsupportedParams("branch and sign must be +1 or -1")
        if self.as_printed and self.id != "IV6":
            raise UnsupportedParams("as_printed applies to IV6 only")
        spec = _REGISTRY[self.id]
        why = spec.constraint(self.params, self)
        if why:
            raise UnsupportedParams(f"{self.id}: {why}")

    @property
    def spec(self) -> "FamilySpec":
        return _REGISTRY[self.id]

    def label(self) -> str:
        tag = "-as-printed" if self.as_printed else ""
        return f"{self.id}{tag}"

    def constants(self) -> dict:
        return {"c": self.c, "c_tilde": self.c_tilde, "branch": self.branch,
                "sign": self.sign, "shift": self.shift}


@dataclass(frozen=True)
class Jet2Sample:
    t: float
    r: float
    u: float
    u_t: float
    u_r: float
    u_tt: float
    u_tr: float
    u_rr: float

    def __post_init__(self):
        for name in ("u", "u_t", "u_r", "u_tt", "u_tr", "u_rr"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"non-finite {name} at (t={self.t}, r={self.r})")


@dataclass(frozen=True)
class FamilySpec:
    id: str
    formula: Callable
    constraint: Callable
    singular: Callable
    tail: Callable
    axis: Callable
    power: PowerKind
    constants: tuple
    side_conditions: str
    singular_template: str
    asymptotics: str


# ---------------------------------------------------------------------------
# helpers for constraints
# ---------------------------------------------------------------------------

def _near(a: float, b: float) -> bool:
    return abs(a - b) < POWER_TOL


def _real_prefactor(base: float, e: float) -> bool:
    return base > 0 or (_is_integer(e)) or (base == 0 and e > 0)


def _upow(base, e: float, q: float):
    """base**e for a solution factor; a negative base is admitted only when
    both e and q are integers, so that u**q equals base**(e*q) in reals."""
    v = base.v if isinstance(base, Jet2) else base
    if np.any(np.asarray(v) <= 0) and not (_is_integer(e) and _is_integer(q)):
        raise DomainError("negative base is outside the real domain of this solution")
    return power(base, e)


def _need_power(params, value, label):
    if not _near(params.q, value):
        return f"requires q = {label} = {value:.17g}"
    return ""


def _conformal_only(params, fam):
    if params.n < 2:
        return "requires n >= 2"
    return _need_power(params, conformal_power(params.n), "(n+3)/(n-1)")


def _critical_only(params, fam):
    if params.n == 2:
        return "requires n != 2"
    return _need_power(params, critical_power(params.n), "(n+2)/(n-2)")


# ---------------------------------------------------------------------------
# formulas (t already shifted)
# ---------------------------------------------------------------------------

def _u1(f, t, r):
    P = f.params
    a = math.sqrt(P.k / (2.0 * (P.q + 1.0)))
    base = f.branch * a * (P.q - 1.0) * (t + f.c)
    return _upow(base, 2.0 / (1.0 - P.q), P.q) + 0.0 * r


def _u1_con(P, f):
    if _near(P.q, -1.0):
        return "requires q != -1"
    if P.k * (P.q + 1.0) <= 0:
        return "requires k/(q+1) > 0 for a real amplitude"
    return ""


def _u2(f, t, r):
    P = f.params
    n, q, k = P.n, P.q, P.k
    A = k * (q - 1.0) ** 2 / (2.0 * (q * (1 - n) + n + 1))
    return _upow(A * ((t + f.c) * (t + f.c) - r * r), 1.0 / (1.0 - q), q)


def _u2_con(P, f):
    if _near(P.q, (P.n + 1) / (P.n - 1)):
        return "requires q != (n+1)/(n-1)"
    return ""


def _u3_coef(P):
    n = P.n
    return math.sqrt(-P.k) * (n - 3) / (n - 2) ** 1.5


def _u3(f, t, r):
    P = f.params
    n = P.n
    base = f.branch * _u3_coef(P) * r + f.c * power(r, 3.0 - n)
    return _upow(base, (n - 2.0) / (n - 3.0), P.q) + 0.0 * t


def _u3_con(P, f):
    if P.n in (2, 3):
        return "requires n not in {2, 3}"
    why = _need_power(P, inverse_dilation_power(P.n), "(4-n)/(n-2)")
    if why:
        return why
    if P.k != -1:
        return "requires k = -1 for a real amplitude"
    return ""


def _u4(f, t, r):
    P = f.params
    n = P.n
    base = (P.k / ((n - 2.0) * (n - 3.0))) * (f.c + f.branch * t - r) * r
    return _upow(base, 2.0 - n, P.q)


def _u4_con(P, f):
    if P.n in (2, 3):
        return "requires n not in {2, 3}"
    return _need_power(P, static_line_power(P.n), "(n-1)/(n-2)")


def _u5(f, t, r):
    P = f.params
    w = f.branch * 2.0 * math.sqrt(-P.k) * t * (1.0 + f.c * t)
    return f.sign * sqrt(w) + 0.0 * r


def _u5_con(P, f):
    why = _need_power(P, -3.0, "-3")
    if why:
        return why
    if P.k != -1:
        return "requires k = -1 for a real amplitude"
    return ""


def _u6_a(P):
    return math.sqrt(P.k / (P.n * P.n - 1.0))


def _u6(f, t, r):
    P = f.params
    base = f.branch * 2.0 * _u6_a(P) * t + f.c * (t * t - r * r)
    return _upow(base, (1.0 - P.n) / 2.0, P.q)


def _u6_con(P, f):
    why = _conformal_only(P, f)
    if why:
        return why
    if P.k != 1:
        return "requires k = +1 for a real amplitude"
    return ""


def _kc(P):
    return 4.0 * P.k / (P.n - 1.0) ** 2


def _u7(f, t, r):
    P = f.params
    c = f.c
    s = t * t - r * r
    base = _kc(P) * (-s) * (1.0 + 2.0 * c * t + c * c * s)
    return _upow(base, (1.0 - P.n) / 4.0, P.q)


def _u8(f, t, r):
    P = f.params
    c = f.c
    s = t * t - r * r
    if f.branch == -1:
        inner = t * t + 0.25 * (1.0 / c - c * s) * (1.0 / c - c * s)
    else:
        inner = t * t - 0.25 * (1.0 / c + c * s) * (1.0 / c + c * s)
    return _upow(_kc(P) * inner, (1.0 - P.n) / 4.0, P.q)


def _nonzero_c(P, f):
    why = _conformal_only(P, f)
    if why:
        return why
    if f.c == 0:
        return "requires c != 0"
    return ""


def _u9(f, t, r):
    P = f.params
    c, ct = f.c, f.c_tilde
    s = t * t - r * r
    pp = 1.0 + 2.0 * ct * t + ct * ct * s
    if f.branch == -1:
        w = c * s + pp / c
        inner = r * r + 0.25 * w * w
    else:
        w = c * s - pp / c
        inner = r * r - 0.25 * w * w
    return _upow(_kc(P) * inner, (1.0 - P.n) / 4.0, P.q)


def _iv_amp(P):
    return P.n * (P.n - 2.0) / (4.0 * P.k)


def _iv1(f, t, r):
    P = f.params
    e = (P.n - 2.0) / 4.0
    return _scalar_power(_iv_amp(P), e) * _upow(t, 1.0 - P.n / 2.0, P.q) + 0.0 * r


def _iv12_con(P, f):
    why = _critical_only(P, f)
    if why:
        return why
    if not _real_prefactor(_iv_amp(P), (P.n - 2.0) / 4.0):
        return "amplitude n(n-2)/(4k) must be positive or the exponent an integer"
    return ""


def _iv2(f, t, r):
    P = f.params
    e = (P.n - 2.0) / 4.0
    return _scalar_power(_iv_amp(P), e) * _upow(r * r - t * t, (2.0 - P.n) / 4.0, P.q)


def _iv3(f, t, r):
    P = f.params
    s = f.branch
    amp = _scalar_power(s * P.n * (P.n - 2.0) / P.k, (P.n - 2.0) / 4.0)
    return amp * _upow(r * r + s, 1.0 - P.n / 2.0, P.q) + 0.0 * t


def _iv3_con(P, f):
    why = _critical_only(P, f)
    if why:
        return why
    if not _real_prefactor(f.branch * P.n * (P.n - 2.0) / P.k, (P.n - 2.0) / 4.0):
        return "amplitude branch*n(n-2)/k must be positive or the exponent an integer"
    return ""


def _iv4(f, t, r):
    P = f.params
    n = P.n
    e = (n - 2.0) / (n - 3.0)
    amp = f.branch * (n - 3.0) / (n - 2.0) * math.sqrt(P.k / (2.0 - n))
    return _scalar_power(amp, e) * power(r, e) + 0.0 * t


def _iv4_con(P, f):
    why = _u3_con(P, f)
    if why:
        return why
    n = P.n
    amp = f.branch * (n - 3.0) / (n - 2.0)
    if not _real_prefactor(amp, (n - 2.0) / (n - 3.0)):
        return "branch -1 gives a negative amplitude with a non-integer exponent"
    return ""


def _iv5(f, t, r):
    P = f.params
    n = P.n
    amp = _scalar_power((n - 2.0) / (2.0 * math.sqrt(P.k)), (n - 2.0) / 2.0)
    return amp * power(r, 1.0 - n / 2.0) + 0.0 * t


def _iv5_con(P, f):
    why = _critical_only(P, f)
    if why:
        return why
    if P.k != 1:
        return "requires k = +1 for a real amplitude"
    return ""


def _iv6_amp(P, as_printed):
    n = P.n
    if as_printed:
        base = (n - 1.0) * (n - 3.0) / (2.0 * math.sqrt(P.k))
    else:
        base = (n - 1.0) * (n - 3.0) / (4.0 * P.k)
    return base, (n - 1.0) / 4.0


def _iv6(f, t, r):
    P = f.params
    base, e = _iv6_amp(P, f.as_printed)
    return _scalar_power(base, e) * power(r, (1.0 - P.n) / 2.0) + 0.0 * t


def _iv6_con(P, f):
    why = _conformal_only(P, f)
    if why:
        return why
    if f.as_printed and P.k != 1:
        return "the printed amplitude needs k = +1"
    base, e = _iv6_amp(P, f.as_printed)
    if not _real_prefactor(base, e):
        return "amplitude (n-1)(n-3)/(4k) must be non-negative or the exponent an integer"
    return ""


# ---------------------------------------------------------------------------
# singular sets (in unshifted time; the shift is applied afterwards)
# ---------------------------------------------------------------------------

def _none(f):
    return []


def _s_u1(f):
    return [SingularComponent("line", -f.c)]


def _s_u2(f):
    return [SingularComponent("cone", -f.c)]


def _s_u3(f):
    P = f.params
    comps = []
    e = (P.n - 2.0) / (P.n - 3.0)
    if f.c != 0 or not _is_integer(e):
        comps.append(SingularComponent("axis"))
    rho = -f.c / (f.branch * _u3_coef(P))
    if rho > 0:
        comps.append(SingularComponent("sphere", rho ** (1.0 / (P.n - 2.0))))
    return comps


def _s_u4(f):
    # zero of c + b t - r:  t - b r = -b c
    return [SingularComponent("axis"), SingularComponent("null", -f.branch * f.c, f.branch)]


def _s_u5(f):
    comps = [SingularComponent("line", 0.0)]
    if f.c != 0:
        comps.append(SingularComponent("line", -1.0 / f.c))
    return comps


def _s_u6(f):
    a = _u6_a(f.params)
    if f.c == 0:
        return [SingularComponent("line", 0.0)]
    return [SingularComponent("hyperbola", f.branch * a / f.c)]


def _s_u7(f):
    comps = [SingularComponent("cone", 0.0)]
    if f.c != 0:
        comps.append(SingularComponent("cone", -1.0 / f.c))
    return comps


def _s_u8(f):
    if f.branch == -1:
        return []
    return [SingularComponent("cone", 1.0 / f.c), SingularComponent("cone", -1.0 / f.c)]


def _s_u9(f):
    if f.branch == -1:
        return []
    c, ct = f.c, f.c_tilde
    if abs(c * c - ct * ct) < 1e-14:
        raise UnsupportedParams("U9 singular set needs c^2 != c_tilde^2")
    return [SingularComponent("cone", 1.0 / (c - ct)), SingularComponent("cone", -1.0 / (c + ct))]


def _s_iv1(f):
    return [SingularComponent("line", 0.0)]


def _s_iv2(f):
    return [SingularComponent("cone", 0.0)]


def _s_iv3(f):
    return [SingularComponent("sphere", 1.0)] if f.branch == -1 else []


def _s_iv4(f):
    n = f.params.n
    return [] if _is_integer((n - 2.0) / (n - 3.0)) else [SingularComponent("axis")]


def _s_axis(f):
    return [SingularComponent("axis")]


# ---------------------------------------------------------------------------
# energy integrand exponents
#
# tail(f): m such that the energy density times r^(n-1) behaves like r^m
# for large r, or None when the density vanishes identically.
# axis(f): m0 with density ~ r^m0 as r -> 0, or None when regular there.
# ---------------------------------------------------------------------------

def _p(f):
    return 2.0 / (1.0 - f.params.q)


def _zero(f):
    return None


def _regular(f):
    return None


def _t_u2(f):
    return 2.0 * _p(f) + f.params.n - 3.0


def _t_growing_static(f):
    n = f.params.n
    alpha = (n - 2.0) / (n - 3.0)
    return 2.0 * alpha + n - 3.0


def _a_u3(f):
    n = f.params.n
    if f.c != 0:
        return 1.0 - n
    return None


def _t_u4(f):
    return 5.0 - 3.0 * f.params.n


def _a_monopole(f):
    return 1.0 - f.params.n


def _t_u5(f):
    return None if f.c == 0 else f.params.n - 1.0


def _t_fast(f):
    return -f.params.n - 1.0


def _t_u6(f):
    return None if f.c == 0 else -f.params.n - 1.0


def _t_u7(f):
    return -2.0 if f.c == 0 else -f.params.n - 1.0


def _t_iv_crit(f):
    return -1.0


def _t_iv3(f):
    return 1.0 - f.params.n


def _t_iv6(f):
    return -2.0


def _a_iv4(f):
    return None


def _a_iv5(f):
    return -1.0


def _a_iv6(f):
    return -2.0


def _spec(id, formula, con, sing, tail, axis, power_kind, consts, side, sing_t, asym):
    return FamilySpec(id, formula, con, sing, tail, axis, power_kind, consts, side, sing_t, asym)


def _cfun(fn):
    return lambda P, f: fn(P, f)


_REGISTRY: dict[str, FamilySpec] = {}


def _register(*specs):
    for s in specs:
        _REGISTRY[s.id] = s


_register(
    _spec("U1", _u1, _u1_con, _s_u1, _zero, _regular, PowerKind.GENERIC,
          ("c", "branch"), "q != -1, k/(q+1) > 0", "t = -c",
          "r-independent; energy density vanishes identically"),
    _spec("U2", _u2, _u2_con, _s_u2, _t_u2, _regular, PowerKind.GENERIC,
          ("c",), "q != (n+1)/(n-1)", "r = |t + c|",
          "u ~ r^p, density ~ r^(2p+n-3)"),
    _spec("U3", _u3, _u3_con, _s_u3, _t_growing_static, _a_u3, PowerKind.INVERSE_DILATION,
          ("c", "branch"), "q = (4-n)/(n-2), n not in {2,3}, k = -1",
          "r = 0 (c != 0 or non-integer exponent); sphere where the base vanishes",
          "u ~ r^((n-2)/(n-3)) grows; axis density ~ r^(1-n) when c != 0"),
    _spec("U4", _u4, _u4_con, _s_u4, _t_u4, _a_monopole, PowerKind.STATIC_LINE,
          ("c", "branch"), "q = (n-1)/(n-2), n not in {2,3}",
          "r = 0 and the null line r = c + branch*t",
          "u ~ r^(4-2n), density ~ r^(5-3n); axis density ~ r^(1-n)"),
    _spec("U5", _u5, _u5_con, _s_u5, _t_u5, _regular, PowerKind.MINUS_THREE,
          ("c", "branch", "sign"), "q = -3, k = -1", "t = 0 and t = -1/c",
          "r-independent; constant nonzero density unless c = 0"),
    _spec("U6", _u6, _u6_con, _s_u6, _t_u6, _regular, PowerKind.CONFORMAL,
          ("c", "branch"), "q = (n+3)/(n-1), k = +1",
          "hyperbola |t + t*| = sqrt(r^2 + t*^2), t* = branch*sqrt(k/(n^2-1))/c",
          "u ~ |c|^((1-n)/2) r^(1-n), density ~ r^(-n-1)"),
    _spec("U7", _u7, _conformal_only, _s_u7, _t_u7, _regular, PowerKind.CONFORMAL,
          ("c",), "q = (n+3)/(n-1)", "r = |t| and r = |t + 1/c|",
          "u ~ r^(1-n), density ~ r^(-n-1) (c != 0)"),
    _spec("U8", _u8, _nonzero_c, _s_u8, _t_fast, _regular, PowerKind.CONFORMAL,
          ("c", "branch"), "q = (n+3)/(n-1), c != 0",
          "branch -1: none; branch +1: r = |t - 1/c| and r = |t + 1/c|",
          "u ~ r^(1-n), density ~ r^(-n-1)"),
    _spec("U9", _u9, _nonzero_c, _s_u9, _t_fast, _regular, PowerKind.CONFORMAL,
          ("c", "c_tilde", "branch"), "q = (n+3)/(n-1), c != 0",
          "branch -1: none; branch +1: r = |t - 1/(c - c~)| and r = |t + 1/(c + c~)|",
          "u ~ r^(1-n), density ~ r^(-n-1)"),
    _spec("IV1", _iv1, _iv12_con, _s_iv1, _zero, _regular, PowerKind.CRITICAL,
          (), "q = (n+2)/(n-2)", "t = 0", "r-independent; density vanishes"),
    _spec("IV2", _iv2, _iv12_con, _s_iv2, _t_iv_crit, _regular, PowerKind.CRITICAL,
          (), "q = (n+2)/(n-2)", "r = |t|", "density ~ r^-1 (divergent)"),
    _spec("IV3", _iv3, _iv3_con, _s_iv3, _t_iv3, _regular, PowerKind.CRITICAL,
          ("branch",), "q = (n+2)/(n-2), branch*k > 0 unless the exponent is an integer",
          "branch -1: r = 1; branch +1: none", "u ~ r^(2-n), density ~ r^(1-n)"),
    _spec("IV4", _iv4, _iv4_con, _s_iv4, _t_growing_static, _a_iv4, PowerKind.INVERSE_DILATION,
          ("branch",), "q = (4-n)/(n-2), n not in {2,3}, k = -1",
          "r = 0 when (n-2)/(n-3) is not an integer", "u ~ r^((n-2)/(n-3)) grows"),
    _spec("IV5", _iv5, _iv5_con, _s_axis, _t_iv_crit, _a_iv5, PowerKind.CRITICAL,
          (), "q = (n+2)/(n-2), k = +1", "r = 0", "density ~ r^-1 at both ends"),
    _spec("IV6", _iv6, _iv6_con, _s_axis, _t_iv6, _a_iv6, PowerKind.CONFORMAL,
          (), "q = (n+3)/(n-1)", "r = 0", "density ~ r^-2 at both ends"),
)


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def family_spec(fid: str) -> FamilySpec:
    try:
        return _REGISTRY[fid]
    except KeyError:
        raise UnsupportedParams(f"unknown family {fid!r}") from None


def field_jet(family: SolutionFamily, t, r) -> Jet2:
    """Jet of u at (t, r) with t and r promoted to independent variables.

    No singular-set guard; arrays are accepted.
    """
    tj = t if isinstance(t, Jet2) else Jet2.var_a(_num(t))
    rj = r if isinstance(r, Jet2) else Jet2.var_b(_num(r))
    if family.shift:
        tj = tj + family.shift
    return family.spec.formula(family, tj, rj)


def _num(x):
    return np.asarray(x, dtype=float) if isinstance(x, np.ndarray) else float(x)


def field_function(family: SolutionFamily) -> Callable:
    """u as a function of (t, r) that accepts floats, arrays or jets."""
    def u(t, r):
        if isinstance(t, Jet2) or isinstance(r, Jet2):
            tj = t if isinstance(t, Jet2) else Jet2.const(_num(t))
            rj = r if isinstance(r, Jet2) else Jet2.const(_num(r))
            return family.spec.formula(family, tj + family.shift, rj)
        return field_jet(family, t, r).v
    return u


def singular_set(family: SolutionFamily) -> SingularSetDescriptor:
    comps = family.spec.singular(family)
    if family.shift:
        shifted = []
        for c in comps:
            if c.kind in ("line", "cone"):
                shifted.append(SingularComponent(c.kind, c.value - family.shift, c.sign))
            elif c.kind == "null":
                shifted.append(SingularComponent(c.kind, c.value - family.shift, c.sign))
            elif c.kind == "hyperbola":
                raise UnsupportedParams("time-shifted hyperbola is not representable")
            else:
                shifted.append(c)
        comps = shifted
    return SingularSetDescriptor(tuple(comps))


def _guard(family: SolutionFamily, t: float, r: float, eps: float):
    if r < 0:
        raise DomainError("radius must be non-negative")
    d = float(singular_set(family).distance(t, r))
    if d < eps * max(1.0, abs(t), r):
        raise DomainError(f"({t}, {r}) lies within {d:.3g} of the singular set")


def evaluate(family: SolutionFamily, t: float, r: float, eps: float = DEFAULT_GUARD) -> Jet2Sample:
    """u and its partials through second order at one point."""
    _guard(family, t, r, eps)
    j = field_jet(family, float(t), float(r))
    return Jet2Sample(float(t), float(r), *(float(x) for x in j.fields()))


def pde_residual(params: ModelParams, u: Jet2, r) -> tuple:
    """Return (residual, scale) with scale = max(1, |k u^q|)."""
    src = params.k * _scalar_power(u.v, params.q)
    res = u.aa - u.bb - (params.n - 1) * u.b / r - src
    return res, np.maximum(1.0, np.abs(src))


def relative_residual(family: SolutionFamily, t: float, r: float, eps: float = DEFAULT_GUARD) -> float:
    s = evaluate(family, t, r, eps)
    j = Jet2(s.u, s.u_t, s.u_r, s.u_tt, s.u_tr, s.u_rr)
    res, scale = pde_residual(family.params, j, r)
    return float(abs(res) / scale)


@dataclass
class ResidualReport:
    family: str
    params: dict
    constants: dict
    samples: list = field(default_factory=list)
    max_residual: float = 0.0
    tol: float = 1e-9
    passed: bool = False
    errors: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def verify_residual(family: SolutionFamily, samples, tol: float = 1e-9,
                    eps: float = DEFAULT_GUARD) -> ResidualReport:
    rep = ResidualReport(family.label(), asdict(family.params), family.constants(), tol=tol)
    worst = 0.0
    valid = 0
    for (t, r) in samples:
        try:
            res = relative_residual(family, float(t), float(r), eps)
        except DomainError as exc:
            rep.samples.append({"t": float(t), "r": float(r), "error": str(exc)})
            rep.errors += 1
            continue
        valid += 1
        worst = max(worst, res)
        rep.samples.append({"t": float(t), "r": float(r), "residual": res})
    rep.max_residual = worst if valid else math.inf
    rep.passed = valid > 0 and worst < tol
    return rep


def sample_interior(family: SolutionFamily, count: int, rng: np.random.Generator,
                    t_range=(-2.0, 2.0), r_range=(0.2, 3.0), margin: float = 0.05,
                    max_tries: int = 200000) -> list:
    """Pseudo-random points where the family is real and away from its singular set."""
    sing = singular_set(family)
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        t = rng.uniform(*t_range)
        r = rng.uniform(*r_range)
        if float(sing.distance(t, r)) < margin:
            continue
        try:
            evaluate(family, t, r)
        except DomainError:
            continue
        out.append((t, r))
    if len(out) < count:
        raise DomainError(f"{family.label()}: only {len(out)} admissible points found")
    return out


# ---------------------------------------------------------------------------
# energy
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EnergyReport:
    value: float
    partial: float
    tail: str
    axis: str
    tail_exponent: Optional[float]
    axis_exponent: Optional[float]

    @property
    def infinite(self) -> bool:
        return math.isinf(self.value)


def _gauss_panels(points: int, edges) -> tuple:
    xs, ws = np.polynomial.legendre.leggauss(max(4, points // (len(edges) - 1)))
    nodes, weights = [], []
    for a, b in zip(edges[:-1], edges[1:]):
        nodes.append(0.5 * (b - a) * xs + 0.5 * (a + b))
        weights.append(0.5 * (b - a) * ws)
    return np.concatenate(nodes), np.concatenate(weights)


def energy_density(family: SolutionFamily, t0: float, r: np.ndarray) -> np.ndarray:
    P = family.params
    j = field_jet(family, np.full_like(r, float(t0)), r)
    pot = P.k * _scalar_power(j.v, P.q + 1.0) / (P.q + 1.0)
    return (0.5 * j.a**2 + 0.5 * j.b**2 - pot) * r ** (P.n - 1)


def _slice_hits(family: SolutionFamily, t0: float, r_max: float) -> bool:
    for comp in singular_set(family).components:
        if comp.kind == "axis":
            continue
        for rr in comp.radii_at(t0):
            if math.isnan(rr) or 0.0 < rr <= r_max:
                return True
    return False


def energy(family: SolutionFamily, t0: float, r_max: float = math.inf,
           quadrature_points: int = 400) -> EnergyReport:
    """Energy of the slice t = t0 with a tail classification.

    ``partial`` integrates over (0, r_max]; ``value`` is the full energy on
    (0, inf), reported as inf when either end of the integrand is not
    integrable.
    """
    if _slice_hits(family, t0, r_max):
        raise DomainError(f"the slice t = {t0} meets the singular set")
    spec = family.spec
    m_inf = spec.tail(family)
    m_0 = spec.axis(family)
    tail = "vanishing" if m_inf is None else ("divergent" if m_inf >= -1 else "convergent")
    axis = "regular" if m_0 is None else ("divergent" if m_0 <= -1 else "integrable")

    def integrate(upper: float) -> float:
        if math.isinf(upper):
            s, w = _gauss_panels(quadrature_points, [0.0, 0.5, 0.8, 0.95, 0.99, 1.0])
            r = s / (1.0 - s)
            jac = 1.0 / (1.0 - s) ** 2
        else:
            s, w = _gauss_panels(quadrature_points, [0.0, 0.25, 0.5, 0.75, 1.0])
            r = upper * s * s
            jac = 2.0 * upper * s
        return float(np.sum(w * jac * energy_density(family, t0, r)))

    if axis == "divergent":
        return EnergyReport(math.inf, math.inf, tail, axis, m_inf, m_0)
    partial = integrate(r_max) if math.isfinite(r_max) else math.nan
    if tail == "divergent":
        value = math.inf
    elif tail == "vanishing":
        value = 0.0
    else:
        value = integrate(math.inf) if not _slice_hits(family, t0, math.inf) else math.nan
    if not math.isfinite(r_max):
        partial = value
    return EnergyReport(value, partial, tail, axis, m_inf, m_0)


# ---------------------------------------------------------------------------
# table and queries
# ---------------------------------------------------------------------------

def family_table() -> list[dict]:
    rows = []
    for fid in FAMILY_IDS:
        s = _REGISTRY[fid]
        rows.append({
            "id": fid,
            "power": s.power.value,
            "constraints": s.side_conditions,
            "constants": list(s.constants),
            "singular_set": s.singular_template,
            "asymptotics": s.asymptotics,
        })
    return rows


def _power_value(kind: PowerKind, n: int) -> float:
    from .core import special_power_value
    return special_power_value(kind, n)


def query_families(n: Optional[int] = None, q: Optional[float] = None,
                   power_kind: Optional[PowerKind] = None, n_search=range(2, 65)) -> list[str]:
    """Family ids compatible with the given filters.

    With q but no n, only families whose power is pinned to a special value
    are matched (a generic family would match every q).
    """
    out = []
    for fid in FAMILY_IDS:
        s = _REGISTRY[fid]
        if power_kind is not None and s.power != power_kind:
            continue
        if n is None and q is None:
            out.append(fid)
            continue
        if n is None and s.power == PowerKind.GENERIC:
            continue
        ns = [n] if n is not None else list(n_search)
        if _satisfiable(fid, ns, q):
            out.append(fid)
    return out


def _satisfiable(fid: str, ns, q) -> bool:
    s = _REGISTRY[fid]
    for n in ns:
        if q is None:
            if s.power == PowerKind.GENERIC:
                qs = [3.0, 0.5, -0.5]
            else:
                qs = [_power_value(s.power, n)]
        else:
            qs = [q]
        for qq in qs:
            if not math.isfinite(qq) or abs(qq - 1.0) < POWER_TOL:
                continue
            for k in (1, -1):
                for branch in (1, -1):
                    try:
                        SolutionFamily(fid, ModelParams(n, qq, k), c=1.0, branch=branch)
                        return True
                    except (UnsupportedParams, ValueError):
                        pass
    return False


# ---------------------------------------------------------------------------
# standard instantiations used by the verification suites
# ---------------------------------------------------------------------------

def _mk(fid, n, q, k, **kw):
    return SolutionFamily(fid, ModelParams(n, q, k), **kw)


def standard_instances() -> list[SolutionFamily]:
    """Three admissible parameter/constant choices per family."""
    cp, cr, idp, sl = conformal_power, critical_power, inverse_dilation_power, static_line_power
    return [
        _mk("U1", 3, 3.0, 1, c=0.5, branch=1),
        _mk("U1", 4, 2.5, 1, c=-0.3, branch=-1),
        _mk("U1", 5, -0.5, 1, c=0.2, branch=-1),
        _mk("U2", 3, 3.0, 1, c=0.0),
        _mk("U2", 4, 0.5, -1, c=0.4),
        _mk("U2", 5, 2.0, 1, c=-0.7),
        _mk("U3", 4, idp(4), -1, c=0.0, branch=1),
        _mk("U3", 5, idp(5), -1, c=0.5, branch=1),
        _mk("U3", 6, idp(6), -1, c=0.3, branch=-1),
        _mk("U4", 4, sl(4), 1, c=0.5, branch=1),
        _mk("U4", 5, sl(5), -1, c=1.0, branch=-1),
        _mk("U4", 6, sl(6), 1, c=-0.5, branch=1),
        _mk("U5", 2, -3.0, -1, c=1.0, branch=1, sign=1),
        _mk("U5", 3, -3.0, -1, c=0.5, branch=-1, sign=-1),
        _mk("U5", 4, -3.0, -1, c=-0.4, branch=1, sign=-1),
        _mk("U6", 3, cp(3), 1, c=-1.0, branch=-1),
        _mk("U6", 4, cp(4), 1, c=0.5, branch=1),
        _mk("U6", 5, cp(5), 1, c=-0.7, branch=1),
        _mk("U7", 3, cp(3), 1, c=1.0),
        _mk("U7", 4, cp(4), -1, c=-0.5),
        _mk("U7", 5, cp(5), 1, c=0.3),
        _mk("U8", 3, cp(3), 1, c=1.0, branch=-1),
        _mk("U8", 4, cp(4), 1, c=0.7, branch=1),
        _mk("U8", 5, cp(5), -1, c=-1.2, branch=-1),
        _mk("U9", 3, cp(3), 1, c=1.0, c_tilde=0.5, branch=-1),
        _mk("U9", 4, cp(4), 1, c=0.8, c_tilde=-0.3, branch=1),
        _mk("U9", 5, cp(5), 1, c=-1.1, c_tilde=0.4, branch=-1),
        _mk("IV1", 3, cr(3), 1),
        _mk("IV1", 4, cr(4), 1),
        _mk("IV1", 6, cr(6), -1),
        _mk("IV2", 3, cr(3), 1),
        _mk("IV2", 4, cr(4), 1),
        _mk("IV2", 5, cr(5), 1),
        _mk("IV3", 3, cr(3), 1, branch=1),
        _mk("IV3", 4, cr(4), -1, branch=-1),
        _mk("IV3", 5, cr(5), 1, branch=1),
        _mk("IV4", 4, idp(4), -1, branch=1),
        _mk("IV4", 5, idp(5), -1, branch=1),
        _mk("IV4", 6, idp(6), -1, branch=1),
        _mk("IV5", 3, cr(3), 1),
        _mk("IV5", 4, cr(4), 1),
        _mk("IV5", 6, cr(6), 1),
        _mk("IV6", 2, cp(2), -1),
        _mk("IV6", 4, cp(4), 1),
        _mk("IV6", 5, cp(5), 1),
    ]
