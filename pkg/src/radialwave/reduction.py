"""Symmetry-reduced ODEs, canonical coordinates, implicit quadrature
solutions and constant invariant solutions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import CheckReport, DomainError, ModelParams, NonMonotone, PowerKind, UnsupportedParams, check as _check
from .jets import _scalar_power


class ODEKind(str, enum.Enum):
    TRANS = "trans"
    SCAL = "scal"
    SCAL_U = "scal-u"
    INVER = "inver"
    TRANS_INVER = "trans-inver"
    TRANS_CANONICAL_SCAL = "trans-canonical-scal"
    TRANS_CANONICAL_DIL = "trans-canonical-dil"
    SCAL_CANONICAL_DIL = "scal-canonical-dil"
    INVER_CANONICAL = "inver-canonical"


_REQUIRED_POWER = {
    ODEKind.INVER: PowerKind.CONFORMAL,
    ODEKind.TRANS_INVER: PowerKind.CONFORMAL,
    ODEKind.INVER_CANONICAL: PowerKind.CONFORMAL,
    ODEKind.TRANS_CANONICAL_SCAL: PowerKind.CRITICAL,
    ODEKind.SCAL_CANONICAL_DIL: PowerKind.CRITICAL,
    ODEKind.TRANS_CANONICAL_DIL: PowerKind.INVERSE_DILATION,
}


@dataclass(frozen=True)
class ReducedODE:
    """A reduced ODE; ``s`` is sgn(1 - xi^2) for the scaling canonical form."""

    kind: ODEKind
    params: ModelParams
    s: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", ODEKind(self.kind))
        need = _REQUIRED_POWER.get(self.kind)
        if need is not None and not self.params.is_power(need):
            raise UnsupportedParams(f"{self.kind.value} requires the {need.value} power")
        if self.s not in (1, -1):
            raise UnsupportedParams("s must be +1 or -1")

    @property
    def p(self) -> float:
        return self.params.p


def _src(P: ModelParams, v: float) -> float:
    return P.k * _scalar_power(v, P.q)


def ode_terms(ode: ReducedODE, x: float, v: float, v1: float, v2: float) -> list:
    """Additive terms of the ODE left-hand side."""
    P, p, n = ode.params, ode.p, ode.params.n
    kind = ode.kind
    if kind == ODEKind.TRANS:
        if x <= 0:
            raise DomainError("r must be positive")
        return [v2, (n - 1) * v1 / x, _src(P, v)]
    if kind == ODEKind.SCAL:
        if x == 0 or abs(x) == 1:
            raise DomainError("xi must avoid 0 and +-1")
        return [(1 - x * x) * v2, ((n - 1) / x + 2 * (p - 1) * x) * v1, p * (1 - p) * v, _src(P, v)]
    if kind == ODEKind.SCAL_U:
        return [(1 - x * x) * v2, (2 * p + n - 3) * x * v1, -p * (p + n - 2) * v, -_src(P, v)]
    if kind == ODEKind.INVER:
        return [x * x * v2, 2 * x * v1, -p * (p + 1) * v, _src(P, v)]
    if kind == ODEKind.TRANS_INVER:
        return [(x * x + 4) * v2, 2 * x * v1, -p * (p + 1) * v, _src(P, v)]
    if kind == ODEKind.TRANS_CANONICAL_SCAL:
        return [v2, -p * p * v, _src(P, v)]
    if kind == ODEKind.TRANS_CANONICAL_DIL:
        return [v2, _src(P, v)]
    if kind == ODEKind.SCAL_CANONICAL_DIL:
        return [ode.s * v2, -p * p * v, _src(P, v)]
    return [v2, v1, -p * (p + 1) * v, _src(P, v)]


def ode_residual(ode: ReducedODE, x: float, v: float, v1: float, v2: float) -> float:
    """Left-hand side of the reduced ODE; zero on exact solutions."""
    return math.fsum(ode_terms(ode, x, v, v1, v2))


def relative_ode_residual(ode: ReducedODE, x: float, v: float, v1: float, v2: float) -> float:
    terms = ode_terms(ode, x, v, v1, v2)
    return abs(math.fsum(terms)) / max(1.0, max(abs(t) for t in terms))


def solve_for_v2(ode: ReducedODE, x: float, v: float, v1: float) -> float:
    """v'' implied by the ODE (leading coefficient must be nonzero)."""
    lead = ode_terms(ode, x, v, v1, 1.0)[0] - ode_terms(ode, x, v, v1, 0.0)[0]
    if lead == 0:
        raise DomainError("leading coefficient vanishes")
    rest = ode_residual(ode, x, v, v1, 0.0)
    return -rest / lead


# ---------------------------------------------------------------------------
# canonical coordinates
# ---------------------------------------------------------------------------

class Direction(str, enum.Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def canonical_map(ode: ReducedODE, direction, point: tuple) -> tuple:
    """Map (r or xi, U) -> (x, v) forward, or back.

    For the scaling canonical form the inner branch |xi| <= 1 has x <= 0 and
    xi = sech x; the outer branch has 0 <= x < pi/2 and xi = sec x.  The
    inverse uses ``ode.s`` to select the branch.
    """
    direction = Direction(direction)
    n = ode.params.n
    a, b = (float(point[0]), float(point[1]))
    kind = ode.kind
    if kind == ODEKind.TRANS_CANONICAL_SCAL:
        if direction == Direction.FORWARD:
            if a <= 0:
                raise DomainError("r must be positive")
            return math.log(a), a ** (n / 2 - 1) * b
        r = math.exp(a)
        return r, r ** (1 - n / 2) * b
    if kind == ODEKind.TRANS_CANONICAL_DIL:
        if direction == Direction.FORWARD:
            if a <= 0:
                raise DomainError("r must be positive")
            return a ** (n - 2) / (n - 2), a ** (n - 2) * b
        if a <= 0:
            raise DomainError("x must be positive")
        r = ((n - 2) * a) ** (1.0 / (n - 2))
        return r, r ** (2 - n) * b
    if kind == ODEKind.SCAL_CANONICAL_DIL:
        if direction == Direction.FORWARD:
            if a <= 0:
                raise DomainError("xi must be positive")
            v = a ** (n / 2 - 1) * b
            if a <= 1.0:
                w = math.sqrt(1.0 - a * a)
                return 0.5 * math.log((1.0 - w) / (1.0 + w)) if w < 1.0 else -math.inf, v
            return math.pi / 2 - math.atan(1.0 / math.sqrt(a * a - 1.0)), v
        if ode.s == 1:
            if a > 0:
                raise DomainError("inner branch has x <= 0")
            xi = 1.0 / math.cosh(a)
        else:
            if not 0 <= a < math.pi / 2:
                raise DomainError("outer branch has 0 <= x < pi/2")
            xi = 1.0 / math.cos(a)
        return xi, xi ** (1 - n / 2) * b
    if kind == ODEKind.INVER_CANONICAL:
        if direction == Direction.FORWARD:
            if a <= 0:
                raise DomainError("xi must be positive")
            return math.log(a), b
        return math.exp(a), b
    raise UnsupportedParams(f"{kind.value} has no canonical map")


# ---------------------------------------------------------------------------
# adaptive Gauss-Kronrod quadrature
# ---------------------------------------------------------------------------

_XGK = np.array([0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                 0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                 0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                 0.207784955007898467600689403773245, 0.0])
_WGK = np.array([0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                 0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                 0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                 0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                0.381830050505118944950369775488975, 0.417959183673469387755102040816327])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
_WG15[[1, 3, 5]] = _WG[:3]
_WG15[7] = _WG[3]
_WG15[[9, 11, 13]] = _WG[2::-1]


def _gk15(f: Callable, a: float, b: float) -> tuple:
    c, h = 0.5 * (a + b), 0.5 * (b - a)
    y = f(c + h * _NODES)
    return h * float(_WK @ y), h * abs(float((_WK - _WG15) @ y))


def gauss_kronrod(f: Callable, a: float, b: float, tol: float = 1e-13, max_intervals: int = 4000) -> tuple:
    """Globally adaptive G7K15 integration of a vectorized f over [a, b]."""
    import heapq
    val, err = _gk15(f, a, b)
    heap = [(-err, a, b, val, err)]
    total, total_err = val, err
    count = 1
    while total_err > max(tol, 1e-15 * abs(total)) and count < max_intervals:
        _, lo, hi, v0, e0 = heapq.heappop(heap)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - v0
        total_err += e1 + e2 - e0
        heapq.heappush(heap, (-e1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, mid, hi, v2, e2))
        count += 1
    if not math.isfinite(total):
        raise DomainError("non-finite quadrature")
    return total, total_err


# ---------------------------------------------------------------------------
# quadrature families
# ---------------------------------------------------------------------------

class QuadratureKind(str, enum.Enum):
    TRANS_SCAL = "trans-scal"
    TRANS_DIL = "trans-dil"
    SCAL_DIL = "scal-dil"


@dataclass(frozen=True)
class QuadratureFamily:
    """x + c_tilde = sign * integral dv / sqrt(R(v)) for an oscillator energy c."""

    kind: QuadratureKind
    params: ModelParams
    c: float = 0.0
    c_tilde: float = 0.0
    s: int = 1
    sign: int = 1

    def __post_init__(self):
        object.__setattr__(self, "kind", QuadratureKind(self.kind))
        need = PowerKind.INVERSE_DILATION if self.kind == QuadratureKind.TRANS_DIL else PowerKind.CRITICAL
        if not self.params.is_power(need):
            raise UnsupportedParams(f"{self.kind.value} requires the {need.value} power")
        if self.s not in (1, -1) or self.sign not in (1, -1):
            raise UnsupportedParams("s and sign must be +1 or -1")

    def _terms(self):
        """Radicand as 2c + sum(coef * v**expo)."""
        P = self.params
        n, k = P.n, P.k
        if self.kind == QuadratureKind.TRANS_DIL:
            return [(-k * (n - 2.0), 2.0 / (n - 2))]
        s = self.s if self.kind == QuadratureKind.SCAL_DIL else 1
        return [(s * (1 - n / 2) ** 2, 2.0), (-s * k * (1 - 2 / n), 2.0 * n / (n - 2))]

    def radicand(self, v):
        v = np.asarray(v, dtype=float)
        return 2 * self.c + sum(a * _pos_pow(v, e) for a, e in self._terms())

    def radicand_scale(self, v: float) -> float:
        return abs(2 * self.c) + sum(abs(a * _pos_pow(v, e)) for a, e in self._terms())

    def radicand_offset(self, anchor: float, d, base: Optional[float] = None):
        """R(anchor + d) as R(anchor) + increment, accurate for small d."""
        d = np.asarray(d, dtype=float)
        r0 = float(self.radicand(anchor)) if base is None else base
        inc = 0.0
        for a, e in self._terms():
            if anchor > 0:
                inc = inc + a * anchor ** e * np.expm1(e * np.log1p(d / anchor))
            else:
                inc = inc + a * _pos_pow(d, e)
        return r0 + inc

    def radicand_derivative(self, v: float) -> float:
        P = self.params
        n, k = P.n, P.k
        if self.kind == QuadratureKind.TRANS_DIL:
            return -2 * k * _pos_pow(v, 2.0 / (n - 2) - 1)
        s = self.s if self.kind == QuadratureKind.SCAL_DIL else 1
        return 2 * s * (1 - n / 2) ** 2 * v - s * 2 * k * _pos_pow(v, (n + 2) / (n - 2))

    def canonical_ode(self) -> ReducedODE:
        kind = {QuadratureKind.TRANS_SCAL: ODEKind.TRANS_CANONICAL_SCAL,
                QuadratureKind.TRANS_DIL: ODEKind.TRANS_CANONICAL_DIL,
                QuadratureKind.SCAL_DIL: ODEKind.SCAL_CANONICAL_DIL}[self.kind]
        return ReducedODE(kind, self.params, self.s)


def _pos_pow(v, e):
    v = np.asarray(v, dtype=float)
    if np.any(v < 0):
        raise DomainError("v must be non-negative")
    with np.errstate(divide="ignore"):
        return np.power(v, e)


@dataclass
class QuadratureSolution:
    family: QuadratureFamily
    v_range: tuple
    v_ref: float
    tol: float = 1e-13
    _x_lo: float = field(default=math.nan, repr=False)
    _x_hi: float = field(default=math.nan, repr=False)

    def integrand(self, w):
        R = self.family.radicand(w)
        with np.errstate(invalid="ignore", divide="ignore"):
            return 1.0 / np.sqrt(R)

    def _anchored(self, anchor: float, direction: float):
        """Integrand as a function of the distance from ``anchor``."""
        fam = self.family
        r0 = float(fam.radicand(anchor))
        if abs(r0) <= 64 * np.finfo(float).eps * fam.radicand_scale(anchor):
            r0 = 0.0

        def f(d):
            R = fam.radicand_offset(anchor, direction * np.asarray(d), r0)
            with np.errstate(invalid="ignore", divide="ignore"):
                return 1.0 / np.sqrt(R)
        return f

    def x_of_v(self, v: float) -> float:
        """x(v) = -c_tilde + sign * integral from v_ref to v."""
        lo, hi = self.v_range
        if not lo <= v <= hi:
            raise DomainError(f"v={v} outside {self.v_range}")
        a, b = self.v_ref, float(v)
        if a == b:
            val = 0.0
        else:
            sgn = 1.0 if b > a else -1.0
            a, b = min(a, b), max(a, b)
            L = math.sqrt(0.5 * (b - a))
            fa, fb = self._anchored(a, 1.0), self._anchored(b, -1.0)
            left = gauss_kronrod(lambda s: 2 * s * fa(s * s), 0.0, L, self.tol / 2)[0]
            right = gauss_kronrod(lambda s: 2 * s * fb(s * s), 0.0, L, self.tol / 2)[0]
            val = sgn * (left + right)
        return -self.family.c_tilde + self.family.sign * val

    def x_range(self) -> tuple:
        if math.isnan(self._x_lo):
            self._x_lo = self.x_of_v(self.v_range[0])
            self._x_hi = self.x_of_v(self.v_range[1])
        return self._x_lo, self._x_hi

    def dv_dx(self, v: float) -> float:
        return self.family.sign * math.sqrt(max(float(self.family.radicand(v)), 0.0))

    def v_of_x(self, x: float, xtol: float = 1e-10) -> float:
        """Invert x(v) on the monotone segment: bisection, then Newton."""
        lo, hi = self.v_range
        xa, xb = self.x_range()
        if not min(xa, xb) - xtol <= x <= max(xa, xb) + xtol:
            raise NonMonotone(f"x={x} lies beyond the monotone segment [{min(xa, xb)}, {max(xa, xb)}]")
        increasing = xb > xa
        a, b = lo, hi
        for _ in range(200):
            if b - a < 1e-3 * (hi - lo):
                break
            m = 0.5 * (a + b)
            xm = self.x_of_v(m)
            if (xm < x) == increasing:
                a = m
            else:
                b = m
        v = 0.5 * (a + b)
        for _ in range(60):
            xv = self.x_of_v(v)
            err = xv - x
            if abs(err) < 1e-15 * max(1.0, abs(x)):
                break
            slope = self.family.sign / math.sqrt(float(self.family.radicand(v)))
            v_new = v - err / slope
            if not a <= v_new <= b:
                v_new = 0.5 * (a + b)
            if (xv < x) == increasing:
                a = max(a, v)
            else:
                b = min(b, v)
            if abs(v_new - v) < 1e-16 * max(1.0, abs(v)):
                v = v_new
                break
            v = v_new
        if abs(self.x_of_v(v) - x) > xtol:
            raise NonMonotone(f"inversion did not converge at x={x}")
        return v

    def residual_at(self, x: float, h: float = 1e-2) -> float:
        """Relative canonical-ODE residual of the inverted v(x), with v', v''
        from five-point differences of the numerical inverse."""
        vs = [self.v_of_x(x + j * h) for j in (-2, -1, 0, 1, 2)]
        v1 = (vs[0] - 8 * vs[1] + 8 * vs[3] - vs[4]) / (12 * h)
        v2 = (-vs[0] + 16 * vs[1] - 30 * vs[2] + 16 * vs[3] - vs[4]) / (12 * h * h)
        return relative_ode_residual(self.family.canonical_ode(), x, vs[2], v1, v2)

    def table(self, count: int = 101) -> np.ndarray:
        vs = np.linspace(self.v_range[0], self.v_range[1], count)
        return np.array([[v, self.x_of_v(v)] for v in vs])


def quadrature_solve(fam: QuadratureFamily, v_range: tuple, v_ref: Optional[float] = None,
                     tol: float = 1e-13, probes: int = 513) -> QuadratureSolution:
    """Implicit solution x(v) on a range where the radicand is positive.

    Zeros of the radicand are allowed at the endpoints (turning points).
    ``v_ref`` (default: lower end) is where x = -c_tilde.
    """
    lo, hi = float(v_range[0]), float(v_range[1])
    if not hi > lo:
        raise DomainError("empty v range")
    inner = np.linspace(lo, hi, probes)[1:-1]
    R = fam.radicand(inner)
    if np.any(~np.isfinite(R)) or np.any(R <= 0):
        raise DomainError("radicand changes sign on the v range")
    ref = lo if v_ref is None else float(v_ref)
    return QuadratureSolution(fam, (lo, hi), ref, tol)


def turning_point(fam: QuadratureFamily, bracket: tuple) -> float:
    """Zero of the radicand inside ``bracket`` (Brent's method)."""
    from scipy.optimize import brentq
    return brentq(lambda v: float(fam.radicand(v)), bracket[0], bracket[1], xtol=1e-15, rtol=1e-15)


def zero_energy_closed_form(fam: QuadratureFamily, x, variant: int = 1):
    """Explicit v(x) for c = 0 and c_tilde = 0.

    Trans/scal critical quadratures: v = (n(n-2)/(4k) (1 - tanh(x)^(+-2)))^((n-2)/4),
    with variant +1 (k = 1) or -1 (k = -1).  Outer scaling branch (s = -1, k = 1):
    v = (n(n-2)/(4k) (1 + tan(x)^(-+2)))^((n-2)/4), i.e. csc^2 (variant +1) or
    sec^2 (variant -1).  Dilation quadrature (k = -1, n >= 4):
    v = (variant (n-3) x / sqrt(n-2))^((n-2)/(n-3)).
    """
    P = fam.params
    n, k = P.n, P.k
    x = np.asarray(x, dtype=float)
    if fam.kind == QuadratureKind.TRANS_DIL:
        if k != -1:
            raise UnsupportedParams("the zero-energy dilation quadrature is real only for k = -1")
        return _pos_pow(variant * (n - 3) * x / math.sqrt(n - 2), (n - 2) / (n - 3))
    if fam.kind == QuadratureKind.SCAL_DIL and fam.s == -1:
        base = n * (n - 2) / (4 * k) * (1 + np.tan(x) ** (-2 * variant))
    else:
        base = n * (n - 2) / (4 * k) * (1 - np.tanh(x) ** (2 * variant))
    return _pos_pow(base, (n - 2) / 4)


def constant_solutions(ode: ReducedODE) -> list:
    """Real nonzero constant solutions v of the ODE."""
    P, p = ode.params, ode.p
    if ode.kind in (ODEKind.TRANS_CANONICAL_SCAL, ODEKind.SCAL_CANONICAL_DIL):
        a = p * p / P.k
    elif ode.kind in (ODEKind.INVER_CANONICAL, ODEKind.INVER, ODEKind.TRANS_INVER):
        a = p * (p + 1) / P.k
    else:
        return []
    e = 1.0 / (P.q - 1)
    out = []
    if a > 0:
        out.append(a ** e)
    q_int = abs(P.q - round(P.q)) < 1e-12
    if q_int and round(P.q) % 2 == 1 and a > 0:
        out.append(-(a ** e))
    return out


def transvinv_printed(P: ModelParams) -> float:
    """The constant ((1 - n/2)/sqrt(k))^(n/2 - 1) of the trans canonical form."""
    if P.k != 1:
        raise UnsupportedParams("defined for k = 1")
    return _scalar_power(1 - P.n / 2, P.n / 2 - 1)


# ---------------------------------------------------------------------------
# invariant profiles of catalog solutions
# ---------------------------------------------------------------------------

def profile(family, ode: ReducedODE, z: float, ref: float = 1.0) -> tuple:
    """(U, U', U'') of a group-invariant catalog solution along a reference line.

    TRANS: U(r) = u(ref, r).  SCAL: U(xi) = u(1, xi) with u = t^p U(r/t).
    SCAL_U: U(x) = u(x, 1).  INVER / TRANS_INVER: U(xi) = u(t, 1) with
    xi = t^2 - 1 or t^2, t > 0.
    """
    from .catalog import evaluate

    kind = ode.kind
    if kind == ODEKind.TRANS:
        s = evaluate(family, ref, z)
        return s.u, s.u_r, s.u_rr
    if kind == ODEKind.SCAL:
        s = evaluate(family, 1.0, z)
        return s.u, s.u_r, s.u_rr
    if kind == ODEKind.SCAL_U:
        s = evaluate(family, z, 1.0)
        return s.u, s.u_t, s.u_tt
    if kind in (ODEKind.INVER, ODEKind.TRANS_INVER):
        arg = z + 1.0 if kind == ODEKind.INVER else z
        if arg <= 0:
            raise DomainError("no real time for this xi")
        t = math.sqrt(arg)
        s = evaluate(family, t, 1.0)
        d1 = s.u_t / (2 * t)
        d2 = s.u_tt / (4 * t * t) - s.u_t / (4 * t ** 3)
        return s.u, d1, d2
    raise UnsupportedParams(f"no profile for {kind.value}")


def profile_residual(family, ode: ReducedODE, points) -> float:
    """Max relative ODE residual of a catalog solution's invariant profile."""
    worst = 0.0
    for z in points:
        U, U1, U2 = profile(family, ode, z)
        worst = max(worst, relative_ode_residual(ode, z, U, U1, U2))
    return worst


# ---------------------------------------------------------------------------
# absence of point symmetries for the trans-inversion reduction
# ---------------------------------------------------------------------------

@dataclass
class WitnessReport:
    n: int
    lam: float
    defects: dict
    passed: bool

    def to_json(self) -> dict:
        return {"n": self.n, "lambda": self.lam, "defects": self.defects, "pass": self.passed}


def _ode_solution(ode: ReducedODE, x0: float, y0: tuple, span: tuple):
    from scipy.integrate import solve_ivp

    def rhs(x, y):
        return [y[1], solve_for_v2(ode, x, y[0], y[1])]
    sol = solve_ivp(rhs, span, list(y0), method="DOP853", rtol=1e-12, atol=1e-13, dense_output=True)
    if not sol.success:
        raise DomainError(sol.message)
    return sol.sol


def _transformed_defect(ode: ReducedODE, sol, xs, transform) -> float:
    """Max relative residual of W obtained from a solution U by ``transform``.

    ``transform(x)`` returns (y, dy/dx, d2y/dx2) with W(x) = U(y(x)); the
    derivatives of W follow from the chain rule with U'' from the ODE.
    """
    worst = 0.0
    for x in xs:
        y, dy, ddy = transform(x)
        U, U1 = sol(y)
        U2 = solve_for_v2(ode, y, U, U1)
        W1 = U1 * dy
        W2 = U2 * dy * dy + U1 * ddy
        worst = max(worst, relative_ode_residual(ode, x, U, W1, W2))
    return float(worst)


def no_symmetry_witness(n: int, lam: float = 0.3, samples: int = 20, k: int = 1) -> WitnessReport:
    """Show that xi-scaling and the flow of sqrt(xi^2+4) d/dxi are not symmetries
    of the trans-inversion ODE, while xi-scaling is one of the inversion ODE."""
    P = ModelParams.at_power(PowerKind.CONFORMAL, n, k)
    ti = ReducedODE(ODEKind.TRANS_INVER, P)
    inv = ReducedODE(ODEKind.INVER, P)
    xs = np.linspace(0.5, 1.5, samples)
    hi = 1.5 * max(1.0, math.exp(abs(lam)) * 2.0)
    sol_ti = _ode_solution(ti, 1.0, (0.5, 0.1), (0.4 / max(1.0, math.exp(abs(lam))), hi))
    sol_inv = _ode_solution(inv, 1.0, (0.5, 0.1), (0.4 / max(1.0, math.exp(abs(lam))), hi))
    scale = lambda x: (math.exp(lam) * x, math.exp(lam), 0.0)

    def flow(x):
        y = 2 * math.sinh(math.asinh(x / 2) + lam)
        dy = math.sqrt(y * y + 4) / math.sqrt(x * x + 4)
        ddy = y * dy / (math.sqrt(y * y + 4) * math.sqrt(x * x + 4)) \
            - math.sqrt(y * y + 4) * x / (x * x + 4) ** 1.5
        return y, dy, ddy

    identity = lambda x: (x, 1.0, 0.0)
    defects = {
        "trans-inver/identity": _transformed_defect(ti, sol_ti, xs, identity),
        "trans-inver/xi-scaling": _transformed_defect(ti, sol_ti, xs, scale),
        "trans-inver/dilation-flow": _transformed_defect(ti, sol_ti, xs, flow),
        "inver/identity": _transformed_defect(inv, sol_inv, xs, identity),
        "inver/xi-scaling": _transformed_defect(inv, sol_inv, xs, scale),
    }
    ok = (defects["trans-inver/identity"] < 1e-10 and defects["inver/identity"] < 1e-10
          and defects["inver/xi-scaling"] < 1e-10
          and (lam == 0 or (defects["trans-inver/xi-scaling"] > 1e-3
                            and defects["trans-inver/dilation-flow"] > 1e-3)))
    return WitnessReport(n, lam, defects, bool(ok))


# ---------------------------------------------------------------------------
# verification suite
# ---------------------------------------------------------------------------

def _profile_cases() -> list:
    from .catalog import SolutionFamily
    crit = lambda n, k=1: ModelParams.at_power(PowerKind.CRITICAL, n, k)
    conf = lambda n, k=1: ModelParams.at_power(PowerKind.CONFORMAL, n, k)
    cubic = ModelParams(3, 3.0, 1)
    line = ModelParams.at_power(PowerKind.STATIC_LINE, 5, 1)
    inner, outer = np.linspace(0.1, 0.9, 9), np.linspace(1.1, 3.0, 9)
    return [
        (SolutionFamily("U3", ModelParams.at_power(PowerKind.INVERSE_DILATION, 5, -1), c=0.7),
         ODEKind.TRANS, np.linspace(0.5, 3.0, 9)),
        (SolutionFamily("IV3", crit(3)), ODEKind.TRANS, np.linspace(0.5, 3.0, 9)),
        (SolutionFamily("IV5", crit(4)), ODEKind.TRANS, np.linspace(0.5, 3.0, 9)),
        (SolutionFamily("U1", cubic), ODEKind.SCAL, inner),
        (SolutionFamily("U1", cubic), ODEKind.SCAL_U, outer),
        (SolutionFamily("U2", cubic), ODEKind.SCAL, outer),
        (SolutionFamily("U2", cubic), ODEKind.SCAL_U, inner),
        (SolutionFamily("U4", line), ODEKind.SCAL, inner),
        (SolutionFamily("U4", line), ODEKind.SCAL_U, np.linspace(1.2, 3.0, 9)),
        (SolutionFamily("U6", conf(3)), ODEKind.SCAL, inner),
        (SolutionFamily("U7", conf(3)), ODEKind.SCAL, outer),
        (SolutionFamily("IV6", conf(5)), ODEKind.INVER, np.linspace(0.5, 3.0, 9)),
    ]


def _inversion_normalisation() -> list:
    """U6(c) and U7(c) mapped to their c = 0 members by one inversion."""
    from .catalog import SolutionFamily, field_function
    from .liealg import GroupElement, transformed
    P = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
    a = math.sqrt(P.k / (P.n * P.n - 1.0))
    out = []
    cases = [("U7", 0.4, 1, -0.4, [(0.3, 1.0), (0.2, 1.5), (-0.4, 2.0), (0.1, 0.8)]),
             ("U6", 0.5, 1, -0.5 / (2 * a), [(0.3, 0.1), (0.9, 0.5), (0.5, 0.2), (0.7, 0.1)]),
             ("U6", 0.5, -1, 0.5 / (2 * a), [(-0.3, 0.1), (-0.9, 0.5), (-0.5, 0.2), (-0.7, 0.1)])]
    for fid, c, branch, lam, pts in cases:
        g = transformed(GroupElement("inversion", lam), field_function(SolutionFamily(fid, P, c=c, branch=branch)), P)
        f0 = field_function(SolutionFamily(fid, P, c=0.0, branch=branch))
        worst = max(abs(float(g(t, r)) - float(f0(t, r))) / abs(float(f0(t, r))) for t, r in pts)
        out.append(_check(f"inversion-normalises/{fid}", worst, 1e-10, c=c, branch=branch, lam=lam))
    return out


def _closed_form_checks() -> list:
    out = []
    for n in (3, 4, 5, 6):
        P = ModelParams.at_power(PowerKind.CRITICAL, n, 1)
        fam = QuadratureFamily(QuadratureKind.TRANS_SCAL, P)
        vt = float(zero_energy_closed_form(fam, 0.0))
        sol = quadrature_solve(fam, (1e-3, vt), v_ref=vt)
        xs = np.linspace(-3.0, -0.05, 7)
        err = max(abs(sol.v_of_x(x) - float(zero_energy_closed_form(fam, x))) for x in xs)
        out.append(_check(f"closed-form/trans-scal/k=1/n={n}", err, 1e-6))
        res = max(sol.residual_at(x) for x in xs[1:-1])
        out.append(_check(f"quadrature-residual/trans-scal/k=1/n={n}", res, 1e-6))

        sd = quadrature_solve(QuadratureFamily(QuadratureKind.SCAL_DIL, P, s=1), (1e-3, vt), v_ref=vt)
        vs = np.linspace(1e-3, vt, 9)
        diff = max(abs(sd.x_of_v(v) - sol.x_of_v(v)) for v in vs)
        out.append(_check(f"scal-dil(s=+1)=trans-scal/n={n}", diff, 1e-12))

        Pm = ModelParams.at_power(PowerKind.CRITICAL, n, -1)
        xs = np.linspace(0.3, 2.0, 7)
        vv = zero_energy_closed_form(QuadratureFamily(QuadratureKind.TRANS_SCAL, Pm), xs, -1)
        fam = QuadratureFamily(QuadratureKind.TRANS_SCAL, Pm, c_tilde=-2.0, sign=-1)
        sol = quadrature_solve(fam, (0.5 * float(vv[-1]), 2.0 * float(vv[0])), v_ref=float(vv[-1]))
        err = max(abs(sol.v_of_x(x) - v) for x, v in zip(xs, vv))
        out.append(_check(f"closed-form/trans-scal/k=-1/n={n}", err, 1e-6))

        fam = QuadratureFamily(QuadratureKind.SCAL_DIL, P, s=-1, c_tilde=-math.pi / 2, sign=-1)
        xs = np.linspace(0.3, 1.4, 7)
        vv = zero_energy_closed_form(fam, xs)
        vmin = float(zero_energy_closed_form(fam, math.pi / 2))
        sol = quadrature_solve(fam, (vmin, 1.5 * float(vv[0])), v_ref=vmin)
        err = max(abs(sol.v_of_x(x) - v) for x, v in zip(xs, vv))
        out.append(_check(f"closed-form/scal-dil(s=-1)/n={n}", err, 1e-6))
    for n in (4, 5, 6):
        P = ModelParams.at_power(PowerKind.INVERSE_DILATION, n, -1)
        fam = QuadratureFamily(QuadratureKind.TRANS_DIL, P)
        xs = np.linspace(0.2, 2.0, 7)
        vv = zero_energy_closed_form(fam, xs)
        sol = quadrature_solve(fam, (0.0, 1.5 * float(vv[-1])), v_ref=0.0)
        err = max(abs(sol.v_of_x(x) - v) for x, v in zip(xs, vv))
        out.append(_check(f"closed-form/trans-dil/k=-1/n={n}", err, 1e-6))
    return out


def _trans_dil_example() -> list:
    """n = 5, k = 1, c = 1/2: x(v) is monotone up to the turning point."""
    P = ModelParams.at_power(PowerKind.INVERSE_DILATION, 5, 1)
    fam = QuadratureFamily(QuadratureKind.TRANS_DIL, P, c=0.5)
    vt = turning_point(fam, (1e-6, 1.0))
    sol = quadrature_solve(fam, (0.0, vt), v_ref=0.0)
    tab = sol.table(33)
    steps = np.diff(tab[:, 1])
    xs = np.linspace(0.1, 0.8, 5) * sol.x_range()[1]
    res = max(sol.residual_at(float(x), h=1e-3) for x in xs)
    v0s = np.linspace(0.05, 0.9, 6) * vt
    trip = max(abs(sol.v_of_x(sol.x_of_v(float(v))) - v) for v in v0s)
    return [
        _check("trans-dil/n=5/c=1/2/monotone", 0.0 if np.all(steps > 0) else 1.0, 0.5,
               turning_point=vt, x_max=sol.x_range()[1]),
        _check("trans-dil/n=5/c=1/2/residual", res, 1e-6),
        _check("trans-dil/n=5/c=1/2/round-trip", trip, 1e-8),
    ]


def _constant_checks() -> list:
    from .catalog import SolutionFamily, field_jet
    out = []
    for n in (3, 4, 5, 6):
        ode = ReducedODE(ODEKind.TRANS_CANONICAL_SCAL, ModelParams.at_power(PowerKind.CRITICAL, n, 1))
        vals = constant_solutions(ode)
        worst = max(abs(ode_residual(ode, 0.0, v, 0.0, 0.0)) for v in vals)
        out.append(_check(f"constant/trans-canonical-scal/n={n}", worst, 1e-12, values=vals))
    P = ModelParams.at_power(PowerKind.CONFORMAL, 5, 1)
    ode = ReducedODE(ODEKind.INVER_CANONICAL, P)
    vals = constant_solutions(ode)
    worst = max(abs(ode_residual(ode, 0.0, v, 0.0, 0.0)) for v in vals)
    out.append(_check("constant/inver-canonical/n=5", worst, 1e-12, values=vals))
    printed = float(field_jet(SolutionFamily("IV6", P, as_printed=True), 0.0, 1.0).v)
    gap = abs(ode_residual(ode, 0.0, printed, 0.0, 0.0))
    out.append(CheckReport("erratum/IV6-printed-amplitude", gap, 1e-12, gap > 1e-12,
                           {"printed": printed, "constant": vals[0],
                            "note": "the printed amplitude is not a constant solution; "
                                    "(n-1)(n-3)/(4k) is"}))
    return out


def _map_checks() -> list:
    out = []
    rng = np.random.default_rng(0)
    for kind, power, n in [(ODEKind.TRANS_CANONICAL_SCAL, PowerKind.CRITICAL, 4),
                           (ODEKind.TRANS_CANONICAL_DIL, PowerKind.INVERSE_DILATION, 5),
                           (ODEKind.SCAL_CANONICAL_DIL, PowerKind.CRITICAL, 4),
                           (ODEKind.INVER_CANONICAL, PowerKind.CONFORMAL, 5)]:
        P = ModelParams.at_power(power, n, 1)
        worst = 0.0
        for a, b in zip(rng.uniform(0.1, 3.0, 20), rng.uniform(-2.0, 2.0, 20)):
            if abs(a - 1.0) < 1e-3:
                continue
            s = 1 if kind != ODEKind.SCAL_CANONICAL_DIL or a < 1 else -1
            ode = ReducedODE(kind, P, s)
            x, v = canonical_map(ode, Direction.FORWARD, (a, b))
            a2, b2 = canonical_map(ode, Direction.INVERSE, (x, v))
            worst = max(worst, abs(a2 - a) / abs(a), abs(b2 - b) / max(abs(b), 1.0))
        out.append(_check(f"canonical-map-roundtrip/{kind.value}", worst, 1e-12))
    ode = ReducedODE(ODEKind.SCAL_CANONICAL_DIL, ModelParams.at_power(PowerKind.CRITICAL, 4, 1))
    d = 1e-6
    x_in = canonical_map(ode, Direction.FORWARD, (1.0 - d, 1.0))[0]
    x_out = canonical_map(ode, Direction.FORWARD, (1.0 + d, 1.0))[0]
    x_one = canonical_map(ode, Direction.FORWARD, (1.0, 1.0))[0]
    bound = 1.01 * math.sqrt(2 * d)
    gap = max(abs(x_one), max(abs(x_in), abs(x_out)) - bound, 0.0)
    out.append(_check("scal-canonical-dil/continuity-at-1", gap, 1e-12, x_inner=x_in, x_outer=x_out,
                      x_at_one=x_one))
    return out


def reduction_suite() -> list:
    """Checks of the reduced ODEs, canonical forms and quadrature solutions."""
    reports = []
    for family, kind, pts in _profile_cases():
        ode = ReducedODE(kind, family.params)
        reports.append(_check(f"profile/{family.id}/{kind.value}", profile_residual(family, ode, pts), 1e-8))
    reports += _inversion_normalisation()
    reports += _closed_form_checks()
    reports += _trans_dil_example()
    reports += _constant_checks()
    reports += _map_checks()
    for n in (3, 4, 5):
        w = no_symmetry_witness(n)
        reports.append(CheckReport(f"no-symmetry-witness/n={n}", w.defects["trans-inver/xi-scaling"],
                                   1e-3, w.passed, w.to_json()))
    return reports
