"""Polynomial vector fields with exact rational coefficients, their brackets,
and the one-parameter group actions on solutions.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Optional

import numpy as np

from .core import DomainError, ModelParams, PowerKind, UnsupportedParams
from .jets import Jet2, power

VARS = ("t", "r", "u")


# ---------------------------------------------------------------------------
# exact polynomials in (t, r, u)
# ---------------------------------------------------------------------------

class Poly:
    """Sparse polynomial in (t, r, u) with Fraction coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[dict] = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(0, 0, 0): Fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        e = [0, 0, 0]
        e[VARS.index(name)] = 1
        return cls({tuple(e): Fraction(1)})

    def __add__(self, o):
        o = _poly(o)
        out = dict(self.terms)
        for m, c in o.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, o):
        return self + (-_poly(o))

    def __rsub__(self, o):
        return _poly(o) - self

    def __mul__(self, o):
        o = _poly(o)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in o.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, (Poly, int, Fraction)) and (self - _poly(o)).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def diff(self, name: str) -> "Poly":
        i = VARS.index(name)
        out = {}
        for m, c in self.terms.items():
            if m[i] > 0:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return Poly(out)

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __call__(self, t, r, u):
        total = 0.0
        for (a, b, c), coef in self.terms.items():
            total = total + float(coef) * t**a * r**b * u**c
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in zip(VARS, m) if e)
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def _poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


T, R, U = Poly.var("t"), Poly.var("r"), Poly.var("u")


@dataclass(frozen=True)
class PolyVectorField:
    """X = coeff_t d/dt + coeff_r d/dr + coeff_u d/du."""

    coeff_t: Poly
    coeff_r: Poly
    coeff_u: Poly
    name: str = ""

    def components(self) -> tuple:
        return (self.coeff_t, self.coeff_r, self.coeff_u)

    def apply(self, f: Poly) -> Poly:
        return self.coeff_t * f.diff("t") + self.coeff_r * f.diff("r") + self.coeff_u * f.diff("u")

    def __add__(self, o: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(*(a + b for a, b in zip(self.components(), o.components())))

    def __sub__(self, o: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(*(a - b for a, b in zip(self.components(), o.components())))

    def scale(self, c) -> "PolyVectorField":
        c = Fraction(c)
        return PolyVectorField(*(a * c for a in self.components()))

    def __eq__(self, o):
        return isinstance(o, PolyVectorField) and all(
            (a - b).is_zero() for a, b in zip(self.components(), o.components()))

    def __hash__(self):
        return hash(self.components())

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.components())

    def to_json(self) -> dict:
        return {"t": repr(self.coeff_t), "r": repr(self.coeff_r), "u": repr(self.coeff_u)}


def lie_bracket(X: PolyVectorField, Y: PolyVectorField) -> PolyVectorField:
    """[X, Y] with components X(Y^i) - Y(X^i)."""
    return PolyVectorField(*(X.apply(b) - Y.apply(a) for a, b in zip(X.components(), Y.components())))


def _exact_p(params: ModelParams) -> Fraction:
    if params.is_power(PowerKind.CONFORMAL):
        return Fraction(1 - params.n, 2)
    return Fraction(2) / (1 - params.q_exact)


def x_trans() -> PolyVectorField:
    return PolyVectorField(Poly.const(1), Poly(), Poly(), "X_trans")


def x_scal(p) -> PolyVectorField:
    p = Fraction(p)
    return PolyVectorField(T, R, U * p, "X_scal")


def x_inver(n: int) -> PolyVectorField:
    return PolyVectorField(T * T + R * R, R * T * 2, T * U * (1 - n), "X_inver")


def generators(params: ModelParams) -> dict:
    """Generators admitted at the given power (inversion only at q_c)."""
    out = {"X_trans": x_trans(), "X_scal": x_scal(_exact_p(params))}
    if params.is_power(PowerKind.CONFORMAL):
        out["X_inver"] = x_inver(params.n)
    return out


def _solve_exact(rows: list, rhs: list) -> Optional[list]:
    """Solve an (over)determined linear system exactly; None if inconsistent."""
    m = len(rows[0]) if rows else 0
    A = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_cols = []
    row = 0
    for col in range(m):
        pivot = next((i for i in range(row, len(A)) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[row], A[pivot] = A[pivot], A[row]
        pv = A[row][col]
        A[row] = [x / pv for x in A[row]]
        for i in range(len(A)):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        piv_cols.append(col)
        row += 1
    for i in range(row, len(A)):
        if A[i][m] != 0:
            return None
    sol = [Fraction(0)] * m
    for i, col in enumerate(piv_cols):
        sol[col] = A[i][m]
    return sol


def decompose(Z: PolyVectorField, basis: dict) -> Optional[dict]:
    """Exact coefficients of Z in the span of ``basis``, or None."""
    names = list(basis)
    keys = set()
    for X in list(basis.values()) + [Z]:
        for i, comp in enumerate(X.components()):
            keys.update((i, m) for m in comp.terms)
    keys = sorted(keys)
    rows = [[basis[nm].components()[i].terms.get(m, Fraction(0)) for nm in names] for i, m in keys]
    rhs = [Z.components()[i].terms.get(m, Fraction(0)) for i, m in keys]
    sol = _solve_exact(rows, rhs)
    if sol is None:
        return None
    return dict(zip(names, sol))


def bracket_table(params: ModelParams) -> dict:
    """All brackets of the admitted generators with exact structure constants."""
    gens = generators(params)
    names = list(gens)
    table = {}
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            Z = lie_bracket(gens[a], gens[b])
            coeffs = decompose(Z, gens)
            table[f"[{a},{b}]"] = {
                "field": Z.to_json(),
                "coefficients": None if coeffs is None else {k: str(v) for k, v in coeffs.items() if v != 0},
            }
    return {"n": params.n, "q": params.q, "p": str(_exact_p(params)),
            "generators": {k: v.to_json() for k, v in gens.items()}, "brackets": table}


def jacobi(X: PolyVectorField, Y: PolyVectorField, Z: PolyVectorField) -> PolyVectorField:
    return (lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X))
            + lie_bracket(Z, lie_bracket(X, Y)))


# ---------------------------------------------------------------------------
# group actions
# ---------------------------------------------------------------------------

class GroupKind(str, enum.Enum):
    TRANSLATION = "translation"
    SCALING = "scaling"
    INVERSION = "inversion"
    INVOLUTION = "involution"


@dataclass(frozen=True)
class GroupElement:
    kind: GroupKind
    lam: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind(self.kind))
        if self.kind == GroupKind.SCALING and not self.lam > 0:
            raise UnsupportedParams("scaling requires lambda > 0")


def _val(x):
    return x.v if isinstance(x, Jet2) else x


def _check_positive(x, what):
    if np.any(np.asarray(_val(x)) <= 0):
        raise DomainError(f"{what} must be positive")


def transformed(g: GroupElement, u: Callable, params: ModelParams) -> Callable:
    """The image of the solution u under g as a function of (t, r).

    The returned function accepts floats, arrays or jets, like ``u`` itself.
    Inversion maps u to Omega^(-p) u(Omega (t + lam s), Omega r) with
    s = t^2 - r^2 and Omega = s / ((t + lam s)^2 - r^2); Omega^(-1) is the
    inverse-parameter factor evaluated at the image point.  The involution
    maps u to s^p u(-t/s, r/s) with p = (1-n)/2, which requires s > 0.
    """
    p = params.p
    if g.kind in (GroupKind.INVERSION, GroupKind.INVOLUTION) and not params.is_power(PowerKind.CONFORMAL):
        raise UnsupportedParams(f"{g.kind.value} requires the conformal power")
    lam = g.lam

    if g.kind == GroupKind.TRANSLATION:
        return lambda t, r: u(t + lam, r)
    if g.kind == GroupKind.SCALING:
        fac = lam ** (-p)
        return lambda t, r: fac * u(t * lam, r * lam)
    if g.kind == GroupKind.INVERSION:
        def inv(t, r):
            s = t * t - r * r
            tl = t + s * lam
            den = tl * tl - r * r
            if np.any(np.asarray(_val(den)) == 0) or np.any(np.asarray(_val(s)) == 0):
                raise DomainError("inversion denominator vanishes")
            om = s / den
            _check_positive(om, "Omega")
            return power(om, -p) * u(om * tl, om * r)
        return inv

    def invol(t, r):
        s = t * t - r * r
        _check_positive(s, "t^2 - r^2")
        return power(s, p) * u(-t / s, r / s)
    return invol


def apply_group(g: GroupElement, u: Callable, params: ModelParams, t, r):
    """Value of the transformed solution at (t, r)."""
    return transformed(g, u, params)(t, r)


def transformed_residual(g: GroupElement, u: Callable, params: ModelParams, t: float, r: float) -> float:
    """Relative PDE residual of the transformed solution, from exact jets."""
    from .catalog import pde_residual
    j = transformed(g, u, params)(Jet2.var_a(float(t)), Jet2.var_b(float(r)))
    if not all(np.isfinite(f) for f in j.fields()):
        raise DomainError("non-finite transformed jet")
    res, scale = pde_residual(params, j, r)
    return float(abs(res) / scale)


def invariant_v(u: Callable, params: ModelParams) -> Callable:
    """v(xi, x) = r^(-p) u(t, r) with xi = t/r and x = (t^2 - r^2)/r."""
    p = params.p

    def v(xi, x):
        den = xi * xi - 1.0
        if den == 0:
            raise DomainError("xi = +-1 is not covered by the (xi, x) chart")
        r = x / den
        if r <= 0:
            raise DomainError("(xi, x) maps to a non-positive radius")
        return r ** (-p) * u(xi * r, r)
    return v


@dataclass
class ActionReport:
    lam: float
    max_deviation: float
    samples: list = field(default_factory=list)
    passed: bool = False


def check_inversion_invariant_action(u: Callable, params: ModelParams, lam: float,
                                     points: Iterable, tol: float = 1e-9) -> ActionReport:
    """Compare the inversion action on u with the shift xi -> xi + lam x on v."""
    v = invariant_v(u, params)
    image = transformed(GroupElement(GroupKind.INVERSION, lam), u, params)
    v_image = invariant_v(image, params)
    rep = ActionReport(lam, 0.0)
    worst = 0.0
    for xi, x in points:
        lhs = v(xi + lam * x, x)
        rhs = v_image(xi, x)
        dev = abs(lhs - rhs) / max(1.0, abs(lhs))
        worst = max(worst, dev)
        rep.samples.append({"xi": xi, "x": x, "shifted": lhs, "acted": rhs, "deviation": dev})
    rep.max_deviation = worst
    rep.passed = bool(rep.samples) and worst < tol
    return rep


# ---------------------------------------------------------------------------
# orbit membership up to constants
# ---------------------------------------------------------------------------

@dataclass
class ConstantFit:
    family: str
    constants: dict
    max_deviation: float
    matched: bool


def fit_constants(target: Callable, template, points, free=("c",), tol: float = 1e-9,
                  starts: Optional[Iterable] = None) -> ConstantFit:
    """Fit the free constants of a catalog family to a function of (t, r).

    The branch is enumerated and every start (a dict of initial constants) is
    tried; the continuous constants come from nonlinear least squares on
    relative deviations.
    """
    from dataclasses import replace
    from scipy.optimize import least_squares
    from .catalog import field_function

    pts = list(points)
    y = np.array([target(t, r) for t, r in pts], dtype=float)
    starts = list(starts) if starts is not None else [{}]
    best = None
    for branch in (1, -1):
        for st in starts:
            x0 = np.array([st.get(k, getattr(template, k)) for k in free], dtype=float)

            def resid(x):
                try:
                    fam = replace(template, branch=branch, **dict(zip(free, map(float, x))))
                    f = field_function(fam)
                    vals = np.array([f(t, r) for t, r in pts], dtype=float)
                except Exception:
                    return np.full(len(pts), 1e3)
                out = (vals - y) / np.maximum(1.0, np.abs(y))
                return np.where(np.isfinite(out), out, 1e3)

            sol = least_squares(resid, x0, xtol=1e-15, ftol=1e-15, gtol=1e-15)
            dev = float(np.max(np.abs(resid(sol.x))))
            if best is None or dev < best[0]:
                best = (dev, branch, sol.x)
    dev, branch, x = best
    consts = dict(zip(free, map(float, x)))
    consts["branch"] = branch
    return ConstantFit(template.id, consts, dev, dev < tol)


def image_point(g: GroupElement, t: float, r: float) -> tuple:
    """The point at which the original solution is evaluated, with the
    dimensionless distance of (t, r) from the transformation's own singular set."""
    if g.kind == GroupKind.TRANSLATION:
        return t + g.lam, r, math.inf
    if g.kind == GroupKind.SCALING:
        return g.lam * t, g.lam * r, math.inf
    s = t * t - r * r
    size = t * t + r * r
    if g.kind == GroupKind.INVOLUTION:
        if s <= 0:
            raise DomainError("t^2 - r^2 must be positive")
        return -t / s, r / s, s / size
    tl = t + g.lam * s
    den = tl * tl - r * r
    if s == 0 or den == 0:
        raise DomainError("inversion denominator vanishes")
    om = s / den
    if om <= 0:
        raise DomainError("Omega must be positive")
    clear = min(abs(s) / size, abs(den) / (tl * tl + r * r))
    return om * tl, om * r, clear


def sample_group_points(g: GroupElement, family, count: int, rng: np.random.Generator,
                        t_range=(-3.0, 3.0), r_range=(0.2, 3.0), margin: float = 0.05,
                        r_min: float = 0.2, max_tries: int = 200000) -> list:
    """Points where the transformed family is defined and both (t, r) and its
    image stay clear of singular sets."""
    from .catalog import evaluate, singular_set
    sing = singular_set(family)
    out = []
    tries = 0
    while len(out) < count and tries < max_tries:
        tries += 1
        t, r = rng.uniform(*t_range), rng.uniform(*r_range)
        try:
            th, rh, clear = image_point(g, t, r)
        except DomainError:
            continue
        if clear < margin or rh < r_min or float(sing.distance(th, rh)) < margin * max(1.0, abs(th) + rh):
            continue
        try:
            evaluate(family, th, rh)
        except DomainError:
            continue
        out.append((t, r))
    if len(out) < count:
        raise DomainError(f"{family.label()}: only {len(out)} admissible points for {g.kind.value}")
    return out


# ---------------------------------------------------------------------------
# closure suite over the catalog
# ---------------------------------------------------------------------------

@dataclass
class GroupActionReport:
    family: str
    params: dict
    transformation: str
    lam: float
    max_residual: float
    points: int
    passed: bool
    note: str = ""

    def to_json(self) -> dict:
        return {"solution": self.family, "params": self.params, "transformation": self.transformation,
                "lambda": self.lam, "max_residual": self.max_residual, "points": self.points,
                "pass": self.passed, "note": self.note}


def standard_elements(params: ModelParams) -> list:
    els = [GroupElement(GroupKind.TRANSLATION, 0.3), GroupElement(GroupKind.SCALING, 2.0),
           GroupElement(GroupKind.SCALING, 0.5)]
    if params.is_power(PowerKind.CONFORMAL):
        els += [GroupElement(GroupKind.INVERSION, 0.1), GroupElement(GroupKind.INVERSION, -0.2),
                GroupElement(GroupKind.INVOLUTION)]
    return els


def involution_roundtrip(u: Callable, params: ModelParams, points) -> float:
    """Max relative deviation of the twice-applied involution from u over the
    points where u itself is defined."""
    g = GroupElement(GroupKind.INVOLUTION)
    twice = transformed(g, transformed(g, u, params), params)
    worst = 0.0
    for t, r in points:
        try:
            a = u(t, r)
        except DomainError:
            continue
        b = twice(t, r)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return float(worst)


def group_action_suite(families, rng: np.random.Generator, count: int = 20,
                       tol: float = 1e-9) -> list:
    """Residuals of every standard transformation applied to each family, plus
    the involution round trip for conformal-power families.

    A (family, transformation) pair with no admissible sample points is
    reported with zero points and counts as passing; the note says why.
    """
    from .catalog import field_function

    out = []
    for fam in families:
        P = fam.params
        pj = {"n": P.n, "q": P.q, "k": P.k}
        u = field_function(fam)
        for g in standard_elements(P):
            try:
                pts = sample_group_points(g, fam, count, rng)
            except DomainError as exc:
                out.append(GroupActionReport(fam.label(), pj, g.kind.value, g.lam, 0.0, 0, True,
                                             f"no admissible points: {exc}"))
                continue
            worst = max(transformed_residual(g, u, P, t, r) for t, r in pts)
            out.append(GroupActionReport(fam.label(), pj, g.kind.value, g.lam, worst, len(pts), worst < tol))
            if g.kind == GroupKind.INVOLUTION:
                dev = involution_roundtrip(u, P, pts)
                out.append(GroupActionReport(fam.label(), pj, "involution-twice", 0.0, dev, len(pts),
                                             dev < tol))
    return out


def algebra_suite(n: int = 3) -> list:
    """Exact bracket relations and the Jacobi identity at the conformal,
    critical and one generic power in dimension n."""
    from itertools import combinations_with_replacement
    from .core import CheckReport

    cases = [("conformal", ModelParams.at_power(PowerKind.CONFORMAL, n))]
    if n > 2:
        cases.append(("critical", ModelParams.at_power(PowerKind.CRITICAL, n)))
    special = [P.q for _, P in cases]
    cases.append(("generic", ModelParams(n, next(q for q in (2.5, 3.5, 4.5)
                                                 if all(abs(q - s) > 1e-9 for s in special)))))
    out = []
    for label, P in cases:
        gens = generators(P)
        pj = {"n": P.n, "q": P.q, "power": label}
        Xt, Xs = gens["X_trans"], gens["X_scal"]
        rel = [("[X_trans,X_scal]=X_trans", lie_bracket(Xt, Xs) == Xt)]
        if "X_inver" in gens:
            Xi = gens["X_inver"]
            rel += [("[X_trans,X_inver]=2X_scal", lie_bracket(Xt, Xi) == Xs.scale(2)),
                    ("[X_scal,X_inver]=X_inver", lie_bracket(Xs, Xi) == Xi)]
        for name, ok in rel:
            out.append(CheckReport(f"bracket/{label}/{name}", 0.0 if ok else 1.0, 0.0, bool(ok), pj))
        bad = [list(tr) for tr in combinations_with_replacement(list(gens), 3)
               if not jacobi(*(gens[a] for a in tr)).is_zero()]
        out.append(CheckReport(f"jacobi/{label}", float(len(bad)), 0.0, not bad,
                               {**pj, "failing_triples": bad, "table": bracket_table(P)["brackets"]}))
    return out
