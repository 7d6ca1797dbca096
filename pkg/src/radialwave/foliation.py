"""Group-resolving first-order systems for the scaling, translation,
conformal and translation+inversion subgroups.

Each chart maps a solution jet (t, r, u, u_t, u_r) to invariants (x, v) and
differential invariants (G, H).  Closed-form (G, H) solutions are evaluated
with jets in (x, v) so that the first partials entering the resolving
systems are exact up to rounding.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .core import DomainError, ModelParams, PowerKind, UnsupportedParams
from .jets import Jet2, as_jet, power, sqrt

GRID_BOX = ((0.25, 4.0), (0.25, 4.0))
GRID_SIZE = 20
RESIDUAL_TOL = 1e-9


class Subgroup(str, enum.Enum):
    SCALING = "scaling"
    TRANSLATION = "translation"
    CONFORMAL = "conformal"
    TRANS_INVERSION = "trans-inversion"


def _vpow(v, e: float):
    """v**e on the positive half-line (jets or floats)."""
    val = v.v if isinstance(v, Jet2) else v
    if np.any(np.asarray(val) <= 0):
        raise DomainError("v must be positive")
    return power(v, e)


@dataclass(frozen=True)
class ChartPoint:
    x: float
    v: float
    G: float
    H: float


@dataclass(frozen=True)
class FoliationChart:
    """Invariants, differential invariants and resolving system of a subgroup."""

    subgroup: Subgroup
    params: ModelParams

    def __post_init__(self):
        object.__setattr__(self, "subgroup", Subgroup(self.subgroup))
        if self.subgroup in (Subgroup.CONFORMAL, Subgroup.TRANS_INVERSION) and not self.params.is_power(
                PowerKind.CONFORMAL):
            raise UnsupportedParams(f"the {self.subgroup.value} chart requires q = (n+3)/(n-1)")

    @property
    def p(self) -> float:
        return self.params.p

    # -- maps -------------------------------------------------------------
    def invariants(self, t, r, u) -> tuple:
        _check_r(r)
        p = self.p
        if self.subgroup == Subgroup.SCALING:
            return t / r, u * r ** (-p)
        if self.subgroup == Subgroup.TRANSLATION:
            return r, u
        if self.subgroup == Subgroup.CONFORMAL:
            return (t * t - r * r) / r, u * r ** (-p)
        return (1.0 + t * t - r * r) / r, u * r ** (-p)

    def differential_invariants(self, t, r, u, ut, ur) -> tuple:
        _check_r(r)
        p, n = self.p, self.params.n
        if self.subgroup == Subgroup.SCALING:
            f = r ** (1.0 - p)
            return f * ut, f * ur
        if self.subgroup == Subgroup.TRANSLATION:
            return ut, ur
        f = r ** (-p)
        if self.subgroup == Subgroup.CONFORMAL:
            a = t * t + r * r
            return (f * (a * ut + 2 * r * t * ur + (n - 1) * t * u),
                    f * (a * ur + 2 * r * t * ut + (n - 1) * a / (2 * r) * u))
        a = 1.0 + t * t + r * r
        return (f * (a * ut + 2 * r * t * ur - 2 * p * t * u),
                f * (a * ur + 2 * r * t * ut - p * a / r * u))

    def derivatives(self, t, r, u, G, H) -> tuple:
        """Inverse maps: (u_t, u_r) from (G, H) at (t, r, u)."""
        _check_r(r)
        p = self.p
        if self.subgroup == Subgroup.SCALING:
            f = r ** (p - 1.0)
            return f * G, f * H
        if self.subgroup == Subgroup.TRANSLATION:
            return G, H
        f = r ** p
        if self.subgroup == Subgroup.CONFORMAL:
            a = t * t + r * r
            den = (t * t - r * r) ** 2
            if np.any(np.asarray(den) == 0):
                raise DomainError("conformal chart is singular on the light cone t^2 = r^2")
            return (f * (a * G - 2 * r * t * H) / den,
                    f * (a * H - 2 * r * t * G) / den + (1 - self.params.n) / (2 * r) * u)
        a = 1.0 + t * t + r * r
        den = 1.0 + (t * t - r * r) ** 2 + 2 * (t * t + r * r)
        return (f * (a * G - 2 * r * t * H) / den,
                f * (a * H - 2 * r * t * G) / den + p / r * u)

    # -- resolving system ----------------------------------------------------
    def system_terms(self, x: float, v: float, G: Jet2, H: Jet2) -> tuple:
        """Additive terms of both resolving equations; partials are in
        slot a (d/dx) and slot b (d/dv) of the jets."""
        P = self.params
        p, n, k = self.p, P.n, P.k
        G, H = as_jet(G), as_jet(H)
        src = k * float(_vpow(v, P.q))
        if self.subgroup == Subgroup.SCALING:
            e1 = [(p - 1) * G.v, -x * G.a, (H.v - p * v) * G.b, -H.a, -G.v * H.b]
            e2 = [G.a, G.v * G.b, -(p + n - 2) * H.v, x * H.a, -(H.v - p * v) * H.b, -src]
        elif self.subgroup == Subgroup.TRANSLATION:
            e1 = [G.a, H.v * G.b, -G.v * H.b]
            e2 = [G.v * G.b, -H.v * H.b, -H.a, -(n - 1) * H.v / x, -src]
        else:
            w = x * x if self.subgroup == Subgroup.CONFORMAL else 4.0 + x * x
            e1 = [w * G.a, G.v * H.b, -H.v * G.b]
            e2 = [G.v * G.b / w, -H.v * H.b / w, H.a, p * (p + 1) * v, -src]
        return e1, e2

    def system_residual(self, x: float, v: float, G: Jet2, H: Jet2) -> float:
        """Max relative residual of the two resolving equations."""
        worst = 0.0
        for terms in self.system_terms(x, v, G, H):
            total = math.fsum(float(t) for t in terms)
            scale = max(1.0, max(abs(float(t)) for t in terms))
            worst = max(worst, abs(total) / scale)
        return worst

    def singular(self, x: float, margin: float = 0.05) -> bool:
        """Chart-singular loci of the invariant coordinate x."""
        if self.subgroup == Subgroup.SCALING:
            return abs(abs(x) - 1.0) < margin
        if self.subgroup == Subgroup.TRANSLATION:
            return x < margin
        if self.subgroup == Subgroup.CONFORMAL:
            return abs(x) < margin
        return False


def _check_r(r):
    val = r.v if isinstance(r, Jet2) else r
    if np.any(np.asarray(val) <= 0):
        raise DomainError("r must be positive")


def to_chart(chart: FoliationChart, jet) -> ChartPoint:
    """Invariants and differential invariants at a solution jet."""
    x, v = chart.invariants(jet.t, jet.r, jet.u)
    G, H = chart.differential_invariants(jet.t, jet.r, jet.u, jet.u_t, jet.u_r)
    return ChartPoint(float(x), float(v), float(G), float(H))


# ---------------------------------------------------------------------------
# closed-form (G, H) solutions
# ---------------------------------------------------------------------------

def _is(P: ModelParams, value: float) -> bool:
    return abs(P.q - value) < 1e-12


def _cond_s1(P):
    if _is(P, -1.0) or P.k / (P.q + 1) <= 0:
        raise UnsupportedParams("S1 needs k/(q+1) > 0")


def _cond_s2(P):
    if P.n < 3 or not _is(P, (4 - P.n) / (P.n - 2)) or (2 - P.n) * P.k <= 0:
        raise UnsupportedParams("S2 needs n > 2, q = (4-n)/(n-2) and k = -1")


def _cond_s3(P):
    if P.n < 4 or not _is(P, (P.n - 1) / (P.n - 2)):
        raise UnsupportedParams("S3 needs n > 3 and q = (n-1)/(n-2)")


def _cond_s4(P):
    if not _is(P, -3.0) or P.k != -1:
        raise UnsupportedParams("S4 needs q = -3 and k = -1")


def _cond_conformal(P):
    if not P.is_power(PowerKind.CONFORMAL):
        raise UnsupportedParams("requires the conformal power q = (n+3)/(n-1)")


def _cond_c1(P):
    _cond_conformal(P)
    if P.k != 1:
        raise UnsupportedParams("C1 needs k = 1")


def _trans_d(P):
    return P.n * (1 - P.q) + 1 + P.q


def _cond_ptrans(P):
    if abs(_trans_d(P)) < 1e-12:
        raise UnsupportedParams("P-trans needs n(1-q)+1+q != 0")


def _gh_s1(P, b, x, v, printed):
    g = b * math.sqrt(2 * P.k / (P.q + 1))
    return g * _vpow(v, (P.q + 1) / 2) + 0.0 * x, as_jet(0.0 * x)


def _gh_s2(P, b, x, v, printed):
    n = P.n
    H = (2 - n) * v + b * math.sqrt((2 - n) * P.k) * _vpow(v, 1.0 / (n - 2))
    return as_jet(0.0 * x), H


def _gh_s3(P, b, x, v, printed):
    n = P.n
    G = b * P.k / (n - 3) * _vpow(v, (n - 1) / (n - 2)) + 0.0 * x
    return G, (2 - n) * v + b * G


def _gh_s4(P, b, x, v, printed):
    return b * math.sqrt(-P.k) * _vpow(v, -1.0) + v / x, as_jet(0.0 * x)


def _gh_c1(P, b, x, v, printed):
    n = P.n
    G = b * math.sqrt(P.k * (n - 1) / (n + 1)) * x * _vpow(v, (n + 1) / (n - 1))
    return G, (n - 1) / 2 * x * v


def _gh_ptrans(P, b, x, v, printed):
    q, d = P.q, _trans_d(P)
    k = 1 if printed else P.k
    rad = x * x * (q - 1) ** 2 + 2 * k * d * _vpow(v, 1 - q)
    return b / d * _vpow(v, q) * sqrt(rad), k * (q - 1) / d * x * _vpow(v, q)


def _gh_pscal(P, b, x, v, printed):
    q, p, k = P.q, P.p, P.k
    K = k * (q - 1) ** 2 / 4
    w = _vpow(v, q - 1)
    rad = (K * x * w) ** 2 - K * (x * x + 1) * w + 1
    G = p * x * v / (x * x - 1) * (1 - K * w + b * sqrt(rad))
    sgn = 1.0 if printed else -1.0
    return G, -k / 2 * (q - 1) * _vpow(v, q) + sgn * G / x


def _gh_pinver(P, b, x, v, printed):
    q, p, k = P.q, P.p, P.k
    G = b * x * sqrt(_vpow(v, 2 * q) / p ** 2 - k * _vpow(v, q + 1))
    return G, -p * x * v + k / p * x * _vpow(v, q)


def _gh_pti1(P, b, x, v, printed):
    q, p, k = P.q, P.p, P.k
    if printed:
        G = b * x * sqrt((4 + k / p ** 2 * x * x * _vpow(v, q - 1))
                         * (k * x * _vpow(v, q + 1) - p ** 2 * x * x * v * v))
        return G, p * x * v - k / p * x * _vpow(v, q)
    rad = (4 * k * _vpow(v, q + 1) - 4 * p ** 2 * v * v
           + x * x * (_vpow(v, 2 * q) / p ** 2 - k * _vpow(v, q + 1)))
    return b * sqrt(rad), -p * x * v + k / p * x * _vpow(v, q)


def _gh_pti2(P, b, x, v, printed):
    q, p, k = P.q, P.p, P.k
    rad = 2 * k / (q + 1) * (4 + x * x) * _vpow(v, q + 1) - 4 * p ** 2 * v * v
    if printed:
        return b * x * sqrt(rad), p * x * v
    return b * sqrt(rad), -p * x * v


@dataclass(frozen=True)
class GHEntry:
    chart: Subgroup
    formula: Callable
    condition: Callable
    has_printed_variant: bool
    description: str


GH_REGISTRY = {
    "S1": GHEntry(Subgroup.SCALING, _gh_s1, _cond_s1, False,
                  "G = b sqrt(2k/(q+1)) v^((q+1)/2), H = 0"),
    "S2": GHEntry(Subgroup.SCALING, _gh_s2, _cond_s2, False,
                  "G = 0, H = (2-n) v + b sqrt((2-n)k) v^(1/(n-2)), q = (4-n)/(n-2)"),
    "S3": GHEntry(Subgroup.SCALING, _gh_s3, _cond_s3, False,
                  "G = b k/(n-3) v^((n-1)/(n-2)), H = (2-n) v + b G, q = (n-1)/(n-2)"),
    "S4": GHEntry(Subgroup.SCALING, _gh_s4, _cond_s4, False,
                  "G = b sqrt(-k)/v + v/x, H = 0, q = -3"),
    "C1": GHEntry(Subgroup.CONFORMAL, _gh_c1, _cond_c1, False,
                  "G = b sqrt(k(n-1)/(n+1)) x v^((n+1)/(n-1)), H = (n-1) x v / 2"),
    "P-trans": GHEntry(Subgroup.TRANSLATION, _gh_ptrans, _cond_ptrans, True,
                       "G = b v^q sqrt(x^2 (q-1)^2 + 2kD v^(1-q)) / D, H = k(q-1) x v^q / D, "
                       "D = n(1-q)+1+q"),
    "P-scal": GHEntry(Subgroup.SCALING, _gh_pscal, _cond_conformal, True,
                      "G = p x v (1 - K w + b sqrt((K x w)^2 - K(x^2+1) w + 1))/(x^2-1), "
                      "H = -k(q-1) v^q / 2 - G/x, K = k(q-1)^2/4, w = v^(q-1)"),
    "P-inver": GHEntry(Subgroup.CONFORMAL, _gh_pinver, _cond_conformal, False,
                       "G = b x sqrt(v^(2q)/p^2 - k v^(q+1)), H = -p x v + k x v^q / p"),
    "P-ti1": GHEntry(Subgroup.TRANS_INVERSION, _gh_pti1, _cond_conformal, True,
                     "G = b sqrt(4k v^(q+1) - 4p^2 v^2 + x^2 (v^(2q)/p^2 - k v^(q+1))), "
                     "H = -p x v + k x v^q / p"),
    "P-ti2": GHEntry(Subgroup.TRANS_INVERSION, _gh_pti2, _cond_conformal, True,
                     "G = b sqrt(2k(4+x^2) v^(q+1)/(q+1) - 4p^2 v^2), H = -p x v"),
}

GH_IDS = tuple(GH_REGISTRY)


@dataclass(frozen=True)
class GHSolution:
    """A closed-form solution (G, H)(x, v) of one resolving system."""

    id: str
    params: ModelParams
    branch: int = 1
    as_printed: bool = False

    def __post_init__(self):
        if self.id not in GH_REGISTRY:
            raise UnsupportedParams(f"unknown (G,H) solution {self.id!r}")
        if self.branch not in (1, -1):
            raise UnsupportedParams("branch must be +1 or -1")
        entry = GH_REGISTRY[self.id]
        if self.as_printed and not entry.has_printed_variant:
            raise UnsupportedParams(f"{self.id} has no separate as-printed form")
        entry.condition(self.params)

    @property
    def entry(self) -> GHEntry:
        return GH_REGISTRY[self.id]

    @property
    def chart(self) -> FoliationChart:
        return FoliationChart(self.entry.chart, self.params)

    def jets(self, x: float, v: float) -> tuple:
        """(G, H) as jets: slot a is d/dx, slot b is d/dv."""
        G, H = self.entry.formula(self.params, self.branch, Jet2.var_a(float(x)), Jet2.var_b(float(v)),
                                  self.as_printed)
        G, H = as_jet(G), as_jet(H)
        for j in (G, H):
            if not all(np.isfinite(f) for f in j.fields()):
                raise DomainError(f"{self.id} is not real at (x={x}, v={v})")
        return G, H

    def __call__(self, x, v) -> tuple:
        """(G, H) values; accepts floats or numpy arrays."""
        G, H = self.entry.formula(self.params, self.branch, x, v, self.as_printed)
        G = G.v if isinstance(G, Jet2) else G
        H = H.v if isinstance(H, Jet2) else H
        return G + 0.0 * np.asarray(x), H + 0.0 * np.asarray(x)

    def label(self) -> str:
        sign = "+" if self.branch > 0 else "-"
        return f"{self.id}[{sign}]" + ("(as printed)" if self.as_printed else "")


# ---------------------------------------------------------------------------
# residual reports
# ---------------------------------------------------------------------------

@dataclass
class VerificationReport:
    solution: str
    chart: str
    params: dict
    grid: dict
    max_residual: float
    passed: bool
    points: int = 0
    skipped: int = 0
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"solution": self.solution, "chart": self.chart, "params": self.params,
                "grid": self.grid, "max_residual": self.max_residual, "pass": self.passed,
                "points": self.points, "skipped": self.skipped, **self.detail}


def _params_json(P: ModelParams) -> dict:
    return {"n": P.n, "q": P.q, "k": P.k}


def grid_points(box=GRID_BOX, size: int = GRID_SIZE) -> list:
    xs = np.linspace(box[0][0], box[0][1], size)
    vs = np.linspace(box[1][0], box[1][1], size)
    return [(float(x), float(v)) for x in xs for v in vs]


def resolving_residual(chart: FoliationChart, gh: GHSolution, points, tol: float = RESIDUAL_TOL,
                       grid: Optional[dict] = None) -> VerificationReport:
    """Evaluate both resolving equations of ``chart`` on (G, H) = gh at the points."""
    if chart.subgroup != gh.entry.chart:
        raise UnsupportedParams(f"{gh.id} belongs to the {gh.entry.chart.value} chart")
    worst, count, skipped = 0.0, 0, 0
    for x, v in points:
        try:
            G, H = gh.jets(x, v)
            res = chart.system_residual(x, v, G, H)
        except DomainError:
            skipped += 1
            continue
        worst = max(worst, res)
        count += 1
    return VerificationReport(gh.label(), chart.subgroup.value, _params_json(chart.params),
                              grid or {"points": len(list(points))}, worst,
                              count > 0 and worst < tol, count, skipped)


@dataclass(frozen=True)
class GHInstance:
    solution: GHSolution
    box: tuple


def standard_gh_instances() -> list:
    """Representative instances with 20 x 20 boxes on which each is real and
    clear of chart-singular loci."""
    def mk(id_, n, q, k, box=GRID_BOX, branches=(1, -1)):
        P = ModelParams(n, q, k)
        return [GHInstance(GHSolution(id_, P, b), box) for b in branches]

    qc = lambda n: (n + 3) / (n - 1)
    out = []
    out += mk("S1", 3, 3.0, 1) + mk("S1", 4, 0.5, 1)
    out += mk("S2", 4, 0.0, -1) + mk("S2", 5, -1 / 3, -1)
    out += mk("S3", 4, 1.5, 1) + mk("S3", 5, 4 / 3, -1)
    out += mk("S4", 3, -3.0, -1) + mk("S4", 5, -3.0, -1)
    out += mk("C1", 3, qc(3), 1) + mk("C1", 5, qc(5), 1)
    out += mk("P-trans", 3, 0.5, 1) + mk("P-trans", 4, 3.0, -1, ((0.25, 4.0), (0.25, 0.9)))
    out += mk("P-scal", 3, qc(3), -1, ((1.25, 4.0), (0.25, 4.0))) + mk("P-scal", 5, qc(5), -1,
                                                                        ((1.25, 4.0), (0.25, 4.0)))
    out += mk("P-inver", 3, qc(3), -1) + mk("P-inver", 5, qc(5), -1)
    out += mk("P-ti1", 3, qc(3), 1, ((0.25, 4.0), (1.25, 4.0))) + mk("P-ti1", 3, qc(3), -1,
                                                                       ((2.25, 4.0), (1.0, 4.0)))
    out += mk("P-ti2", 3, qc(3), 1, ((0.25, 4.0), (1.5, 4.0))) + mk("P-ti2", 5, qc(5), 1,
                                                                      ((0.25, 4.0), (6.5, 10.0)))
    return out


def verify_instance(inst: GHInstance, size: int = GRID_SIZE, tol: float = RESIDUAL_TOL) -> VerificationReport:
    pts = grid_points(inst.box, size)
    grid = {"x": list(inst.box[0]), "v": list(inst.box[1]), "size": [size, size]}
    return resolving_residual(inst.solution.chart, inst.solution, pts, tol, grid)


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PotentialEntry:
    chart: Subgroup
    target: str
    potential: Callable       # (P, b, x, v) -> potential
    gradient: Callable        # (P, x, v, G, H) -> (pot_x, pot_v) defining relations
    induced: Callable         # (P, b, x, v, pot_x, pot_v) -> (G, H)
    condition: Callable
    description: str


def _phi_trans(P, b, x, v):
    q = P.q
    return b * math.sqrt(2 * (q + 1) / P.k) / (q - 1) * _vpow(v, (1 - q) / 2) + 0.0 * x


def _phi_trans_grad(P, x, v, G, H):
    return H / G, -1.0 / G


def _phi_trans_induced(P, b, x, v, px, pv):
    return -1.0 / pv, -px / pv


def _psi_trans(P, b, x, v):
    n = P.n
    return P.k * power(x, n) * _vpow(v, P.q + 1) / (n * _trans_d(P))


def _psi_trans_grad(P, x, v, G, H):
    n = P.n
    w = power(x, n - 1)
    return w * (G * G - H * H) / 2, w * H + P.k / n * power(x, n) * _vpow(v, P.q)


def _psi_trans_induced(P, b, x, v, px, pv):
    n = P.n
    H = power(x, 1 - n) * pv - P.k / n * x * _vpow(v, P.q)
    return b * sqrt(2 * power(x, 1 - n) * px + H * H), H


def _inver_weight(chart):
    return (lambda x: x * x) if chart == Subgroup.CONFORMAL else (lambda x: 4.0 + x * x)


def _psi_conf_grad_for(chart):
    wf = _inver_weight(chart)

    def grad(P, x, v, G, H):
        p = P.p
        return (G * G - H * H) / wf(x), -2 * H - 2 * x * (p * (p + 1) * v - P.k * _vpow(v, P.q))
    return grad


def _psi_conf_induced_for(chart):
    wf = _inver_weight(chart)

    def induced(P, b, x, v, px, pv):
        p = P.p
        H = -pv / 2 - x * (p * (p + 1) * v - P.k * _vpow(v, P.q))
        return b * sqrt(wf(x) * px + H * H), H
    return induced


def _psi_one(P, b, x, v):
    return P.k * x * _vpow(v, P.q + 1) - P.p ** 2 * x * v * v


def _psi_two(P, b, x, v):
    return 2 * P.k / (P.q + 1) * x * _vpow(v, P.q + 1) - P.p ** 2 * x * v * v


def _phi_inver(P, b, x, v):
    n = P.n
    g = b * math.sqrt(P.k * (n - 1) / (n + 1))
    return -(n - 1) / (2 * g * x) * _vpow(v, -2.0 / (n - 1))


def _phi_inver_grad(P, x, v, G, H):
    return H / (x * x * G), 1.0 / G


def _phi_inver_induced(P, b, x, v, px, pv):
    G = 1.0 / pv
    return G, x * x * G * px


def _psi_scal(P, b, x, v):
    q = P.q
    return -P.k / 2 * (q - 1) / (q + 1) * x * _vpow(v, q + 1)


def _psi_scal_grad(P, x, v, G, H):
    p, q = P.p, P.q
    return (H * H - G * G) / 2 - p * v * H + P.k / (q + 1) * _vpow(v, q + 1), G + x * H


def _psi_scal_induced(P, b, x, v, px, pv):
    # 0.5 (1 - x^2) H^2 + (x A - p v) H - A^2/2 + B - C = 0 with A = pot_v, C = pot_x
    p, q = P.p, P.q
    A, C = pv, px
    B = P.k / (q + 1) * _vpow(v, q + 1)
    a2 = 0.5 * (1 - x * x)
    a1 = x * A - p * v
    a0 = -0.5 * A * A + B - C
    disc = a1 * a1 - 4 * a2 * a0
    H = (-a1 - b * sqrt(disc)) / (2 * a2)
    return A - x * H, H


POTENTIALS = {
    "Phi-trans": PotentialEntry(Subgroup.TRANSLATION, "S1", _phi_trans, _phi_trans_grad, _phi_trans_induced,
                                _cond_s1, "Phi = b sqrt(2(q+1)/k) v^((1-q)/2)/(q-1); Phi_x = H/G, Phi_v = -1/G"),
    "Psi-trans": PotentialEntry(Subgroup.TRANSLATION, "P-trans", _psi_trans, _psi_trans_grad,
                                _psi_trans_induced, _cond_ptrans,
                                "Psi = k x^n v^(q+1)/(nD); Psi_x = x^(n-1)(G^2-H^2)/2, "
                                "Psi_v = x^(n-1) H + k x^n v^q / n"),
    "Psi-inver": PotentialEntry(Subgroup.CONFORMAL, "P-inver", _psi_one, _psi_conf_grad_for(Subgroup.CONFORMAL),
                                _psi_conf_induced_for(Subgroup.CONFORMAL), _cond_conformal,
                                "Psi = k x v^(q+1) - p^2 x v^2; Psi_x = (G^2-H^2)/x^2, "
                                "Psi_v = -2H - 2x(p(p+1) v - k v^q)"),
    "Psi-inver-C1": PotentialEntry(Subgroup.CONFORMAL, "C1", _psi_two, _psi_conf_grad_for(Subgroup.CONFORMAL),
                                   _psi_conf_induced_for(Subgroup.CONFORMAL), _cond_c1,
                                   "Psi = 2k x v^(q+1)/(q+1) - p^2 x v^2"),
    "Phi-inver-C1": PotentialEntry(Subgroup.CONFORMAL, "C1", _phi_inver, _phi_inver_grad, _phi_inver_induced,
                                   _cond_c1, "Phi = -(n-1) v^(-2/(n-1)) / (2 g x); Phi_x = H/(x^2 G), Phi_v = 1/G"),
    "Psi-scal": PotentialEntry(Subgroup.SCALING, "P-scal", _psi_scal, _psi_scal_grad, _psi_scal_induced,
                               _cond_conformal,
                               "Psi = -k (q-1) x v^(q+1) / (2(q+1)); Psi_v = G + x H, "
                               "Psi_x = (H^2-G^2)/2 - p v H + k v^(q+1)/(q+1)"),
    "Psi-ti1": PotentialEntry(Subgroup.TRANS_INVERSION, "P-ti1", _psi_one,
                              _psi_conf_grad_for(Subgroup.TRANS_INVERSION),
                              _psi_conf_induced_for(Subgroup.TRANS_INVERSION), _cond_conformal,
                              "Psi = k x v^(q+1) - p^2 x v^2; Psi_x = (G^2-H^2)/(x^2+4), "
                              "Psi_v = -2H - 2x(p(p+1) v - k v^q)"),
    "Psi-ti2": PotentialEntry(Subgroup.TRANS_INVERSION, "P-ti2", _psi_two,
                              _psi_conf_grad_for(Subgroup.TRANS_INVERSION),
                              _psi_conf_induced_for(Subgroup.TRANS_INVERSION), _cond_conformal,
                              "Psi = 2k x v^(q+1)/(q+1) - p^2 x v^2"),
}


@dataclass(frozen=True)
class PotentialSolution:
    id: str
    params: ModelParams
    branch: int = 1

    def __post_init__(self):
        if self.id not in POTENTIALS:
            raise UnsupportedParams(f"unknown potential {self.id!r}")
        self.entry.condition(self.params)

    @property
    def entry(self) -> PotentialEntry:
        return POTENTIALS[self.id]

    @property
    def target(self) -> GHSolution:
        return GHSolution(self.entry.target, self.params, self.branch)


def potential_check(chart: FoliationChart, pot: PotentialSolution, points,
                    tol_curl: float = 1e-9, tol_match: float = 1e-10,
                    tol_res: float = RESIDUAL_TOL, grid: Optional[dict] = None) -> VerificationReport:
    """Gradient relations, curl-freeness and resolving residual of a potential."""
    e = pot.entry
    if chart.subgroup != e.chart:
        raise UnsupportedParams(f"{pot.id} belongs to the {e.chart.value} chart")
    if chart.params != pot.params:
        raise UnsupportedParams("chart and potential parameters differ")
    P, b = pot.params, pot.branch
    target = pot.target
    curl = match = resid = 0.0
    count = skipped = 0
    for x, v in points:
        try:
            X, V = Jet2.var_a(float(x)), Jet2.var_b(float(v))
            phi = as_jet(e.potential(P, b, X, V))
            G, H = e.induced(P, b, X.v, V.v, phi.a, phi.b)
            Gd, Hd = target.jets(x, v)
            gx, gv = e.gradient(P, X, V, Gd, Hd)
            gx, gv = as_jet(gx), as_jet(gv)
            if not all(np.isfinite(f) for f in (*gx.fields(), *gv.fields(), G, H)):
                raise DomainError("non-finite potential data")
        except DomainError:
            skipped += 1
            continue
        sc = max(1.0, abs(gx.b), abs(gv.a))
        curl = max(curl, abs(gx.b - gv.a) / sc)
        match = max(match, abs(G - Gd.v) / max(1.0, abs(Gd.v)), abs(H - Hd.v) / max(1.0, abs(Hd.v)),
                    abs(phi.a - gx.v) / max(1.0, abs(gx.v)), abs(phi.b - gv.v) / max(1.0, abs(gv.v)))
        resid = max(resid, chart.system_residual(x, v, Gd, Hd))
        count += 1
    ok = count > 0 and curl < tol_curl and match < tol_match and resid < tol_res
    return VerificationReport(pot.id, chart.subgroup.value, _params_json(P), grid or {"points": count + skipped},
                              max(curl, match, resid), ok, count, skipped,
                              {"target": target.label(), "curl": curl, "match": match, "residual": resid})


@dataclass(frozen=True)
class PotentialInstance:
    potential: PotentialSolution
    box: tuple


def standard_potential_instances() -> list:
    qc = lambda n: (n + 3) / (n - 1)
    out = []
    for b in (1, -1):
        out.append(PotentialInstance(PotentialSolution("Phi-trans", ModelParams(3, 3.0, 1), b), GRID_BOX))
        out.append(PotentialInstance(PotentialSolution("Psi-trans", ModelParams(3, 0.5, 1), b), GRID_BOX))
        out.append(PotentialInstance(PotentialSolution("Psi-inver", ModelParams(3, qc(3), -1), b), GRID_BOX))
        out.append(PotentialInstance(PotentialSolution("Psi-inver-C1", ModelParams(3, qc(3), 1), b), GRID_BOX))
        out.append(PotentialInstance(PotentialSolution("Phi-inver-C1", ModelParams(5, qc(5), 1), b), GRID_BOX))
        out.append(PotentialInstance(PotentialSolution("Psi-scal", ModelParams(3, qc(3), -1), b),
                                     ((1.25, 4.0), (0.25, 4.0))))
        out.append(PotentialInstance(PotentialSolution("Psi-ti1", ModelParams(3, qc(3), 1), b),
                                     ((0.25, 4.0), (1.25, 4.0))))
        out.append(PotentialInstance(PotentialSolution("Psi-ti2", ModelParams(3, qc(3), 1), b),
                                     ((0.25, 4.0), (1.5, 4.0))))
    return out


def verify_potential_instance(inst: PotentialInstance, size: int = GRID_SIZE) -> VerificationReport:
    pot = inst.potential
    chart = FoliationChart(pot.entry.chart, pot.params)
    grid = {"x": list(inst.box[0]), "v": list(inst.box[1]), "size": [size, size]}
    return potential_check(chart, pot, grid_points(inst.box, size), grid=grid)


# ---------------------------------------------------------------------------
# separation-of-variables replay
# ---------------------------------------------------------------------------

class AnsatzCase(str, enum.Enum):
    HALF_Q_PLUS_ONE = "HalfQPlusOne"
    Q = "Q"


@dataclass
class AnsatzReport:
    case: str
    n: int
    q: float
    k: int
    equations: list
    candidates: list
    consistent: list
    real: bool

    @property
    def solvable(self) -> bool:
        return bool(self.consistent)

    def to_json(self) -> dict:
        return {"case": self.case, "n": self.n, "q": self.q, "k": self.k, "equations": self.equations,
                "candidates": self.candidates, "consistent": self.consistent, "real": self.real,
                "solvable": self.solvable}


def ansatz_coefficient_check(case, n: int, q: float, k: int) -> AnsatzReport:
    """Replay the power-balance algebra for G = g(x) v^a, H = h(x) v^a in the
    scaling-group resolving system with a = (q+1)/2 or a = q.

    The coefficient equations are split into first-order ODEs and algebraic
    relations; one prolongation of the algebraic relations along the ODEs
    yields candidate (g, h), each of which is substituted back.
    """
    import sympy as sp

    case = AnsatzCase(case)
    P = ModelParams(n, q, k)
    x, v = sp.symbols("x v", positive=True)
    g, h = sp.Function("g")(x), sp.Function("h")(x)
    qq = sp.Rational(P.q_exact.numerator, P.q_exact.denominator)
    p = 2 / (1 - qq)
    a = (qq + 1) / 2 if case == AnsatzCase.HALF_Q_PLUS_ONE else qq
    G, H = g * v ** a, h * v ** a
    e1 = (p - 1) * G - x * sp.diff(G, x) + (H - p * v) * sp.diff(G, v) - sp.diff(H, x) - G * sp.diff(H, v)
    e2 = (sp.diff(G, x) + G * sp.diff(G, v) - (p + n - 2) * H + x * sp.diff(H, x)
          - (H - p * v) * sp.diff(H, v) - k * v ** qq)
    eqs = []
    for e in (e1, e2):
        groups: dict = {}
        for term in sp.Add.make_args(sp.expand(sp.powsimp(sp.expand(e)))):
            c, pw = term.as_independent(v)
            ex = sp.Integer(0) if pw == 1 else pw.as_base_exp()[1]
            groups[ex] = groups.get(ex, 0) + c
        eqs += [c for c in (sp.simplify(c) for c in groups.values()) if c != 0]
    gp, hp, g0, h0 = sp.symbols("gp hp g0 h0")
    rep = {sp.Derivative(g, x): gp, sp.Derivative(h, x): hp}
    E = [sp.expand(e.subs(rep).subs({g: g0, h: h0})) for e in eqs]
    odes = [e for e in E if e.has(gp) or e.has(hp)]
    alg = [e for e in E if not (e.has(gp) or e.has(hp))]
    candidates, consistent = [], []
    for s in sp.solve(odes, [gp, hp], dict=True):
        prolonged = [sp.factor(sp.diff(c.subs({g0: g, h0: h}), x).subs(rep).subs({g: g0, h: h0}).subs(s))
                     for c in alg]
        for c in sp.solve(alg + prolonged, [g0, h0], dict=True):
            cand = {str(key): str(val) for key, val in c.items()}
            candidates.append(cand)
            if g0 not in c or h0 not in c:
                continue
            ok = all(sp.simplify(e.subs({gp: sp.diff(c[g0], x), hp: sp.diff(c[h0], x)}).subs(c)) == 0 for e in E)
            if ok:
                consistent.append(cand)
    real = all(sp.sympify(val).is_real is not False
               for cand in consistent for val in cand.values())
    return AnsatzReport(case.value, n, P.q, k, [str(e) for e in eqs], candidates, consistent,
                        bool(consistent) and real)


def reports_json(reports) -> str:
    return json.dumps([r.to_json() for r in reports], indent=2)
