"""Rebuild u(t, r) from a closed-form (G, H) chart solution by integrating
u_t and u_r along axis-parallel paths from a seed value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import solve_ivp

from .catalog import SolutionFamily, field_jet
from .core import CompatibilityError, ConfigError, DomainError, PathSingular
from .csvio import InitialData
from .foliation import FoliationChart, GHSolution
from .jets import _scalar_power
from .parallel import pmap


@dataclass(frozen=True)
class GridSpec:
    t_range: tuple
    r_range: tuple
    nt: int = 41
    nr: int = 41

    def __post_init__(self):
        if self.nt < 7 or self.nr < 7:
            raise ConfigError("grids need at least 7 nodes per direction")
        if not (self.t_range[1] > self.t_range[0] and self.r_range[1] > self.r_range[0]):
            raise ConfigError("grid ranges must be increasing")
        if self.r_range[0] <= 0:
            raise ConfigError("the radial range must lie in r > 0")

    def axes(self) -> tuple:
        return (np.linspace(*self.t_range, self.nt), np.linspace(*self.r_range, self.nr))

    def to_json(self) -> dict:
        return {"t": list(self.t_range), "r": list(self.r_range), "nt": self.nt, "nr": self.nr}


@dataclass(frozen=True)
class PerturbedGH:
    """A (G, H) pair shifted by constants; used to exercise the integrability check."""

    base: GHSolution
    dG: float = 0.0
    dH: float = 0.0

    @property
    def chart(self) -> FoliationChart:
        return self.base.chart

    @property
    def params(self):
        return self.base.params

    def __call__(self, x, v) -> tuple:
        G, H = self.base(x, v)
        return G + self.dG, H + self.dH

    def label(self) -> str:
        return f"{self.base.label()}+({self.dG:g},{self.dH:g})"


@dataclass(frozen=True)
class ReconstructionProblem:
    """``constant`` is the value of u at the seed point (t0, r0).

    The path integrations use a relative tolerance of 1e-12 by default so
    that the finite-difference residual check is not dominated by
    integration noise.
    """

    gh: object
    seed: tuple
    constant: float
    grid: GridSpec
    rtol: float = 1e-12
    atol: float = 1e-15
    check_fraction: float = 0.1
    seed_rng: int = 0
    compat_tol: float = 1e-8
    residual_tol: float = 1e-6

    def __post_init__(self):
        t0, r0 = self.seed
        if r0 <= 0:
            raise ConfigError("the seed radius must be positive")
        try:
            ut, ur = derivative_field(self.gh, t0, r0, self.constant)
        except DomainError as exc:
            raise DomainError(f"seed lies outside the domain of {self.gh.label()}: {exc}") from None
        if not (math.isfinite(ut) and math.isfinite(ur)):
            raise DomainError("seed lies outside the domain of the (G, H) solution")


def derivative_field(gh, t: float, r: float, u: float) -> tuple:
    """(u_t, u_r) at (t, r, u) from the chart's inverse map."""
    chart = gh.chart
    x, v = chart.invariants(t, r, u)
    G, H = gh(x, v)
    ut, ur = chart.derivatives(t, r, u, float(G), float(H))
    return float(ut), float(ur)


def _line(gh, along: str, fixed: float, s0: float, u0: float, targets, rtol, atol) -> np.ndarray:
    """u at ``targets`` along t (r fixed) or r (t fixed), starting at (s0, u0)."""
    targets = np.asarray(targets, dtype=float)
    out = np.empty_like(targets)

    def rhs(s, y):
        t, r = (s, fixed) if along == "t" else (fixed, s)
        try:
            ut, ur = derivative_field(gh, t, r, y[0])
        except (DomainError, ZeroDivisionError, FloatingPointError) as exc:
            raise PathSingular(f"path meets a singular point at t={t:.6g}, r={r:.6g}: {exc}") from None
        d = ut if along == "t" else ur
        if not math.isfinite(d):
            raise PathSingular(f"non-finite derivative at t={t:.6g}, r={r:.6g}")
        return [d]

    for side in (1, -1):
        mask = (targets - s0) * side > 0
        if not np.any(mask):
            continue
        pts = np.sort(targets[mask])[::side]
        sol = solve_ivp(rhs, (s0, pts[-1]), [u0], method="DOP853", t_eval=pts, rtol=rtol, atol=atol)
        if sol.status != 0 or sol.y.shape[1] != pts.size:
            raise PathSingular(f"integration along {along} stopped: {sol.message}")
        vals = dict(zip(pts.tolist(), sol.y[0].tolist()))
        out[mask] = [vals[s] for s in targets[mask].tolist()]
    out[targets == s0] = u0
    if not np.all(np.isfinite(out)):
        raise PathSingular("non-finite value along the path")
    return out


@dataclass
class ReconstructionResult:
    label: str
    params: object
    grid: GridSpec
    t: np.ndarray
    r: np.ndarray
    u: np.ndarray
    max_residual: float
    path_discrepancy: float
    checked_points: int
    passed: bool
    constant: float
    seed: tuple
    chart: str = ""

    def to_json(self) -> dict:
        P = self.params
        return {"solution": self.label, "chart": self.chart, "params": {"n": P.n, "q": P.q, "k": P.k},
                "grid": self.grid.to_json(), "seed": list(self.seed), "constant": self.constant,
                "max_residual": self.max_residual, "path_discrepancy": self.path_discrepancy,
                "checked_points": self.checked_points, "pass": self.passed}

    def rows(self) -> list:
        return [(t, r, self.u[i, j]) for i, t in enumerate(self.t) for j, r in enumerate(self.r)]

    def initial_data(self, gh, row: int = 0) -> InitialData:
        """Time slice ``row`` in the simulator's initial-data layout, with u_t
        from the chart's inverse map."""
        t0 = float(self.t[row])
        ut = np.array([derivative_field(gh, t0, float(r), float(u))[0]
                       for r, u in zip(self.r, self.u[row])])
        return InitialData(t0, self.params, self.r.copy(), self.u[row].copy(), ut)

    def relative_error(self, family: SolutionFamily) -> float:
        T, R = np.meshgrid(self.t, self.r, indexing="ij")
        exact = np.asarray(field_jet(family, T, R).v)
        return float(np.max(np.abs(self.u - exact) / np.maximum(np.abs(exact), 1e-300)))


_D2 = np.array([2, -27, 270, -490, 270, -27, 2]) / 180.0
_D1 = np.array([-1, 9, -45, 0, 45, -9, 1]) / 60.0


def fd_pde_residual(u: np.ndarray, t: np.ndarray, r: np.ndarray, params) -> float:
    """Max relative PDE residual from sixth-order centred differences on the
    interior nodes of a uniform (t, r) grid."""
    ht, hr = t[1] - t[0], r[1] - r[0]
    nt, nr = u.shape
    c = u[3:-3, 3:-3]
    utt = sum(w * u[i:nt - 6 + i, 3:-3] for i, w in enumerate(_D2)) / (ht * ht)
    urr = sum(w * u[3:-3, i:nr - 6 + i] for i, w in enumerate(_D2)) / (hr * hr)
    ur = sum(w * u[3:-3, i:nr - 6 + i] for i, w in enumerate(_D1)) / hr
    rr = r[3:-3][None, :]
    src = params.k * _scalar_power(c, params.q)
    terms = [utt, -urr, -(params.n - 1) * ur / rr, -src]
    res = np.abs(sum(terms))
    scale = np.maximum(1.0, np.max(np.abs(np.stack(terms)), axis=0))
    return float(np.max(res / scale))


def reconstruct(problem: ReconstructionProblem) -> ReconstructionResult:
    """Integrate along t at r = r0 to every grid row, then along r within each
    row; a subsample is recomputed r-first and compared."""
    gh = problem.gh
    t0, r0 = map(float, problem.seed)
    u0 = float(problem.constant)
    tg, rg = problem.grid.axes()
    column = _line(gh, "t", r0, t0, u0, tg, problem.rtol, problem.atol)

    def row(i):
        return _line(gh, "r", float(tg[i]), r0, float(column[i]), rg, problem.rtol, problem.atol)

    U = np.array(pmap(row, range(len(tg))))

    rng = np.random.default_rng(problem.seed_rng)
    total = U.size
    count = max(1, int(math.ceil(problem.check_fraction * total)))
    picks = rng.choice(total, size=count, replace=False)
    cols = sorted({int(p % len(rg)) for p in picks})
    seed_row = _line(gh, "r", t0, r0, u0, rg[cols], problem.rtol, problem.atol)
    start = dict(zip(cols, seed_row))
    worst = 0.0
    by_col: dict = {}
    for p in picks:
        by_col.setdefault(int(p % len(rg)), []).append(int(p // len(rg)))
    for j, rows_i in by_col.items():
        vals = _line(gh, "t", float(rg[j]), t0, float(start[j]), tg[rows_i], problem.rtol, problem.atol)
        for i, val in zip(rows_i, vals):
            a = U[i, j]
            worst = max(worst, float(abs(a - val) / max(abs(a), abs(val), 1e-300)))
    if worst > problem.compat_tol:
        raise CompatibilityError(
            f"{gh.label()}: t-first and r-first paths differ by {worst:.3e} (> {problem.compat_tol:g})")
    res = fd_pde_residual(U, tg, rg, gh.params)
    out = ReconstructionResult(gh.label(), gh.params, problem.grid, tg, rg, U, res, worst, count,
                               res < problem.residual_tol, u0, (t0, r0), gh.chart.subgroup.value)
    return out


@dataclass
class SweepReport:
    constants: list
    results: list
    duplicates: list
    distinct: bool
    all_pass: bool

    def to_json(self) -> dict:
        return {"constants": self.constants, "members": [r.to_json() for r in self.results],
                "duplicates": self.duplicates, "distinct": self.distinct, "pass": self.all_pass}


def constant_sweep(template: ReconstructionProblem, constants, distinct_tol: float = 1e-6) -> SweepReport:
    """Reconstruct one field per seed value; report duplicate pairs."""
    constants = [float(c) for c in constants]
    results = [reconstruct(replace(template, constant=c)) for c in constants]
    dups = []
    for a in range(len(results)):
        for b in range(a + 1, len(results)):
            ua, ub = results[a].u, results[b].u
            diff = float(np.max(np.abs(ua - ub) / np.maximum(np.maximum(np.abs(ua), np.abs(ub)), 1e-300)))
            if diff <= distinct_tol:
                dups.append([a, b])
    return SweepReport(constants, results, dups, not dups, all(r.passed for r in results))


def seed_from_family(family: SolutionFamily, t0: float, r0: float) -> float:
    return float(field_jet(family, t0, r0).v)


__all__ = ["GridSpec", "PerturbedGH", "ReconstructionProblem", "ReconstructionResult", "SweepReport",
           "constant_sweep", "derivative_field", "fd_pde_residual", "reconstruct", "reconstruction_suite",
           "seed_from_family"]


def reconstruction_suite() -> list:
    """Round trips against catalog solutions and the corrupted-pair negative test."""
    from .core import CheckReport, ModelParams, PowerKind, check

    out = []
    P = ModelParams(3, 3.0, 1)
    Pc = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
    cases = [("S1", P, -1, SolutionFamily("U1", P, c=0.0, branch=1), GridSpec((1.0, 2.0), (0.5, 1.5)), (1.5, 1.0)),
             ("C1", Pc, 1, SolutionFamily("U6", Pc, c=0.5, branch=1), GridSpec((1.0, 2.0), (0.2, 0.8)), (1.5, 0.5))]
    for gid, params, branch, fam, grid, seed in cases:
        gh = GHSolution(gid, params, branch)
        prob = ReconstructionProblem(gh, seed, seed_from_family(fam, *seed), grid)
        res = reconstruct(prob)
        out.append(check(f"reconstruct/{gid}->{fam.id}/relative-error", res.relative_error(fam), 1e-6,
                         grid=grid.to_json(), max_residual=res.max_residual))
        out.append(check(f"reconstruct/{gid}->{fam.id}/mixed-path", res.path_discrepancy, 1e-8,
                         checked_points=res.checked_points))
        out.append(check(f"reconstruct/{gid}->{fam.id}/pde-residual", res.max_residual, prob.residual_tol))
    bad = replace(prob, gh=PerturbedGH(prob.gh, dH=1e-3))
    try:
        reconstruct(bad)
        out.append(CheckReport("reconstruct/corrupted-pair-rejected", 0.0, 0.0, False,
                               {"note": "no CompatibilityError raised"}))
    except CompatibilityError as exc:
        out.append(CheckReport("reconstruct/corrupted-pair-rejected", 0.0, 0.0, True, {"error": str(exc)}))
    return out
