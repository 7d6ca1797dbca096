"""Finite-difference solver for the radial semilinear wave equation with
axis regularity, energy tracking, blow-up detection, convergence studies and
blow-up rate fitting.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy.integrate import simpson

from .catalog import SolutionFamily, field_jet
from .core import ConfigError, DomainError, InsufficientWindow, ModelParams
from .csvio import InitialData
from .jets import _is_integer
from .parallel import pmap


class Boundary(str, enum.Enum):
    DIRICHLET_EXACT = "dirichlet-exact"
    SOMMERFELD = "sommerfeld"


class Status(str, enum.Enum):
    RUNNING = "running"
    COMPLETED = "completed"
    BLOWUP = "blowup"
    DOMAIN_ERROR = "domain-error"


class RadialScheme(str, enum.Enum):
    CENTRAL = "central"
    UPWIND = "upwind"


@dataclass(frozen=True)
class SimConfig:
    """Run configuration.

    ``N`` is the number of radial intervals, so the grid has N+1 nodes
    r_i = i r_max / N.  The step is cfl*dr, further limited by
    ``cfl_nonlinear`` / sqrt(|k q u^(q-1)|) so that blow-up is approached
    with shrinking steps.  ``upwind`` replaces the centred first radial
    derivative with a one-sided difference; it exists only as a first-order
    control for convergence tests.
    """

    params: ModelParams
    source: Union[SolutionFamily, InitialData]
    t_end: float
    r_max: float = 20.0
    N: int = 400
    cfl: float = 0.5
    t0: Optional[float] = None
    boundary: Boundary = Boundary.DIRICHLET_EXACT
    threshold: float = 1e8
    energy_stride: int = 1
    snapshot_stride: int = 0
    nonlinear: bool = True
    signed_power: bool = False
    floor: Optional[float] = None
    radial_scheme: RadialScheme = RadialScheme.CENTRAL
    cfl_nonlinear: float = 0.1
    max_steps: int = 10_000_000

    def __post_init__(self):
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "radial_scheme", RadialScheme(self.radial_scheme))
        if int(self.N) != self.N or self.N < 16:
            raise ConfigError(f"N must be an integer >= 16, got {self.N}")
        if not 0 < self.cfl < 1:
            raise ConfigError(f"cfl must lie in (0, 1), got {self.cfl}")
        if not self.r_max > 0:
            raise ConfigError(f"r_max must be positive, got {self.r_max}")
        if not self.threshold > 0:
            raise ConfigError("threshold must be positive")
        if self.energy_stride < 1 or self.snapshot_stride < 0:
            raise ConfigError("energy_stride must be >= 1 and snapshot_stride >= 0")
        if isinstance(self.source, InitialData):
            if self.source.params != self.params:
                raise ConfigError("initial data parameters differ from the run parameters")
            if self.boundary == Boundary.DIRICHLET_EXACT:
                raise ConfigError("the exact Dirichlet boundary needs a catalog family source")
        elif isinstance(self.source, SolutionFamily):
            if self.source.params != self.params:
                raise ConfigError("family parameters differ from the run parameters")
            if self.t0 is None:
                raise ConfigError("a catalog source needs t0")
        else:
            raise ConfigError("source must be a SolutionFamily or InitialData")
        if not self.t_end > self.start_time:
            raise ConfigError("t_end must exceed the start time")

    @property
    def start_time(self) -> float:
        return self.source.t0 if isinstance(self.source, InitialData) else float(self.t0)

    @property
    def dr(self) -> float:
        return self.r_max / self.N

    def grid(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.N + 1)


@dataclass
class SimState:
    r: np.ndarray
    u: np.ndarray
    u_prev: np.ndarray
    ut: np.ndarray
    t: float
    energy_history: list = field(default_factory=list)
    status: Status = Status.RUNNING
    t_blowup: Optional[float] = None
    steps: int = 0
    last_dt: float = 0.0


@dataclass
class SimResult:
    config: SimConfig
    state: SimState
    axis_history: list
    snapshots: list
    message: str = ""

    def energy_drift(self) -> float:
        E = np.array([e for _, e in self.state.energy_history])
        if E.size == 0 or E[0] == 0:
            return 0.0 if E.size == 0 or np.all(E == 0) else math.inf
        return float(np.max(np.abs(E - E[0])) / abs(E[0]))

    def snapshot_rows(self) -> list:
        return [(t, r, u) for t, us in self.snapshots for r, u in zip(self.state.r, us)]


# ---------------------------------------------------------------------------
# discretisation
# ---------------------------------------------------------------------------

def nonlinearity(u: np.ndarray, config: SimConfig) -> np.ndarray:
    """k u^q with the configured treatment of non-positive values."""
    P = config.params
    q = P.q
    if _is_integer(q):
        m = int(round(q))
        if m < 0 and np.any(u == 0):
            raise DomainError("u = 0 with a negative integer power")
        with np.errstate(over="ignore"):
            return P.k * (u ** m if m >= 0 else 1.0 / u ** (-m))
    if config.signed_power:
        return P.k * np.sign(u) * np.abs(u) ** q
    if config.floor is not None:
        return P.k * np.maximum(u, config.floor) ** q
    if np.any(u <= 0):
        raise DomainError("u <= 0 under a non-integer power")
    with np.errstate(over="ignore"):
        return P.k * u ** q


def potential(u: np.ndarray, config: SimConfig) -> np.ndarray:
    """k F(u) with F' = u^q, F(u) = u^(q+1)/(q+1)."""
    P = config.params
    q = P.q
    if abs(q + 1) < 1e-12:
        return P.k * np.log(np.abs(u))
    if _is_integer(q):
        m = int(round(q)) + 1
        return P.k * (u ** m if m >= 0 else 1.0 / u ** (-m)) / (q + 1)
    if config.signed_power:
        return P.k * np.abs(u) ** (q + 1) / (q + 1)
    if config.floor is not None:
        return P.k * np.maximum(u, config.floor) ** (q + 1) / (q + 1)
    return P.k * u ** (q + 1) / (q + 1)


def _exact_boundary(config: SimConfig, t: float) -> tuple:
    j = field_jet(config.source, t, config.r_max)
    return float(j.v), float(j.a)


def _cell_geometry(config: SimConfig) -> tuple:
    """Face areas r_{i+1/2}^(n-1) and dual-cell volumes with exact r^(n-1) weights."""
    n = config.params.n
    r = config.grid()
    faces = np.concatenate([[0.0], 0.5 * (r[1:] + r[:-1]), [r[-1]]])
    area = faces ** (n - 1)
    vol = (faces[1:] ** n - faces[:-1] ** n) / n
    return area, vol


def spatial_operator(u: np.ndarray, ut: np.ndarray, t: float, config: SimConfig) -> np.ndarray:
    """r^(1-n) (r^(n-1) u_r)_r (+ k u^q) in flux form.

    Face fluxes use centred differences and each node is divided by the
    exact volume of its dual cell, which reduces to 2n(u_1 - u_0)/dr^2 on
    the axis (the even-ghost limit of n u_rr).
    """
    n = config.params.n
    dr = config.dr
    r = config.grid()
    L = np.empty_like(u)
    if config.radial_scheme == RadialScheme.CENTRAL:
        area, vol = _cell_geometry(config)
        flux = area[1:-1] * (u[1:] - u[:-1]) / dr
        L[0] = flux[0] / vol[0]
        L[1:-1] = (flux[1:] - flux[:-1]) / vol[1:-1]
    else:
        L[0] = n * 2.0 * (u[1] - u[0]) / dr**2
        um, uc, up = u[:-2], u[1:-1], u[2:]
        L[1:-1] = (up - 2 * uc + um) / dr**2 + (n - 1) * (up - uc) / dr / r[1:-1]
    if config.boundary == Boundary.SOMMERFELD:
        rN = r[-1]
        ur_N = -ut[-1] - (n - 1) * u[-1] / (2 * rN)
        ghost = u[-2] + 2 * dr * ur_N
        L[-1] = (ghost - 2 * u[-1] + u[-2]) / dr**2 + (n - 1) * ur_N / rN
    else:
        L[-1] = 0.0
    if config.nonlinear:
        L = L + nonlinearity(u, config)
    return L


def radial_derivative(u: np.ndarray, dr: float) -> np.ndarray:
    """Fourth-order u_r: centred with an even reflection at the axis and
    one-sided five-point stencils at the outer edge."""
    ue = np.concatenate([u[2:0:-1], u])
    ur = np.empty_like(u)
    ur[:-2] = (ue[0:-4] - 8 * ue[1:-3] + 8 * ue[3:-1] - ue[4:]) / (12 * dr)
    f = u[-5:]
    ur[-2] = (3 * f[4] + 10 * f[3] - 18 * f[2] + 6 * f[1] - f[0]) / (12 * dr)
    ur[-1] = (25 * f[4] - 48 * f[3] + 36 * f[2] - 16 * f[1] + 3 * f[0]) / (12 * dr)
    ur[0] = 0.0
    return ur


def energy_of_state(state: SimState, config: SimConfig) -> float:
    """Composite Simpson integral of (ut^2/2 + ur^2/2 - k F(u)) r^(n-1)."""
    n = config.params.n
    ur = radial_derivative(state.u, config.dr)
    pot = potential(state.u, config) if config.nonlinear else 0.0
    dens = (0.5 * state.ut**2 + 0.5 * ur**2 - pot) * state.r ** (n - 1)
    return float(simpson(dens, x=state.r))


def axis_slope(state: SimState, dr: float) -> float:
    """One-sided fourth-order estimate of u_r at r = 0."""
    u = state.u
    return float((-25 * u[0] + 48 * u[1] - 36 * u[2] + 16 * u[3] - 3 * u[4]) / (12 * dr))


def initial_state(config: SimConfig) -> SimState:
    r = config.grid()
    if isinstance(config.source, InitialData):
        d = config.source
        if d.r.shape != r.shape or not np.allclose(d.r, r, rtol=0, atol=1e-12 * config.r_max):
            raise ConfigError(f"initial data grid does not match N={config.N}, r_max={config.r_max}")
        u, ut = np.array(d.u, dtype=float), np.array(d.ut, dtype=float)
    else:
        j = field_jet(config.source, np.full_like(r, config.start_time), r)
        u, ut = np.asarray(j.v, dtype=float), np.asarray(j.a, dtype=float)
    if not (np.all(np.isfinite(u)) and np.all(np.isfinite(ut))):
        raise DomainError("initial data is not finite on the grid")
    state = SimState(r, u.copy(), u.copy(), ut.copy(), config.start_time)
    state.energy_history.append((state.t, energy_of_state(state, config)))
    return state


def time_step(state: SimState, config: SimConfig) -> float:
    dt = config.cfl * config.dr
    if config.nonlinear:
        P = config.params
        umax = float(np.max(np.abs(state.u)))
        if umax > 0:
            rate = math.sqrt(abs(P.k * P.q) * umax ** (P.q - 1.0)) if umax > 0 else 0.0
            if rate > 0:
                dt = min(dt, config.cfl_nonlinear / rate)
    return min(dt, config.t_end - state.t)


def step(state: SimState, config: SimConfig, dt: Optional[float] = None) -> SimState:
    """One kick-drift-kick leapfrog step (second order, self-starting)."""
    if state.status != Status.RUNNING:
        raise DomainError(f"cannot step a run with status {state.status.value}")
    if dt is None:
        dt = time_step(state, config)
    t = state.t
    L0 = spatial_operator(state.u, state.ut, t, config)
    v_half = state.ut + 0.5 * dt * L0
    u_new = state.u + dt * v_half
    if config.boundary == Boundary.DIRICHLET_EXACT:
        u_new[-1], _ = _exact_boundary(config, t + dt)
    L1 = spatial_operator(u_new, v_half, t + dt, config)
    v_new = v_half + 0.5 * dt * L1
    if config.boundary == Boundary.DIRICHLET_EXACT:
        _, v_new[-1] = _exact_boundary(config, t + dt)
    state.u_prev = state.u
    state.u = u_new
    state.ut = v_new
    state.t = t + dt
    state.steps += 1
    state.last_dt = dt
    umax = float(np.max(np.abs(u_new))) if np.all(np.isfinite(u_new)) else math.inf
    if umax > config.threshold:
        state.status = Status.BLOWUP
        state.t_blowup = state.t
    elif state.t >= config.t_end - 1e-14 * max(1.0, abs(config.t_end)):
        state.t = config.t_end
        state.status = Status.COMPLETED
    return state


def run(config: SimConfig) -> SimResult:
    """Integrate from the start time to t_end, blow-up or a domain error."""
    state = initial_state(config)
    axis = [(state.t, float(state.u[0]))]
    snaps = [(state.t, state.u.copy())] if config.snapshot_stride else []
    message = ""
    while state.status == Status.RUNNING:
        if state.steps >= config.max_steps:
            raise DomainError(f"step budget {config.max_steps} exhausted at t={state.t}")
        try:
            step(state, config)
        except DomainError as exc:
            state.status = Status.DOMAIN_ERROR
            message = str(exc)
            break
        axis.append((state.t, float(state.u[0])))
        final = state.status != Status.RUNNING
        if state.status != Status.BLOWUP and (state.steps % config.energy_stride == 0 or final):
            state.energy_history.append((state.t, energy_of_state(state, config)))
        if config.snapshot_stride and (state.steps % config.snapshot_stride == 0 or final):
            snaps.append((state.t, state.u.copy()))
    return SimResult(config, state, axis, snaps, message)


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------

@dataclass
class ConvergenceReport:
    resolutions: list
    l2: list
    linf: list
    order: float
    order_linf: float

    def rows(self) -> list:
        return list(zip(self.resolutions, self.l2, self.linf))

    def to_json(self) -> dict:
        return {"resolutions": self.resolutions, "L2": self.l2, "Linf": self.linf,
                "order": self.order, "order_linf": self.order_linf}


def fitted_order(resolutions, errors) -> float:
    """Least-squares slope of -log(error) against log(N)."""
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise DomainError("errors must be positive to fit an order")
    slope = np.polyfit(np.log(np.asarray(resolutions, dtype=float)), np.log(errors), 1)[0]
    return float(-slope)


def solution_error(result: SimResult, exact: SolutionFamily) -> tuple:
    st = result.state
    j = field_jet(exact, np.full_like(st.r, st.t), st.r)
    err = st.u - np.asarray(j.v)
    l2 = math.sqrt(float(simpson(err**2, x=st.r)) / result.config.r_max)
    return l2, float(np.max(np.abs(err)))


def run_convergence(template: SimConfig, resolutions, exact: SolutionFamily) -> ConvergenceReport:
    """Errors against ``exact`` at t_end for each N, and the fitted order.

    ``cfl_nonlinear`` is scaled by N_0/N so that the step shrinks in
    proportion to dr at every level, whichever step limit is active.
    """
    resolutions = [int(N) for N in resolutions]
    if len(resolutions) < 2:
        raise ConfigError("at least two resolutions are needed")
    base = resolutions[0]

    def one(N):
        res = run(replace(template, N=N, cfl_nonlinear=template.cfl_nonlinear * base / N))
        if res.state.status != Status.COMPLETED:
            raise DomainError(f"N={N}: run ended with status {res.state.status.value} {res.message}")
        return solution_error(res, exact)

    errs = pmap(one, resolutions)
    l2 = [e[0] for e in errs]
    linf = [e[1] for e in errs]
    return ConvergenceReport(resolutions, l2, linf, fitted_order(resolutions, l2),
                             fitted_order(resolutions, linf))


# ---------------------------------------------------------------------------
# blow-up rate
# ---------------------------------------------------------------------------

@dataclass
class BlowupFit:
    t_blowup: float
    exponent: float
    amplitude: float
    reference: float
    residual: float
    samples: int
    window: tuple

    def to_json(self) -> dict:
        return {"t_blowup": self.t_blowup, "exponent": self.exponent, "amplitude": self.amplitude,
                "reference": self.reference, "fit_residual": self.residual,
                "samples": self.samples, "window": list(self.window)}


def fit_blowup(times, values, t_blowup: float, n: int, window=(1e3, 1e6), exclude_last: int = 3) -> BlowupFit:
    """Fit log|u| = log A + e log|t - t_b| over samples with |u| inside ``window``."""
    t = np.asarray(times, dtype=float)
    u = np.abs(np.asarray(values, dtype=float))
    if exclude_last:
        t, u = t[:-exclude_last], u[:-exclude_last]
    gap = np.abs(t - t_blowup)
    keep = (u >= window[0]) & (u <= window[1]) & (gap > 0) & np.isfinite(u)
    if int(np.sum(keep)) < 10:
        raise InsufficientWindow(f"only {int(np.sum(keep))} samples inside the window {window}")
    X, Y = np.log(gap[keep]), np.log(u[keep])
    e, logA = np.polyfit(X, Y, 1)
    res = float(np.sqrt(np.mean((Y - (e * X + logA)) ** 2)))
    return BlowupFit(float(t_blowup), float(e), float(math.exp(logA)), (1 - n) / 2, res,
                     int(np.sum(keep)), tuple(window))


def fit_blowup_rate(result: SimResult, r_probe: float = 0.0, window=(1e3, 1e6)) -> BlowupFit:
    """Rate fit on the axis history of a run that ended in blow-up."""
    if r_probe != 0.0:
        raise ConfigError("the blow-up rate is measured on the axis (r_probe = 0)")
    st = result.state
    if st.status != Status.BLOWUP:
        raise InsufficientWindow(f"run ended with status {st.status.value}, not blow-up")
    ts, us = zip(*result.axis_history)
    return fit_blowup(ts, us, st.t_blowup, result.config.params.n, window)
