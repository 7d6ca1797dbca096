import math

import numpy as np
import pytest

from radialwave.catalog import SolutionFamily, energy
from radialwave.core import ConfigError, DomainError, InsufficientWindow, ModelParams, PowerKind
from radialwave.csvio import InitialData
from radialwave.simulator import (Boundary, RadialScheme, SimConfig, Status, energy_of_state, fit_blowup,
                                  fit_blowup_rate, fitted_order, initial_state, nonlinearity, run, run_convergence,
                                  spatial_operator)

P3 = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)
U8 = SolutionFamily("U8", P3, c=1.0, branch=-1)


def test_config_validation():
    with pytest.raises(ConfigError):
        SimConfig(P3, U8, t_end=3.0, t0=1.0, cfl=1.5)
    with pytest.raises(ConfigError):
        SimConfig(P3, U8, t_end=0.5, t0=1.0)
    with pytest.raises(ConfigError):
        SimConfig(P3, U8, t_end=3.0)
    with pytest.raises(ConfigError):
        SimConfig(P3, U8, t_end=3.0, t0=1.0, N=8)


def test_initial_energy_matches_quadrature():
    cfg = SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=20.0, N=400)
    st = initial_state(cfg)
    assert energy_of_state(st, cfg) == pytest.approx(energy(U8, 1.0, 20.0).partial, rel=1e-5)


def test_laplacian_of_quadratic_is_exact_on_axis():
    cfg = SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=1.0, N=64, nonlinear=False)
    r = cfg.grid()
    u = r ** 2
    acc = spatial_operator(u, np.zeros_like(u), 1.0, cfg)
    assert acc[0] == pytest.approx(2 * P3.n, rel=1e-12)
    assert acc[1:-1] == pytest.approx(np.full(r.size - 2, 2 * P3.n), rel=1e-10)


def test_u8_energy_drift_and_error():
    res = run(SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=20.0, N=400))
    assert res.state.status == Status.COMPLETED
    assert res.state.t == pytest.approx(3.0)
    assert res.energy_drift() < 1e-4
    times = [t for t, _ in res.state.energy_history]
    assert all(b > a for a, b in zip(times, times[1:]))


def test_convergence_order_two():
    rep = run_convergence(SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=20.0, N=100), [100, 200, 400], U8)
    assert abs(rep.order - 2.0) < 0.2
    assert rep.rows()[0][0] == 100


def test_upwind_control_is_first_order():
    rep = run_convergence(SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=20.0, N=100,
                                    radial_scheme=RadialScheme.UPWIND), [100, 200, 400], U8)
    assert rep.order < 1.3


def test_spatially_uniform_convergence():
    u1 = SolutionFamily("U1", ModelParams(3, 3.0), c=0.0)
    rep = run_convergence(SimConfig(u1.params, u1, t0=1.0, t_end=3.0, N=100), [100, 200, 400], u1)
    assert abs(rep.order - 2.0) < 0.2


def test_blowup_time_and_rate():
    fam = SolutionFamily("U6", P3, c=-1.0, branch=-1)
    a = math.sqrt(1 / 8)
    res = run(SimConfig(P3, fam, t0=-a, t_end=a, r_max=1.0, N=400))
    assert res.state.status == Status.BLOWUP
    assert abs(res.state.t_blowup) < 0.05 * a
    fit = fit_blowup_rate(res)
    assert fit.exponent == pytest.approx(-1.0, abs=0.05)


def test_fit_blowup_synthetic():
    t = -np.logspace(-7, -2, 200)
    fit = fit_blowup(t, 2.0 * np.abs(t) ** -1.0, 0.0, 3, window=(1e2, 1e8), exclude_last=0)
    assert fit.exponent == pytest.approx(-1.0, abs=1e-12)
    assert fit.amplitude == pytest.approx(2.0, rel=1e-10)
    with pytest.raises(InsufficientWindow):
        fit_blowup(t[:5], np.abs(t[:5]) ** -1.0, 0.0, 3)


def test_negative_values_with_fractional_power_are_domain_errors():
    P = ModelParams(3, 0.5, 1)
    cfg = SimConfig(P, SolutionFamily("U1", P, c=1.0), t0=0.0, t_end=1.0)
    with pytest.raises(DomainError):
        nonlinearity(np.array([1.0, -1.0]), cfg)


def test_sommerfeld_run_from_initial_data():
    cfg0 = SimConfig(P3, U8, t0=1.0, t_end=3.0, r_max=20.0, N=200)
    st = initial_state(cfg0)
    data = InitialData(1.0, P3, st.r, st.u, st.ut)
    res = run(SimConfig(P3, data, t_end=2.0, r_max=20.0, N=200, boundary=Boundary.SOMMERFELD))
    assert res.state.status == Status.COMPLETED
    assert res.energy_drift() < 1e-2


def test_fitted_order_exact():
    assert fitted_order([10, 20, 40], [1e-2, 2.5e-3, 6.25e-4]) == pytest.approx(2.0)
