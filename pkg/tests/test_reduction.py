import math

import numpy as np
import pytest

from radialwave.catalog import SolutionFamily
from radialwave.core import DomainError, ModelParams, NonMonotone, PowerKind, UnsupportedParams
from radialwave.reduction import (Direction, ODEKind, QuadratureFamily, QuadratureKind, ReducedODE,
                                  canonical_map, constant_solutions, gauss_kronrod, no_symmetry_witness,
                                  ode_residual, profile_residual, quadrature_solve, reduction_suite,
                                  transvinv_printed, turning_point, zero_energy_closed_form)

CRIT = lambda n, k=1: ModelParams.at_power(PowerKind.CRITICAL, n, k)


def test_reduced_ode_requires_its_power():
    with pytest.raises(UnsupportedParams):
        ReducedODE(ODEKind.INVER, ModelParams(3, 2.0))


def test_trans_canonical_constant_at_n4():
    ode = ReducedODE(ODEKind.TRANS_CANONICAL_SCAL, CRIT(4))
    assert constant_solutions(ode) == pytest.approx([1.0, -1.0])
    assert ode_residual(ode, 0.0, -1.0, 0.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert transvinv_printed(CRIT(4)) == pytest.approx(-1.0)


def test_inver_canonical_constant_at_n5_is_two():
    ode = ReducedODE(ODEKind.INVER_CANONICAL, ModelParams.at_power(PowerKind.CONFORMAL, 5, 1))
    assert constant_solutions(ode) == [2.0]
    assert abs(ode_residual(ode, 0.0, 4.0, 0.0, 0.0)) > 1.0


def test_scal_and_scal_u_agree_on_u1():
    fam = SolutionFamily("U1", ModelParams(3, 3.0))
    assert profile_residual(fam, ReducedODE(ODEKind.SCAL, fam.params), np.linspace(0.1, 0.9, 7)) < 1e-12
    assert profile_residual(fam, ReducedODE(ODEKind.SCAL_U, fam.params), np.linspace(1.1, 3.0, 7)) < 1e-12


def test_canonical_map_roundtrip_and_branches():
    ode = ReducedODE(ODEKind.SCAL_CANONICAL_DIL, CRIT(4))
    x, v = canonical_map(ode, Direction.FORWARD, (0.5, 1.3))
    assert x < 0
    assert canonical_map(ode, Direction.INVERSE, (x, v)) == pytest.approx((0.5, 1.3), rel=1e-13)
    outer = ReducedODE(ODEKind.SCAL_CANONICAL_DIL, CRIT(4), -1)
    x, v = canonical_map(outer, Direction.FORWARD, (2.0, 1.3))
    assert 0 < x < math.pi / 2
    assert canonical_map(outer, Direction.INVERSE, (x, v)) == pytest.approx((2.0, 1.3), rel=1e-13)
    with pytest.raises(DomainError):
        canonical_map(ode, Direction.INVERSE, (0.3, 1.0))


def test_gauss_kronrod():
    val, _ = gauss_kronrod(np.sqrt, 0.0, 1.0)
    assert val == pytest.approx(2 / 3, rel=1e-12)
    val, _ = gauss_kronrod(lambda x: np.exp(x), 0.0, 1.0)
    assert val == pytest.approx(math.e - 1, rel=1e-14)


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_trans_scal_zero_energy_closed_form(n):
    fam = QuadratureFamily(QuadratureKind.TRANS_SCAL, CRIT(n))
    vt = float(zero_energy_closed_form(fam, 0.0))
    sol = quadrature_solve(fam, (1e-3, vt), v_ref=vt)
    for x in np.linspace(-3.0, -0.1, 5):
        assert sol.v_of_x(x) == pytest.approx(float(zero_energy_closed_form(fam, x)), abs=1e-9)


@pytest.mark.parametrize("n", [4, 5, 6])
def test_trans_dil_zero_energy_power_law(n):
    fam = QuadratureFamily(QuadratureKind.TRANS_DIL, ModelParams.at_power(PowerKind.INVERSE_DILATION, n, -1))
    xs = np.linspace(0.2, 2.0, 5)
    vv = zero_energy_closed_form(fam, xs)
    sol = quadrature_solve(fam, (0.0, 1.5 * float(vv[-1])), v_ref=0.0)
    assert [sol.v_of_x(x) for x in xs] == pytest.approx(list(vv), abs=1e-9)


def test_trans_dil_half_energy_monotone_to_turning_point():
    fam = QuadratureFamily(QuadratureKind.TRANS_DIL, ModelParams.at_power(PowerKind.INVERSE_DILATION, 5, 1), c=0.5)
    vt = turning_point(fam, (1e-6, 1.0))
    assert vt == pytest.approx(3 ** -1.5, rel=1e-12)
    sol = quadrature_solve(fam, (0.0, vt))
    assert np.all(np.diff(sol.table(21)[:, 1]) > 0)
    v0 = 0.4 * vt
    assert sol.v_of_x(sol.x_of_v(v0)) == pytest.approx(v0, abs=1e-12)
    with pytest.raises(NonMonotone):
        sol.v_of_x(sol.x_range()[1] + 1.0)


def test_radicand_sign_change_rejected():
    fam = QuadratureFamily(QuadratureKind.TRANS_DIL, ModelParams.at_power(PowerKind.INVERSE_DILATION, 5, 1), c=0.5)
    with pytest.raises(DomainError):
        quadrature_solve(fam, (0.0, 1.0))


def test_scal_dil_inner_equals_trans_scal():
    a = quadrature_solve(QuadratureFamily(QuadratureKind.TRANS_SCAL, CRIT(4)), (0.1, 1.0))
    b = quadrature_solve(QuadratureFamily(QuadratureKind.SCAL_DIL, CRIT(4), s=1), (0.1, 1.0))
    assert np.array_equal(a.table(9), b.table(9))


@pytest.mark.parametrize("n", [3, 4, 5])
def test_no_symmetry_witness(n):
    w = no_symmetry_witness(n)
    assert w.passed
    assert w.defects["trans-inver/xi-scaling"] > 1e-3
    assert w.defects["inver/xi-scaling"] < 1e-10


def test_reduction_suite_passes():
    reports = reduction_suite()
    failed = [r.name for r in reports if not r.passed]
    assert not failed
    assert any(r.name == "erratum/IV6-printed-amplitude" for r in reports)
