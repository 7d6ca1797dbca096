import numpy as np
import pytest

from radialwave.catalog import SolutionFamily, field_function, standard_instances
from radialwave.core import ModelParams, PowerKind, UnsupportedParams
from radialwave.liealg import (GroupElement, GroupKind, algebra_suite, bracket_table, check_inversion_invariant_action,
                               fit_constants, generators, group_action_suite, involution_roundtrip, jacobi,
                               lie_bracket, transformed, transformed_residual)

CONF3 = ModelParams.at_power(PowerKind.CONFORMAL, 3, 1)


def test_generators_depend_on_power():
    assert set(generators(CONF3)) == {"X_trans", "X_scal", "X_inver"}
    assert set(generators(ModelParams(3, 2.0))) == {"X_trans", "X_scal"}


def test_bracket_table_structure_constants():
    table = bracket_table(CONF3)["brackets"]
    assert table["[X_trans,X_scal]"]["coefficients"] == {"X_trans": "1"}
    assert table["[X_trans,X_inver]"]["coefficients"] == {"X_scal": "2"}
    assert table["[X_scal,X_inver]"]["coefficients"] == {"X_inver": "1"}


def test_bracket_antisymmetry_and_jacobi():
    g = generators(ModelParams.at_power(PowerKind.CONFORMAL, 4))
    X, Y, Z = g["X_trans"], g["X_scal"], g["X_inver"]
    assert (lie_bracket(X, Z) + lie_bracket(Z, X)).is_zero()
    assert jacobi(X, Y, Z).is_zero()


@pytest.mark.parametrize("n", [2, 3, 6])
def test_algebra_suite_passes(n):
    assert all(r.passed for r in algebra_suite(n))


def test_inversion_needs_conformal_power():
    u = field_function(SolutionFamily("U1", ModelParams(3, 2.0), c=1.0))
    with pytest.raises(UnsupportedParams):
        transformed(GroupElement(GroupKind.INVERSION, 0.1), u, ModelParams(3, 2.0))


def test_scaling_requires_positive_lambda():
    with pytest.raises(UnsupportedParams):
        GroupElement(GroupKind.SCALING, -1.0)


def test_transformed_solution_residual():
    u = field_function(SolutionFamily("U8", CONF3, c=1.0, branch=-1))
    for g in (GroupElement("translation", 0.3), GroupElement("scaling", 2.0), GroupElement("inversion", 0.1)):
        assert transformed_residual(g, u, CONF3, 1.2, 0.7) < 1e-10


def test_involution_twice_is_identity():
    u = field_function(SolutionFamily("U8", CONF3, c=1.0, branch=-1))
    pts = [(2.0, 0.5), (3.0, 1.0), (1.5, 0.2)]
    assert involution_roundtrip(u, CONF3, pts) < 1e-12


def test_inversion_acts_as_shift_on_invariant():
    u = field_function(SolutionFamily("U8", CONF3, c=1.0, branch=-1))
    rep = check_inversion_invariant_action(u, CONF3, 0.1, [(2.0, 1.0), (3.0, 0.5), (1.5, 2.0)])
    assert rep.passed, rep.max_deviation


def test_u7_inversion_recovers_zero_constant_member():
    u = field_function(SolutionFamily("U7", CONF3, c=0.4))
    image = transformed(GroupElement("inversion", -0.4), u, CONF3)
    target = field_function(SolutionFamily("U7", CONF3, c=0.0))
    for t, r in [(0.3, 1.0), (0.2, 1.5), (-0.4, 2.0)]:
        assert image(t, r) == pytest.approx(target(t, r), rel=1e-12)


def test_fit_constants_recovers_translation():
    fam = SolutionFamily("U1", ModelParams(3, 3.0), c=0.5)
    shifted = transformed(GroupElement("translation", 0.25), field_function(fam), fam.params)
    fit = fit_constants(shifted, fam, [(0.1 * i, 1.0) for i in range(1, 8)])
    assert fit.matched
    assert fit.constants["c"] == pytest.approx(0.75, abs=1e-9)


def test_group_action_suite_on_subset():
    fams = [f for f in standard_instances() if f.id in ("U6", "U8", "IV6")]
    reports = group_action_suite(fams, np.random.default_rng(0), count=8)
    assert reports and all(r.passed for r in reports)
    assert any(r.transformation == "involution-twice" and r.points > 0 for r in reports)
