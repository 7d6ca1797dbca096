import pytest

from radialwave.core import ModelParams, PowerKind, UnsupportedParams
from radialwave.foliation import (AnsatzCase, FoliationChart, GHSolution, Subgroup, ansatz_coefficient_check,
                                  grid_points, reports_json, resolving_residual, standard_gh_instances,
                                  standard_potential_instances, verify_instance, verify_potential_instance)
from radialwave.reconstruct import PerturbedGH


@pytest.mark.parametrize("inst", standard_gh_instances(), ids=lambda i: i.solution.label())
def test_gh_instances_solve_resolving_system(inst):
    rep = verify_instance(inst)
    assert rep.passed and rep.points == 400, rep.max_residual


def test_ten_gh_families():
    assert len({i.solution.id for i in standard_gh_instances()}) == 10


@pytest.mark.parametrize("inst", standard_potential_instances(), ids=lambda i: i.potential.id)
def test_potentials(inst):
    rep = verify_potential_instance(inst)
    assert rep.passed
    assert rep.detail["curl"] < 1e-9 and rep.detail["match"] < 1e-10


def test_perturbed_pair_fails_resolving_system():
    inst = standard_gh_instances()[0]
    bad = PerturbedGH(inst.solution, dG=1e-3)
    chart = inst.solution.chart
    worst = max(chart.system_residual(x, v, *_jets(bad, x, v)) for x, v in grid_points(inst.box, 5))
    assert worst > 1e-6


def _jets(gh, x, v):
    G, H = gh.base.jets(x, v)
    return G + gh.dG, H + gh.dH


def test_wrong_chart_rejected():
    gh = GHSolution("S1", ModelParams(3, 3.0), 1)
    chart = FoliationChart(Subgroup("translation"), ModelParams(3, 3.0))
    with pytest.raises(UnsupportedParams):
        resolving_residual(chart, gh, [(1.0, 1.0)])


def test_ansatz_q_is_inconsistent():
    rep = ansatz_coefficient_check(AnsatzCase.Q, 3, 3.0, 1)
    assert not rep.solvable and rep.consistent == []


def test_ansatz_half_q_plus_one_reproduces_known_pair():
    rep = ansatz_coefficient_check(AnsatzCase.HALF_Q_PLUS_ONE, 3, 3.0, 1)
    assert rep.solvable and rep.real
    assert {"g0": "sqrt(2)/2", "h0": "0"} in rep.consistent


def test_reports_json_roundtrip():
    import json
    data = json.loads(reports_json([verify_instance(standard_gh_instances()[0], 4)]))
    assert data[0]["pass"] is True
