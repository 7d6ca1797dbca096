from dataclasses import replace

import numpy as np
import pytest

from radialwave.catalog import SolutionFamily
from radialwave.core import CompatibilityError, ConfigError, DomainError, ModelParams, PathSingular
from radialwave.foliation import GHSolution
from radialwave.reconstruct import (GridSpec, PerturbedGH, ReconstructionProblem, constant_sweep, reconstruct,
                                    reconstruction_suite, seed_from_family)

P = ModelParams(3, 3.0, 1)


@pytest.fixture(scope="module")
def s1_problem():
    u1 = SolutionFamily("U1", P, c=0.0, branch=1)
    return u1, ReconstructionProblem(GHSolution("S1", P, -1), (1.5, 1.0), seed_from_family(u1, 1.5, 1.0),
                                     GridSpec((1.0, 2.0), (0.5, 1.5), 21, 21))


def test_s1_reconstructs_u1(s1_problem):
    u1, prob = s1_problem
    res = reconstruct(prob)
    assert res.relative_error(u1) < 1e-8
    assert res.path_discrepancy < 1e-8
    assert res.to_json()["chart"] == "scaling"


def test_corrupted_pair_raises(s1_problem):
    _, prob = s1_problem
    with pytest.raises(CompatibilityError):
        reconstruct(replace(prob, gh=PerturbedGH(prob.gh, dH=1e-3)))


def test_path_through_singularity(s1_problem):
    _, prob = s1_problem
    bad = ReconstructionProblem(GHSolution("S1", P, 1), (1.5, 1.0), 1.0, GridSpec((1.0, 4.0), (0.5, 1.5), 9, 9))
    with pytest.raises(PathSingular):
        reconstruct(bad)


def test_sweep_gives_distinct_members(s1_problem):
    _, prob = s1_problem
    seeds = [seed_from_family(SolutionFamily("U1", P, c=c), 1.5, 1.0) for c in (-0.2, 0.0, 1.0)]
    sweep = constant_sweep(prob, seeds)
    assert sweep.distinct and sweep.all_pass


def test_grid_validation():
    with pytest.raises(ConfigError):
        GridSpec((0.0, 1.0), (0.0, 1.0))
    with pytest.raises(ConfigError):
        GridSpec((0.0, 1.0), (0.5, 1.0), 5, 9)


def test_seed_outside_domain():
    with pytest.raises((DomainError, ConfigError)):
        ReconstructionProblem(GHSolution("S1", P, -1), (1.5, -1.0), 1.0, GridSpec((1.0, 2.0), (0.5, 1.5)))


def test_initial_data_slice(s1_problem):
    u1, prob = s1_problem
    res = reconstruct(prob)
    data = res.initial_data(prob.gh, 0)
    a = np.sqrt(1 / 8)
    assert data.t0 == 1.0
    assert data.ut == pytest.approx(np.full_like(data.r, -1 / (2 * a)), rel=1e-8)


def test_reconstruction_suite():
    assert all(r.passed for r in reconstruction_suite())
