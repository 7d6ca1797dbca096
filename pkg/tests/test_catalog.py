import math

import numpy as np
import pytest

from radialwave.catalog import (FAMILY_IDS, SolutionFamily, energy, evaluate, family_table, field_function,
                                field_jet, query_families, relative_residual, sample_interior, singular_set,
                                standard_instances, verify_residual)
from radialwave.core import DomainError, ModelParams, PowerKind, UnsupportedParams


def test_table_has_fifteen_families():
    rows = family_table()
    assert [r["id"] for r in rows] == list(FAMILY_IDS)
    assert len(rows) == 15
    assert {"constraints", "constants", "singular_set", "asymptotics"} <= set(rows[0])


@pytest.mark.parametrize("filters,expected", [
    (dict(n=3, q=3.0), ["U1", "U2", "U6", "U7", "U8", "U9", "IV6"]),
    (dict(power_kind=PowerKind.CONFORMAL), ["U6", "U7", "U8", "U9", "IV6"]),
    (dict(q=-3.0), ["U5"]),
])
def test_queries(filters, expected):
    assert query_families(**filters) == expected


@pytest.mark.parametrize("family", standard_instances(), ids=lambda f: f"{f.id}-n{f.params.n}")
def test_standard_instance_residuals(family):
    pts = sample_interior(family, 20, np.random.default_rng(1))
    rep = verify_residual(family, pts)
    assert rep.passed, rep.max_residual


def test_instances_cover_every_family_three_times():
    ids = [f.id for f in standard_instances()]
    assert all(ids.count(fid) == 3 for fid in FAMILY_IDS)


def test_as_printed_iv6_fails_with_order_one_residual():
    P = ModelParams.at_power(PowerKind.CONFORMAL, 5, 1)
    bad = SolutionFamily("IV6", P, as_printed=True)
    assert relative_residual(bad, 0.3, 1.2) > 0.1
    assert relative_residual(SolutionFamily("IV6", P), 0.3, 1.2) < 1e-12


def test_as_printed_only_for_iv6():
    with pytest.raises(UnsupportedParams):
        SolutionFamily("U1", ModelParams(3, 3.0), as_printed=True)


def test_constraint_rejects_wrong_power():
    with pytest.raises(UnsupportedParams):
        SolutionFamily("U6", ModelParams(3, 2.0), c=1.0)


def test_vectorized_jet_matches_pointwise():
    f = SolutionFamily("U8", ModelParams(3, 3.0, 1), c=1.0, branch=-1)
    r = np.linspace(0.1, 3.0, 7)
    j = field_jet(f, np.full_like(r, 1.5), r)
    for ri, vi in zip(r, j.v):
        assert evaluate(f, 1.5, float(ri)).u == pytest.approx(vi, rel=1e-14)


def test_singular_set_guard():
    f = SolutionFamily("U6", ModelParams(3, 3.0, 1), c=-1.0, branch=-1)
    comp = singular_set(f).components[0]
    assert comp.kind == "hyperbola"
    assert 0.0 in comp.times_at_axis()
    with pytest.raises(DomainError):
        evaluate(f, 0.0, 0.0)


def test_u8_energy_is_pi_over_eight():
    f = SolutionFamily("U8", ModelParams(3, 3.0, 1), c=1.0, branch=-1)
    rep = energy(f, 1.0)
    assert rep.value == pytest.approx(math.pi / 8, rel=1e-10)
    assert rep.tail == "convergent" and rep.axis == "regular"
    assert energy(f, 1.0, 20.0).partial < rep.value


def test_iv6_energy_diverges_at_axis():
    rep = energy(SolutionFamily("IV6", ModelParams.at_power(PowerKind.CONFORMAL, 5, 1)), 0.0, 5.0)
    assert rep.axis == "divergent" and math.isinf(rep.value)


def test_field_function_accepts_floats():
    u = field_function(SolutionFamily("U1", ModelParams(3, 3.0), c=1.0))
    assert u(0.0, 1.0) == pytest.approx(1 / (2 * math.sqrt(1 / 8)))
