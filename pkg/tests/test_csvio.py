import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from radialwave.core import ConfigError, ModelParams
from radialwave.csvio import (InitialData, Table, read_csv, read_initial_data, write_convergence, write_energy,
                              write_initial_data, write_quadrature, write_snapshots)

finite = st.floats(allow_nan=False, allow_infinity=False, width=64)


@settings(max_examples=50, deadline=None)
@given(rows=st.lists(st.tuples(finite, finite, finite), min_size=1, max_size=20), t0=finite)
def test_initial_data_roundtrip(rows, t0, tmp_path_factory):
    path = tmp_path_factory.mktemp("csv") / "init.csv"
    arr = np.array(rows, dtype=float)
    data = InitialData(t0, ModelParams(3, 3.0, -1), arr[:, 0], arr[:, 1], arr[:, 2])
    write_initial_data(path, data)
    back = read_initial_data(path)
    assert back.t0 == t0 and back.params == data.params
    assert np.array_equal(back.r, data.r) and np.array_equal(back.u, data.u) and np.array_equal(back.ut, data.ut)


@pytest.mark.parametrize("writer,kind,width", [(write_snapshots, "snapshots", 3), (write_energy, "energy", 2),
                                               (write_convergence, "convergence", 3),
                                               (write_quadrature, "quadrature", 2)])
def test_table_roundtrip(tmp_path, writer, kind, width):
    rows = np.random.default_rng(0).normal(size=(7, width)) * 1e-3 / 3
    path = tmp_path / f"{kind}.csv"
    writer(path, rows)
    back = read_csv(path)
    assert isinstance(back, Table) and back.kind == kind
    assert np.array_equal(back.rows, rows)


def test_bad_header(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        read_csv(path)


def test_non_numeric(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("t,E\n1,abc\n")
    with pytest.raises(ConfigError):
        read_csv(path)


def test_initial_reader_rejects_tables(tmp_path):
    path = tmp_path / "e.csv"
    write_energy(path, [(0.0, 1.0)])
    with pytest.raises(ConfigError):
        read_initial_data(path)
