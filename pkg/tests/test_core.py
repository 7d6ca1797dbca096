import math

import pytest

from radialwave.core import (ConfigError, DomainError, ModelParams, PowerKind, RadialWaveError, check,
                             classify_power, critical_power, conformal_power, exponent_p,
                             inverse_dilation_power, static_line_power)
from radialwave.jets import Jet2, power


def test_special_powers_at_n3():
    assert critical_power(3) == 5.0
    assert conformal_power(3) == 3.0
    assert ModelParams.at_power(PowerKind.CRITICAL, 4).q == 3.0
    assert inverse_dilation_power(5) == pytest.approx(-1 / 3)
    assert static_line_power(5) == pytest.approx(ModelParams.at_power(PowerKind.STATIC_LINE, 5).q)


def test_exponent_p_at_conformal_power():
    for n in range(2, 8):
        P = ModelParams.at_power(PowerKind.CONFORMAL, n)
        assert exponent_p(P) == pytest.approx((1 - n) / 2)
        assert P.is_power(PowerKind.CONFORMAL)


@pytest.mark.parametrize("kwargs", [dict(n=1, q=3.0), dict(n=3, q=1.0), dict(n=3, q=2.0, k=2),
                                    dict(n=2.5, q=3.0), dict(n=3, q=math.inf)])
def test_invalid_params_raise_config_error(kwargs):
    with pytest.raises(ConfigError):
        ModelParams(**kwargs)


def test_classify_power_lists_coincidences():
    kinds = {s.kind for s in classify_power(ModelParams(3, 3.0))}
    assert PowerKind.CONFORMAL in kinds


def test_error_hierarchy():
    assert issubclass(DomainError, RadialWaveError) and issubclass(DomainError, ValueError)
    assert issubclass(ConfigError, RadialWaveError)


def test_check_report():
    assert check("a", 1e-12, 1e-9).passed
    assert not check("b", math.nan, 1e-9).passed
    assert check("c", 2.0, 1.0).to_json()["pass"] is False


def test_jet_power_derivatives():
    x = Jet2.var_a(2.0)
    y = power(x, 3.0)
    assert (y.v, y.a, y.aa) == pytest.approx((8.0, 12.0, 12.0))


def test_jet_power_negative_base_non_integer():
    with pytest.raises(DomainError):
        power(Jet2.var_a(-1.0), 0.5)
