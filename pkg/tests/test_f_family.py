import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fymlab.f_family import (INFINITE, DomainError, degree_analytic, degree_grid, degree_numeric,
                             make_builtin, make_custom)


def fd(fun, t, h=1e-6):
    return (fun(t + h) - fun(t - h)) / (2 * h)


@pytest.mark.parametrize("family,kw", [("identity", {}), ("p_power", {"p": 2.5}), ("p_power", {"p": 4}),
                                       ("born_infeld", {"eps": 1}), ("born_infeld", {"eps": -1}),
                                       ("exponential", {})])
@settings(max_examples=40, deadline=None)
@given(t=st.floats(1e-2, 0.45))
def test_derivatives_match_finite_differences(family, kw, t):
    f = make_builtin(family, **kw)
    assert f.d1(t) == pytest.approx(fd(f, t), rel=1e-6)
    assert f.d2(t) == pytest.approx(fd(f.d1, t), rel=1e-5, abs=1e-9)


def test_closed_forms():
    t = np.array([0.1, 1.0, 3.0])
    f = make_builtin("p_power", p=4)
    np.testing.assert_allclose(f(t), (2 * t) ** 2 / 4)
    np.testing.assert_allclose(f.d1(t), 2 * t)
    np.testing.assert_allclose(f.d2(t), 2.0)
    assert make_builtin("identity")(2.0) == 2.0
    assert make_builtin("exponential")(1.0) == pytest.approx(math.e)
    np.testing.assert_allclose(make_builtin("p_power", p=2).d2(t), 0.0)


def test_born_infeld_small_argument_is_accurate():
    f = make_builtin("born_infeld", eps=-1)
    assert f(1e-20) == pytest.approx(1e-20, rel=1e-12)
    assert make_builtin("born_infeld", eps=1)(1e-20) == pytest.approx(1e-20, rel=1e-12)


def test_domain_errors():
    f = make_builtin("born_infeld", eps=-1)
    assert f.domain_bound == 0.5
    with pytest.raises(DomainError) as err:
        f(np.array([0.1, 0.2, 0.5]))
    assert err.value.index == 2 and err.value.value == 0.5
    with pytest.raises(DomainError):
        make_builtin("identity")(-1e-3)
    with pytest.raises(DomainError):
        make_builtin("exponential")(np.nan)


def test_bad_parameters():
    with pytest.raises(ValueError):
        make_builtin("p_power", p=1.5)
    with pytest.raises(ValueError):
        make_builtin("p_power")
    with pytest.raises(ValueError):
        make_builtin("born_infeld", eps=2)
    with pytest.raises(ValueError):
        make_builtin("cosh")


@pytest.mark.parametrize("p", [2, 2.5, 3, 4, 6])
def test_degree_power(p):
    f = make_builtin("p_power", p=p)
    assert degree_analytic(f) == (p - 2) / 2
    assert degree_numeric(f) == pytest.approx((p - 2) / 2, abs=1e-6)


def test_degree_other_families():
    for family, kw, d in [("identity", {}, 0.0), ("born_infeld", {"eps": 1}, 0.0),
                          ("born_infeld", {"eps": -1}, INFINITE), ("exponential", {}, INFINITE)]:
        f = make_builtin(family, **kw)
        assert degree_analytic(f) == d
        assert degree_numeric(f) == pytest.approx(d, abs=1e-6) if d == 0 else degree_numeric(f) == d


def test_degree_grid_stays_inside_domain():
    f = make_builtin("born_infeld", eps=-1)
    t = degree_grid(f)
    assert t.min() > 0 and t.max() < 0.5
    assert 0.5 - t.max() < 1e-8


def test_custom_profile():
    f = make_custom("cubic", lambda t: t + t ** 3, lambda t: 1 + 3 * t ** 2, lambda t: 6 * t)
    # t F''/F' = 6t^2/(1+3t^2) rises towards 2 without reaching it
    assert degree_numeric(f) == pytest.approx(2.0, abs=1e-3)
    with pytest.raises(ValueError):
        degree_analytic(f)
    with pytest.raises(ValueError):
        make_custom("bad", lambda t: t ** 2, lambda t: 3 * t, lambda t: 2 + 0 * t)
    with pytest.raises(ValueError):
        make_custom("decreasing", lambda t: -t, lambda t: -1 + 0 * t, lambda t: 0 * t)
