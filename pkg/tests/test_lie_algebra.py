import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from fymlab.identities import corrupted_su2
from fymlab.lie_algebra import AlgebraError, LieAlgebraSpec, get_algebra, load_algebra, su2, u1

vec3 = arrays(np.float64, 3, elements=st.floats(-10, 10))


def test_su2_brackets():
    g = su2()
    b = [g.basis(i) for i in range(3)]
    np.testing.assert_array_equal(g.bracket(b[0], b[1]), b[2])
    np.testing.assert_array_equal(g.bracket(b[1], b[2]), b[0])
    np.testing.assert_array_equal(g.bracket(b[2], b[0]), b[1])
    assert g.dim == 3


def test_u1_is_abelian(rng):
    g = u1()
    x, y = g.random_element(rng, size=5), g.random_element(rng, size=5)
    np.testing.assert_array_equal(g.bracket(x, y), 0.0)
    assert g.inner(x[0], x[0]) == x[0, 0] ** 2


@pytest.mark.parametrize("make", [u1, su2])
def test_invariants_hold(make):
    res = make().invariant_residuals()
    assert max(res.values()) < 1e-12
    make().validate()


@settings(max_examples=100, deadline=None)
@given(x=vec3, y=vec3, z=vec3)
def test_cyclic_ad_invariance(x, y, z):
    g = su2()
    lhs, rhs = g.inner(g.bracket(x, y), z), g.inner(x, g.bracket(y, z))
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs)) * 1e3
    assert abs(g.inner(x, g.bracket(x, y))) <= 1e-9 * max(1.0, np.dot(x, x) * np.linalg.norm(y))


def test_bracket_broadcasts(rng):
    g = su2()
    x = g.random_element(rng, size=(4, 2))
    y = g.random_element(rng)
    out = g.bracket(x, y)
    assert out.shape == (4, 2, 3)
    np.testing.assert_allclose(out[1, 1], np.cross(x[1, 1], y))


def test_corrupted_algebra_fails_validation():
    bad = corrupted_su2()
    assert bad.invariant_residuals()["ad_invariance"] > 0.05
    with pytest.raises(AlgebraError):
        bad.validate()


def test_constructor_rejects_bad_metric():
    with pytest.raises(AlgebraError):
        LieAlgebraSpec("x", np.zeros((2, 2, 2)), np.array([[1.0, 0.0], [0.0, -1.0]]))
    with pytest.raises(AlgebraError):
        LieAlgebraSpec("x", np.zeros((2, 2, 2)), np.eye(3))
    with pytest.raises(AlgebraError):
        su2().bracket(np.ones(2), np.ones(3))


def test_load_from_json(tmp_path):
    sparse = tmp_path / "so3.json"
    sparse.write_text(json.dumps({"dim": 3, "structure_constants": [[0, 1, 2, 1], [1, 2, 0, 1], [2, 0, 1, 1]]}))
    g = load_algebra(sparse)
    np.testing.assert_array_equal(g.structure_constants, su2().structure_constants)
    dense = tmp_path / "dense.json"
    dense.write_text(json.dumps({"dim": 3, "structure_constants": su2().structure_constants.tolist(),
                                 "metric": np.eye(3).tolist(), "name": "su2copy"}))
    assert get_algebra(str(dense)).name == "su2copy"
    broken = tmp_path / "broken.json"
    broken.write_text(json.dumps({"dim": 3, "structure_constants": [[0, 1, 2, 1.1], [1, 2, 0, 1], [2, 0, 1, 1]]}))
    with pytest.raises(AlgebraError):
        load_algebra(broken)
    with pytest.raises(AlgebraError):
        get_algebra("so5")
