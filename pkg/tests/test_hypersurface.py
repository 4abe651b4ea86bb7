import json

import numpy as np
import pytest

from fymlab import oracles
from fymlab.hypersurface import (B_hypersurface_coefficients, B_sphere_reduction, ImmersionData,
                                 InfiniteDegreeError, gauss_curvature, load_immersion, scalar_invariants)
from fymlab.lie_algebra import su2, u1
from fymlab.pointwise_forms import PointForm


def test_gauss_equation_on_unit_sphere():
    n = 4
    C = gauss_curvature(ImmersionData.sphere(n))
    I = np.eye(n)
    expected = np.einsum("ik,jl->ijkl", I, I) - np.einsum("jk,il->ijkl", I, I)
    np.testing.assert_array_equal(C.R, expected)
    np.testing.assert_array_equal(C.Ric, (n - 1) * I)


def test_immersion_validation(tmp_path):
    with pytest.raises(ValueError):
        ImmersionData(np.arange(8.0).reshape(1, 2, 4))
    with pytest.raises(ValueError):
        ImmersionData(np.array([[[0.0, 1.0], [2.0, 0.0]]]))
    path = tmp_path / "imm.json"
    path.write_text(json.dumps({"lambdas": [1, 2, 3]}))
    assert load_immersion(path).n == 3
    path.write_text(json.dumps({"h": ImmersionData.sphere(2).h.tolist()}))
    assert load_immersion(path).N == 3


@pytest.mark.parametrize("n", range(2, 9))
@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_sphere_closed_forms(n, r, rng):
    phi = PointForm.random(2, n, su2(), rng)
    inv = scalar_invariants(ImmersionData.sphere(n, r), phi)
    q = inv.norm2
    assert inv.H_phi == pytest.approx(2 * n / r ** 2 * q, rel=1e-12)
    assert inv.h1_sq == pytest.approx(4 / r ** 2 * q ** 2, rel=1e-12)
    assert inv.h2 == pytest.approx(2 / r ** 2 * q, rel=1e-12)
    assert inv.h2p == pytest.approx(2 / r ** 2 * q, rel=1e-12)
    assert inv.H_phi - 2 * inv.Ric_phi + inv.R_phi == pytest.approx(-2 * (n - 4) * q / r ** 2, abs=1e-10 * q)


@pytest.mark.parametrize("n,N", [(2, 3), (3, 5), (4, 6), (5, 6)])
def test_invariants_match_full_sums(n, N, rng):
    imm = ImmersionData.random(n, N, rng)
    phi = PointForm.random(2, n, su2(), rng)
    inv = scalar_invariants(imm, phi, d=0.75)
    R_phi, Ric_phi, H_phi, h2, h2p = oracles.curvature_pairings(imm.h.tolist(), phi)
    for got, want in ((inv.R_phi, R_phi), (inv.Ric_phi, Ric_phi), (inv.H_phi, H_phi), (inv.h2, h2), (inv.h2p, h2p)):
        assert got == pytest.approx(want, rel=1e-11, abs=1e-11)
    assert inv.h2 == pytest.approx(0.5 * inv.R_phi, rel=1e-11, abs=1e-11)
    assert inv.h2p == pytest.approx(inv.H_phi - inv.Ric_phi, rel=1e-11, abs=1e-11)
    assert inv.B == pytest.approx(inv.B_alt, rel=1e-10)


def test_invariants_are_frame_independent(rng):
    imm = ImmersionData.random(4, 6, rng)
    phi = PointForm.random(2, 4, su2(), rng)
    Qt, _ = np.linalg.qr(rng.standard_normal((4, 4)))
    Qn, _ = np.linalg.qr(rng.standard_normal((2, 2)))
    a = scalar_invariants(imm, phi)
    b = scalar_invariants(imm.rotated(Qt, Qn), phi.rotated(Qt))
    for key in ("norm2", "R_phi", "Ric_phi", "H_phi", "h1_sq", "h2", "h2p"):
        assert getattr(b, key) == pytest.approx(getattr(a, key), rel=1e-10, abs=1e-10)


def test_B_reductions(rng):
    for n in (3, 5, 7):
        for r in (0.5, 2.0):
            phi = PointForm.random(2, n, su2(), rng)
            inv = scalar_invariants(ImmersionData.sphere(n, r), phi, d=1.5)
            assert inv.B == pytest.approx(B_sphere_reduction(n, 1 / r, 1.5, inv.norm2), rel=1e-12)
    lam = np.array([1.0, 2.0, 3.0])
    coef = B_hypersurface_coefficients(lam, 0.5)
    assert coef.shape == (3, 3, 3)
    assert coef[0, 1, 2] == pytest.approx(0.5 * 1 * 3 + 0.25 * (-6 * 1 + 2 * 1 * 2 + 2 * 1))
    np.testing.assert_allclose(B_hypersurface_coefficients(np.full(4, 2.0), 0.5)[0, 1, 0],
                               B_sphere_reduction(4, 2.0, 0.5))


def test_infinite_degree_and_shape_errors(rng):
    imm = ImmersionData.sphere(3)
    with pytest.raises(InfiniteDegreeError):
        scalar_invariants(imm, PointForm.random(2, 3, u1(), rng), d=float("inf"))
    with pytest.raises(ValueError):
        scalar_invariants(imm, PointForm.random(2, 4, u1(), rng))
