"""Algebra-valued k-forms at a point (k <= 2) over an orthonormal frame.

A form is stored over strictly increasing index tuples; ``dense()`` gives
the full antisymmetric table with shape ``(n,)*k + (dim,)``.  Inner
products carry the 1/k! normalisation, so for a 2-form
``|phi|^2 = (1/2) sum_{i,j} <phi_ij, phi_ij>``.

The ``*_dense`` kernels act on dense tables and broadcast over leading
batch axes; the mesh code calls them face-wise.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import factorial

import numpy as np

from fymlab.lie_algebra import LieAlgebraSpec


class FormShapeError(ValueError):
    pass


def _tuples(n, k):
    return list(combinations(range(n), k))


@dataclass(frozen=True, eq=False)
class PointForm:
    degree: int
    n: int
    comps: np.ndarray  # (C(n, k), dim)
    alg: LieAlgebraSpec

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise FormShapeError(f"degree {self.degree} not supported")
        comps = np.asarray(self.comps, dtype=float)
        expected = (len(_tuples(self.n, self.degree)), self.alg.dim)
        if comps.shape != expected:
            raise FormShapeError(f"components have shape {comps.shape}, expected {expected}")
        object.__setattr__(self, "comps", comps)

    @classmethod
    def zeros(cls, degree, n, alg):
        return cls(degree, n, np.zeros((len(_tuples(n, degree)), alg.dim)), alg)

    @classmethod
    def random(cls, degree, n, alg, rng, scale=1.0):
        return cls(degree, n, scale * rng.standard_normal((len(_tuples(n, degree)), alg.dim)), alg)

    @classmethod
    def from_dense(cls, table, alg, atol=1e-12):
        table = np.asarray(table, dtype=float)
        k = table.ndim - 1
        n = table.shape[0] if k else 0
        if k == 2 and not np.allclose(table, -table.transpose(1, 0, 2), atol=atol):
            raise FormShapeError("2-form table is not antisymmetric")
        comps = np.array([table[idx] for idx in _tuples(n, k)]).reshape(-1, alg.dim)
        return cls(k, n, comps, alg)

    def component(self, *idx) -> np.ndarray:
        """Signed access by an arbitrary ordered index tuple."""
        if len(idx) != self.degree:
            raise FormShapeError(f"need {self.degree} indices, got {len(idx)}")
        if len(set(idx)) < len(idx):
            return np.zeros(self.alg.dim)
        order = sorted(range(len(idx)), key=lambda a: idx[a])
        sign = _perm_sign(order)
        pos = _tuples(self.n, self.degree).index(tuple(sorted(idx)))
        return sign * self.comps[pos]

    def dense(self) -> np.ndarray:
        out = np.zeros((self.n,) * self.degree + (self.alg.dim,))
        for c, idx in zip(self.comps, _tuples(self.n, self.degree)):
            if self.degree == 2:
                i, j = idx
                out[i, j] = c
                out[j, i] = -c
            else:
                out[idx] = c
        return out

    def __add__(self, other):
        _same(self, other)
        return PointForm(self.degree, self.n, self.comps + other.comps, self.alg)

    def __sub__(self, other):
        _same(self, other)
        return PointForm(self.degree, self.n, self.comps - other.comps, self.alg)

    def __mul__(self, s):
        return PointForm(self.degree, self.n, s * self.comps, self.alg)

    __rmul__ = __mul__

    def rotated(self, Q) -> "PointForm":
        """Components in the frame e'_a = sum_b Q[a, b] e_b."""
        t = self.dense()
        if self.degree == 1:
            t = np.einsum("ai,i...->a...", Q, t)
        elif self.degree == 2:
            t = np.einsum("ai,bj,ij...->ab...", Q, Q, t)
        return PointForm.from_dense(t, self.alg)


def _perm_sign(order):
    sign, seen = 1, list(order)
    for i in range(len(seen)):
        while seen[i] != i:
            j = seen[i]
            seen[i], seen[j] = seen[j], seen[i]
            sign = -sign
    return sign


def _same(a, b, degree=None):
    if a.n != b.n or a.alg.dim != b.alg.dim:
        raise FormShapeError(f"frame/algebra mismatch: n={a.n},{b.n} dim={a.alg.dim},{b.alg.dim}")
    if degree is not None and (a.degree, b.degree) != degree:
        raise FormShapeError(f"expected degrees {degree}, got {(a.degree, b.degree)}")
    if degree is None and a.degree != b.degree:
        raise FormShapeError(f"degree mismatch {a.degree} vs {b.degree}")


# ---- dense kernels -----------------------------------------------------------

def inner_dense(phi, psi, k, alg):
    pair = alg.inner(phi, psi)
    if k:
        pair = pair.sum(axis=tuple(range(-k, 0)))
    return pair / factorial(k)


def interior_dense(V, phi):
    """(i_V phi)_i = sum_k V^k phi_{k i}; V broadcasts against phi's batch axes."""
    return np.einsum("...k,...kid->...id", V, phi)


def bracket_wedge_dense(alpha, beta, alg):
    """[alpha ^ beta]_{ij} = [alpha_i, beta_j] - [alpha_j, beta_i]."""
    a = alpha[..., :, None, :]
    b = beta[..., None, :, :]
    t = alg.bracket(a, b)
    return t - np.swapaxes(t, -2, -3)


def weitzenbock1_dense(alpha, R, alg):
    """r(alpha)_i = sum_j [R_{ji}, alpha_j]."""
    return alg.bracket(R, alpha[..., :, None, :]).sum(axis=-3)


def weitzenbock2_dense(phi, R, alg):
    """r(phi)_{xy} = sum_j [R_{jx}, phi_{jy}] - [R_{jy}, phi_{jx}]."""
    t = alg.bracket(R[..., :, :, None, :], phi[..., :, None, :, :]).sum(axis=-4)
    return t - np.swapaxes(t, -2, -3)


# ---- point forms -------------------------------------------------------------

def inner_forms(phi: PointForm, psi: PointForm) -> float:
    _same(phi, psi)
    return float(inner_dense(phi.dense(), psi.dense(), phi.degree, phi.alg))


def norm2(phi: PointForm) -> float:
    return inner_forms(phi, phi)


def interior(V, phi: PointForm) -> PointForm:
    V = np.asarray(V, dtype=float)
    if phi.degree != 2 or V.shape != (phi.n,):
        raise FormShapeError(f"need a length-{phi.n} vector and a 2-form")
    return PointForm.from_dense(interior_dense(V, phi.dense()), phi.alg)


def bracket_wedge(alpha: PointForm, beta: PointForm) -> PointForm:
    _same(alpha, beta, (1, 1))
    return PointForm.from_dense(bracket_wedge_dense(alpha.dense(), beta.dense(), alpha.alg), alpha.alg)


def weitzenbock_1(alpha: PointForm, R: PointForm) -> PointForm:
    _same(alpha, R, (1, 2))
    return PointForm.from_dense(weitzenbock1_dense(alpha.dense(), R.dense(), alpha.alg), alpha.alg)


def weitzenbock_2(phi: PointForm, R: PointForm) -> PointForm:
    _same(phi, R, (2, 2))
    return PointForm.from_dense(weitzenbock2_dense(phi.dense(), R.dense(), phi.alg), phi.alg)


# ---- Riemannian curvature data and End-valued 2-forms ------------------------

@dataclass(frozen=True, eq=False)
class CurvatureTensorData:
    """R[i, j, k, l] with R(e_k, e_l) e_j = sum_i R[i, j, k, l] e_i, and
    Ric[i, k] = sum_l R[l, k, l, i]."""

    R: np.ndarray
    Ric: np.ndarray

    @classmethod
    def from_riemann(cls, R):
        R = np.asarray(R, dtype=float)
        return cls(R, np.einsum("lkli->ik", R))

    @property
    def n(self):
        return self.R.shape[0]

    def symmetry_residual(self) -> float:
        R = self.R
        return float(max(
            np.max(np.abs(R + R.transpose(1, 0, 2, 3)), initial=0.0),
            np.max(np.abs(R + R.transpose(0, 1, 3, 2)), initial=0.0),
            np.max(np.abs(R - R.transpose(2, 3, 0, 1)), initial=0.0),
            np.max(np.abs(self.Ric - np.einsum("lkli->ik", R)), initial=0.0),
        ))

    def validate(self, tol=1e-12):
        n = self.R.shape[0]
        if self.R.shape != (n,) * 4 or self.Ric.shape != (n, n):
            raise FormShapeError(f"bad curvature shapes {self.R.shape}, {self.Ric.shape}")
        res = self.symmetry_residual()
        if res > tol:
            raise FormShapeError(f"curvature symmetries violated by {res:.3e}")
        return self


@dataclass(frozen=True, eq=False)
class TwoFormEndo:
    """W[i, j] is the matrix of omega_{e_i, e_j}: omega_ij(e_a) = sum_b W[i, j, b, a] e_b."""

    W: np.ndarray

    @property
    def n(self):
        return self.W.shape[0]

    def antisymmetry_residual(self) -> float:
        return float(np.max(np.abs(self.W + self.W.transpose(1, 0, 2, 3)), initial=0.0))


def compose_omega(phi: PointForm, omega: TwoFormEndo) -> PointForm:
    """(phi o omega)_{xy} = (1/2) sum_a phi_{a, omega_xy(e_a)}."""
    if phi.degree != 2 or omega.W.shape != (phi.n,) * 4:
        raise FormShapeError("compose_omega needs a 2-form and a matching TwoFormEndo")
    t = 0.5 * np.einsum("xyba,abd->xyd", omega.W, phi.dense())
    return PointForm.from_dense(t, phi.alg)


def wedge_endo(X, Y) -> np.ndarray:
    """Matrix of (X ^ Y)(Z) = <X, Z> Y - <Y, Z> X, indexed [out, in]."""
    return np.outer(Y, X) - np.outer(X, Y)


def ric_wedge_I_plus_2R(C: CurvatureTensorData) -> TwoFormEndo:
    """Ric ^ I + 2R, with (Ric ^ I)_{X,Y} = Ric(X) ^ Y + X ^ Ric(Y)."""
    C.validate(tol=1e-9)
    n = C.n
    eye = np.eye(n)
    W = np.zeros((n, n, n, n))
    for i in range(n):
        for j in range(n):
            W[i, j] = wedge_endo(C.Ric[i], eye[j]) + wedge_endo(eye[i], C.Ric[j])
    W += 2.0 * C.R.transpose(2, 3, 0, 1)
    return TwoFormEndo(W)
