"""Gauss-equation curvature of an immersion M^n -> R^N and the quadratic
invariants of a 2-form that enter the index-sum formula.

All invariants are literal full-index sums over the Gram table
``G[i, j, k, l] = <phi_ij, phi_kl>``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fymlab.pointwise_forms import CurvatureTensorData, PointForm


class InfiniteDegreeError(ValueError):
    """A finite degree d_{F'} is required but the profile has infinite degree."""


@dataclass(frozen=True, eq=False)
class ImmersionData:
    """Second fundamental form ``h[mu, i, j]`` (normal index first, mu = 0..N-n-1)."""

    h: np.ndarray

    def __post_init__(self):
        h = np.asarray(self.h, dtype=float)
        if h.ndim != 3 or h.shape[1] != h.shape[2] or h.shape[0] < 1:
            raise ValueError(f"h must have shape (N - n, n, n), got {h.shape}")
        if not np.allclose(h, h.transpose(0, 2, 1), atol=1e-12):
            raise ValueError("second fundamental form is not symmetric")
        object.__setattr__(self, "h", h)

    @property
    def n(self) -> int:
        return self.h.shape[1]

    @property
    def N(self) -> int:
        return self.n + self.h.shape[0]

    @property
    def mean_curvature(self) -> np.ndarray:
        """H^mu = sum_m h^mu_mm (unnormalised trace)."""
        return np.einsum("umm->u", self.h)

    @classmethod
    def hypersurface(cls, lambdas):
        lam = np.asarray(lambdas, dtype=float)
        return cls(np.diag(lam)[None])

    @classmethod
    def sphere(cls, n, r=1.0):
        return cls.hypersurface(np.full(n, 1.0 / r))

    @classmethod
    def random(cls, n, N, rng, scale=1.0):
        a = scale * rng.standard_normal((N - n, n, n))
        return cls(0.5 * (a + a.transpose(0, 2, 1)))

    def rotated(self, Q_tan=None, Q_norm=None) -> "ImmersionData":
        """Same immersion seen in rotated tangent/normal frames (rows = new frame vectors)."""
        Qt = np.eye(self.n) if Q_tan is None else Q_tan
        Qn = np.eye(self.N - self.n) if Q_norm is None else Q_norm
        return ImmersionData(np.einsum("uv,ia,jb,vab->uij", Qn, Qt, Qt, self.h))


def load_immersion(path) -> ImmersionData:
    """JSON with either ``{"lambdas": [...]}`` or ``{"h": [[[...]]]}``."""
    data = json.loads(Path(path).read_text())
    if "lambdas" in data:
        return ImmersionData.hypersurface(data["lambdas"])
    return ImmersionData(np.asarray(data["h"], dtype=float))


def gauss_curvature(imm: ImmersionData) -> CurvatureTensorData:
    h = imm.h
    R = np.einsum("uik,ujl->ijkl", h, h) - np.einsum("ujk,uil->ijkl", h, h)
    Ric = np.einsum("u,uik->ik", imm.mean_curvature, h) - np.einsum("uim,umk->ik", h, h)
    return CurvatureTensorData(R, Ric)


@dataclass(frozen=True)
class ScalarInvariants:
    norm2: float
    R_phi: float
    Ric_phi: float
    H_phi: float
    h1: tuple
    h1_sq: float
    h2: float
    h2p: float
    B: float | None = None
    B_alt: float | None = None

    def as_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


def gram(phi: PointForm) -> np.ndarray:
    t = phi.dense()
    return np.einsum("ija,ab,klb->ijkl", t, phi.alg.metric, t)


def scalar_invariants(imm: ImmersionData, phi: PointForm, d: float | None = None,
                      rtol: float = 1e-10) -> ScalarInvariants:
    """R, Ric, H, h_1, h_2, h_2' of ``phi`` and, when ``d`` is given, B(phi, phi).

    B is evaluated through both of its expressions (via R and Ric, and via
    h_2 and h_2'); a disagreement beyond ``rtol`` raises ``ArithmeticError``.
    """
    if phi.degree != 2 or phi.n != imm.n:
        raise ValueError(f"need a 2-form on an {imm.n}-frame")
    if d is not None and math.isinf(d):
        raise InfiniteDegreeError("B(phi, phi) needs a finite degree")
    G = gram(phi)
    h = imm.h
    C = gauss_curvature(imm)
    eye = np.eye(imm.n)
    norm2 = 0.5 * float(np.einsum("ijij->", G))
    R_phi = float(np.einsum("ijkl,ijkl->", C.R, G))
    Ric_phi = float(np.einsum("ik,jl,ijkl->", C.Ric, eye, G))
    H_phi = float(np.einsum("u,uik,jl,ijkl->", imm.mean_curvature, h, eye, G))
    h1 = np.einsum("uik,jl,ijkl->u", h, eye, G)
    h2 = float(np.einsum("uik,ulj,ijkl->", h, h, G))
    h2p = float(np.einsum("umk,umi,jl,ijkl->", h, h, eye, G))
    h1_sq = float(h1 @ h1)
    B = B_alt = None
    if d is not None:
        B = d * h1_sq + 0.5 * norm2 * (H_phi - 2.0 * Ric_phi + R_phi)
        B_alt = d * h1_sq + 0.5 * norm2 * (-H_phi + 2.0 * (h2 + h2p))
        scale = max(1.0, abs(d * h1_sq), 0.5 * norm2 * (abs(H_phi) + 2 * abs(Ric_phi) + abs(R_phi)))
        if abs(B - B_alt) > rtol * scale:
            raise ArithmeticError(f"B expressions disagree: {B!r} vs {B_alt!r}")
    return ScalarInvariants(norm2, R_phi, Ric_phi, H_phi, tuple(float(x) for x in h1), h1_sq,
                            h2, h2p, B, B_alt)


def B_sphere_reduction(n: int, lam: float, d: float, phi_norm2: float | None = None) -> float:
    """Coefficient B_{iji'} for equal principal curvatures ``lam``.

    With ``phi_norm2`` the full B(phi, phi) = 4 B_{iji'} |phi|^4 is returned.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    coef = d * lam ** 2 + (lam ** 2 / 4.0) * (-n + 4)
    if phi_norm2 is None:
        return coef
    return 4.0 * coef * phi_norm2 ** 2


def B_hypersurface_coefficients(lambdas, d: float) -> np.ndarray:
    """B_{i j i'} for a hypersurface with principal curvatures ``lambdas``."""
    lam = np.asarray(lambdas, dtype=float)
    s = lam.sum()
    return (d * lam[:, None, None] * lam[None, None, :]
            + 0.25 * (-s * lam[:, None, None] + 2 * lam[:, None, None] * lam[None, :, None]
                      + 2 * lam[:, None, None] ** 2))
