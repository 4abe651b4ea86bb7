"""Compact Lie algebras given by structure constants and an invariant metric.

Elements are coefficient vectors in a fixed basis ``b_1..b_dim``; every
operation broadcasts over leading axes, so a ``(..., dim)`` array is a
field of algebra elements.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class LieAlgebraSpec:
    """Structure constants ``c[i, j, k]`` with [b_i, b_j] = sum_k c[i, j, k] b_k
    and metric ``g[i, j] = <b_i, b_j>``."""

    name: str
    structure_constants: np.ndarray
    metric: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.structure_constants, dtype=float)
        g = np.asarray(self.metric, dtype=float)
        d = g.shape[0]
        if g.shape != (d, d) or c.shape != (d, d, d):
            raise AlgebraError(f"shape mismatch: constants {c.shape}, metric {g.shape}")
        if not np.allclose(g, g.T, atol=1e-14):
            raise AlgebraError("metric is not symmetric")
        if np.any(np.linalg.eigvalsh(g) <= 0):
            raise AlgebraError("metric is not positive definite")
        c.setflags(write=False)
        g.setflags(write=False)
        object.__setattr__(self, "structure_constants", c)
        object.__setattr__(self, "metric", g)

    @property
    def dim(self) -> int:
        return self.metric.shape[0]

    def basis(self, i: int) -> np.ndarray:
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def _check(self, *xs):
        for x in xs:
            if np.shape(x)[-1] != self.dim:
                raise AlgebraError(f"{self.name}: element of length {np.shape(x)[-1]}, expected {self.dim}")

    def bracket(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        self._check(a, b)
        return np.einsum("...i,...j,ijk->...k", a, b, self.structure_constants)

    def inner(self, a, b):
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        self._check(a, b)
        return np.einsum("...i,ij,...j->...", a, self.metric, b)

    def invariant_residuals(self) -> dict:
        """Largest violation of antisymmetry, Jacobi and Ad-invariance over basis triples."""
        c, g = self.structure_constants, self.metric
        antisym = np.max(np.abs(c + c.transpose(1, 0, 2)), initial=0.0)
        # [[b_i, b_j], b_k] + cyclic
        jac = (np.einsum("ijm,mkn->ijkn", c, c)
               + np.einsum("jkm,min->ijkn", c, c)
               + np.einsum("kim,mjn->ijkn", c, c))
        # <[b_i, b_j], b_k> + <b_j, [b_i, b_k]>
        cg = np.einsum("ijm,mk->ijk", c, g)
        adinv = cg + cg.transpose(0, 2, 1)
        return {
            "antisymmetry": float(antisym),
            "jacobi": float(np.max(np.abs(jac), initial=0.0)),
            "ad_invariance": float(np.max(np.abs(adinv), initial=0.0)),
        }

    def validate(self, tol: float = 1e-12) -> "LieAlgebraSpec":
        bad = {k: v for k, v in self.invariant_residuals().items() if v > tol}
        if bad:
            raise AlgebraError(f"{self.name}: invariants violated {bad}")
        return self

    def random_element(self, rng, scale=1.0, size=()):
        size = (size,) if isinstance(size, int) else tuple(size)
        return scale * rng.standard_normal(size + (self.dim,))


def u1() -> LieAlgebraSpec:
    return LieAlgebraSpec("u1", np.zeros((1, 1, 1)), np.eye(1))


def su2() -> LieAlgebraSpec:
    """su(2) in an orthonormal basis with [b_1, b_2] = b_3 and cyclic."""
    c = np.zeros((3, 3, 3))
    for i, j, k in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        c[i, j, k] = 1.0
        c[j, i, k] = -1.0
    return LieAlgebraSpec("su2", c, np.eye(3))


_BUILTINS = {"u1": u1, "su2": su2}


def get_algebra(name: str) -> LieAlgebraSpec:
    """Algebra by name (``u1``, ``su2``) or by path to a JSON description."""
    if name in _BUILTINS:
        return _BUILTINS[name]()
    path = Path(name)
    if path.suffix == ".json" and path.exists():
        return load_algebra(path)
    raise AlgebraError(f"unknown algebra {name!r}")


def load_algebra(path) -> LieAlgebraSpec:
    """Read ``{"dim": d, "structure_constants": ..., "metric": ...}``.

    ``structure_constants`` is either a dense d x d x d nested list or a
    list of ``[i, j, k, value]`` entries (0-based) for the nonzero c^k_ij
    with i < j; the antisymmetric partners are filled in.  ``metric``
    defaults to the identity.
    """
    data = json.loads(Path(path).read_text())
    d = int(data["dim"])
    raw = data.get("structure_constants", [])
    c = np.zeros((d, d, d))
    if raw and np.ndim(raw) == 3:
        c = np.asarray(raw, dtype=float)
    else:
        for i, j, k, v in raw:
            c[i, j, k] = v
            c[j, i, k] = -v
    g = np.asarray(data.get("metric", np.eye(d)), dtype=float)
    return LieAlgebraSpec(data.get("name", Path(path).stem), c, g).validate()
