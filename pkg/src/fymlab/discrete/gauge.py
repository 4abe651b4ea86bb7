"""Algebra-valued connections on surface meshes.

A connection is ``d + A`` with ``A`` an integrated 1-cochain (one algebra
element per stored edge) plus an optional fixed 2-cochain ``background``
that carries the topological sector (for the monopole, a Dirac string of
flux 2 pi k through one face).  Curvature, integrated over a face, is

    R_f = (d1 A)_f + background_f + area_f [a_1, a_2],

where ``a`` is the constant 1-form on the face reconstructed from its
boundary edge values by least squares.  ``cov_d`` on 1-forms is exactly
the derivative of this map, and ``cov_delta`` is its transpose under the
diagonal Hodge pairings, so the analytic first and second variations are
exact derivatives of the discrete functional.

Pointwise quantities (|R|^2, F'(|R|^2/2), ...) use densities, i.e.
integrated face values divided by the face area.  Global sums go through
``math.fsum`` so results do not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from fymlab.f_family import DomainError, FFunction
from fymlab.lie_algebra import LieAlgebraSpec, u1
from fymlab.pointwise_forms import inner_dense, weitzenbock1_dense
from fymlab.discrete.mesh import MeshComplex


@dataclass(frozen=True, eq=False)
class DiscreteForm:
    """Integrated k-cochain, one algebra element per oriented k-cell."""

    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ValueError(f"degree {self.degree} not supported")
        object.__setattr__(self, "values", np.asarray(self.values, dtype=float))

    def __add__(self, other):
        _match(self, other)
        return DiscreteForm(self.degree, self.values + other.values)

    def __sub__(self, other):
        _match(self, other)
        return DiscreteForm(self.degree, self.values - other.values)

    def __mul__(self, s):
        return DiscreteForm(self.degree, s * self.values)

    __rmul__ = __mul__

    def __neg__(self):
        return DiscreteForm(self.degree, -self.values)


def _match(a, b):
    if a.degree != b.degree or a.values.shape != b.values.shape:
        raise ValueError(f"cochain mismatch: degree {a.degree}/{b.degree}, shape {a.values.shape}/{b.values.shape}")


def zero_form(mesh, alg, degree):
    size = (mesh.n_vertices, mesh.n_edges, mesh.n_faces)[degree]
    return DiscreteForm(degree, np.zeros((size, alg.dim)))


def random_form(mesh, alg, degree, rng, scale=1.0):
    """Random cochain whose pointwise size is about ``scale``.

    Edge values are scaled by mean area / sqrt(edges per face) so that
    ``d1 alpha / area`` is O(scale); face values by the mean area.
    """
    size = (mesh.n_vertices, mesh.n_edges, mesh.n_faces)[degree]
    area = np.mean(mesh.face_areas)
    unit = (1.0, area / math.sqrt(mesh.faces.shape[1]), area)[degree]
    return DiscreteForm(degree, scale * unit * rng.standard_normal((size, alg.dim)))


@dataclass(frozen=True, eq=False)
class DiscreteConnection:
    alg: LieAlgebraSpec
    A: DiscreteForm
    background: np.ndarray | None = None

    def __post_init__(self):
        if self.A.degree != 1 or self.A.values.shape[1] != self.alg.dim:
            raise ValueError("connection needs an algebra-valued 1-cochain")

    def shifted(self, alpha: DiscreteForm, t: float = 1.0) -> "DiscreteConnection":
        return DiscreteConnection(self.alg, DiscreteForm(1, self.A.values + t * alpha.values), self.background)

    @classmethod
    def flat(cls, mesh, alg):
        return cls(alg, zero_form(mesh, alg, 1))

    @classmethod
    def random(cls, mesh, alg, rng, scale=1.0):
        return cls(alg, random_form(mesh, alg, 1, rng, scale))


def random_connection(mesh, alg, rng, scale=1.0, f: FFunction | None = None, margin=0.5):
    """Random connection; with a profile ``f`` it is halved until |R|^2/2 < margin * c on every face."""
    conn = DiscreteConnection.random(mesh, alg, rng, scale)
    if f is None or math.isinf(f.domain_bound):
        return conn
    for _ in range(60):
        if np.all(half_norm2(conn, mesh) < margin * f.domain_bound):
            return conn
        conn = DiscreteConnection(alg, 0.5 * conn.A)
    raise ValueError("could not place a random connection inside the domain")


def _check(conn, mesh, *forms):
    if conn.A.values.shape[0] != mesh.n_edges:
        raise ValueError(f"connection has {conn.A.values.shape[0]} edges, mesh has {mesh.n_edges}")
    sizes = (mesh.n_vertices, mesh.n_edges, mesh.n_faces)
    for f in forms:
        if f.values.shape != (sizes[f.degree], conn.alg.dim):
            raise ValueError(f"{f.degree}-form of shape {f.values.shape} does not fit the mesh/algebra")


def face_one_forms(values: np.ndarray, mesh: MeshComplex) -> np.ndarray:
    """Constant 1-form per face (F, 2, dim) fitted to the boundary edge values."""
    return np.einsum("fia,fad->fid", mesh.recon, values[mesh.face_edges])


def _ad_dual(a, phi, alg):
    """z with <[a, x], phi> = <x, z> for all x (metric transpose of ad_a)."""
    u = np.einsum("...i,ijk,kl,...l->...j", a, alg.structure_constants, alg.metric, phi)
    return np.linalg.solve(alg.metric, u[..., None])[..., 0] if alg.dim > 1 else u / alg.metric[0, 0]


def as_dense2(c):
    """(..., dim) single-component 2-forms on a 2-frame -> (..., 2, 2, dim)."""
    out = np.zeros(c.shape[:-1] + (2, 2, c.shape[-1]))
    out[..., 0, 1, :] = c
    out[..., 1, 0, :] = -c
    return out


def curvature(conn: DiscreteConnection, mesh: MeshComplex) -> DiscreteForm:
    _check(conn, mesh)
    a = face_one_forms(conn.A.values, mesh)
    R = mesh.d1 @ conn.A.values + mesh.face_areas[:, None] * conn.alg.bracket(a[:, 0], a[:, 1])
    if conn.background is not None:
        R = R + conn.background
    return DiscreteForm(2, R)


def density(form: DiscreteForm, mesh: MeshComplex) -> np.ndarray:
    """Pointwise component (F, dim) of an integrated 2-cochain."""
    if form.degree != 2:
        raise ValueError("density is defined for 2-cochains")
    return form.values / mesh.face_areas[:, None]


def charge(conn, mesh) -> np.ndarray:
    """Total curvature sum_f R_f."""
    R = curvature(conn, mesh).values
    return np.array([math.fsum(R[:, k]) for k in range(R.shape[1])])


def cov_d(alpha: DiscreteForm, conn: DiscreteConnection, mesh: MeshComplex) -> DiscreteForm:
    """d^A alpha = d alpha + [A ^ alpha] for 0- and 1-cochains."""
    _check(conn, mesh, alpha)
    alg = conn.alg
    if alpha.degree == 0:
        g = alpha.values
        mid = 0.5 * (g[mesh.edges[:, 0]] + g[mesh.edges[:, 1]])
        return DiscreteForm(1, mesh.d0 @ g + alg.bracket(conn.A.values, mid))
    if alpha.degree == 1:
        a = face_one_forms(conn.A.values, mesh)
        b = face_one_forms(alpha.values, mesh)
        wedge = alg.bracket(a[:, 0], b[:, 1]) - alg.bracket(a[:, 1], b[:, 0])
        return DiscreteForm(2, mesh.d1 @ alpha.values + mesh.face_areas[:, None] * wedge)
    raise ValueError("cov_d is not defined on 2-forms here (no 3-cells)")


def cov_delta(phi: DiscreteForm, conn: DiscreteConnection, mesh: MeshComplex) -> DiscreteForm:
    """Transpose of ``cov_d`` under the Hodge pairings, (d^A x, phi) = (x, delta^A phi)."""
    _check(conn, mesh, phi)
    alg = conn.alg
    if phi.degree == 2:
        psi = mesh.star2[:, None] * phi.values
        out = mesh.d1.T @ psi
        a = face_one_forms(conn.A.values, mesh)
        phi_d = phi.values * (mesh.star2 * mesh.face_areas)[:, None]
        z = np.stack([-_ad_dual(a[:, 1], phi_d, alg), _ad_dual(a[:, 0], phi_d, alg)], axis=1)  # (F, 2, dim)
        per_edge = np.einsum("fia,fid->fad", mesh.recon, z)
        np.add.at(out, mesh.face_edges, per_edge)
        return DiscreteForm(1, out / mesh.star1[:, None])
    if phi.degree == 1:
        psi = mesh.star1[:, None] * phi.values
        out = mesh.d0.T @ psi
        z = 0.5 * _ad_dual(conn.A.values, psi, alg)
        np.add.at(out, mesh.edges[:, 0], z)
        np.add.at(out, mesh.edges[:, 1], z)
        return DiscreteForm(0, out / mesh.star0[:, None])
    raise ValueError("cov_delta is not defined on 0-forms")


def pairing(x: DiscreteForm, y: DiscreteForm, mesh: MeshComplex, alg: LieAlgebraSpec) -> float:
    """Hodge inner product (x, y) of two cochains of equal degree."""
    _match(x, y)
    w = (mesh.star0, mesh.star1, mesh.star2)[x.degree]
    return math.fsum(w * alg.inner(x.values, y.values))


def half_norm2(conn, mesh):
    """t_f = |R_f|^2 / 2 per face, from the curvature density."""
    Rd = density(curvature(conn, mesh), mesh)
    return 0.5 * conn.alg.inner(Rd, Rd)


def _evaluate(f: FFunction, t, which="F"):
    try:
        return {"F": f, "F1": f.d1, "F2": f.d2}[which](t)
    except DomainError as err:
        raise DomainError(f"face {err.index}: |R|^2/2 = {err.value!r} outside the domain of {f.name}",
                          value=err.value, index=err.index) from None


def functional(conn: DiscreteConnection, mesh: MeshComplex, f: FFunction) -> float:
    """sum_f F(|R_f|^2 / 2) area_f."""
    t = half_norm2(conn, mesh)
    return math.fsum(_evaluate(f, t) * mesh.face_areas)


def gradient(conn: DiscreteConnection, mesh: MeshComplex, f: FFunction) -> DiscreteForm:
    """delta^A(F'(|R|^2/2) R), the Hodge-gradient of ``functional``."""
    R = curvature(conn, mesh)
    t = 0.5 * conn.alg.inner(density(R, mesh), density(R, mesh))
    return cov_delta(DiscreteForm(2, _evaluate(f, t, "F1")[:, None] * R.values), conn, mesh)


def first_variation_analytic(conn, mesh, f, alpha: DiscreteForm) -> float:
    return pairing(gradient(conn, mesh, f), alpha, mesh, conn.alg)


def first_variation_fd(conn, mesh, f, alpha: DiscreteForm, h: float = 1e-4) -> float:
    if h <= 0:
        raise ValueError("step must be positive")
    plus = functional(conn.shifted(alpha, h), mesh, f)
    minus = functional(conn.shifted(alpha, -h), mesh, f)
    return (plus - minus) / (2 * h)


def second_variation_fd(conn, mesh, f, alpha: DiscreteForm, h: float = 1e-3) -> float:
    """Central second difference of t -> functional(A + t alpha) at t = 0."""
    plus = functional(conn.shifted(alpha, h), mesh, f)
    mid = functional(conn, mesh, f)
    minus = functional(conn.shifted(alpha, -h), mesh, f)
    return (plus - 2 * mid + minus) / h ** 2


def index_form(phi: DiscreteForm, conn: DiscreteConnection, mesh: MeshComplex, f: FFunction,
               alpha: DiscreteForm, parts: bool = False):
    """I_phi(alpha) = sum_f area [F'' <d^A alpha, phi>^2 + F' (<r(alpha), alpha> + |d^A alpha|^2)].

    ``F'`` and ``F''`` are evaluated at |phi|^2/2; the Weitzenbock term
    brackets with the curvature of ``conn``.  With ``parts=True`` the
    three integrals are returned separately as well.
    """
    _check(conn, mesh, phi, alpha)
    alg = conn.alg
    phi_d = as_dense2(density(phi, mesh))
    dal = as_dense2(density(cov_d(alpha, conn, mesh), mesh))
    R = as_dense2(density(curvature(conn, mesh), mesh))
    ahat = face_one_forms(alpha.values, mesh)
    t = 0.5 * inner_dense(phi_d, phi_d, 2, alg)
    F1 = _evaluate(f, t, "F1")
    F2 = _evaluate(f, t, "F2")
    area = mesh.face_areas
    first = F2 * inner_dense(dal, phi_d, 2, alg) ** 2
    weitz = F1 * inner_dense(weitzenbock1_dense(ahat, R, alg), ahat, 1, alg)
    grad = F1 * inner_dense(dal, dal, 2, alg)
    terms = {k: math.fsum(v * area) for k, v in (("F2_term", first), ("weitzenbock_term", weitz),
                                                  ("dalpha_term", grad))}
    total = math.fsum(terms.values())
    return (total, terms) if parts else total


def _solve_min_norm(d1: sp.csr_matrix, b: np.ndarray) -> np.ndarray:
    """Minimum-norm least-squares solution of d1 x = b (columns of b solved jointly)."""
    L = (d1 @ d1.T).tocsc()
    keep = np.arange(1, L.shape[0])
    lu = spla.splu(L[keep][:, keep])
    y = np.zeros_like(b)
    y[keep] = lu.solve(b[keep])
    return d1.T @ y


def make_monopole(k: int, mesh: MeshComplex, alg: LieAlgebraSpec | None = None, direction=None,
                  string_face: int = 0) -> DiscreteConnection:
    """Charge-k monopole on an icosphere: uniform curvature density, total flux 2 pi k.

    The flux is prescribed as ``2 pi k area_f / total_area`` per face; a
    background Dirac string of flux 2 pi k through ``string_face`` makes the
    prescription exact, and the remaining equation d1 A = target - string
    is solved in the least-squares (minimum-norm) sense.  For a nonabelian
    ``alg`` the connection lies along ``direction`` (default: last basis
    element).
    """
    if mesh.kind != "icosphere":
        raise ValueError("make_monopole needs an icosphere mesh")
    alg = u1() if alg is None else alg
    e = np.asarray(direction, dtype=float) if direction is not None else alg.basis(alg.dim - 1)
    e = e / math.sqrt(alg.inner(e, e))
    flux = 2.0 * math.pi * k
    target = flux * mesh.face_areas / mesh.total_area
    string = np.zeros(mesh.n_faces)
    string[string_face] = flux
    rhs = target - string
    a = _solve_min_norm(mesh.d1, rhs[:, None])[:, 0]
    residual = np.max(np.abs(mesh.d1 @ a - rhs), initial=0.0)
    if residual > 1e-8 * max(1.0, abs(flux)):
        raise ArithmeticError(f"monopole solve residual {residual:.3e}")
    return DiscreteConnection(alg, DiscreteForm(1, np.outer(a, e)),
                              background=np.outer(string, e) if k else None)
