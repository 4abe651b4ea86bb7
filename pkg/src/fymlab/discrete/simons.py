"""Test variations i_{V_A} phi built from the ambient coordinate frame, and the
index-sum experiment comparing sum_A I(alpha_A) with its curvature formula.
"""

from __future__ import annotations

import math

import numpy as np

from fymlab.f_family import FFunction
from fymlab.hypersurface import ImmersionData, scalar_invariants
from fymlab.pointwise_forms import PointForm, interior_dense, inner_dense
from fymlab.discrete.gauge import (DiscreteConnection, DiscreteForm, as_dense2, cov_delta, curvature,
                                   density, index_form, pairing, _evaluate)
from fymlab.discrete.mesh import MeshComplex, ambient_frame_fields


def face_interiors(phi: DiscreteForm, mesh: MeshComplex) -> np.ndarray:
    """i_{V_A} phi per face in face coordinates, shape (N, F, 2, dim)."""
    if phi.degree != 2:
        raise ValueError("simons fields need a 2-form")
    v = ambient_frame_fields(mesh)
    dense = as_dense2(density(phi, mesh))
    return np.stack([interior_dense(v[:, A, :2], dense) for A in range(v.shape[1])])


def simons_fields(phi: DiscreteForm, mesh: MeshComplex) -> list[DiscreteForm]:
    """alpha_A = i_{V_A} phi, transferred to edges by area-weighted averaging.

    Each incident face contributes the line integral of its constant
    1-form along the stored edge vector.
    """
    if mesh.face_frames is None:
        raise ValueError("mesh has no embedding frames")
    out = []
    for loc in face_interiors(phi, mesh):
        amb = np.einsum("fid,fin->fnd", loc, mesh.face_frames)
        along = np.einsum("fnd,fan->fad", amb, mesh.face_edge_vectors)
        acc = np.zeros((mesh.n_edges, loc.shape[-1]))
        np.add.at(acc, mesh.face_edges, mesh.face_areas[:, None, None] * along)
        out.append(DiscreteForm(1, acc / mesh.edge_face_area[:, None]))
    return out


def norm_identity_residual(phi: DiscreteForm, mesh: MeshComplex, alg) -> float:
    """max_f |sum_A |i_{V_A} phi|^2 - 2 |phi|^2| per face."""
    loc = face_interiors(phi, mesh)
    lhs = inner_dense(loc, loc, 1, alg).sum(axis=0)
    dense = as_dense2(density(phi, mesh))
    return float(np.max(np.abs(lhs - 2.0 * inner_dense(dense, dense, 2, alg)), initial=0.0))


def index_sum_check(conn: DiscreteConnection, mesh: MeshComplex, f: FFunction) -> dict:
    """Compare sum_A I_phi(alpha_A) with the quadrature of
    F'' <h1, h1> + F' (H - 2 Ric + R)(phi, phi), for phi = curvature(conn).
    """
    if mesh.face_h is None:
        raise ValueError("index sum needs second-fundamental-form data on the mesh")
    alg = conn.alg
    phi = curvature(conn, mesh)
    terms = [index_form(phi, conn, mesh, f, a) for a in simons_fields(phi, mesh)]
    lhs = math.fsum(terms)

    phi_d = density(phi, mesh)
    rhs_face = np.zeros(mesh.n_faces)
    for k in range(mesh.n_faces):
        inv = scalar_invariants(ImmersionData(mesh.face_h[k]), PointForm(2, 2, phi_d[k:k + 1], alg))
        t = 0.5 * inv.norm2
        rhs_face[k] = (_evaluate(f, np.array([t]), "F2")[0] * inv.h1_sq
                       + _evaluate(f, np.array([t]), "F1")[0] * (inv.H_phi - 2.0 * inv.Ric_phi + inv.R_phi))
    rhs = math.fsum(rhs_face * mesh.face_areas)

    t = 0.5 * alg.inner(phi_d, phi_d)
    G = cov_delta(DiscreteForm(2, _evaluate(f, t, "F1")[:, None] * phi.values), conn, mesh)
    scale = max(abs(lhs), abs(rhs))
    return {
        "lhs": lhs,
        "rhs": rhs,
        "rel_gap": abs(lhs - rhs) / scale if scale > 0 else 0.0,
        "per_field": terms,
        "harmonicity_residual": math.sqrt(pairing(G, G, mesh, alg)),
        "n_faces": mesh.n_faces,
    }
