"""Embedded surface meshes with incidence matrices, diagonal Hodge stars and
per-face frames.

Conventions (used throughout ``fymlab.discrete``):

* edges are stored with their lower vertex index first; a 1-cochain value
  refers to that orientation,
* faces are vertex cycles; their orientation induces the tangent frame
  ``(e1, e2)`` with ``e1`` along the first boundary edge,
* cochains hold integrated values.  ``star1`` maps integrated edge values
  to dual values (dual length / primal length), ``star2 = 1 / area``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp


@dataclass(eq=False)
class MeshComplex:
    kind: str
    vertices: np.ndarray          # (V, N)
    edges: np.ndarray             # (E, 2)
    faces: np.ndarray             # (F, m)
    face_edges: np.ndarray        # (F, m) edge id of the boundary edge v_a -> v_{a+1}
    face_signs: np.ndarray        # (F, m) +1 if that edge is stored in traversal direction
    face_edge_vectors: np.ndarray  # (F, m, N) ambient vector of each boundary edge, stored orientation
    face_areas: np.ndarray
    face_frames: np.ndarray       # (F, 2, N) rows e1, e2
    face_normals: np.ndarray      # (F, N - 2, N) normal frame used with face_h
    edge_lengths: np.ndarray
    star0: np.ndarray
    star1: np.ndarray
    face_h: np.ndarray | None = None  # (F, N - 2, 2, 2)
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        V, E, F = len(self.vertices), len(self.edges), len(self.faces)
        m = self.faces.shape[1]
        rows = np.repeat(np.arange(E), 2)
        cols = self.edges.ravel()
        vals = np.tile([-1.0, 1.0], E)
        self.d0 = sp.csr_matrix((vals, (rows, cols)), shape=(E, V))
        self.d1 = sp.csr_matrix((self.face_signs.ravel().astype(float),
                                 (np.repeat(np.arange(F), m), self.face_edges.ravel())), shape=(F, E))
        self.star2 = 1.0 / self.face_areas
        T = np.einsum("fan,fin->fai", self.face_edge_vectors, self.face_frames)
        self.recon = np.linalg.pinv(T)  # (F, 2, m)
        w = np.zeros(E)
        np.add.at(w, self.face_edges, self.face_areas[:, None] * np.ones(m))
        self.edge_face_area = w

    @property
    def n_vertices(self):
        return len(self.vertices)

    @property
    def n_edges(self):
        return len(self.edges)

    @property
    def n_faces(self):
        return len(self.faces)

    @property
    def ambient_dim(self):
        return self.vertices.shape[1]

    @property
    def euler_characteristic(self):
        return self.n_vertices - self.n_edges + self.n_faces

    @property
    def total_area(self):
        return float(np.sum(self.face_areas))

    def describe(self):
        return {"kind": self.kind, "V": self.n_vertices, "E": self.n_edges, "F": self.n_faces, **self.params}

    def check(self, tol=1e-12):
        """Raise if incidence, weights or frames are inconsistent."""
        dd = abs(self.d1 @ self.d0).max()
        if dd != 0:
            raise ValueError(f"d1 d0 != 0 (max {dd})")
        for name in ("star0", "star1", "face_areas"):
            if np.any(getattr(self, name) <= 0):
                raise ValueError(f"nonpositive Hodge weight in {name}")
        full = np.concatenate([self.face_frames, self.face_normals], axis=1)
        err = np.max(np.abs(np.einsum("fan,fbn->fab", full, full) - np.eye(self.ambient_dim)))
        if err > tol:
            raise ValueError(f"face frames not orthonormal ({err:.2e})")
        return self


def _polygon_area(vecs):
    """Area of a planar polygon from its boundary traversal vectors (m, N)."""
    pts = np.cumsum(vecs, axis=0)
    return 0.5 * np.linalg.norm(np.cross(pts, np.roll(pts, -1, axis=0)).sum(axis=0))


def _assemble(kind, vertices, faces, edge_vector, outward=None, params=None):
    """Build edges, frames and weights of a surface in R^3; ``edge_vector(i, j)`` is p_j - p_i."""
    faces = np.asarray(faces, dtype=int)
    F, m = faces.shape
    index = {}
    edges = []
    face_edges = np.zeros((F, m), dtype=int)
    face_signs = np.zeros((F, m), dtype=int)
    for f, cyc in enumerate(faces):
        for a in range(m):
            i, j = int(cyc[a]), int(cyc[(a + 1) % m])
            key = (min(i, j), max(i, j))
            if key not in index:
                index[key] = len(edges)
                edges.append(key)
            face_edges[f, a] = index[key]
            face_signs[f, a] = 1 if i < j else -1
    edges = np.array(edges, dtype=int)
    evec = np.array([edge_vector(i, j) for i, j in edges])
    lengths = np.linalg.norm(evec, axis=1)
    fvec = evec[face_edges]                       # stored orientation
    trav = fvec * face_signs[:, :, None]          # traversal orientation
    areas = np.array([_polygon_area(t) for t in trav])

    e1 = trav[:, 0] / np.linalg.norm(trav[:, 0], axis=1)[:, None]
    nrm = np.cross(trav[:, 0], trav[:, 1])
    nrm /= np.linalg.norm(nrm, axis=1)[:, None]
    e2 = np.cross(nrm, e1)
    frames = np.stack([e1, e2], axis=1)
    # normal frame: the complement of the tangent plane, inward for closed surfaces
    normals = -nrm[:, None, :] if outward is not None else nrm[:, None, :]

    E = len(edges)
    star1 = np.zeros(E)
    star0 = np.zeros(len(vertices))
    if m == 3:
        for a in range(3):
            # from the vertex opposite edge a to the edge's endpoints
            u = trav[:, (a + 2) % 3]
            w = -trav[:, (a + 1) % 3]
            cot = np.einsum("fn,fn->f", u, w) / np.linalg.norm(np.cross(u, w), axis=1)
            np.add.at(star1, face_edges[:, a], 0.5 * cot)
        np.add.at(star0, faces.ravel(), np.repeat(areas / 3.0, 3))
    else:
        for a in range(m):
            # rectangular cells: dual segment is half the adjacent side
            side = np.linalg.norm(trav[:, (a + 1) % m], axis=1)
            np.add.at(star1, face_edges[:, a], 0.5 * side / np.linalg.norm(trav[:, a], axis=1))
        np.add.at(star0, faces.ravel(), np.repeat(areas / m, m))

    return MeshComplex(kind, vertices, edges, faces, face_edges, face_signs, fvec, areas,
                       frames, normals, lengths, star0, star1, params=params or {})


_PHI = (1.0 + 5 ** 0.5) / 2.0
_ICO_V = np.array([
    [-1, _PHI, 0], [1, _PHI, 0], [-1, -_PHI, 0], [1, -_PHI, 0],
    [0, -1, _PHI], [0, 1, _PHI], [0, -1, -_PHI], [0, 1, -_PHI],
    [_PHI, 0, -1], [_PHI, 0, 1], [-_PHI, 0, -1], [-_PHI, 0, 1],
], dtype=float)
_ICO_F = np.array([
    [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
    [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
    [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
    [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
])


def _subdivide(verts, faces):
    verts = list(verts)
    cache = {}

    def mid(i, j):
        key = (min(i, j), max(i, j))
        if key not in cache:
            p = verts[i] + verts[j]
            verts.append(p / np.linalg.norm(p))
            cache[key] = len(verts) - 1
        return cache[key]

    out = []
    for a, b, c in faces:
        ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
        out += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
    return np.array(verts), np.array(out)


def build_icosphere(r: float = 1.0, level: int = 0) -> MeshComplex:
    """Subdivided icosahedron projected to the sphere of radius ``r``.

    Faces are oriented by the outward normal; ``face_h`` holds the second
    fundamental form (1/r) I with respect to the inward unit normal.
    """
    if level < 0:
        raise ValueError("level must be >= 0")
    v = _ICO_V / np.linalg.norm(_ICO_V, axis=1)[:, None]
    f = _ICO_F.copy()
    for _ in range(level):
        v, f = _subdivide(v, f)
    v = r * v
    a, b, c = v[f[:, 0]], v[f[:, 1]], v[f[:, 2]]
    flip = np.einsum("fn,fn->f", np.cross(b - a, c - a), a + b + c) < 0
    f[flip] = f[flip][:, ::-1]
    mesh = _assemble("icosphere", v, f, lambda i, j: v[j] - v[i], outward=True,
                     params={"radius": r, "level": level})
    mesh.face_h = np.broadcast_to(np.eye(2) / r, (mesh.n_faces, 1, 2, 2)).copy()
    return mesh


def build_torus_grid(n1: int, n2: int, L1: float = 1.0, L2: float = 1.0) -> MeshComplex:
    """Flat periodic n1 x n2 grid of rectangles, drawn in the plane z = 0 of R^3."""
    if n1 < 3 or n2 < 3:
        raise ValueError("torus grid needs n1, n2 >= 3")
    dx, dy = L1 / n1, L2 / n2
    idx = lambda i, j: (i % n1) * n2 + (j % n2)
    verts = np.array([[i * dx, j * dy, 0.0] for i in range(n1) for j in range(n2)])
    faces = [[idx(i, j), idx(i + 1, j), idx(i + 1, j + 1), idx(i, j + 1)]
             for i in range(n1) for j in range(n2)]

    def edge_vector(a, b):
        d = verts[b] - verts[a]
        d[0] -= L1 * np.round(d[0] / L1)
        d[1] -= L2 * np.round(d[1] / L2)
        return d

    mesh = _assemble("torus", verts, faces, edge_vector, params={"n1": n1, "n2": n2, "L1": L1, "L2": L2})
    mesh.face_h = np.zeros((mesh.n_faces, 1, 2, 2))
    return mesh


def read_off(path) -> MeshComplex:
    """Triangle mesh from an OFF file (no curvature data attached)."""
    tokens = []
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                tokens.extend(line.split())
    if tokens[0] != "OFF":
        raise ValueError(f"{path}: not an OFF file")
    nv, nf = int(tokens[1]), int(tokens[2])
    pos = 4
    verts = np.array(tokens[pos:pos + 3 * nv], dtype=float).reshape(nv, 3)
    pos += 3 * nv
    faces = []
    for _ in range(nf):
        k = int(tokens[pos])
        if k != 3:
            raise ValueError(f"{path}: only triangles are supported")
        faces.append([int(t) for t in tokens[pos + 1:pos + 1 + k]])
        pos += 1 + k
    return _assemble("off", verts, np.array(faces), lambda i, j: verts[j] - verts[i],
                     params={"path": str(path)})


def parse_mesh_spec(spec: str) -> MeshComplex:
    """``icosphere:LEVEL[:R]``, ``torus:N1xN2[:L1xL2]`` or ``off:PATH``."""
    kind, _, rest = spec.partition(":")
    if kind == "icosphere":
        parts = rest.split(":") if rest else ["3"]
        r = float(parts[1]) if len(parts) > 1 else 1.0
        return build_icosphere(r, int(parts[0]))
    if kind == "torus":
        parts = rest.split(":") if rest else ["8x8"]
        n1, n2 = (int(x) for x in parts[0].split("x"))
        L1, L2 = (float(x) for x in parts[1].split("x")) if len(parts) > 1 else (1.0, 1.0)
        return build_torus_grid(n1, n2, L1, L2)
    if kind == "off":
        return read_off(rest)
    raise ValueError(f"unknown mesh spec {spec!r}")


def ambient_frame_fields(mesh: MeshComplex) -> np.ndarray:
    """Per-face orthogonal matrix v[f, A, B] = <E_A, e_B>, B over (e1, e2, normals).

    The tangential projection of E_A in face coordinates is ``v[f, A, :2]``.
    """
    full = np.concatenate([mesh.face_frames, mesh.face_normals], axis=1)  # (F, N, N) rows e_B
    return np.transpose(full, (0, 2, 1)).copy()
