"""Brute-force reference implementations.

Plain Python loops over nested lists, written independently of the
vectorised kernels.  Forms are accessed only through the signed
``component`` accessor, curvature tensors are rebuilt from the second
fundamental form by explicit sums.  Slow by design; used by the identity
battery and the tests.
"""

from __future__ import annotations

from fymlab.lie_algebra import LieAlgebraSpec


def _vec(x):
    return [float(v) for v in x]


def bracket(x, y, alg: LieAlgebraSpec):
    c = alg.structure_constants
    d = alg.dim
    out = [0.0] * d
    for i in range(d):
        for j in range(d):
            if x[i] == 0.0 or y[j] == 0.0:
                continue
            for k in range(d):
                out[k] += x[i] * y[j] * float(c[i, j, k])
    return out


def inner(x, y, alg: LieAlgebraSpec):
    g = alg.metric
    return sum(x[a] * float(g[a, b]) * y[b] for a in range(alg.dim) for b in range(alg.dim))


def _add(u, v, s=1.0):
    return [a + s * b for a, b in zip(u, v)]


def two_table(phi):
    """Full ordered table t[i][j] of a 2-form via its signed accessor."""
    return [[_vec(phi.component(i, j)) for j in range(phi.n)] for i in range(phi.n)]


def one_table(alpha):
    return [_vec(alpha.component(i)) for i in range(alpha.n)]


def norm2_form2(phi):
    t = two_table(phi)
    return 0.5 * sum(inner(t[i][j], t[i][j], phi.alg) for i in range(phi.n) for j in range(phi.n))


def pair_form2(phi, psi):
    a, b = two_table(phi), two_table(psi)
    return 0.5 * sum(inner(a[i][j], b[i][j], phi.alg) for i in range(phi.n) for j in range(phi.n))


def weitzenbock_1_pairing(alpha, R):
    """<r(alpha), alpha> with r(alpha)_i = sum_j [R_ji, alpha_j]."""
    a, r, alg = one_table(alpha), two_table(R), alpha.alg
    total = 0.0
    for i in range(alpha.n):
        acc = [0.0] * alg.dim
        for j in range(alpha.n):
            acc = _add(acc, bracket(r[j][i], a[j], alg))
        total += inner(acc, a[i], alg)
    return total


def bracket_wedge_pairing(alpha, R):
    """<[alpha ^ alpha], R> with [alpha ^ alpha]_ij = 2 [alpha_i, alpha_j], 1/2! normalised."""
    a, r, alg = one_table(alpha), two_table(R), alpha.alg
    total = 0.0
    for i in range(alpha.n):
        for j in range(alpha.n):
            w = _add(bracket(a[i], a[j], alg), bracket(a[j], a[i], alg), -1.0)
            total += 0.5 * inner(w, r[i][j], alg)
    return total


def weitzenbock_2_pairing(phi, R):
    """<r(phi), phi> with r(phi)_xy = sum_j [R_jx, phi_jy] - [R_jy, phi_jx]."""
    p, r, alg, n = two_table(phi), two_table(R), phi.alg, phi.n
    total = 0.0
    for x in range(n):
        for y in range(n):
            acc = [0.0] * alg.dim
            for j in range(n):
                acc = _add(acc, bracket(r[j][x], p[j][y], alg))
                acc = _add(acc, bracket(r[j][y], p[j][x], alg), -1.0)
            total += 0.5 * inner(acc, p[x][y], alg)
    return total


def interior_table(V, phi):
    p, n, d = two_table(phi), phi.n, phi.alg.dim
    return [[sum(float(V[k]) * p[k][i][c] for k in range(n)) for c in range(d)] for i in range(n)]


def frame_sum_pairing(v, phi, R):
    """sum_A <r(i_{V_A} phi), i_{V_A} phi>, V_A = tangential part v[A, :n]."""
    r, alg, n = two_table(R), phi.alg, phi.n
    total = 0.0
    for A in range(len(v)):
        a = interior_table(v[A][:n], phi)
        for i in range(n):
            acc = [0.0] * alg.dim
            for j in range(n):
                acc = _add(acc, bracket(r[j][i], a[j], alg))
            total += inner(acc, a[i], alg)
    return total


def gauss_tensor(h):
    """R_ijkl = sum_mu h_ik h_jl - h_jk h_il and Ric_ik = sum_l R_lkli, from nested lists."""
    m, n = len(h), len(h[0])
    R = [[[[sum(h[u][i][k] * h[u][j][l] - h[u][j][k] * h[u][i][l] for u in range(m))
            for l in range(n)] for k in range(n)] for j in range(n)] for i in range(n)]
    Ric = [[sum(R[l][k][l][i] for l in range(n)) for k in range(n)] for i in range(n)]
    return R, Ric


def curvature_pairings(h, phi):
    """(R(phi, phi), Ric(phi, phi), H(phi, phi), h2, h2') by full index sums."""
    h = [[[float(x) for x in row] for row in mat] for mat in h]
    m, n, alg = len(h), phi.n, phi.alg
    p = two_table(phi)
    R, Ric = gauss_tensor(h)
    Hvec = [sum(h[u][a][a] for a in range(n)) for u in range(m)]
    G = [[[[inner(p[i][j], p[k][l], alg) for l in range(n)] for k in range(n)] for j in range(n)] for i in range(n)]
    R_phi = Ric_phi = H_phi = h2 = h2p = 0.0
    for i in range(n):
        for j in range(n):
            for k in range(n):
                for l in range(n):
                    g = G[i][j][k][l]
                    R_phi += R[i][j][k][l] * g
                    h2 += sum(h[u][i][k] * h[u][l][j] for u in range(m)) * g
                    if j == l:
                        Ric_phi += Ric[i][k] * g
                        H_phi += sum(Hvec[u] * h[u][i][k] for u in range(m)) * g
                        h2p += sum(h[u][a][k] * h[u][a][i] for u in range(m) for a in range(n)) * g
    return R_phi, Ric_phi, H_phi, h2, h2p


def compose_omega_pairing(phi, W):
    """<phi o omega, phi>, (phi o omega)_xy = (1/2) sum_a phi(e_a, omega_xy(e_a)),
    omega_xy(e_a) = sum_b W[x][y][b][a] e_b."""
    p, alg, n = two_table(phi), phi.alg, phi.n
    total = 0.0
    for x in range(n):
        for y in range(n):
            acc = [0.0] * alg.dim
            for a in range(n):
                for b in range(n):
                    acc = _add(acc, p[a][b], 0.5 * float(W[x][y][b][a]))
            total += 0.5 * inner(acc, p[x][y], alg)
    return total


def ad_invariance(x, y, z, alg):
    """<[x, y], z> + <y, [x, z]>."""
    return inner(bracket(x, y, alg), z, alg) + inner(y, bracket(x, z, alg), alg)
