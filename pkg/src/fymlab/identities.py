"""Randomised identity battery: vectorised kernels against brute-force oracles.

Each identity is evaluated on random inputs for every configuration
(frame dimension n, algebra) and the largest residual
``|lhs - rhs| / max(1, |lhs|, |rhs|)`` is reported.  The whole battery is
determined by the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fymlab import oracles
from fymlab.hypersurface import ImmersionData, gauss_curvature, scalar_invariants
from fymlab.lie_algebra import LieAlgebraSpec, su2, u1
from fymlab.pointwise_forms import (PointForm, bracket_wedge, compose_omega, inner_forms, interior,
                                    ric_wedge_I_plus_2R, weitzenbock_1, weitzenbock_2)

IDENTITIES = ("ad_invariance", "weitzenbock_bracket", "frame_sum", "ric_wedge_compose",
              "h2_half_R", "h2p_H_minus_Ric", "cov_adjoint")
DEFAULT_N = (2, 3, 4, 5, 6)


def corrupted_su2(delta: float = 0.1) -> LieAlgebraSpec:
    """su(2) with one structure constant (and its antisymmetric partner) perturbed."""
    base = su2()
    c = base.structure_constants.copy()
    c[0, 1, 2] += delta
    c[1, 0, 2] -= delta
    return LieAlgebraSpec("su2_corrupted", c, base.metric)


def _res(a, b):
    return abs(a - b) / max(1.0, abs(a), abs(b))


def _orthogonal(N, rng):
    q, r = np.linalg.qr(rng.standard_normal((N, N)))
    return q * np.sign(np.diag(r))


def pointwise_trial(n: int, alg: LieAlgebraSpec, rng) -> dict:
    """One random draw of every pointwise identity; returns residuals."""
    phi = PointForm.random(2, n, alg, rng)
    R = PointForm.random(2, n, alg, rng)
    alpha = PointForm.random(1, n, alg, rng)
    x, y, z = (alg.random_element(rng) for _ in range(3))
    out = {}

    lhs = float(alg.inner(alg.bracket(x, y), z) + alg.inner(y, alg.bracket(x, z)))
    out["ad_invariance"] = max(abs(lhs), abs(oracles.ad_invariance(list(x), list(y), list(z), alg)))

    out["weitzenbock_bracket"] = _res(inner_forms(weitzenbock_1(alpha, R), alpha),
                                      oracles.bracket_wedge_pairing(alpha, R))
    out["weitzenbock_bracket"] = max(out["weitzenbock_bracket"],
                                     _res(inner_forms(bracket_wedge(alpha, alpha), R),
                                          oracles.weitzenbock_1_pairing(alpha, R)))

    v = _orthogonal(n + 1, rng)
    lhs = sum(inner_forms(weitzenbock_1(interior(v[A, :n], phi), R), interior(v[A, :n], phi))
              for A in range(n + 1))
    out["frame_sum"] = max(_res(lhs, oracles.weitzenbock_2_pairing(phi, R)),
                           _res(inner_forms(weitzenbock_2(phi, R), phi), oracles.frame_sum_pairing(v, phi, R)))

    imm = ImmersionData.random(n, n + 2, rng)
    R_phi, Ric_phi, H_phi, h2, h2p = oracles.curvature_pairings(imm.h.tolist(), phi)
    omega = ric_wedge_I_plus_2R(gauss_curvature(imm))
    out["ric_wedge_compose"] = max(_res(inner_forms(compose_omega(phi, omega), phi), Ric_phi - 0.5 * R_phi),
                                   _res(oracles.compose_omega_pairing(phi, omega.W.tolist()),
                                        Ric_phi - 0.5 * R_phi))

    inv = scalar_invariants(imm, phi)
    out["h2_half_R"] = max(_res(inv.h2, 0.5 * R_phi), _res(h2, 0.5 * inv.R_phi))
    out["h2p_H_minus_Ric"] = max(_res(inv.h2p, H_phi - Ric_phi), _res(h2p, inv.H_phi - inv.Ric_phi))
    return out


def adjoint_trial(mesh, alg, rng) -> float:
    from fymlab.discrete.gauge import DiscreteConnection, cov_d, cov_delta, pairing, random_form

    conn = DiscreteConnection.random(mesh, alg, rng, 0.5)
    worst = 0.0
    for k in (0, 1):
        a = random_form(mesh, alg, k, rng)
        b = random_form(mesh, alg, k + 1, rng)
        worst = max(worst, _res(pairing(cov_d(a, conn, mesh), b, mesh, alg),
                                pairing(a, cov_delta(b, conn, mesh), mesh, alg)))
    return worst


@dataclass
class BatteryResult:
    max_residual: dict
    tolerance: float
    trials: int
    configurations: list

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.max_residual.values())

    def as_dict(self):
        return {"passed": self.passed, "tolerance": self.tolerance, "trials": self.trials,
                "configurations": self.configurations,
                "max_residual": dict(sorted(self.max_residual.items()))}


def run_battery(seed: int = 0, trials: int = 200, ns=DEFAULT_N, algebras=None, tol: float = 1e-9,
                corrupt: bool = False, adjoint_trials: int = 10) -> BatteryResult:
    """Run every identity ``trials`` times per (n, algebra) configuration.

    With ``corrupt=True`` su(2) is replaced by :func:`corrupted_su2`, a
    negative control that must fail.
    """
    if algebras is None:
        algebras = [u1(), corrupted_su2() if corrupt else su2()]
    root = np.random.SeedSequence(seed)
    configs = [(n, alg) for alg in algebras for n in ns]
    streams = root.spawn(len(configs) + len(algebras))
    worst = dict.fromkeys(IDENTITIES, 0.0)
    for (n, alg), ss in zip(configs, streams):
        rng = np.random.default_rng(ss)
        for _ in range(trials):
            for key, r in pointwise_trial(n, alg, rng).items():
                worst[key] = max(worst[key], r)
    if adjoint_trials:
        from fymlab.discrete.mesh import build_icosphere, build_torus_grid

        meshes = [build_torus_grid(4, 4), build_icosphere(1.0, 1)]
        for alg, ss in zip(algebras, streams[len(configs):]):
            rng = np.random.default_rng(ss)
            for mesh in meshes:
                for _ in range(adjoint_trials):
                    worst["cov_adjoint"] = max(worst["cov_adjoint"], adjoint_trial(mesh, alg, rng))
    else:
        del worst["cov_adjoint"]
    return BatteryResult(worst, tol, trials, [f"n={n},{alg.name}" for n, alg in configs])
