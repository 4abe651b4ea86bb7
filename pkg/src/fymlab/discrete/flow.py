"""Gradient descent on the discrete F-functional with Armijo backtracking."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from fymlab.f_family import DomainError, FFunction
from fymlab.discrete.gauge import DiscreteConnection, functional, gradient, pairing
from fymlab.discrete.mesh import MeshComplex

STEP_RULES = ("armijo", "bb")


@dataclass
class FlowResult:
    conn: DiscreteConnection
    history: list = field(default_factory=list)
    converged: bool = False
    status: str = ""

    @property
    def grad_norm(self) -> float:
        return self.history[-1]["grad_norm"]

    @property
    def functional(self) -> float:
        return self.history[-1]["functional"]

    def report(self) -> dict:
        return {"converged": self.converged, "status": self.status, "iterations": len(self.history) - 1,
                "initial_functional": self.history[0]["functional"], "functional": self.functional,
                "grad_norm": self.grad_norm,
                "monotone": all(b["functional"] <= a["functional"]
                                for a, b in zip(self.history, self.history[1:]))}


def gradient_flow(conn: DiscreteConnection, mesh: MeshComplex, f: FFunction, max_iters: int = 5000,
                  tol: float = 1e-8, step_rule: str = "bb", c1: float = 1e-4, shrink: float = 0.5,
                  initial_step: float = 1.0, max_backtracks: int = 60, noise: float = 1e-14,
                  jsonl=None) -> FlowResult:
    """Descend along -delta^A(F' R) until the Hodge norm of the gradient is below ``tol``.

    ``step_rule="armijo"`` starts every line search at ``initial_step``;
    ``"bb"`` starts it at the Barzilai-Borwein step from the previous
    iterate.  Both accept only steps with sufficient decrease, so the
    functional history is nonincreasing.  A domain violation at a trial
    point counts as a failed trial; one at the starting point is raised.
    ``jsonl`` is an open text file receiving one record per iteration.
    """
    if step_rule not in STEP_RULES:
        raise ValueError(f"unknown step rule {step_rule!r}; choose from {STEP_RULES}")
    alg = conn.alg
    value = functional(conn, mesh, f)
    G = gradient(conn, mesh, f)
    g2 = pairing(G, G, mesh, alg)
    result = FlowResult(conn)
    prev = None

    def log(it, step):
        rec = {"iter": it, "functional": value, "grad_norm": math.sqrt(g2), "step": step}
        result.history.append(rec)
        if jsonl is not None:
            jsonl.write(json.dumps(rec, sort_keys=True) + "\n")

    log(0, 0.0)
    for it in range(1, max_iters + 1):
        if math.sqrt(g2) < tol:
            break
        step = initial_step
        if step_rule == "bb" and prev is not None:
            s_prev, y_prev = prev
            sy = pairing(s_prev, y_prev, mesh, alg)
            if sy > 0:
                step = pairing(s_prev, s_prev, mesh, alg) / sy
        for _ in range(max_backtracks):
            trial = conn.shifted(G, -step)
            try:
                with np.errstate(over="ignore"):
                    trial_value = functional(trial, mesh, f)
            except DomainError:
                step *= shrink
                continue
            if not math.isfinite(trial_value):
                step *= shrink
                continue
            required = c1 * step * g2
            # below rounding noise of the sum, plain non-increase is accepted
            if trial_value <= value - required or (trial_value <= value and required < noise * abs(value)):
                break
            step *= shrink
        else:
            result.conn, result.status = conn, "line search failed"
            return result
        G_new = gradient(trial, mesh, f)
        prev = (-step * G, G_new - G)
        conn, value, G = trial, trial_value, G_new
        g2 = pairing(G, G, mesh, alg)
        log(it, step)
    result.conn = conn
    result.converged = math.sqrt(g2) < tol
    result.status = "converged" if result.converged else "max_iters reached"
    return result
