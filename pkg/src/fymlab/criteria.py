"""Simons-type instability criteria.

The convex-hypersurface test quantifies over every triple (i, j, k),
repeats included.  An infinite degree makes the finite-degree criteria
inapplicable (``InfiniteDegreeError``); for the two infinite-degree
built-ins on spheres use :func:`born_infeld_negative_bound` and
:func:`exponential_bound` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from fymlab.hypersurface import InfiniteDegreeError


@dataclass(frozen=True)
class CriterionReport:
    satisfied: bool
    margin: float
    witness: dict | None = None
    notes: dict = field(default_factory=dict)

    def as_dict(self):
        return {"satisfied": self.satisfied, "margin": self.margin,
                "witness": self.witness, "notes": dict(self.notes)}


def _finite_degree(d):
    d = float(d)
    if math.isinf(d):
        raise InfiniteDegreeError("criterion needs a finite degree d_{F'}")
    if d < 0 or math.isnan(d):
        raise ValueError(f"degree must be >= 0, got {d}")
    return d


def check_convex_hypersurface(lambdas, d) -> CriterionReport:
    """sum_{m != i, j} lam_m > lam_i + lam_j + 4 d lam_k for every (i, j, k)."""
    lam = np.asarray(lambdas, dtype=float)
    d = _finite_degree(d)
    n = lam.size
    if lam.ndim != 1 or n < 2:
        raise ValueError("need at least two principal curvatures")
    if np.any(lam <= 0):
        raise ValueError("principal curvatures must be positive")
    total = lam.sum()
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    rest = total - lam[i] - np.where(i == j, 0.0, lam[j])
    lhs = np.broadcast_to(rest[:, :, None], (n, n, n))
    rhs = (lam[:, None, None] + lam[None, :, None]) + 4.0 * d * lam[None, None, :]
    gap = lhs - rhs
    # near-ties are re-decided in exact rational arithmetic on the float inputs
    slack = 1e-9 * (abs(total) + 4.0 * d * lam.max())
    candidates = np.argwhere(gap <= gap.min() + slack)
    exact_lam = [Fraction(float(x)) for x in lam]
    exact_total = sum(exact_lam, Fraction(0))
    exact_d = Fraction(d)

    def exact_gap(a, b, c):
        rest_ = exact_total - exact_lam[a] - (0 if a == b else exact_lam[b])
        return rest_ - exact_lam[a] - exact_lam[b] - 4 * exact_d * exact_lam[c]

    worst, worst_gap = None, None
    for a, b, c in candidates:
        g = exact_gap(a, b, c)
        if worst_gap is None or g < worst_gap:
            worst, worst_gap = (int(a), int(b), int(c)), g
    margin = float(worst_gap)
    satisfied = bool(worst_gap > 0)
    witness = None
    if not satisfied:
        a, b, c = worst
        witness = {"i": a + 1, "j": b + 1, "k": c + 1,
                   "lhs": float(lhs[worst]), "rhs": float(rhs[worst])}
    return CriterionReport(satisfied, margin, witness, {"triples": "all (i, j, k), repeats included"})


def check_sphere(n: int, d) -> CriterionReport:
    """n > 4 d + 4 on the round sphere S^n."""
    d = _finite_degree(d)
    if n < 2:
        raise ValueError("n >= 2 required")
    margin = n - 4.0 * d - 4.0
    satisfied = bool(margin > 0)
    witness = None
    if not satisfied:
        witness = {"i": 1, "j": 2, "k": 1, "lhs": float(n - 2), "rhs": 2.0 + 4.0 * d}
    return CriterionReport(satisfied, margin, witness, {"threshold": 4.0 * d + 4.0})


def _need_n(n):
    if n <= 4:
        raise ValueError(f"bound needs n > 4, got {n}")


def born_infeld_critical_norm2(n: int) -> Fraction:
    """Exact root (n-4)/(n-2) of the sign function, in |R|^2."""
    _need_n(n)
    return Fraction(n - 4, n - 2)


def born_infeld_negative_bound(n: int) -> float:
    """Curvature-norm threshold sqrt((n-4)/(n-2)) for eps = -1 on S^n."""
    return math.sqrt(born_infeld_critical_norm2(n))


def born_infeld_sign(t, n: int):
    """2/(1 - t) - (n - 2) at t = |phi|^2; exact for Fraction input."""
    return 2 / (1 - t) - (n - 2)


def born_infeld_integrand(t, n: int, r: float = 1.0):
    """(2/r^2) t/sqrt(1-t) (2/(1-t) - (n-2)), the pointwise index-sum density."""
    t = np.asarray(t, dtype=float)
    return 2.0 / r ** 2 * t / np.sqrt(1.0 - t) * born_infeld_sign(t, n)


def exponential_critical_norm2(n: int) -> Fraction:
    _need_n(n)
    return Fraction(n - 4, 2)


def exponential_bound(n: int) -> float:
    """Curvature-norm threshold sqrt((n-4)/2) for F = exp on S^n."""
    return math.sqrt(exponential_critical_norm2(n))


def exponential_factor(t, n: int):
    """2t - (n - 4) at t = |phi|^2."""
    return 2 * t - (n - 4)


def exponential_integrand(t, n: int, r: float = 1.0):
    t = np.asarray(t, dtype=float)
    return 2.0 / r ** 2 * np.exp(0.5 * t) * t * exponential_factor(t, n)
