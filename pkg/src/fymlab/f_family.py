"""Profiles F for the F-Yang-Mills functional and the degree of F'.

A profile is a strictly increasing C^2 function on ``[0, c)``.  The four
built-in families are

* ``identity``      F(t) = t                          (Yang-Mills)
* ``p_power``       F(t) = (2t)^(p/2) / p, p >= 2       (p-Yang-Mills)
* ``born_infeld``   F(t) = eps*sqrt(1 + 2 eps t) - eps  (eps = +1 or -1)
* ``exponential``   F(t) = exp(t)

Degrees are plain floats; an infinite degree is ``math.inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

INFINITE = math.inf

BUILTIN_FAMILIES = ("identity", "p_power", "born_infeld", "exponential")


class DomainError(ValueError):
    """An argument of F lies outside its domain [0, c)."""

    def __init__(self, message, value=None, index=None):
        super().__init__(message)
        self.value = value
        self.index = index


@dataclass(frozen=True)
class FFunction:
    """A profile F with its first two derivatives.

    ``F``, ``F1`` and ``F2`` must accept numpy arrays.  Calling the
    profile (or :meth:`d1`, :meth:`d2`) checks the domain first.
    """

    name: str
    F: Callable[[np.ndarray], np.ndarray]
    F1: Callable[[np.ndarray], np.ndarray]
    F2: Callable[[np.ndarray], np.ndarray]
    domain_bound: float = math.inf
    params: Mapping[str, float] = field(default_factory=dict)
    builtin: bool = False

    def check_domain(self, t):
        t = np.asarray(t, dtype=float)
        bad = (t < 0) | (t >= self.domain_bound) | ~np.isfinite(t)
        if np.any(bad):
            flat = np.flatnonzero(np.ravel(bad))
            idx = int(flat[0])
            val = float(np.ravel(t)[idx])
            raise DomainError(
                f"{self.name}: argument {val!r} outside [0, {self.domain_bound})",
                value=val,
                index=idx,
            )
        return t

    def __call__(self, t):
        return self.F(self.check_domain(t))

    def d1(self, t):
        return self.F1(self.check_domain(t))

    def d2(self, t):
        return self.F2(self.check_domain(t))

    def describe(self) -> dict:
        return {"name": self.name, "params": dict(self.params), "domain_bound": self.domain_bound}


def make_builtin(family: str, p: float | None = None, eps: int | None = None) -> FFunction:
    """Build one of the built-in profiles by family name."""
    if family == "identity":
        return FFunction(
            "identity",
            lambda t: np.asarray(t, dtype=float) * 1.0,
            lambda t: np.ones_like(np.asarray(t, dtype=float)),
            lambda t: np.zeros_like(np.asarray(t, dtype=float)),
            builtin=True,
        )
    if family == "p_power":
        if p is None:
            raise ValueError("p_power needs p")
        p = float(p)
        if not p >= 2:
            raise ValueError(f"p_power needs p >= 2, got {p}")
        half = p / 2.0

        def F(t):
            return (2.0 * t) ** half / p

        def F1(t):
            return (2.0 * t) ** (half - 1.0)

        def F2(t):
            if p == 2:
                return np.zeros_like(np.asarray(t, dtype=float))
            # t = 0 is singular for 2 < p < 4; report +inf rather than nan
            with np.errstate(divide="ignore"):
                return (p - 2.0) * (2.0 * t) ** (half - 2.0)

        return FFunction(f"p_power(p={p:g})", F, F1, F2, params={"p": p}, builtin=True)
    if family == "born_infeld":
        if eps not in (1, -1):
            raise ValueError(f"born_infeld needs eps in {{+1, -1}}, got {eps!r}")
        e = float(eps)

        def F(t):
            # e (sqrt(1 + 2 e t) - 1), rewritten without cancellation near t = 0
            return 2.0 * t / (np.sqrt(1.0 + 2.0 * e * t) + 1.0)

        def F1(t):
            return (1.0 + 2.0 * e * t) ** -0.5

        def F2(t):
            return -e * (1.0 + 2.0 * e * t) ** -1.5

        c = 0.5 if eps == -1 else math.inf
        return FFunction(f"born_infeld(eps={eps:+d})", F, F1, F2, domain_bound=c,
                         params={"eps": eps}, builtin=True)
    if family == "exponential":
        return FFunction("exponential", np.exp, np.exp, np.exp, builtin=True)
    raise ValueError(f"unknown family {family!r}; expected one of {BUILTIN_FAMILIES}")


def make_custom(name, F, F1, F2, domain_bound=math.inf, check_points=None, rtol=1e-4) -> FFunction:
    """Wrap a caller-supplied triple (F, F', F'') after spot-checking it.

    The derivatives are compared against centered differences at a few
    points inside the domain; a mismatch raises ``ValueError``.
    """
    f = FFunction(name, F, F1, F2, domain_bound=domain_bound)
    if check_points is None:
        top = 10.0 if math.isinf(domain_bound) else 0.9 * domain_bound
        check_points = np.linspace(0.1, 1.0, 5) * top
    for t in np.atleast_1d(check_points):
        h = 1e-5 * max(1.0, abs(t))
        fd1 = (F(t + h) - F(t - h)) / (2 * h)
        fd2 = (F1(t + h) - F1(t - h)) / (2 * h)
        for fd, an, label in ((fd1, F1(t), "F'"), (fd2, F2(t), "F''")):
            if abs(fd - an) > rtol * max(1.0, abs(an)):
                raise ValueError(f"{name}: {label}({t:g}) = {an!r} disagrees with finite difference {fd!r}")
        if not F1(t) > 0:
            raise ValueError(f"{name}: F'({t:g}) <= 0, profile is not strictly increasing")
    return f


def degree_analytic(f: FFunction) -> float:
    """Closed-form degree sup t F''(t)/F'(t) for the built-in families."""
    if not f.builtin:
        raise ValueError(f"{f.name} is not a built-in profile; use degree_numeric")
    if f.name == "identity":
        return 0.0
    if f.name.startswith("p_power"):
        return (f.params["p"] - 2.0) / 2.0
    if f.name.startswith("born_infeld"):
        return 0.0 if f.params["eps"] == 1 else INFINITE
    if f.name == "exponential":
        return INFINITE
    raise ValueError(f"no closed-form degree for {f.name}")


def degree_grid(f: FFunction, t_min: float | None = None, t_max: float | None = None,
                n_points: int = 10_000) -> np.ndarray:
    """Log-spaced sample points in (0, c); clustered at the boundary when c is finite."""
    c = f.domain_bound
    if math.isinf(c):
        t_min = 1e-8 if t_min is None else t_min
        t_max = 1e8 if t_max is None else t_max
        return np.logspace(math.log10(t_min), math.log10(t_max), n_points)
    t_min = c * 1e-8 if t_min is None else t_min
    t_max = c * (1 - 1e-8) if t_max is None else t_max
    if not 0 < t_min < t_max < c:
        raise ValueError(f"grid ({t_min}, {t_max}) must lie inside (0, {c})")
    mid = min(c / 2.0, t_max)
    lower = np.logspace(math.log10(t_min), math.log10(mid), n_points // 2)
    if t_max <= mid:
        return lower
    gaps = np.logspace(math.log10(c - mid), math.log10(c - t_max), n_points - n_points // 2)
    return np.unique(np.concatenate([lower, c - gaps]))


def degree_numeric(f: FFunction, grid=None, n_points: int = 10_000, cap: float = 1e6,
                   plateau_rtol: float = 1e-3) -> float:
    """Estimate sup t F''(t)/F'(t) on a sample grid.

    ``grid`` is either ``(t_min, t_max)`` or an explicit array of points.
    Returns ``math.inf`` when the running supremum exceeds ``cap``, or when
    the ratio is still rising over the last decade next to the far end of
    the grid by more than ``plateau_rtol`` (relative).  Samples where the
    profile overflows are dropped.
    """
    if grid is None or len(grid) == 2:
        lo, hi = (None, None) if grid is None else grid
        t = degree_grid(f, lo, hi, n_points)
    else:
        t = np.sort(np.asarray(grid, dtype=float))
    if np.any(t <= 0):
        raise ValueError("degree grid must avoid t = 0")
    f.check_domain(t)
    with np.errstate(over="ignore", invalid="ignore"):
        d1 = f.F1(t)
        if np.any(d1 <= 0):
            bad = t[np.argmax(d1 <= 0)]
            raise ValueError(f"{f.name}: F'({bad:g}) <= 0, profile is not strictly increasing")
        ratio = t * f.F2(t) / d1
    # points where F or its derivatives overflow carry no information
    keep = np.isfinite(ratio)
    if not np.any(keep):
        raise ValueError(f"{f.name}: no finite samples on the degree grid")
    t, ratio = t[keep], ratio[keep]
    sup = float(np.max(ratio))
    if sup > cap:
        return INFINITE

    c = f.domain_bound
    if math.isinf(c):
        last = t >= t[-1] / 10.0
    else:
        last = (c - t) <= 10.0 * (c - t[-1])
    seg = ratio[last]
    if seg.size >= 2 and np.all(np.diff(seg) >= 0):
        rise = seg[-1] - seg[0]
        if rise > plateau_rtol * max(abs(seg[-1]), 1e-300):
            return INFINITE
    return sup
