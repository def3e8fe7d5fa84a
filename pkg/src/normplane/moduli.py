"""Moduli of uniform convexity and strong extremality, power-type-2 fits,
and the support-line decomposition inequality.

The uniform-convexity modulus is computed in its equality form (pairs at
gauge distance exactly eps), which turns the infimum into a one-parameter
family of root finds along the sphere.
"""

from __future__ import annotations

import threading
import weakref
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import BadEps, NonSmoothPoint
from .geometry import SpherePoint, Vec2
from .numerics import bisect_batch

#: eps grid for cached modulus curves (log-spaced)
CURVE_GRID_N = 64
CURVE_EPS_MIN = 0.02

#: outer sweep resolution for the uniform-convexity modulus
UC_SWEEP_N = 1024

#: direction count for the strong-extremality modulus
STRONG_DIRS = 512

#: a power-2 coefficient below this floor counts as vanishing
POWER2_FLOOR = 1e-6


@dataclass
class ModulusCurve:
    """Sampled eps -> modulus data with an optional power-type-2 coefficient."""

    kind: str  # "uniform_convexity" or "strong_extremality"
    eps_grid: np.ndarray
    values: np.ndarray
    power2_coeff: float | None = None
    base_point: SpherePoint | None = None

    def interp(self, eps) -> np.ndarray:
        """Piecewise-linear lookup, 0 below the grid, last value above."""
        return np.interp(eps, self.eps_grid, self.values, left=0.0, right=self.values[-1])

    def to_csv(self) -> str:
        lines = ["eps,delta"]
        for e, v in zip(self.eps_grid, self.values):
            lines.append(f"{float(e)!r},{float(v)!r}")
        return "\n".join(lines) + "\n"


def delta_uc(model, eps: float) -> float:
    """Modulus of uniform convexity at eps in (0, 2]: worst midpoint depth
    over sphere pairs at gauge distance eps.

    Coarse 1024-point sweep in the base point, then two vectorized zoom
    rounds around the argmin (window / 16 per round).
    """
    if not (0.0 < eps <= 2.0):
        raise BadEps(f"eps {eps!r} outside (0, 2]")
    thetas = (np.arange(UC_SWEEP_N) + 0.5) * (2.0 * np.pi / UC_SWEEP_N)
    h = 2.0 * np.pi / UC_SWEEP_N
    best, j = _uc_sweep(model, eps, thetas)
    center = thetas[j]
    for _ in range(2):
        local = center + np.linspace(-h, h, 33)
        v, j = _uc_sweep(model, eps, local)
        best = min(best, v)
        center = local[j]
        h /= 16.0
    return float(best)


def _uc_sweep(model, eps: float, thetas: np.ndarray):
    """Min midpoint depth over base points thetas; returns (value, argmin)."""
    xs = model.sphere_points_at(thetas)
    n = len(thetas)
    best = np.full(n, np.inf)
    for direction in (1.0, -1.0):
        # partner angle phi = theta + direction * s, s in (0, pi]; the gauge
        # distance grows from 0 to gauge(2x) = 2 along each branch.
        def dist(s):
            ys = model.sphere_points_at(thetas + direction * s)
            return model.gauge_many(xs - ys) - eps

        lo = np.full(n, 1e-9)
        hi = np.full(n, np.pi)
        bad = dist(hi) < 0  # cannot happen for eps <= 2, kept defensive
        s = bisect_batch(dist, lo, hi, iters=50)
        ys = model.sphere_points_at(thetas + direction * s)
        depth = 1.0 - model.gauge_many(0.5 * (xs + ys))
        depth[bad] = np.inf
        best = np.minimum(best, depth)
    j = int(np.argmin(best))
    return float(best[j]), j


def delta_strong(model, x: SpherePoint, eps: float) -> float:
    """Modulus of strong extremality at x: the least 1 - rho over
    perturbations y of gauge eps keeping both rho x + y and rho x - y in the
    ball, maximized in rho by bisection over each of 512 directions.

    The best direction from the grid is refined (the objective is only
    first-order flat there, so the coarse grid alone is not enough).
    """
    if not (0.0 < eps <= 1.0):
        raise BadEps(f"eps {eps!r} outside (0, 1]")
    xa = x.point.as_array()

    def rho_max(phis: np.ndarray) -> np.ndarray:
        ys = model.sphere_points_at(phis) * eps

        def slack(rho):
            zp = rho[:, None] * xa[None, :] + ys
            zm = rho[:, None] * xa[None, :] - ys
            return np.maximum(model.gauge_many(zp), model.gauge_many(zm)) - 1.0

        return bisect_batch(slack, np.zeros(len(phis)), np.full(len(phis), 2.0), iters=50)

    phis = (np.arange(STRONG_DIRS) + 0.5) * (2.0 * np.pi / STRONG_DIRS)
    rho = rho_max(phis)
    j = int(np.argmax(rho))
    best = float(rho[j])
    h = 2.0 * np.pi / STRONG_DIRS
    center = phis[j]
    for _ in range(2):
        local = center + np.linspace(-h, h, 33)
        r = rho_max(local)
        k = int(np.argmax(r))
        best = max(best, float(r[k]))
        center = local[k]
        h /= 16.0
    return 1.0 - best


def power2_fit(curve: ModulusCurve) -> float | None:
    """min value / eps^2 over the grid when it stays above the floor 1e-6,
    else None (the modulus is not of power type 2 at this resolution)."""
    vals = np.clip(curve.values, 0.0, None)
    ratio = vals / curve.eps_grid**2
    c = float(ratio.min())
    if c < POWER2_FLOOR:
        return None
    return c


_curve_cache: "weakref.WeakKeyDictionary[object, ModulusCurve]" = weakref.WeakKeyDictionary()
_curve_lock = threading.Lock()


def delta_curve(model) -> ModulusCurve:
    """Cached uniform-convexity curve on the standard log-spaced grid."""
    with _curve_lock:
        cached = _curve_cache.get(model)
    if cached is not None:
        return cached
    eps_grid = np.geomspace(CURVE_EPS_MIN, 2.0, CURVE_GRID_N)
    values = np.array([delta_uc(model, float(e)) for e in eps_grid])
    curve = ModulusCurve("uniform_convexity", eps_grid, values)
    curve.power2_coeff = power2_fit(curve)
    with _curve_lock:
        _curve_cache[model] = curve
    return curve


def decomposition_check(model, x: SpherePoint, z) -> tuple[float, Vec2, bool]:
    """Split a ball point z along x and its support line, z = t x + u, and
    test t^2 + delta(gauge(u)) <= 1 + 1e-4 against the cached modulus curve.

    Returns (t, u, holds).
    """
    if not x.smooth:
        raise NonSmoothPoint("decomposition needs a unique support functional")
    z = geometry.as_vec(z)
    t = x.support.dot(z)
    u = z - x.point.scale(t)
    curve = delta_curve(model)
    gu = model.gauge(u)
    holds = t * t + float(curve.interp(gu)) <= 1.0 + 1e-4
    return float(t), u, bool(holds)
