"""The catalogue of norm families: lp, polar-profile, quadrant mixes,
polygons, arc chains, ellipse intersections, blends, quadrant-curve norms,
and numerically sampled duals.

Every model is immutable after construction and carries two eagerly built
caches: a 1024-point sphere table with supports/tangents/curvatures and a
4096-point boundary table used for containment certificates. Gauge evaluation
canonicalizes the sign of its argument first, so gauge(-v) == gauge(v) holds
exactly for every family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .curvature import CURVATURE_CAP, INF, curvature_implicit, curvature_polar_many
from .errors import (
    BadParameter,
    NotClosed,
    NotConvex,
    NotPeriodic,
    NotSymmetric,
    OutOfDomain,
    TangentBreak,
)
from .geometry import Vec2, as_vec

SPHERE_CACHE_N = 1024
FINE_CACHE_N = 4096

#: junction tangents must agree to this tolerance (Euclidean, absolute)
TANGENT_TOL = 1e-9

#: convexity slack for cross-product tests on the cache
CONVEXITY_TOL = 1e-12


def _canonical(points: np.ndarray) -> np.ndarray:
    """Flip each row to the representative with x1 > 0 (or x1 == 0, x2 >= 0)."""
    points = np.asarray(points, dtype=float)
    flip = (points[:, 0] < 0) | ((points[:, 0] == 0) & (points[:, 1] < 0))
    out = points.copy()
    out[flip] *= -1.0
    return out


class NormModel:
    """Base class; subclasses implement ``_gauge_raw`` on canonical points."""

    family = "abstract"
    is_c2 = False
    polyhedral = False

    def __init__(self, params: dict):
        self.params = dict(params)
        self._cache = None
        self._fine_points = None

    # -- family hooks --------------------------------------------------------

    def _gauge_raw(self, points: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def grad_many(self, points: np.ndarray):
        """Analytic gauge gradient, or None to request finite differences."""
        return None

    def kink_thetas(self) -> np.ndarray:
        """Polar parameters of non-smooth sphere points, sorted, in [0, 2pi)."""
        return np.empty(0)

    def one_sided_supports(self, theta: float):
        """(f_minus, f_plus) one-sided support functionals at a kink."""
        raise NotImplementedError

    def feature_thetas(self) -> np.ndarray:
        """Angles worth adding to classification sweeps (kinks, axes, junctions)."""
        return self.kink_thetas()

    def curvature_sided(self, theta: float) -> tuple[float, float]:
        """(min, max) of the one-sided curvatures at theta."""
        k = float(self.curvature_theta_many(np.array([theta]))[0])
        return k, k

    # -- shared machinery -----------------------------------------------------

    def gauge_many(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return self._gauge_raw(_canonical(pts))

    def gauge(self, v) -> float:
        v = as_vec(v)
        return float(self.gauge_many(np.array([[v.x1, v.x2]]))[0])

    def radial_many(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        units = np.column_stack([np.cos(thetas), np.sin(thetas)])
        return 1.0 / self.gauge_many(units)

    def sphere_points_at(self, thetas) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        units = np.column_stack([np.cos(thetas), np.sin(thetas)])
        return units * self.radial_many(thetas)[:, None]

    def curvature_theta_many(self, thetas) -> np.ndarray:
        """Numeric fallback: polar curvature of the radial graph."""
        thetas = np.asarray(thetas, dtype=float)
        h = 2e-4
        r = [self.radial_many(thetas + k * h) for k in (-2, -1, 0, 1, 2)]
        rp = (-r[4] + 8 * r[3] - 8 * r[1] + r[0]) / (12 * h)
        rpp = (-r[4] + 16 * r[3] - 30 * r[2] + 16 * r[1] - r[0]) / (12 * h * h)
        return curvature_polar_many(r[2], rp, rpp)

    def kink_at(self, theta: float, tol: float = 1e-9):
        ks = self.kink_thetas()
        if ks.size == 0:
            return None
        d = np.abs((ks - theta + np.pi) % (2.0 * np.pi) - np.pi)
        j = int(np.argmin(d))
        if d[j] <= tol:
            return self.one_sided_supports(float(ks[j]))
        return None

    def sphere_cache(self) -> dict:
        if self._cache is None:
            self._cache = geometry.sphere_table(self, SPHERE_CACHE_N)
        return self._cache

    def fine_points(self) -> np.ndarray:
        if self._fine_points is None:
            thetas = (np.arange(FINE_CACHE_N) + 0.5) * (2.0 * np.pi / FINE_CACHE_N)
            self._fine_points = self.sphere_points_at(thetas)
            self._fine_points.setflags(write=False)
        return self._fine_points

    def validate(self) -> "NormModel":
        """Build caches eagerly and run generic norm checks."""
        pts = self.fine_points()
        if not np.all(np.isfinite(pts)):
            raise NotConvex(f"{self.family}: sphere has non-finite points")
        edges = np.diff(np.vstack([pts, pts[:1]]), axis=0)
        cross = edges[:-1, 0] * edges[1:, 1] - edges[:-1, 1] * edges[1:, 0]
        # absolute floor: flat stretches produce pure-noise crossings near 0
        if np.any(cross < -(CONVEXITY_TOL + 1e-9 * np.abs(cross).max())):
            raise NotConvex(f"{self.family}: sphere is not convex")
        self.sphere_cache()
        return self

    def _replace_params(self, params: dict) -> "NormModel":
        self.params = dict(params)
        return self

    # kept identity-based so models can key caches
    __hash__ = object.__hash__


# -- lp ------------------------------------------------------------------


class LpNorm(NormModel):
    family = "lp"

    def __init__(self, p: float):
        if p != INF and p < 1.0:
            raise BadParameter(f"p must be >= 1 or inf, got {p!r}")
        super().__init__({"p": "inf" if p == INF else p})
        self.p = p
        self.is_c2 = p == 2.0 or (p != INF and p > 2.0)
        self.polyhedral = p == 1.0 or p == INF

    def _gauge_raw(self, pts):
        ax = np.abs(pts)
        if self.p == INF:
            return ax.max(axis=1)
        if self.p == 1.0:
            return ax.sum(axis=1)
        if self.p == 2.0:
            return np.hypot(pts[:, 0], pts[:, 1])
        return (ax[:, 0] ** self.p + ax[:, 1] ** self.p) ** (1.0 / self.p)

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if self.p == INF:
            ax = np.abs(pts)
            pick = ax[:, 0] >= ax[:, 1]
            g = np.zeros_like(pts)
            g[pick, 0] = np.sign(pts[pick, 0])
            g[~pick, 1] = np.sign(pts[~pick, 1])
            return g
        if self.p == 1.0:
            return np.sign(pts) + (pts == 0.0)  # sign 0 -> +1; kinks handled upstream
        n = self._gauge_raw(np.abs(pts))
        return np.sign(pts) * (np.abs(pts) / n[:, None]) ** (self.p - 1.0)

    def kink_thetas(self):
        if self.p == 1.0:
            return np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])
        if self.p == INF:
            return np.array([np.pi / 4, 3 * np.pi / 4, 5 * np.pi / 4, 7 * np.pi / 4])
        return np.empty(0)

    def one_sided_supports(self, theta):
        c, s = math.cos(theta), math.sin(theta)
        if self.p == 1.0:
            if abs(c) > abs(s):  # vertex (sgn c, 0)
                sg = math.copysign(1.0, c)
                return np.array([sg, -sg]), np.array([sg, sg])
            sg = math.copysign(1.0, s)
            return np.array([sg, sg]), np.array([-sg, sg])
        # linf vertex (sgn c, sgn s): adjacent face normals are the axis vectors
        sgx, sgy = math.copysign(1.0, c), math.copysign(1.0, s)
        if sgx * sgy > 0:
            return np.array([sgx, 0.0]), np.array([0.0, sgy])
        return np.array([0.0, sgy]), np.array([sgx, 0.0])

    def feature_thetas(self):
        if self.polyhedral:
            return self.kink_thetas()
        if self.p == 2.0:
            return np.empty(0)
        return np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])  # axis points

    def _axis_kappa(self) -> float:
        if self.p == 2.0:
            return 1.0
        return INF if self.p < 2.0 else 0.0

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        if self.p == 2.0:
            return np.ones_like(thetas)
        if self.polyhedral:
            out = np.zeros_like(thetas)
            d = np.abs((thetas[:, None] - self.kink_thetas()[None, :] + np.pi) % (2 * np.pi) - np.pi)
            out[np.min(d, axis=1) <= 1e-12] = INF
            return out
        pts = self.sphere_points_at(thetas)
        return _lp_sphere_kappa(np.abs(pts), self.p)

    def curvature_sided(self, theta):
        if self.polyhedral:
            d = np.abs((self.kink_thetas() - theta + np.pi) % (2 * np.pi) - np.pi)
            if d.min() <= 1e-9:
                return 0.0, INF
            return 0.0, 0.0
        k = float(self.curvature_theta_many(np.array([theta]))[0])
        return k, k

    def hess_gauge_many(self, pts):
        """Analytic Hessian of the gauge (1 < p < inf); used by blends."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        p = self.p
        ax = np.abs(pts)
        phi = ax[:, 0] ** p + ax[:, 1] ** p
        a = (p - 1.0) * (phi ** (1.0 / p - 1.0))[:, None] * ax ** (p - 2.0)
        b = (p - 1.0) * (phi ** (1.0 / p - 2.0))[:, None, None]
        signed = np.sign(pts) * ax ** (p - 1.0)
        hess = -b * (signed[:, :, None] * signed[:, None, :])
        hess[:, 0, 0] += a[:, 0]
        hess[:, 1, 1] += a[:, 1]
        return hess


def _lp_sphere_kappa(ax: np.ndarray, p: float) -> np.ndarray:
    """Curvature of the lp sphere at |points| ax (gauge 1), 1 < p < inf."""
    lo = ax.min(axis=1)
    hi = ax.max(axis=1)
    with np.errstate(divide="ignore", over="ignore"):
        t1 = lo ** (p - 2.0) * hi ** (2.0 * p - 2.0)
        t2 = lo ** (2.0 * p - 2.0) * hi ** (p - 2.0)
        den = (lo ** (2.0 * p - 2.0) + hi ** (2.0 * p - 2.0)) ** 1.5
        out = (p - 1.0) * (t1 + t2) / den
    on_axis = lo == 0.0
    if np.any(on_axis):
        out = out.copy()
        out[on_axis] = INF if p < 2.0 else 0.0
    out[out > CURVATURE_CAP] = INF
    return out


def make_lp(p) -> LpNorm:
    """lp plane, p in [1, inf]; p may be the string or float 'inf'."""
    if isinstance(p, str):
        if p != "inf":
            raise BadParameter(f"unrecognized p {p!r}")
        p = INF
    return LpNorm(float(p)).validate()


# -- polar profile ---------------------------------------------------------


class PolarNorm(NormModel):
    """Gauge r / g(theta) for a positive pi-periodic trigonometric profile."""

    family = "polar"
    is_c2 = True

    def __init__(self, constant, cos_terms, sin_terms):
        super().__init__(
            {
                "constant": constant,
                "cos": dict(cos_terms),
                "sin": dict(sin_terms),
            }
        )
        self.constant = float(constant)
        self.cos_terms = tuple((int(n), float(a)) for n, a in dict(cos_terms).items())
        self.sin_terms = tuple((int(n), float(a)) for n, a in dict(sin_terms).items())

    def g_many(self, thetas, order: int = 0) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        out = np.full_like(thetas, self.constant if order == 0 else 0.0)
        for n, a in self.cos_terms:
            if order % 4 == 0:
                out += a * n**order * np.cos(n * thetas)
            elif order % 4 == 1:
                out -= a * n**order * np.sin(n * thetas)
            elif order % 4 == 2:
                out -= a * n**order * np.cos(n * thetas)
            else:
                out += a * n**order * np.sin(n * thetas)
        for n, a in self.sin_terms:
            if order % 4 == 0:
                out += a * n**order * np.sin(n * thetas)
            elif order % 4 == 1:
                out += a * n**order * np.cos(n * thetas)
            elif order % 4 == 2:
                out -= a * n**order * np.sin(n * thetas)
            else:
                out -= a * n**order * np.cos(n * thetas)
        return out

    def _gauge_raw(self, pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        th = np.arctan2(pts[:, 1], pts[:, 0])
        return r / self.g_many(th)

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        th = np.arctan2(pts[:, 1], pts[:, 0])
        g = self.g_many(th)
        gp = self.g_many(th, 1)
        c, s = np.cos(th), np.sin(th)
        return np.column_stack([(c * g + gp * s), (s * g - gp * c)]) / (g * g)[:, None]

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        return curvature_polar_many(
            self.g_many(thetas), self.g_many(thetas, 1), self.g_many(thetas, 2)
        )


def make_polar(sin_terms=(), cos_terms=(), constant: float = 1.0) -> PolarNorm:
    """Polar-profile norm with g = constant + sum of even-harmonic terms.

    ``sin_terms`` / ``cos_terms`` map harmonic index n (even, positive) to an
    amplitude. Rejects odd harmonics (the profile must be pi-periodic) and
    profiles whose convexity expression 2 g'^2 + g^2 - g g'' is not strictly
    positive on the validation grid.
    """
    sin_terms = dict(sin_terms)
    cos_terms = dict(cos_terms)
    for n in list(sin_terms) + list(cos_terms):
        if int(n) <= 0 or int(n) % 2 == 1:
            raise NotPeriodic(f"harmonic {n} breaks pi-periodicity")
    model = PolarNorm(constant, cos_terms, sin_terms)
    grid = (np.arange(4096) + 0.5) * (2.0 * np.pi / 4096)
    g = model.g_many(grid)
    if np.any(g <= 0):
        raise NotConvex("profile g is not positive")
    gp = model.g_many(grid, 1)
    gpp = model.g_many(grid, 2)
    expr = 2.0 * gp * gp + g * g - g * gpp
    if np.any(expr <= 0):
        raise NotConvex("convexity expression 2g'^2 + g^2 - g g'' fails on grid")
    return model.validate()


# -- quadrant mixes ---------------------------------------------------------


class QuadrantMixNorm(NormModel):
    """lp in quadrants I/III, lq in II/IV (1 < p, q < inf)."""

    family = "quadrant_mix"

    def __init__(self, p: float, q: float):
        super().__init__({"p": p, "q": q})
        self.p = float(p)
        self.q = float(q)
        self._lp = LpNorm(self.p)
        self._lq = LpNorm(self.q)

    def _mask(self, pts):
        return pts[:, 0] * pts[:, 1] >= 0.0

    def _gauge_raw(self, pts):
        return np.where(self._mask(pts), self._lp._gauge_raw(pts), self._lq._gauge_raw(pts))

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        m = self._mask(pts)[:, None]
        return np.where(m, self._lp.grad_many(pts), self._lq.grad_many(pts))

    def feature_thetas(self):
        return np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        pts = self.sphere_points_at(thetas)
        ax = np.abs(pts)
        on_axis = ax.min(axis=1) == 0.0
        mask = self._mask(pts)
        out = np.where(mask, _lp_sphere_kappa(ax, self.p), _lp_sphere_kappa(ax, self.q))
        if np.any(on_axis):
            out = out.copy()
            out[on_axis] = max(self._lp._axis_kappa(), self._lq._axis_kappa())
        return out

    def curvature_sided(self, theta):
        pts = self.sphere_points_at(np.array([theta]))[0]
        if min(abs(pts[0]), abs(pts[1])) < 1e-12:
            ks = sorted([self._lp._axis_kappa(), self._lq._axis_kappa()])
            return ks[0], ks[1]
        k = float(self.curvature_theta_many(np.array([theta]))[0])
        return k, k


def make_quadrant_mix(p: float, q: float) -> QuadrantMixNorm:
    if not (1.0 < p < INF and 1.0 < q < INF):
        raise BadParameter("quadrant mix needs 1 < p, q < inf; see the l2/l1 hybrid for the polyhedral case")
    return QuadrantMixNorm(p, q).validate()


class HybridL2L1Norm(NormModel):
    """Euclidean in quadrants I/III, l1 in II/IV; the classic mixed example."""

    family = "l2_l1_hybrid"

    def __init__(self):
        super().__init__({})

    def _gauge_raw(self, pts):
        l2 = np.hypot(pts[:, 0], pts[:, 1])
        l1 = np.abs(pts).sum(axis=1)
        return np.where(pts[:, 0] * pts[:, 1] >= 0.0, l2, l1)

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = np.hypot(pts[:, 0], pts[:, 1])[:, None]
        g2 = pts / n
        g1 = np.sign(pts) + (pts == 0.0)
        return np.where((pts[:, 0] * pts[:, 1] >= 0.0)[:, None], g2, g1)

    def kink_thetas(self):
        return np.array([0.0, np.pi / 2, np.pi, 3 * np.pi / 2])

    def one_sided_supports(self, theta):
        c, s = math.cos(theta), math.sin(theta)
        if abs(c) > abs(s):  # (+-1, 0)
            sg = math.copysign(1.0, c)
            return np.array([sg, -sg]), np.array([sg, 0.0])
        sg = math.copysign(1.0, s)
        return np.array([0.0, sg]), np.array([-sg, sg])

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        pts = self.sphere_points_at(thetas)
        out = np.where(pts[:, 0] * pts[:, 1] > 0.0, 1.0, 0.0)
        on_axis = np.abs(pts).min(axis=1) < 1e-12
        out[on_axis] = INF
        return out

    def curvature_sided(self, theta):
        pts = self.sphere_points_at(np.array([theta]))[0]
        if min(abs(pts[0]), abs(pts[1])) < 1e-12:
            return 0.0, INF
        k = float(self.curvature_theta_many(np.array([theta]))[0])
        return k, k


def make_l2_l1_hybrid() -> HybridL2L1Norm:
    return HybridL2L1Norm().validate()


# -- polygons ---------------------------------------------------------------


class PolygonNorm(NormModel):
    family = "polygon"
    polyhedral = True

    def __init__(self, vertices: np.ndarray):
        super().__init__({"vertices": [list(map(float, v)) for v in vertices]})
        self.vertices = np.asarray(vertices, dtype=float)
        m = len(self.vertices)
        normals = []
        for j in range(m):
            a, b = self.vertices[j], self.vertices[(j + 1) % m]
            normals.append(np.linalg.solve(np.vstack([a, b]), np.ones(2)))
        self.normals = np.asarray(normals)

    def _gauge_raw(self, pts):
        return (pts @ self.normals.T).max(axis=1)

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        return self.normals[np.argmax(pts @ self.normals.T, axis=1)]

    def kink_thetas(self):
        th = np.arctan2(self.vertices[:, 1], self.vertices[:, 0]) % (2.0 * np.pi)
        return np.sort(th)

    def one_sided_supports(self, theta):
        th = np.arctan2(self.vertices[:, 1], self.vertices[:, 0]) % (2.0 * np.pi)
        j = int(np.argmin(np.abs((th - theta + np.pi) % (2 * np.pi) - np.pi)))
        m = len(self.vertices)
        return self.normals[(j - 1) % m], self.normals[j]

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        out = np.zeros_like(thetas)
        ks = self.kink_thetas()
        d = np.abs((thetas[:, None] - ks[None, :] + np.pi) % (2 * np.pi) - np.pi)
        out[np.min(d, axis=1) <= 1e-12] = INF
        return out

    def curvature_sided(self, theta):
        d = np.abs((self.kink_thetas() - theta + np.pi) % (2 * np.pi) - np.pi)
        if d.min() <= 1e-9:
            return 0.0, INF
        return 0.0, 0.0


def make_polygon(vertices) -> PolygonNorm:
    """Origin-symmetric convex polygon norm from counterclockwise vertices."""
    v = np.asarray([[as_vec(p).x1, as_vec(p).x2] for p in vertices], dtype=float)
    if len(v) < 4 or len(v) % 2 == 1:
        raise BadParameter("need an even number (>= 4) of vertices")
    for row in v:
        d = np.abs(v + row).sum(axis=1)
        if d.min() > 1e-9:
            raise NotSymmetric(f"vertex {row} has no antipode")
    e = np.roll(v, -1, axis=0) - v
    cross = e[:, 0] * np.roll(e, -1, axis=0)[:, 1] - e[:, 1] * np.roll(e, -1, axis=0)[:, 0]
    if np.any(cross <= 0):
        raise NotConvex("vertices are not strictly convex counterclockwise")
    return PolygonNorm(v).validate()


# -- arc chains --------------------------------------------------------------


@dataclass(frozen=True)
class Arc:
    """Circle arc, traversed counterclockwise around its own center.

    ``start_angle``/``end_angle`` are angles at the center; ``orientation``
    must be +1 (counterclockwise) for unit-sphere chains.
    """

    center: Vec2
    radius: float
    start_angle: float
    end_angle: float
    orientation: int = 1

    def point_at(self, alpha: float) -> np.ndarray:
        return np.array(
            [
                self.center.x1 + self.radius * math.cos(alpha),
                self.center.x2 + self.radius * math.sin(alpha),
            ]
        )

    def start_point(self) -> np.ndarray:
        return self.point_at(self.start_angle)

    def end_point(self) -> np.ndarray:
        return self.point_at(self.end_angle)

    def tangent_at(self, alpha: float) -> np.ndarray:
        return np.array([-math.sin(alpha), math.cos(alpha)])


class _ArcTable:
    """Shared ray-intersection machinery over a list of arcs covering a
    contiguous polar-angle range."""

    def __init__(self, arcs: list[Arc], phi_start: float):
        self.arcs = arcs
        self.centers = np.array([[a.center.x1, a.center.x2] for a in arcs])
        self.radii = np.array([a.radius for a in arcs])
        self.a0 = np.array([a.start_angle for a in arcs])
        self.a1 = np.array([a.end_angle for a in arcs])
        self.phi_start = phi_start
        phis = [phi_start]
        for a in arcs:
            p = a.end_point()
            phi = math.atan2(p[1], p[0])
            phi = phi_start + (phi - phi_start) % (2.0 * np.pi)
            # unwrap monotonically
            while phi < phis[-1] - 1e-12:
                phi += 2.0 * np.pi
            phis.append(phi)
        self.phi_bounds = np.asarray(phis)

    def span(self) -> float:
        return self.phi_bounds[-1] - self.phi_bounds[0]

    def arc_index(self, thetas: np.ndarray) -> np.ndarray:
        rel = (np.asarray(thetas) - self.phi_start) % (2.0 * np.pi)
        if self.span() < 2.0 * np.pi - 1e-9:  # partial cover (quadrant tables)
            rel = np.clip(rel, 0.0, self.span())
        idx = np.searchsorted(self.phi_bounds[1:-1] - self.phi_start, rel, side="right")
        return np.clip(idx, 0, len(self.arcs) - 1)

    def radial(self, thetas: np.ndarray) -> np.ndarray:
        thetas = np.asarray(thetas, dtype=float)
        idx = self.arc_index(thetas)
        u = np.column_stack([np.cos(thetas), np.sin(thetas)])
        c = self.centers[idx]
        r = self.radii[idx]
        b = np.einsum("ij,ij->i", u, c)
        disc = np.sqrt(np.maximum(b * b - np.einsum("ij,ij->i", c, c) + r * r, 0.0))
        t_far = b + disc
        t_near = b - disc
        # pick the root whose center angle lies on the arc (wrap-tolerant at
        # the arc endpoints, where float noise can land just below a0)
        alpha_far = np.arctan2(
            t_far * u[:, 1] - c[:, 1], t_far * u[:, 0] - c[:, 0]
        )
        rel = (alpha_far - self.a0[idx]) % (2.0 * np.pi)
        span = self.a1[idx] - self.a0[idx]
        ok_far = (rel <= span + 1e-9) | (rel >= 2.0 * np.pi - 1e-9)
        t = np.where(ok_far & (t_far > 0), t_far, t_near)
        return t

    def junction_thetas(self) -> np.ndarray:
        return self.phi_bounds[1:-1] % (2.0 * np.pi)

    def midpoint_thetas(self) -> np.ndarray:
        mids = []
        for a in self.arcs:
            p = a.point_at(0.5 * (a.start_angle + a.end_angle))
            mids.append(math.atan2(p[1], p[0]) % (2.0 * np.pi))
        return np.asarray(mids)


class ArcChainNorm(NormModel):
    """Norm whose unit sphere is a closed G1 chain of circle arcs."""

    family = "arc_chain"

    def __init__(self, arcs: list[Arc], params: dict | None = None):
        super().__init__(
            params
            if params is not None
            else {
                "arcs": [
                    [a.center.x1, a.center.x2, a.radius, a.start_angle, a.end_angle]
                    for a in arcs
                ]
            }
        )
        p0 = arcs[0].start_point()
        self.table = _ArcTable(arcs, math.atan2(p0[1], p0[0]))
        self.arcs = arcs

    def _gauge_raw(self, pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        th = np.arctan2(pts[:, 1], pts[:, 0])
        out = np.zeros_like(r)
        nz = r > 0
        out[nz] = r[nz] / self.table.radial(th[nz])
        return out

    def radial_many(self, thetas):
        return self.table.radial(np.asarray(thetas, dtype=float))

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        th = np.arctan2(pts[:, 1], pts[:, 0])
        idx = self.table.arc_index(th)
        rad = self.table.radial(th)
        u = np.column_stack([np.cos(th), np.sin(th)])
        boundary = u * rad[:, None]
        n = (boundary - self.table.centers[idx]) / self.table.radii[idx][:, None]
        pair = np.einsum("ij,ij->i", n, boundary)
        return n / pair[:, None]

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        return 1.0 / self.table.radii[self.table.arc_index(thetas)]

    def curvature_sided(self, theta):
        eps = 1e-9
        ks = 1.0 / self.table.radii[self.table.arc_index(np.array([theta - eps, theta + eps]))]
        return float(ks.min()), float(ks.max())

    def feature_thetas(self):
        return np.sort(
            np.concatenate([self.table.junction_thetas(), self.table.midpoint_thetas()])
        )


def make_arc_chain(arcs) -> ArcChainNorm:
    """Validated arc-chain norm; the chain must close counterclockwise, be
    origin-symmetric, meet with matching tangents, and turn through 2 pi."""
    arcs = list(arcs)
    if not arcs:
        raise BadParameter("empty arc list")
    for a in arcs:
        if a.radius <= 0:
            raise BadParameter("arc radius must be positive")
        if a.orientation != 1:
            raise BadParameter("arcs must be oriented counterclockwise")
        if a.end_angle <= a.start_angle + 1e-12:
            raise BadParameter("arc has no angular extent")
    n = len(arcs)
    for j in range(n):
        a, b = arcs[j], arcs[(j + 1) % n]
        if np.max(np.abs(a.end_point() - b.start_point())) > 1e-9:
            raise NotClosed(f"arcs {j} and {(j + 1) % n} do not meet")
        if np.max(np.abs(a.tangent_at(a.end_angle) - b.tangent_at(b.start_angle))) > TANGENT_TOL:
            raise TangentBreak(f"tangent jump between arcs {j} and {(j + 1) % n}")
    turning = sum(a.end_angle - a.start_angle for a in arcs)
    if abs(turning - 2.0 * np.pi) > 1e-9:
        raise NotConvex(f"total turning {turning!r} is not 2 pi")
    for a in arcs:
        mirrored = False
        for b in arcs:
            if (
                abs(a.center.x1 + b.center.x1) < 1e-9
                and abs(a.center.x2 + b.center.x2) < 1e-9
                and abs(a.radius - b.radius) < 1e-9
            ):
                mirrored = True
                break
        if not mirrored:
            raise NotSymmetric("chain is not symmetric under v -> -v")
    return ArcChainNorm(arcs).validate()


def make_spliced_arcs(radius: float = 2.0, junction_angle: float = -np.pi / 4) -> ArcChainNorm:
    """Two-arcs-per-quadrant sphere: a big circle through (0, -1) spliced with
    a smaller one meeting the positive x-axis at a right angle.

    ``radius`` is the big-circle radius R > 1; ``junction_angle`` the angle of
    the splice point seen from the big circle's center (0, R - 1), which must
    put the splice point in the open fourth quadrant.
    """
    r = float(radius)
    if r <= 1.0:
        raise BadParameter("radius must exceed 1")
    a = np.array([0.0, r - 1.0])
    b = a + r * np.array([math.cos(junction_angle), math.sin(junction_angle)])
    if not (b[0] > 0 and b[1] < 0):
        raise BadParameter("junction point must lie in the open fourth quadrant")
    t = a[1] / (a[1] - b[1])
    c = a + t * (b - a)  # on the x-axis
    r2 = float(np.hypot(*(c - b)))
    phi_b = math.atan2(b[1] - c[1], b[0] - c[0])
    q4 = [
        Arc(Vec2(a[0], a[1]), r, -np.pi / 2, junction_angle),
        Arc(Vec2(c[0], c[1]), r2, phi_b, 0.0),
    ]
    params = {"radius": r, "junction_angle": float(junction_angle)}
    return make_arc_chain(_reflect_q4_chain(q4))._replace_params(params)


def _reflect_q4_chain(q4: list[Arc]) -> list[Arc]:
    """Fourfold reflection of a fourth-quadrant arc run into a closed chain.

    The run must go from the negative y-axis to the positive x-axis. The
    first-quadrant part mirrors across the x-axis (reversed), the left half
    is the point reflection of the right half.
    """
    q1 = []
    for a in reversed(q4):
        q1.append(
            Arc(
                Vec2(a.center.x1, -a.center.x2),
                a.radius,
                -a.end_angle,
                -a.start_angle,
            )
        )
    right = q4 + q1
    left = [
        Arc(
            Vec2(-a.center.x1, -a.center.x2),
            a.radius,
            a.start_angle + np.pi,
            a.end_angle + np.pi,
        )
        for a in right
    ]
    return right + left


# -- quadrant-curve norms (fourth-quadrant arcs plus fourfold symmetry) ------


class QuadrantCurveNorm(NormModel):
    """Norm defined by a fourth-quadrant boundary curve (as arcs) and the
    reflection rule gauge(x) = gauge(|x1|, -|x2|)."""

    family = "curve_norm"

    def __init__(self, q4_arcs: list[Arc], params: dict):
        super().__init__(params)
        self.q4_arcs = q4_arcs
        self.table = _ArcTable(q4_arcs, -np.pi / 2)

    def _fold(self, pts):
        return np.column_stack([np.abs(pts[:, 0]), -np.abs(pts[:, 1])])

    def _gauge_raw(self, pts):
        w = self._fold(pts)
        r = np.hypot(w[:, 0], w[:, 1])
        th = np.arctan2(w[:, 1], w[:, 0])
        out = np.zeros_like(r)
        nz = r > 0
        out[nz] = r[nz] / self.table.radial(th[nz])
        return out

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        w = self._fold(pts)
        th = np.arctan2(w[:, 1], w[:, 0])
        idx = self.table.arc_index(th)
        rad = self.table.radial(th)
        u = np.column_stack([np.cos(th), np.sin(th)])
        boundary = u * rad[:, None]
        nq = (boundary - self.table.centers[idx]) / self.table.radii[idx][:, None]
        pair = np.einsum("ij,ij->i", nq, boundary)
        nq = nq / pair[:, None]
        # chain rule through the fold (x1, x2) -> (|x1|, -|x2|)
        sx = np.where(pts[:, 0] >= 0.0, 1.0, -1.0)
        sy = np.where(pts[:, 1] >= 0.0, 1.0, -1.0)
        return np.column_stack([nq[:, 0] * sx, -nq[:, 1] * sy])

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        pts = self.sphere_points_at(thetas)
        w = self._fold(pts)
        th = np.arctan2(w[:, 1], w[:, 0])
        return 1.0 / self.table.radii[self.table.arc_index(th)]

    def curvature_sided(self, theta):
        eps = 1e-9
        ks = self.curvature_theta_many(np.array([theta - eps, theta + eps]))
        return float(ks.min()), float(ks.max())

    def feature_thetas(self):
        qs = np.concatenate([self.table.junction_thetas(), self.table.midpoint_thetas()])
        qs = np.concatenate([qs, -qs, np.pi - qs, np.pi + qs])
        return np.sort(qs % (2.0 * np.pi))

    def theta_of_arclength(self, s: float) -> float:
        """Polar parameter of the fourth-quadrant curve point at arc length s
        from (0, -y0); used to address staircase arcs directly."""
        remaining = float(s)
        for a in self.table.arcs:
            length = a.radius * (a.end_angle - a.start_angle)
            if remaining <= length or a is self.table.arcs[-1]:
                alpha = a.start_angle + remaining / a.radius
                p = a.point_at(min(alpha, a.end_angle))
                return math.atan2(p[1], p[0]) % (2.0 * np.pi)
            remaining -= length
        raise OutOfDomain("arc length beyond the quadrant curve")


# -- ellipse intersections ---------------------------------------------------


class EllipseMaxNorm(NormModel):
    """Gauge max(|v|_E1, |v|_E2): intersection of two ellipse balls."""

    family = "ellipse_intersection"

    def __init__(self, m1, m2):
        m1 = np.asarray(m1, dtype=float)
        m2 = np.asarray(m2, dtype=float)
        super().__init__({"m1": m1.tolist(), "m2": m2.tolist()})
        self.m1 = m1
        self.m2 = m2
        self.single = np.allclose(m1, m2, rtol=0, atol=1e-14)
        self.is_c2 = self.single
        self._kinks = None

    def _forms(self, pts):
        q1 = np.einsum("ij,jk,ik->i", pts, self.m1, pts)
        q2 = np.einsum("ij,jk,ik->i", pts, self.m2, pts)
        return q1, q2

    def _gauge_raw(self, pts):
        q1, q2 = self._forms(pts)
        return np.sqrt(np.maximum(q1, q2))

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        q1, q2 = self._forms(pts)
        g = np.sqrt(np.maximum(q1, q2))
        pick = (q1 >= q2)[:, None]
        mv = np.where(pick, pts @ self.m1.T, pts @ self.m2.T)
        return mv / g[:, None]

    def kink_thetas(self):
        if self.single:
            return np.empty(0)
        if self._kinks is None:
            grid = (np.arange(8192) + 0.5) * (2.0 * np.pi / 8192)
            units = np.column_stack([np.cos(grid), np.sin(grid)])
            q1, q2 = self._forms(units)
            d = q1 - q2
            sign_change = np.where(d * np.roll(d, -1) < 0)[0]
            kinks = []
            from .numerics import bisect_batch

            for j in sign_change:
                lo, hi = grid[j], grid[j] + 2.0 * np.pi / 8192

                def f(ts):
                    u = np.column_stack([np.cos(ts), np.sin(ts)])
                    a, b = self._forms(u)
                    return (a - b) * (1 if d[j] < 0 else -1)

                kinks.append(float(bisect_batch(f, np.array([lo]), np.array([hi]))[0]))
            self._kinks = np.sort(np.asarray(kinks) % (2.0 * np.pi))
        return self._kinks

    def one_sided_supports(self, theta):
        p = self.sphere_points_at(np.array([theta]))[0]
        f1 = self.m1 @ p / (p @ self.m1 @ p)
        f2 = self.m2 @ p / (p @ self.m2 @ p)
        eps = 1e-7
        pm = self.sphere_points_at(np.array([theta - eps]))[0]
        q1, q2 = self._forms(pm[None, :])
        return (f1, f2) if q1[0] >= q2[0] else (f2, f1)

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        pts = self.sphere_points_at(thetas)
        q1, q2 = self._forms(pts)
        out = np.empty_like(thetas)
        for mask, m in ((q1 >= q2, self.m1), (q1 < q2, self.m2)):
            if np.any(mask):
                sub = pts[mask]
                grads = 2.0 * sub @ m.T
                num = np.abs(
                    2 * m[0, 0] * grads[:, 1] ** 2
                    - 2 * 2 * m[0, 1] * grads[:, 0] * grads[:, 1]
                    + grads[:, 0] ** 2 * 2 * m[1, 1]
                )
                out[mask] = num / (grads[:, 0] ** 2 + grads[:, 1] ** 2) ** 1.5
        ks = self.kink_thetas()
        if ks.size:
            d = np.abs((thetas[:, None] - ks[None, :] + np.pi) % (2 * np.pi) - np.pi)
            out[np.min(d, axis=1) <= 1e-12] = INF
        return out


def make_ellipse_pair(m1, m2) -> EllipseMaxNorm:
    """Intersection of two origin-centered ellipse balls, given as symmetric
    positive-definite 2x2 forms."""
    for m in (m1, m2):
        m = np.asarray(m, dtype=float)
        if m.shape != (2, 2) or abs(m[0, 1] - m[1, 0]) > 1e-14:
            raise BadParameter("forms must be symmetric 2x2")
        if np.linalg.eigvalsh(m).min() <= 0:
            raise BadParameter("forms must be positive definite")
    return EllipseMaxNorm(m1, m2).validate()


def make_ellipse(semi_axis_x: float, semi_axis_y: float, angle: float = 0.0) -> EllipseMaxNorm:
    """Single origin-centered ellipse norm with the given semi-axes."""
    if semi_axis_x <= 0 or semi_axis_y <= 0:
        raise BadParameter("semi-axes must be positive")
    from .numerics import rotation

    r = rotation(angle)
    m = r @ np.diag([semi_axis_x**-2.0, semi_axis_y**-2.0]) @ r.T
    return make_ellipse_pair(m, m)


# -- blends ------------------------------------------------------------------


class BlendNorm(NormModel):
    """sqrt(base^2 + eps * euclidean^2); strictly positively curved for C2 bases."""

    family = "blend"

    def __init__(self, base: NormModel, eps: float):
        super().__init__({"eps": eps, "base": dict(base.params), "base_family": base.family})
        self.base = base
        self.eps = float(eps)
        self.is_c2 = base.is_c2 or isinstance(base, LpNorm) and base.p >= 2.0

    def _gauge_raw(self, pts):
        b = self.base.gauge_many(pts)
        r2 = pts[:, 0] ** 2 + pts[:, 1] ** 2
        return np.sqrt(b * b + self.eps * r2)

    def grad_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        gb = self.base.grad_many(pts)
        if gb is None:
            return None
        b = self.base.gauge_many(pts)
        g = np.sqrt(b * b + self.eps * (pts[:, 0] ** 2 + pts[:, 1] ** 2))
        return (b[:, None] * gb + self.eps * pts) / g[:, None]

    def curvature_theta_many(self, thetas):
        thetas = np.asarray(thetas, dtype=float)
        base = self.base
        if isinstance(base, LpNorm) and 2.0 <= base.p < INF:
            pts = self.sphere_points_at(thetas)
            n = base.gauge_many(pts)
            gn = base.grad_many(pts)
            hn = base.hess_gauge_many(pts)
            grad = 2.0 * n[:, None] * gn + 2.0 * self.eps * pts
            outer = gn[:, :, None] * gn[:, None, :]
            hess = 2.0 * (outer + n[:, None, None] * hn)
            hess[:, 0, 0] += 2.0 * self.eps
            hess[:, 1, 1] += 2.0 * self.eps
            return np.array(
                [curvature_implicit(grad[i], hess[i]) for i in range(len(thetas))]
            )
        return super().curvature_theta_many(thetas)


def make_blend(base: NormModel, eps: float) -> BlendNorm:
    """Blend of a validated base model with the Euclidean norm."""
    if eps < 0:
        raise BadParameter("eps must be nonnegative")
    if eps == 0.0:
        return base
    return BlendNorm(base, eps).validate()


# -- numerically sampled duals ------------------------------------------------


class DualNorm(NormModel):
    """Dual gauge of a base model, sampled once and interpolated.

    The radial table is computed with the exact support-maximization routine
    on a dense grid; a periodic cubic spline then serves gauge queries. The
    table resolution keeps interpolation error near 1e-12 for smooth bases.
    """

    family = "dual"

    def __init__(self, base: NormModel, table_n: int = 8192):
        super().__init__({"base": dict(base.params), "base_family": base.family})
        self.base = base
        from scipy.interpolate import CubicSpline

        thetas = np.arange(table_n + 1) * (2.0 * np.pi / table_n)
        units = np.column_stack([np.cos(thetas[:-1]), np.sin(thetas[:-1])])
        vals = geometry.dual_gauge_many(base, units)
        rho = 1.0 / vals
        self._spline = CubicSpline(
            thetas, np.concatenate([rho, rho[:1]]), bc_type="periodic"
        )
        self.is_c2 = base.is_c2

    def _gauge_raw(self, pts):
        r = np.hypot(pts[:, 0], pts[:, 1])
        th = np.arctan2(pts[:, 1], pts[:, 0]) % (2.0 * np.pi)
        out = np.zeros_like(r)
        nz = r > 0
        out[nz] = r[nz] / self._spline(th[nz])
        return out


_dual_cache: dict[int, NormModel] = {}


def dual_model(model: NormModel) -> NormModel:
    """The dual plane as a first-class model (one instance per base model).

    Exact for lp (conjugate exponent), quadrant mixes (conjugates quadrantwise),
    polygons (dual polygon), and single ellipses (inverse form); numerically
    sampled otherwise.
    """
    key = id(model)
    if key in _dual_cache:
        return _dual_cache[key]
    dual = _dual_model(model)
    _dual_cache[key] = dual
    return dual


def _dual_model(model: NormModel) -> NormModel:
    if isinstance(model, LpNorm):
        if model.p == 1.0:
            return make_lp(INF)
        if model.p == INF:
            return make_lp(1.0)
        return make_lp(model.p / (model.p - 1.0))
    if isinstance(model, QuadrantMixNorm):
        return make_quadrant_mix(model.p / (model.p - 1.0), model.q / (model.q - 1.0))
    if isinstance(model, PolygonNorm):
        return make_polygon(model.normals)
    if isinstance(model, EllipseMaxNorm) and model.single:
        m = np.linalg.inv(model.m1)
        return make_ellipse_pair(m, m)
    if isinstance(model, DualNorm):
        return model.base
    return DualNorm(model).validate()
