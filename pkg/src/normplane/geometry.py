"""Vectors, linear maps, gauge evaluation, sphere parametrization, support
functionals, and gauge-relative operator norms.

Models are duck-typed here: anything with the NormModel surface from
``normplane.models`` works. Functionals are represented as plain vectors via
the dot-product pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Singular
from .numerics import golden_max, golden_max_batch

#: support functionals differing by more than this (in sup norm) mark a kink
SMOOTH_JUMP_TOL = 1e-6

#: finite-difference step for support functionals without analytic gradients
FD_STEP = 1e-5

#: declared invertibility threshold for 2x2 maps
DET_TOL = 1e-12

#: coarse grid sizes
DUAL_GAUGE_GRID = 2048
OPNORM_GRID = 4096


@dataclass(frozen=True)
class Vec2:
    """A point of the plane; doubles as a functional via the dot pairing."""

    x1: float
    x2: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x1, self.x2])

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x1 + other.x1, self.x2 + other.x2)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x1 - other.x1, self.x2 - other.x2)

    def __neg__(self) -> "Vec2":
        return Vec2(-self.x1, -self.x2)

    def scale(self, t: float) -> "Vec2":
        return Vec2(t * self.x1, t * self.x2)

    def dot(self, other: "Vec2") -> float:
        return self.x1 * other.x1 + self.x2 * other.x2

    def cross(self, other: "Vec2") -> float:
        return self.x1 * other.x2 - self.x2 * other.x1

    def norm2(self) -> float:
        return math.hypot(self.x1, self.x2)

    def perp(self) -> "Vec2":
        """Counterclockwise quarter turn."""
        return Vec2(-self.x2, self.x1)


def as_vec(v) -> Vec2:
    if isinstance(v, Vec2):
        return v
    x1, x2 = v
    return Vec2(float(x1), float(x2))


@dataclass(frozen=True)
class LinearMap2:
    """A 2x2 linear map acting on Vec2 by columns-times-coordinates."""

    m11: float
    m12: float
    m21: float
    m22: float

    @staticmethod
    def from_matrix(mat) -> "LinearMap2":
        m = np.asarray(mat, dtype=float)
        return LinearMap2(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @staticmethod
    def identity() -> "LinearMap2":
        return LinearMap2(1.0, 0.0, 0.0, 1.0)

    def matrix(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m21, self.m22]])

    def apply(self, v: Vec2) -> Vec2:
        return Vec2(
            self.m11 * v.x1 + self.m12 * v.x2,
            self.m21 * v.x1 + self.m22 * v.x2,
        )

    def det(self) -> float:
        return self.m11 * self.m22 - self.m12 * self.m21

    def is_invertible(self) -> bool:
        return abs(self.det()) > DET_TOL

    def inverse(self) -> "LinearMap2":
        d = self.det()
        if abs(d) <= DET_TOL:
            raise Singular(f"determinant {d!r} below threshold")
        return LinearMap2(self.m22 / d, -self.m12 / d, -self.m21 / d, self.m11 / d)

    def compose(self, other: "LinearMap2") -> "LinearMap2":
        """self after other."""
        return LinearMap2.from_matrix(self.matrix() @ other.matrix())


@dataclass(frozen=True)
class Disc:
    """Euclidean disc, used for inner/outer tangency certificates."""

    center: Vec2
    radius: float


@dataclass(frozen=True)
class SpherePoint:
    """A unit-sphere point with its supporting data.

    ``support`` is the support functional as a vector (pairing value 1 at the
    point); ``tangent`` the gauge-unit tangent oriented counterclockwise;
    ``curvature`` the Euclidean curvature of the sphere there (may be inf).
    """

    theta: float
    point: Vec2
    support: Vec2
    tangent: Vec2
    curvature: float
    smooth: bool


def gauge(model, v) -> float:
    """The model's norm of v (Minkowski functional of the unit ball)."""
    v = as_vec(v)
    return float(model.gauge_many(np.array([[v.x1, v.x2]]))[0])


def gauge_many(model, points: np.ndarray) -> np.ndarray:
    return model.gauge_many(points)


def dual_gauge(model, f) -> float:
    """sup{<f, y> : gauge(y) <= 1}, by coarse grid plus golden refinement."""
    f = as_vec(f)
    if f.x1 == 0.0 and f.x2 == 0.0:
        return 0.0
    thetas = (np.arange(DUAL_GAUGE_GRID) + 0.5) * (2.0 * np.pi / DUAL_GAUGE_GRID)
    pts = model.sphere_points_at(thetas)
    vals = pts @ np.array([f.x1, f.x2])
    j = int(np.argmax(vals))
    h = 2.0 * np.pi / DUAL_GAUGE_GRID

    def val(t: float) -> float:
        p = model.sphere_points_at(np.array([t]))[0]
        return p[0] * f.x1 + p[1] * f.x2

    _, best = golden_max(val, thetas[j] - h, thetas[j] + h)
    return float(max(best, vals[j]))


def dual_gauge_many(model, fs: np.ndarray) -> np.ndarray:
    """Batched dual gauge; same grid-plus-golden scheme, vectorized."""
    fs = np.asarray(fs, dtype=float)
    thetas = (np.arange(DUAL_GAUGE_GRID) + 0.5) * (2.0 * np.pi / DUAL_GAUGE_GRID)
    pts = model.sphere_points_at(thetas)
    vals = fs @ pts.T
    j = np.argmax(vals, axis=1)
    h = 2.0 * np.pi / DUAL_GAUGE_GRID

    def val(ts):
        p = model.sphere_points_at(ts)
        return np.einsum("ij,ij->i", fs, p)

    _, best = golden_max_batch(val, thetas[j] - h, thetas[j] + h)
    zero = np.hypot(fs[:, 0], fs[:, 1]) == 0.0
    out = np.maximum(best, vals[np.arange(len(fs)), j])
    out[zero] = 0.0
    return out


def _supports_many(model, thetas: np.ndarray) -> np.ndarray:
    """Support functionals at sphere points, analytic or finite-difference.

    Finite differences use step FD_STEP with one Richardson level, then the
    pairing is renormalized to exactly 1.
    """
    pts = model.sphere_points_at(thetas)
    grads = model.grad_many(pts)
    if grads is None:
        grads = _fd_grad_many(model, pts)
    pairing = np.einsum("ij,ij->i", grads, pts)
    return grads / pairing[:, None]


def _fd_grad_many(model, pts: np.ndarray) -> np.ndarray:
    def diff(h: float) -> np.ndarray:
        e1 = np.array([h, 0.0])
        e2 = np.array([0.0, h])
        gx = (model.gauge_many(pts + e1) - model.gauge_many(pts - e1)) / (2 * h)
        gy = (model.gauge_many(pts + e2) - model.gauge_many(pts - e2)) / (2 * h)
        return np.column_stack([gx, gy])

    d1 = diff(FD_STEP)
    d2 = diff(FD_STEP / 2.0)
    return (4.0 * d2 - d1) / 3.0


def sphere_point(model, theta: float) -> SpherePoint:
    """The unit-sphere point at Euclidean polar parameter theta.

    Non-smooth points are flagged rather than raised: ``support`` is then the
    average of the one-sided limits.
    """
    theta = float(theta)
    pt = model.sphere_points_at(np.array([theta]))[0]
    kink = model.kink_at(theta)
    if kink is not None:
        f_lo, f_hi = kink
        support = 0.5 * (np.asarray(f_lo) + np.asarray(f_hi))
        support = support / float(support @ pt)
        smooth = bool(np.max(np.abs(np.asarray(f_hi) - np.asarray(f_lo))) <= SMOOTH_JUMP_TOL)
    else:
        support = _supports_many(model, np.array([theta]))[0]
        smooth = True
    tdir = np.array([-support[1], support[0]])
    tangent = tdir / model.gauge_many(tdir[None, :])[0]
    kappa = float(model.curvature_theta_many(np.array([theta]))[0])
    return SpherePoint(
        theta=theta,
        point=Vec2(float(pt[0]), float(pt[1])),
        support=Vec2(float(support[0]), float(support[1])),
        tangent=Vec2(float(tangent[0]), float(tangent[1])),
        curvature=kappa,
        smooth=smooth,
    )


def sphere_table(model, n: int) -> dict:
    """Vectorized sphere data on the phase-offset n-grid (cache builder)."""
    thetas = (np.arange(n) + 0.5) * (2.0 * np.pi / n)
    pts = model.sphere_points_at(thetas)
    supports = _supports_many(model, thetas)
    tdirs = np.column_stack([-supports[:, 1], supports[:, 0]])
    tangents = tdirs / model.gauge_many(tdirs)[:, None]
    kappas = model.curvature_theta_many(thetas)
    return {
        "thetas": thetas,
        "points": pts,
        "supports": supports,
        "tangents": tangents,
        "kappas": kappas,
    }


class OperatorNorm(float):
    """Operator norm value carrying the maximizing angle as a witness."""

    witness_angle: float

    def __new__(cls, value: float, witness_angle: float):
        obj = super().__new__(cls, value)
        obj.witness_angle = float(witness_angle)
        return obj


def operator_norm(model, t) -> OperatorNorm:
    """sup of gauge(T z) over the gauge-unit sphere, grid plus refinement."""
    mat = t.matrix() if isinstance(t, LinearMap2) else np.asarray(t, dtype=float)
    thetas = (np.arange(OPNORM_GRID) + 0.5) * (2.0 * np.pi / OPNORM_GRID)
    pts = model.sphere_points_at(thetas)
    vals = model.gauge_many(pts @ mat.T)
    j = int(np.argmax(vals))
    h = 2.0 * np.pi / OPNORM_GRID

    def val(th: float) -> float:
        p = model.sphere_points_at(np.array([th]))
        return float(model.gauge_many(p @ mat.T)[0])

    angle, best = golden_max(val, thetas[j] - h, thetas[j] + h)
    if vals[j] >= best:
        angle, best = thetas[j], vals[j]
    return OperatorNorm(float(best), angle)


def operator_norm_batch(model, mats: np.ndarray, coarse: int = 512) -> np.ndarray:
    """Operator norms of a batch of 2x2 matrices (shape (k, 2, 2)).

    Coarse grid localizes the maximizer, a batched golden refinement drives
    accuracy; used by sweep-style callers where the one-at-a-time path would
    dominate the runtime.
    """
    mats = np.asarray(mats, dtype=float)
    k = mats.shape[0]
    thetas = (np.arange(coarse) + 0.5) * (2.0 * np.pi / coarse)
    pts = model.sphere_points_at(thetas)
    imgs = np.einsum("kab,jb->kja", mats, pts).reshape(k * coarse, 2)
    vals = model.gauge_many(imgs).reshape(k, coarse)
    j = np.argmax(vals, axis=1)
    h = 2.0 * np.pi / coarse

    def val(ts):
        p = model.sphere_points_at(ts)
        img = np.einsum("kab,kb->ka", mats, p)
        return model.gauge_many(img)

    _, best = golden_max_batch(val, thetas[j] - h, thetas[j] + h)
    return np.maximum(best, vals[np.arange(k), j])
