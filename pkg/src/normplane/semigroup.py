"""Construction and certification of contractive automorphisms: the tangent
shrink maps, the ellipsoid route between sphere points, flat-point transport,
and orbit reports."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry, tangency
from .errors import (
    Degenerate,
    InfiniteCurvature,
    NonSmoothPoint,
    NotFlat,
    Singular,
    WrongModel,
)
from .geometry import LinearMap2, SpherePoint, Vec2
from .numerics import spd_power

#: a map is accepted as contractive up to this operator-norm slack
CERTIFY_TOL = 1e-7

#: consecutive cache points that must be collinear for the flatness probe
FLAT_WINDOW = 9

#: collinearity tolerance of the flatness probe
FLAT_TOL = 1e-9


@dataclass(frozen=True)
class ContractionCertificate:
    """Operator-norm certificate for a candidate contractive automorphism."""

    T: LinearMap2
    op_norm: float
    inv_norm: float
    is_contractive: bool
    witness_angle: float
    tolerance: float
    boundary: bool = False


@dataclass(frozen=True)
class Reachable:
    """Orbit extent: kind is one of all_sphere / all_but_set /
    dense_candidate / restricted."""

    kind: str
    points: tuple = ()
    description: str = ""


@dataclass(frozen=True)
class OrbitReport:
    x: SpherePoint
    reachable: Reachable
    witnesses: tuple
    bound_K: float | None = None


def perp(model, a: SpherePoint) -> Vec2:
    """The gauge-unit tangent at a, oriented so (a, perp, -a) runs
    counterclockwise."""
    if not a.smooth:
        raise NonSmoothPoint(f"no unique tangent at theta={a.theta!r}")
    return a.tangent


def make_L_ab(model, a: SpherePoint, b: SpherePoint, eps: float) -> LinearMap2:
    """The unique map sending a to b and the tangent at a to (1 - eps) times
    the tangent at b."""
    if eps >= 1.0:
        raise Degenerate("eps = 1 collapses the tangent direction")
    if not (a.smooth and b.smooth):
        raise NonSmoothPoint("shrink maps need unique tangents at both points")
    src = np.column_stack([a.point.as_array(), a.tangent.as_array()])
    dst = np.column_stack([b.point.as_array(), (1.0 - eps) * b.tangent.as_array()])
    return LinearMap2.from_matrix(dst @ np.linalg.inv(src))


def certify(model, t: LinearMap2) -> ContractionCertificate:
    """Operator-norm certificate for t; Singular if t is not invertible."""
    if not t.is_invertible():
        raise Singular(f"determinant {t.det()!r}")
    op = geometry.operator_norm(model, t)
    inv = geometry.operator_norm(model, t.inverse())
    contractive = float(op) <= 1.0 + CERTIFY_TOL
    return ContractionCertificate(
        T=t,
        op_norm=float(op),
        inv_norm=float(inv),
        is_contractive=contractive,
        witness_angle=op.witness_angle,
        tolerance=CERTIFY_TOL,
        boundary=contractive and float(op) > 1.0,
    )


def is_flat(model, y: SpherePoint) -> bool:
    """Flatness probe: a cache window around y lies on one line (both
    consecutive triples and the whole window against its chord)."""
    cache = model.sphere_cache()
    thetas = cache["thetas"]
    n = len(thetas)
    j = int(np.argmin(np.abs((thetas - y.theta + np.pi) % (2 * np.pi) - np.pi)))
    idx = (j + np.arange(-(FLAT_WINDOW // 2), FLAT_WINDOW // 2 + 1)) % n
    pts = cache["points"][idx]
    e = np.diff(pts, axis=0)
    cross = e[:-1, 0] * e[1:, 1] - e[:-1, 1] * e[1:, 0]
    scale = np.einsum("ij,ij->i", e[:-1], e[:-1])
    if not np.all(np.abs(cross) <= FLAT_TOL + FLAT_TOL * scale):
        return False
    chord = pts[-1] - pts[0]
    norm = np.hypot(chord[0], chord[1])
    rel = pts - pts[0]
    dev = np.abs(rel[:, 0] * chord[1] - rel[:, 1] * chord[0]) / norm
    return bool(np.max(dev) <= FLAT_TOL)


def flat_transport(model, x: SpherePoint, y: SpherePoint, eps: float = 0.5) -> ContractionCertificate:
    """Contractive map x -> y onto a flat point: fixes the ray through y and
    squeezes the complement of x's support line into the face direction,
    halving the squeeze until certification passes."""
    if not is_flat(model, y):
        raise NotFlat(f"no supporting-line window at theta={y.theta!r}")
    src = np.column_stack([x.point.as_array(), x.tangent.as_array()])
    ty = y.tangent.as_array()
    e = float(eps)
    last = None
    while e >= 1e-12:
        dst = np.column_stack([y.point.as_array(), e * ty])
        t = LinearMap2.from_matrix(dst @ np.linalg.inv(src))
        last = certify(model, t)
        if last.is_contractive:
            return last
        e *= 0.5
    return last


def orbit_map(model, x: SpherePoint, y: SpherePoint) -> ContractionCertificate | None:
    """A certified contractive automorphism sending x to y, when the
    outer-ellipse-at-x / inner-ellipse-at-y route (or the flat fallback)
    applies; None otherwise."""
    f_outer = tangency.outer_ellipse(model, x)
    e_inner = tangency.inner_ellipse(model, y) if f_outer is not None else None
    if f_outer is None or e_inner is None:
        try:
            cert = flat_transport(model, x, y)
        except NotFlat:
            return None
        return cert if cert is not None and cert.is_contractive else None
    mf = f_outer.matrix()
    me = e_inner.matrix()
    u = spd_power(mf, 0.5) @ x.point.as_array()
    v = spd_power(me, 0.5) @ y.point.as_array()
    angle = math.atan2(u[0] * v[1] - u[1] * v[0], float(u @ v))
    q = np.array(
        [[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]]
    )
    t = LinearMap2.from_matrix(spd_power(me, -0.5) @ q @ spd_power(mf, 0.5))
    cert = certify(model, t)
    mapped = t.apply(x.point)
    if model.gauge(mapped - y.point) > 1e-9 or not cert.is_contractive:
        return None
    return cert


def l1_orbit(model, x: SpherePoint) -> OrbitReport:
    """Exact orbit classification on the diamond norm (lp with p = 1)."""
    from .models import LpNorm

    if not (isinstance(model, LpNorm) and model.p == 1.0):
        raise WrongModel("l1_orbit runs on the p = 1 model only")
    xa = x.point.as_array()
    vertices = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    at_vertex = np.min(np.abs(vertices - xa).sum(axis=1)) <= 1e-9
    witnesses = []
    if at_vertex:
        target = geometry.sphere_point(model, math.atan2(0.5, 0.5))
        witnesses.append((target, flat_transport(model, x, target)))
        return OrbitReport(x, Reachable("all_sphere"), tuple(witnesses))
    if abs(abs(xa[0]) - 0.5) <= 1e-12 and abs(abs(xa[1]) - 0.5) <= 1e-12:
        t1 = LinearMap2.from_matrix(np.array([[1.0, 0.0], [1.0, 2.0]]) / 2.0)
        t2 = LinearMap2.from_matrix(np.array([[3.0, 1.0], [0.0, 2.0]]) / 3.0)
        y1 = t1.apply(x.point)
        witnesses.append(
            (geometry.sphere_point(model, math.atan2(y1.x2, y1.x1)), certify(model, t1))
        )
        witnesses.append((x, certify(model, t2.compose(t1))))
    else:
        target = geometry.sphere_point(model, x.theta + 0.1)
        witnesses.append((target, flat_transport(model, x, target)))
    corners = tuple(Vec2(float(v[0]), float(v[1])) for v in vertices)
    return OrbitReport(x, Reachable("all_but_set", points=corners), tuple(witnesses))


def inv_norm_lower_bound(model, x: SpherePoint, y: SpherePoint) -> float:
    """Heuristic lower bound sqrt(kappa(y) / (c kappa(x))) on the inverse
    norm of contractions sending x to y; c is the squared eccentricity of the
    unit sphere in Euclidean terms. Used only for monotone-growth
    demonstrations, never for verdicts."""
    kx, ky = x.curvature, y.curvature
    if not (np.isfinite(kx) and np.isfinite(ky)) or kx <= 0 or ky <= 0:
        raise InfiniteCurvature("bound needs finite positive curvatures")
    c = _eccentricity_sq(model)
    return math.sqrt(ky / (c * kx))


_ecc_cache: dict[int, float] = {}


def _eccentricity_sq(model) -> float:
    key = id(model)
    if key not in _ecc_cache:
        pts = model.fine_points()
        r = np.hypot(pts[:, 0], pts[:, 1])
        _ecc_cache[key] = float((r.max() / r.min()) ** 2)
    return _ecc_cache[key]
