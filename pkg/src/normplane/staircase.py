"""The slowly-flattening staircase sphere: a curve integrated from a
piecewise-constant curvature function with dyadic flat intervals, closed up
by a tangent pair of circles into a norm whose inner/outer disc ratio blows
up along the staircase.

The curvature function is 2^-n on [2^-n, 2^-n + 2^-n-2] (n up to a
truncation depth) and 1 elsewhere on [-pi/2, 1]. Because it is piecewise
constant, the integrated curve is an exact chain of circle arcs; the
quadrature path exists to cross-check the closed forms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, NotConvex, OutOfDomain, TangencySolveFailed
from .geometry import Vec2
from .models import Arc, QuadrantCurveNorm
from .numerics import simpson
from .semigroup import inv_norm_lower_bound

#: truncation depth: intervals below 2^-19 are dropped. Depth 19 keeps the
#: tangent-angle total within 1e-6 of 5/6 while the flattest arc's outer-disc
#: radius 2^19 stays under the 1e6 operational cap.
DEFAULT_DEPTH = 19

S_MIN = -math.pi / 2.0
S_MAX = 1.0


@dataclass(frozen=True)
class CurvatureFunction:
    """Piecewise-constant curvature on [-pi/2, 1], default value 1."""

    intervals: tuple  # ((lo, hi, value), ...) disjoint, increasing
    n_max: int

    def value(self, s: float) -> float:
        if not (S_MIN <= s <= S_MAX):
            raise OutOfDomain(f"s = {s!r} outside [-pi/2, 1]")
        for lo, hi, v in self.intervals:
            if lo <= s <= hi:
                return v
        return 1.0

    def breakpoints(self) -> np.ndarray:
        pts = [S_MIN, 0.0, S_MAX]
        for lo, hi, _ in self.intervals:
            pts.extend((lo, hi))
        return np.unique(np.asarray(pts))


def staircase_function(n_max: int = DEFAULT_DEPTH) -> CurvatureFunction:
    if n_max < 1:
        raise BadParameter("need at least one staircase interval")
    iv = []
    for n in range(n_max, 0, -1):
        lo = 2.0**-n
        iv.append((lo, lo + 2.0 ** (-n - 2), 2.0**-n))
    return CurvatureFunction(tuple(iv), n_max)


def k_staircase(s: float, n_max: int = DEFAULT_DEPTH) -> float:
    """Curvature value at arc length s (the staircase with truncation n_max)."""
    return staircase_function(n_max).value(s)


@dataclass
class BuiltCurve:
    """Unit-speed curve integrated from a curvature function.

    Samples run over [-pi/2, 1]; K is the tangent angle (integral of k).
    """

    s: np.ndarray
    points: np.ndarray
    K: np.ndarray
    endpoint: Vec2
    endpoint_tangent: Vec2
    kfun: CurvatureFunction = field(repr=False)

    def tangent_angle_at(self, s: float) -> float:
        """Exact tangent angle (k is piecewise constant, so K is piecewise
        linear with known breakpoints)."""
        s = float(s)
        if s < 0:
            return s  # k = 1 on [-pi/2, 0]
        total = 0.0
        prev = 0.0
        bps = self.kfun.breakpoints()
        for b in bps[bps > 0]:
            hi = min(b, s)
            if hi > prev:
                total += self.kfun.value(0.5 * (prev + hi)) * (hi - prev)
                prev = hi
            if prev >= s:
                break
        return total

    def to_csv(self) -> str:
        lines = ["s,x,y,tangent_angle"]
        for s, (x, y), k in zip(self.s, self.points, self.K):
            lines.append(f"{float(s)!r},{float(x)!r},{float(y)!r},{float(k)!r}")
        return "\n".join(lines) + "\n"

    def point_at(self, s: float) -> np.ndarray:
        """Exact position by stepping the arc chain (closed form per piece)."""
        s = float(s)
        if not (S_MIN <= s <= S_MAX):
            raise OutOfDomain(f"s = {s!r}")
        x, y = 0.0, -1.0
        tau = 0.0
        if s <= 0:
            return np.array([math.sin(s), -math.cos(s)])
        bps = self.kfun.breakpoints()
        prev = 0.0
        for b in list(bps[bps > 0]):
            hi = min(b, s)
            if hi > prev:
                k = self.kfun.value(0.5 * (prev + hi))
                d = hi - prev
                x += (math.sin(tau + k * d) - math.sin(tau)) / k
                y += (-math.cos(tau + k * d) + math.cos(tau)) / k
                tau += k * d
                prev = hi
            if prev >= s:
                break
        return np.array([x, y])


def integrate_curve(kfun: CurvatureFunction, step: float = 1e-4) -> BuiltCurve:
    """Integrate the curve by composite Simpson quadrature, panels aligned to
    the curvature breakpoints: first the tangent angle, then the position.

    Starts at (0, -1) heading along +x; the negative-s branch is the exact
    unit quarter circle back to (-1, 0).
    """
    if step > 1e-4:
        raise BadParameter("step must be at most 1e-4")
    bps = kfun.breakpoints()
    s_nodes = [np.array([S_MIN])]
    for lo, hi in zip(bps[:-1], bps[1:]):
        n_sub = max(2, int(math.ceil((hi - lo) / step)))
        n_sub += n_sub % 2  # even panel count for Simpson
        s_nodes.append(np.linspace(lo, hi, n_sub + 1)[1:])
    s = np.concatenate(s_nodes)
    # tangent angle: Simpson on k over each inter-node panel pair (k is
    # constant between breakpoints, so this is exact)
    K = np.empty_like(s)
    j0 = int(np.searchsorted(s, 0.0))
    K[j0] = 0.0
    for j in range(j0 + 1, len(s)):
        mid = 0.5 * (s[j - 1] + s[j])
        kv = kfun.value(mid)
        K[j] = K[j - 1] + simpson(np.array([kv, kv, kv]), (s[j] - s[j - 1]) / 2.0)
    for j in range(j0 - 1, -1, -1):
        mid = 0.5 * (s[j] + s[j + 1])
        kv = kfun.value(mid)
        K[j] = K[j + 1] - simpson(np.array([kv, kv, kv]), (s[j + 1] - s[j]) / 2.0)
    # positions: Simpson on (cos K, sin K) with the midpoint angle exact
    pts = np.empty((len(s), 2))
    pts[j0] = (0.0, -1.0)
    for j in range(j0 + 1, len(s)):
        h = 0.5 * (s[j] - s[j - 1])
        mid = 0.5 * (s[j - 1] + s[j])
        kmid = kfun.value(mid)
        k_mid_angle = K[j - 1] + kmid * h
        pts[j, 0] = pts[j - 1, 0] + simpson(
            np.cos([K[j - 1], k_mid_angle, K[j]]), h
        )
        pts[j, 1] = pts[j - 1, 1] + simpson(
            np.sin([K[j - 1], k_mid_angle, K[j]]), h
        )
    for j in range(j0 - 1, -1, -1):
        h = 0.5 * (s[j + 1] - s[j])
        mid_angle = K[j + 1] - kfun.value(0.5 * (s[j] + s[j + 1])) * h
        pts[j, 0] = pts[j + 1, 0] - simpson(np.cos([K[j], mid_angle, K[j + 1]]), h)
        pts[j, 1] = pts[j + 1, 1] - simpson(np.sin([K[j], mid_angle, K[j + 1]]), h)
    k1 = float(K[-1])
    return BuiltCurve(
        s=s,
        points=pts,
        K=K,
        endpoint=Vec2(float(pts[-1, 0]), float(pts[-1, 1])),
        endpoint_tangent=Vec2(math.cos(k1), math.sin(k1)),
        kfun=kfun,
    )


def _exact_staircase_arcs(kfun: CurvatureFunction):
    """The s >= 0 part of the curve as exact arcs; returns (arcs, p, K1)."""
    bps = kfun.breakpoints()
    bps = bps[bps >= 0.0]
    arcs = []
    x, y = 0.0, -1.0
    tau = 0.0
    for lo, hi in zip(bps[:-1], bps[1:]):
        k = kfun.value(0.5 * (lo + hi))
        r = 1.0 / k
        d = hi - lo
        cx = x - r * math.sin(tau)
        cy = y + r * math.cos(tau)
        arcs.append(Arc(Vec2(cx, cy), r, tau - math.pi / 2.0, tau + k * d - math.pi / 2.0))
        x = cx + r * math.cos(tau + k * d - math.pi / 2.0)
        y = cy + r * math.sin(tau + k * d - math.pi / 2.0)
        tau += k * d
    return arcs, np.array([x, y]), tau


def _circle_pair(p: np.ndarray, k1: float):
    """Solve the closing pair: a circle tangent to the endpoint tangent line
    at p and a circle tangent to the line x = 1 at (1, 0), mutually tangent.

    The system is a one-parameter family in the common tangent angle phi;
    each phi gives a linear 2x2 solve for the radii. The canonical pick is
    the midpoint of the window where both radii are positive and the contact
    point stays in the fourth quadrant; the window is returned as well.
    """
    nhat = np.array([-math.sin(k1), math.cos(k1)])

    def solve(phi: float):
        s, c = math.sin(phi), math.cos(phi)
        a = np.array([[nhat[0] + s, 1.0 - s], [nhat[1] - c, c]])
        rhs = np.array([1.0 - p[0], -p[1]])
        try:
            r, rp = np.linalg.solve(a, rhs)
        except np.linalg.LinAlgError:
            return None
        q = p + r * nhat + r * np.array([s, -c])
        ok = r > 1e-9 and rp > 1e-9 and q[1] < -1e-12 and q[0] > 1e-12
        return (float(r), float(rp), q, bool(ok))

    lo, hi = k1 + 1e-6, math.pi / 2.0 - 1e-6
    grid = np.linspace(lo, hi, 512)
    valid = [phi for phi in grid if (sol := solve(phi)) is not None and sol[3]]
    if not valid:
        raise TangencySolveFailed(
            f"no valid tangent circle pair for endpoint {p!r}, tangent angle {k1!r}"
        )
    phi_lo, phi_hi = min(valid), max(valid)
    phi = 0.5 * (phi_lo + phi_hi)
    r, rp, q, ok = solve(phi)
    if not ok:
        raise TangencySolveFailed(f"inconsistent pair at phi = {phi!r}")
    return r, rp, phi, (phi_lo, phi_hi)


def close_sphere(curve: BuiltCurve) -> QuadrantCurveNorm:
    """Close the curve into a norm: exact staircase arcs, the tangent circle
    pair, and the fourfold reflection gauge(x) = gauge(|x1|, -|x2|)."""
    arcs, p, k1 = _exact_staircase_arcs(curve.kfun)
    if np.max(np.abs(p - curve.endpoint.as_array())) > 1e-8:
        raise NotConvex("quadrature endpoint disagrees with the exact arc chain")
    if not (0.0 < p[0] < 1.0 and -1.0 < p[1] < 0.0):
        raise NotConvex(f"endpoint {p!r} outside the open fourth-quadrant box")
    if not (0.0 < k1 < math.pi / 2.0):
        raise NotConvex(f"endpoint tangent angle {k1!r} not in (0, pi/2)")
    a_iks = p[0] - p[1] / math.tan(k1)
    if a_iks <= 1.0:
        raise NotConvex(f"tangent line meets the axis at {a_iks!r} <= 1")
    r, rp, phi, window = _circle_pair(p, k1)
    nhat = np.array([-math.sin(k1), math.cos(k1)])
    c_big = p + r * nhat
    c_small = np.array([1.0 - rp, 0.0])
    closing = [
        Arc(Vec2(float(c_big[0]), float(c_big[1])), r, k1 - math.pi / 2.0, phi - math.pi / 2.0),
        Arc(Vec2(float(c_small[0]), float(c_small[1])), rp, phi - math.pi / 2.0, 0.0),
    ]
    params = {
        "depth": curve.kfun.n_max,
        "closing_radius_big": r,
        "closing_radius_small": rp,
        "closing_angle": phi,
        "closing_angle_window": list(window),
    }
    model = QuadrantCurveNorm(arcs + closing, params)
    return model.validate()


def build_nobst(depth: int = DEFAULT_DEPTH, step: float = 1e-4) -> QuadrantCurveNorm:
    """Staircase curvature -> integrated curve -> closed sphere."""
    return close_sphere(integrate_curve(staircase_function(depth), step))


def nobst_witness(model: QuadrantCurveNorm, n_list) -> list[tuple[int, float]]:
    """Inverse-norm lower bounds from mid-flat-arc points (curvature 2^-n)
    against a fixed curvature-1 reference point; grows like sqrt(2)^n."""
    from . import geometry

    depth = model.params.get("depth")
    if depth is None:
        raise BadParameter("model was not built from a staircase curve")
    y_theta = model.theta_of_arclength(0.8125)  # middle of the long unit-curvature run
    y = geometry.sphere_point(model, y_theta)
    out = []
    for n in n_list:
        n = int(n)
        if not (1 <= n <= depth):
            raise BadParameter(f"n = {n} outside the built staircase (1..{depth})")
        s_mid = 2.0**-n + 2.0 ** (-n - 3)
        x = geometry.sphere_point(model, model.theta_of_arclength(s_mid))
        out.append((n, inv_norm_lower_bound(model, x, y)))
    return out
