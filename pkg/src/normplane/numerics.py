"""Small numeric building blocks: golden-section search, batched bisection,
finite differences, and 2x2 symmetric matrix helpers.

All routines are pure and deterministic for fixed iteration counts.
"""

from __future__ import annotations

import numpy as np

INVPHI = (np.sqrt(5.0) - 1.0) / 2.0  # 1/phi
INVPHI2 = (3.0 - np.sqrt(5.0)) / 2.0  # 1/phi^2


def golden_min(f, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    """Golden-section minimum of a scalar unimodal function on [lo, hi].

    Returns (argmin, min). 80 iterations shrink the bracket by ~1e-17.
    """
    a, b = float(lo), float(hi)
    h = b - a
    c, d = a + INVPHI2 * h, a + INVPHI * h
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INVPHI * h
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def golden_max(f, lo: float, hi: float, iters: int = 80) -> tuple[float, float]:
    x, v = golden_min(lambda t: -f(t), lo, hi, iters)
    return x, -v


def golden_min_batch(f, lo, hi, iters: int = 60):
    """Vectorized golden-section minimum: lo, hi are arrays of brackets and
    f maps an array of points to an array of values.

    Recomputes both interior points each sweep (2 vector evals per iteration);
    at the array sizes used here that beats per-component bookkeeping.
    Returns (argmins, mins) as arrays.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    for _ in range(iters):
        c = a + INVPHI2 * (b - a)
        d = a + INVPHI * (b - a)
        take = f(c) < f(d)
        b = np.where(take, d, b)
        a = np.where(take, a, c)
    best = 0.5 * (a + b)
    return best, f(best)


def golden_max_batch(f, lo, hi, iters: int = 60):
    x, v = golden_min_batch(lambda t: -f(t), lo, hi, iters)
    return x, -v


def bisect_batch(f, lo, hi, iters: int = 80):
    """Vectorized bisection for roots of f on brackets [lo, hi].

    Assumes f(lo) <= 0 <= f(hi) componentwise (callers arrange signs).
    Returns the midpoint array after `iters` halvings.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        neg = fm <= 0
        a = np.where(neg, m, a)
        b = np.where(neg, b, m)
    return 0.5 * (a + b)


def central_diff(f, x: float, h: float) -> float:
    return (f(x + h) - f(x - h)) / (2.0 * h)


def richardson_diff(f, x: float, h: float) -> float:
    """Central difference with one Richardson extrapolation level."""
    d1 = central_diff(f, x, h)
    d2 = central_diff(f, x, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


def stencil5_d1(values, h: float):
    """First derivative from a 5-point symmetric stencil [-2h..2h]."""
    fm2, fm1, _, fp1, fp2 = values
    return (-fp2 + 8.0 * fp1 - 8.0 * fm1 + fm2) / (12.0 * h)


def stencil5_d2(values, h: float):
    """Second derivative from a 5-point symmetric stencil [-2h..2h]."""
    fm2, fm1, f0, fp1, fp2 = values
    return (-fp2 + 16.0 * fp1 - 30.0 * f0 + 16.0 * fm1 - fm2) / (12.0 * h * h)


def simpson(values, h: float) -> float:
    """Composite Simpson rule over an odd number of equally spaced samples."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0]
    if n < 3 or n % 2 == 0:
        raise ValueError("simpson needs an odd number of samples >= 3")
    return (h / 3.0) * (
        values[0]
        + values[-1]
        + 4.0 * values[1:-1:2].sum()
        + 2.0 * values[2:-2:2].sum()
    )


# -- 2x2 symmetric positive-definite helpers ---------------------------------


def spd_power(mat: np.ndarray, exponent: float) -> np.ndarray:
    """Matrix power of a symmetric positive-definite 2x2 matrix."""
    w, v = np.linalg.eigh(np.asarray(mat, dtype=float))
    if w.min() <= 0:
        raise ValueError("matrix not positive definite")
    return (v * w**exponent) @ v.T


def rotation(angle: float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])
