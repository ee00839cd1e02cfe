"""Shared scalar/array numerics: grids, searches, quadrature, slope fits.

Everything here is vectorized over numpy arrays and deterministic: no
randomness, no thread-order dependence.
"""

from __future__ import annotations

import numpy as np

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0  # golden-section step ratio


def log_grid(lo, hi, per_decade=8, endpoint=True):
    """Geometric grid from lo to hi with roughly `per_decade` points per decade.

    Decade anchors (integer powers of ten) land on grid points whenever the
    requested density divides the decade; checks that report thresholds rely
    on this.
    """
    if lo <= 0 or hi <= lo:
        raise ValueError(f"log_grid needs 0 < lo < hi, got ({lo}, {hi})")
    decades = np.log10(hi / lo)
    n = max(2, int(np.ceil(decades * per_decade)) + 1)
    return np.geomspace(lo, hi, n) if endpoint else np.geomspace(lo, hi, n)[:-1]


def golden_max(f, lo, hi, iters=95):
    """Vectorized golden-section maximization of a unimodal objective.

    `lo`, `hi` are arrays of bracket endpoints; `f` maps an array of abscissae
    to objective values. Returns (argmax, max). One objective evaluation per
    iteration; 95 iterations shrink the bracket by ~0.618^95 ~ 1e-20 relative.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = np.asarray(f(x1), dtype=float)
    f2 = np.asarray(f(x2), dtype=float)
    for _ in range(iters):
        left = f1 >= f2  # maximum lies in [lo, x2]
        lo_new = np.where(left, lo, x1)
        hi_new = np.where(left, x2, hi)
        span = hi_new - lo_new
        x_probe = np.where(left, hi_new - _INVPHI * span, lo_new + _INVPHI * span)
        f_probe = np.asarray(f(x_probe), dtype=float)
        x1_next = np.where(left, x_probe, x2)
        f1_next = np.where(left, f_probe, f2)
        x2_next = np.where(left, x1, x_probe)
        f2_next = np.where(left, f1, f_probe)
        lo, hi, x1, x2, f1, f2 = lo_new, hi_new, x1_next, x2_next, f1_next, f2_next
    best_is_1 = f1 >= f2
    return np.where(best_is_1, x1, x2), np.where(best_is_1, f1, f2)


def bisect_increasing(f, target, lo, hi, iters=80):
    """Vectorized bisection for f(x) <= target with f nondecreasing.

    Returns the largest x in [lo, hi] with f(x) <= target, to bracket width
    (hi-lo) * 2^-iters. Comparisons treat nan as "above target" so overflow
    inside f shrinks the bracket from the right.
    """
    lo = np.asarray(lo, dtype=float).copy()
    hi = np.asarray(hi, dtype=float).copy()
    target = np.asarray(target, dtype=float)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        ok = fm <= target  # nan compares False -> move hi down
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo


def gauss_segments(fn, knots, n_gauss=8):
    """Cumulative integral of `fn` along a 1D grid of knots.

    Fixed-order Gauss-Legendre on each segment; returns the cumulative
    integral at every knot (starting from 0 at knots[0]). Deterministic
    ordered summation.
    """
    knots = np.asarray(knots, dtype=float)
    xg, wg = np.polynomial.legendre.leggauss(n_gauss)
    a = knots[:-1]
    b = knots[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    pts = mid[:, None] + half[:, None] * xg[None, :]
    vals = fn(pts.ravel()).reshape(pts.shape)
    seg = half * (vals @ wg)
    out = np.empty(knots.shape, dtype=float)
    out[0] = 0.0
    np.cumsum(seg, out=out[1:])
    return out


def fit_linear(x, y):
    """Least-squares fit y ~ a + b*x. Returns (a, b)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    A = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return coef[0], coef[1]


def loglog_slope(values_fn, lo, hi, n=80):
    """Asymptotic log-log slope of values_fn over [lo, hi].

    Regresses log f on (1, ln t, lnln t, 1/ln t) — the correction terms of
    power-times-log growth — and returns the ln t coefficient. Exact for pure
    powers; for t^a * log^b growth the lnln and 1/ln regressors absorb the
    slowly-varying part so the power a is recovered to O(1/ln^2).
    """
    t = np.geomspace(lo, hi, n)
    y = np.log(np.asarray(values_fn(t), dtype=float))
    lt = np.log(t)
    X = np.column_stack([np.ones_like(lt), lt, np.log(lt), 1.0 / lt])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    return float(coef[1])


def pchip_loglog(t, v):
    """Monotone cubic interpolant of (log t, log v); returns callables.

    Extrapolates with the boundary local power-law exponent on both sides,
    which preserves monotonicity and convexity trends of the table.
    """
    from scipy.interpolate import PchipInterpolator

    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(t <= 0) or np.any(v <= 0):
        raise ValueError("pchip_loglog needs strictly positive samples")
    lt = np.log(t)
    lv = np.log(v)
    interp = PchipInterpolator(lt, lv, extrapolate=False)
    d = interp.derivative()
    slope_lo = float(d(lt[0] + 1e-9))
    slope_hi = float(d(lt[-1] - 1e-9))

    def log_eval(log_t):
        log_t = np.asarray(log_t, dtype=float)
        out = interp(np.clip(log_t, lt[0], lt[-1]))
        below = log_t < lt[0]
        above = log_t > lt[-1]
        if np.any(below):
            out = np.where(below, lv[0] + slope_lo * (log_t - lt[0]), out)
        if np.any(above):
            out = np.where(above, lv[-1] + slope_hi * (log_t - lt[-1]), out)
        return out

    def eval_(x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            res = np.where(x > 0, np.exp(log_eval(np.log(np.maximum(x, 1e-300)))), 0.0)
        return res

    return eval_, log_eval, (slope_lo, slope_hi)
