"""Young-function calculus.

A Young function is convex, vanishes at 0, and is neither identically 0 nor
identically infinite. This module represents such growth profiles and the
calculus on them:

* evaluation, derivatives, and generalized (right-continuous) inverses,
* the convex conjugate ``conjugate(A)(s) = sup_t { s t - A(t) }``,
* the Young inequality and the conjugate-inverse sandwich
  ``A(t)/t <= inv(conj(A))(A(t)) <= 2 A(t)/t``,
* growth indices ``inf/sup of t A'(t)/A(t)`` globally and near infinity,
* doubling classes (``A(2t) <= K A(t)`` and ``A(2t) >= K A(t)``),
* domination ``B(t) <= A(k t)``, the "increases essentially more slowly"
  comparison via inverse ratios, and the geometric-mean interpolant,
* the optimal Sobolev conjugate built from the quadrature function
  ``H(t) = (int_0^t (tau/A(tau))^{1/(n-1)} dtau)^{(n-1)/n}``.

Numeric trust model: every function carries ``domain_cap``, the largest
abscissa at which evaluation is trusted (1e12 by default, smaller for
exponential families that would overflow doubles). All "near infinity"
predicates are decided on the top decades below the cap and reported as
sampled evidence with witnesses, never as proofs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator

from ._numerics import (
    bisect_increasing,
    fit_linear,
    gauss_segments,
    golden_max,
    log_grid,
    loglog_slope,
    pchip_loglog,
)
from .errors import (
    ConstraintError,
    DegenerateInputError,
    DomainError,
    PreconditionError,
)

DEFAULT_CAP = 1e12

# log-grid bottom used when searching positive abscissae relative to a cap
_REL_FLOOR = 1e-30

__all__ = [
    "DEFAULT_CAP",
    "YoungFunction",
    "GrowthReport",
    "IndexEstimate",
    "SobolevClassification",
    "power",
    "power_log",
    "power_log_value",
    "exponential",
    "double_exponential",
    "from_table",
    "from_file",
    "make_young",
    "generalized_inverse",
    "conjugate",
    "young_inequality_check",
    "a1_sandwich_check",
    "estimate_indices",
    "check_delta2",
    "check_nabla2",
    "dominates",
    "increases_essentially_slower",
    "interpolate",
    "check_conv0",
    "sobolev_conjugate",
    "equivalent_near_infinity",
    "convexity_violation",
    "scaling_violation",
    "loglog_slope",
]


def _as_array(t):
    arr = np.asarray(t, dtype=float)
    return arr, (arr.ndim == 0)


def _maybe_scalar(arr, scalar):
    return float(arr) if scalar else arr


class YoungFunction:
    """A convex growth profile with evaluation, derivative, and inverse.

    Instances are immutable after construction and safe to share between
    threads. ``kind`` is one of ``closed_form``, ``tabulated``,
    ``conjugate_of``, ``sobolev_conjugate_of``.
    """

    def __init__(
        self,
        value,
        *,
        derivative=None,
        second_derivative=None,
        log_value=None,
        inverse=None,
        name="young",
        kind="closed_form",
        params=None,
        finite_limit=None,
        domain_cap=DEFAULT_CAP,
        parent=None,
    ):
        self._value = value
        self._derivative = derivative
        self._second_derivative = second_derivative
        self._log_value = log_value
        self._inverse = inverse
        self.name = name
        self.kind = kind
        self.params = dict(params or {})
        self.finite_limit = finite_limit
        self.domain_cap = float(domain_cap)
        self.parent = parent

    def __repr__(self):
        return f"YoungFunction({self.name!r}, kind={self.kind!r}, cap={self.domain_cap:g})"

    # -- evaluation ---------------------------------------------------------

    def eval(self, t):
        """A(t). Returns +inf beyond ``finite_limit`` when one is set."""
        arr, scalar = _as_array(t)
        if np.any(arr < 0):
            raise DomainError(f"{self.name}: negative abscissa in eval")
        if self.kind == "tabulated" and np.any(arr > self.domain_cap):
            raise DomainError(
                f"{self.name}: abscissa beyond trusted table cap {self.domain_cap:g}"
            )
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.asarray(self._value(arr), dtype=float)
        out = np.where(arr == 0.0, 0.0, out)
        if self.finite_limit is not None:
            out = np.where(arr > self.finite_limit, np.inf, out)
        return _maybe_scalar(out, scalar)

    __call__ = eval

    @property
    def has_derivative(self):
        return self._derivative is not None

    @property
    def has_second_derivative(self):
        return self._second_derivative is not None

    def derivative(self, t):
        """A'(t) where a closed form (or table derivative) is available."""
        if self._derivative is None:
            raise DomainError(f"{self.name}: no derivative available")
        arr, scalar = _as_array(t)
        if np.any(arr < 0):
            raise DomainError(f"{self.name}: negative abscissa in derivative")
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.asarray(self._derivative(arr), dtype=float)
        return _maybe_scalar(out, scalar)

    def second_derivative(self, t):
        if self._second_derivative is None:
            raise DomainError(f"{self.name}: no second derivative available")
        arr, scalar = _as_array(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.asarray(self._second_derivative(arr), dtype=float)
        return _maybe_scalar(out, scalar)

    def log_eval(self, t):
        """log A(t), overflow-safe for families that provide a log form."""
        arr, scalar = _as_array(t)
        if self._log_value is not None:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                lt = np.log(np.maximum(arr, 1e-300))
                out = np.asarray(self._log_value(lt), dtype=float)
            out = np.where(arr == 0.0, -np.inf, out)
        else:
            with np.errstate(divide="ignore"):
                out = np.log(np.asarray(self.eval(arr), dtype=float))
        if self.finite_limit is not None:
            out = np.where(arr > self.finite_limit, np.inf, out)
        return _maybe_scalar(out, scalar)

    def log_eval_log(self, log_t):
        """log A at abscissa exp(log_t), taking the log-abscissa directly.

        Lets callers stay in log coordinates when the abscissa itself would
        overflow a double (Sobolev conjugates of exponential type need this).
        """
        arr, scalar = _as_array(log_t)
        if self._log_value is not None:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out = np.asarray(self._log_value(arr), dtype=float)
        else:
            with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
                out = np.log(np.asarray(self.eval(np.exp(np.minimum(arr, 709.0))), dtype=float))
        if self.finite_limit is not None:
            out = np.where(arr > math.log(self.finite_limit), np.inf, out)
        return _maybe_scalar(out, scalar)

    # -- generalized inverse --------------------------------------------------

    def inverse(self, y):
        """Generalized right-continuous inverse: sup { t >= 0 : A(t) <= y }.

        Computed by monotone bisection in log-abscissa to relative tolerance
        below 1e-12; kinds with an exact variational form (conjugates,
        Sobolev conjugates) substitute it. Returns ``finite_limit`` (or the
        trusted cap) when ``y`` exceeds the essential range.
        """
        arr, scalar = _as_array(y)
        if np.any(arr < 0):
            raise DomainError(f"{self.name}: negative value in inverse")
        if self._inverse is not None:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out = np.asarray(self._inverse(arr), dtype=float)
            return _maybe_scalar(out, scalar)
        t_hi = self.finite_limit if self.finite_limit is not None else self.domain_cap
        t_lo = t_hi * _REL_FLOOR
        top = self.eval(t_hi * (1.0 - 1e-12))
        out = np.full(arr.shape, t_hi, dtype=float)
        inside = arr < top
        if np.any(inside):
            ys = arr[inside]
            logt = bisect_increasing(
                lambda u: np.asarray(self.eval(np.minimum(np.exp(u), t_hi)), dtype=float),
                ys,
                np.log(t_lo),
                np.log(t_hi),
                iters=90,
            )
            res = np.exp(logt)
            # below the essential support: A never dips under y even at the floor
            floor_vals = np.asarray(self.eval(np.full(res.shape, t_lo)), dtype=float)
            res = np.where(floor_vals > ys, 0.0, res)
            out[inside] = res
        return _maybe_scalar(out, scalar)


def generalized_inverse(A: YoungFunction, y):
    """Module-level alias for :meth:`YoungFunction.inverse`."""
    return A.inverse(y)


# -- built-in families --------------------------------------------------------


def power(p, scale=1.0):
    """A(t) = scale * t**p, p >= 1."""
    if p < 1:
        raise ConstraintError(f"power: p >= 1 required, got p={p}")
    if scale <= 0:
        raise ConstraintError(f"power: scale > 0 required, got {scale}")
    p = float(p)
    c = float(scale)
    return YoungFunction(
        lambda t: c * t**p,
        derivative=lambda t: c * p * t ** (p - 1.0),
        second_derivative=(
            (lambda t: c * p * (p - 1.0) * t ** (p - 2.0)) if p >= 2 or p == 1 else
            (lambda t: np.where(t > 0, c * p * (p - 1.0) * t ** (p - 2.0), np.inf))
        ),
        log_value=lambda lt: math.log(c) + p * lt,
        name=f"power(p={p:g},scale={c:g})",
        params={"p": p, "scale": c},
    )


def power_log(p, q, *, cap=DEFAULT_CAP):
    """Young function defined by its derivative A'(t) = t**(p-1) * log(1+t)**q.

    This is the canonical power-times-log family: near infinity
    A(t) ~ t**p log(1+t)**q / p, near zero A(t) ~ t**(p+q)/(p+q). The value is
    the integral of A', evaluated through a precomputed slowly-varying
    correction factor rho(t) = A(t) / (t**p log(1+t)**q / p) interpolated on a
    log grid; rho tends to p/(p+q) at zero and to 1 at infinity, and the table
    is extended with the exact 1/log(t) asymptote above its last knot.
    """
    if p < 1.0:
        raise ConstraintError(f"power_log: p >= 1 required, got p={p}")
    if p + q < 1.0:
        raise ConstraintError(f"power_log: p + q >= 1 required, got p+q={p + q}")
    p = float(p)
    q = float(q)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(t > 0, t ** (p - 1.0) * np.log1p(t) ** q, 0.0)
        if p == 1.0 and q == 0.0:
            out = np.where(t == 0, 1.0, out)
        return out

    def deriv2(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            L = np.log1p(t)
            out = np.where(
                t > 0,
                (p - 1.0) * t ** (p - 2.0) * L**q + q * t ** (p - 1.0) * L ** (q - 1.0) / (1.0 + t),
                0.0,
            )
        return out

    # correction-factor table: rho = integral(A') / base on a wide log grid
    knots = np.geomspace(1e-9, 1e28, 12 * 37 + 1)
    integral = gauss_segments(deriv, knots, n_gauss=8)
    integral += knots[0] ** (p + q) / (p + q)  # analytic tail below the first knot
    base = knots**p * np.log1p(knots) ** q / p
    rho = integral / base
    _lk = np.log(knots)
    _rho_interp = PchipInterpolator(_lk, rho, extrapolate=False)
    rho_lo = p / (p + q)
    rho_hi = float(rho[-1])
    lk_lo, lk_hi = float(_lk[0]), float(_lk[-1])

    def rho_hat(lt):
        out = _rho_interp(np.clip(lt, lk_lo, lk_hi))
        out = np.where(lt < lk_lo, rho_lo, out)
        above = lt > lk_hi
        if np.any(above):
            # rho(t) ~ 1 - q/(p log t): continue with the matched asymptote
            ext = rho_hi + (q / p) * (1.0 / lk_hi - 1.0 / np.maximum(lt, lk_hi))
            out = np.where(above, ext, out)
        return out

    def value(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            lt = np.log(np.maximum(t, 1e-300))
            out = np.where(t > 0, rho_hat(lt) * t**p * np.log1p(t) ** q / p, 0.0)
        return out

    def log_value(lt):
        lL = _log_log1p_from_log(lt)
        return np.log(rho_hat(lt)) + p * lt + q * lL - math.log(p)

    return YoungFunction(
        value,
        derivative=deriv,
        second_derivative=deriv2,
        log_value=log_value,
        name=f"power_log(p={p:g},q={q:g})",
        params={"p": p, "q": q},
        domain_cap=cap,
    )


def _log_log1p_from_log(lt):
    """log(log(1+t)) from lt = log t, stable across the whole range."""
    lt = np.asarray(lt, dtype=float)
    small = lt < 30.0
    t_clip = np.exp(np.minimum(lt, 30.0))
    with np.errstate(divide="ignore"):
        out_small = np.log(np.log1p(t_clip))
        # for huge t: log(1+t) ~ log t = lt, so log log(1+t) ~ log lt
        out_big = np.log(np.maximum(lt, 1e-300))
    return np.where(small, out_small, out_big)


def power_log_value(p, q, scale=1.0):
    """A(t) = scale * t**p * log(1+t)**q in closed value form.

    Used for growth certificates declared directly in value form; same
    near-infinity class as :func:`power_log` with the same (p, q).
    """
    if p < 1.0 or p + q < 1.0:
        raise ConstraintError(f"power_log_value: need p >= 1 and p+q >= 1, got ({p}, {q})")
    p = float(p)
    q = float(q)
    c = float(scale)

    def value(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            return np.where(t > 0, c * t**p * np.log1p(t) ** q, 0.0)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            L = np.log1p(t)
            out = np.where(
                t > 0, c * t ** (p - 1.0) * L ** (q - 1.0) * (p * L + q * t / (1.0 + t)), 0.0
            )
        return out

    def log_value(lt):
        return math.log(c) + p * lt + q * _log_log1p_from_log(lt)

    return YoungFunction(
        value,
        derivative=deriv,
        log_value=log_value,
        name=f"power_log_value(p={p:g},q={q:g})",
        params={"p": p, "q": q, "scale": c},
    )


def exponential():
    """A(t) = e**t - 1. Trusted cap sits below the double-precision overflow."""
    return YoungFunction(
        lambda t: np.expm1(t),
        derivative=lambda t: np.exp(t),
        second_derivative=lambda t: np.exp(t),
        log_value=lambda lt: _log_expm1_from_log(lt),
        name="exponential",
        params={},
        domain_cap=700.0,
    )


def _log_expm1_from_log(lt):
    t = np.exp(np.minimum(lt, 7.0))
    small = lt < 6.5
    with np.errstate(over="ignore", divide="ignore"):
        out_small = np.log(np.expm1(t))
    return np.where(small, out_small, np.exp(lt))  # log(e^t - 1) ~ t for large t


def double_exponential():
    """A(t) = e**(e**t) - e. Trusted cap keeps e**t below overflow of e**(.).

    Evaluated as e * expm1(expm1(t)) to avoid cancellation near zero.
    """

    def value(t):
        return math.e * np.expm1(np.expm1(t))

    def deriv(t):
        return np.exp(t + np.exp(t))

    def deriv2(t):
        return (1.0 + np.exp(t)) * np.exp(t + np.exp(t))

    def log_value(lt):
        t = np.exp(lt)
        small = t < 2.5
        with np.errstate(over="ignore", divide="ignore"):
            out_small = 1.0 + np.log(np.maximum(np.expm1(np.expm1(np.minimum(t, 3.0))), 1e-300))
        out_big = np.exp(np.minimum(t, 700.0))  # log(e^{e^t} - e) ~ e^t for t >> 1
        return np.where(small, out_small, out_big)

    return YoungFunction(
        value,
        derivative=deriv,
        second_derivative=deriv2,
        log_value=log_value,
        name="double_exponential",
        params={},
        domain_cap=6.5,
    )


def from_table(t, v, name="tabulated"):
    """Tabulated Young function from strictly increasing (t, A(t)) samples.

    Interpolates monotone-cubically in log-log coordinates and extrapolates
    below the first sample with the local power-law exponent (so the value
    vanishes at 0); evaluation above the last sample is rejected.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(v, dtype=float)
    if t.ndim != 1 or t.shape != v.shape or t.size < 4:
        raise ConstraintError("from_table: need matching 1D arrays with >= 4 samples")
    if np.any(np.diff(t) <= 0) or np.any(np.diff(v) <= 0):
        raise ConstraintError("from_table: columns must be strictly increasing")
    if t[0] <= 0 or v[0] <= 0:
        raise ConstraintError("from_table: samples must be strictly positive")
    eval_, log_eval, (slope_lo, _) = pchip_loglog(t, v)
    if slope_lo < 1.0 - 1e-9:
        raise ConstraintError(
            f"from_table: leading exponent {slope_lo:.3f} < 1 violates convexity at 0"
        )
    interp = PchipInterpolator(np.log(t), np.log(v))
    dinterp = interp.derivative()

    def deriv(x):
        x = np.asarray(x, dtype=float)
        lx = np.log(np.clip(x, t[0], t[-1]))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.where(x > 0, np.asarray(eval_(x)) / np.maximum(x, 1e-300) * dinterp(lx), 0.0)
        return out

    return YoungFunction(
        eval_,
        derivative=deriv,
        log_value=log_eval,
        name=name,
        kind="tabulated",
        params={"n_samples": int(t.size)},
        domain_cap=float(t[-1]),
    )


def from_file(path, name=None):
    """Tabulated Young function from a two-column text file: t, A(t)."""
    data = np.loadtxt(path)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ConstraintError(f"from_file: {path} is not two-column text")
    return from_table(data[:, 0], data[:, 1], name=name or f"tabulated({path})")


_FAMILIES = {
    "power": power,
    "power_log": power_log,
    "power_log_value": power_log_value,
    "exp": exponential,
    "exp_exp": double_exponential,
}


def make_young(family, **params):
    """Construct a built-in Young function by family name.

    Known families: power(p, scale), power_log(p, q), power_log_value(p, q,
    scale), exp, exp_exp, tabulated(file).
    """
    if family == "tabulated":
        return from_file(params["file"], name=params.get("name"))
    if family not in _FAMILIES:
        raise ConstraintError(f"unknown Young function family {family!r}")
    return _FAMILIES[family](**params)


# -- conjugation ----------------------------------------------------------


def conjugate(A: YoungFunction) -> YoungFunction:
    """Convex conjugate: conj(A)(s) = sup_{t >= 0} (s t - A(t)).

    The objective is concave in t, so the supremum is located either by
    inverting the nondecreasing derivative (when available) or by a log-grid
    scan refined with derivative-free golden-section search to ~1e-12
    bracketing. The generalized inverse of the conjugate uses the exact
    variational form inv(conj(A))(y) = inf_{t>0} (y + A(t))/t.
    """
    t_hi = A.finite_limit if A.finite_limit is not None else A.domain_cap
    t_lo = t_hi * _REL_FLOOR
    log_lo, log_hi = math.log(t_lo), math.log(t_hi)

    with np.errstate(over="ignore", invalid="ignore"):
        if A.has_derivative:
            d_cap = float(np.asarray(A.derivative(min(t_hi, A.domain_cap) * (1 - 1e-12))))
        else:
            h = t_hi * 1e-3
            d_cap = float((A.eval(t_hi) - A.eval(t_hi - h)) / h)
    cap = DEFAULT_CAP if not np.isfinite(d_cap) else min(DEFAULT_CAP, max(1.0, d_cap))

    def argmax_t(s):
        s = np.asarray(s, dtype=float)
        if A.has_derivative:
            logt = bisect_increasing(
                lambda u: np.asarray(A.derivative(np.exp(u)), dtype=float),
                s,
                np.full(s.shape, log_lo),
                np.full(s.shape, log_hi),
                iters=90,
            )
            return np.exp(logt)
        def obj(u):
            t = np.exp(u)
            return s * t - np.asarray(A.eval(t), dtype=float)
        u_star, _ = golden_max(obj, np.full(s.shape, log_lo), np.full(s.shape, log_hi), iters=95)
        return np.exp(u_star)

    def value(s):
        s = np.asarray(s, dtype=float)
        ts = argmax_t(s)
        cand = s * ts - np.asarray(A.eval(ts), dtype=float)
        return np.maximum(cand, 0.0)  # t=0 always competes with value 0

    def inverse(y):
        y = np.asarray(y, dtype=float)

        def neg_ratio(u):
            t = np.exp(u)
            return -(y + np.asarray(A.eval(t), dtype=float)) / t

        u_star, neg_best = golden_max(
            neg_ratio, np.full(y.shape, log_lo), np.full(y.shape, log_hi), iters=95
        )
        return -neg_best

    def deriv(s):
        return argmax_t(s)  # envelope theorem: d/ds sup_t (st - A(t)) = t*(s)

    return YoungFunction(
        value,
        derivative=deriv,
        inverse=inverse,
        name=f"conjugate({A.name})",
        kind="conjugate_of",
        params={},
        domain_cap=cap,
        parent=A,
    )


def young_inequality_check(A: YoungFunction, s, t, conj=None):
    """Check s t <= conj(A)(s) + A(t) with slack.

    Tolerance 1e-9 * (1 + rhs); returns (holds, slack) elementwise for array
    input. A failure signals a conjugation bug, not a property of (s, t).
    """
    s_arr, s_scalar = _as_array(s)
    t_arr, t_scalar = _as_array(t)
    if np.any(s_arr <= 0) or np.any(t_arr <= 0):
        raise DomainError("young_inequality_check: s, t must be positive")
    Atil = conj if conj is not None else conjugate(A)
    rhs = np.asarray(Atil.eval(s_arr), dtype=float) + np.asarray(A.eval(t_arr), dtype=float)
    slack = rhs - s_arr * t_arr
    holds = slack >= -1e-9 * (1.0 + np.where(np.isfinite(rhs), rhs, 0.0))
    holds = holds | ~np.isfinite(rhs)  # +inf on the right always dominates
    scalar = s_scalar and t_scalar
    return (bool(holds) if scalar else holds), _maybe_scalar(slack, scalar)


def a1_sandwich_check(A: YoungFunction, t, conj=None, rel_tol=1e-6):
    """Check A(t)/t <= inv(conj(A))(A(t)) <= 2 A(t)/t at t > 0."""
    t_arr, scalar = _as_array(t)
    if np.any(t_arr <= 0):
        raise DomainError("a1_sandwich_check: t must be positive")
    a_vals = np.asarray(A.eval(t_arr), dtype=float)
    if np.any(a_vals == 0.0):
        raise DegenerateInputError("a1_sandwich_check: A(t) = 0 is degenerate")
    if np.any(~np.isfinite(a_vals)):
        raise DomainError("a1_sandwich_check: A(t) must be finite")
    Atil = conj if conj is not None else conjugate(A)
    mid = np.asarray(Atil.inverse(a_vals), dtype=float)
    lower = a_vals / t_arr
    holds = (mid >= lower * (1.0 - rel_tol)) & (mid <= 2.0 * lower * (1.0 + rel_tol))
    return bool(holds) if scalar else holds


# -- indices ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class IndexEstimate:
    """Numeric estimates of inf/sup of t A'(t)/A(t), globally and at infinity.

    The near-infinity numbers are limit estimates: a linear fit of the index
    trace against 1/log(t) on the top two decades, extrapolated to
    1/log(t) -> 0 (exact for pure powers, removes the O(1/log t) finite-sample
    bias of power-log families). Global numbers fold the raw grid extrema in,
    which keeps i_inf <= i_inf_infinity <= s_sup_infinity <= s_sup.
    """

    i_inf: float
    s_sup: float
    i_inf_infinity: float
    s_sup_infinity: float
    sample_grid: np.ndarray = field(repr=False)


def estimate_indices(A: YoungFunction, n_points=10_000) -> IndexEstimate:
    """Estimate the four growth indices of a finite-valued Young function."""
    if A.finite_limit is not None:
        raise PreconditionError("estimate_indices: A is not finite-valued")
    cap = A.domain_cap
    grid = np.geomspace(1e-6, cap, max(int(n_points), 10_000))
    vals = np.asarray(A.eval(grid), dtype=float)
    if A.has_derivative:
        dvals = np.asarray(A.derivative(grid), dtype=float)
    else:
        h = 1e-6 * grid
        dvals = (np.asarray(A.eval(grid + h)) - np.asarray(A.eval(grid - h))) / (2.0 * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = grid * dvals / vals
    ok = np.isfinite(r) & (vals > 0)
    r_ok = r[ok]
    grid_ok = grid[ok]
    i_raw = float(np.min(r_ok))
    s_raw = float(np.max(r_ok))

    win = (grid_ok >= cap / 100.0) & (grid_ok >= math.e)
    if np.count_nonzero(win) >= 5:
        x = 1.0 / np.log(grid_ok[win])
        y = r_ok[win]
        a, b = fit_linear(x, y)
        resid = y - (a + b * x)
        i_inf_inf = float(a + np.min(resid))
        s_sup_inf = float(a + np.max(resid))
    else:
        i_inf_inf = float(np.min(r_ok[-5:]))
        s_sup_inf = float(np.max(r_ok[-5:]))
    i_glob = min(i_raw, i_inf_inf)
    s_glob = max(s_raw, s_sup_inf)
    return IndexEstimate(i_glob, s_glob, i_inf_inf, s_sup_inf, grid_ok)


# -- doubling classes ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GrowthReport:
    """Outcome of a sampled growth-class or domination check."""

    regime: str
    holds: bool
    constant_K: float
    threshold_M: float
    evidence: tuple  # (t, lhs, rhs) witness triples


_K_SEARCH_MAX = 2.0**30  # constants are searched over {2^j : |j| <= 30}


def _regime_grid(A: YoungFunction, regime, halve_top=True):
    cap = A.domain_cap
    top = cap / 2.0 if halve_top else cap
    if regime == "global":
        return log_grid(max(1e-10, cap * 1e-22), top, per_decade=8), 0.0
    if regime == "near_infinity":
        M = cap / 1e4
        return log_grid(M, top, per_decade=16), M
    if regime == "near_zero":
        return log_grid(1e-12, min(1.0, top), per_decade=8), min(1.0, top)
    raise DomainError(f"unknown regime {regime!r}")


def _doubling_report(A, regime, mode):
    if A.finite_limit is not None and (regime != "near_zero" or A.finite_limit < 2.0):
        raise PreconditionError(f"check_{mode}: A not finite-valued on regime {regime!r}")
    grid, M = _regime_grid(A, regime)
    a1 = np.asarray(A.eval(grid), dtype=float)
    a2 = np.asarray(A.eval(2.0 * grid), dtype=float)
    ok = a1 > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = np.where(ok, a2 / a1, np.nan)
    finite = np.isfinite(ratio)
    if mode == "delta2":
        # smallest K with A(2t) <= K A(t): the sampled sup of the ratio
        if np.all(finite[ok]):
            K = float(np.max(ratio[ok]))
            holds = K <= _K_SEARCH_MAX
        else:
            K = math.inf
            holds = False
        if holds:
            j = int(np.argmax(np.where(ok, ratio, -np.inf)))
            evidence = ((float(grid[j]), float(a2[j]), float(K * a1[j])),)
            return GrowthReport(regime, True, max(K, 2.0), M, evidence)
        bad = np.where(ok & ~finite)[0]
        if bad.size == 0:
            bad = [int(np.argmax(np.where(ok, ratio, -np.inf)))]
        witnesses = tuple(
            (float(grid[j]), float(a2[j]), float(_K_SEARCH_MAX * a1[j])) for j in bad[:3]
        )
        return GrowthReport(regime, False, math.inf, M, witnesses)
    # nabla2: largest K > 2 with A(2t) >= K A(t): the sampled inf of the ratio
    K = float(np.nanmin(np.where(ok, ratio, np.nan)))
    holds = bool(K > 2.0)
    j = int(np.nanargmin(np.where(ok, ratio, np.nan)))
    evidence = ((float(grid[j]), float(a2[j]), float(2.0 * a1[j])),)
    return GrowthReport(regime, holds, K, M, evidence)


def check_delta2(A: YoungFunction, regime="near_infinity") -> GrowthReport:
    """Doubling upper bound A(2t) <= K A(t) on the sampled regime.

    The constant is searched below 2^30; ratios that leave that range (or
    overflow inside the trusted window) yield holds=False with witnesses.
    """
    return _doubling_report(A, regime, "delta2")


def check_nabla2(A: YoungFunction, regime="near_infinity") -> GrowthReport:
    """Doubling lower bound A(2t) >= K A(t) with K > 2 on the sampled regime."""
    return _doubling_report(A, regime, "nabla2")


# -- domination and essential-growth comparison -------------------------------


def dominates(A: YoungFunction, B: YoungFunction, regime="near_infinity") -> GrowthReport:
    """Search k in {2^j} with B(t) <= A(k t) on the regime; report (k, M).

    Smaller k never helps (A is nondecreasing), so the ascending search finds
    the smallest working constant. Near-infinity feasibility is decided on the
    sampled grid above t=1; the threshold M is then refined downward on the
    full grid as the earliest abscissa from which the inequality holds onward
    (0 if it holds everywhere). The grid is decade-anchored so canonical
    thresholds land on exact powers of ten.
    """
    cap = min(B.domain_cap, A.finite_limit or A.domain_cap)
    exps = np.arange(-8 * 8, 12 * 8 + 1) / 8.0
    full = 10.0**exps
    full = full[full <= cap / 2.0]
    b_vals = np.asarray(B.eval(full), dtype=float)
    if regime == "global":
        window = np.ones(full.shape, dtype=bool)
    elif regime == "near_infinity":
        window = full >= 1.0
    elif regime == "near_zero":
        window = full <= 1.0
    else:
        raise DomainError(f"unknown regime {regime!r}")

    def margin_trend_ok(a_vals, valid):
        """Reject fits whose log-margin deteriorates toward the open end.

        A constant k can satisfy a finite grid while the ratio A(kt)/B(t) is
        visibly collapsing at the regime's open end; a fitted margin slope
        below -1e-3 per log-unit (above +1e-3 toward zero for the near-zero
        regime) marks the certificate as not holding.
        """
        with np.errstate(divide="ignore", invalid="ignore"):
            margin = np.log(a_vals) - np.log(b_vals)
        sel = window & valid & np.isfinite(margin) & (b_vals > 0)
        if np.count_nonzero(sel) < 6:
            return True
        ts = full[sel]
        ms = margin[sel]
        if regime == "near_zero":
            focus = ts <= ts[0] * 100.0
            _, slope = fit_linear(np.log(ts[focus]), ms[focus])
            return slope <= 1e-3
        focus = ts >= ts[-1] / 100.0
        _, slope = fit_linear(np.log(ts[focus]), ms[focus])
        return slope >= -1e-3

    tol = 1e-12
    best = None
    for j in range(-20, 21):
        k = 2.0**j
        with np.errstate(over="ignore"):
            a_vals = np.asarray(A.eval(np.minimum(k * full, A.domain_cap * 0.999)), dtype=float)
        valid = k * full <= A.domain_cap
        okmask = (b_vals <= a_vals * (1.0 + tol) + 1e-300) & valid
        if (
            np.all(okmask[window & valid])
            and np.any(window & valid)
            and margin_trend_ok(a_vals, valid)
        ):
            best = (k, okmask)
            break
    if best is None:
        k = 2.0**20
        a_vals = np.asarray(A.eval(np.minimum(k * full, A.domain_cap * 0.999)), dtype=float)
        viol = np.where(window & (b_vals > a_vals * (1.0 + tol)))[0]
        j = int(viol[-1]) if viol.size else int(np.argmax(full))
        witness = ((float(full[j]), float(b_vals[j]), float(a_vals[j])),)
        return GrowthReport(regime, False, math.nan, math.nan, witness)
    k, okmask = best
    if np.all(okmask):
        M = 0.0
    else:
        last_bad = int(np.where(~okmask)[0][-1])
        M = float(full[last_bad + 1]) if last_bad + 1 < full.size else float(full[-1])
    j = int(np.argmax(full * okmask))
    a_at = float(np.asarray(A.eval(min(k * full[j], A.domain_cap * 0.999))))
    evidence = ((float(full[j]), float(b_vals[j]), a_at),)
    return GrowthReport(regime, True, float(k), M, evidence)


def increases_essentially_slower(B: YoungFunction, A: YoungFunction):
    """Decide B << A from the inverse-ratio trace inv(A)(y) / inv(B)(y).

    Evaluates the ratio on decade points y = 1e2, 1e3, ... capped by the
    essential ranges of both functions (at most 1e16); declares B << A when
    the trace is decreasing and the final ratio is below 1e-2. Returns
    (decision, trace) where trace is a list of (y, ratio) pairs for audit.
    """
    if B.finite_limit is not None:
        raise PreconditionError("increases_essentially_slower: B must be finite-valued")

    def essential_top(F):
        t_hi = F.finite_limit if F.finite_limit is not None else F.domain_cap
        v = float(np.asarray(F.eval(t_hi * (1 - 1e-12))))
        return v if np.isfinite(v) else 1e300

    y_max = min(essential_top(A), essential_top(B), 1e16)
    decades = [10.0**k for k in range(2, 17) if 10.0**k <= y_max]
    if len(decades) < 3:
        decades = [y_max / 100.0, y_max / 10.0, y_max]
    ys = np.asarray(decades, dtype=float)
    ratios = np.asarray(A.inverse(ys), dtype=float) / np.asarray(B.inverse(ys), dtype=float)
    trace = [(float(y), float(r)) for y, r in zip(ys, ratios)]
    decreasing = bool(np.all(np.diff(ratios) < 0))
    return decreasing and bool(ratios[-1] < 1e-2), trace


def interpolate(B: YoungFunction, A: YoungFunction) -> YoungFunction:
    """Young function C with inv(C) = sqrt(inv(A) * inv(B)), so B << C << A.

    Requires B << A under the numeric comparison; the output is tabulated by
    sampling the inverse on a log grid of values and swapping columns.
    """
    ok, trace = increases_essentially_slower(B, A)
    if not ok:
        raise PreconditionError(
            f"interpolate: B << A fails numerically (final ratio {trace[-1][1]:.3g})"
        )
    y_max = min(
        float(np.asarray(A.eval((A.finite_limit or A.domain_cap) * (1 - 1e-12)))),
        float(np.asarray(B.eval(B.domain_cap * (1 - 1e-12)))),
        1e16,
    )
    ys = np.geomspace(1e-10, y_max, 400)
    ts = np.sqrt(np.asarray(A.inverse(ys)) * np.asarray(B.inverse(ys)))
    keep = (ts > 0) & (np.diff(ts, prepend=0.0) > 0)
    return from_table(ts[keep], ys[keep], name=f"interpolate({B.name},{A.name})")


# -- Sobolev conjugate --------------------------------------------------------


@dataclass(frozen=True)
class SobolevClassification:
    """Divergence/convergence classification of the Sobolev-conjugate integral."""

    kind: str  # "divergent" or "convergent"
    finite_limit: float | None
    conv0_holds: bool
    near_zero_exponent: float
    tail_ratio: float
    h_at_cap: float
    notes: tuple


def check_conv0(A: YoungFunction, n: int):
    """Integrability at zero of (tau/A(tau))**(1/(n-1)).

    Probes the integrand's local power-law exponent on a geometric grid near
    zero and integrates (0, 1] with an analytic tail correction below the
    grid. Returns (holds, exponent, integral_estimate).
    """
    if n < 2:
        raise DomainError("check_conv0: n >= 2 required")
    probe = np.geomspace(1e-12, 1e-4, 60)

    def g(tau):
        tau = np.asarray(tau, dtype=float)
        vals = np.asarray(A.eval(tau), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(vals > 0, (tau / vals) ** (1.0 / (n - 1)), np.inf)

    gv = g(probe)
    if np.any(~np.isfinite(gv)):
        return False, -np.inf, math.inf
    _, expo = fit_linear(np.log(probe), np.log(gv))
    holds = expo > -1.0 + 1e-6
    knots = np.geomspace(1e-12, 1.0, 200)
    integral = float(gauss_segments(g, knots)[-1])
    if holds:
        integral += float(gv[0] * probe[0] / (1.0 + expo))
    else:
        integral = math.inf
    return bool(holds), float(expo), integral


def sobolev_conjugate(A: YoungFunction, n: int, *, regularize_near_zero=True):
    """Optimal Sobolev conjugate A_n(t) = A(Hinv(t)) plus its classification.

    H(t) = (int_0^t (tau/A(tau))**(1/(n-1)) dtau)**((n-1)/n), with Hinv the
    generalized left-continuous inverse. The integral is accumulated with
    composite Gauss rules on geometric subintervals (relative refinement well
    below 1e-8 for the built-in families), extending decade by decade until
    the transform covers the requested range or the tail is classified as
    convergent (per-decade increments decaying geometrically). When the
    integrand is not integrable at zero the function is replaced below t=1 by
    its linear interpolant through (1, A(1)) — a near-zero regularization that
    leaves every near-infinity statement unchanged; pass
    ``regularize_near_zero=False`` to get the strict precondition error.
    """
    conv0_holds, expo0, _ = check_conv0(A, n)
    notes = []
    if not conv0_holds:
        if not regularize_near_zero:
            raise PreconditionError(
                f"sobolev_conjugate: integrand not integrable at zero (exponent {expo0:.3f})"
            )
        notes.append("near-zero regularization applied (linear below t=1)")
    anchor = float(np.asarray(A.eval(1.0)))
    if anchor <= 0:
        raise DegenerateInputError("sobolev_conjugate: A(1) must be positive")

    def a_eff(t):
        t = np.asarray(t, dtype=float)
        base = np.asarray(A.eval(np.minimum(t, np.inf)), dtype=float)
        if conv0_holds:
            return base
        return np.where(t < 1.0, anchor * t, base)

    def g(tau):
        tau = np.asarray(tau, dtype=float)
        vals = a_eff(tau)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = np.where((vals > 0) & np.isfinite(vals), (tau / vals) ** (1.0 / (n - 1)), 0.0)
        return out

    t_lo = 1e-12
    t_top = A.finite_limit if A.finite_limit is not None else 1e28
    if A.kind == "tabulated":
        t_top = min(t_top, A.domain_cap)
    knots = [t_lo]
    integrals = [0.0]
    # analytic contribution of (0, t_lo]
    g_lo = float(g(np.asarray([t_lo]))[0])
    lo_probe = np.geomspace(t_lo, t_lo * 100.0, 8)
    _, a0 = fit_linear(np.log(lo_probe), np.log(np.maximum(g(lo_probe), 1e-300)))
    if a0 > -1.0 + 1e-9:
        integrals[0] = g_lo * t_lo / (1.0 + a0)

    increments = []
    converged_tail = False
    for e in range(-12, 29):  # decade exponents, [10^e, 10^(e+1)]
        decade_lo = 10.0**e
        if decade_lo >= t_top:
            break
        decade_hi = min(10.0 ** (e + 1), t_top)
        full_decade = decade_hi == 10.0 ** (e + 1)
        if decade_hi / decade_lo < 1.0001:
            break
        seg = np.geomspace(decade_lo, decade_hi, 17)
        vals = gauss_segments(g, seg)
        with np.errstate(over="ignore", invalid="ignore"):
            test_val = a_eff(np.asarray([decade_hi * 0.999]))[0]
        if not np.isfinite(test_val):
            break
        knots.extend(seg[1:].tolist())
        base = integrals[-1]
        integrals.extend((base + vals[1:]).tolist())
        increments.append(float(vals[-1]))
        H_now = integrals[-1] ** ((n - 1.0) / n)
        if full_decade and decade_hi >= 1.0 and len(increments) >= 3:
            if increments[-1] < 1e-12 * integrals[-1]:
                converged_tail = True  # tail already negligible in absolute terms
                break
        if H_now >= 1e8 and decade_hi >= 1e6:
            break

    knots = np.asarray(knots, dtype=float)
    integrals = np.asarray(integrals, dtype=float)
    keep = np.concatenate([[True], np.diff(integrals) > 0])
    knots, integrals = knots[keep], integrals[keep]
    H_vals = integrals ** ((n - 1.0) / n)
    h_at_cap = float(H_vals[-1])

    # tail behaviour of the integrand at the end of the table: a power law
    # tau^alpha, refined near the critical exponent -1 by a log power beta:
    # g ~ g_end (tau_end/tau) (ln tau / ln tau_end)^beta. The classification
    # and the tail mass both come from these fitted exponents.
    tail_win = knots >= knots[-1] / 10.0
    _, alpha_end = fit_linear(
        np.log(knots[tail_win]), np.log(np.maximum(g(knots[tail_win]), 1e-300))
    )
    g_end = float(g(np.asarray([knots[-1]]))[0])
    I_end = float(integrals[-1])
    tau_end = float(knots[-1])
    beta_end = (alpha_end + 1.0) * math.log(tau_end)

    tail = None
    if A.finite_limit is not None:
        tail = 0.0  # integrand vanishes beyond the finite limit
    elif converged_tail:
        tail = 0.0
    elif alpha_end + 1.0 < -0.3:
        tail = g_end * tau_end / (-(alpha_end + 1.0))
    elif abs(alpha_end + 1.0) <= 0.3 and beta_end < -1.05:
        tail = g_end * tau_end * math.log(tau_end) / (-(beta_end + 1.0))
    if tail is not None:
        kind = "convergent"
        finite_limit_An = float((I_end + tail) ** ((n - 1.0) / n))
    else:
        kind = "divergent"
        finite_limit_An = None
    tail_ratio = (
        increments[-1] / increments[-2] if len(increments) >= 2 and increments[-2] > 0 else 0.0
    )

    positive = H_vals > 0
    log_tau = np.log(knots[positive])
    log_H = np.log(H_vals[positive])
    tau_of_H = PchipInterpolator(log_H, log_tau, extrapolate=False)
    H_of_tau = PchipInterpolator(log_tau, log_H, extrapolate=False)
    lH_lo, lH_hi = float(log_H[0]), float(log_H[-1])
    ltau_lo, ltau_hi = float(log_tau[0]), float(log_tau[-1])

    def log_hinv(log_t):
        """log of the left-continuous inverse of H at exp(log_t).

        Beyond the integration table the inverse follows a frozen tail model
        of the integrand: a pure power law away from the critical exponent -1,
        and tau^-1 * (log tau)^beta when the local exponent sits near -1 (the
        p = n families, whose integral diverges like a power of log).
        """
        log_t = np.asarray(log_t, dtype=float)
        inside = log_t <= lH_hi
        out = np.empty(log_t.shape, dtype=float)
        out[inside] = tau_of_H(np.clip(log_t[inside], lH_lo, lH_hi))
        lowmask = log_t < lH_lo
        if np.any(lowmask):
            slope0 = (log_tau[1] - log_tau[0]) / max(log_H[1] - log_H[0], 1e-300)
            out[lowmask] = ltau_lo + slope0 * (log_t[lowmask] - lH_lo)
        if np.any(~inside):
            I_star = np.exp(log_t[~inside] * (n / (n - 1.0)))
            Lte = math.log(tau_end)
            if abs(alpha_end + 1.0) < 0.3:
                beta = (alpha_end + 1.0) * Lte
                if abs(beta + 1.0) > 1e-6:
                    target = Lte ** (beta + 1.0) + (I_star - I_end) * (beta + 1.0) * Lte**beta / (
                        g_end * tau_end
                    )
                    loc = np.maximum(target, 1e-300) ** (1.0 / (beta + 1.0))
                else:
                    loc = Lte * np.exp((I_star - I_end) / (g_end * tau_end * Lte))
            else:
                arg = 1.0 + (I_star - I_end) * (alpha_end + 1.0) / (g_end * tau_end)
                loc = Lte + np.log(np.maximum(arg, 1e-300)) / (alpha_end + 1.0)
            out[~inside] = loc
        return out

    def log_value(log_t):
        return np.asarray(A.log_eval_log(log_hinv(log_t)), dtype=float)

    def value(t):
        t = np.asarray(t, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            lt = np.log(np.maximum(t, 1e-300))
            lv = log_value(lt)
            out = np.where(t > 0, np.exp(np.minimum(lv, 709.0)), 0.0)
            out = np.where(lv > 709.0, np.inf, out)
        return out

    log_a_top = float(np.asarray(A.log_eval_log(np.asarray(ltau_hi)), dtype=float))

    def inverse(y):
        # exact composition: inv(A_n)(y) = H(inv(A)(y)), inverting A over the
        # whole integration range (beyond A's advisory cap when needed)
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            ly = np.log(np.maximum(y, 1e-300))
        ltau = bisect_increasing(
            lambda u: np.asarray(A.log_eval_log(u), dtype=float),
            ly,
            np.full(y.shape, ltau_lo),
            np.full(y.shape, ltau_hi),
            iters=90,
        )
        lH = np.asarray(H_of_tau(np.clip(ltau, ltau_lo, ltau_hi)), dtype=float)
        out = np.exp(lH)
        # below the table: A_n vanishes there, inverse ~ 0 side
        low = np.asarray(A.log_eval_log(np.full(y.shape, ltau_lo)), dtype=float) > ly
        out = np.where(low, 0.0, out)
        if finite_limit_An is not None:
            out = np.where(ly >= log_a_top, finite_limit_An, out)
        return np.where(y > 0, out, 0.0)

    An = YoungFunction(
        value,
        log_value=log_value,
        inverse=inverse,
        name=f"sobolev_conjugate({A.name},n={n})",
        kind="sobolev_conjugate_of",
        params={"n": int(n)},
        finite_limit=finite_limit_An,
        domain_cap=h_at_cap,
        parent=A,
    )
    An._log_hinv = log_hinv  # consumed by sobolev_loglog_slope
    classification = SobolevClassification(
        kind=kind,
        finite_limit=finite_limit_An,
        conv0_holds=conv0_holds,
        near_zero_exponent=float(expo0),
        tail_ratio=float(tail_ratio),
        h_at_cap=h_at_cap,
        notes=tuple(notes),
    )
    return An, classification


def sobolev_loglog_slope(An: YoungFunction, lo, hi, n_pts=80):
    """Asymptotic growth exponent of a divergent-type Sobolev conjugate.

    The local log-log slope of A_n carries O(1/ln Hinv(t)) corrections from
    slowly varying log factors. The estimator samples the slope on [lo, hi],
    fits it against (1, x, x^2) with x = 1/ln Hinv(t), and reports the
    intercept: the t -> infinity limit. Exact on pure powers.
    """
    if not hasattr(An, "_log_hinv"):
        raise DomainError("sobolev_loglog_slope: argument is not a Sobolev conjugate")
    lt = np.log(np.geomspace(lo, hi, n_pts))
    lv = np.asarray(An.log_eval_log(lt), dtype=float)
    s = np.gradient(lv, lt)
    x = 1.0 / np.asarray(An._log_hinv(lt), dtype=float)
    X = np.column_stack([np.ones_like(x), x, x * x])
    coef, *_ = np.linalg.lstsq(X, s, rcond=None)
    return float(coef[0])


# -- equivalence of real functions near infinity ------------------------------


def equivalent_near_infinity(f, g, s_window=(1e2, 1e8), n=60):
    """Search constants with c1 g(c1 s) <= f(s) <= c2 g(c2 s) on the window.

    c1 and c2 are searched independently over {2^j : |j| <= 20}; no ordering
    between them is assumed. A candidate is rejected when its log-margin
    deteriorates across the top decade of the window (a constant cannot
    certify a genuinely different growth order on a finite grid). Returns
    (holds, c1, c2).
    """
    s = np.geomspace(s_window[0], s_window[1], n)
    top = s >= s[-1] / 10.0
    fv = np.asarray(f(s), dtype=float)

    def trend_ok(margin):
        sel = np.isfinite(margin) & top
        if np.count_nonzero(sel) < 4:
            return True
        _, slope = fit_linear(np.log(s[sel]), margin[sel])
        return slope >= -1e-3

    c1 = None
    for j in range(20, -21, -1):
        c = 2.0**j
        gv = c * np.asarray(g(c * s), dtype=float)
        if np.all(gv <= fv * (1.0 + 1e-9)):
            with np.errstate(divide="ignore", invalid="ignore"):
                if trend_ok(np.log(fv) - np.log(gv)):
                    c1 = c
                    break
    c2 = None
    for j in range(-20, 21):
        c = 2.0**j
        gv = c * np.asarray(g(c * s), dtype=float)
        if np.all(fv <= gv * (1.0 + 1e-9)):
            with np.errstate(divide="ignore", invalid="ignore"):
                if trend_ok(np.log(gv) - np.log(fv)):
                    c2 = c
                    break
    return (c1 is not None and c2 is not None), c1, c2


# -- invariant probes ----------------------------------------------------------


def convexity_violation(A: YoungFunction, grid=None):
    """Worst violation of midpoint convexity on sampled triples (0 if convex)."""
    if grid is None:
        top = A.finite_limit if A.finite_limit is not None else A.domain_cap
        grid = np.geomspace(top * 1e-12, top * 0.5, 120)
    t1 = grid[:-2]
    t2 = grid[2:]
    lam = 0.5
    mid = lam * t1 + (1 - lam) * t2
    lhs = np.asarray(A.eval(mid), dtype=float)
    rhs = lam * np.asarray(A.eval(t1), dtype=float) + (1 - lam) * np.asarray(A.eval(t2), dtype=float)
    ok = np.isfinite(lhs) & np.isfinite(rhs) & (rhs > 0)
    rel = (lhs - rhs)[ok] / np.maximum(rhs[ok], 1e-300)
    return float(np.max(rel, initial=0.0))


def scaling_violation(A: YoungFunction, grid=None, lambdas=(0.1, 0.3, 0.7, 0.95)):
    """Worst violation of A(lam t) <= lam A(t) for lam in (0, 1]."""
    if grid is None:
        top = A.finite_limit if A.finite_limit is not None else A.domain_cap
        grid = np.geomspace(top * 1e-12, top * 0.99, 100)
    worst = 0.0
    vals = np.asarray(A.eval(grid), dtype=float)
    for lam in lambdas:
        lhs = np.asarray(A.eval(lam * grid), dtype=float)
        ok = np.isfinite(vals) & (vals > 0)
        rel = (lhs[ok] - lam * vals[ok]) / np.maximum(lam * vals[ok], 1e-300)
        worst = max(worst, float(np.max(rel, initial=0.0)))
    return worst
