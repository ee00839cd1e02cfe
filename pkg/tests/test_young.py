import math

import numpy as np
import pytest

from orliq import young as Y
from orliq.errors import (
    ConstraintError,
    DegenerateInputError,
    DomainError,
    PreconditionError,
)

RNG = np.random.default_rng(20240811)


# -- evaluation and inverse ----------------------------------------------------


def test_eval_basics():
    assert Y.power(2).eval(0.0) == 0.0
    assert Y.power(2, scale=0.5).eval(3.0) == pytest.approx(4.5, rel=1e-15)
    with pytest.raises(DomainError):
        Y.power(2).eval(-1.0)


def test_eval_monotone_on_samples():
    for A in [Y.power_log(2.5, 0.5), Y.exponential(), Y.power_log_value(3, 1)]:
        t = np.geomspace(1e-8, A.domain_cap * 0.5, 200)
        v = A.eval(t)
        assert np.all(np.diff(v) >= 0)


def test_finite_limit_eval_is_inf():
    An, cls = Y.sobolev_conjugate(Y.power(5), 3)
    assert cls.kind == "convergent"
    assert An.eval(cls.finite_limit * 2.0) == math.inf


def test_inverse_square():
    assert Y.power(2).inverse(4.0) == pytest.approx(2.0, rel=1e-11)
    assert Y.power(2).inverse(0.0) == 0.0


def test_inverse_exp_against_bisection_oracle():
    # independent oracle: plain scalar bisection on e^t - 1 = 1
    lo, hi = 0.0, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if math.expm1(mid) <= 1.0:
            lo = mid
        else:
            hi = mid
    assert lo == pytest.approx(math.log(2.0), abs=1e-14)
    assert Y.exponential().inverse(1.0) == pytest.approx(lo, rel=1e-11)


def test_inverse_beyond_essential_range_returns_limit():
    An, cls = Y.sobolev_conjugate(Y.power(5), 3)
    top = An.inverse(1e250)
    assert top == pytest.approx(cls.finite_limit, rel=1e-6)
    with pytest.raises(DomainError):
        An.inverse(-1.0)


def test_inverse_right_continuity_monotone():
    A = Y.power_log(2, 1)
    ys = np.geomspace(1e-6, 1e9, 50)
    inv = A.inverse(ys)
    assert np.all(np.diff(inv) > 0)
    # A(inverse(y)) <= y for finite-valued A
    assert np.all(A.eval(inv) <= ys * (1 + 1e-9))


def test_tabulated_rejects_beyond_cap(tmp_path):
    t = np.geomspace(0.1, 100.0, 40)
    v = t**2
    path = tmp_path / "tab.txt"
    np.savetxt(path, np.column_stack([t, v]))
    A = Y.from_file(str(path))
    assert A.kind == "tabulated"
    assert A.eval(5.0) == pytest.approx(25.0, rel=1e-6)
    with pytest.raises(DomainError):
        A.eval(500.0)


def test_tabulated_requires_increasing_columns(tmp_path):
    t = np.array([1.0, 2.0, 2.0, 3.0])
    path = tmp_path / "bad.txt"
    np.savetxt(path, np.column_stack([t, t**2]))
    with pytest.raises(ConstraintError):
        Y.from_file(str(path))


# -- conjugation ---------------------------------------------------------------


def test_conjugate_self_dual_square():
    A = Y.power(2, scale=0.5)
    At = Y.conjugate(A)
    for s in (0.5, 1.0, 2.0):
        assert At.eval(s) == pytest.approx(s * s / 2.0, rel=1e-8)


def test_conjugate_cubic_against_grid_oracle():
    A = Y.power(3, scale=1.0 / 3.0)
    At = Y.conjugate(A)
    for s in (1.0, 4.0):
        # independent oracle: dense-grid maximization of s t - A(t)
        t = np.linspace(0.0, 10.0, 2_000_001)
        oracle = np.max(s * t - t**3 / 3.0)
        assert oracle == pytest.approx(s**1.5 / 1.5, rel=1e-10)
        assert At.eval(s) == pytest.approx(s**1.5 / 1.5, rel=1e-8)


def test_conjugate_power_log_ratio_bounded():
    # conj of ~ t^p log^q is ~ s^{p'} log^{-q/(p-1)} near infinity
    p, q = 3.0, 1.0
    A = Y.power_log_value(p, q)
    At = Y.conjugate(A)
    s = np.geomspace(1e2, 1e6, 40)
    pp = p / (p - 1.0)
    ratio = At.eval(s) / (s**pp * np.log1p(s) ** (-q / (p - 1.0)))
    assert ratio.max() / ratio.min() < 3.0
    assert 1e-3 < ratio.min() and ratio.max() < 1e3


def test_conjugate_is_young():
    for A in [Y.power(2), Y.power_log(3, 1), Y.exponential()]:
        C = Y.conjugate(A)
        grid = np.geomspace(1e-6, C.domain_cap * 0.5, 100)
        assert Y.convexity_violation(C, grid) <= 1e-9
        assert C.eval(0.0) == 0.0


def test_biconjugation_recovers_value():
    for p in (1.5, 2.0, 3.0):
        A = Y.power(p, scale=1.0 / p)
        Abi = Y.conjugate(Y.conjugate(A))
        t = np.geomspace(1e-2, 1e4, 25)
        assert np.max(np.abs(Abi.eval(t) / A.eval(t) - 1.0)) < 1e-6


def test_young_inequality_equality_case():
    holds, slack = Y.young_inequality_check(Y.power(2, scale=0.5), 1.0, 1.0)
    assert holds
    assert abs(slack) <= 1e-9


def test_young_inequality_direct_case():
    A = Y.power(3, scale=1.0 / 3.0)
    holds, slack = Y.young_inequality_check(A, 2.0, 5.0)
    assert holds
    # direct evaluation: conj(A)(s) = s^{3/2}/(3/2)
    assert slack == pytest.approx(2.0**1.5 / 1.5 + 5.0**3 / 3.0 - 10.0, rel=1e-8)


def test_young_inequality_random_sweep():
    for A in [Y.power(2), Y.power_log(2.5, 0.5), Y.exponential()]:
        conj = Y.conjugate(A)
        s = np.exp(RNG.uniform(np.log(1e-3), np.log(min(conj.domain_cap, 1e6)), 2000))
        t = np.exp(RNG.uniform(np.log(1e-3), np.log(min(A.domain_cap, 1e6) * 0.5), 2000))
        holds, _ = Y.young_inequality_check(A, s, t, conj=conj)
        assert np.all(holds)


def test_sandwich_square_hand_computed():
    # A = t^2: conj = s^2/4, inv(conj)(1) = 2, and A(1)/1 = 1 <= 2 <= 2
    assert Y.a1_sandwich_check(Y.power(2), 1.0)


def test_sandwich_random_powers():
    for p in (1.5, 2.0, 4.0):
        A = Y.power(p, scale=1.0 / p)
        t = np.exp(RNG.uniform(np.log(0.1), np.log(100.0), 500))
        assert np.all(Y.a1_sandwich_check(A, t))


def test_sandwich_degenerate_zero():
    with pytest.raises((DegenerateInputError, DomainError)):
        Y.a1_sandwich_check(Y.power(2), 0.0)


# -- indices -------------------------------------------------------------------


def test_indices_pure_power_exact():
    for p in (1.5, 2.0, 3.0, 7.0):
        est = Y.estimate_indices(Y.power(p))
        for v in (est.i_inf, est.s_sup, est.i_inf_infinity, est.s_sup_infinity):
            assert v == pytest.approx(p, abs=1e-6)


def test_indices_power_log_at_infinity():
    for p, q in [(1.5, 0.5), (2.0, 1.0), (3.0, 1.0), (3.0, -0.5)]:
        est = Y.estimate_indices(Y.power_log(p, q))
        assert est.i_inf_infinity == pytest.approx(p, abs=1e-2)
        assert est.s_sup_infinity == pytest.approx(p, abs=1e-2)
        assert est.i_inf <= est.i_inf_infinity <= est.s_sup_infinity <= est.s_sup


def test_indices_exponential_grows_with_cap():
    import orliq.young as young_mod

    A = young_mod.YoungFunction(
        lambda t: np.expm1(t), derivative=lambda t: np.exp(t), name="exp_capped", domain_cap=100.0
    )
    est = Y.estimate_indices(A)
    assert est.s_sup_infinity > 50.0


def test_indices_reject_non_finite():
    An, _ = Y.sobolev_conjugate(Y.power(5), 3)
    with pytest.raises(PreconditionError):
        Y.estimate_indices(An)


# -- doubling classes ----------------------------------------------------------


def test_delta2_power_constant():
    rep = Y.check_delta2(Y.power(3), "global")
    assert rep.holds
    assert rep.constant_K == pytest.approx(8.0, rel=1e-9)
    assert rep.threshold_M == 0.0


def test_delta2_exponential_fails_with_witness():
    rep = Y.check_delta2(Y.exponential(), "near_infinity")
    assert not rep.holds
    assert rep.evidence
    t, lhs, rhs = rep.evidence[0]
    # witness reproduces: A(2t) > 2^30 * A(t)
    A = Y.exponential()
    assert A.eval(2 * t) > 2.0**30 * A.eval(t) or not np.isfinite(A.eval(2 * t))


def test_delta2_nabla2_power_log():
    for p, q in [(2.0, 1.0), (3.0, 1.0), (1.5, 0.5)]:
        A = Y.power_log(p, q)
        assert Y.check_delta2(A, "near_infinity").holds
        rep = Y.check_nabla2(A, "near_infinity")
        assert rep.holds and rep.constant_K > 2.0


def test_nabla2_linear_fails():
    assert not Y.check_nabla2(Y.power(1), "near_infinity").holds


def test_doubling_requires_finite_values():
    An, _ = Y.sobolev_conjugate(Y.power(5), 3)
    with pytest.raises(PreconditionError):
        Y.check_delta2(An, "near_infinity")


# -- domination and essential growth -------------------------------------------


def test_dominates_reflexive():
    rep = Y.dominates(Y.power(2), Y.power(2), "global")
    assert rep.holds and rep.constant_K == 1.0 and rep.threshold_M == 0.0


def test_dominates_cubic_over_square():
    rep = Y.dominates(Y.power(3), Y.power(2), "near_infinity")
    assert rep.holds
    assert rep.constant_K == 1.0
    assert rep.threshold_M == pytest.approx(1.0, rel=1e-12)


def test_dominates_square_over_cubic_fails():
    rep = Y.dominates(Y.power(2), Y.power(3), "near_infinity")
    assert not rep.holds
    assert rep.evidence
    t, lhs, rhs = rep.evidence[0]
    assert lhs > rhs  # the witness violates B(t) <= A(kt)


def test_dominates_transitive_on_builtins():
    A3, A2, A15 = Y.power(3), Y.power(2), Y.power(1.5)
    assert Y.dominates(A3, A2).holds
    assert Y.dominates(A2, A15).holds
    assert Y.dominates(A3, A15).holds


def test_increases_essentially_slower_cases():
    ok, trace = Y.increases_essentially_slower(Y.power(2), Y.power(3))
    assert ok
    ratios = [r for _, r in trace]
    assert all(np.diff(ratios) < 0)

    ok_eq, trace_eq = Y.increases_essentially_slower(Y.power(2), Y.power(2))
    assert not ok_eq
    assert trace_eq[-1][1] == pytest.approx(1.0, rel=1e-6)

    # one extra log power is not enough for the strict numeric threshold
    B = Y.power_log_value(3, 0)
    A = Y.power_log_value(3, 1)
    ok_log, _ = Y.increases_essentially_slower(B, A)
    assert not ok_log


def test_interpolate_power_algebra():
    C = Y.interpolate(Y.power(2), Y.power(4))
    t = np.geomspace(1.0, 100.0, 50)
    assert np.max(np.abs(C.eval(t) / t ** (8.0 / 3.0) - 1.0)) < 1e-6


def test_interpolate_rejects_equal():
    with pytest.raises(PreconditionError):
        Y.interpolate(Y.power(2), Y.power(2))


def test_interpolate_splits_exponential_gap():
    C = Y.interpolate(Y.power(2), Y.exponential())
    assert Y.increases_essentially_slower(Y.power(2), C)[0]
    assert Y.increases_essentially_slower(C, Y.exponential())[0]


# -- Sobolev conjugate ----------------------------------------------------------


def test_conv0_power_cases():
    holds_sub, expo_sub, _ = Y.check_conv0(Y.power(2), 3)
    assert holds_sub and expo_sub == pytest.approx(-0.5, abs=1e-3)
    holds_eq, expo_eq, _ = Y.check_conv0(Y.power(3), 3)
    assert not holds_eq
    holds_sup, _, integ = Y.check_conv0(Y.power(5), 3)
    assert not holds_sup and integ == math.inf


def test_sobolev_strict_mode_raises():
    with pytest.raises(PreconditionError):
        Y.sobolev_conjugate(Y.power(5), 3, regularize_near_zero=False)


def test_sobolev_subcritical_power():
    An, cls = Y.sobolev_conjugate(Y.power(2), 3)
    assert cls.kind == "divergent"
    # A_n ~ t^{np/(n-p)} = t^6: the ratio is bounded on [10, 1e4]
    t = np.geomspace(10.0, 1e4, 30)
    ratio = An.eval(t) / t**6
    assert ratio.max() / ratio.min() < 1.3
    assert Y.sobolev_loglog_slope(An, 1e2, 1e4) == pytest.approx(6.0, abs=1e-2)


def test_sobolev_critical_exponential_type():
    An, cls = Y.sobolev_conjugate(Y.power(3), 3)
    assert cls.kind == "divergent"
    t = np.geomspace(10.0, 1e3, 30)
    ratio = An.log_eval(t) / t**1.5
    assert np.all(ratio > 1.0) and np.all(ratio < 10.0)


def test_sobolev_supercritical_convergent():
    An, cls = Y.sobolev_conjugate(Y.power(5), 3)
    assert cls.kind == "convergent"
    # regularized closed form: H_inf = (1 + int_1^inf tau^-2)^{2/3} = 2^{2/3}
    assert cls.finite_limit == pytest.approx(2.0 ** (2.0 / 3.0), rel=1e-3)


def test_sobolev_power_log_slope():
    An, cls = Y.sobolev_conjugate(Y.power_log(3, 1), 4)
    assert cls.kind == "divergent"
    assert Y.sobolev_loglog_slope(An, 1e2, 1e4) == pytest.approx(12.0, abs=1e-2)


def test_sobolev_inverse_consistency():
    An, _ = Y.sobolev_conjugate(Y.power_log(3, 1), 4)
    t = np.geomspace(0.1, An.domain_cap * 0.9, 12)
    back = An.inverse(An.eval(t))
    # forward and inverse maps go through separate monotone tables
    assert np.max(np.abs(back / t - 1.0)) < 1e-5


# -- misc helpers ---------------------------------------------------------------


def test_equivalent_near_infinity():
    f = lambda s: 3.0 * s**2
    g = lambda s: s**2
    holds, c1, c2 = Y.equivalent_near_infinity(f, g)
    assert holds and c1 is not None and c2 is not None

    h = lambda s: s**3
    holds2, _, _ = Y.equivalent_near_infinity(h, g, s_window=(1e2, 1e8))
    assert not holds2


def test_make_young_families():
    assert Y.make_young("power", p=2).eval(2.0) == 4.0
    assert Y.make_young("exp").name == "exponential"
    with pytest.raises(ConstraintError):
        Y.make_young("nope")
    with pytest.raises(ConstraintError):
        Y.make_young("power_log", p=0.5, q=0.0)


def test_scaling_invariant_all_builtins():
    suite = [
        Y.power(2),
        Y.power(7),
        Y.power_log(1.5, 0.5),
        Y.power_log(3, 1),
        Y.exponential(),
        Y.double_exponential(),
    ]
    for A in suite:
        assert Y.scaling_violation(A) <= 1e-9
        assert Y.convexity_violation(A) <= 1e-9
