import numpy as np
import pytest

from orliq import young as Y
from orliq.errors import DomainError, PreconditionError
from orliq.orlicz import (
    GridFunction,
    Mesh,
    basis_w1a_norms,
    coercivity_bound_check,
    gradient_luxemburg_norm,
    holder_pairing_check,
    luxemburg_norm,
    modular,
    poincare_modular_check,
)

RNG = np.random.default_rng(7)


def interval_mesh(n=129):
    return Mesh.interval(0.0, 1.0, n)


def square_mesh(n=17):
    return Mesh.rectangle((0.0, 1.0), (0.0, 1.0), n, n)


# -- mesh invariants -------------------------------------------------------------


def test_measures_tile_domain():
    m1 = interval_mesh()
    assert np.sum(m1.element_measures) == pytest.approx(1.0, rel=1e-13)
    m2 = Mesh.rectangle((0.0, 2.0), (1.0, 2.5), 21, 13)
    assert np.sum(m2.element_measures) == pytest.approx(3.0, rel=1e-13)


def test_boundary_flags():
    m = square_mesh(9)
    # 4 edges minus shared corners
    assert np.count_nonzero(m.boundary_mask) == 4 * 9 - 4
    m1 = interval_mesh(11)
    assert np.count_nonzero(m1.boundary_mask) == 2


def test_mesh_json_roundtrip():
    m = Mesh.rectangle((0.0, 1.0), (0.0, 2.0), 9, 11)
    m2 = Mesh.from_json(m.to_json())
    assert np.allclose(m.node_coords, m2.node_coords)
    assert np.array_equal(m.elements, m2.elements)


def test_gridfunction_csv_roundtrip(tmp_path):
    m = square_mesh(7)
    u = GridFunction.from_callable(m, lambda x: np.sin(x[:, 0]) + x[:, 1])
    path = tmp_path / "u.csv"
    u.to_csv(path)
    v = GridFunction.from_csv(m, path)
    assert np.allclose(u.values, v.values, atol=1e-12)


def test_zero_trace_is_exact():
    m = square_mesh(9)
    u = GridFunction.from_callable(m, lambda x: 1.0 + x[:, 0])
    w = u.zero_trace()
    assert w.is_zero_trace
    assert np.all(w.values[m.boundary_mask] == 0.0)


# -- modular ----------------------------------------------------------------------


def test_modular_zero_and_constant():
    m = interval_mesh()
    assert modular(GridFunction.zeros(m), Y.power(2)) == 0.0
    c = 1.7
    assert modular(GridFunction.constant(m, c), Y.power(2)) == pytest.approx(c * c, rel=1e-12)


def test_modular_linear_converges_to_third():
    # int_0^1 x^2 dx = 1/3, midpoint rule error O(h^2)
    errs = []
    for n in (17, 33, 65):
        m = interval_mesh(n)
        u = GridFunction.from_callable(m, lambda x: x[:, 0])
        errs.append(abs(modular(u, Y.power(2)) - 1.0 / 3.0))
    assert errs[2] < errs[1] < errs[0]
    order = np.log2(errs[1] / errs[2])
    assert order > 1.8


def test_modular_infinite_beyond_limit():
    m = interval_mesh(17)
    An, cls = Y.sobolev_conjugate(Y.power(5), 3)
    u = GridFunction.constant(m, cls.finite_limit * 3.0)
    assert modular(u, An) == np.inf


# -- Luxemburg norm ----------------------------------------------------------------


def test_luxemburg_zero_and_constant():
    m = interval_mesh()
    assert luxemburg_norm(GridFunction.zeros(m), Y.power(2)).luxemburg_norm == 0.0
    for p in (1.5, 2.0, 3.0):
        rep = luxemburg_norm(GridFunction.constant(m, 1.0), Y.power(p))
        assert rep.luxemburg_norm == pytest.approx(1.0, rel=1e-9)


def test_luxemburg_linear_profile():
    m = interval_mesh(513)
    u = GridFunction.from_callable(m, lambda x: x[:, 0])
    rep = luxemburg_norm(u, Y.power(2))
    assert rep.luxemburg_norm == pytest.approx((1.0 / 3.0) ** 0.5, abs=2e-5)


def test_luxemburg_matches_discrete_p_norm():
    m = interval_mesh(65)
    for p in (1.5, 2.0, 4.0):
        A = Y.power(p)
        for _ in range(20):
            u = GridFunction(m, RNG.normal(size=m.n_nodes))
            # independent oracle: the discrete p-norm under the same quadrature
            vals = np.abs(m.values_at_qp(u.values))
            oracle = float(np.sum(m.qp_weights * vals**p)) ** (1.0 / p)
            lux = luxemburg_norm(u, A).luxemburg_norm
            assert lux == pytest.approx(oracle, rel=1e-9)


def test_unit_ball_characterization():
    m = square_mesh(9)
    for A in (Y.power(2), Y.power_log(2.5, 0.5)):
        for _ in range(10):
            u = GridFunction(m, RNG.normal(size=m.n_nodes))
            nrm = luxemburg_norm(u, A).luxemburg_norm
            scaled = GridFunction(m, u.values / nrm)
            assert modular(scaled, A) == pytest.approx(1.0, abs=1e-8)


def test_luxemburg_homogeneity():
    m = interval_mesh(33)
    A = Y.power_log(2, 1)
    u = GridFunction(m, RNG.normal(size=m.n_nodes))
    base = luxemburg_norm(u, A).luxemburg_norm
    for c in (0.013, 2.7, 191.0):
        scaled = luxemburg_norm(GridFunction(m, c * u.values), A).luxemburg_norm
        assert scaled == pytest.approx(c * base, rel=1e-9)


def test_luxemburg_triangle_inequality():
    m = interval_mesh(33)
    A = Y.power_log(2.5, 0.5)
    for _ in range(10):
        u = GridFunction(m, RNG.normal(size=m.n_nodes))
        v = GridFunction(m, RNG.normal(size=m.n_nodes))
        nu = luxemburg_norm(u, A).luxemburg_norm
        nv = luxemburg_norm(v, A).luxemburg_norm
        nuv = luxemburg_norm(u + v, A).luxemburg_norm
        assert nuv <= (nu + nv) * (1.0 + 1e-9)


# -- Holder pairing -----------------------------------------------------------------


def test_holder_zero_factor():
    m = interval_mesh(33)
    u = GridFunction(m, RNG.normal(size=m.n_nodes))
    holds, slack = holder_pairing_check(u, GridFunction.zeros(m), Y.power(2))
    assert holds and slack >= 0


def test_holder_constants():
    m = interval_mesh(65)
    one = GridFunction.constant(m, 1.0)
    holds, slack = holder_pairing_check(one, one, Y.power(2))
    assert holds


def test_holder_random_sweep():
    m = interval_mesh(33)
    A = Y.power_log(2, 0.5)
    conj = Y.conjugate(A)
    for _ in range(50):
        u = GridFunction(m, RNG.normal(scale=3.0, size=m.n_nodes))
        v = GridFunction(m, RNG.normal(scale=0.2, size=m.n_nodes))
        holds, _ = holder_pairing_check(u, v, A, conj=conj)
        assert holds


# -- Poincare -----------------------------------------------------------------------


def test_poincare_zero():
    m = interval_mesh(17)
    holds, slack = poincare_modular_check(GridFunction.zeros(m), Y.power(2))
    assert holds and slack == 0.0


def test_poincare_tent_2d():
    m = square_mesh(17)
    u = GridFunction.from_callable(
        m, lambda x: np.minimum.reduce([x[:, 0], 1 - x[:, 0], x[:, 1], 1 - x[:, 1]])
    ).zero_trace()
    holds, _ = poincare_modular_check(u, Y.power(2))
    assert holds


def test_poincare_random_sweep():
    m = square_mesh(9)
    A = Y.power_log(2, 1)
    for _ in range(30):
        u = GridFunction(m, RNG.normal(size=m.n_nodes)).zero_trace()
        holds, _ = poincare_modular_check(u, A)
        assert holds


def test_poincare_requires_zero_trace():
    m = interval_mesh(17)
    with pytest.raises(PreconditionError):
        poincare_modular_check(GridFunction.constant(m, 1.0), Y.power(2))


# -- coercivity bound ----------------------------------------------------------------


def test_coercivity_pure_power():
    m = interval_mesh(33)
    v = GridFunction.constant(m, 50.0)
    rep = coercivity_bound_check(v, Y.power(2))
    assert rep.holds
    assert rep.k3 >= 0.0
    assert rep.k1 <= rep.k2


def test_coercivity_power_log_probe_family():
    m = interval_mesh(33)
    v = GridFunction.constant(m, 10.0)
    rep = coercivity_bound_check(v, Y.power_log(2.5, 0.5))
    assert rep.holds and rep.k3 >= 0.0


def test_coercivity_norm_precondition():
    m = interval_mesh(33)
    v = GridFunction.constant(m, 1e-9)
    with pytest.raises(PreconditionError):
        coercivity_bound_check(v, Y.power(2))


# -- basis norms ----------------------------------------------------------------------


def test_basis_w1a_norms_match_direct():
    m = interval_mesh(17)
    A = Y.power(2)
    norms = basis_w1a_norms(m, A)
    # direct computation for one interior hat function
    i = m.interior_idx[3]
    phi = np.zeros(m.n_nodes)
    phi[i] = 1.0
    u = GridFunction(m, phi)
    direct = luxemburg_norm(u, A).luxemburg_norm + gradient_luxemburg_norm(u, A).luxemburg_norm
    assert norms[3] == pytest.approx(direct, rel=1e-8)


def test_gridfunction_shape_mismatch():
    m = interval_mesh(17)
    with pytest.raises(DomainError):
        GridFunction(m, np.zeros(5))
