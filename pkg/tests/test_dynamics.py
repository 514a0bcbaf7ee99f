import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoparam import dynamics as dyn
from twoparam import geometry as geo
from twoparam.errors import InvalidInputError


def states(n, seed=0, box=0.25):
    r = np.random.default_rng(seed)
    return dyn.KinState.of(r.uniform(-box, box, n), r.uniform(-box, box, (n, 3)),
                           r.uniform(-0.3, 0.3, (n, 3)))


def test_lagrangian_matches_index_loop_contraction():
    s = states(40)
    B = geo.metric_B(s.point)
    assert np.allclose(dyn.lagrangian(s), dyn.lagrangian_contraction(s, B), rtol=1e-13)


@settings(max_examples=30)
@given(st.floats(0.1, 5.0))
def test_homogeneous_lagrangian_has_degree_one(lam):
    x = np.array([0.1, 0.2, -0.1, 0.05])
    xdot = np.array([1.0, 0.2, 0.1, -0.3])
    assert np.isclose(dyn.lagrangian_homogeneous(x, lam * xdot), lam * dyn.lagrangian_homogeneous(x, xdot))


def test_spacelike_state_rejected():
    s = dyn.KinState.of(0.0, np.zeros(3), np.array([2.0, 0.0, 0.0]))
    with pytest.raises(InvalidInputError):
        dyn.lagrangian(s)


@pytest.mark.parametrize("cfg", [geo.DEFAULT, geo.GeometryConfig(2.0, 3.0, 1.0),
                                 geo.GeometryConfig(1.0, 1.0, 2.5)])
def test_straight_lines_solve_the_el_equations(cfg):
    s = states(200, 1, box=0.2)
    assert np.abs(dyn.el_residual(s, cfg)).max() < 1e-10


def test_flat_coefficients_give_minkowski_inertia():
    s = states(50, 2)
    assert np.abs(dyn.el_residual(s, coeffs=dyn.flat_coefficients(1.0))).max() < 1e-12


def test_perturbed_coefficients_break_inertia():
    s = states(50, 3)
    assert np.abs(dyn.el_residual(s, coeffs=dyn.perturbed_coefficients(a1_scale=1.5))).max() > 1e-3


def test_free_acceleration_vanishes():
    s = states(30, 4)
    assert np.abs(dyn.acceleration(s)).max() < 1e-10


def test_velocity_hessian_determinant_at_origin():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = rng.uniform(0.5, 2.0, 2)
        v = rng.uniform(-0.5, 0.5, 3)
        det = dyn.hessian_vv(dyn.KinState.of(0.0, np.zeros(3), v), geo.GeometryConfig(a, b))[1]
        assert np.isclose(det, dyn.hessian_limit(v @ v, a, b), rtol=1e-10)


def test_hessian_limit_reference_points():
    assert np.isclose(dyn.hessian_limit(0.0), -1.0)
    assert np.isclose(dyn.hessian_limit(0.75), -32.0)
    assert np.isclose(dyn.hessian_limit_printed(0.75), -8.0)


@pytest.mark.parametrize("cfg", [geo.DEFAULT, geo.GeometryConfig(1.0, 2.0, 2.0),
                                 geo.GeometryConfig(-1.0, -1.0, 1.0, "AdS")])
def test_pde_residuals(cfg):
    r = np.random.default_rng(6)
    l = cfg.l1 * np.sqrt(abs(cfg.b))
    pts = r.uniform(-0.4, 0.4, (400, 4)) * l
    pts = pts[geo.in_chart(pts, cfg)]
    assert np.abs(dyn.pde_residuals(pts, cfg)).max() < 1e-10


def test_integrated_motion_is_straight():
    r = np.random.default_rng(7)
    s0 = dyn.KinState.of(np.zeros(20), r.uniform(-0.2, 0.2, (20, 3)), r.uniform(-0.3, 0.3, (20, 3)))
    traj = dyn.integrate_free_motion(s0, 0.5, 0.01)
    assert traj.straightness_error().max() < 1e-10
    assert traj.positions.shape == (51, 20, 3)


def test_rk4_is_fourth_order_on_a_curved_problem():
    s0 = dyn.KinState.of(np.zeros(2), np.array([[0.3, 0.1, 0.0], [0.0, 0.3, -0.2]]),
                         np.array([[0.4, 0.0, 0.1], [0.0, -0.3, 0.4]]))
    coeffs = dyn.perturbed_coefficients(a1_scale=3.0)
    ref = dyn.integrate_free_motion(s0, 0.6, 0.005, coeffs=coeffs).positions[-1]
    errs = [np.abs(dyn.integrate_free_motion(s0, 0.6, h, coeffs=coeffs).positions[-1] - ref).max()
            for h in (0.1, 0.05)]
    assert 12.0 < errs[0] / errs[1] < 20.0


def test_action_derivative_matches_integrand():
    t = np.linspace(-0.8, 0.8, 9)
    v2 = np.full_like(t, 0.3)
    assert np.abs(dyn.action_shortdist_check(t, v2)).max() < 1e-8


def test_finsler_lagrangian_matches_direct_evaluation():
    s = states(40, 8)
    xdot = np.column_stack([np.ones(40), s.v])
    vx = np.einsum("...m,...m->...", geo.induced_V(s.point, 0.7), xdot)
    keep = vx > 0
    assert keep.sum() >= 5
    s = dyn.KinState.of(s.t[keep], s.x[keep], s.v[keep])
    expected = dyn.lagrangian(s) ** 0.5 * vx[keep] ** 0.5
    assert np.allclose(dyn.finsler_lagrangian(s, 0.5, 0.7), expected, rtol=1e-12)


def test_finsler_rejects_degenerate_exponents():
    for delta in (0, 1):
        with pytest.raises(InvalidInputError):
            dyn.finsler_lagrangian(states(2), delta, 0.7)
