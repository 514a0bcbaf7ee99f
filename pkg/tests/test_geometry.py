import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoparam import geometry as geo
from twoparam.core import dual as dm
from twoparam.errors import ChartDomainError, InvalidInputError

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])
coord = st.floats(-0.45, 0.45)
point = st.tuples(coord, coord, coord, coord).map(np.array)


def metric_oracle(x, a, b, l1=1.0):
    """Direct numpy evaluation of a/s eta - a/s^2 (eta x)(eta x)^T / l1^2, s = b + x.eta.x / l1^2."""
    s = b + x @ ETA @ x / l1**2
    y = ETA @ x
    return a / s * ETA - a / s**2 * np.outer(y, y) / l1**2


def test_config_validation():
    with pytest.raises(InvalidInputError):
        geo.GeometryConfig(branch="flat")
    with pytest.raises(InvalidInputError):
        geo.GeometryConfig(l1=0.0)


@settings(max_examples=60)
@given(point, st.floats(0.5, 3.0), st.floats(0.5, 3.0))
def test_metric_matches_direct_formula(x, a, b):
    cfg = geo.GeometryConfig(a, b, 1.0)
    if not geo.in_chart(x, cfg):
        return
    assert np.allclose(geo.metric_B(x, cfg), metric_oracle(x, a, b), rtol=1e-12, atol=1e-12)


def test_metric_with_length_scale():
    cfg = geo.GeometryConfig(1.3, 2.0, 3.0)
    x = np.array([0.4, 1.1, -0.3, 0.8])
    assert np.allclose(geo.metric_B(x, cfg), metric_oracle(x, 1.3, 2.0, 3.0), rtol=1e-12)


def test_metric_at_origin_is_scaled_eta():
    assert np.allclose(geo.metric_B(np.zeros(4), geo.GeometryConfig(2.0, 4.0)), 0.5 * ETA)


def test_metric_is_symmetric_and_batched():
    pts = np.random.default_rng(0).uniform(-0.3, 0.3, (50, 4))
    B = geo.metric_B(pts)
    assert B.shape == (50, 4, 4)
    assert np.allclose(B, np.swapaxes(B, -1, -2))


def test_outside_chart_raises():
    with pytest.raises(ChartDomainError):
        geo.metric_B(np.array([2.0, 0.0, 0.0, 0.0]))
    assert not geo.in_chart(np.array([1.0, 0.0, 0.0, 0.0]))


def test_metric_accepts_dual_numbers():
    xs = dm.variables([0.1, 0.2, -0.1, 0.05])
    B = geo.metric_from_coefficients(xs, *geo.coefficients(xs))
    fd = dm.central_difference(lambda p: geo.metric_B(p)[..., 0, 1], np.array([0.1, 0.2, -0.1, 0.05]))
    assert np.allclose(B[0][1].grad, fd, atol=1e-8)


@settings(max_examples=40)
@given(point)
def test_inverse_is_inverse(x):
    if not geo.in_chart(x):
        return
    assert np.allclose(geo.inverse_B(x) @ geo.metric_B(x), np.eye(4), atol=1e-12)


def test_ads_inverse():
    cfg = geo.GeometryConfig(-1.0, -1.0, 1.0, "AdS")
    x = np.array([1.2, 0.2, 0.1, -0.3])
    assert geo.in_chart(x, cfg)
    assert np.allclose(geo.inverse_B(x, cfg) @ geo.metric_B(x, cfg), np.eye(4), atol=1e-12)


def test_typeset_inverse_is_not_the_inverse():
    x = np.array([0.1, 0.2, 0.0, 0.0])
    assert not np.allclose(geo.inverse_B_printed(x) @ geo.metric_B(x), np.eye(4), atol=1e-3)


def test_signature_minors_are_schur_complement_minors():
    x = np.array([0.2, -0.1, 0.3, 0.1])
    B = geo.metric_B(x)
    got = geo.signature_minors(x)
    assert np.isclose(got[0], B[0, 0])
    for k in (1, 2, 3):
        assert np.isclose(got[k], np.linalg.det(B[: k + 1, : k + 1]) / B[0, 0], rtol=1e-12)
    assert all(m > 0 for m in got[1:])


@settings(max_examples=40)
@given(point)
def test_embed_project_round_trip(x):
    if not geo.in_chart(x):
        return
    X = geo.embed(x)
    assert np.allclose(geo.project(X), x, atol=1e-13)
    eta5 = np.diag([-1.0, 1, 1, 1, 1])
    assert np.isclose(X @ eta5 @ X, 1.0)


def test_pullback_of_ambient_form_matches_closed_induced_metric():
    x = np.array([0.2, 0.1, -0.3, 0.25])
    pb = geo.pullback_form(geo.ambient_form(), x)
    assert np.allclose(pb, geo.induced_metric_closed(x), atol=1e-13)
    assert np.allclose(geo.metric_B(x), geo.conformal_factor() * pb, atol=1e-13)


def test_induced_tensor_symmetries():
    x = np.array([0.1, 0.2, -0.1, 0.05])
    C = geo.induced_C(x, 0.7, -0.4)
    D = geo.induced_D(x, 0.7, -0.4, 0.3)
    assert np.allclose(C, C.T)
    assert np.allclose(D, -D.T)


def test_exterior_derivative_of_exact_form_vanishes():
    pts = np.random.default_rng(3).uniform(-0.3, 0.3, (20, 4))

    def grad_phi(p):
        # d(t x1 + x2^2 x3)
        t, x1, x2, x3 = np.moveaxis(p, -1, 0)
        return np.stack([x1, t, 2 * x2 * x3, x2 * x2], axis=-1)

    assert np.abs(geo.exterior_derivative_fd(grad_phi, pts, 1e-4)).max() < 1e-9


def test_typeset_potential_differs_from_D():
    pts = np.random.default_rng(4).uniform(-0.3, 0.3, (20, 4))
    dU = geo.exterior_derivative_fd(lambda p: geo.induced_U_printed(p, 0.7, -0.4, 0.3), pts, 1e-4)
    assert np.abs(dU - geo.induced_D(pts, 0.7, -0.4, 0.3)).max() > 1e-3


def test_densities_are_finite_and_positive():
    pts = np.random.default_rng(5).uniform(-0.3, 0.3, (30, 4))
    ym = geo.ym_density(pts, 0.7, -0.4, 0.3)
    bi = geo.bi_density(pts, 0.7, -0.4, 0.3)
    assert np.all(np.isfinite(ym)) and np.all(bi > 0)


def test_eval_grid_unknown_quantity():
    with pytest.raises(InvalidInputError):
        geo.eval_grid("nope", np.zeros((1, 4)))
