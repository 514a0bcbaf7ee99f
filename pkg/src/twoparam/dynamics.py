"""Free-particle dynamics for L = sqrt|B_mu_nu xdot^mu xdot^nu| with xdot = (1, v).

All derivatives come from second-order dual numbers over the seven slots
``(t, x1, x2, x3, v1, v2, v3)``; states may be batched along leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from twoparam.core import dual as dm
from twoparam.geometry import (
    DEFAULT,
    GeometryConfig,
    check_chart,
    coefficients,
    eta_xx,
    in_chart,
    induced_V,
    metric_from_coefficients,
)
from twoparam.errors import ChartDomainError, DegenerateHessianError, InvalidInputError

T, X, V = 0, slice(1, 4), slice(4, 7)


@dataclass(frozen=True)
class KinState:
    """Time, position and coordinate velocity v^i = dx^i/dt (batchable)."""

    t: np.ndarray
    x: np.ndarray
    v: np.ndarray

    @classmethod
    def of(cls, t, x, v) -> "KinState":
        return cls(np.asarray(t, dtype=float), np.asarray(x, dtype=float), np.asarray(v, dtype=float))

    @property
    def point(self) -> np.ndarray:
        return np.concatenate([self.t[..., None], self.x], axis=-1)


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    step: float
    method: str = "rk4"
    meta: dict = field(default_factory=dict)

    def straightness_error(self) -> np.ndarray:
        """|x(t) - x0 - v0 (t - t0)| (inf-norm over components) at every sample."""
        dt = (self.times - self.times[0]).reshape((-1,) + (1,) * (self.positions.ndim - 1))
        line = self.positions[0] + self.velocities[0] * dt
        return np.abs(self.positions - line).max(axis=-1)


Coefficients = Callable[[list], tuple]


def inertial_coefficients(cfg: GeometryConfig = DEFAULT) -> Coefficients:
    return lambda xs: coefficients(xs, cfg)


def flat_coefficients(a0: float = 1.0) -> Coefficients:
    """Constant A0 with A1 = 0 (B proportional to eta)."""
    return lambda xs: (a0 + 0.0 * xs[0], 0.0 * xs[0])


def perturbed_coefficients(cfg: GeometryConfig = DEFAULT, a1_scale: float = 1.01) -> Coefficients:
    """The inertial A0 with A1 multiplied by ``a1_scale``; breaks inertia when != 1."""

    def coeffs(xs):
        a0, a1 = coefficients(xs, cfg)
        return a0, a1 * a1_scale

    return coeffs


def _radicand(q, coeffs: Coefficients, l1: float = 1.0):
    """B_mu_nu xdot^mu xdot^nu for slots q = (t, x1, x2, x3, v1, v2, v3)."""
    xs = q[:4]
    a0, a1 = coeffs(xs)
    v = q[4:7]
    # contract before multiplying: A0 (eta xdot xdot) + A1 (x.eta.xdot)^2 / l1^2
    vv = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] - 1.0
    yv = xs[1] * v[0] + xs[2] * v[1] + xs[3] * v[2] - xs[0]
    return a0 * vv + a1 * (yv * yv) / l1**2


def _slots(s: KinState):
    return [s.t] + [s.x[..., i] for i in range(3)] + [s.v[..., i] for i in range(3)]


def _timelike(r):
    rv = np.asarray(dm.value_of(r))
    if np.any(rv >= 0):
        raise InvalidInputError("state is not timelike (B xdot xdot >= 0)")


def lagrangian(s: KinState, cfg: GeometryConfig = DEFAULT, coeffs: Coefficients | None = None):
    """sqrt|B00 + 2 B0i v^i + Bij v^i v^j| for timelike states."""
    check_chart(s.point, cfg)
    r = _radicand(_slots(s), coeffs or inertial_coefficients(cfg), cfg.l1)
    _timelike(r)
    return np.sqrt(-r)


def lagrangian_contraction(s: KinState, B) -> np.ndarray:
    """Index-loop contraction sqrt|B_mu_nu xdot^mu xdot^nu| for a supplied B (oracle)."""
    B = np.asarray(B)
    xdot = np.concatenate([np.ones(np.shape(s.t))[..., None], s.v], axis=-1)
    total = np.zeros(np.shape(s.t))
    for m in range(4):
        for n in range(4):
            total = total + B[..., m, n] * xdot[..., m] * xdot[..., n]
    return np.sqrt(np.abs(total))


def lagrangian_homogeneous(x, xdot, cfg: GeometryConfig = DEFAULT):
    """sqrt|B(x) xdot xdot| for an arbitrary 4-velocity; degree one in ``xdot``."""
    xs = [np.asarray(x, dtype=float)[..., i] for i in range(4)]
    a0, a1 = coefficients(xs, cfg)
    B = metric_from_coefficients(xs, a0, a1, cfg.l1)
    xd = np.asarray(xdot, dtype=float)
    r = sum(B[m][n] * xd[..., m] * xd[..., n] for m in range(4) for n in range(4))
    return np.sqrt(np.abs(r))


def lagrangian_jet(s: KinState, cfg: GeometryConfig = DEFAULT, coeffs: Coefficients | None = None):
    """L as a second-order dual number over (t, x, v)."""
    check_chart(s.point, cfg)
    q = dm.variables(_slots(s), order=2)
    r = _radicand(q, coeffs or inertial_coefficients(cfg), cfg.l1)
    _timelike(r)
    return dm.sqrt(-r)


def _el_parts(s, cfg, coeffs):
    L = lagrangian_jet(s, cfg, coeffs)
    g, H = L.grad, L.hess
    lx = g[..., X]
    ltv = H[..., T, V]
    hxv = H[..., X, V]  # [j, i] = d2L / dx^j dv^i
    hvv = H[..., V, V]
    drift = lx - ltv - np.einsum("...j,...ji->...i", s.v, hxv)
    return drift, hvv


def el_residual(s: KinState, cfg: GeometryConfig = DEFAULT, coeffs: Coefficients | None = None):
    """dL/dx^i - d_t dL/dv^i - v^j d_j dL/dv^i: vanishes iff straight lines solve the EL equations."""
    return _el_parts(s, cfg, coeffs)[0]


def hessian_vv(s: KinState, cfg: GeometryConfig = DEFAULT, coeffs: Coefficients | None = None):
    """(d2L/dv^i dv^j, its determinant)."""
    L = lagrangian_jet(s, cfg, coeffs)
    H = L.hess[..., V, V]
    return H, np.linalg.det(H)


def hessian_limit_printed(v2, a: float = 1.0, b: float = 1.0):
    """The printed l1 -> infinity limit -1/|b/a (v.v - 1)|^{3/2}."""
    return -1.0 / np.abs(b / a * (np.asarray(v2) - 1.0)) ** 1.5


def hessian_limit(v2, a: float = 1.0, b: float = 1.0):
    """det of the velocity Hessian of sqrt(a/b) sqrt(1 - v.v) in three dimensions.

    The radial eigenvalue carries one power of (1 - v.v) fewer than the two
    transverse ones, giving exponent 5/2.
    """
    return -((a / b) ** 1.5) / (1.0 - np.asarray(v2)) ** 2.5


def pde_residuals(x, cfg: GeometryConfig = DEFAULT):
    """Residuals of the first-order system for (A0, A1), shape ``batch + (8,)``.

    Order: d_i A0 - 2 A1 x^i / l1^2 (i=1..3), d_t A0 + 2 A1 t / l1^2,
    A0 d_i A1 - 4 A1^2 x^i / l1^2 (i=1..3), A0 d_t A1 + 4 A1^2 t / l1^2.
    """
    pts = np.asarray(x, dtype=float)
    xs = dm.variables([pts[..., i] for i in range(4)])
    a0, a1 = coefficients(xs, cfg)
    A0, A1 = a0.value, a1.value
    g0, g1 = a0.grad, a1.grad
    u = pts / cfg.l1**2
    t = u[..., 0]
    out = []
    for i in (1, 2, 3):
        out.append(g0[..., i] - 2 * A1 * u[..., i])
    out.append(g0[..., 0] + 2 * A1 * t)
    for i in (1, 2, 3):
        out.append(A0 * g1[..., i] - 4 * A1**2 * u[..., i])
    out.append(A0 * g1[..., 0] + 4 * A1**2 * t)
    return np.stack(out, axis=-1)


def acceleration(s: KinState, cfg: GeometryConfig = DEFAULT, coeffs: Coefficients | None = None,
                 max_cond: float = 1e12):
    """dv/dt from the Euler-Lagrange equations solved for the acceleration."""
    drift, hvv = _el_parts(s, cfg, coeffs)
    cond = np.linalg.cond(hvv)
    if np.any(~np.isfinite(cond)) or np.any(cond > max_cond):
        raise DegenerateHessianError(f"velocity Hessian condition number {np.max(cond):.3g}")
    return np.linalg.solve(hvv, drift[..., None])[..., 0]


def integrate_free_motion(s0: KinState, t_end: float, step: float, cfg: GeometryConfig = DEFAULT,
                          coeffs: Coefficients | None = None) -> Trajectory:
    """Classical RK4 on (x, v) with the acceleration from :func:`acceleration`."""
    t0 = float(np.ravel(s0.t)[0])
    span = t_end - t0
    n = max(1, int(round(abs(span) / step)))
    h = span / n
    times = t0 + h * np.arange(n + 1)
    x, v = s0.x.copy(), s0.v.copy()
    shape = np.shape(s0.t)
    xs, vs = [x], [v]

    def f(t, x, v):
        st = KinState(np.full(shape, t), x, v)
        if not np.all(in_chart(st.point, cfg)):
            raise ChartDomainError(f"trajectory left the chart at t = {t:.6g}")
        return v, acceleration(st, cfg, coeffs)

    for k in range(n):
        t = times[k]
        k1x, k1v = f(t, x, v)
        k2x, k2v = f(t + h / 2, x + h / 2 * k1x, v + h / 2 * k1v)
        k3x, k3v = f(t + h / 2, x + h / 2 * k2x, v + h / 2 * k2v)
        k4x, k4v = f(t + h, x + h * k3x, v + h * k3v)
        x = x + h / 6 * (k1x + 2 * k2x + 2 * k3x + k4x)
        v = v + h / 6 * (k1v + 2 * k2v + 2 * k3v + k4v)
        xs.append(x)
        vs.append(v)
    return Trajectory(times, np.stack(xs), np.stack(vs), abs(h), "rk4", {"t0": t0, "t_end": t_end})


# ----------------------------------------------------------------------------
# short-distance action (a = b = 1)


def _short_radicand(t, v2):
    return 1.0 - v2 * (1.0 - t * t)


def _check_short(t, v2):
    tv, vv = np.asarray(dm.value_of(t)), np.asarray(dm.value_of(v2))
    if np.any(tv * tv >= 1) or np.any(_short_radicand(tv, vv) <= 0) or np.any(vv < 0):
        raise InvalidInputError("short-distance action needs t^2 < 1, v.v >= 0 and 1 - v.v (1 - t^2) > 0")


def action_shortdist(t, v2):
    """Closed-form antiderivative of sqrt(1/(1-t^2)^2 - v.v/(1-t^2))."""
    _check_short(t, v2)
    r = dm.sqrt(_short_radicand(t, v2))
    speed = np.sqrt(v2)
    return 0.5 * dm.log((r + t) / (r - t)) - speed * dm.log(speed * t + r)


def action_integrand(t, v2):
    t = np.asarray(t, dtype=float)
    return np.sqrt(1.0 / (1.0 - t * t) ** 2 - v2 / (1.0 - t * t))


def action_shortdist_check(t, v2):
    """d/dt(closed form) minus the integrand; zero when the antiderivative is right."""
    (tt,) = dm.variables([np.asarray(t, dtype=float)])
    v2 = np.asarray(v2, dtype=float)
    d = action_shortdist(tt, v2).grad[..., 0]
    return d - action_integrand(t, v2)


# ----------------------------------------------------------------------------
# Finsler-type Lagrangian


def finsler_lagrangian(s: KinState, delta: float, ca: float, cfg: GeometryConfig = DEFAULT):
    """|B xdot xdot|^{(1-delta)/2} (V_mu xdot^mu)^delta with the induced V (b = 1)."""
    if delta in (0, 1):
        raise InvalidInputError("delta must differ from 0 and 1")
    if cfg.b != 1.0:
        raise InvalidInputError("the induced V is defined for b = 1")
    check_chart(s.point, cfg)
    xs = [s.t] + [s.x[..., i] for i in range(3)]
    a0, a1 = coefficients(xs, cfg)
    B = metric_from_coefficients(xs, a0, a1, cfg.l1)
    xdot = [np.ones_like(s.t)] + [s.v[..., i] for i in range(3)]
    r = sum(B[m][n] * xdot[m] * xdot[n] for m in range(4) for n in range(4))
    Vc = induced_V(s.point, ca)
    vx = sum(Vc[..., m] * xdot[m] for m in range(4))
    if float(delta) != int(delta) and np.any(vx <= 0):
        raise InvalidInputError("V.xdot must be positive for a non-integer exponent")
    return np.abs(r) ** ((1.0 - delta) / 2.0) * vx**delta


__all__ = [
    "KinState",
    "Trajectory",
    "inertial_coefficients",
    "flat_coefficients",
    "perturbed_coefficients",
    "lagrangian",
    "lagrangian_contraction",
    "lagrangian_homogeneous",
    "lagrangian_jet",
    "el_residual",
    "hessian_vv",
    "hessian_limit",
    "hessian_limit_printed",
    "pde_residuals",
    "acceleration",
    "integrate_free_motion",
    "action_shortdist",
    "action_integrand",
    "action_shortdist_check",
    "finsler_lagrangian",
    "eta_xx",
]
