"""Scalar modes in the reparametrized time s = atanh(t).

The separated Klein-Gordon equation becomes

    chi'' + F chi' + G chi = 0,   F = 2 tanh s,   G = (m^2 + xi) / sigma + k.k,

with sigma = 1 - tanh^2 s. This module integrates it, evaluates the massless
closed form, runs the WKB recursion on a grid and computes the static-detector
transition amplitude together with a quadrature cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from twoparam.core import dual as dm
from twoparam.core.dual import Dual
from twoparam.errors import EvanescentError, InvalidInputError, TurningPointError

__all__ = [
    "ModeParams",
    "ModeSolution",
    "WKBState",
    "time_reparam",
    "time_reparam_inverse",
    "sigma",
    "coeff_F",
    "coeff_F_exponential",
    "coeff_dF",
    "coeff_G",
    "solve_mode_ode",
    "ode_residual",
    "exact_massless",
    "exact_massless_jet",
    "exact_residual",
    "wronskian",
    "wkb_w0",
    "wkb_w0_cosh",
    "wkb_initial",
    "wkb_iterate",
    "wkb_s1_s2",
    "first_order_mode",
    "fourier_closed_form",
    "fourier_oracle",
    "adaptive_simpson",
    "unruh_amplitude",
    "amplitude_report",
    "moving_detector_amplitude",
]


@dataclass(frozen=True)
class ModeParams:
    m2: float = 0.0
    xi: float = 0.0
    kk: float = 2.0
    sign: int = 1

    def __post_init__(self):
        if self.m2 < 0:
            raise InvalidInputError("m^2 must be non-negative")
        if self.kk < 0:
            raise InvalidInputError("k.k must be non-negative")
        if self.sign not in (1, -1):
            raise InvalidInputError("sign must be +1 or -1")

    @property
    def mass_term(self) -> float:
        return self.m2 + self.xi

    @property
    def kappa(self) -> float:
        if self.kk <= 1:
            raise EvanescentError(f"k.k = {self.kk} <= 1 has no real frequency")
        return float(np.sqrt(self.kk - 1.0))


@dataclass
class ModeSolution:
    grid: np.ndarray
    chi: np.ndarray
    dchi: np.ndarray
    method: str
    meta: dict = field(default_factory=dict)


@dataclass
class WKBState:
    grid: np.ndarray
    w: np.ndarray
    order: int = 0

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.w = np.asarray(self.w, dtype=float)
        if self.grid.shape != self.w.shape or self.grid.ndim != 1:
            raise InvalidInputError("grid and w must be 1-d arrays of equal length")
        if len(self.grid) > 2:
            d = np.diff(self.grid)
            if np.abs(d - d[0]).max() > 1e-9 * abs(d[0]):
                raise InvalidInputError("WKB grid must be uniform")

    @property
    def step(self) -> float:
        return float(self.grid[1] - self.grid[0])


# ----------------------------------------------------------------------------
# time variable and coefficients


def time_reparam(t):
    """s = (1/2) ln((1 + t)/(1 - t)) for |t| < 1."""
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) >= 1):
        raise InvalidInputError("time reparametrization needs |t| < 1")
    return np.arctanh(t)


def time_reparam_inverse(s):
    return np.tanh(s)


def sigma(s):
    # 1 - tanh^2 written as sech^2 keeps full precision at large |s|
    c = dm.cosh(s)
    return (c * c).reciprocal() if isinstance(c, Dual) else 1.0 / (c * c)


def coeff_F(s):
    return 2.0 * dm.tanh(s)


def coeff_F_exponential(s):
    """F as a ratio of exponentials; equal to :func:`coeff_F` where e^{2s} is finite."""
    e = np.exp(2.0 * np.asarray(s, dtype=float))
    return 2.0 * (e - 1.0) / (e + 1.0)


def coeff_dF(s):
    return 2.0 * sigma(s)


def coeff_G(s, params: ModeParams):
    return params.mass_term * sigma(s).reciprocal() + params.kk if isinstance(s, Dual) \
        else params.mass_term / sigma(s) + params.kk


# ----------------------------------------------------------------------------
# the mode ODE


def _rhs(s, y, params: ModeParams, reduced: bool):
    chi, dchi = y
    if reduced:
        return np.array([dchi, -params.kk * chi])
    return np.array([dchi, -coeff_F(s) * dchi - coeff_G(s, params) * chi])


def solve_mode_ode(params: ModeParams, chi0: complex, dchi0: complex, s0: float, s1: float,
                   step: float = 0.01, reduced: bool = False) -> ModeSolution:
    """Classical RK4 from ``s0`` to ``s1`` (either direction).

    ``reduced=True`` drops the friction term and the mass term, leaving the
    oscillator chi'' + k.k chi = 0.
    """
    if not (np.isfinite(s0) and np.isfinite(s1)) or step <= 0:
        raise InvalidInputError("need a finite range and a positive step")
    n = max(1, int(round(abs(s1 - s0) / step)))
    h = (s1 - s0) / n
    grid = s0 + h * np.arange(n + 1)
    y = np.zeros((n + 1, 2), dtype=complex)
    y[0] = chi0, dchi0
    for i in range(n):
        s, yi = grid[i], y[i]
        k1 = _rhs(s, yi, params, reduced)
        k2 = _rhs(s + h / 2, yi + h / 2 * k1, params, reduced)
        k3 = _rhs(s + h / 2, yi + h / 2 * k2, params, reduced)
        k4 = _rhs(s + h, yi + h * k3, params, reduced)
        y[i + 1] = yi + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    method = "ode-reduced" if reduced else "ode"
    return ModeSolution(grid, y[:, 0], y[:, 1], method, {"step": abs(h)})


def _d1(f, h):
    # fourth-order central first derivative on interior nodes [2:-2]
    return (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)


def _d2(f, h):
    return (-f[:-4] + 16 * f[1:-3] - 30 * f[2:-2] + 16 * f[3:-1] - f[4:]) / (12 * h * h)


def ode_residual(sol: ModeSolution, params: ModeParams, reduced: bool = False) -> np.ndarray:
    """|dchi' + F dchi + G chi| at interior nodes, with dchi' from a 4th-order stencil."""
    if len(sol.grid) < 5:
        raise InvalidInputError("need at least 5 nodes")
    h = sol.grid[1] - sol.grid[0]
    s = sol.grid[2:-2]
    ddchi = _d1(sol.dchi, h)
    if reduced:
        return np.abs(ddchi + params.kk * sol.chi[2:-2])
    return np.abs(ddchi + coeff_F(s) * sol.dchi[2:-2] + coeff_G(s, params) * sol.chi[2:-2])


def exact_massless(kk: float, sign: int, s):
    """chi = e^s / (1 + e^{2s}) (k.k - 1)^{-1/4} e^{+-i sqrt(k.k-1) s}; Dual-aware."""
    if kk <= 1:
        raise EvanescentError(f"k.k = {kk} <= 1: no oscillating massless solution")
    kappa = np.sqrt(kk - 1.0)
    # e^s/(1+e^{2s}) = 1/(2 cosh s) avoids overflow for large |s|
    env = 0.5 * dm.cosh(s).reciprocal() if isinstance(s, Dual) else 0.5 / np.cosh(s)
    return env * kappa**-0.5 * dm.exp(s * (1j * sign * kappa))


def exact_massless_jet(kk: float, sign: int, s):
    """(chi, chi', chi'') of the massless solution from second-order dual numbers."""
    (v,) = dm.variables([np.asarray(s, dtype=float)], order=2)
    out = exact_massless(kk, sign, v)
    return out.value, out.grad[..., 0], out.hess[..., 0, 0]


def exact_residual(kk: float, sign: int, s) -> np.ndarray:
    chi, d1, d2 = exact_massless_jet(kk, sign, s)
    return np.abs(d2 + coeff_F(np.asarray(s, float)) * d1 + kk * chi)


def wronskian(a: ModeSolution, b: ModeSolution) -> np.ndarray:
    """(chi_a chi_b' - chi_b chi_a') cosh^2 s, constant along exact solutions."""
    if not np.array_equal(a.grid, b.grid):
        raise InvalidInputError("solutions must share a grid")
    return (a.chi * b.dchi - b.chi * a.dchi) * np.cosh(a.grid) ** 2


# ----------------------------------------------------------------------------
# WKB


def _radicand_check(r, grid=None):
    r = np.asarray(r, dtype=float)
    bad = np.flatnonzero(~(r > 0))
    if bad.size:
        i = int(bad[0])
        where = f" at s = {grid[i]:.6g}" if grid is not None else ""
        raise TurningPointError(f"negative WKB radicand {float(r.flat[i]):.3g} at node {i}{where}", i)
    return r


def wkb_w0(params: ModeParams, s):
    """Lowest order: sqrt((m^2+xi)(e^{2s}+1)^2 / (4 e^{2s}) + k.k - 1), sign from params."""
    s = np.asarray(s, dtype=float)
    e = np.exp(2.0 * s)
    r = _radicand_check(params.mass_term * (e + 1.0) ** 2 / (4.0 * e) + params.kk - 1.0)
    return params.sign * np.sqrt(r)


def wkb_w0_cosh(params: ModeParams, s):
    s = np.asarray(s, dtype=float)
    r = _radicand_check(params.mass_term * np.cosh(s) ** 2 + params.kk - 1.0)
    return params.sign * np.sqrt(r)


def wkb_initial(params: ModeParams, s0: float, s1: float, nodes: int) -> WKBState:
    if nodes < 5:
        raise InvalidInputError("WKB grid needs at least 5 nodes")
    grid = np.linspace(s0, s1, nodes)
    return WKBState(grid, np.abs(wkb_w0_cosh(params, grid)), 0)


def wkb_iterate(state: WKBState, params: ModeParams) -> WKBState:
    """w_{n+1}^2 = G - (1/2){int w; s} - F'/2 - F^2/4 on the grid trimmed by two nodes.

    The Schwarzian is w''/w - (3/2)(w'/w)^2 with fourth-order stencils.
    """
    w, grid = state.w, state.grid
    if len(grid) < 5:
        raise InvalidInputError("need at least 5 nodes for the stencils")
    if np.any(w <= 0):
        raise InvalidInputError("w must be positive on the grid")
    h = state.step
    s = grid[2:-2]
    wi = w[2:-2]
    schwarz = _d2(w, h) / wi - 1.5 * (_d1(w, h) / wi) ** 2
    F = coeff_F(s)
    r = coeff_G(s, params) - 0.5 * schwarz - 0.5 * coeff_dF(s) - 0.25 * F * F
    r = _radicand_check(r, s)
    return WKBState(s, np.sqrt(r), state.order + 1)


@dataclass
class WKBPhases:
    grid: np.ndarray
    s1: np.ndarray
    s2: np.ndarray


def wkb_s1_s2(state: WKBState, friction: bool = True) -> WKBPhases:
    """s1 = ln sqrt(w) + ln cosh(s) and s2 = w'/(4w^2) + (1/8) int [w'^2/w^3 + F^2/w + 2F'/w].

    The integral runs from the left edge of the (two-node trimmed) grid with
    zero constant. ``friction=False`` sets F to zero, the oscillator case.
    """
    w, grid = state.w, state.grid
    if len(grid) < 5:
        raise InvalidInputError("need at least 5 nodes for the stencils")
    if np.any(w <= 0):
        raise InvalidInputError("w must be positive on the grid")
    h = state.step
    s = grid[2:-2]
    wi = w[2:-2]
    dw = _d1(w, h)
    if friction:
        F, dF, intF = coeff_F(s), coeff_dF(s), np.log(np.cosh(s))
    else:
        F = dF = intF = np.zeros_like(s)
    s1 = np.log(np.sqrt(wi)) + intF
    integrand = dw**2 / wi**3 + F**2 / wi + 2.0 * dF / wi
    acc = cumulative_simpson(integrand, x=s, initial=0.0)
    s2 = dw / (4.0 * wi**2) + acc / 8.0
    return WKBPhases(s, s1, s2)


def first_order_mode(state: WKBState, sign: int = 1) -> ModeSolution:
    """chi = e^s/(1 + e^{2s}) w^{-1/2} e^{+-i int w}, phase measured from the left edge.

    The envelope sech(s)/sqrt(w) from the recursion is halved to match the
    massless closed form at s = 0.
    """
    grid, w = state.grid, state.w
    phase = cumulative_simpson(w, x=grid, initial=0.0)
    chi = 0.5 / np.cosh(grid) / np.sqrt(w) * np.exp(1j * sign * phase)
    return ModeSolution(grid, chi, np.full_like(chi, np.nan), f"wkb-{state.order}",
                        {"envelope_normalization": 0.5})


# ----------------------------------------------------------------------------
# transition amplitude


def fourier_closed_form(omega):
    """pi / (e^{pi w/2} + e^{-pi w/2}), written to avoid overflow."""
    a = np.abs(np.asarray(omega, dtype=float)) * np.pi / 2
    return np.pi * np.exp(-a) / (1.0 + np.exp(-2.0 * a))


def adaptive_simpson(f, a: float, b: float, tol: float = 1e-12, max_depth: int = 50):
    """Adaptive Simpson with Richardson correction, refined breadth-first.

    ``f`` must accept an array of abscissae; complex values are fine. Each
    panel is accepted once its two-half estimate agrees with the whole-panel
    estimate to ``15 * tol * width / (b - a)``.
    """
    lo = np.array([a], dtype=float)
    hi = np.array([b], dtype=float)
    flo, fhi = f(lo), f(hi)
    fmid = f(0.5 * (lo + hi))
    whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi)
    total = 0.0
    for depth in range(max_depth + 1):
        mid = 0.5 * (lo + hi)
        f_l, f_r = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = (mid - lo) / 6.0 * (flo + 4.0 * f_l + fmid)
        right = (hi - mid) / 6.0 * (fmid + 4.0 * f_r + fhi)
        diff = left + right - whole
        done = np.abs(diff) <= 15.0 * tol * (hi - lo) / (b - a)
        if depth == max_depth:
            done[:] = True
        total += np.sum((left + right + diff / 15.0)[done])
        keep = ~done
        if not keep.any():
            break
        lo = np.concatenate([lo[keep], mid[keep]])
        hi = np.concatenate([mid[keep], hi[keep]])
        flo, fmid_new, fhi = (np.concatenate([flo[keep], fmid[keep]]),
                              np.concatenate([f_l[keep], f_r[keep]]),
                              np.concatenate([fmid[keep], fhi[keep]]))
        whole = np.concatenate([left[keep], right[keep]])
        fmid = fmid_new
    return total


def fourier_oracle(omega: float, half_width: float = 40.0, tol: float = 1e-12) -> complex:
    """int_{-L}^{L} e^x / (1 + e^{2x}) e^{i omega x} dx by adaptive Simpson."""

    def f(x):
        return 0.5 / np.cosh(x) * np.exp(1j * omega * x)

    # split at the origin so the first panel does not alias an oscillation to zero
    return complex(adaptive_simpson(f, -half_width, 0.0, tol / 2)
                   + adaptive_simpson(f, 0.0, half_width, tol / 2))


def unruh_amplitude(de, kk: float, sign: int = 1):
    """Static-detector amplitude pi (k.k-1)^{-1/4} / (e^{pi w/2} + e^{-pi w/2}), w = dE +- sqrt(k.k-1)."""
    if kk <= 1:
        raise EvanescentError(f"k.k = {kk} <= 1")
    if sign not in (1, -1):
        raise InvalidInputError("sign must be +1 or -1")
    omega = np.asarray(de, dtype=float) + sign * np.sqrt(kk - 1.0)
    return (kk - 1.0) ** -0.25 * fourier_closed_form(omega)


def amplitude_report(de: float, kk: float, sign: int = 1) -> dict:
    omega = de + sign * np.sqrt(kk - 1.0) if kk > 1 else float("nan")
    return {
        "delta_e": float(de),
        "kk": float(kk),
        "sign": sign,
        "omega": float(omega),
        "amplitude": float(unruh_amplitude(de, kk, sign)),
        "physical_branch": sign == 1,
        "meta": {"energy_p": float(np.sqrt(de * de + 1.0))},
    }


def moving_detector_amplitude(de: float, kk: float, t, action, kx=None, sign: int = 1) -> complex:
    """int conj(chi(atanh t)) e^{-i k.x(t)} e^{i S dE} dS over sampled proper time.

    ``t`` are worldline times in (-1, 1), ``action`` the matching samples of
    S(t) (for instance from :func:`twoparam.dynamics.action_shortdist`), and
    ``kx`` optional samples of k.x(t). Composite Simpson in S; no closed form
    is implied.
    """
    t = np.asarray(t, dtype=float)
    S = np.asarray(action, dtype=float)
    if t.shape != S.shape or t.ndim != 1 or len(t) < 3:
        raise InvalidInputError("t and action must be 1-d arrays of equal length >= 3")
    if np.any(np.diff(S) <= 0):
        raise InvalidInputError("action samples must increase along the worldline")
    chi = exact_massless(kk, sign, time_reparam(t))
    phase = np.exp(1j * de * S)
    if kx is not None:
        phase = phase * np.exp(-1j * np.asarray(kx, dtype=float))
    return complex(simpson(np.conj(chi) * phase, x=S))
