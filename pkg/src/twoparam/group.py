"""O(1,4) / O(2,3) elements acting on chart coordinates.

An element ``M`` acts on the ambient vector ``Y = W (x / l1, sqrt|b|)``, which
turns the quadric form ``diag(-1, 1, 1, 1, b)`` into ``eta5`` (dS) or
``eta5~`` (AdS). Its induced action on ``x`` is the fractional linear map

    x' = sqrt|b| (N x + sqrt|b| P) / (-+ P^T eta N x / c + sqrt|b| c),
    c = sqrt(1 -+ eta(P, P)),

where the upper sign is dS. ``lambda`` cancels between numerator and
denominator but decides which sheet the image lands on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from twoparam.core import dual as dm
from twoparam.core.dual import Dual
from twoparam.core.linalg import ETA4, eta5, matexp
from twoparam.errors import ChartEscapeError, DecompositionDomainError, InvalidInputError
from twoparam.geometry import DEFAULT, GeometryConfig, check_chart, components, embed, metric_B

__all__ = [
    "GroupElement",
    "BlockDecomposition",
    "algebra_basis",
    "group_element_from_coefficients",
    "sample_group_element",
    "translation_element",
    "lorentz_element",
    "decompose",
    "flt_apply",
    "flt_apply_printed",
    "projective_apply",
    "flt_jacobian",
    "verify_B_invariance",
    "poincare_limit_check",
    "ContractionReport",
]

PAIRS = tuple(itertools.combinations(range(5), 2))
_TOL = 1e-9


def _sign(branch: str) -> float:
    # the upper/lower sign of the block form: -1 for O(1,4), +1 for O(2,3)
    return -1.0 if branch == "dS" else 1.0


@dataclass(frozen=True)
class GroupElement:
    M: np.ndarray
    branch: str = "dS"

    def __post_init__(self):
        m = np.asarray(self.M, dtype=float)
        if m.shape != (5, 5) or not np.all(np.isfinite(m)):
            raise InvalidInputError("group element must be a finite 5x5 matrix")
        if self.branch not in ("dS", "AdS"):
            raise InvalidInputError(f"unknown branch {self.branch!r}")
        object.__setattr__(self, "M", m)

    @property
    def eta(self) -> np.ndarray:
        return eta5(self.branch)

    def defining_residual(self) -> float:
        return float(np.abs(self.M.T @ self.eta @ self.M - self.eta).max())

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        if other.branch != self.branch:
            raise InvalidInputError("cannot compose elements of different branches")
        return GroupElement(self.M @ other.M, self.branch)

    def inverse(self) -> "GroupElement":
        return GroupElement(self.eta @ self.M.T @ self.eta, self.branch)


@dataclass(frozen=True)
class BlockDecomposition:
    N: np.ndarray
    P: np.ndarray
    lam: int
    branch: str = "dS"

    @property
    def c(self) -> float:
        return float(np.sqrt(1.0 + _sign(self.branch) * (self.P @ ETA4 @ self.P)))

    def assemble(self) -> np.ndarray:
        s = _sign(self.branch)
        out = np.zeros((5, 5))
        out[:4, :4] = self.N
        out[:4, 4] = self.P
        out[4, :4] = s * (self.P @ ETA4 @ self.N) / self.c
        out[4, 4] = self.c
        return self.lam * out

    def constraint_residual(self) -> float:
        """Max-norm residual of N^T eta N = eta + N^T eta P P^T eta N / (-+1 + eta(P, P))."""
        s = _sign(self.branch)
        q = ETA4 @ self.N
        rhs = ETA4 + np.outer(self.P @ q, self.P @ q) / (s + self.P @ ETA4 @ self.P)
        return float(np.abs(self.N.T @ ETA4 @ self.N - rhs).max())


# ----------------------------------------------------------------------------
# sampling


def algebra_basis(branch: str = "dS") -> list[np.ndarray]:
    """The ten generators M_AB = e_A (eta e_B)^T - e_B (eta e_A)^T, A < B."""
    g = np.diag(eta5(branch))
    out = []
    for a, b in PAIRS:
        m = np.zeros((5, 5))
        m[a, b] = g[b]
        m[b, a] = -g[a]
        out.append(m)
    return out


def group_element_from_coefficients(coeffs, branch: str = "dS", generators=None) -> GroupElement:
    gens = algebra_basis(branch) if generators is None else [np.asarray(g, float) for g in generators]
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (len(gens),):
        raise InvalidInputError(f"expected {len(gens)} coefficients, got shape {coeffs.shape}")
    X = sum((c * g for c, g in zip(coeffs, gens)), np.zeros((5, 5)))
    return GroupElement(matexp(X), branch)


def sample_group_element(seed: int, scale: float = 0.5, branch: str = "dS",
                         generators=None) -> GroupElement:
    """exp of an algebra element whose coefficients are uniform in [-scale, scale].

    ``generators`` restricts the draw to a subalgebra (float 5x5 matrices);
    the default is the full algebra of the branch.
    """
    if scale < 0:
        raise InvalidInputError("scale must be non-negative")
    n = 10 if generators is None else len(generators)
    rng = np.random.default_rng(seed)
    return group_element_from_coefficients(rng.uniform(-scale, scale, n), branch, generators)


def lorentz_element(N, branch: str = "dS") -> GroupElement:
    M = np.eye(5)
    M[:4, :4] = np.asarray(N, dtype=float)
    return GroupElement(M, branch)


def translation_element(P, branch: str = "dS") -> GroupElement:
    """The element mapping e_4 to (P, c) built from two reflections.

    Its upper-right column is exactly ``P``; the Lorentz block is the identity
    up to O(|P|^2).
    """
    P = np.asarray(P, dtype=float)
    g = eta5(branch)
    c2 = 1.0 + _sign(branch) * (P @ ETA4 @ P)
    if c2 <= 0:
        raise DecompositionDomainError(f"1 -+ eta(P,P) = {c2:.3g} is not positive")
    e = np.zeros(5)
    e[4] = 1.0
    u = np.append(P, np.sqrt(c2))
    w = e + u

    def reflect(v):
        return np.eye(5) - 2.0 * np.outer(v, g @ v) / (v @ g @ v)

    # reflect(w) sends e to -u, reflect(u) sends -u to u
    return GroupElement(reflect(u) @ reflect(w), branch)


# ----------------------------------------------------------------------------
# block decomposition


def decompose(g: GroupElement, tol: float = 1e-12) -> BlockDecomposition:
    """Split ``M`` into ``lambda``, ``N`` and ``P``.

    ``lambda`` is the sign of the lower-right entry; the entry's magnitude must
    then equal sqrt(1 -+ eta(P, P)) and the remaining row must match the block
    form, otherwise the input is rejected.
    """
    M = g.M
    m44 = M[4, 4]
    if abs(m44) <= tol:
        raise DecompositionDomainError("lower-right entry vanishes: 1 -+ eta(P,P) <= 0")
    lam = 1 if m44 > 0 else -1
    N = M[:4, :4] / lam
    P = M[:4, 4] / lam
    c2 = 1.0 + _sign(g.branch) * (P @ ETA4 @ P)
    if c2 <= 0:
        raise DecompositionDomainError(f"1 -+ eta(P,P) = {c2:.3g} is not positive")
    dec = BlockDecomposition(N, P, lam, g.branch)
    err = np.abs(dec.assemble() - M).max()
    if err > 1e-6 * max(1.0, np.abs(M).max()):
        raise DecompositionDomainError(f"matrix does not have the block form (residual {err:.3g})")
    return dec


# ----------------------------------------------------------------------------
# actions on the chart


def _cfg_branch(g: GroupElement, cfg: GeometryConfig):
    if g.branch != cfg.branch:
        raise InvalidInputError(f"element branch {g.branch} does not match geometry {cfg.branch}")


def _flt_components(dec: BlockDecomposition, xs, rb: float, prefactor: bool):
    s = _sign(dec.branch)
    c = dec.c
    row = dec.P @ ETA4 @ dec.N
    den = sum(s * row[n] * xs[n] for n in range(4)) / c + rb * c
    num = [sum(dec.N[m, n] * xs[n] for n in range(4)) + rb * dec.P[m] for m in range(4)]
    k = rb if prefactor else 1.0
    return [k * v / den for v in num], den


def _check_den(den, lam):
    d = np.asarray(dm.value_of(den), dtype=float) * lam
    if np.any(d <= 0):
        worst = float(d.min())
        raise ChartEscapeError(
            f"image leaves the W > 0 half-chart (lambda * denominator = {worst:.3g})", worst
        )


def flt_apply(g: GroupElement, x, cfg: GeometryConfig = DEFAULT):
    """Fractional linear image of ``x``; accepts arrays (last axis 4) or Dual components."""
    _cfg_branch(g, cfg)
    xs = components(x)
    dm_in = any(isinstance(c, Dual) for c in xs)
    check_chart(xs, cfg)
    dec = decompose(g)
    u = [c / cfg.l1 for c in xs]
    out, den = _flt_components(dec, u, np.sqrt(abs(cfg.b)), prefactor=True)
    _check_den(den, dec.lam)
    out = [c * cfg.l1 for c in out]
    return out if dm_in else np.stack(np.broadcast_arrays(*out), axis=-1)


def flt_apply_printed(g: GroupElement, x, b: float = 1.0):
    """The typeset map, without the overall sqrt(b); agrees with :func:`flt_apply` only at b = 1."""
    dec = decompose(g)
    xs = components(x)
    out, den = _flt_components(dec, xs, np.sqrt(abs(b)), prefactor=False)
    return np.stack(np.broadcast_arrays(*out), axis=-1)


def projective_apply(g: GroupElement, x, cfg: GeometryConfig = DEFAULT):
    """Embed, multiply by ``M``, divide by the fifth component."""
    _cfg_branch(g, cfg)
    x = np.asarray(x, dtype=float)
    unit = GeometryConfig(a=cfg.a, b=cfg.b, l1=1.0, branch=cfg.branch)
    X = embed(x / cfg.l1, unit)
    rb = np.sqrt(abs(cfg.b))
    Y = X.copy()
    Y[..., 4] *= rb
    Yp = Y @ g.M.T
    w = Yp[..., 4:5] / rb
    if np.any(w <= 0):
        raise ChartEscapeError("image leaves the W > 0 half-chart", float(w.min()))
    return cfg.l1 * Yp[..., :4] / w


def flt_jacobian(g: GroupElement, x, cfg: GeometryConfig = DEFAULT):
    """d x'^a / d x^mu by dual numbers, shape ``batch + (4, 4)``."""
    xs = dm.variables(components(np.asarray(x, dtype=float)))
    out = flt_apply(g, xs, cfg)
    return np.stack([o.grad for o in out], axis=-2)


def verify_B_invariance(g: GroupElement, x, cfg: GeometryConfig = DEFAULT) -> np.ndarray:
    """B(x')_ab J^a_mu J^b_nu - B(x)_mu_nu, with J the dual-number Jacobian."""
    x = np.asarray(x, dtype=float)
    xp = flt_apply(g, x, cfg)
    J = flt_jacobian(g, x, cfg)
    Bp = metric_B(xp, cfg)
    return np.einsum("...am,...ab,...bn->...mn", J, Bp, J) - metric_B(x, cfg)


# ----------------------------------------------------------------------------
# Poincare contraction


@dataclass(frozen=True)
class ContractionReport:
    l1: tuple
    deviations: tuple
    slope: float

    def to_dict(self) -> dict:
        return {"l1": list(self.l1), "deviations": list(self.deviations), "slope": self.slope}


def poincare_limit_check(N, p, l1_sequence=(10.0, 100.0, 1000.0), x=None,
                         b: float = 1.0, branch: str = "dS") -> ContractionReport:
    """Deviation of the contracted map from ``N x + sqrt(b) p`` as l1 grows.

    The element is ``diag(N, 1)`` followed by the translation with column
    ``P = p / l1``; the point ``x`` is held fixed in physical units. The slope
    is the least-squares fit of -log(deviation) against log(l1), NaN when all
    deviations vanish.
    """
    N = np.asarray(N, dtype=float)
    p = np.asarray(p, dtype=float)
    x = np.array([0.3, -0.2, 0.5, 0.1]) if x is None else np.asarray(x, dtype=float)
    a = 1.0 if branch == "dS" else -1.0
    target = N @ x + np.sqrt(abs(b)) * p
    devs = []
    for l1 in l1_sequence:
        cfg = GeometryConfig(a=a, b=b, l1=float(l1), branch=branch)
        g = translation_element(p / l1, branch) @ lorentz_element(N, branch)
        devs.append(float(np.abs(flt_apply(g, x, cfg) - target).max()))
    devs_arr = np.asarray(devs)
    ls = np.log(np.asarray(l1_sequence, dtype=float))
    if np.all(devs_arr > 0) and len(ls) > 1:
        slope = float(-np.polyfit(ls, np.log(devs_arr), 1)[0])
    else:
        slope = float("nan")
    return ContractionReport(tuple(float(v) for v in l1_sequence), tuple(devs), slope)
