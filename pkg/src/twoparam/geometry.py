"""The two-parameter quadratic form B, its chart, the (A)dS4 embedding and
the induced tensors of the symmetry-breaking examples.

Points are arrays whose last axis holds ``(x0, x1, x2, x3)``; every function
also accepts a length-4 list of :class:`~twoparam.core.dual.Dual` components so
that derivatives can be pushed through the same formulas.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from twoparam.core import dual as dm
from twoparam.core.dual import Dual, value_of
from twoparam.core.linalg import ETA4
from twoparam.errors import ChartDomainError, InvalidInputError

ETA_DIAG = (-1.0, 1.0, 1.0, 1.0)


@dataclass(frozen=True)
class GeometryConfig:
    a: float = 1.0
    b: float = 1.0
    l1: float = 1.0
    branch: str = "dS"

    def __post_init__(self):
        if self.branch not in ("dS", "AdS"):
            raise InvalidInputError(f"branch must be 'dS' or 'AdS', got {self.branch!r}")
        if self.l1 <= 0:
            raise InvalidInputError("l1 must be positive")
        if self.branch == "dS" and not (self.a > 0 and self.b > 0):
            raise InvalidInputError("dS branch needs a > 0 and b > 0")
        if self.branch == "AdS" and not (self.a < 0 and self.b < 0):
            raise InvalidInputError("AdS branch needs a < 0 and b < 0")

    @property
    def constraint(self) -> float:
        """Right-hand side of the hypersurface equation in the ambient form."""
        return 1.0 if self.branch == "dS" else -1.0


DEFAULT = GeometryConfig()


# ----------------------------------------------------------------------------
# component plumbing


def components(x):
    """Split a point into its four coordinate components."""
    if isinstance(x, (list, tuple)) and len(x) == 4:
        return list(x)
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1] != 4:
        raise InvalidInputError(f"expected last axis of length 4, got shape {arr.shape}")
    return [arr[..., i] for i in range(4)]


def _is_dual(xs) -> bool:
    return any(isinstance(c, Dual) for c in xs)


def assemble(rows):
    """Nested lists of plain scalars/arrays -> array with trailing matrix axes."""
    if isinstance(rows[0], (list, tuple)):
        return np.stack([np.stack(np.broadcast_arrays(*r), axis=-1) for r in rows], axis=-2)
    return np.stack(np.broadcast_arrays(*rows), axis=-1)


def _finish(rows, xs):
    return rows if _is_dual(xs) else assemble(rows)


def eta_xx(xs):
    return -xs[0] * xs[0] + xs[1] * xs[1] + xs[2] * xs[2] + xs[3] * xs[3]


def spatial_xx(xs):
    return xs[1] * xs[1] + xs[2] * xs[2] + xs[3] * xs[3]


def lowered(xs):
    """eta_{mu nu} x^nu."""
    return [-xs[0], xs[1], xs[2], xs[3]]


# ----------------------------------------------------------------------------
# chart domain


def in_chart(x, cfg: GeometryConfig = DEFAULT):
    """Boolean mask of points inside the signature-preserving chart domain."""
    xs = [value_of(c) for c in components(x)]
    if cfg.branch == "dS":
        return cfg.b + eta_xx(xs) / cfg.l1**2 > 0
    return cfg.b + spatial_xx(xs) / cfg.l1**2 < 0


def check_chart(x, cfg: GeometryConfig = DEFAULT):
    ok = np.asarray(in_chart(x, cfg))
    if not ok.all():
        bad = int((~ok).sum())
        cond = "b - t^2 + x.x > 0" if cfg.branch == "dS" else "b + x.x < 0"
        raise ChartDomainError(f"{bad} point(s) violate the chart condition {cond}")


# ----------------------------------------------------------------------------
# the quadratic form B


def coefficients(xs, cfg: GeometryConfig = DEFAULT):
    """(A0, A1) solving the inertia system: a/(b+x.x), -a/(b+x.x)^2."""
    s = cfg.b + eta_xx(xs) / cfg.l1**2
    return cfg.a / s, -cfg.a / (s * s)


def metric_from_coefficients(xs, a0, a1, l1: float = 1.0):
    """B_mu_nu = A0 eta_mu_nu + A1 (eta x)_mu (eta x)_nu / l1^2 as nested lists."""
    y = lowered(xs)
    rows = []
    for m in range(4):
        row = []
        for n in range(4):
            term = a1 * y[m] * y[n] / l1**2
            if m == n:
                term = term + a0 * ETA_DIAG[m]
            row.append(term)
        rows.append(row)
    return rows


def metric_B(x, cfg: GeometryConfig = DEFAULT, check: bool = True):
    xs = components(x)
    if check:
        check_chart(xs, cfg)
    a0, a1 = coefficients(xs, cfg)
    return _finish(metric_from_coefficients(xs, a0, a1, cfg.l1), xs)


def inverse_B(x, cfg: GeometryConfig = DEFAULT):
    """Inverse of B (Sherman-Morrison): (b + eta x x)/a * (eta + x x^T / b), l1 = 1 units."""
    xs = components(x)
    check_chart(xs, cfg)
    u = [c / cfg.l1 for c in xs]
    s = cfg.b + eta_xx(u)
    rows = []
    for m in range(4):
        row = []
        for n in range(4):
            term = u[m] * u[n] / cfg.b
            if m == n:
                term = term + ETA_DIAG[m]
            row.append(s / cfg.a * term)
        rows.append(row)
    return _finish(rows, xs)


def inverse_B_printed(x):
    """The a = b = 1 inverse as printed: (eta^{mu nu} - x^mu x^nu)/(1 - t^2 + x.x).

    Kept for comparison only; multiplying it by ``metric_B`` does not give the
    identity away from the origin (see :func:`inverse_B`).
    """
    xs = components(x)
    s = 1.0 + eta_xx(xs)
    rows = [[(ETA_DIAG[m] * (m == n) - xs[m] * xs[n]) / s for n in range(4)] for m in range(4)]
    return _finish(rows, xs)


def signature_minors(x, cfg: GeometryConfig = DEFAULT):
    """(B00, m1, m2, m3): B00 and the leading minors of B~_ij = B_ij - B_0i B_0j / B00."""
    B = np.asarray(metric_B(x, cfg))
    b00 = B[..., 0, 0]
    if np.any(b00 == 0):
        raise ChartDomainError("B00 vanishes")
    bt = B[..., 1:, 1:] - B[..., 0, 1:, None] * B[..., 0, None, 1:] / b00[..., None, None]
    m1 = bt[..., 0, 0]
    m2 = np.linalg.det(bt[..., :2, :2])
    m3 = np.linalg.det(bt)
    return b00, m1, m2, m3


def signature_minors_closed(x, cfg: GeometryConfig = DEFAULT):
    """Closed forms of the four signature quantities (l1 = 1 units)."""
    t, x1, x2, x3 = components(x)
    a, b = cfg.a, cfg.b
    xx = x1**2 + x2**2 + x3**2
    s = b - t**2 + xx
    r = b + xx
    return (
        -a * r / s**2,
        a * (b + x2**2 + x3**2) / (s * r),
        a**2 * (b + x3**2) / (s**2 * r),
        a**3 * b / (s**3 * r),
    )


# ----------------------------------------------------------------------------
# embedding and pullbacks


def ambient_form(cfg: GeometryConfig = DEFAULT) -> np.ndarray:
    """diag(-1, 1, 1, 1, b): the quadric is ``Y.form.Y = +1`` (dS) or ``-1`` (AdS)."""
    return np.diag([-1.0, 1.0, 1.0, 1.0, cfg.b])


def embed(x, cfg: GeometryConfig = DEFAULT, sign: int = 1):
    """Point on the hypersurface with x^mu = X^mu / W, on the W > 0 (sign=+1) sheet."""
    xs = components(x)
    check_chart(xs, cfg)
    s = cfg.b + eta_xx(xs)
    if cfg.branch == "AdS":
        s = -s
    w = dm.sqrt(s).reciprocal() if isinstance(s, Dual) else 1.0 / np.sqrt(s)
    w = w * sign
    return _finish([c * w for c in xs] + [w], xs)


def project(X):
    X = np.asarray(X, dtype=float)
    return X[..., :4] / X[..., 4:5]


def embedding_jacobian(x, cfg: GeometryConfig = DEFAULT, sign: int = 1):
    """d X^A / d x^mu by dual numbers, shape ``batch + (5, 4)``."""
    xs = dm.variables(components(np.asarray(x, dtype=float)))
    out = embed(xs, cfg, sign)
    return np.stack([o.grad for o in out], axis=-2)


def embedding_jacobian_fd(x, cfg: GeometryConfig = DEFAULT, sign: int = 1, step: float = 1e-5):
    return dm.central_difference(lambda p: embed(p, cfg, sign), x, step)


def pullback_form(ambient, x, cfg: GeometryConfig = DEFAULT, sign: int = 1):
    """(dX^A/dx^mu)(dX^B/dx^nu) S_AB for any ambient bilinear form S."""
    J = embedding_jacobian(x, cfg, sign)
    S = np.asarray(ambient, dtype=float)
    return np.einsum("...am,ab,...bn->...mn", J, S, J)


def pullback_covector(omega, x, cfg: GeometryConfig = DEFAULT, sign: int = 1):
    J = embedding_jacobian(x, cfg, sign)
    return np.einsum("...am,a->...m", J, np.asarray(omega, dtype=float))


def conformal_factor(cfg: GeometryConfig = DEFAULT) -> float:
    """Constant c with metric_B = c * pullback_form(ambient_form)."""
    return cfg.a if cfg.branch == "dS" else -cfg.a


def induced_metric_closed(x, b: float = 1.0, branch: str = "dS"):
    """The induced metric g_mu_nu in closed form for either branch.

    For the AdS sheet ``b`` is the positive constant of the hypersurface
    -T^2 - b W^2 + X^2 + Y^2 + Z^2 = -1.
    """
    xs = components(x)
    e = eta_xx(xs)
    if branch == "dS":
        a0, a1 = b / (b + e), -b / (b + e) ** 2
    else:
        a0, a1 = b / (b - e), b / (b - e) ** 2
    return _finish(metric_from_coefficients(xs, a0, a1), xs)


# ----------------------------------------------------------------------------
# ambient tensors of the symmetry-breaking examples (entries as printed)


def ambient_C(ca: float, cb: float) -> np.ndarray:
    C = np.zeros((5, 5))
    C[0, 0], C[0, 1], C[1, 0], C[1, 1] = ca, cb, cb, 2 * cb - ca
    C[2, 2] = C[3, 3] = C[4, 4] = cb - ca
    return C


def ambient_D(ca: float, cb: float, cc: float) -> np.ndarray:
    D = np.zeros((5, 5))
    for col, v in ((2, ca), (3, cb), (4, cc)):
        D[0, col] = D[1, col] = v
        D[col, 0] = D[col, 1] = -v
    return D


def ambient_V(ca: float) -> np.ndarray:
    return np.array([ca, 0.0, 0.0, 0.0, -ca])


def ambient_W(ca: float) -> np.ndarray:
    return np.array([ca, ca, 0.0, 0.0, 0.0])


# ----------------------------------------------------------------------------
# closed-form induced tensors (b = 1)


def _need_chart(xs):
    check_chart(xs, DEFAULT)
    return 1.0 + eta_xx(xs)


def induced_C(x, ca: float, cb: float):
    xs = components(x)
    s = _need_chart(xs)
    x0, x1, x2, x3 = xs
    xx = spatial_xx(xs)
    d = cb - ca
    p = 1.0 + xx + x0 * x1
    q = s - x1 * x1 - x0 * x1
    r2 = x0 * x2 + x1 * x2
    r3 = x0 * x3 + x1 * x3
    c = [[None] * 4 for _ in range(4)]
    c[0][0] = cb * p * p / s - d * (1.0 + xx)
    c[0][1] = cb * p * q / s + d * x0 * x1
    c[0][2] = -cb * p * r2 / s + d * x0 * x2
    c[0][3] = -cb * p * r3 / s + d * x0 * x3
    c[1][1] = cb * q * q / s + d * (s - x1 * x1)
    c[1][2] = -cb * q * r2 / s - d * x1 * x2
    c[1][3] = -cb * q * r3 / s - d * x1 * x3
    c[2][2] = cb * r2 * r2 / s + d * (s - x2 * x2)
    c[2][3] = cb * x2 * x3 * (x0 + x1) ** 2 / s - d * x2 * x3
    c[3][3] = cb * r3 * r3 / s + d * (s - x3 * x3)
    pref = 1.0 / (s * s)
    rows = [[pref * (c[m][n] if m <= n else c[n][m]) for n in range(4)] for m in range(4)]
    return _finish(rows, xs)


def induced_D(x, ca: float, cb: float, cc: float):
    """Components D_mu_nu of the induced two-form (D = 1/2 D_mu_nu dx^mu ^ dx^nu)."""
    xs = components(x)
    s = _need_chart(xs)
    x0, x1, x2, x3 = xs
    u = ca * x2 + cb * x3 + cc
    up = {
        (0, 1): -(x0 + x1) * u,
        (0, 2): ca * (1.0 + x1 * x1 + x3 * x3 + x0 * x1) - cb * x2 * x3 - cc * x2,
        (0, 3): cb * (1.0 + x1 * x1 + x2 * x2 + x0 * x1) - ca * x2 * x3 - cc * x3,
        (1, 2): ca * (1.0 - x0 * x0 + x3 * x3 - x0 * x1) - cb * x2 * x3 - cc * x2,
        (1, 3): cb * (1.0 - x0 * x0 + x2 * x2 - x0 * x1) - ca * x2 * x3 - cc * x3,
        (2, 3): (x0 + x1) * (ca * x3 - cb * x2),
    }
    pref = 1.0 / (s * s)
    zero = 0.0 * s
    rows = []
    for m in range(4):
        row = []
        for n in range(4):
            if m == n:
                row.append(zero)
            elif m < n:
                row.append(pref * up[(m, n)])
            else:
                row.append(-pref * up[(n, m)])
        rows.append(row)
    return _finish(rows, xs)


def induced_U(x, ca: float, cb: float, cc: float):
    """Potential one-form U_mu whose exterior derivative is the induced D.

    Pullback of the ambient potential (T + X)(a dY + b dZ + c dW).
    """
    xs = components(x)
    s = _need_chart(xs)
    x0, x1, x2, x3 = xs
    u = ca * x2 + cb * x3 + cc
    pref = (x0 + x1) / (s * s)
    comps = [
        pref * x0 * u,
        -pref * x1 * u,
        pref * (ca * s - x2 * u),
        pref * (cb * s - x3 * u),
    ]
    return _finish(comps, xs)


def induced_U_printed(x, ca: float, cb: float, cc: float):
    """U exactly as typeset: prefactor (x0 + x1)/(1 + eta x x) and ``a`` in U_3.

    Its exterior derivative is not the induced D; kept to document the gap.
    """
    xs = components(x)
    s = _need_chart(xs)
    x0, x1, x2, x3 = xs
    u = ca * x2 + cb * x3 + cc
    pref = (x0 + x1) / s
    comps = [pref * x0 * u, -pref * x1 * u, pref * (ca * s - x2 * u), pref * (ca * s - x3 * u)]
    return _finish(comps, xs)


def induced_V(x, ca: float):
    xs = components(x)
    s = _need_chart(xs)
    x0 = xs[0]
    k = ca * dm.power(s, -1.5) if isinstance(s, Dual) else ca * s**-1.5
    comps = [k * (1.0 + spatial_xx(xs) - x0)] + [k * xi * (1.0 - x0) for xi in xs[1:]]
    return _finish(comps, xs)


def induced_W(x, ca: float):
    xs = components(x)
    s = _need_chart(xs)
    x0, x1, x2, x3 = xs
    k = ca * dm.power(s, -1.5) if isinstance(s, Dual) else ca * s**-1.5
    y = x0 + x1
    comps = [k * (s + y * x0), k * (s - y * x1), -k * y * x2, -k * y * x3]
    return _finish(comps, xs)


def exterior_derivative_fd(oneform, x, step: float = 1e-5):
    """(dU)_mu_nu = d_mu U_nu - d_nu U_mu by central differences."""
    jac = dm.central_difference(oneform, x, step)  # [..., nu, mu] = d_mu U_nu
    return np.swapaxes(jac, -1, -2) - jac


# ----------------------------------------------------------------------------
# Lagrangian densities built from B and D


def ym_scalar(x, ca, cb, cc, cfg: GeometryConfig = DEFAULT):
    """D_mu_nu D_alpha_beta B^{mu alpha} B^{nu beta}."""
    D = induced_D(x, ca, cb, cc)
    Bi = inverse_B(x, cfg)
    return np.einsum("...mn,...ab,...ma,...nb->...", D, D, Bi, Bi)


def ym_density(x, ca, cb, cc, cfg: GeometryConfig = DEFAULT):
    """Yang-Mills-type density sqrt|det B| * D D B^-1 B^-1 (a weight-one density)."""
    B = metric_B(x, cfg)
    return np.sqrt(np.abs(np.linalg.det(B))) * ym_scalar(x, ca, cb, cc, cfg)


def bi_density(x, ca, cb, cc, cfg: GeometryConfig = DEFAULT):
    """Born-Infeld-type density sqrt|det(B - D B^-1 D)|."""
    B = metric_B(x, cfg)
    Bi = inverse_B(x, cfg)
    D = induced_D(x, ca, cb, cc)
    M = B - D @ Bi @ D
    return np.sqrt(np.abs(np.linalg.det(M)))


def eval_grid(quantity, points, **params):
    """Evaluate a tensor field on many points; returns (points, flat components, labels)."""
    fields = {
        "metric_B": lambda p: metric_B(p, params.get("cfg", DEFAULT)),
        "C": lambda p: induced_C(p, params["ca"], params["cb"]),
        "D": lambda p: induced_D(p, params["ca"], params["cb"], params["cc"]),
        "U": lambda p: induced_U(p, params["ca"], params["cb"], params["cc"]),
        "V": lambda p: induced_V(p, params["ca"]),
        "W": lambda p: induced_W(p, params["ca"]),
        "ym": lambda p: ym_density(p, params["ca"], params["cb"], params["cc"]),
        "bi": lambda p: bi_density(p, params["ca"], params["cb"], params["cc"]),
    }
    if quantity not in fields:
        raise InvalidInputError(f"unknown grid quantity {quantity!r}")
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vals = np.asarray(fields[quantity](pts))
    flat = vals.reshape(len(pts), -1)
    if vals.ndim == 3:
        labels = [f"{quantity}_{m}{n}" for m in range(4) for n in range(4)]
    elif vals.ndim == 2:
        labels = [f"{quantity}_{m}" for m in range(4)]
    else:
        labels = [quantity]
    return pts, flat, labels


__all__ = [
    "GeometryConfig",
    "DEFAULT",
    "ETA4",
    "components",
    "in_chart",
    "check_chart",
    "coefficients",
    "metric_from_coefficients",
    "metric_B",
    "inverse_B",
    "inverse_B_printed",
    "signature_minors",
    "signature_minors_closed",
    "ambient_form",
    "embed",
    "project",
    "embedding_jacobian",
    "pullback_form",
    "pullback_covector",
    "conformal_factor",
    "induced_metric_closed",
    "ambient_C",
    "ambient_D",
    "ambient_V",
    "ambient_W",
    "induced_C",
    "induced_D",
    "induced_U",
    "induced_U_printed",
    "induced_V",
    "induced_W",
    "exterior_derivative_fd",
    "ym_scalar",
    "ym_density",
    "bi_density",
    "eval_grid",
]
