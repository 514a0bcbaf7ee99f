"""Forward-mode dual numbers with an optional second-order part.

A :class:`Dual` carries a value, a gradient with one slot per independent
variable and, when built with ``order=2``, the Hessian of the value.  All
three parts may carry leading batch dimensions, so a whole sweep of points is
differentiated in one pass::

    >>> t, x = variables([0.3, 0.5])
    >>> f = sqrt(1 + t * x)
    >>> f.grad.round(6).tolist()
    [0.233126, 0.139876]
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

__all__ = [
    "Dual",
    "variables",
    "value_of",
    "sqrt",
    "exp",
    "log",
    "tanh",
    "cosh",
    "absolute",
    "power",
    "derivative",
    "gradient",
    "jacobian",
    "hessian",
    "central_difference",
]

MAX_SLOTS = 8


def _g(c):
    # broadcast a plain coefficient against the gradient axis
    return np.asarray(c)[..., None]


def _h(c):
    return np.asarray(c)[..., None, None]


def _outer(a, b):
    return a[..., :, None] * b[..., None, :]


class Dual:
    """Truncated Taylor number ``value + grad.dx (+ 1/2 dx.hess.dx)``."""

    __slots__ = ("value", "grad", "hess")
    # let numpy hand mixed expressions back to the reflected operators
    __array_ufunc__ = None

    def __init__(self, value, grad, hess=None):
        self.value = np.asarray(value)
        self.grad = np.asarray(grad)
        self.hess = None if hess is None else np.asarray(hess)

    @property
    def nslots(self) -> int:
        return self.grad.shape[-1]

    @property
    def order(self) -> int:
        return 1 if self.hess is None else 2

    def _lift(self, c) -> "Dual":
        c = np.asarray(c)
        n = self.nslots
        g = np.zeros(c.shape + (n,), dtype=np.result_type(c, float))
        h = None if self.hess is None else np.zeros(c.shape + (n, n), dtype=g.dtype)
        return Dual(c, g, h)

    def _chain(self, f0, f1, f2=None) -> "Dual":
        """Apply a scalar function given its value and first two derivatives."""
        grad = _g(f1) * self.grad
        hess = None
        if self.hess is not None:
            hess = _h(f1) * self.hess + _h(f2) * _outer(self.grad, self.grad)
        return Dual(f0, grad, hess)

    def __add__(self, other):
        if isinstance(other, Dual):
            hess = _add_opt(self.hess, other.hess)
            return Dual(self.value + other.value, self.grad + other.grad, hess)
        return Dual(self.value + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.value, -self.grad, None if self.hess is None else -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Dual):
            a, b = self, other
            grad = _g(a.value) * b.grad + _g(b.value) * a.grad
            hess = None
            if a.hess is not None or b.hess is not None:
                cross = _outer(a.grad, b.grad)
                hess = cross + np.swapaxes(cross, -1, -2)
                if b.hess is not None:
                    hess = hess + _h(a.value) * b.hess
                if a.hess is not None:
                    hess = hess + _h(b.value) * a.hess
            return Dual(a.value * b.value, grad, hess)
        c = np.asarray(other)
        hess = None if self.hess is None else _h(c) * self.hess
        return Dual(self.value * c, _g(c) * self.grad, hess)

    __rmul__ = __mul__

    def reciprocal(self) -> "Dual":
        v = self.value
        return self._chain(1.0 / v, -1.0 / v**2, 2.0 / v**3)

    def __truediv__(self, other):
        if isinstance(other, Dual):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, n):
        if isinstance(n, Dual):
            return exp(log(self) * n)
        if isinstance(n, int) and n >= 0:
            out = self._lift(np.ones_like(self.value))
            for _ in range(n):
                out = out * self
            return out
        return power(self, n)

    # comparisons look at the value only; used for domain checks
    def __lt__(self, other):
        return self.value < value_of(other)

    def __le__(self, other):
        return self.value <= value_of(other)

    def __gt__(self, other):
        return self.value > value_of(other)

    def __ge__(self, other):
        return self.value >= value_of(other)

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        extra = "" if self.hess is None else f", hess={self.hess!r}"
        return f"Dual({self.value!r}, {self.grad!r}{extra})"


def _add_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return a + b


def variables(values: Sequence, order: int = 1) -> list[Dual]:
    """Independent variables seeded with unit gradients.

    ``values`` may be a list of scalars or of equally shaped arrays (a batch).
    """
    n = len(values)
    if not 1 <= n <= MAX_SLOTS:
        raise ValueError(f"between 1 and {MAX_SLOTS} variables supported, got {n}")
    vals = np.broadcast_arrays(*[np.asarray(v, dtype=np.result_type(v, float)) for v in values])
    shape = vals[0].shape
    out = []
    for i, v in enumerate(vals):
        g = np.zeros(shape + (n,))
        g[..., i] = 1.0
        h = np.zeros(shape + (n, n)) if order == 2 else None
        out.append(Dual(v, g, h))
    return out


def value_of(x):
    return x.value if isinstance(x, Dual) else x


def sqrt(x):
    if isinstance(x, Dual):
        r = np.sqrt(x.value)
        return x._chain(r, 0.5 / r, -0.25 / (r * x.value))
    return np.sqrt(x)


def exp(x):
    if isinstance(x, Dual):
        e = np.exp(x.value)
        return x._chain(e, e, e)
    return np.exp(x)


def log(x):
    if isinstance(x, Dual):
        v = x.value
        return x._chain(np.log(v), 1.0 / v, -1.0 / v**2)
    return np.log(x)


def tanh(x):
    if isinstance(x, Dual):
        t = np.tanh(x.value)
        s2 = 1.0 - t * t
        return x._chain(t, s2, -2.0 * t * s2)
    return np.tanh(x)


def cosh(x):
    if isinstance(x, Dual):
        return x._chain(np.cosh(x.value), np.sinh(x.value), np.cosh(x.value))
    return np.cosh(x)


def absolute(x):
    """|x| away from zero (the derivative takes the sign of the value)."""
    if isinstance(x, Dual):
        s = np.sign(x.value)
        return x * s
    return np.abs(x)


def power(x, p: float):
    """``x**p`` for a real exponent; the base must be positive unless ``p`` is integral."""
    if isinstance(x, Dual):
        v = x.value
        return x._chain(v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))
    return np.power(x, p)


def derivative(f: Callable, x0) -> float:
    """d f / dx at ``x0`` for a scalar function of one variable."""
    (x,) = variables([x0])
    return f(x).grad[..., 0]


def gradient(f: Callable, x0: Sequence):
    xs = variables(list(x0))
    return f(*xs).grad


def jacobian(f: Callable, x0: Sequence):
    """Jacobian of a vector-valued ``f(*x)`` returning a sequence of outputs.

    Result has shape ``batch + (len(outputs), len(x0))``.
    """
    xs = variables(list(x0))
    outs = f(*xs)
    rows = []
    for o in outs:
        if isinstance(o, Dual):
            rows.append(o.grad)
        else:
            rows.append(np.zeros(np.shape(o) + (len(xs),)) + np.zeros_like(xs[0].grad))
    return np.stack(rows, axis=-2)


def hessian(f: Callable, x0: Sequence):
    xs = variables(list(x0), order=2)
    return f(*xs).hess


def central_difference(f: Callable[[np.ndarray], np.ndarray], x0, step: float = 1e-5):
    """Central-difference Jacobian of ``f`` (array in, array out), for cross-checks."""
    x0 = np.asarray(x0, dtype=float)
    cols = []
    for i in range(x0.shape[-1]):
        e = np.zeros_like(x0)
        e[..., i] = step
        cols.append((np.asarray(f(x0 + e)) - np.asarray(f(x0 - e))) / (2 * step))
    return np.stack(cols, axis=-1)

