"""Small dense linear algebra: metric constants, exact elimination, matrix exponential.

Exact matrices are numpy arrays of ``dtype=object`` holding :class:`Fraction`
or :class:`QSqrt2` entries; numpy's object ``@`` and ``.T`` work on them as-is.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from twoparam.core.qsqrt2 import QSqrt2
from twoparam.errors import InvalidInputError

__all__ = [
    "ETA4",
    "ETA5",
    "ETA5_TILDE",
    "eta5",
    "exact",
    "exact_eye",
    "exact_zeros",
    "is_zero",
    "kronecker",
    "levi_civita",
    "rref",
    "rank",
    "nullspace",
    "matexp",
    "to_float",
]

ETA4 = np.diag([-1.0, 1.0, 1.0, 1.0])
ETA5 = np.diag([-1.0, 1.0, 1.0, 1.0, 1.0])
# (T, X, Y, Z, W) ordering: the second timelike direction sits in the last slot
ETA5_TILDE = np.diag([-1.0, 1.0, 1.0, 1.0, -1.0])


def eta5(branch: str = "dS") -> np.ndarray:
    return ETA5 if branch == "dS" else ETA5_TILDE


def kronecker(i: int, j: int) -> int:
    return int(i == j)


def levi_civita(*idx: int) -> int:
    """Totally antisymmetric symbol on any number of distinct-ranked indices."""
    n = len(idx)
    if len(set(idx)) < n:
        return 0
    sign = 1
    perm = list(idx)
    for i in range(n):
        for j in range(i + 1, n):
            if perm[i] > perm[j]:
                sign = -sign
    return sign


def exact(rows, field=QSqrt2) -> np.ndarray:
    """Object array of exact scalars from nested numbers/strings."""
    arr = np.array(rows, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        v = arr[idx]
        out[idx] = v if isinstance(v, field) else field(v)
    return out


def exact_zeros(shape, field=QSqrt2) -> np.ndarray:
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(out.shape):
        out[idx] = field(0)
    return out


def exact_eye(n: int, field=QSqrt2) -> np.ndarray:
    out = exact_zeros((n, n), field)
    for i in range(n):
        out[i, i] = field(1)
    return out


def is_zero(m) -> bool:
    return not any(bool(v) for v in np.asarray(m, dtype=object).ravel())


def to_float(m) -> np.ndarray:
    a = np.asarray(m, dtype=object)
    return np.vectorize(float, otypes=[float])(a) if a.size else np.zeros(a.shape)


def rref(m):
    """Reduced row echelon form over an exact field; returns ``(R, pivot_columns)``."""
    a = np.array(m, dtype=object, copy=True)
    if a.ndim != 2:
        raise InvalidInputError("rref expects a 2-d array")
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i, c]), None)
        if piv is None:
            continue
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = 1 / a[r, c]
        a[r] = [v * inv for v in a[r]]
        for i in range(rows):
            if i != r and a[i, c]:
                f = a[i, c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m) -> list[np.ndarray]:
    """Exact basis of ``{v : m @ v = 0}``; empty list when ``m`` has full column rank."""
    a = np.asarray(m, dtype=object)
    cols = a.shape[1]
    if a.shape[0] == 0:
        a = np.empty((0, cols), dtype=object)
    r, pivots = rref(a)
    zero = _zero_like(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.empty(cols, dtype=object)
        v[:] = [zero] * cols
        v[f] = zero + 1
        for row, pc in enumerate(pivots):
            v[pc] = -r[row, f]
        basis.append(v)
    return basis


def _zero_like(a):
    for v in a.ravel():
        return type(v)(0) if isinstance(v, (QSqrt2, Fraction)) else Fraction(0)
    return Fraction(0)


def matexp(a, max_norm: float = 1e3) -> np.ndarray:
    """``e^A`` by scaling and squaring with a Taylor series.

    The series is truncated once the next term drops below 1e-16 relative to
    the partial sum; ``A`` is scaled so its inf-norm is at most 1/2 first.
    """
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matexp: non-finite entries")
    norm = np.abs(a).sum(axis=-1).max()
    if norm > max_norm:
        raise InvalidInputError(f"matexp: norm {norm:.3g} exceeds {max_norm:g}")
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
    b = a / 2.0**s
    n = a.shape[0]
    out = np.eye(n)
    term = np.eye(n)
    for k in itertools.count(1):
        term = term @ b / k
        out = out + term
        if np.abs(term).max() <= 1e-16 * max(1.0, np.abs(out).max()) or k > 60:
            break
    for _ in range(s):
        out = out @ out
    return out
