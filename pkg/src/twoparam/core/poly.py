"""Polynomials in x^0..x^3 with rational coefficients, and the first-order
differential operators that realize the o(1,4) brackets on them."""

from __future__ import annotations

import itertools
import re
from fractions import Fraction

from twoparam.errors import UnknownNameError

__all__ = ["Poly4", "monomials", "poly_apply", "operator_names", "ETA_DIAG"]

ETA_DIAG = (-1, 1, 1, 1)
_OP_RE = re.compile(r"^(J)([0-3])$|^(M)([0-3])([0-3])$")


class Poly4:
    """Sparse polynomial ``{exponent tuple: coefficient}`` in four variables."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[tuple(mono)] = c
        self.terms = clean

    @classmethod
    def const(cls, c) -> "Poly4":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def var(cls, i: int) -> "Poly4":
        e = [0, 0, 0, 0]
        e[i] = 1
        return cls({tuple(e): 1})

    @classmethod
    def monomial(cls, exps, c=1) -> "Poly4":
        return cls({tuple(exps): c})

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def __add__(self, other):
        other = _as_poly(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly4(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly4({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        out = {}
        for (m1, c1), (m2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            m = tuple(a + b for a, b in zip(m1, m2))
            out[m] = out.get(m, 0) + c1 * c2
        return Poly4(out)

    __rmul__ = __mul__

    def diff(self, i: int) -> "Poly4":
        out = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = out.get(tuple(e), 0) + c * m[i]
        return Poly4(out)

    def __call__(self, x):
        total = 0
        for m, c in self.terms.items():
            term = c
            for xi, e in zip(x, m):
                term = term * xi**e
            total = total + term
        return total

    def __eq__(self, other):
        try:
            return self.terms == _as_poly(other).terms
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "Poly4(0)"
        parts = []
        for m, c in sorted(self.terms.items()):
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}" for i, e in enumerate(m) if e)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return "Poly4(" + " + ".join(parts) + ")"


def _as_poly(x) -> Poly4:
    if isinstance(x, Poly4):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly4.const(x)
    raise TypeError(f"cannot combine Poly4 with {type(x).__name__}")


def monomials(max_degree: int):
    """All monic monomials of total degree ``<= max_degree``."""
    for exps in itertools.product(range(max_degree + 1), repeat=4):
        if sum(exps) <= max_degree:
            yield Poly4.monomial(exps)


def operator_names() -> list[str]:
    names = [f"J{m}" for m in range(4)]
    names += [f"M{m}{n}" for m in range(4) for n in range(m + 1, 4)]
    return names


def _lowered(mu: int) -> Poly4:
    # eta_{mu alpha} x^alpha
    return ETA_DIAG[mu] * Poly4.var(mu)


def _euler(p: Poly4) -> Poly4:
    return sum((Poly4.var(n) * p.diff(n) for n in range(4)), Poly4())


def poly_apply(op_name: str, p: Poly4, l1=1) -> Poly4:
    """Apply ``J_mu`` or ``M_mu_nu`` (names ``"J0"``, ``"M23"``, ...) to ``p``.

    J_mu = d_mu + eta_{mu a} x^a x^n d_n / l1^2 and
    M_mu_nu = eta_{mu a} x^a d_nu - eta_{nu a} x^a d_mu.
    """
    m = _OP_RE.match(op_name)
    if m is None:
        raise UnknownNameError(f"unknown differential operator {op_name!r}")
    l1 = Fraction(l1)
    if m.group(1):
        mu = int(m.group(2))
        return p.diff(mu) + _lowered(mu) * _euler(p) * (1 / l1**2)
    mu, nu = int(m.group(4)), int(m.group(5))
    if mu == nu:
        return Poly4()
    return _lowered(mu) * p.diff(nu) - _lowered(nu) * p.diff(mu)
