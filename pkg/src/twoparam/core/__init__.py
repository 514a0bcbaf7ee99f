"""Foundation scalars and small dense linear algebra."""

from twoparam.core.dual import Dual, variables
from twoparam.core.linalg import ETA4, ETA5, ETA5_TILDE, matexp, nullspace, rank
from twoparam.core.poly import Poly4, poly_apply
from twoparam.core.qsqrt2 import INV_SQRT2, SQRT2, QSqrt2

__all__ = [
    "Dual",
    "variables",
    "ETA4",
    "ETA5",
    "ETA5_TILDE",
    "matexp",
    "nullspace",
    "rank",
    "Poly4",
    "poly_apply",
    "QSqrt2",
    "SQRT2",
    "INV_SQRT2",
]
