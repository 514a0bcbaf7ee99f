"""Exact o(1,4) generators, bracket tables, subalgebra catalog and invariant tensors.

Generators are 5x5 object arrays over Q(sqrt2) in the defining realization
(M_AB)^C_D = delta_A^C eta_BD - delta_B^C eta_AD, with l1 = 1.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from twoparam.core.linalg import exact, exact_zeros, is_zero, levi_civita, nullspace, rank
from twoparam.core.poly import Poly4, monomials, poly_apply
from twoparam.core.qsqrt2 import INV_SQRT2, QSqrt2
from twoparam.errors import InvalidInputError, UnknownNameError

ETA5_DIAG = (-1, 1, 1, 1, 1)
_ZERO = QSqrt2(0)


def eta5_exact() -> np.ndarray:
    return exact(np.diag(ETA5_DIAG).tolist())


def M(A: int, B: int) -> np.ndarray:
    out = exact_zeros((5, 5))
    for C in range(5):
        for D in range(5):
            v = (C == A) * (D == B) * ETA5_DIAG[B] - (C == B) * (D == A) * ETA5_DIAG[A]
            if v:
                out[C, D] = QSqrt2(v)
    return out


def bracket(X, Y) -> np.ndarray:
    return X @ Y - Y @ X


def in_algebra(X) -> bool:
    """X^T eta + eta X = 0."""
    eta = eta5_exact()
    return is_zero(X.T @ eta + eta @ X)


_NAME_RE = re.compile(r"^(?:M(\d)(\d)|J(\d)|K([23])([+-])|F([123])([+-])|L([123])|P([+-])|R|T)$")


def generator(name: str) -> np.ndarray:
    """Exact matrix of a named generator.

    Names: ``M01``..``M34``, ``J0``..``J3``, ``K2+``, ``K3-``, ``F1+``, ``L2``,
    ``P+``, ``P-``, ``R``, ``T``.
    """
    m = _NAME_RE.match(name)
    if m is None:
        raise UnknownNameError(f"unknown generator {name!r}")
    g = m.groups()
    if g[0] is not None:
        a, b = int(g[0]), int(g[1])
        if a > 4 or b > 4:
            raise UnknownNameError(f"unknown generator {name!r}")
        return M(a, b)
    if g[2] is not None:
        mu = int(g[2])
        if mu > 3:
            raise UnknownNameError(f"unknown generator {name!r}")
        return M(mu, 4)
    if g[3] is not None:
        i, s = int(g[3]), 1 if g[4] == "+" else -1
        return (M(0, i) + M(1, i) * s) * INV_SQRT2
    if g[5] is not None:
        i, s = int(g[5]), 1 if g[6] == "+" else -1
        return (M(0, i) + M(i, 4) * s) * INV_SQRT2
    if g[7] is not None:
        i = int(g[7])
        j, k = [n for n in (1, 2, 3) if n != i]
        return M(j, k) * levi_civita(i, j, k)
    if g[8] is not None:
        s = 1 if g[8] == "+" else -1
        return (M(0, 4) + M(1, 4) * s) * INV_SQRT2
    if name == "R":
        return M(0, 1)
    return M(2, 3)


def _printed(rows, scale) -> np.ndarray:
    return exact(rows) * scale


PRINTED = {
    "K2+": _printed(
        [[0, 0, 1, 0, 0], [0, 0, 1, 0, 0], [1, -1, 0, 0, 0], [0] * 5, [0] * 5], INV_SQRT2
    ),
    "K3+": _printed(
        [[0, 0, 0, 1, 0], [0, 0, 0, 1, 0], [0] * 5, [1, -1, 0, 0, 0], [0] * 5], INV_SQRT2
    ),
    "P+": _printed(
        [[0, 0, 0, 0, 1], [0, 0, 0, 0, 1], [0] * 5, [0] * 5, [1, -1, 0, 0, 0]], QSqrt2(1)
    ),
    "T": _printed([[0] * 5, [0] * 5, [0, 0, 0, 1, 0], [0, 0, -1, 0, 0], [0] * 5], QSqrt2(1)),
    "F1+": _printed(
        [[0, 1, 0, 0, 0], [1, 0, 0, 0, 1], [0] * 5, [0] * 5, [0, -1, 0, 0, 0]], INV_SQRT2
    ),
    "F2+": _printed(
        [[0, 0, 1, 0, 0], [0] * 5, [1, 0, 0, 0, 1], [0] * 5, [0, 0, -1, 0, 0]], INV_SQRT2
    ),
    "F3+": _printed(
        [[0, 0, 0, 1, 0], [0] * 5, [0] * 5, [1, 0, 0, 0, 1], [0, 0, 0, -1, 0]], INV_SQRT2
    ),
}


def proportionality(lhs, rhs):
    """Exact c with lhs = c * rhs, or None when the two are not proportional."""
    if is_zero(rhs):
        return QSqrt2(1) if is_zero(lhs) else None
    idx = next(i for i in np.ndindex(rhs.shape) if rhs[i])
    c = lhs[idx] / rhs[idx]
    return c if is_zero(lhs - rhs * c) else None


def printed_matrix_report() -> list[dict]:
    """Compare catalog generators with the matrices typeset in the examples."""
    out = []
    for name, mat in PRINTED.items():
        c = proportionality(mat, generator(name))
        out.append({"generator": name, "multiplier": None if c is None else str(c),
                    "status": "pass" if c == 1 else ("flagged" if c is not None else "fail")})
    return out


# ----------------------------------------------------------------------------
# subalgebras


@dataclass(frozen=True)
class SubalgebraSpec:
    name: str
    sign: str
    generators: tuple
    note: str = ""

    def matrices(self) -> list[np.ndarray]:
        return [generator(g) for g in self.generators]


def _k(sign):
    # the table's K_1, K_2 are the defined K_2, K_3
    return (f"K2{sign}", f"K3{sign}")


def subalgebra(name: str, sign: str = "+", p_sign: str | None = None) -> SubalgebraSpec:
    """Catalog entry by name: TypeI, TypeII, H1..H8, K1..K5, o14, or an example set.

    ``p_sign`` chooses the superscript of the unsigned P in the H-family
    (defaults to ``sign``).
    """
    if sign not in "+-" or len(sign) != 1:
        raise InvalidInputError("sign must be '+' or '-'")
    p = f"P{p_sign or sign}"
    K = _k(sign)
    F = tuple(f"F{i}{sign}" for i in (1, 2, 3))
    L = ("L1", "L2", "L3")
    table = {
        "TypeI": K + ("J2", "J3", f"P{sign}", "R", "T"),
        "TypeII": F + L + ("J0",),
        "H1": K + (p,),
        "H2": K + (p, "R"),
        "H3": K + (p, "T"),
        "H4": K + (p, "R", "T"),
        "H5": (p, "R", "T"),
        "H6": ("J2", "J3", "T"),
        "H7": ("J2", "J3", "R", "T"),
        "H8": K + (p, "J2", "J3", "T"),
        "K1": F,
        "K2": L,
        "K3": F + ("J0",),
        "K4": L + ("J0",),
        "K5": F + L,
        "o14": tuple(f"M{a}{b}" for a in range(5) for b in range(a + 1, 5)),
        # the explicit matrices of the first example: K2+, K3+, P+ and T
        "Example1": K + (p, "T"),
    }
    if name not in table:
        raise UnknownNameError(f"unknown subalgebra {name!r}")
    note = "K_1, K_2 of the table realized as K_2, K_3" if name.startswith(("Type", "H")) else ""
    return SubalgebraSpec(name, sign, table[name], note)


def catalog_names() -> list[str]:
    return ["TypeI", "TypeII"] + [f"H{i}" for i in range(1, 9)] + [f"K{i}" for i in range(1, 6)]


def span_coefficients(target, basis):
    """Exact coefficients expressing ``target`` in ``basis``, or None."""
    cols = np.array([b.ravel() for b in basis] + [target.ravel()], dtype=object).T
    null = nullspace(cols)
    for v in null:
        if v[-1]:
            return [-c / v[-1] for c in v[:-1]]
    return None


def closure_report(spec: SubalgebraSpec) -> dict:
    """Which brackets of ``spec`` leave its linear span."""
    mats = spec.matrices()
    failing = []
    for (i, X), (j, Y) in itertools.combinations(enumerate(mats), 2):
        if span_coefficients(bracket(X, Y), mats) is None:
            failing.append((spec.generators[i], spec.generators[j]))
    return {"name": spec.name, "sign": spec.sign, "closed": not failing, "failing": failing}


# ----------------------------------------------------------------------------
# bracket tables


@dataclass
class Relation:
    lhs: tuple
    rhs: dict
    label: str = ""


def _eps2(i, j):
    return {(2, 3): 1, (3, 2): -1}.get((i, j), 0)


def type_i_relations(sign: str = "+") -> list[Relation]:
    s = 1 if sign == "+" else -1
    K = {2: f"K2{sign}", 3: f"K3{sign}"}
    J = {2: "J2", 3: "J3"}
    P = f"P{sign}"
    rels = []
    idx = (2, 3)
    for i, j in itertools.product(idx, idx):
        rels.append(Relation((K[i], K[j]), {}, "[K_i,K_j]=0"))
        rels.append(Relation((J[i], J[j]), {"T": _eps2(i, j)}, "[J_i,J_j]=eps_ij T"))
        rels.append(Relation((K[i], J[j]), {P: int(i == j)}, "[K_i,J_j]=delta_ij P"))
    for i in idx:
        j = 5 - i
        rels.append(Relation((K[i], P), {}, "[K_i,P]=0"))
        rels.append(Relation((K[i], "R"), {K[i]: -1}, "[K_i,R]=-K_i"))
        rels.append(Relation((K[i], "T"), {K[j]: _eps2(i, j)}, "[K_i,T]=eps_ij K_j"))
        rels.append(Relation((J[i], P), {K[i]: 1}, "[J_i,P]=K_i"))
        rels.append(Relation((J[i], "R"), {}, "[J_i,R]=0"))
        rels.append(Relation((J[i], "T"), {J[j]: _eps2(i, j)}, "[J_i,T]=eps_ij J_j"))
    rels.append(Relation((P, "R"), {P: -s}, "[P,R]=-+P"))
    rels.append(Relation((P, "T"), {}, "[P,T]=0"))
    rels.append(Relation(("R", "T"), {}, "[R,T]=0"))
    return rels


def type_ii_relations(sign: str = "+") -> list[Relation]:
    s = 1 if sign == "+" else -1
    F = {i: f"F{i}{sign}" for i in (1, 2, 3)}
    L = {i: f"L{i}" for i in (1, 2, 3)}
    rels = []
    idx = (1, 2, 3)
    for i, j in itertools.product(idx, idx):
        rels.append(Relation((F[i], F[j]), {}, "[F_i,F_j]=0"))
        rhs_l = {L[k]: -levi_civita(i, j, k) for k in idx if levi_civita(i, j, k)}
        rels.append(Relation((L[i], L[j]), rhs_l, "[L_i,L_j]=-eps_ijk L_k"))
        rhs_f = {F[k]: -levi_civita(i, j, k) for k in idx if levi_civita(i, j, k)}
        rels.append(Relation((F[i], L[j]), rhs_f, "[F_i,L_j]=-eps_ijk F_k"))
    for i in idx:
        rels.append(Relation((F[i], "J0"), {F[i]: s}, "[F_i,J0]=+-F_i"))
        rels.append(Relation((L[i], "J0"), {}, "[L_i,J0]=0"))
    return rels


def _combo(rhs: dict) -> np.ndarray:
    out = exact_zeros((5, 5))
    for name, c in rhs.items():
        if c:
            out = out + generator(name) * QSqrt2(c)
    return out


def check_relation(rel: Relation) -> dict:
    lhs = bracket(generator(rel.lhs[0]), generator(rel.lhs[1]))
    rhs = _combo(rel.rhs)
    text = f"[{rel.lhs[0]},{rel.lhs[1]}] = " + (
        " + ".join(f"{c}*{n}" for n, c in rel.rhs.items() if c) or "0"
    )
    if is_zero(lhs - rhs):
        return {"relation": text, "label": rel.label, "status": "pass", "multiplier": "1"}
    c = proportionality(lhs, rhs)
    if c is not None and not is_zero(rhs):
        return {"relation": text, "label": rel.label, "status": "flagged", "multiplier": str(c)}
    return {"relation": text, "label": rel.label, "status": "fail", "multiplier": None}


def verify_bracket_table(spec: str, sign: str = "+") -> list[dict]:
    """Per-relation exact check of the Type I / Type II tables.

    A relation that holds up to a constant factor is reported as ``flagged``
    with that factor; anything else that does not hold is ``fail``.
    """
    if spec == "TypeI":
        rels = type_i_relations(sign)
    elif spec == "TypeII":
        rels = type_ii_relations(sign)
    else:
        raise UnknownNameError(f"no bracket table for {spec!r}")
    return [check_relation(r) for r in rels]


def so14_bracket_formula(A, B, C, D) -> np.ndarray:
    """eta_AD M_BC + eta_BC M_AD - eta_AC M_BD - eta_BD M_AC."""
    e = ETA5_DIAG
    out = exact_zeros((5, 5))
    for coef, (p, q) in (
        (e[A] * (A == D), (B, C)),
        (e[B] * (B == C), (A, D)),
        (-e[A] * (A == C), (B, D)),
        (-e[B] * (B == D), (A, C)),
    ):
        if coef:
            out = out + M(p, q) * QSqrt2(coef)
    return out


def verify_so14_brackets() -> list[dict]:
    pairs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    out = []
    for (A, B), (C, D) in itertools.combinations(pairs, 2):
        ok = is_zero(bracket(M(A, B), M(C, D)) - so14_bracket_formula(A, B, C, D))
        out.append({"pair": f"[M{A}{B},M{C}{D}]", "status": "pass" if ok else "fail"})
    return out


def _op_name(A: int, B: int) -> tuple[str, int]:
    # differential operator realizing M_AB, with the sign from antisymmetry
    sign = 1
    if A > B:
        A, B, sign = B, A, -1
    return (f"J{A}" if B == 4 else f"M{A}{B}"), sign


def verify_operator_realization(max_degree: int = 3, l1=1) -> list[dict]:
    """Check that J_mu and M_mu_nu acting on polynomials obey the o(1,4) brackets.

    J_mu stands for M_mu4. For every pair of the ten operators the commutator
    is applied to all monomials of degree <= ``max_degree`` and compared with
    the operator combination predicted by :func:`so14_bracket_formula`.
    """
    pairs = [(a, b) for a in range(5) for b in range(a + 1, 5)]
    monos = list(monomials(max_degree))
    out = []
    for (A, B), (C, D) in itertools.combinations(pairs, 2):
        rhs = so14_bracket_formula(A, B, C, D)
        terms = []
        for E, F in pairs:
            c = rhs[E, F] * ETA5_DIAG[F]  # (M_EF)^E_F = eta_FF
            if c:
                name, sign = _op_name(E, F)
                terms.append((name, Fraction(c.p) * sign))
        n1, s1 = _op_name(A, B)
        n2, s2 = _op_name(C, D)
        ok = True
        for m in monos:
            lhs = poly_apply(n1, poly_apply(n2, m, l1), l1) - poly_apply(n2, poly_apply(n1, m, l1), l1)
            lhs = lhs * (s1 * s2)
            pred = Poly4()
            for name, c in terms:
                pred = pred + poly_apply(name, m, l1) * c
            if lhs != pred:
                ok = False
                break
        out.append({"pair": f"[{n1},{n2}]", "monomials": len(monos),
                    "status": "pass" if ok else "fail"})
    return out


# ----------------------------------------------------------------------------
# invariant tensors


SPECIES = ("vector", "symmetric2", "antisymmetric2")
CONVENTIONS = ("contravariant", "covariant")


@dataclass
class InvariantBasis:
    species: str
    convention: str
    basis: list = field(default_factory=list)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def contains(self, tensor) -> bool:
        """Exact membership of ``tensor`` in the span."""
        t = np.asarray(tensor, dtype=object)
        if not self.basis:
            return is_zero(t)
        rows = [b.ravel() for b in self.basis]
        return rank(np.array(rows, dtype=object)) == rank(np.array(rows + [t.ravel()], dtype=object))

    def to_json(self) -> dict:
        return {
            "species": self.species,
            "convention": self.convention,
            "dimension": self.dimension,
            "basis": [np.vectorize(str, otypes=[object])(b).tolist() for b in self.basis],
        }


def _tensor_basis(species: str) -> list[np.ndarray]:
    if species == "vector":
        out = []
        for i in range(5):
            v = exact_zeros(5)
            v[i] = QSqrt2(1)
            out.append(v)
        return out
    out = []
    for i in range(5):
        for j in range(i, 5):
            if species == "antisymmetric2" and i == j:
                continue
            E = exact_zeros((5, 5))
            E[i, j] = QSqrt2(1)
            E[j, i] = QSqrt2(-1 if species == "antisymmetric2" else 1)
            out.append(E)
    return out


def _action(X, T, species: str, convention: str):
    if species == "vector":
        return X @ T if convention == "contravariant" else X.T @ T
    if convention == "contravariant":
        return X @ T + T @ X.T
    return X.T @ T + T @ X


def invariant_space(spec, species: str, convention: str = "contravariant") -> InvariantBasis:
    """Tensors annihilated by every generator, by exact nullspace of stacked constraints.

    ``spec`` is a :class:`SubalgebraSpec` or a list of generator matrices.
    """
    if species not in SPECIES:
        raise InvalidInputError(f"species must be one of {SPECIES}")
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"convention must be one of {CONVENTIONS}")
    gens = spec.matrices() if isinstance(spec, SubalgebraSpec) else list(spec)
    basis = _tensor_basis(species)
    rows = []
    for X in gens:
        images = [_action(X, E, species, convention).ravel() for E in basis]
        block = np.array(images, dtype=object).T  # one row per tensor entry
        rows.extend(block)
    A = np.array(rows, dtype=object) if rows else np.empty((0, len(basis)), dtype=object)
    null = nullspace(A)
    tensors = []
    for coeffs in null:
        T = exact_zeros(basis[0].shape)
        for c, E in zip(coeffs, basis):
            if c:
                T = T + E * c
        tensors.append(T)
    return InvariantBasis(species, convention, tensors)


def lower(T) -> np.ndarray:
    """eta T eta for matrices, eta T for vectors (switches convention)."""
    eta = eta5_exact()
    T = np.asarray(T, dtype=object)
    return eta @ T if T.ndim == 1 else eta @ T @ eta


def printed_C(ca, cb) -> np.ndarray:
    ca, cb = QSqrt2(ca), QSqrt2(cb)
    C = exact_zeros((5, 5))
    C[0, 0], C[0, 1], C[1, 0], C[1, 1] = ca, cb, cb, cb * 2 - ca
    C[2, 2] = C[3, 3] = C[4, 4] = cb - ca
    return C


def printed_D(ca, cb, cc) -> np.ndarray:
    D = exact_zeros((5, 5))
    for col, v in ((2, ca), (3, cb), (4, cc)):
        D[0, col] = D[1, col] = QSqrt2(v)
        D[col, 0] = D[col, 1] = QSqrt2(-v)
    return D


def printed_V(ca) -> np.ndarray:
    return exact([ca, 0, 0, 0, -ca])


def printed_W(ca) -> np.ndarray:
    return exact([ca, ca, 0, 0, 0])


def direction_relations(vector, generators) -> list[dict]:
    """X v for each generator, classified as an exact eigen-relation X v = c v."""
    v = np.asarray(vector, dtype=object)
    out = []
    for name in generators:
        img = generator(name) @ v
        c = proportionality(img, v) if not is_zero(img) else QSqrt2(0)
        out.append({"generator": name, "image": [str(e) for e in img],
                    "eigenvalue": None if c is None else str(c)})
    return out


def example4_relations() -> list[dict]:
    """Direction-preservation claims for W = (1,1,0,0,0) and V = (1,0,0,0,-1).

    The printed list says J_i V = 0 for i = 1, 2, 3; in fact J_i V = -M_0i V,
    which is not zero, while the rotations L_i of the same table annihilate V.
    Those three claims are reported as ``flagged`` and the L_i versions are
    checked alongside.
    """
    W, V = printed_W(1), printed_V(1)
    claims = [(W, n, 0, "") for n in ("K2+", "K3+", "J2", "J3", "T", "P+")]
    claims.append((W, "R", 1, ""))
    claims += [(V, f"F{i}+", 0, "") for i in (1, 2, 3)]
    claims += [(V, f"J{i}", 0, "printed claim; holds for L_i instead") for i in (1, 2, 3)]
    claims += [(V, f"L{i}", 0, "") for i in (1, 2, 3)]
    claims.append((V, "J0", -1, ""))
    out = []
    for vec, name, expected, note in claims:
        rel = direction_relations(vec, [name])[0]
        ok = rel["eigenvalue"] == str(QSqrt2(expected))
        rel["vector"] = "W" if vec is W else "V"
        rel["expected"] = str(expected)
        rel["status"] = "pass" if ok else ("flagged" if note else "fail")
        rel["note"] = note
        out.append(rel)
    return out


def to_float_matrix(X) -> np.ndarray:
    return np.vectorize(float, otypes=[float])(np.asarray(X, dtype=object))


def conjugate_generator(X) -> np.ndarray:
    """eta X eta; the generator whose flow leaves covariant copies of X-invariants fixed."""
    eta = eta5_exact()
    return eta @ X @ eta


__all__ = [
    "M",
    "bracket",
    "in_algebra",
    "generator",
    "PRINTED",
    "printed_matrix_report",
    "proportionality",
    "SubalgebraSpec",
    "subalgebra",
    "catalog_names",
    "span_coefficients",
    "closure_report",
    "Relation",
    "type_i_relations",
    "type_ii_relations",
    "check_relation",
    "verify_bracket_table",
    "so14_bracket_formula",
    "verify_so14_brackets",
    "InvariantBasis",
    "invariant_space",
    "lower",
    "printed_C",
    "printed_D",
    "printed_V",
    "printed_W",
    "direction_relations",
    "example4_relations",
    "to_float_matrix",
    "conjugate_generator",
    "verify_operator_realization",
]
