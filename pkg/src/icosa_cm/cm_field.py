"""Cyclic quartic CM fields K = Q(sqrt(A(D + B sqrt(D)))).

Case classification, conductor and discriminant, the integral basis of
O_K, the polarization element zeta = alpha/kappa and the integer matrix
of the Riemann form E(x, y) = Tr(zeta x y^rho) on that basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .qfield import Embedding, QuartElem, galois_apply, trace

__all__ = [
    "InvalidFieldSpec",
    "CMFieldSpec",
    "FieldInvariants",
    "PolarizationSpec",
    "classify",
    "field_invariants",
    "integral_basis",
    "zeta_principal",
    "riemann_gram",
    "closed_form_gram",
    "pfaffian",
    "STANDARD_J",
]

CASES = ("i", "ii", "iii", "iv", "v")

STANDARD_J = ((0, 0, 1, 0), (0, 0, 0, 1), (-1, 0, 0, 0), (0, -1, 0, 0))


class InvalidFieldSpec(ValueError):
    pass


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        if n % p == 0:
            n //= p
        p += 1
    return True


@dataclass(frozen=True)
class CMFieldSpec:
    A: int
    B: int
    C: int
    Delta: int

    @classmethod
    def from_dict(cls, d: dict) -> "CMFieldSpec":
        try:
            return cls(int(d["A"]), int(d["B"]), int(d["C"]), int(d["Delta"]))
        except KeyError as exc:
            raise InvalidFieldSpec(f"missing field {exc.args[0]!r} in spec") from None

    def as_tuple(self) -> tuple:
        return (self.A, self.B, self.C, self.Delta)

    def validate(self, require_cm: bool = False) -> None:
        A, B, C, D = self.as_tuple()
        problems = []
        if A % 2 == 0:
            problems.append("A must be odd")
        if not is_squarefree(A):
            problems.append("A must be squarefree")
        if B <= 0 or C <= 0:
            problems.append("B and C must be positive")
        if D != B * B + C * C:
            problems.append("Delta must equal B^2 + C^2")
        if not is_squarefree(D):
            problems.append("Delta must be squarefree")
        if math.gcd(A, D) != 1:
            problems.append("gcd(A, Delta) must be 1")
        if require_cm and A >= 0:
            problems.append("A must be negative for a CM field")
        if problems:
            raise InvalidFieldSpec(f"invalid field spec {self.as_tuple()}: " + "; ".join(problems))

    def __str__(self):
        return f"(A={self.A}, B={self.B}, C={self.C}, Delta={self.Delta})"


@dataclass(frozen=True)
class FieldInvariants:
    conductor: int
    discriminant: int


@dataclass(frozen=True)
class PolarizationSpec:
    zeta: QuartElem
    kappa: Fraction


def classify(spec: CMFieldSpec) -> str:
    spec.validate()
    A, B, C, D = spec.as_tuple()
    if D % 2 == 0:
        return "i"
    if B % 2 == 1:
        return "ii"
    if (A + B) % 4 == 3:
        return "iii"
    # A + B = 1 (mod 4); C is odd here, so exactly one of A = +-C (mod 4) holds
    return "iv" if (A - C) % 4 == 0 else "v"


_CONDUCTOR_EXP = {"i": 3, "ii": 3, "iii": 2, "iv": 0, "v": 0}
_DISC_EXP = {"i": 8, "ii": 6, "iii": 4, "iv": 0, "v": 0}


def field_invariants(spec: CMFieldSpec) -> FieldInvariants:
    case = classify(spec)
    A, D = spec.A, spec.Delta
    return FieldInvariants(
        conductor=2 ** _CONDUCTOR_EXP[case] * D * abs(A),
        discriminant=2 ** _DISC_EXP[case] * D ** 3 * A * A,
    )


def integral_basis(spec: CMFieldSpec) -> list:
    """Z-basis of O_K in the {1, sqrt(D), alpha, beta} coordinates."""
    case = classify(spec)
    f = spec.as_tuple()
    h, q = Fraction(1, 2), Fraction(1, 4)
    one = QuartElem((1, 0, 0, 0), f)
    if case == "i":
        rest = [(0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    elif case == "ii":
        rest = [(h, h, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)]
    elif case == "iii":
        rest = [(h, h, 0, 0), (0, 0, h, h), (0, 0, h, -h)]
    elif case == "iv":
        rest = [(h, h, 0, 0), (q, q, q, q), (q, -q, q, -q)]
    else:
        rest = [(h, h, 0, 0), (q, q, q, -q), (q, -q, q, q)]
    return [one] + [QuartElem(c, f) for c in rest]


_KAPPA_FACTOR = {"ii": 4, "iii": 2, "iv": 1, "v": 1}


def zeta_principal(spec: CMFieldSpec) -> PolarizationSpec:
    """zeta = alpha/kappa giving a principal polarization on O_K (Delta = 5)."""
    spec.validate(require_cm=True)
    if spec.Delta != 5:
        raise NotImplementedError("principal zeta is tabulated only for Delta = 5")
    case = classify(spec)
    # case (i) needs Delta even, so it cannot occur here
    kappa = Fraction(-_KAPPA_FACTOR[case] * spec.Delta * spec.A)
    return PolarizationSpec(QuartElem.alpha(spec.as_tuple()) / kappa, kappa)


def zeta_for_kappa(spec: CMFieldSpec, kappa) -> PolarizationSpec:
    kappa = Fraction(kappa)
    if kappa == 0:
        raise ValueError("kappa must be non-zero")
    return PolarizationSpec(QuartElem.alpha(spec.as_tuple()) / kappa, kappa)


def riemann_gram(basis: Sequence[QuartElem], zeta: PolarizationSpec | QuartElem,
                 exact: bool = False) -> list:
    """Matrix of Tr(zeta * x_j * x_k^rho) on the given basis.

    Entries must be integers (the form is then a Riemann form on the
    lattice); with ``exact=True`` rational entries are returned as-is.
    """
    z = zeta.zeta if isinstance(zeta, PolarizationSpec) else zeta
    conj = [galois_apply(b, Embedding.RHO) for b in basis]
    M = [[trace(z * bj * bk) for bk in conj] for bj in basis]
    if exact:
        return M
    for row in M:
        for v in row:
            if v.denominator != 1:
                raise ValueError(f"Riemann form entry {v} is not an integer for this zeta")
    return [[int(v) for v in row] for row in M]


def closed_form_gram(spec: CMFieldSpec, kappa) -> list:
    """Tabulated closed form of the Riemann-form matrix, as exact rationals."""
    case = classify(spec)
    A, B, C, D = spec.as_tuple()
    kappa = Fraction(kappa)
    F = Fraction
    if case == "i":
        s, u = -4 * D * A, [[0, 0, 1, 0], [0, 0, B, C], [-1, -B, 0, 0], [0, -C, 0, 0]]
    elif case == "ii":
        s, u = -2 * D * A, [[0, 0, 2, 0], [0, 0, 1 + B, C], [-2, -(1 + B), 0, 0], [0, -C, 0, 0]]
    elif case == "iii":
        s, u = -D * A, [[0, 0, 2, 2], [0, 0, 1 + B + C, 1 + B - C],
                        [-2, -(1 + B + C), 0, 0], [-2, -(1 + B - C), 0, 0]]
    elif case == "iv":
        p, m = F(1 + B + C, 2), F(1 + B - C, 2)
        s, u = -D * A, [[0, 0, 1, 1], [0, 0, p, m], [-1, -p, 0, F(B, 2)], [-1, -m, -F(B, 2), 0]]
    else:
        p, m = F(1 + B - C, 2), F(1 + B + C, 2)
        s, u = -D * A, [[0, 0, 1, 1], [0, 0, p, m], [-1, -p, 0, F(B, 2)], [-1, -m, -F(B, 2), 0]]
    return [[F(s) / kappa * F(v) for v in row] for row in u]


def _det4(M) -> int:
    # Laplace expansion along the first row; exact for integers and Fractions
    def det3(m):
        return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))

    total = 0
    for j in range(4):
        minor = [[M[i][k] for k in range(4) if k != j] for i in range(1, 4)]
        total += (-1) ** j * M[0][j] * det3(minor)
    return total


def pfaffian(M) -> int:
    """Positive square root of det(M) for an integral skew 4x4 matrix."""
    if len(M) != 4 or any(len(r) != 4 for r in M):
        raise ValueError("pfaffian expects a 4x4 matrix")
    for i in range(4):
        for j in range(4):
            if M[i][j] != -M[j][i]:
                raise ValueError("matrix is not skew-symmetric")
            if Fraction(M[i][j]).denominator != 1:
                raise ValueError("matrix is not integral")
    pf = M[0][1] * M[2][3] - M[0][2] * M[1][3] + M[0][3] * M[1][2]
    det = _det4(M)
    root = math.isqrt(int(det)) if det >= 0 else -1
    if root * root != det or root != abs(pf):
        raise ValueError(f"determinant {det} is not the square of the Pfaffian")
    return int(root)
