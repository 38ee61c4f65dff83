"""Symplectic bases, period matrices and the Humbert locus N5.

Conventions: J = [[0, I], [-I, 0]]; a lattice basis (l1, l2, l3, l4) is
symplectic when E(l_j, l_k) is J; the period matrix of the 2x4 matrix
(M1 M2) = (l1 l2 l3 l4) is Omega = -M2^{-1} M1; gamma = [[A, B], [C, D]]
acts by Omega -> (A Omega + B)(C Omega + D)^{-1}.  N5 is the surface
tau1 = tau2 + tau3, parametrized by mu5.
"""

from __future__ import annotations

import heapq
import itertools
import logging
from dataclasses import dataclass
from typing import Sequence

import mpmath as mp

from .ball import Ball, eps
from .cm_field import STANDARD_J, pfaffian
from .lll import integer_relations
from .qfield import QuartElem, embedding_pair

log = logging.getLogger(__name__)

__all__ = [
    "NotPrincipalError",
    "PeriodMatrixError",
    "NormalizationError",
    "PeriodMatrix",
    "HilbertPoint",
    "Sp4Element",
    "symplectic_reduce",
    "lattice_vectors",
    "change_basis",
    "period_matrix",
    "apply_sp4",
    "singular_relation",
    "transform_relation",
    "relation_value",
    "relation_discriminant",
    "relation_to_skew",
    "skew_to_relation",
    "search_gamma",
    "generators",
    "N5_RELATION",
    "normalize_to_N5",
    "hilbert_from_N5",
    "mu5",
    "default_tol",
]

N5_RELATION = (-1, 1, 1, 0, 0)


class NotPrincipalError(ValueError):
    pass


class PeriodMatrixError(ValueError):
    pass


class NormalizationError(RuntimeError):
    def __init__(self, msg, best_residual=None):
        super().__init__(msg)
        self.best_residual = best_residual


def default_tol(prec: int) -> mp.mpf:
    return mp.ldexp(mp.mpf(1), -(prec // 2))


# --------------------------------------------------------------------------
# exact integer side
# --------------------------------------------------------------------------

def _matmul(X, Y):
    return [[sum(X[i][k] * Y[k][j] for k in range(len(Y))) for j in range(len(Y[0]))]
            for i in range(len(X))]


def _transpose(X):
    return [list(r) for r in zip(*X)]


def _form(M, x, y) -> int:
    return sum(x[i] * M[i][j] * y[j] for i in range(4) for j in range(4))


def symplectic_reduce(M) -> list:
    """Unimodular U (columns = new basis) with U^T M U = J.

    Works by integer column operations: Euclid on the pairing row of the
    first remaining vector produces its partner, then the rest is made
    orthogonal to the pair.
    """
    if pfaffian(M) != 1:
        raise NotPrincipalError("Riemann form has Pfaffian != 1; no symplectic basis over Z")
    work = [[1 if i == j else 0 for i in range(4)] for j in range(4)]
    firsts, seconds = [], []
    while work:
        e, others = work[0], work[1:]
        while True:
            vals = [_form(M, e, w) for w in others]
            nz = [i for i, v in enumerate(vals) if v]
            if not nz:
                raise NotPrincipalError("degenerate Riemann form")
            if len(nz) == 1:
                break
            k = min(nz, key=lambda i: abs(vals[i]))
            for j in nz:
                if j != k:
                    qq = vals[j] // vals[k]
                    others[j] = [a - qq * b for a, b in zip(others[j], others[k])]
        k = nz[0]
        dval = vals[k]
        if abs(dval) != 1:
            raise NotPrincipalError("pairing row is not unimodular")
        f = [dval * a for a in others[k]]
        rest = []
        for j, w in enumerate(others):
            if j == k:
                continue
            c = _form(M, f, w)
            rest.append([a + c * b for a, b in zip(w, e)])
        firsts.append(e)
        seconds.append(f)
        work = rest
    cols = firsts + seconds
    U = [[cols[j][i] for j in range(4)] for i in range(4)]
    if _matmul(_matmul(_transpose(U), M), U) != [list(r) for r in STANDARD_J]:
        raise AssertionError("symplectic reduction failed self-check")  # pragma: no cover
    return U


@dataclass(frozen=True)
class Sp4Element:
    """4x4 integer matrix [[A, B], [C, D]] with g^T J g = J."""

    m: tuple

    def __post_init__(self):
        flat = tuple(int(v) for row in self.m for v in (row if isinstance(row, (list, tuple)) else [row]))
        if len(flat) != 16:
            raise ValueError("Sp4 element needs 16 integers")
        object.__setattr__(self, "m", tuple(tuple(flat[4 * i:4 * i + 4]) for i in range(4)))
        if not self.is_symplectic():
            raise ValueError(f"matrix {self.m} is not in Sp(4, Z)")

    @classmethod
    def from_flat(cls, values: Sequence[int]) -> "Sp4Element":
        values = [int(v) for v in values]
        if len(values) != 16:
            raise ValueError("expected 16 integers (row-major 4x4)")
        return cls(tuple(tuple(values[4 * i:4 * i + 4]) for i in range(4)))

    @classmethod
    def from_blocks(cls, A, B, C, D) -> "Sp4Element":
        rows = [list(A[0]) + list(B[0]), list(A[1]) + list(B[1]),
                list(C[0]) + list(D[0]), list(C[1]) + list(D[1])]
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls) -> "Sp4Element":
        return cls(tuple(tuple(int(i == j) for j in range(4)) for i in range(4)))

    def flat(self) -> list:
        return [v for row in self.m for v in row]

    def is_symplectic(self) -> bool:
        g = [list(r) for r in self.m]
        return _matmul(_matmul(_transpose(g), [list(r) for r in STANDARD_J]), g) == \
            [list(r) for r in STANDARD_J]

    @property
    def blocks(self):
        m = self.m
        A = ((m[0][0], m[0][1]), (m[1][0], m[1][1]))
        B = ((m[0][2], m[0][3]), (m[1][2], m[1][3]))
        C = ((m[2][0], m[2][1]), (m[3][0], m[3][1]))
        D = ((m[2][2], m[2][3]), (m[3][2], m[3][3]))
        return A, B, C, D

    def __matmul__(self, other: "Sp4Element") -> "Sp4Element":
        return Sp4Element(tuple(tuple(r) for r in _matmul(self.m, other.m)))

    def inverse(self) -> "Sp4Element":
        A, B, C, D = self.blocks
        tA, tB, tC, tD = (_transpose(X) for X in (A, B, C, D))
        neg = lambda X: [[-v for v in r] for r in X]
        return Sp4Element.from_blocks(tD, neg(tB), neg(tC), tA)


# --------------------------------------------------------------------------
# numeric side
# --------------------------------------------------------------------------

def _m2_mul(X, Y):
    return ((X[0][0] * Y[0][0] + X[0][1] * Y[1][0], X[0][0] * Y[0][1] + X[0][1] * Y[1][1]),
            (X[1][0] * Y[0][0] + X[1][1] * Y[1][0], X[1][0] * Y[0][1] + X[1][1] * Y[1][1]))


def _m2_add(X, Y):
    return tuple(tuple(X[i][j] + Y[i][j] for j in range(2)) for i in range(2))


def _m2_inv(X):
    det = X[0][0] * X[1][1] - X[0][1] * X[1][0]
    if det.abs_lower() <= 0:
        raise PeriodMatrixError("singular 2x2 matrix")
    inv = det.inverse()
    return ((X[1][1] * inv, -X[0][1] * inv), (-X[1][0] * inv, X[0][0] * inv))


def _balls(X):
    return tuple(tuple(v if isinstance(v, Ball) else Ball.exact(v) for v in row) for row in X)


@dataclass(frozen=True)
class PeriodMatrix:
    """Symmetric Omega = [[t1, t2], [t2, t3]] with error balls."""

    t1: Ball
    t2: Ball
    t3: Ball

    @classmethod
    def from_values(cls, t1, t2, t3) -> "PeriodMatrix":
        return cls(*(v if isinstance(v, Ball) else Ball.exact(v) for v in (t1, t2, t3)))

    def matrix(self):
        return ((self.t1, self.t2), (self.t2, self.t3))

    def humbert_residual(self) -> Ball:
        return self.t1 - self.t2 - self.t3

    def imag_eigen_lower(self) -> mp.mpf:
        """Lower bound on the smallest eigenvalue of Im Omega."""
        a, b, c = self.t1.mid.imag, self.t2.mid.imag, self.t3.mid.imag
        r = max(self.t1.rad, self.t2.rad, self.t3.rad)
        lam = (a + c) / 2 - mp.sqrt(((a - c) / 2) ** 2 + b * b)
        return lam - 2 * r

    def is_positive(self) -> bool:
        return self.t1.mid.imag - self.t1.rad > 0 and self.imag_eigen_lower() > 0

    def max_rad(self) -> mp.mpf:
        return max(self.t1.rad, self.t2.rad, self.t3.rad)


@dataclass(frozen=True)
class HilbertPoint:
    z1: Ball
    z2: Ball

    @classmethod
    def from_values(cls, z1, z2) -> "HilbertPoint":
        return cls(*(v if isinstance(v, Ball) else Ball.exact(v) for v in (z1, z2)))

    def swapped(self) -> "HilbertPoint":
        return HilbertPoint(self.z2, self.z1)


def lattice_vectors(basis: Sequence[QuartElem], prec: int) -> list:
    """The vectors u(x) = (x^id, x^sigma) for each basis element."""
    return [embedding_pair(x, prec) for x in basis]


def change_basis(vectors: Sequence, U, prec: int = 128) -> list:
    """Columns l_k = sum_j U[j][k] u_j."""
    with mp.workprec(prec + 24):
        return [_column(vectors, U, k) for k in range(4)]


def _column(vectors, U, k):
    c0, c1 = Ball(0), Ball(0)
    for j in range(4):
        if U[j][k]:
            c0 = c0 + vectors[j][0] * U[j][k]
            c1 = c1 + vectors[j][1] * U[j][k]
    return (c0, c1)


def _symmetrize(X, tol) -> PeriodMatrix:
    off = X[0][1] - X[1][0]
    if off.abs_lower() > tol:
        raise PeriodMatrixError(
            f"period matrix not symmetric (residual {mp.nstr(abs(off.mid), 5)}); basis is not symplectic")
    t2 = Ball((X[0][1].mid + X[1][0].mid) / 2,
              max(X[0][1].rad, X[1][0].rad) + abs(off.mid) / 2)
    return PeriodMatrix(X[0][0], t2, X[1][1])


def period_matrix(lattice: Sequence, prec: int = 128, tol=None) -> PeriodMatrix:
    """Omega = -M2^{-1} M1 for lattice columns (l1, l2 | l3, l4)."""
    tol = default_tol(prec) if tol is None else tol
    with mp.workprec(prec + 24):
        l1, l2, l3, l4 = lattice
        M1 = ((l1[0], l2[0]), (l1[1], l2[1]))
        M2 = ((l3[0], l4[0]), (l3[1], l4[1]))
        X = _m2_mul(_m2_inv(M2), M1)
        X = tuple(tuple(-v for v in row) for row in X)
        Om = _symmetrize(X, tol)
    if not Om.is_positive():
        raise PeriodMatrixError("Im(Omega) is not positive definite")
    return Om


def apply_sp4(Om: PeriodMatrix, g: Sp4Element, prec: int | None = None) -> PeriodMatrix:
    A, B, C, D = (_balls(X) for X in g.blocks)
    wp = (prec or mp.mp.prec) + 24
    with mp.workprec(wp):
        O = Om.matrix()
        num = _m2_add(_m2_mul(A, O), B)
        den = _m2_add(_m2_mul(C, O), D)
        X = _m2_mul(num, _m2_inv(den))
        tol = max(mp.ldexp(Om.max_rad(), 12), default_tol(prec) if prec else mp.mpf(0))
        return _symmetrize(X, tol)


def mu5(z: HilbertPoint, prec: int | None = None) -> PeriodMatrix:
    """The modular embedding of H x H onto N5."""
    wp = (prec or mp.mp.prec) + 16
    with mp.workprec(wp):
        s5 = Ball.exact(mp.sqrt(5))
        k = (2 * s5).inverse()
        z1, z2 = z.z1, z.z2
        t1 = k * ((1 + s5) * z1 - (1 - s5) * z2)
        t2 = k * 2 * (z1 - z2)
        t3 = k * ((s5 - 1) * z1 + (1 + s5) * z2)
        return PeriodMatrix(t1, t2, t3)


def hilbert_from_N5(Om: PeriodMatrix, prec: int | None = None, tol=None) -> HilbertPoint:
    wp = (prec or mp.mp.prec) + 16
    tol = default_tol(prec or mp.mp.prec) if tol is None else tol
    with mp.workprec(wp):
        res = Om.humbert_residual()
    if res.abs_lower() > tol:
        raise NormalizationError(f"Omega is not on N5 (residual {mp.nstr(abs(res.mid), 5)})",
                                 abs(res.mid))
    with mp.workprec(wp):
        s5 = Ball.exact(mp.sqrt(5))
        z1 = (Om.t2 + s5 * Om.t2 + 2 * Om.t3) / 2
        z2 = (Om.t2 - s5 * Om.t2 + 2 * Om.t3) / 2
    if z1.mid.imag - z1.rad <= 0 or z2.mid.imag - z2.rad <= 0:
        raise NormalizationError("Hilbert point is not in H x H")
    return HilbertPoint(z1, z2)


# --------------------------------------------------------------------------
# singular relations and the search for gamma
# --------------------------------------------------------------------------

def relation_to_skew(rel):
    a, b, c, d, e = rel
    N = [[0] * 4 for _ in range(4)]
    N[0][1], N[1][0] = -d, d
    N[2][3], N[3][2] = e, -e
    N[0][3], N[3][0] = a, -a
    N[1][3], N[3][1] = b, -b
    N[1][2], N[2][1] = -c, c
    return N


def skew_to_relation(N):
    return (N[0][3], N[1][3] - N[0][2], -N[1][2], -N[0][1], N[2][3])


def relation_value(rel, Om: PeriodMatrix) -> Ball:
    a, b, c, d, e = rel
    return (Om.t1 * a + Om.t2 * b + Om.t3 * c
            + (Om.t2 * Om.t2 - Om.t1 * Om.t3) * d + Ball(e))


def relation_discriminant(rel) -> int:
    a, b, c, d, e = rel
    return b * b - 4 * a * c - 4 * d * e


def transform_relation(rel, g: Sp4Element) -> tuple:
    """Relation satisfied by g.Omega, given one satisfied by Omega."""
    gi = g.inverse().m
    N = relation_to_skew(rel)
    N2 = _matmul(_matmul(_transpose(gi), N), gi)
    return skew_to_relation(N2)


def _normalize_sign(rel):
    for v in rel:
        if v:
            return rel if v > 0 else tuple(-x for x in rel)
    return rel


def singular_relation(Om: PeriodMatrix, prec: int) -> tuple:
    """Integer (a, b, c, d, e) with a t1 + b t2 + c t3 + d (t2^2 - t1 t3) + e = 0."""
    with mp.workprec(prec + 32):
        t1, t2, t3 = Om.t1.mid, Om.t2.mid, Om.t3.mid
        vals = [t1, t2, t3, t2 * t2 - t1 * t3, mp.mpf(1)]
    bits = max(32, int(-mp.log(max(Om.max_rad(), mp.ldexp(1, -prec)), 2)) - 16)
    tol = default_tol(prec)
    for cand in integer_relations(vals, bits, use_imag=True)[:3]:
        if not any(cand):
            continue
        cand = tuple(cand)
        with mp.workprec(prec + 32):
            r = relation_value(cand, Om)
            scale = sum(abs(x) for x in cand) * max(1, abs(t1), abs(t3)) ** 2
        if abs(r.mid) <= tol * scale and relation_discriminant(cand) > 0:
            return _normalize_sign(cand)
    raise NormalizationError("no singular relation found for Omega")


def _sym_translation(b11, b12, b22):
    return Sp4Element.from_blocks(((1, 0), (0, 1)), ((b11, b12), (b12, b22)),
                                  ((0, 0), (0, 0)), ((1, 0), (0, 1)))


def _rotation(U):
    det = U[0][0] * U[1][1] - U[0][1] * U[1][0]
    inv_t = ((U[1][1] * det, -U[1][0] * det), (-U[0][1] * det, U[0][0] * det))
    return Sp4Element.from_blocks(U, ((0, 0), (0, 0)), ((0, 0), (0, 0)), inv_t)


def generators() -> list:
    """Fixed, ordered generating set of Sp(4, Z) used by the search."""
    gens = []
    for b in [(1, 0, 0), (-1, 0, 0), (0, 0, 1), (0, 0, -1), (0, 1, 0), (0, -1, 0)]:
        gens.append(_sym_translation(*b))
    for U in [((0, 1), (1, 0)), ((1, 1), (0, 1)), ((1, -1), (0, 1)),
              ((1, 0), (1, 1)), ((1, 0), (-1, 1)), ((-1, 0), (0, 1))]:
        gens.append(_rotation(U))
    gens.append(Sp4Element.from_flat([0, 0, 1, 0, 0, 0, 0, 1, -1, 0, 0, 0, 0, -1, 0, 0]))
    gens.append(Sp4Element.from_flat([0, 0, -1, 0, 0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1]))
    return gens


def _height(rel) -> int:
    return sum(abs(x) for x in rel)


def search_gamma(rel, depth: int = 8, max_nodes: int = 200_000, target=N5_RELATION):
    """Word in the generators carrying the relation to +-target.

    Best-first over words of length <= depth, ordered by relation height
    and then word length; ties are broken by generator order, so the
    result is deterministic.
    """
    target = _normalize_sign(tuple(target))
    start = _normalize_sign(tuple(rel))
    if relation_discriminant(start) != relation_discriminant(target):
        raise NormalizationError(
            f"relation {start} has discriminant {relation_discriminant(start)}, "
            f"cannot reach {target}")
    gens = generators()
    counter = itertools.count()
    heap = [(_height(start), 0, next(counter), start, Sp4Element.identity())]
    seen = {start: 0}
    while heap:
        h, dep, _, r, g = heapq.heappop(heap)
        if r == target:
            return g
        if dep >= depth:
            continue
        for gen in gens:
            r2 = _normalize_sign(transform_relation(r, gen))
            if seen.get(r2, depth + 1) <= dep + 1:
                continue
            seen[r2] = dep + 1
            if len(seen) > max_nodes:
                raise NormalizationError("search budget exhausted")
            heapq.heappush(heap, (_height(r2), dep + 1, next(counter), r2, gen @ g))
    raise NormalizationError(f"no word of length <= {depth} reaches N5")


def normalize_to_N5(Om: PeriodMatrix, depth: int = 8, gamma: Sp4Element | None = None,
                    prec: int = 128, tol=None, max_nodes: int = 200_000):
    """Return (gamma.Omega, gamma) with gamma.Omega on N5.

    A caller-supplied gamma is only verified.  Otherwise the integral
    singular relation of Omega is found by lattice reduction and a word in
    the fixed generators is searched that maps it to tau1 - tau2 - tau3.
    """
    tol = default_tol(prec) if tol is None else tol
    if gamma is not None:
        out = apply_sp4(Om, gamma, prec)
        res = out_res(out, prec)
        if res > tol:
            raise NormalizationError(
                f"supplied gamma does not reach N5 (residual {mp.nstr(res, 5)})", res)
        return out, gamma
    if out_res(Om, prec) <= tol:
        return Om, Sp4Element.identity()
    try:
        rel = singular_relation(Om, prec)
        log.debug("singular relation %s", rel)
        g = search_gamma(rel, depth=depth, max_nodes=max_nodes)
    except NormalizationError as exc:
        raise NormalizationError(str(exc), out_res(Om, prec)) from None
    out = apply_sp4(Om, g, prec)
    res = out_res(out, prec)
    if res > tol:
        raise NormalizationError(f"search result misses N5 (residual {mp.nstr(res, 5)})", res)
    return out, g


def out_res(Om: PeriodMatrix, prec: int) -> mp.mpf:
    """|tau1 - tau2 - tau3| evaluated at the working precision of the caller."""
    with mp.workprec(prec + 24):
        return abs(Om.humbert_residual().mid)
