"""Igusa-Clebsch invariants of binary sextics and related coordinate maps.

Invariants of y^2 = u0 (x - x1) ... (x - x6) are orbit sums of root
differences (ij) = x_i - x_j.  The arithmetic is generic: exact for
ints/Fractions, numeric for mpmath numbers or :class:`Ball` values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

import mpmath as mp

__all__ = [
    "InvariantError",
    "SexticCurve",
    "IgusaClebsch",
    "IgusaJ",
    "AbsoluteInvariants",
    "CDPoint",
    "orbit_patterns",
    "igusa_clebsch",
    "invariants_chain",
    "cd_from_i",
    "i_from_cd",
    "psi5",
    "psi5_raw",
    "weighted_equal",
]


class InvariantError(ValueError):
    pass


def _exact(x):
    return Fraction(x) if isinstance(x, int) else x


def _q(num: int, den: int, like):
    """The rational num/den in the arithmetic of ``like``."""
    if isinstance(like, Fraction):
        return Fraction(num, den)
    return mpf_ratio(num, den)


def mpf_ratio(num, den):
    return mp.mpf(num) / den


def _sum(items):
    items = list(items)
    return reduce(lambda a, b: a + b, items[1:], items[0])


def _prod(items):
    items = list(items)
    return reduce(lambda a, b: a * b, items[1:], items[0])


def _tuple_values(obj):
    return tuple(getattr(obj, f.name) for f in fields(obj))


@dataclass(frozen=True)
class SexticCurve:
    u0: object
    roots: tuple

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        if len(self.roots) != 6:
            raise InvariantError(f"a sextic needs six roots, got {len(self.roots)}")

    def mobius(self, a, b, c, d) -> "SexticCurve":
        """Image under x -> (a x + b)/(c x + d), with u0 adjusted so invariants scale by det."""
        if a * d - b * c == 0:
            raise InvariantError("degenerate Moebius map")
        dens = [c * _exact(x) + d for x in self.roots]
        if any(den == 0 for den in dens):
            raise InvariantError("a root is sent to infinity")
        roots = tuple((a * _exact(x) + b) / den for x, den in zip(self.roots, dens))
        return SexticCurve(_exact(self.u0) * _prod(dens), roots)


@dataclass(frozen=True)
class IgusaClebsch:
    I2: object
    I4: object
    I6: object
    I10: object

    weights = (1, 2, 3, 5)

    def as_tuple(self):
        return _tuple_values(self)


@dataclass(frozen=True)
class IgusaJ:
    J2: object
    J4: object
    J6: object
    J10: object

    def as_tuple(self):
        return _tuple_values(self)


@dataclass(frozen=True)
class AbsoluteInvariants:
    m1: object
    m2: object
    m3: object

    def as_tuple(self):
        return _tuple_values(self)


@dataclass(frozen=True)
class CDPoint:
    alpha: object
    beta: object
    gamma: object
    delta: object

    weights = (2, 3, 5, 6)

    def as_tuple(self):
        return _tuple_values(self)


_MONOMIALS = {
    "I2": ((1, 2), (3, 4), (5, 6)),
    "I4": ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4)),
    "I6": ((1, 2), (2, 3), (3, 1), (4, 5), (5, 6), (6, 4), (1, 4), (2, 5), (3, 6)),
}


@lru_cache(maxsize=None)
def orbit_patterns(name: str) -> tuple:
    """Distinct edge sets in the S6-orbit of the named monomial (0-based indices)."""
    edges = [(i - 1, j - 1) for i, j in _MONOMIALS[name]]
    seen = set()
    for perm in itertools.permutations(range(6)):
        seen.add(frozenset(frozenset((perm[i], perm[j])) for i, j in edges))
    return tuple(sorted(tuple(sorted(tuple(sorted(e)) for e in pat)) for pat in seen))


def igusa_clebsch(curve: SexticCurve) -> IgusaClebsch:
    x = [_exact(r) for r in curve.roots]
    d2 = {}
    for i in range(6):
        for j in range(i + 1, 6):
            diff = x[i] - x[j]
            d2[(i, j)] = diff * diff

    def orbit_sum(name):
        return _sum(_prod(d2[e] for e in pat) for pat in orbit_patterns(name))

    u = _exact(curve.u0)
    u2 = u * u
    return IgusaClebsch(
        u2 * orbit_sum("I2"),
        u2 * u2 * orbit_sum("I4"),
        u2 * u2 * u2 * orbit_sum("I6"),
        (u2 * u2) ** 2 * u2 * _prod(d2.values()),
    )


def invariants_chain(I: IgusaClebsch):
    """Igusa's J-invariants and the absolute invariants m1, m2, m3."""
    I2, I4, I6, I10 = (_exact(v) for v in I.as_tuple())
    J2 = I2 * _q(1, 8, I2)
    J10 = I10 * _q(1, 4096, I10)
    J4 = (4 * J2 * J2 - I4) * _q(1, 96, J2)
    J6 = (8 * J2 ** 3 - 160 * J2 * J4 - I6) * _q(1, 576, J2)
    if J10 == 0:
        raise InvariantError("J10 = 0: absolute invariants undefined (not a curve)")
    m1 = J2 ** 5 / J10
    m2 = J2 ** 3 * J4 / J10
    m3 = J2 ** 2 * J6 / J10
    return IgusaJ(J2, J4, J6, J10), AbsoluteInvariants(m1, m2, m3)


def cd_from_i(I: IgusaClebsch) -> CDPoint:
    I2, I4, I6, I10 = (_exact(v) for v in I.as_tuple())
    return CDPoint(
        I4 * _q(1, 9, I4),
        (-I2 * I4 + 3 * I6) * _q(1, 27, I4),
        8 * I10,
        I2 * I10 * _q(2, 3, I10),
    )


def i_from_cd(P: CDPoint) -> IgusaClebsch:
    alpha, beta, gamma, delta = (_exact(v) for v in P.as_tuple())
    if gamma == 0:
        raise InvariantError("gamma = 0: no Igusa-Clebsch preimage")
    I4 = 9 * alpha
    I10 = gamma * _q(1, 8, gamma)
    I2 = 12 * delta / gamma
    I6 = 9 * beta + I2 * I4 * _q(1, 3, I4)
    return IgusaClebsch(I2, I4, I6, I10)


def psi5_raw(A, B, C) -> CDPoint:
    """The four weighted polynomials of the Humbert embedding, unconditionally."""
    A, B, C = _exact(A), _exact(B), _exact(C)
    return CDPoint(
        A * A * _q(25, 36, A),
        (B * _q(5, 4, B) - A ** 3 * _q(125, 108, A)) * _q(1, 2, A),
        C * _q(1, 32, C),
        B * B * _q(25, 64, B) - A * C * _q(5, 96, A),
    )


def psi5(P) -> CDPoint:
    """Image of (A : B : C) in the Clingher-Doran coordinates.

    ``P`` is an IcosahedralPoint-like object with fields A, B, C or a
    3-tuple.  The point (1 : 0 : 0) is excluded (it lands on gamma =
    delta = 0).
    """
    A, B, C = (P.A, P.B, P.C) if hasattr(P, "A") else tuple(P)
    if B == 0 and C == 0:
        raise InvariantError("(1 : 0 : 0) is outside the domain of psi5")
    return psi5_raw(A, B, C)


def weighted_equal(p: Sequence, q: Sequence, weights: Sequence[int]) -> bool:
    """Exact test that p and q define the same point of weighted projective space."""
    if len(p) != len(q) or len(p) != len(weights):
        raise ValueError("length mismatch")
    for x, y in zip(p, q):
        if (x == 0) != (y == 0):
            return False
    for (x1, y1, w1), (x2, y2, w2) in itertools.combinations(zip(p, q, weights), 2):
        if x1 ** w2 * y2 ** w1 != y1 ** w2 * x2 ** w1:
            return False
    return any(x != 0 for x in p)
