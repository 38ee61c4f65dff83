"""Galois structure of the class field K(X, Y)/K from the class group of K.

The class group is supplied by the caller as
(Z/2)^{r_1} + (Z/4)^{r_2} + ... + G_1 with G_1 of odd order.  Each Z/2^j
factor contributes Z/2^{j-1} to the Galois group, and the odd part is
carried over unchanged, so the degree is h / 2^r with r = r_1 + r_2 + ...
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = ["ShapeError", "ClassGroupShape", "GaloisResult", "galois_structure", "lemma_quantities"]


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class ClassGroupShape:
    """two_part[j-1] = r_j, the number of Z/2^j factors; odd_part = cyclic orders of G_1."""

    two_part: tuple = ()
    odd_part: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "two_part", tuple(int(r) for r in self.two_part))
        object.__setattr__(self, "odd_part", tuple(int(n) for n in self.odd_part))
        if any(r < 0 for r in self.two_part):
            raise ShapeError("multiplicities r_j must be non-negative")
        for n in self.odd_part:
            if n < 1 or n % 2 == 0:
                raise ShapeError(f"odd part contains {n}, which is not a positive odd order")

    @classmethod
    def from_dict(cls, d: dict) -> "ClassGroupShape":
        return cls(tuple(d.get("two_part", ())), tuple(d.get("odd_part", ())))

    @classmethod
    def from_cyclic(cls, orders: Sequence[int]) -> "ClassGroupShape":
        """Build from a list of cyclic factor orders, e.g. [2, 5] for Z/2 + Z/5."""
        two, odd = [], []
        for n in orders:
            n = int(n)
            if n < 1:
                raise ShapeError("cyclic orders must be positive")
            e = (n & -n).bit_length() - 1
            if e:
                while len(two) < e:
                    two.append(0)
                two[e - 1] += 1
            if n >> e > 1:
                odd.append(n >> e)
        return cls(tuple(two), tuple(odd))

    @property
    def r(self) -> int:
        return sum(self.two_part)

    @property
    def order(self) -> int:
        return 2 ** sum(j * r for j, r in enumerate(self.two_part, start=1)) * math.prod(self.odd_part)

    def cyclic_orders(self) -> list:
        out = []
        for j, r in enumerate(self.two_part, start=1):
            out += [2 ** j] * r
        return out + list(self.odd_part)


@dataclass(frozen=True)
class GaloisResult:
    structure: tuple
    degree: int


def galois_structure(shape: ClassGroupShape) -> GaloisResult:
    """Galois group of K(X, Y)/K, assuming the conditions that make h_{K0} = 1 etc. hold."""
    if not isinstance(shape, ClassGroupShape):
        raise ShapeError("expected a ClassGroupShape")
    quotient = []
    for j, r in enumerate(shape.two_part, start=1):
        if j > 1:
            quotient += [2 ** (j - 1)] * r
    quotient += list(shape.odd_part)
    quotient = tuple(n for n in quotient if n > 1)
    degree = math.prod(quotient)
    assert degree * 2 ** shape.r == shape.order
    return GaloisResult(quotient, degree)


def lemma_quantities(shape: ClassGroupShape) -> dict:
    """Index data of the ideal groups: epsilon = beta = eta = 0 and gamma = r."""
    r = shape.r
    return {"epsilon": 0, "beta": 0, "eta": 0, "gamma": r, "r": r, "index_I_over_P": 2 ** r}
