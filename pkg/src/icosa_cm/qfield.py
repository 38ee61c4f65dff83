"""Exact arithmetic in Q(sqrt(D)) and in cyclic quartic fields.

The quartic field is K = Q(alpha) with alpha = sqrt(A(D + B sqrt(D))),
D = B^2 + C^2.  Elements are stored in the Q-basis {1, sqrt(D), alpha, beta}
where beta = sqrt(A(D - B sqrt(D))).  The fixed complex embedding puts
alpha and beta on the positive imaginary axis when A < 0, which forces

    alpha * beta = A*C*sqrt(D),   sqrt(D)*alpha = B*alpha + C*beta,
    sqrt(D)*beta = C*alpha - B*beta.

The generator sigma of Gal(K/Q) acts by sqrt(D) -> -sqrt(D),
alpha -> beta, beta -> -alpha; rho = sigma^2 is complex conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable

import mpmath as mp

from .ball import Ball, eps

__all__ = [
    "FieldMismatchError",
    "QuadElem",
    "QuartElem",
    "Embedding",
    "quart_mul",
    "galois_apply",
    "trace",
    "embed",
]

Rat = Fraction


class FieldMismatchError(ValueError):
    pass


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to an exact rational")


@dataclass(frozen=True)
class QuadElem:
    """x + y*sqrt(delta) with rational x, y."""

    x: Fraction
    y: Fraction
    delta: int

    def __post_init__(self):
        object.__setattr__(self, "x", _rat(self.x))
        object.__setattr__(self, "y", _rat(self.y))

    def _check(self, other: "QuadElem"):
        if self.delta != other.delta:
            raise FieldMismatchError("elements of different quadratic fields")

    def _lift(self, other) -> "QuadElem":
        if isinstance(other, QuadElem):
            self._check(other)
            return other
        return QuadElem(_rat(other), Fraction(0), self.delta)

    def __add__(self, other):
        o = self._lift(other)
        return QuadElem(self.x + o.x, self.y + o.y, self.delta)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.x, -self.y, self.delta)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        d = self.delta
        return QuadElem(self.x * o.x + d * self.y * o.y, self.x * o.y + self.y * o.x, d)

    __rmul__ = __mul__

    def conj(self) -> "QuadElem":
        return QuadElem(self.x, -self.y, self.delta)

    def norm(self) -> Fraction:
        return self.x * self.x - self.delta * self.y * self.y

    def trace(self) -> Fraction:
        return 2 * self.x

    def __truediv__(self, other):
        o = self._lift(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        p = self * o.conj()
        return QuadElem(p.x / n, p.y / n, self.delta)

    def is_totally_positive(self) -> bool:
        # x + y sqrt(d) > 0 and x - y sqrt(d) > 0  <=>  x > 0 and x^2 > d y^2
        return self.x > 0 and self.norm() > 0

    def to_mpf(self, sign: int = 1) -> mp.mpf:
        return mp.mpf(self.x.numerator) / self.x.denominator + sign * (
            mp.mpf(self.y.numerator) / self.y.denominator) * mp.sqrt(self.delta)


class Embedding(Enum):
    """Elements of Gal(K/Q) = <sigma>, labelled by their exponent."""

    ID = 0
    SIGMA = 1
    RHO = 2
    SIGMA3 = 3

    @classmethod
    def parse(cls, label) -> "Embedding":
        if isinstance(label, Embedding):
            return label
        table = {"id": cls.ID, "1": cls.ID, "sigma": cls.SIGMA, "σ": cls.SIGMA,
                 "rho": cls.RHO, "ρ": cls.RHO, "sigma2": cls.RHO,
                 "sigma3": cls.SIGMA3, "σ³": cls.SIGMA3, "σ3": cls.SIGMA3}
        if isinstance(label, int):
            return cls(label % 4)
        try:
            return table[str(label).lower()]
        except KeyError:
            raise ValueError(f"unknown Galois label {label!r}") from None

    def __mul__(self, other: "Embedding") -> "Embedding":
        return Embedding((self.value + other.value) % 4)


@dataclass(frozen=True)
class QuartElem:
    """Element c0 + c1 sqrt(D) + c2 alpha + c3 beta of K.

    ``field`` is the tuple (A, B, C, D) of the defining data.
    """

    coords: tuple
    field: tuple

    def __post_init__(self):
        c = tuple(_rat(v) for v in self.coords)
        if len(c) != 4:
            raise ValueError("a quartic element needs four coordinates")
        object.__setattr__(self, "coords", c)
        f = tuple(int(v) for v in self.field)
        if len(f) != 4:
            raise ValueError("field data must be (A, B, C, D)")
        object.__setattr__(self, "field", f)

    @classmethod
    def from_field(cls, spec, c0=0, c1=0, c2=0, c3=0) -> "QuartElem":
        return cls((c0, c1, c2, c3), _field_tuple(spec))

    @classmethod
    def one(cls, spec) -> "QuartElem":
        return cls.from_field(spec, 1)

    @classmethod
    def sqrt_delta(cls, spec) -> "QuartElem":
        return cls.from_field(spec, 0, 1)

    @classmethod
    def alpha(cls, spec) -> "QuartElem":
        return cls.from_field(spec, 0, 0, 1)

    @classmethod
    def beta(cls, spec) -> "QuartElem":
        return cls.from_field(spec, 0, 0, 0, 1)

    def _lift(self, other) -> "QuartElem":
        if isinstance(other, QuartElem):
            if other.field != self.field:
                raise FieldMismatchError(f"fields {self.field} and {other.field} differ")
            return other
        return QuartElem((_rat(other), 0, 0, 0), self.field)

    def __add__(self, other):
        o = self._lift(other)
        return QuartElem(tuple(a + b for a, b in zip(self.coords, o.coords)), self.field)

    __radd__ = __add__

    def __neg__(self):
        return QuartElem(tuple(-a for a in self.coords), self.field)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        return quart_mul(self, self._lift(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, QuartElem):
            raise TypeError("division by field elements is not supported; scale by a rational")
        r = _rat(other)
        return QuartElem(tuple(a / r for a in self.coords), self.field)

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def __repr__(self):
        names = ("", "√Δ", "α", "β")
        terms = [f"{c}{n}" if n else f"{c}" for c, n in zip(self.coords, names) if c]
        return "QuartElem(" + (" + ".join(terms) or "0") + f"; {self.field})"


def _field_tuple(spec) -> tuple:
    if isinstance(spec, tuple):
        return spec
    return (spec.A, spec.B, spec.C, spec.Delta)


def quart_mul(x: QuartElem, y: QuartElem) -> QuartElem:
    """Exact product in the {1, sqrt(D), alpha, beta} basis."""
    if x.field != y.field:
        raise FieldMismatchError(f"fields {x.field} and {y.field} differ")
    A, B, C, D = x.field
    x0, x1, x2, x3 = x.coords
    y0, y1, y2, y3 = y.coords
    # products of basis elements, as coordinate vectors
    # s*s = D; s*a = B a + C b; s*b = C a - B b
    # a*a = AD + AB s; b*b = AD - AB s; a*b = AC s
    c0 = x0 * y0 + D * x1 * y1 + A * D * (x2 * y2 + x3 * y3)
    c1 = x0 * y1 + x1 * y0 + A * B * (x2 * y2 - x3 * y3) + A * C * (x2 * y3 + x3 * y2)
    c2 = x0 * y2 + x2 * y0 + B * (x1 * y2 + x2 * y1) + C * (x1 * y3 + x3 * y1)
    c3 = x0 * y3 + x3 * y0 + C * (x1 * y2 + x2 * y1) - B * (x1 * y3 + x3 * y1)
    return QuartElem((c0, c1, c2, c3), x.field)


def _sigma(x: QuartElem) -> QuartElem:
    c0, c1, c2, c3 = x.coords
    # c2 alpha + c3 beta -> c2 beta - c3 alpha
    return QuartElem((c0, -c1, -c3, c2), x.field)


def galois_apply(x: QuartElem, g) -> QuartElem:
    g = Embedding.parse(g)
    for _ in range(g.value):
        x = _sigma(x)
    return x


def trace(x: QuartElem) -> Fraction:
    total = x
    y = x
    for _ in range(3):
        y = _sigma(y)
        total = total + y
    if total.coords[1:] != (0, 0, 0):
        raise ArithmeticError("Galois orbit sum is not rational")  # unreachable for valid data
    return total.coords[0]


def _radicals(field: tuple, wp: int):
    """sqrt(D) and the id-embedded values of alpha, beta at precision wp."""
    A, B, C, D = field
    with mp.workprec(wp):
        s = mp.sqrt(D)
        a = mp.sqrt(abs(A) * (D + B * s))
        b = mp.sqrt(abs(A) * (D - B * s))
        return s, mp.mpc(0, a), mp.mpc(0, b)


def embed(x: QuartElem, g="id", prec: int = 64) -> Ball:
    """Complex value of x under the embedding id∘g, as an error ball.

    The returned radius is at most 2^(1-prec) times the magnitude scale
    sum |c_i| |basis_i|.
    """
    if prec < 53:
        raise ValueError("precision must be at least 53 bits")
    A = x.field[0]
    if A >= 0:
        raise ValueError("embedding requires A < 0 (a CM field)")
    y = galois_apply(x, g)
    wp = prec + 16
    s, a, b = _radicals(x.field, wp)
    with mp.workprec(wp):
        parts = [mp.mpf(1), s, a, b]
        acc = mp.mpc(0)
        scale = mp.mpf(0)
        for c, p in zip(y.coords, parts):
            if c:
                cv = mp.mpf(c.numerator) / c.denominator
                acc += cv * p
                scale += abs(cv) * abs(p)
        return Ball(acc, 8 * scale * eps())


def embedding_pair(x: QuartElem, prec: int) -> tuple:
    """The CM-type vector u(x) = (x^id, x^sigma)."""
    return embed(x, Embedding.ID, prec), embed(x, Embedding.SIGMA, prec)


def basis_elements(spec) -> Iterable[QuartElem]:
    f = _field_tuple(spec)
    return [QuartElem.one(f), QuartElem.sqrt_delta(f), QuartElem.alpha(f), QuartElem.beta(f)]
