"""Recognize numerical values as algebraic numbers by lattice reduction.

For each degree d = 1, 2, ... the rows [e_i | N Re v^i | N Im v^i]
(i = 0..d) are LLL-reduced; a short vector whose coefficient part has
small height and evaluates to almost zero at v is an integer polynomial
vanishing at v.  Spurious vectors have height about N^(1/(d+1)), so the
height bound sits a safety margin below that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import reduce
from typing import Sequence

import mpmath as mp

from .ball import Ball
from .lll import integer_relations

__all__ = [
    "NotRecognized",
    "InsufficientPrecision",
    "RecognitionRequest",
    "CandidatePoly",
    "min_poly",
    "verify_poly",
    "poly_eval",
]

MARGIN_BITS = 48


class NotRecognized(LookupError):
    """No polynomial within the degree and height bounds vanishes at the value."""


class InsufficientPrecision(ValueError):
    pass


@dataclass(frozen=True)
class RecognitionRequest:
    value: object
    max_degree: int = 8
    height_bound: int | None = None
    prec: int = 128
    expect_real: bool = False

    def __post_init__(self):
        if self.max_degree < 1:
            raise ValueError("max_degree must be at least 1")
        if self.prec < 53:
            raise ValueError("precision must be at least 53 bits")
        if self.height_bound is not None:
            need = (self.max_degree + 1) * math.log2(max(2, self.height_bound)) + MARGIN_BITS
            if self.prec < need:
                raise InsufficientPrecision(
                    f"{self.prec} bits cannot separate degree-{self.max_degree} relations of "
                    f"height {self.height_bound}; need about {math.ceil(need)} bits")


@dataclass(frozen=True)
class CandidatePoly:
    """Integer polynomial c0 + c1 x + ... + cd x^d."""

    coeffs: tuple
    residual: mp.mpf
    verified: bool = False
    verify_residual: mp.mpf | None = None
    verify_prec: int | None = None

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def height(self) -> int:
        return max(abs(c) for c in self.coeffs)

    def root_rational(self):
        """The root as a Fraction when the polynomial is linear."""
        if self.degree != 1:
            raise ValueError("not a degree-1 polynomial")
        return Fraction(-self.coeffs[0], self.coeffs[1])

    def __str__(self):
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mon = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            mag = abs(c)
            body = mon if (mag == 1 and mon) else (f"{mag}*{mon}" if mon else str(mag))
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        text = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return text + "".join(f" {s} {b}" for s, b in terms[1:])


def _normalize(coeffs: Sequence[int]) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    if not c:
        return ()
    g = reduce(math.gcd, c)
    c = [x // g for x in c]
    if c[-1] < 0:
        c = [-x for x in c]
    return tuple(c)


def _mid(value):
    if isinstance(value, Ball):
        return value.mid
    return mp.mpc(value)


def poly_eval(coeffs, v):
    acc = mp.mpc(0)
    for c in reversed(coeffs):
        acc = acc * v + c
    return acc


def _scale(coeffs, v) -> mp.mpf:
    a = abs(v)
    return sum(abs(c) * a ** i for i, c in enumerate(coeffs)) or mp.mpf(1)


def _accuracy_bits(value, prec: int) -> int:
    if isinstance(value, Ball) and value.rad > 0 and value.mid != 0:
        return min(prec, int(-mp.log(value.rad / abs(value.mid), 2)))
    return prec


def min_poly(req: RecognitionRequest) -> CandidatePoly:
    """Lowest-degree primitive integer polynomial vanishing at the value."""
    acc = _accuracy_bits(req.value, req.prec)
    with mp.workprec(req.prec + 32):
        v = _mid(req.value)
        if req.expect_real:
            if abs(v.imag) > mp.ldexp(max(1, abs(v)), -acc // 2):
                raise NotRecognized(f"value has imaginary part {mp.nstr(v.imag, 5)}, expected real")
            v = mp.mpc(v.real)
        use_imag = not req.expect_real and v.imag != 0
        tol = mp.ldexp(1, -(acc // 2))
        for d in range(1, req.max_degree + 1):
            bits = max(16, acc - 8 - int(d * max(0, mp.log(max(abs(v), 1), 2))))
            bound = 2 ** max(1, (bits - MARGIN_BITS) // (d + 1))
            if req.height_bound is not None:
                bound = min(bound, req.height_bound)
            powers = [v ** i for i in range(d + 1)]
            for cand in integer_relations(powers, bits, use_imag=use_imag)[:2]:
                c = _normalize(cand)
                if len(c) < 2 or max(abs(x) for x in c) > bound:
                    continue
                res = abs(poly_eval(c, v))
                if res <= tol * _scale(c, v):
                    return CandidatePoly(c, res)
    raise NotRecognized(f"no polynomial of degree <= {req.max_degree} within the height bound")


def verify_poly(p: CandidatePoly, value, prec2: int, prec: int | None = None) -> CandidatePoly:
    """Re-evaluate p at a value recomputed at prec2 bits; set the verified flag."""
    if prec is not None and prec2 < 2 * prec:
        raise ValueError("verification precision must be at least twice the original")
    with mp.workprec(prec2 + 32):
        v = _mid(value)
        res = abs(poly_eval(p.coeffs, v))
        ok = res < mp.ldexp(_scale(p.coeffs, v), -(prec2 // 2))
    return replace(p, verified=bool(ok), verify_residual=res, verify_prec=prec2)
