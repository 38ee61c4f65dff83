"""Explicit K3 and Kummer surface equations over exact rationals.

Equations are returned as sparse polynomials P with the surface given by
P = 0.  Variable order is (x, y, z) for S, (u, v, y) for K and (x, y, t)
for the Clingher-Doran family CD.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

__all__ = ["SparsePoly", "emit_equation", "scaling_check", "VARIABLES", "ARITY"]

VARIABLES = {"S": ("x", "y", "z"), "K": ("u", "v", "y"), "CD": ("x", "y", "t")}
ARITY = {"S": 3, "K": 2, "CD": 4}


@dataclass(frozen=True)
class SparsePoly:
    """Polynomial as {exponent tuple: nonzero Fraction}."""

    variables: tuple
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            c = Fraction(c)
            if len(e) != len(self.variables):
                raise ValueError("exponent length does not match variables")
            if c:
                clean[tuple(e)] = c
        object.__setattr__(self, "terms", clean)

    @classmethod
    def const(cls, variables, c) -> "SparsePoly":
        return cls(tuple(variables), {(0,) * len(variables): c})

    @classmethod
    def var(cls, variables, name: str) -> "SparsePoly":
        e = tuple(int(v == name) for v in variables)
        return cls(tuple(variables), {e: 1})

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.variables != self.variables:
                raise ValueError("variable sets differ")
            return other
        return SparsePoly.const(self.variables, other)

    def __add__(self, other):
        o = self._lift(other)
        t = dict(self.terms)
        for e, c in o.terms.items():
            t[e] = t.get(e, 0) + c
        return SparsePoly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return SparsePoly(self.variables, t)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = SparsePoly.const(self.variables, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, SparsePoly) and self.variables == other.variables \
            and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def scale_variables(self, factors: Sequence) -> "SparsePoly":
        """Substitute v_i -> f_i * v_i."""
        t = {}
        for e, c in self.terms.items():
            m = Fraction(c)
            for f, k in zip(factors, e):
                m *= Fraction(f) ** k
            t[e] = m
        return SparsePoly(self.variables, t)

    def _sorted_terms(self):
        # total degree descending, then lexicographic
        return sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), tuple(-k for k in kv[0])))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self._sorted_terms():
            mon = "*".join(v if k == 1 else f"{v}^{k}" for v, k in zip(self.variables, e) if k)
            mag = abs(c)
            if mon:
                body = mon if mag == 1 else f"{mag}*{mon}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> dict:
        return {
            "variables": list(self.variables),
            "terms": [{"exponents": list(e), "coefficient": str(c)} for e, c in self._sorted_terms()],
        }

    def __str__(self):
        return self.to_text()


def emit_equation(kind: str, params: Sequence) -> SparsePoly:
    """Defining polynomial of S(A:B:C), K(X,Y) or S_CD(alpha:beta:gamma:delta)."""
    kind = kind.upper()
    if kind not in VARIABLES:
        raise ValueError(f"unknown surface kind {kind!r}; expected S, K or CD")
    params = [Fraction(p) for p in params]
    if len(params) != ARITY[kind]:
        raise ValueError(f"{kind} takes {ARITY[kind]} parameters, got {len(params)}")
    vs = VARIABLES[kind]
    V = {n: SparsePoly.var(vs, n) for n in vs}
    if kind == "S":
        A, B, C = params
        x, y, z = V["x"], V["y"], V["z"]
        return z ** 2 - x ** 3 + 4 * (4 * y ** 3 - 5 * A * y ** 2) * x ** 2 - 20 * B * y ** 3 * x - C * y ** 4
    if kind == "K":
        X, Y = params
        u, v, y = V["u"], V["v"], V["y"]
        return v ** 2 - (u ** 2 - 2 * y ** 5) * (u - (5 * y ** 2 - 10 * X * y + Y))
    alpha, beta, gamma, delta = params
    x, y, t = V["x"], V["y"], V["t"]
    return (y ** 2 - x ** 3 + (3 * alpha * t ** 4 + gamma * t ** 5) * x
            - t ** 5 + 2 * beta * t ** 6 - delta * t ** 7)


def scaling_check(point: Sequence, kappa) -> SparsePoly:
    """S(k^2 A, k^6 B, k^10 C)(k^6 x, k^2 y, k^9 z) - k^18 S(A, B, C)(x, y, z); zero identically."""
    k = Fraction(kappa)
    if k == 0:
        raise ValueError("kappa must be non-zero")
    A, B, C = (Fraction(p) for p in point)
    scaled = emit_equation("S", (k ** 2 * A, k ** 6 * B, k ** 10 * C)).scale_variables((k ** 6, k ** 2, k ** 9))
    return scaled - k ** 18 * emit_equation("S", (A, B, C))


def render(poly: SparsePoly, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(poly.to_json(), indent=2)
    return poly.to_text() + " = 0"
