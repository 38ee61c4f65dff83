"""Complex midpoint-radius ("ball") numbers on top of mpmath.

A :class:`Ball` is a complex midpoint together with a non-negative real
radius such that the true value lies in the closed disc around the
midpoint.  Operations widen the radius conservatively: propagated input
error plus one rounding unit of the result at the precision in force
when the operation runs.  Callers set the working precision with
``mpmath.workprec``; the helpers here never change it.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import mpmath as mp

__all__ = ["Ball", "eps", "as_ball", "to_mpf"]


def eps() -> mp.mpf:
    """Unit roundoff bound for the current precision (a little generous)."""
    return mp.ldexp(mp.mpf(1), 2 - mp.mp.prec)


def to_mpf(x) -> mp.mpf:
    if isinstance(x, Fraction) or (isinstance(x, Rational) and not isinstance(x, int)):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def _abs_upper(x) -> mp.mpf:
    return abs(x) * (1 + eps())


class Ball:
    """Complex value ``mid`` with error radius ``rad``."""

    __slots__ = ("mid", "rad")

    def __init__(self, mid, rad=0):
        if isinstance(mid, Fraction):
            mid = to_mpf(mid)
        self.mid = mp.mpc(mid)
        rad = mp.mpf(rad)
        if rad < 0 or mp.isnan(rad):
            raise ValueError("ball radius must be non-negative")
        self.rad = rad

    # construction -------------------------------------------------------
    @classmethod
    def exact(cls, x) -> "Ball":
        """Ball around an exactly known number, charged one rounding unit."""
        if isinstance(x, int) and abs(x) < 2 ** (mp.mp.prec - 2):
            return cls(x, 0)
        if isinstance(x, Fraction) and x.denominator == 1 and abs(x) < 2 ** (mp.mp.prec - 2):
            return cls(int(x), 0)
        m = mp.mpc(to_mpf(x)) if isinstance(x, (Fraction, int)) else mp.mpc(x)
        return cls(m, abs(m) * eps())

    # accessors ----------------------------------------------------------
    @property
    def real(self) -> "Ball":
        return Ball(self.mid.real, self.rad)

    @property
    def imag(self) -> "Ball":
        return Ball(self.mid.imag, self.rad)

    def conjugate(self) -> "Ball":
        return Ball(mp.conj(self.mid), self.rad)

    def abs_upper(self) -> mp.mpf:
        return _abs_upper(self.mid) + self.rad

    def abs_lower(self) -> mp.mpf:
        lo = abs(self.mid) * (1 - eps()) - self.rad
        return lo if lo > 0 else mp.mpf(0)

    def contains(self, x, slack=0) -> bool:
        return abs(self.mid - mp.mpc(x)) <= self.rad + slack

    def overlaps(self, other: "Ball") -> bool:
        other = as_ball(other)
        return abs(self.mid - other.mid) <= self.rad + other.rad

    def rel_error(self) -> mp.mpf:
        a = abs(self.mid)
        return self.rad / a if a else mp.inf

    # arithmetic ---------------------------------------------------------
    def __neg__(self):
        return Ball(-self.mid, self.rad)

    def __pos__(self):
        return self

    def __add__(self, other):
        o = as_ball(other)
        m = self.mid + o.mid
        return Ball(m, self.rad + o.rad + abs(m) * eps())

    __radd__ = __add__

    def __sub__(self, other):
        o = as_ball(other)
        m = self.mid - o.mid
        return Ball(m, self.rad + o.rad + abs(m) * eps())

    def __rsub__(self, other):
        return as_ball(other) - self

    def __mul__(self, other):
        o = as_ball(other)
        m = self.mid * o.mid
        r = (_abs_upper(self.mid) * o.rad + _abs_upper(o.mid) * self.rad
             + self.rad * o.rad + abs(m) * eps())
        return Ball(m, r)

    __rmul__ = __mul__

    def inverse(self) -> "Ball":
        a = self.abs_lower()
        if a <= 0:
            raise ZeroDivisionError("ball contains zero")
        m = 1 / self.mid
        return Ball(m, self.rad / (abs(self.mid) * a) * (1 + eps()) + abs(m) * eps())

    def __truediv__(self, other):
        return self * as_ball(other).inverse()

    def __rtruediv__(self, other):
        return as_ball(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers of balls are supported")
        if n < 0:
            return (self ** -n).inverse()
        result = Ball(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self):
        return f"Ball({mp.nstr(self.mid, 20)} +/- {mp.nstr(self.rad, 3)})"


def as_ball(x) -> Ball:
    if isinstance(x, Ball):
        return x
    return Ball.exact(x)
