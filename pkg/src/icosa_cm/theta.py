"""Genus-2 theta constants and the symmetric Hilbert modular forms for Q(sqrt 5).

theta(Omega; a, b) = sum over g in Z^2 of
    exp(pi i ((g + a/2)^T Omega (g + a/2) + g^T b)).

All ten even characteristics are computed from four lattice sums, one
for each a in {0,1}^2; the b part only contributes a sign (-1)^(g.b), so
each sum is split by the parities of g.  The truncation box |g_i| <= R is
chosen from a lower bound on the smallest eigenvalue of Im(Omega).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp

from .ball import Ball
from .symplectic import HilbertPoint, PeriodMatrix, mu5

__all__ = [
    "ThetaChar",
    "CHAR_TABLE",
    "ThetaError",
    "PoleError",
    "FormValues",
    "IcosahedralPoint",
    "CanonicalPoint",
    "theta_const",
    "theta_all",
    "eval_forms",
    "eval_XY",
    "canonical_point",
    "klein_residual",
    "MAX_RADIUS",
]

MAX_RADIUS = 600


class ThetaError(ValueError):
    pass


class PoleError(ArithmeticError):
    """g2 vanishes (numerically) at the point, so X and Y have a pole."""


@dataclass(frozen=True)
class ThetaChar:
    a: tuple
    b: tuple

    def __post_init__(self):
        for v in (*self.a, *self.b):
            if v not in (0, 1):
                raise ThetaError("characteristic entries must be 0 or 1")
        if len(self.a) != 2 or len(self.b) != 2:
            raise ThetaError("characteristics are pairs")

    def is_even(self) -> bool:
        return (self.a[0] * self.b[0] + self.a[1] * self.b[1]) % 2 == 0


CHAR_TABLE = tuple(ThetaChar(a, b) for a, b in [
    ((0, 0), (0, 0)),
    ((1, 1), (0, 0)),
    ((0, 0), (1, 1)),
    ((1, 1), (1, 1)),
    ((0, 1), (0, 0)),
    ((1, 0), (0, 0)),
    ((0, 0), (0, 1)),
    ((1, 0), (0, 1)),
    ((0, 0), (1, 0)),
    ((0, 1), (1, 0)),
])


# --------------------------------------------------------------------------
# lattice sums
# --------------------------------------------------------------------------

def _tail_bound(lam: float, R: int) -> float:
    """Bound on the sum of |terms| outside the box |g_i| <= R, any characteristic."""
    T = R + 0.5
    x = math.pi * lam
    one_dim = 2 * math.exp(-x * T * T) / -math.expm1(-2 * x * T)
    full = 2 / -math.expm1(-x)
    return 2 * one_dim * full


def truncation_radius(Om: PeriodMatrix, prec: int, cap: int = MAX_RADIUS) -> int:
    lam = float(Om.imag_eigen_lower())
    if not lam > 0:
        raise ThetaError("Im(Omega) is not positive definite")
    # work with log2 to avoid underflow for large prec
    target = -(prec + 4)
    x = math.pi * lam
    R = max(1, int(math.sqrt((prec + 8) * math.log(2) / x)) - 1)
    while True:
        T = R + 0.5
        log2_tail = (1 - x * T * T / math.log(2)
                     - math.log2(-math.expm1(-2 * x * T)) + 1
                     + 1 - math.log2(-math.expm1(-x)))
        if log2_tail < target:
            break
        R += 1
        if R > cap:
            raise ThetaError(
                f"truncation radius exceeds cap {cap} (lambda_min(Im Omega) = {lam:.3g}); "
                "reduce Omega under Sp(4, Z) first")
    return R


def _class_sums(Om: PeriodMatrix, a: tuple, R: int, wp: int):
    """Partial sums S[p1][p2] over g with g_i = p_i mod 2, for characteristic a."""
    t1, t2, t3 = Om.t1.mid, Om.t2.mid, Om.t3.mid
    half = mp.mpf(1) / 2
    with mp.workprec(wp):
        pii = mp.pi * 1j
        rng = range(-R, R + 1)
        v1s = [g + a[0] * half for g in rng]
        v2s = [g + a[1] * half for g in rng]
        E1 = [mp.exp(pii * v * v * t1) for v in v1s]
        E3 = [mp.exp(pii * v * v * t3) for v in v2s]
        S = [[mp.mpc(0), mp.mpc(0)], [mp.mpc(0), mp.mpc(0)]]
        for j, v2 in enumerate(v2s):
            F = mp.exp(2 * pii * v2 * t2)
            P = mp.exp(2 * pii * v2 * v1s[0] * t2)
            row = [mp.mpc(0), mp.mpc(0)]
            for i in range(len(v1s)):
                row[(i - R) % 2] += E1[i] * P
                P *= F
            p2 = (j - R) % 2
            S[0][p2] += row[0] * E3[j]
            S[1][p2] += row[1] * E3[j]
    return S


def _abs_moments(Om: PeriodMatrix, a: tuple, R: int):
    """Float estimates of sum |term| and sum |v|^2 |term| over the box."""
    y1, y2, y3 = (float(Om.t1.mid.imag), float(Om.t2.mid.imag), float(Om.t3.mid.imag))
    m0 = m2 = 0.0
    for g1 in range(-R, R + 1):
        v1 = g1 + a[0] / 2
        for g2 in range(-R, R + 1):
            v2 = g2 + a[1] / 2
            t = math.exp(-math.pi * (v1 * v1 * y1 + 2 * v1 * v2 * y2 + v2 * v2 * y3))
            m0 += t
            m2 += (v1 * v1 + v2 * v2) * t
    return m0, m2


def _theta_from_sums(S, b):
    out = mp.mpc(0)
    for p1 in (0, 1):
        for p2 in (0, 1):
            sgn = -1 if (p1 * b[0] + p2 * b[1]) % 2 else 1
            out += sgn * S[p1][p2]
    return out


def _theta_batch(Om: PeriodMatrix, chars, prec: int, radius: int | None = None) -> list:
    if not Om.is_positive():
        raise ThetaError("Im(Omega) is not positive definite")
    for ch in chars:
        if not ch.is_even():
            raise ThetaError(f"odd characteristic a={ch.a}, b={ch.b}")
    R = truncation_radius(Om, prec) if radius is None else radius
    lam = float(Om.imag_eigen_lower())
    tail = _tail_bound(lam, R)
    size = max(abs(Om.t1.mid), abs(Om.t2.mid), abs(Om.t3.mid), 1)
    guard = 24 + (2 * R + 2).bit_length() + int(mp.log(size * (R + 1) ** 2 * 8, 2))
    wp = prec + guard
    rin = Om.max_rad()
    results = {}
    cache = {}
    for ch in chars:
        if ch.a not in cache:
            cache[ch.a] = (_class_sums(Om, ch.a, R, wp), _abs_moments(Om, ch.a, R))
        S, (m0, m2) = cache[ch.a]
        with mp.workprec(wp):
            val = _theta_from_sums(S, ch.b)
        # rounding: each term carries O(R + log size) relative rounding units
        rnd = mp.mpf(2 * m0 + 1) * (4 * R + 64 + size * (R + 1) ** 2) * mp.ldexp(1, -wp + 3)
        prop = 8 * mp.pi * rin * mp.mpf(2 * m2 + 1)
        # the ball's midpoint is rounded to the caller's precision
        out = mp.ldexp(abs(val), -mp.mp.prec + 1)
        results[ch] = Ball(val, mp.mpf(tail) + rnd + prop + out)
    return [results[ch] for ch in chars]


def theta_const(Om: PeriodMatrix, ch: ThetaChar | int, prec: int = 128,
                radius: int | None = None) -> Ball:
    """theta(Omega; a, b) with an error ball; ``ch`` may be an index into CHAR_TABLE."""
    if isinstance(ch, int):
        ch = CHAR_TABLE[ch]
    with mp.workprec(prec + 16):
        return _theta_batch(Om, [ch], prec, radius)[0]


def theta_all(Om: PeriodMatrix, prec: int = 128, radius: int | None = None) -> list:
    """The ten theta constants theta_0 .. theta_9 in table order."""
    with mp.workprec(prec + 16):
        return _theta_batch(Om, list(CHAR_TABLE), prec, radius)


# --------------------------------------------------------------------------
# modular forms
# --------------------------------------------------------------------------

# s15 = -2^-18 * sum of sign * th_p^9 * th_q^5 * th_r over these index pairs
_S15_TERMS = (
    "+07 18 24;-25 16 09;+58 03 46;-09 25 16;+09 16 25;-67 23 89;+18 24 07;-24 18 07;"
    "-46 03 58;-24 07 18;-89 67 23;-07 24 18;+89 23 67;-49 13 57;+16 09 25;-03 46 58;"
    "+16 25 09;-46 58 03;-25 09 16;-57 49 13;+67 89 23;+58 46 03;+57 13 49;-23 89 67;"
    "+18 07 24;+03 58 46;+23 67 89;+49 57 13;-13 57 49;+13 49 57"
)


@dataclass(frozen=True)
class FormValues:
    g2: Ball
    s5: Ball
    s6: Ball
    s10: Ball
    s15: Ball


def _prod(th, idx: str) -> Ball:
    out = Ball(1)
    for c in idx:
        out = out * th[int(c)]
    return out


def forms_from_thetas(th) -> FormValues:
    P = lambda s: _prod(th, s)
    g2 = P("0145") - P("1279") - P("3478") + P("0268") + P("3569")
    s5 = P("0123456789") / 2 ** 6
    s6 = sum((P(s) ** 2 for s in ("012478", "012569", "034568", "236789", "134579")),
             Ball(0)) / 2 ** 8
    s15 = Ball(0)
    for term in _S15_TERMS.split(";"):
        sign = 1 if term[0] == "+" else -1
        p, q, r = term[1:].split()
        s15 = s15 + sign * (P(p) ** 9 * P(q) ** 5 * P(r))
    s15 = -s15 / 2 ** 18
    return FormValues(g2, s5, s6, s5 * s5, s15)


def _omega(z, prec) -> PeriodMatrix:
    if isinstance(z, PeriodMatrix):
        return z
    if not isinstance(z, HilbertPoint):
        z = HilbertPoint.from_values(*z)
    if z.z1.mid.imag <= 0 or z.z2.mid.imag <= 0:
        raise ThetaError("z must lie in H x H")
    return mu5(z, prec + 16)


def eval_forms(z, prec: int = 128) -> FormValues:
    """g2, s5, s6, s10 = s5^2, s15 at z (a HilbertPoint or a period matrix on N5)."""
    Om = _omega(z, prec)
    th = theta_all(Om, prec)
    with mp.workprec(prec + 16):
        return forms_from_thetas(th)


def _xy(f: FormValues, prec: int):
    with mp.workprec(prec + 16):
        if f.g2.abs_lower() <= mp.ldexp(f.g2.abs_upper(), -8) or f.g2.abs_upper() < mp.ldexp(1, -prec // 4):
            raise PoleError("g2 is numerically zero here; X and Y are not defined")
        X = 2 ** 5 * 5 ** 2 * f.s6 / f.g2 ** 3
        Y = 2 ** 10 * 5 ** 5 * f.s10 / f.g2 ** 5
    return X, Y


def eval_XY(z, prec: int = 128):
    """(X, Y) = (2^5 5^2 s6 / g2^3, 2^10 5^5 s10 / g2^5) as balls."""
    return _xy(eval_forms(z, prec), prec)


@dataclass(frozen=True)
class IcosahedralPoint:
    """(A : B : C) in P(1:3:5), written with weights (2, 6, 10)."""

    A: Ball
    B: Ball
    C: Ball

    @property
    def X(self) -> Ball:
        return self.B / self.A ** 3

    @property
    def Y(self) -> Ball:
        return self.C / self.A ** 5

    def rescale(self, kappa) -> "IcosahedralPoint":
        return IcosahedralPoint(self.A * kappa ** 2, self.B * kappa ** 6, self.C * kappa ** 10)


@dataclass(frozen=True)
class CanonicalPoint:
    """(A : c : B : D) in P(2:5:6:15)."""

    A: Ball
    c: Ball
    B: Ball
    D: Ball
    C: Ball  # 2^10 5^5 s10, kept separately so that c^2 = C is a real check
    prec: int = 128

    def icosahedral(self) -> IcosahedralPoint:
        return IcosahedralPoint(self.A, self.B, self.C)

    def rescale(self, kappa) -> "CanonicalPoint":
        k = Ball.exact(kappa) if not isinstance(kappa, Ball) else kappa
        with mp.workprec(self.prec + 16):
            return CanonicalPoint(self.A * k ** 2, self.c * k ** 5, self.B * k ** 6,
                                  self.D * k ** 15, self.C * k ** 10, self.prec)

    def c_squared_residual(self) -> mp.mpf:
        with mp.workprec(self.prec + 16):
            d = self.c.mid ** 2 - self.C.mid
            return abs(d) / max(abs(self.C.mid), mp.ldexp(1, -self.prec))


def canonical_point(z, prec: int = 128) -> CanonicalPoint:
    f = eval_forms(z, prec)
    with mp.workprec(prec + 16):
        r5 = Ball.exact(mp.sqrt(5))
        A = f.g2
        c = 2 ** 5 * 5 ** 2 * r5 * f.s5
        B = 2 ** 5 * 5 ** 2 * f.s6
        D = Ball(2 ** 13 * 5 ** 5) * f.s15 / 3
        C = 2 ** 10 * 5 ** 5 * f.s10
    return CanonicalPoint(A, c, B, D, C, prec)


def klein_residual(P: CanonicalPoint) -> mp.mpf:
    """Relative residual of 144 D^2 = Klein's weight-30 polynomial in A, c, B."""
    with mp.workprec(P.prec + 16):
        return _klein(P.A.mid, P.c.mid, P.B.mid, P.D.mid, P.prec)


def _klein(A, c, B, D, prec):
    lhs = 144 * D ** 2
    rhs = (-1728 * B ** 5 + 720 * A * c ** 2 * B ** 3 - 80 * A ** 2 * c ** 4 * B
           + 64 * A ** 3 * (5 * B ** 2 - A * c ** 2) ** 2 + c ** 6)
    denom = max(abs(lhs), abs(rhs), mp.ldexp(1, -prec))
    return abs(lhs - rhs) / denom
