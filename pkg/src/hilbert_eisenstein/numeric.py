"""Certified complex arithmetic: midpoint + error radius balls over mpmath.

The radius bookkeeping is deliberately generous (every operation pads by a
few ulps of the working precision), so a reported radius is a trustworthy
upper bound whenever the inputs' radii are.  Heuristic bounds (series tails)
are tracked separately by callers and flagged as heuristic.
"""

from __future__ import annotations

from fractions import Fraction

import mpmath

from .cyclotomic import Cyc


class Ball:
    """A complex number known to lie within ``rad`` of ``mid``."""

    __slots__ = ("mid", "rad", "prec")

    def __init__(self, mid, rad: float = 0.0, prec: int = 128):
        self.prec = prec
        with mpmath.workprec(prec):
            self.mid = mpmath.mpc(mid)
        self.rad = float(rad)
        if self.rad < 0:
            raise ValueError("negative radius")

    @classmethod
    def exact_rational(cls, x, prec: int = 128) -> Ball:
        x = Fraction(x)
        with mpmath.workprec(prec):
            mid = mpmath.mpf(x.numerator) / x.denominator
        return cls(mid, abs(mid) * 2.0 ** (2 - prec), prec)

    @classmethod
    def from_cyc(cls, x: Cyc, prec: int = 128) -> Ball:
        return cls(x.to_mpc(prec), x.eval_error_bound(prec), prec)

    def _ulp_pad(self, value) -> float:
        return (abs(value) + 1e-300) * 2.0 ** (4 - self.prec)

    def __add__(self, other) -> Ball:
        other = other if isinstance(other, Ball) else Ball(other, 0.0, self.prec)
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            mid = self.mid + other.mid
        b = Ball(mid, 0.0, prec)
        b.rad = self.rad + other.rad + float(b._ulp_pad(abs(mid)))
        return b

    __radd__ = __add__

    def __neg__(self) -> Ball:
        b = Ball(-self.mid, self.rad, self.prec)
        return b

    def __sub__(self, other) -> Ball:
        other = other if isinstance(other, Ball) else Ball(other, 0.0, self.prec)
        return self + (-other)

    def __rsub__(self, other) -> Ball:
        return (-self) + other

    def __mul__(self, other) -> Ball:
        other = other if isinstance(other, Ball) else Ball(other, 0.0, self.prec)
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            mid = self.mid * other.mid
            am, bm = abs(self.mid), abs(other.mid)
        b = Ball(mid, 0.0, prec)
        b.rad = (float(am) * other.rad + float(bm) * self.rad
                 + self.rad * other.rad + float(b._ulp_pad(abs(mid))))
        return b

    __rmul__ = __mul__

    def __truediv__(self, other) -> Ball:
        other = other if isinstance(other, Ball) else Ball(other, 0.0, self.prec)
        prec = max(self.prec, other.prec)
        with mpmath.workprec(prec):
            om = abs(other.mid)
            if float(om) <= other.rad:
                raise ZeroDivisionError("division by a ball containing 0")
            mid = self.mid / other.mid
            am = abs(self.mid)
        lo = float(om) - other.rad
        b = Ball(mid, 0.0, prec)
        # |a/b - a0/b0| <= (|a0| rb + |b0| ra) / (|b0| (|b0| - rb))
        b.rad = ((float(am) * other.rad + float(om) * self.rad) / (float(om) * lo)
                 + float(b._ulp_pad(abs(mid))))
        return b

    def __pow__(self, n: int) -> Ball:
        if n < 0:
            return Ball(1, 0.0, self.prec) / self ** (-n)
        r = Ball(1, 0.0, self.prec)
        base = self
        while n:
            if n & 1:
                r = r * base
            base = base * base
            n >>= 1
        return r

    def abs_upper(self) -> float:
        return float(abs(self.mid)) + self.rad

    def abs_lower(self) -> float:
        return max(0.0, float(abs(self.mid)) - self.rad)

    def contains(self, value) -> bool:
        with mpmath.workprec(self.prec):
            return float(abs(self.mid - mpmath.mpc(value))) <= self.rad * (1 + 1e-12) + 1e-300

    def agrees_with(self, other: Ball, slack: float = 0.0) -> bool:
        with mpmath.workprec(max(self.prec, other.prec)):
            d = float(abs(self.mid - other.mid))
        return d <= self.rad + other.rad + slack

    def real_float(self) -> float:
        return float(self.mid.real)

    def complex_value(self) -> complex:
        return complex(self.mid)

    def __repr__(self):
        return f"Ball({mpmath.nstr(self.mid, 20)} +/- {self.rad:.3e})"


def ball_two_pi_i_pow(n: int, prec: int = 128) -> Ball:
    """(2 pi i)^n as a ball."""
    with mpmath.workprec(prec):
        v = (2 * mpmath.pi * mpmath.mpc(0, 1)) ** n
    return Ball(v, float(abs(v)) * 2.0 ** (6 - prec) * max(1, abs(n)), prec)


def ball_sqrt_int(n: int, prec: int = 128) -> Ball:
    with mpmath.workprec(prec):
        v = mpmath.sqrt(mpmath.mpf(n))
    return Ball(v, float(abs(v)) * 2.0 ** (4 - prec), prec)


def rational_reconstruct(x: float | mpmath.mpf, max_denominator: int,
                         tol: float) -> Fraction | None:
    """Nearest rational with bounded denominator, accepted only within tol."""
    f = Fraction(float(x)).limit_denominator(max_denominator)
    if abs(float(f) - float(x)) <= tol:
        return f
    return None
