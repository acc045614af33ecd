"""Exact arithmetic in cyclotomic fields Q(zeta_M).

An element is stored as a coefficient vector c of length M meaning
sum_j c[j] * zeta_M^j, i.e. as an element of the group ring Q[Z/M].  Vectors
are **not** reduced modulo the cyclotomic polynomial on every operation;
accumulation (Gauss sums, divisor sums) stays cheap, and the canonical
representative modulo Phi_M is computed only where exactness demands it
(equality tests, rationality extraction, inversion).

Conversion to floating complex carries an explicit error radius, so values
assembled exactly here feed the certified-numerics layer without guesswork.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

import mpmath


# -- polynomial helpers over Q (dense coefficient lists, index = degree) ----

def _poly_divmod(num: list[Fraction], den: list[Fraction]):
    num = num[:]
    q = [Fraction(0)] * max(1, len(num) - len(den) + 1)
    dlead = den[-1]
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1] / dlead
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return q, num


def _poly_mod(num, den):
    return _poly_divmod(num, den)[1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, computed by dividing x^n - 1 by all Phi_d, d|n, d<n."""
    poly = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            phi_d = [Fraction(c) for c in cyclotomic_polynomial(d)]
            poly, rem = _poly_divmod(poly, phi_d)
            assert all(r == 0 for r in rem)
    return tuple(int(c) for c in poly)


class Cyc:
    """An exact element of Q(zeta_M)."""

    __slots__ = ("m", "c")

    def __init__(self, m: int, coeffs):
        self.m = m
        c = list(coeffs)
        assert len(c) == m
        self.c = [Fraction(x) for x in c]

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> Cyc:
        return cls(1, [Fraction(0)])

    @classmethod
    def rational(cls, x) -> Cyc:
        return cls(1, [Fraction(x)])

    @classmethod
    def root_of_unity(cls, exponent: Fraction, scale=1) -> Cyc:
        """scale * e(exponent) with e(x) = exp(2 pi i x), exponent rational."""
        ex = Fraction(exponent) % 1
        m = ex.denominator
        c = [Fraction(0)] * m
        c[ex.numerator % m] = Fraction(scale)
        return cls(m, c)

    # -- ring structure ------------------------------------------------------

    def _lift(self, m: int) -> Cyc:
        if m == self.m:
            return self
        k = m // self.m
        c = [Fraction(0)] * m
        for j, x in enumerate(self.c):
            if x:
                c[j * k] = x
        return Cyc(m, c)

    @staticmethod
    def _common(a: Cyc, b: Cyc) -> tuple[Cyc, Cyc]:
        m = lcm(a.m, b.m)
        return a._lift(m), b._lift(m)

    def __add__(self, other) -> Cyc:
        other = other if isinstance(other, Cyc) else Cyc.rational(other)
        a, b = Cyc._common(self, other)
        return Cyc(a.m, [x + y for x, y in zip(a.c, b.c)])

    __radd__ = __add__

    def __neg__(self) -> Cyc:
        return Cyc(self.m, [-x for x in self.c])

    def __sub__(self, other) -> Cyc:
        other = other if isinstance(other, Cyc) else Cyc.rational(other)
        return self + (-other)

    def __rsub__(self, other) -> Cyc:
        return (-self) + other

    def __mul__(self, other) -> Cyc:
        other = other if isinstance(other, Cyc) else Cyc.rational(other)
        a, b = Cyc._common(self, other)
        items_a = [(j, x) for j, x in enumerate(a.c) if x]
        items_b = [(j, x) for j, x in enumerate(b.c) if x]
        if len(items_a) > len(items_b):
            items_a, items_b = items_b, items_a
        c = [Fraction(0)] * a.m
        for j, x in items_a:
            for k, y in items_b:
                c[(j + k) % a.m] += x * y
        return Cyc(a.m, c)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Cyc:
        if n < 0:
            return self.inverse() ** (-n)
        r = Cyc.rational(1)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def conjugate(self) -> Cyc:
        c = [Fraction(0)] * self.m
        for j, x in enumerate(self.c):
            c[(-j) % self.m] = x
        return Cyc(self.m, c)

    def abs_squared(self) -> Cyc:
        return self * self.conjugate()

    # -- canonical representative modulo Phi_M -------------------------------

    def reduced_coeffs(self) -> list[Fraction]:
        """Canonical representative of degree < phi(M) modulo Phi_M."""
        phi = [Fraction(x) for x in cyclotomic_polynomial(self.m)]
        return _poly_mod(self.c[:] or [Fraction(0)], phi)

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.reduced_coeffs())

    def equals(self, other) -> bool:
        other = other if isinstance(other, Cyc) else Cyc.rational(other)
        return (self - other).is_zero()

    def rational(self) -> Fraction | None:
        """The value as a Fraction if it lies in Q, else None."""
        r = self.reduced_coeffs()
        if all(x == 0 for x in r[1:]):
            return r[0]
        return None

    def inverse(self) -> Cyc:
        """Inverse in Q(zeta_M) via extended Euclid modulo Phi_M."""
        phi = [Fraction(x) for x in cyclotomic_polynomial(self.m)]
        a = self.reduced_coeffs()
        if all(x == 0 for x in a):
            raise ZeroDivisionError("inverse of zero cyclotomic")
        # extended euclid: s*a + t*phi = gcd (a unit in Q[x]/Phi since Phi irreducible)
        r0, r1 = phi, a
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def padd(p, q):
            n = max(len(p), len(q))
            p = p + [Fraction(0)] * (n - len(p))
            q = q + [Fraction(0)] * (n - len(q))
            return [x + y for x, y in zip(p, q)]

        def pmulpoly(p, q):
            out = [Fraction(0)] * (len(p) + len(q) - 1)
            for i, x in enumerate(p):
                if x:
                    for j, y in enumerate(q):
                        out[i + j] += x * y
            return out

        while len(r1) > 1 or r1[0] != 0:
            q, r = _poly_divmod(r0, r1)
            s = padd(s0, [-x for x in pmulpoly(q, s1)])
            r0, s0, r1, s1 = r1, s1, r, s
        g = r0
        if len(g) != 1 or g[0] == 0:
            raise ZeroDivisionError("not invertible (zero divisor mod Phi_M)")
        inv = [x / g[0] for x in s0]
        inv = inv[: self.m] + [Fraction(0)] * max(0, self.m - len(inv))
        return Cyc(self.m, inv[: self.m])

    def __truediv__(self, other) -> Cyc:
        other = other if isinstance(other, Cyc) else Cyc.rational(other)
        return self * other.inverse()

    # -- numerics -------------------------------------------------------------

    def to_mpc(self, prec: int = 128) -> mpmath.mpc:
        with mpmath.workprec(prec):
            s = mpmath.mpc(0)
            for j, x in enumerate(self.c):
                if x:
                    s += mpmath.mpf(x.numerator) / x.denominator * mpmath.expjpi(
                        mpmath.mpf(2 * j) / self.m)
            return s

    def eval_error_bound(self, prec: int) -> float:
        total = sum(abs(x) for x in self.c)
        return float(total) * 2.0 ** (4 - prec) + 2.0 ** (8 - prec)

    def __repr__(self):
        r = self.rational()
        if r is not None:
            return f"Cyc({r})"
        terms = [f"{x}*z{self.m}^{j}" for j, x in enumerate(self.c) if x]
        return "Cyc(" + " + ".join(terms[:6]) + ("..." if len(terms) > 6 else "") + ")"
