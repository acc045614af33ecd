"""Continued fractions of quadratic irrationals (P + sqrt(D)) / Q, exactly.

This is the engine behind fundamental units and the reduction cycle of
ideals in a real quadratic order of discriminant D (a positive non-square
integer).  States (P, Q) always satisfy Q != 0 and Q | D - P^2; walks
started from an ideal form (Q = 2a, P = b) keep 2Q | D - P^2.

All floor/comparison decisions against sqrt(D) are exact, via integer
square roots, never floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt


def sign_quadratic(a: Fraction, b: Fraction, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for non-square d > 0."""
    a, b = Fraction(a), Fraction(b)
    if b == 0:
        return (a > 0) - (a < 0)
    if a == 0:
        return 1 if b > 0 else -1
    if a > 0 and b > 0:
        return 1
    if a < 0 and b < 0:
        return -1
    # opposite signs: compare a^2 with d b^2
    lhs = a * a
    rhs = d * b * b
    if lhs == rhs:
        raise ValueError("sqrt(d) rational?")
    bigger_sqrt_part = rhs > lhs
    return (1 if b > 0 else -1) if bigger_sqrt_part else (1 if a > 0 else -1)


def _ge_quadratic(p: int, q: int, d: int, k: int) -> bool:
    """Exact test (p + sqrt(d)) / q >= k."""
    t = k * q - p
    if q > 0:  # sqrt(d) >= t
        return t <= 0 or d >= t * t
    # q < 0: p + sqrt(d) <= k q  <=>  sqrt(d) <= t
    return t >= 0 and d <= t * t


def floor_quadratic(p: int, q: int, d: int) -> int:
    """floor((p + sqrt(d)) / q) for non-square d > 0 and q != 0."""
    s = isqrt(d)
    assert s * s != d, "discriminant must not be a square"
    if q > 0:
        # p + sqrt(d) in the open interval (p+s, p+s+1)
        return (p + s) // q
    k = (p + s) // q  # upper bound for the floor when q < 0
    while not _ge_quadratic(p, q, d, k):
        k -= 1
    return k


def cf_step(p: int, q: int, d: int) -> tuple[int, int, int]:
    """One continued-fraction step: (a, p', q') with a = floor((p+sqrt d)/q),
    p' = a q - p, q' = (d - p'^2)/q (exact division)."""
    a = floor_quadratic(p, q, d)
    p2 = a * q - p
    num = d - p2 * p2
    assert num % q == 0
    return a, p2, num // q


def is_reduced_state(p: int, q: int, d: int) -> bool:
    """tau = (p + sqrt d)/q is reduced: tau > 1 and -1 < conj(tau) < 0."""
    if q <= 0:
        return False
    if not (q - p < 0 or d > (q - p) ** 2):  # tau > 1  <=>  sqrt d > q - p
        return False
    if p < 0 or d <= p * p:  # conj(tau) < 0  <=>  p < sqrt d
        return False
    return d < (p + q) ** 2  # conj(tau) > -1  <=>  sqrt d < p + q


def principal_state(d: int) -> tuple[int, int]:
    """(P, Q) of the reduced ideal equal to the whole ring: Q = 2 and
    P = the largest integer below sqrt(d) with the parity of d."""
    s = isqrt(d)
    b0 = s if (s - d) % 2 == 0 else s - 1
    return b0, 2


def fundamental_unit_sqrtD(d: int) -> tuple[Fraction, Fraction]:
    """Fundamental unit u > 1 of the quadratic order of discriminant d,
    returned as (x, y) meaning u = x + y*sqrt(d).

    One full period of the principal reduction cycle accumulates the step
    generator g = prod(tau_j - a_j) in (0, 1) with (ring) = g*(ring), so
    u = 1/g is the smallest unit > 1.
    """
    p0, q0 = principal_state(d)
    x, y = Fraction(1), Fraction(0)  # g = x + y sqrt(d)
    p, q = p0, q0
    while True:
        a, p2, q2 = cf_step(p, q, d)
        fx, fy = Fraction(-p2, q), Fraction(1, q)
        x, y = x * fx + y * fy * d, x * fy + y * fx
        p, q = p2, q2
        if (p, q) == (p0, q0):
            break
    n = x * x - d * y * y  # N(g), = +/-1 ... times nothing: g is a unit
    ux, uy = x / n, -y / n
    assert sign_quadratic(ux - 1, uy, d) > 0, "cycle generator did not invert to u > 1"
    return ux, uy
