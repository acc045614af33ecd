"""Fractional ideals as exact Z-lattices in Hermite normal form.

An ideal is (1/den) * (row span of an upper-triangular integer HNF basis)
over the integral basis of the field; the pair (den, rows) is canonical, so
equality is structural.  Products, sums, intersections, colons and inverses
are all exact; the inverse goes through the trace-dual lattice, which costs
one rational matrix inversion and nothing else.

Prime factorization uses the defining polynomial modulo p (monogenic path;
degree <= 2 is always monogenic over the chosen basis).  Principality over a
real quadratic field is decided by the continued-fraction reduction cycle
with an exactly tracked generator; a bounded box enumeration provides the
independent cross-check.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from math import gcd, isqrt, lcm

from . import intmat
from .field import (FieldDescription, FieldElement, FieldError,
                    InsufficientFieldDataError)
from .quadcf import cf_step, is_reduced_state, principal_state
from .abelian import FiniteAbelianGroup


class FractionalIdeal:
    __slots__ = ("field", "den", "rows", "_norm")

    def __init__(self, field: FieldDescription, den: int, rows):
        self.field = field
        self.den = den
        self.rows = tuple(tuple(int(x) for x in r) for r in rows)
        self._norm = None

    # -- constructors ----------------------------------------------------------

    @classmethod
    def from_integer_rows(cls, field, rows, den: int = 1) -> FractionalIdeal:
        h = intmat.hnf_rows([list(r) for r in rows])
        if len(h) != field.degree:
            raise FieldError("lattice does not have full rank (zero ideal?)")
        g = gcd(intmat.content(h), den)
        if g > 1:
            h = [[x // g for x in r] for r in h]
            den //= g
        return cls(field, den, h)

    @classmethod
    def from_rows_rational(cls, field, rows) -> FractionalIdeal:
        mat, scale = intmat.clear_denominators(rows)
        return cls.from_integer_rows(field, mat, scale)

    @classmethod
    def from_generators(cls, field, elements) -> FractionalIdeal:
        rows = []
        for e in elements:
            e = field.coerce(e)
            for j in range(field.degree):
                rows.append(list((e * field.basis_element(j)).coords))
        return cls.from_rows_rational(field, rows)

    @classmethod
    def principal(cls, element: FieldElement) -> FractionalIdeal:
        if element.is_zero():
            raise FieldError("zero element does not generate a fractional ideal")
        return cls.from_generators(element.field, [element])

    @classmethod
    def ring(cls, field) -> FractionalIdeal:
        return cls(field, 1, intmat.identity(field.degree))

    # -- basic structure ---------------------------------------------------------

    def basis_elements(self) -> list[FieldElement]:
        return [self.field.element(tuple(Fraction(x, self.den) for x in r)) for r in self.rows]

    def norm(self) -> Fraction:
        if self._norm is None:
            det = 1
            for i in range(self.field.degree):
                det *= self.rows[i][i]
            self._norm = Fraction(abs(det), self.den ** self.field.degree)
        return self._norm

    def is_integral(self) -> bool:
        return self.den == 1

    def is_ring(self) -> bool:
        return self == FractionalIdeal.ring(self.field)

    def contains_element(self, x) -> bool:
        x = self.field.coerce(x)
        target = [Fraction(c) * self.den for c in x.coords]
        if any(t.denominator != 1 for t in target):
            return False
        sol = intmat.solve_integer(intmat.transpose([list(r) for r in self.rows]),
                                   [int(t) for t in target])
        return sol is not None

    def contains_ideal(self, other: FractionalIdeal) -> bool:
        return all(self.contains_element(e) for e in other.basis_elements())

    def reduce_element(self, x) -> FieldElement:
        """Canonical representative of x modulo this lattice (HNF reduction)."""
        x = self.field.coerce(x)
        d = self.field.degree
        y = [Fraction(c) for c in x.coords]
        for i in range(d - 1, -1, -1):
            piv = Fraction(self.rows[i][i], self.den)
            q = (y[i] / piv).__floor__()
            if q:
                for j in range(d):
                    y[j] -= q * Fraction(self.rows[i][j], self.den)
        return self.field.element(y)

    def __eq__(self, other) -> bool:
        return (isinstance(other, FractionalIdeal) and self.field is other.field
                and self.den == other.den and self.rows == other.rows)

    def __hash__(self):
        return hash((self.den, self.rows))

    def key(self) -> tuple:
        return (self.den, self.rows)

    # -- arithmetic ---------------------------------------------------------------

    def __mul__(self, other) -> FractionalIdeal:
        if isinstance(other, (int, Fraction, FieldElement, str)):
            e = self.field.coerce(other)
            rows = [list((e * b).coords) for b in self.basis_elements()]
            return FractionalIdeal.from_rows_rational(self.field, rows)
        rows = []
        for a in self.basis_elements():
            for b in other.basis_elements():
                rows.append(list((a * b).coords))
        return FractionalIdeal.from_rows_rational(self.field, rows)

    __rmul__ = __mul__

    def __add__(self, other) -> FractionalIdeal:
        rows = [list(e.coords) for e in self.basis_elements()]
        rows += [list(e.coords) for e in other.basis_elements()]
        return FractionalIdeal.from_rows_rational(self.field, rows)

    def intersect(self, other) -> FractionalIdeal:
        L = lcm(self.den, other.den)
        a = [[x * (L // self.den) for x in r] for r in self.rows]
        b = [[x * (L // other.den) for x in r] for r in other.rows]
        d = self.field.degree
        # v = x A = y B  <=>  (x, y) in kernel of [A^T | -B^T]
        m = [[a[j][i] for j in range(d)] + [-b[j][i] for j in range(d)] for i in range(d)]
        rows = []
        for ker in intmat.kernel_integer(m):
            x = ker[:d]
            rows.append([sum(x[j] * a[j][i] for j in range(d)) for i in range(d)])
        return FractionalIdeal.from_integer_rows(self.field, rows, L)

    def dual(self) -> FractionalIdeal:
        """Trace-dual lattice {x : Tr(x * self) in Z}."""
        d = self.field.degree
        T = [[(self.field.basis_element(i) * self.field.basis_element(j)).trace()
              for j in range(d)] for i in range(d)]
        RT = intmat.mat_mul([[Fraction(x, self.den) for x in r] for r in self.rows],
                            [[Fraction(t) for t in row] for row in T])
        inv = intmat.rat_inv(RT)  # columns of inv are the dual basis coords
        return FractionalIdeal.from_rows_rational(self.field, intmat.transpose(inv))

    def colon(self, other) -> FractionalIdeal:
        """(self : other) = {x : x * other <= self}."""
        return (self.dual() * other).dual()

    def inverse(self) -> FractionalIdeal:
        return FractionalIdeal.ring(self.field).colon(self)

    def __pow__(self, n: int) -> FractionalIdeal:
        if n < 0:
            return self.inverse() ** (-n)
        r = FractionalIdeal.ring(self.field)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def divides(self, other: FractionalIdeal) -> bool:
        """self | other in the sense other * self^-1 integral."""
        return (other * self.inverse()).is_integral()

    def is_coprime(self, other: FractionalIdeal) -> bool:
        return (self + other).is_ring()

    def valuation(self, prime: FractionalIdeal) -> int:
        if self.den != 1:
            # split off the rational denominator, which is integral
            num = self * self.den
            den_ideal = FractionalIdeal.principal(self.field.coerce(self.den))
            return num.valuation(prime) - den_ideal.valuation(prime)
        v = 0
        inv = prime.inverse()
        cur = self
        while True:
            nxt = cur * inv
            if not nxt.is_integral():
                break
            cur = nxt
            v += 1
        return v

    # -- presentation ---------------------------------------------------------------

    def two_element_form(self) -> tuple[Fraction, int, int]:
        """(content, a, b): ideal = content * (a Z + ((b + sqrt(disc))/2) Z),
        with a = the norm of the primitive part (degree 2 only)."""
        if self.field.degree != 2:
            raise FieldError("two_element_form is a quadratic-field notion")
        h = intmat.hnf_rows([list(r) for r in self.rows], pivot_order=[1, 0])
        # h[0] = (x, c) = x + c*w ; h[1] = (A, 0) = A ; O-module => c | x, c | A
        (x, c), (A, _zero) = h[0], h[1]
        assert _zero == 0 and A > 0 and c > 0 and A % c == 0 and x % c == 0
        a = A // c
        x0 = x // c
        disc = self.field.discriminant
        if disc % 4 == 0:  # w = sqrt(D) = sqrt(disc)/2
            b = 2 * x0
        else:              # w = (1 + sqrt(disc))/2
            b = 2 * x0 + 1
        assert (b * b - disc) % (4 * a) == 0
        return Fraction(c, self.den), a, b

    def json_obj(self) -> dict:
        cols = intmat.transpose([list(r) for r in self.rows])
        return {"hnf": cols, "den": self.den, "norm": str(self.norm())}

    def __repr__(self):
        n = self.norm()
        return f"Ideal(den={self.den}, rows={self.rows}, N={n})"


# -- primes and factorization ------------------------------------------------------


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a modulo prime p, or None (Tonelli-Shanks)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _factor_int(n: int) -> list[tuple[int, int]]:
    n = abs(n)
    out = []
    for p in (2, 3, 5):
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((p, e))
    f = 7
    wheel = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += wheel[i]
        i = (i + 1) % 8
    if n > 1:
        out.append((n, 1))
    return out


def prime_ideals_above(F: FieldDescription, p: int) -> list[tuple[FractionalIdeal, int]]:
    """Primes above p with their residue degrees.  Monogenic path: roots of
    the defining polynomial of w mod p (valid whenever p does not divide the
    index [O : Z[w]]; degree <= 2 is unconditionally monogenic here)."""
    O = FractionalIdeal.ring(F)
    if F.degree == 1:
        return [(FractionalIdeal.principal(F.coerce(p)), 1)]
    if F.degree > 2:
        raise InsufficientFieldDataError(
            "prime splitting beyond degree 2 requires a monogenic certificate")
    w = F.w()
    t = int(w.trace())
    n = int(w.norm())
    # roots of x^2 - t x + n mod p via the discriminant t^2 - 4n
    if p == 2:
        roots = sorted({r for r in (0, 1) if (r * r - t * r + n) % 2 == 0})
    else:
        s = sqrt_mod_prime((t * t - 4 * n) % p, p)
        if s is None:
            roots = []
        else:
            inv2 = pow(2, p - 2, p)
            roots = sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})
    if F.discriminant % p == 0:
        assert len(roots) == 1, "ramified prime must have a double root"
        r = roots[0]
        return [(FractionalIdeal.from_generators(F, [F.coerce(p), w - r]), 1)]
    if len(roots) == 2:
        return [(FractionalIdeal.from_generators(F, [F.coerce(p), w - r]), 1) for r in roots]
    if len(roots) == 0:
        return [(FractionalIdeal.principal(F.coerce(p)), 2)]
    raise AssertionError("unramified prime with a single simple root cannot happen")


def factor(ideal: FractionalIdeal) -> list[tuple[FractionalIdeal, int]]:
    """Sorted prime factorization; exact, with negative exponents for
    denominators of fractional ideals."""
    F = ideal.field
    nm = ideal.norm()
    support = {p for p, _ in _factor_int(nm.numerator)}
    support |= {p for p, _ in _factor_int(nm.denominator * ideal.den)}
    out = []
    for p in sorted(support):
        for P, f in prime_ideals_above(F, p):
            v = ideal.valuation(P)
            if v:
                out.append((P, v, p))
    out.sort(key=lambda t: (t[2], t[0].key()))
    return [(P, v) for P, v, _p in out]


def minkowski_bound(F: FieldDescription) -> int:
    if F.degree == 1:
        return 1
    if F.degree == 2:
        return isqrt(F.discriminant) // 2 + 1
    raise InsufficientFieldDataError("Minkowski bound automation stops at degree 2")


# -- principality over real quadratic fields -----------------------------------------


def _state_to_ideal(F: FieldDescription, P: int, Q: int) -> FractionalIdeal:
    disc = F.discriminant
    a = Q // 2
    if disc % 4 == 0:
        coords = (Fraction(P, 2), Fraction(1))
    else:
        coords = (Fraction(P - 1, 2), Fraction(1))
    theta = F.element(coords)
    return FractionalIdeal.from_generators(F, [F.coerce(a), theta])


def _walk_cycle(F: FieldDescription, P0: int, Q0: int):
    """Reduce (P0,Q0) and walk its full reduction cycle.

    Returns (cycle, pre_gen) where cycle is a list of (state, gen) with
    ideal(P0,Q0) = gen * ideal(state) exactly, in cycle order.
    """
    disc = F.discriminant
    sqrt_disc = F.sqrt_disc_element()
    one = F.one()
    P, Q = P0, Q0
    g = one
    seen_pre = 0
    while not is_reduced_state(P, Q, disc):
        _a, P2, Q2 = cf_step(P, Q, disc)
        # factor tau - a = (-P2 + sqrt(disc)) / Q
        g = g * ((sqrt_disc - P2) / Q)
        P, Q = P2, Q2
        seen_pre += 1
        if seen_pre > 8 * disc + 64:
            raise AssertionError("reduction did not terminate")
    start = (P, Q)
    cycle = []
    while True:
        # ideal(P0,Q0) = (Q0/Q) * g * ideal(P,Q): account the a0/an scale
        scale = Fraction(Q0, Q)
        cycle.append(((P, Q), g * scale))
        _a, P2, Q2 = cf_step(P, Q, disc)
        g = g * ((sqrt_disc - P2) / Q)
        P, Q = P2, Q2
        if (P, Q) == start:
            break
    return cycle


def is_principal(ideal: FractionalIdeal, narrow: bool = False
                 ) -> tuple[bool, FieldElement | None]:
    """Principality test; with narrow=True, requires (and returns) a totally
    positive generator.  Decision by the reduction-cycle method."""
    F = ideal.field
    if F.degree == 1:
        # the HNF pivot is the positive rational generator
        return True, F.coerce(Fraction(ideal.rows[0][0], ideal.den))
    if F.degree != 2:
        raise InsufficientFieldDataError("principality testing beyond degree 2 is unsupported")
    content, a, b = ideal.two_element_form()
    disc = F.discriminant
    cycle = _walk_cycle(F, b, 2 * a)
    target = principal_state(disc)
    gen = None
    for (state, g) in cycle:
        if state == target:
            gen = g * content
            break
    if gen is None:
        return False, None
    assert FractionalIdeal.principal(gen) == ideal
    if not narrow:
        return True, gen
    eps = F.unit_generators[0]
    for e in (0, 1, -1, 2, -2, 3, -3):
        for s in (1, -1):
            u = (eps ** e) * s
            cand = u * gen
            if cand.is_totally_positive():
                return True, cand
    return False, None


def principal_generator_by_search(ideal: FractionalIdeal, height_bound: int = 10 ** 6
                                  ) -> FieldElement | None:
    """Bounded-enumeration principality witness (cross-check path).

    Any generator has a unit multiple with all embeddings bounded by
    sqrt(N) * sqrt(eps), so searching that box is a complete decision
    procedure for quadratic fields.
    """
    F = ideal.field
    if F.degree == 1:
        return F.coerce(Fraction(ideal.rows[0][0], ideal.den))
    if F.degree != 2:
        raise InsufficientFieldDataError("search fallback implemented for degree <= 2")
    content, a, b = ideal.two_element_form()
    prim = ideal * (Fraction(1) / content)
    N = int(prim.norm())
    eps1 = F.unit_generators[0].embedding_floats()[0]
    eps1 = abs(eps1) if abs(eps1) > 1 else 1 / abs(eps1)
    C = (N ** 0.5) * (eps1 ** 0.5) * 1.0000001 + 1e-9
    if C > height_bound:
        return None
    b0 = prim.basis_elements()
    e0 = b0[0].embedding_floats()
    e1 = b0[1].embedding_floats()
    det = e0[0] * e1[1] - e0[1] * e1[0]
    lim0 = int(abs(C * (abs(e1[0]) + abs(e1[1])) / abs(det))) + 2
    lim1 = int(abs(C * (abs(e0[0]) + abs(e0[1])) / abs(det))) + 2
    for m in range(-lim0, lim0 + 1):
        for n in range(-lim1, lim1 + 1):
            if m == 0 and n == 0:
                continue
            x = b0[0] * m + b0[1] * n
            if abs(x.norm()) == N and FractionalIdeal.principal(x) == prim:
                return x * content
    return None


# -- class groups ----------------------------------------------------------------------


def _sign_coset_label(F: FieldDescription, signs: tuple[int, ...]) -> tuple:
    group = F.unit_sign_group()
    coset = {tuple(s * g for s, g in zip(signs, gg)) for gg in group}
    return tuple(sorted(coset))


def _wide_label(F: FieldDescription, ideal: FractionalIdeal):
    content, a, b = ideal.two_element_form()
    cycle = _walk_cycle(F, b, 2 * a)
    return min(state for state, _g in cycle)


def _narrow_label(F: FieldDescription, ideal: FractionalIdeal):
    content, a, b = ideal.two_element_form()
    cycle = _walk_cycle(F, b, 2 * a)
    state, g = min(cycle, key=lambda sg: sg[0])
    return (state, _sign_coset_label(F, g.signs()))


class IdealClassGroup:
    """Wide or narrow ideal class group with explicit integral representatives."""

    def __init__(self, field: FieldDescription, kind: str = "wide"):
        if kind not in ("wide", "narrow"):
            raise ValueError("kind must be 'wide' or 'narrow'")
        self.field = field
        self.kind = kind
        if field.degree > 2:
            if field.class_data is None:
                raise InsufficientFieldDataError(
                    "class group beyond degree 2 requires user class data")
            raise InsufficientFieldDataError(
                "user-supplied class data cannot support discrete logs; degree <= 2 only")
        if field.degree == 1:
            O = FractionalIdeal.ring(field)
            self._label = lambda ideal: 0
            self.group = FiniteAbelianGroup(0, lambda a, b: 0, [0])
            self._reps = {0: O}
            self.h = 1
            self.representatives = [O]
            return
        label = _wide_label if kind == "wide" else _narrow_label
        self._label_fn = label
        gens = []
        for p in range(2, minkowski_bound(field) + 1):
            if all(p % q for q in range(2, p)):
                for P, _f in prime_ideals_above(field, p):
                    gens.append(P)
        gens.append(FractionalIdeal.principal(field.sqrt_disc_element()))
        O = FractionalIdeal.ring(field)
        gens.append(O)
        rep_of = {}

        def lab(ideal):
            L = label(field, ideal)
            rep_of.setdefault(L, ideal)
            return L

        id_label = lab(O)

        def op(la, lb):
            return lab(rep_of[la] * rep_of[lb])

        self.group = FiniteAbelianGroup(id_label, op, [lab(g) for g in gens])
        rep_of[id_label] = O
        self._reps = rep_of
        self._label = lab
        self.h = self.group.order
        # canonical per-class list ordered by dlog exponents, trivial class first
        self.representatives = [rep_of[self.group.from_exponents(e)]
                                for e in self.group.all_exponents()]

    def structure(self) -> list[int]:
        return list(self.group.orders)

    def dlog(self, ideal: FractionalIdeal) -> tuple[int, ...]:
        if self.field.degree == 1:
            return ()
        return self.group.dlog(self._label(ideal))

    def is_trivial_class(self, ideal: FractionalIdeal) -> bool:
        return all(e == 0 for e in self.dlog(ideal))

    def same_class(self, a: FractionalIdeal, b: FractionalIdeal) -> bool:
        return self.dlog(a) == self.dlog(b)

    def class_representative(self, exps) -> FractionalIdeal:
        if self.field.degree == 1:
            return FractionalIdeal.ring(self.field)
        return self._reps[self.group.from_exponents(exps)]

    def all_classes(self) -> list[tuple[tuple[int, ...], FractionalIdeal]]:
        if self.field.degree == 1:
            return [((), FractionalIdeal.ring(self.field))]
        return [(exps, self.class_representative(exps))
                for exps in self.group.all_exponents()]


def class_group(F: FieldDescription, kind: str = "wide") -> IdealClassGroup:
    return IdealClassGroup(F, kind)


# -- quotients ---------------------------------------------------------------------------


def coset_representatives(I: FractionalIdeal, J: FractionalIdeal) -> list[FieldElement]:
    """Exactly [I : J] elements of I, pairwise incongruent mod J (J <= I)."""
    F = I.field
    if not I.contains_ideal(J):
        raise FieldError("coset_representatives requires J contained in I")
    d = F.degree
    L = lcm(I.den, J.den)
    A = [[x * (L // I.den) for x in r] for r in I.rows]
    B = [[x * (L // J.den) for x in r] for r in J.rows]
    # rows of B in terms of rows of A: C A = B
    Ainv = intmat.rat_inv([[Fraction(x) for x in r] for r in A])
    C = intmat.mat_mul([[Fraction(x) for x in r] for r in B], Ainv)
    Cint = [[int(x) for x in row] for row in C]
    assert all(Fraction(Cint[i][j]) == C[i][j] for i in range(d) for j in range(d))
    M = intmat.transpose(Cint)
    U, S, V = intmat.snf_with_transforms(M)
    Uinv = intmat.rat_inv([[Fraction(x) for x in r] for r in U])
    reps = []
    ranges = [range(S[i][i]) for i in range(d)]
    for ks in product(*ranges):
        x = [sum(Uinv[i][j] * ks[j] for j in range(d)) for i in range(d)]
        coords = [sum(Fraction(x[j]) * A[j][i] for j in range(d)) / L for i in range(d)]
        reps.append(F.element(coords))
    return reps
