"""Cusps of the congruence groups Gamma(n; O, c) and their ideal-class labels.

The group Gamma(n; O, c) consists of the matrices [[a, b], [c_, d]] in
GL2+(F) with a, d in O, b in c^-1 d^-1, c_ in n c d and unit determinant
(d = the different).  Cusp classes of the SL2 part biject with the wide
ideal class group through il_c(m) = c_ * c * d^-1 + a O; this module builds
explicit representative matrices for every class (totally positive Z-bases,
prime avoidance, and the exact Bezout step over a pair of lattices).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import count, product

from . import intmat
from .field import FieldDescription, FieldElement, FieldError
from .ideals import (FractionalIdeal, IdealClassGroup, class_group, factor,
                     is_principal)


# -- matrices ----------------------------------------------------------------------


@dataclass(frozen=True)
class Mat2:
    a: FieldElement
    b: FieldElement
    c: FieldElement
    d: FieldElement

    def det(self) -> FieldElement:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a * other.a + self.b * other.c,
                    self.a * other.b + self.b * other.d,
                    self.c * other.a + self.d * other.c,
                    self.c * other.b + self.d * other.d)

    def inverse(self) -> "Mat2":
        det = self.det()
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


def mat2(field: FieldDescription, entries) -> Mat2:
    a, b, c, d = (field.coerce(x) for x in entries)
    return Mat2(a, b, c, d)


def identity_mat(field: FieldDescription) -> Mat2:
    return mat2(field, (1, 0, 0, 1))


@dataclass(frozen=True)
class GroupSpec:
    """Gamma(level; O, twist), with det constraint 'unit' or 'one'."""
    level: FractionalIdeal
    twist: FractionalIdeal
    det_constraint: str = "unit"

    def field(self) -> FieldDescription:
        return self.level.field


def different_ideal(F: FieldDescription) -> FractionalIdeal:
    return FractionalIdeal.ring(F).dual().inverse()


def is_member(g: Mat2, spec: GroupSpec) -> bool:
    F = spec.field()
    d = different_ideal(F)
    b_lattice = (spec.twist * d).inverse()
    c_lattice = spec.level * spec.twist * d
    O = FractionalIdeal.ring(F)
    if not (O.contains_element(g.a) and O.contains_element(g.d)):
        return False
    if not b_lattice.contains_element(g.b):
        return False
    if not c_lattice.contains_element(g.c):
        return False
    det = g.det()
    if spec.det_constraint == "one":
        return det == F.one()
    if det.is_zero() or not O.contains_element(det) or not O.contains_element(F.one() / det):
        return False
    return det.is_totally_positive()


def il_ideal(m: Mat2, twist: FractionalIdeal) -> FractionalIdeal:
    """The fractional ideal c * twist * different^-1 + a O behind the il map."""
    F = twist.field
    d = different_ideal(F)
    parts = []
    if not m.c.is_zero():
        parts.append(m.c * (twist * d.inverse()))
    if not m.a.is_zero():
        parts.append(FractionalIdeal.principal(m.a))
    if not parts:
        raise FieldError("first column of an SL2 matrix cannot vanish")
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    return out


def il_class(m: Mat2, twist: FractionalIdeal, cg: IdealClassGroup | None = None
             ) -> tuple[int, ...]:
    """Wide ideal class (dlog exponents) of il(m); constant on
    Gamma(O; O, twist^-1)-left and B1(F)-right orbits."""
    F = twist.field
    if cg is None:
        cg = class_group(F, "wide")
    return cg.dlog(il_ideal(m, twist))


def il_class_noninvariant(m: Mat2, twist: FractionalIdeal,
                          cg: IdealClassGroup | None = None) -> tuple[int, ...]:
    """The c*twist*different + aO variant (not orbit-invariant in general)."""
    F = twist.field
    d = different_ideal(F)
    parts = []
    if not m.c.is_zero():
        parts.append(m.c * (twist * d))
    if not m.a.is_zero():
        parts.append(FractionalIdeal.principal(m.a))
    out = parts[0]
    for p in parts[1:]:
        out = out + p
    if cg is None:
        cg = class_group(F, "wide")
    return cg.dlog(out)


# -- totally positive bases and prime avoidance ---------------------------------------


def _find_totally_positive(L: FractionalIdeal, avoid: FractionalIdeal | None = None
                           ) -> FieldElement:
    """Some totally positive element of L (outside ``avoid`` if given)."""
    F = L.field
    basis = L.basis_elements()
    d = F.degree
    for radius in count(1):
        box = range(-radius, radius + 1)
        for coords in product(box, repeat=d):
            if all(c == 0 for c in coords):
                continue
            x = F.zero()
            for c, b in zip(coords, basis):
                x = x + b * c
            if x.is_zero() or not x.is_totally_positive():
                continue
            if avoid is not None and avoid.contains_element(x):
                continue
            return x
        if radius > 60:
            raise FieldError("no totally positive element found in search box")


def positive_basis(L: FractionalIdeal) -> list[FieldElement]:
    """A Z-basis of L consisting of totally positive elements.

    Construction mirrors the covolume-minimizing swap argument: start from
    independent totally positive lattice points, then replace basis vectors
    by fractional combinations x = sum a_i x_i (0 <= a_i < 1) found in L
    until the spanned sublattice is all of L.  Each swap keeps every vector
    in the open positive cone and strictly divides the index.
    """
    F = L.field
    d = F.degree
    w_basis = L.basis_elements()
    v0 = _find_totally_positive(L)
    # x_i = M_i * v0 + w_i with M_i large enough for total positivity
    xs = []
    for i, wv in enumerate(w_basis):
        m = 1
        while True:
            cand = v0 * m + wv
            if not cand.is_zero() and cand.is_totally_positive():
                break
            m *= 2
        xs.append(cand)
    # make them independent: perturb by further multiples of v0 if needed
    def coord_matrix(vecs):
        Lmat = [[Fraction(x) for x in r] for r in
                [list(e.coords) for e in vecs]]
        return Lmat

    def index_in_L(vecs):
        # solve: vecs = C * (L basis); index = |det C|
        base = [[Fraction(x, L.den) for x in r] for r in L.rows]
        binv = intmat.rat_inv(base)
        C = intmat.mat_mul(coord_matrix(vecs), binv)
        for row in C:
            for x in row:
                assert Fraction(x).denominator == 1
        return abs(intmat.det_fraction(C)), C

    bump = 1
    while True:
        idx, C = index_in_L(xs)
        if idx != 0:
            break
        xs[d - 1] = xs[d - 1] + v0 * (2 * bump + 1)
        bump += 1
    # swap-reduce the index to 1
    while idx > 1:
        Cint = [[int(x) for x in row] for row in C]
        M = intmat.transpose(Cint)
        U, S, V = intmat.snf_with_transforms(M)
        Uinv = intmat.rat_inv([[Fraction(x) for x in r] for r in U])
        # a coset of Z^d / C-span other than 0: take the last SNF axis
        j_ax = max(i for i in range(d) if S[i][i] > 1)
        kvec = [0] * d
        kvec[j_ax] = 1
        y = [sum(Uinv[i][j] * kvec[j] for j in range(d)) for i in range(d)]
        # y in L-basis coords; fractional coefficients w.r.t. xs:
        Cinv = intmat.rat_inv(C)
        a = [sum(Fraction(y[j]) * Cinv[j][i] for j in range(d)) for i in range(d)]
        a = [x - x.__floor__() for x in a]
        if all(x == 0 for x in a):
            raise AssertionError("coset representative collapsed to the sublattice")
        x_new = F.zero()
        base_elems = L.basis_elements()
        yfrac = [Fraction(0)] * d
        for i in range(d):
            if a[i]:
                for j in range(d):
                    yfrac[j] += a[i] * Fraction(xs[i].coords[j])
        x_new = F.element(yfrac)
        assert L.contains_element(x_new)
        j_swap = next(i for i in range(d) if a[i] != 0)
        xs[j_swap] = x_new
        idx, C = index_in_L(xs)
    for x in xs:
        assert x.is_totally_positive()
    return xs


def avoid_primes(L: FractionalIdeal, primes: list[FractionalIdeal]) -> FieldElement:
    """A totally positive element of L outside every p*L (the multi-prime
    avoidance trick shared by Lemma 2.8, Lemma 2.9 and the representative
    matrix construction)."""
    F = L.field
    if not primes:
        return positive_basis(L)[0]
    full = L
    for p in primes:
        full = full * p
    terms = []
    for i, p in enumerate(primes):
        ci = full * p.inverse()  # product over the other primes, times L
        ai = _find_totally_positive(ci, avoid=full)
        terms.append(ai)
    a = terms[0]
    for t in terms[1:]:
        a = a + t
    for p in primes:
        assert not (L * p).contains_element(a), "avoidance failed"
    assert a.is_totally_positive() and L.contains_element(a)
    return a


def lemma_2_8_generator(a_ideal: FractionalIdeal, m_ideal: FractionalIdeal) -> FieldElement:
    """Totally positive a in the (possibly fractional) ideal with
    a*O = a_ideal * n, n integral and coprime to m_ideal."""
    primes = [P for P, _e in factor(m_ideal)]
    a = avoid_primes(a_ideal, primes)
    n = FractionalIdeal.principal(a) * a_ideal.inverse()
    assert n.is_integral() and n.is_coprime(m_ideal)
    return a


def coprime_representative(r: FractionalIdeal, m_ideal: FractionalIdeal,
                           narrow_safe: bool = True) -> FractionalIdeal:
    """An integral ideal coprime to m in the same (narrow and wide) class."""
    a = lemma_2_8_generator(r.inverse(), m_ideal)
    n = FractionalIdeal.principal(a) * r
    assert n.is_integral() and n.is_coprime(m_ideal)
    return n


def lemma_2_9_representatives(b_ideal: FractionalIdeal, m_ideal: FractionalIdeal
                              ) -> list[FractionalIdeal]:
    """Representatives t_lambda of the narrow class group such that
    b * different * t_lambda is integral and coprime to m, per the
    c0/c'-splitting construction."""
    F = b_ideal.field
    d = different_ideal(F)
    cg_plus = class_group(F, "narrow")
    out = []
    for _exps, c_rep in cg_plus.all_classes():
        bdc = b_ideal * d * c_rep
        # split off the part supported on primes of m
        c0 = FractionalIdeal.ring(F)
        for P, _e in factor(m_ideal):
            v = bdc.valuation(P)
            if v > 0:
                c0 = c0 * P ** v
        c = positive_basis(c0)[0]
        n = FractionalIdeal.principal(c) * c0.inverse()
        a = lemma_2_8_generator(n, m_ideal)
        t = c_rep * (a / c)
        check = b_ideal * d * t
        assert check.is_integral() and check.is_coprime(m_ideal)
        out.append(t)
    return out


# -- representative matrices for every cusp class ---------------------------------------


@dataclass(frozen=True)
class CuspRepresentative:
    matrix: Mat2
    lam: int                      # index into the narrow-class representative list
    class_label: FractionalIdeal  # r0 (integral, coprime to the level data)
    n1: FractionalIdeal
    n2: FractionalIdeal
    is_infinity: bool = False


def solve_bezout_pair(alpha: FieldElement, gamma: FieldElement,
                      delta_lattice: FractionalIdeal, beta_lattice: FractionalIdeal
                      ) -> tuple[FieldElement, FieldElement]:
    """Find delta in delta_lattice and beta in beta_lattice with
    alpha*delta - beta*gamma = 1 (requires alpha*delta_lattice +
    gamma*beta_lattice = O, which the caller guarantees)."""
    F = alpha.field
    d = F.degree
    cols = []
    gens = []
    for e in delta_lattice.basis_elements():
        cols.append(list((alpha * e).coords))
        gens.append(("delta", e))
    for e in beta_lattice.basis_elements():
        cols.append(list((-gamma * e).coords))
        gens.append(("beta", e))
    # integer solution of  [cols] * v = coords(1)
    mat = [[Fraction(cols[j][i]) for j in range(len(cols))] for i in range(d)]
    imat, scale = intmat.clear_denominators(mat)
    one_coords = [scale if i == 0 else 0 for i in range(d)]
    sol = intmat.solve_integer(imat, one_coords)
    if sol is None:
        raise FieldError("Bezout step failed: lattices do not sum to O")
    delta = F.zero()
    beta = F.zero()
    for v, (kind, e) in zip(sol, gens):
        if v:
            if kind == "delta":
                delta = delta + e * v
            else:
                beta = beta + e * v
    assert (alpha * delta - beta * gamma) == F.one()
    return delta, beta


def prop_3_9_matrix(F: FieldDescription, t_lambda: FractionalIdeal,
                    r0: FractionalIdeal, b_ideal: FractionalIdeal,
                    lam: int = 0) -> CuspRepresentative:
    """A matrix A in SL2(F) with il(A) = class of r0 and
    alpha O = n2 r0, beta in (d t r0)^-1, gamma O = n1 d t r0, delta in r0^-1,
    where n1 + n2 = O and n1 + b = O."""
    d = different_ideal(F)
    dtr = d * t_lambda * r0
    primes_b = [P for P, _e in factor(b_ideal)]
    gamma = avoid_primes(dtr, primes_b)
    n1 = FractionalIdeal.principal(gamma) * dtr.inverse()
    assert n1.is_integral() and n1.is_coprime(b_ideal)
    alpha = lemma_2_8_generator(r0, n1)
    n2 = FractionalIdeal.principal(alpha) * r0.inverse()
    assert n2.is_integral() and n2.is_coprime(n1)
    delta, beta = solve_bezout_pair(alpha, gamma, r0.inverse(), dtr.inverse())
    m = Mat2(alpha, beta, gamma, delta)
    assert m.det() == F.one()
    # the four ideal invariants
    assert FractionalIdeal.principal(alpha) == n2 * r0
    assert dtr.inverse().contains_element(beta)
    assert FractionalIdeal.principal(gamma) == n1 * dtr
    assert r0.inverse().contains_element(delta)
    return CuspRepresentative(m, lam, r0, n1, n2)


def enumerate_cusps(F: FieldDescription, t_lambda: FractionalIdeal,
                    b_ideal: FractionalIdeal, lam: int = 0,
                    m_ideal: FractionalIdeal | None = None) -> list[CuspRepresentative]:
    """One representative per wide ideal class (the il bijection), the
    class of infinity first with the identity matrix."""
    cg = class_group(F, "wide")
    O = FractionalIdeal.ring(F)
    if m_ideal is None:
        m_ideal = b_ideal
    out = [CuspRepresentative(identity_mat(F), lam, O, O, O, is_infinity=True)]
    for exps, rep in cg.all_classes():
        if all(e == 0 for e in exps):
            continue
        r0 = coprime_representative(rep, m_ideal) if not rep.is_coprime(m_ideal) else rep
        out.append(prop_3_9_matrix(F, t_lambda, r0, b_ideal, lam))
    return out


# -- random group elements (exact, for invariance tests) ---------------------------------


def random_sl2(F: FieldDescription, rng, size: int = 3, steps: int = 4) -> Mat2:
    """Random element of SL2(F) as a short product of elementary matrices."""
    m = identity_mat(F)
    d = F.degree
    for _ in range(steps):
        coords = [Fraction(rng.randint(-size, size), rng.randint(1, 3)) for _ in range(d)]
        x = F.element(coords)
        if rng.random() < 0.5:
            m = m * mat2(F, (1, x, 0, 1))
        else:
            m = m * mat2(F, (1, 0, x, 1))
    return m


def random_member(spec: GroupSpec, rng, size: int = 2, steps: int = 4) -> Mat2:
    """Random element of Gamma^1(level; O, twist) built from elementary
    matrices adapted to the entry lattices."""
    F = spec.field()
    d = different_ideal(F)
    b_lat = (spec.twist * d).inverse()
    c_lat = spec.level * spec.twist * d
    b_basis = b_lat.basis_elements()
    c_basis = c_lat.basis_elements()
    m = identity_mat(F)
    for _ in range(steps):
        which = rng.random()
        if which < 0.45:
            x = F.zero()
            for e in b_basis:
                x = x + e * rng.randint(-size, size)
            m = m * mat2(F, (1, x, 0, 1))
        elif which < 0.9:
            x = F.zero()
            for e in c_basis:
                x = x + e * rng.randint(-size, size)
            m = m * mat2(F, (1, 0, x, 1))
        else:
            u = F.unit_generators[0] if F.degree > 1 else F.coerce(-1)
            e = rng.choice([-1, 1])
            m = m * mat2(F, (u ** e, 0, 0, u ** (-e)))
    assert is_member(m, GroupSpec(spec.level, spec.twist, "one"))
    return m


def random_upper_triangular(F: FieldDescription, rng, size: int = 3) -> Mat2:
    """Random element of B1(F)."""
    while True:
        t = F.element([Fraction(rng.randint(-size, size), rng.randint(1, 3))
                       for _ in range(F.degree)])
        if not t.is_zero():
            break
    x = F.element([Fraction(rng.randint(-size, size), rng.randint(1, 3))
                   for _ in range(F.degree)])
    return Mat2(t, x, F.zero(), F.one() / t)
