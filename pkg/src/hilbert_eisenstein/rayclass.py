"""Narrow ray class groups Cl(b), their characters, and Gauss sums.

Cl(b) is realized through the exact sequence

    1 -> ((O/b)^x  x  {+-1}^d) / im(O^x) -> Cl(b) -> Cl_F^+ -> 1

with an explicit section: narrow-class representatives coprime to b and a
precomputed 2-cocycle of totally positive multipliers.  Everything is exact;
character values are stored as root-of-unity exponents and only leave Q(zeta)
at the numeric boundary.

Gauss sums tau(psi) = sum_{x in b^-1 d^-1 / d^-1} sgn(x)^r psi(x b d) e_F(x)
accumulate in exact cyclotomic arithmetic.  For a character of conductor O
the sum degenerates to the single class of 0, whose well-defined coset value
is psi(d); this is returned directly.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import count, product

from .abelian import FiniteAbelianGroup
from .cyclotomic import Cyc
from .field import FieldDescription, FieldElement, FieldError
from .ideals import (FractionalIdeal, class_group, coset_representatives,
                     factor, is_principal)
from .cusps import avoid_primes, coprime_representative, different_ideal

RAY_CLASS_NORM_BOUND = 10 ** 5

_group_cache: dict[tuple, "NarrowRayClassGroup"] = {}


class ResidueRing:
    """(O/b) with canonical representatives and its unit group."""

    def __init__(self, modulus: FractionalIdeal):
        self.modulus = modulus
        self.field = modulus.field
        F = self.field
        O = FractionalIdeal.ring(F)
        self.zero_key = self.key(F.zero())
        units = []
        for rep in coset_representatives(O, modulus):
            r = modulus.reduce_element(rep)
            if modulus.is_ring():
                units.append(self.key(r))
                continue
            if r.is_zero():
                continue
            if (FractionalIdeal.principal(r) + modulus).is_ring():
                units.append(self.key(r))
        self._elements = {}
        for k in units:
            self._elements[k] = self.field.element(k)
        self.unit_keys = sorted(units)
        one_key = self.key(F.one()) if not modulus.is_ring() else self.zero_key
        self.one_key = one_key
        self.units = FiniteAbelianGroup(one_key, self.mul_keys, self.unit_keys)

    def key(self, x: FieldElement) -> tuple:
        r = self.modulus.reduce_element(x)
        return tuple(r.coords)

    def mul_keys(self, a: tuple, b: tuple) -> tuple:
        if self.modulus.is_ring():
            return self.zero_key
        ea = self.field.element(a)
        eb = self.field.element(b)
        return self.key(ea * eb)

    def residue_of_coprime(self, x: FieldElement) -> tuple:
        """Residue of a (possibly non-integral) x whose ideal is coprime to b."""
        if self.modulus.is_ring():
            return self.zero_key
        if x.is_integral():
            return self.key(x)
        den_ideal = FractionalIdeal.ring(self.field).colon(
            FractionalIdeal.principal(x) + FractionalIdeal.ring(self.field))
        primes = [P for P, _e in factor(self.modulus)]
        c = avoid_primes(den_ideal, primes)
        num_key = self.key(c * x)
        c_inv = self.units.inverse(self.key(c))
        return self.mul_keys(num_key, c_inv)


def _sign_tuple_mul(a: tuple, b: tuple) -> tuple:
    return tuple(x * y for x, y in zip(a, b))


class NarrowRayClassGroup:
    """Cl(b) with SNF basis, discrete logs, and coprime representative ideals."""

    def __init__(self, field: FieldDescription, modulus: FractionalIdeal):
        if not modulus.is_integral() or modulus.norm() == 0:
            raise FieldError("ray class modulus must be a nonzero integral ideal")
        if modulus.norm() > RAY_CLASS_NORM_BOUND:
            raise FieldError(f"modulus norm exceeds the bound {RAY_CLASS_NORM_BOUND}")
        self.field = field
        self.modulus = modulus
        F = field
        d = F.degree
        self.cl_plus = class_group(F, "narrow")
        self.residues = ResidueRing(modulus)
        # representatives of Cl_F^+ coprime to the modulus
        self.t_reps: dict[tuple, FractionalIdeal] = {}
        for exps, rep in self.cl_plus.all_classes():
            if not rep.is_coprime(modulus):
                rep = coprime_representative(rep, modulus)
            self.t_reps[exps] = rep

        # image of the global units in (O/b)^x x {+-1}^d
        plus = tuple([1] * d)
        unit_gens = [(-F.one())] + list(F.unit_generators)
        w_gens = [(self.residues.residue_of_coprime(u), u.signs()) for u in unit_gens]
        W = {(self.residues.one_key, plus)}
        frontier = list(W)
        while frontier:
            nxt = []
            for el in frontier:
                for g in w_gens:
                    y = (self.residues.mul_keys(el[0], g[0]), _sign_tuple_mul(el[1], g[1]))
                    if y not in W:
                        W.add(y)
                        nxt.append(y)
            frontier = nxt
        self._W = sorted(W)

        def coset_label(rv):
            res, sg = rv
            return min((self.residues.mul_keys(res, wr), _sign_tuple_mul(sg, ws))
                       for wr, ws in self._W)

        self._coset_label = coset_label
        self._g0_identity = coset_label((self.residues.one_key, plus))

        # 2-cocycle of the section: t_a * t_b = x * t_(a+b), x totally positive
        self._cocycle: dict[tuple, tuple] = {}
        cl_exps = [exps for exps, _ in self.cl_plus.all_classes()]
        for e1 in cl_exps:
            for e2 in cl_exps:
                e3 = self._cl_add(e1, e2)
                quot = self.t_reps[e1] * self.t_reps[e2] * self.t_reps[e3].inverse()
                ok, x = is_principal(quot, narrow=True)
                assert ok, "section quotient must be narrowly principal"
                self._cocycle[(e1, e2)] = self._coset_label(
                    (self.residues.residue_of_coprime(x), plus))

        def op(a, b):
            (l1, g1), (l2, g2) = a, b
            l3 = self._cl_add(l1, l2)
            r1, s1 = g1
            r2, s2 = g2
            rc, sc = self._cocycle[(l1, l2)]
            rv = (self.residues.mul_keys(self.residues.mul_keys(r1, r2), rc),
                  _sign_tuple_mul(_sign_tuple_mul(s1, s2), sc))
            return (l3, coset_label(rv))

        identity = (self._cl_zero(), self._g0_identity)
        gens = [(exps, self._g0_identity) for exps in cl_exps]
        for uk in self.residues.units.basis:
            gens.append((self._cl_zero(), coset_label((uk, plus))))
        for i in range(d):
            sg = tuple(-1 if j == i else 1 for j in range(d))
            gens.append((self._cl_zero(), coset_label((self.residues.one_key, sg))))
        self.group = FiniteAbelianGroup(identity, op, gens)
        expected = (self.cl_plus.h * len(self.residues.unit_keys) * 2 ** d) // len(self._W)
        assert self.group.order == expected, "ray class order mismatch"
        self._sign_elements: dict[tuple, FieldElement] | None = None

    # -- small helpers -------------------------------------------------------

    def _cl_zero(self) -> tuple:
        return tuple([0] * len(self.cl_plus.group.orders))

    def _cl_add(self, a: tuple, b: tuple) -> tuple:
        return tuple((x + y) % e for x, y, e in zip(a, b, self.cl_plus.group.orders)) \
            if self.cl_plus.group.orders else ()

    @property
    def order(self) -> int:
        return self.group.order

    def structure(self) -> list[int]:
        return list(self.group.orders)

    # -- discrete logs ----------------------------------------------------------

    def label_of_ideal(self, ideal: FractionalIdeal) -> tuple:
        if not ideal.is_coprime(self.modulus):
            raise FieldError("ideal is not coprime to the modulus")
        lam = self.cl_plus.dlog(ideal)
        quot = ideal * self.t_reps[lam].inverse()
        ok, x = is_principal(quot, narrow=True)
        assert ok
        plus = tuple([1] * self.field.degree)
        g0 = self._coset_label((self.residues.residue_of_coprime(x), plus))
        return (lam, g0)

    def dlog(self, ideal: FractionalIdeal) -> tuple[int, ...]:
        return self.group.dlog(self.label_of_ideal(ideal))

    def label_of_pair(self, residue: FieldElement, signs: tuple) -> tuple:
        """Label of the class of aO for integral a with given residue/signs."""
        return (self._cl_zero(),
                self._coset_label((self.residues.key(residue), signs)))

    def basis_representative_ideals(self, coprime_to: FractionalIdeal | None = None
                                    ) -> list[FractionalIdeal]:
        return [self.representative_ideal(self.group.dlog(b), coprime_to)
                for b in self.group.basis]

    def representative_ideal(self, exps: tuple, coprime_to: FractionalIdeal | None = None
                             ) -> FractionalIdeal:
        """An integral ideal in the class with the given dlog exponents,
        coprime to the modulus (and to ``coprime_to`` when supplied)."""
        lam, g0 = self.group.from_exponents(exps)
        res_key, signs = g0
        a = self._element_with(res_key, signs, coprime_to)
        out = self.t_reps[lam] * a
        if not out.is_integral():
            # clear the (coprime) denominator by a positive rational integer
            out = out * out.den
        assert out.is_coprime(self.modulus)
        assert self.group.dlog(self.label_of_ideal(out)) == tuple(
            e % o for e, o in zip(exps, self.group.orders)) if self.group.orders else True
        return out

    def _element_with(self, res_key: tuple, signs: tuple,
                      coprime_to: FractionalIdeal | None = None) -> FieldElement:
        """Integral element with prescribed residue mod b and sign vector."""
        F = self.field
        base = F.element(res_key)
        basis = self.modulus.basis_elements()
        d = F.degree
        for radius in count(1):
            box = range(-radius, radius + 1)
            for coords in product(box, repeat=d):
                x = base
                for c, bvec in zip(coords, basis):
                    x = x + bvec * c
                if x.is_zero():
                    continue
                if x.signs() != tuple(signs):
                    continue
                xi = FractionalIdeal.principal(x)
                if not self.modulus.is_ring() and not (xi + self.modulus).is_ring():
                    continue
                if coprime_to is not None and not xi.is_coprime(coprime_to):
                    continue
                return x
            if radius > 40:
                raise FieldError("sign/residue element search exhausted")

    def sign_pattern_elements(self) -> dict[tuple, FieldElement]:
        """Elements = 1 mod b realizing every sign pattern in {+-1}^d."""
        if self._sign_elements is None:
            F = self.field
            out = {}
            for signs in product((1, -1), repeat=F.degree):
                one_key = self.residues.key(F.one())
                out[signs] = self._element_with(one_key, signs)
            self._sign_elements = out
        return self._sign_elements


def ray_class_group(F: FieldDescription, modulus: FractionalIdeal) -> NarrowRayClassGroup:
    key = (id(F), modulus.key())
    if key not in _group_cache:
        _group_cache[key] = NarrowRayClassGroup(F, modulus)
    return _group_cache[key]


class RayClassCharacter:
    """A character of Cl(b), stored as exponents on the SNF basis."""

    def __init__(self, group: NarrowRayClassGroup, exponents):
        self.group = group
        exps = []
        for x, e in zip(exponents, group.group.orders):
            x = Fraction(x) % 1
            if (x * e).denominator != 1:
                raise FieldError("character exponent incompatible with generator order")
            exps.append(x)
        self.exponents = tuple(exps)
        self._conductor: FractionalIdeal | None = None
        self._signature: tuple[int, ...] | None = None

    # -- basic structure ----------------------------------------------------------

    def is_trivial(self) -> bool:
        return all(x == 0 for x in self.exponents)

    def __mul__(self, other: "RayClassCharacter") -> "RayClassCharacter":
        assert self.group is other.group
        return RayClassCharacter(self.group,
                                 [a + b for a, b in zip(self.exponents, other.exponents)])

    def inverse(self) -> "RayClassCharacter":
        return RayClassCharacter(self.group, [-a for a in self.exponents])

    def __eq__(self, other) -> bool:
        return (isinstance(other, RayClassCharacter) and self.group is other.group
                and self.exponents == other.exponents)

    def __hash__(self):
        return hash((id(self.group), self.exponents))

    # -- evaluation -------------------------------------------------------------------

    def exponent_at(self, ideal: FractionalIdeal) -> Fraction | None:
        """e(x) exponent of psi(ideal), or None when not coprime (value 0)."""
        if not ideal.is_coprime(self.group.modulus):
            return None
        dl = self.group.dlog(ideal)
        return sum((Fraction(k) * x for k, x in zip(dl, self.exponents)), Fraction(0)) % 1

    def evaluate(self, ideal: FractionalIdeal) -> Cyc:
        ex = self.exponent_at(ideal)
        if ex is None:
            return Cyc.rational(0)
        return Cyc.root_of_unity(ex)

    def evaluate_f(self, a: FieldElement) -> Cyc:
        """psi_f(a) = psi(aO) sgn(a)^r on residues coprime to the modulus."""
        a = self.group.field.coerce(a)
        if a.is_zero():
            return Cyc.rational(1 if self.is_trivial() else 0)
        ideal = FractionalIdeal.principal(a)
        if not ideal.is_coprime(self.group.modulus):
            return Cyc.rational(0)
        val = self.evaluate(ideal)
        return val * a.sgn_power(self.signature())

    # -- signature ---------------------------------------------------------------------

    def signature(self) -> tuple[int, ...]:
        """The vector r with psi(aO) = sgn(a)^r for a = 1 mod b."""
        if self._signature is not None:
            return self._signature
        F = self.group.field
        d = F.degree
        pattern_elements = self.group.sign_pattern_elements()
        r = []
        for i in range(d):
            signs = tuple(-1 if j == i else 1 for j in range(d))
            a = pattern_elements[signs]
            v = self.evaluate(FractionalIdeal.principal(a)).rational()
            if v == 1:
                r.append(0)
            elif v == -1:
                r.append(1)
            else:
                raise AssertionError("signature evaluation must be +-1")
        r = tuple(r)
        for signs, a in pattern_elements.items():
            v = self.evaluate(FractionalIdeal.principal(a)).rational()
            expected = 1
            for s, e in zip(signs, r):
                if e:
                    expected *= s
            assert v == expected, "signature relation failed on a sign pattern"
        self._signature = r
        return r

    # -- conductor and primitivization ----------------------------------------------------

    def conductor(self) -> FractionalIdeal:
        if self._conductor is not None:
            return self._conductor
        F = self.group.field
        b = self.group.modulus
        divisors = _ideal_divisors(b)
        divisors.sort(key=lambda I: (I.norm(), I.key()))
        for c in divisors:
            if self._factors_through(c):
                self._conductor = c
                return c
        raise AssertionError("a character always factors through its own modulus")

    def _factors_through(self, c: FractionalIdeal) -> bool:
        if c == self.group.modulus:
            return True
        Gc = ray_class_group(self.group.field, c)
        zero = tuple([0] * len(Gc.group.orders))
        for exps in self.group.group.all_exponents():
            ideal = self.group.representative_ideal(exps)
            if Gc.dlog(ideal) == zero:
                val = sum((Fraction(k) * x for k, x in zip(exps, self.exponents)),
                          Fraction(0)) % 1
                if val != 0:
                    return False
        return True

    def primitivize(self) -> "RayClassCharacter":
        c = self.conductor()
        if c == self.group.modulus:
            return self
        Gc = ray_class_group(self.group.field, c)
        images = []
        for bideal in Gc.basis_representative_ideals(coprime_to=self.group.modulus):
            ex = self.exponent_at(bideal)
            assert ex is not None
            images.append(ex)
        chi = RayClassCharacter(Gc, images)
        assert chi.conductor() == c
        return chi

    def is_primitive(self) -> bool:
        return self.conductor() == self.group.modulus

    def restrict_to(self, G_big: NarrowRayClassGroup) -> "RayClassCharacter":
        """Pull back through Cl(big modulus) -> Cl(own modulus)."""
        images = []
        for bideal in G_big.basis_representative_ideals(coprime_to=self.group.modulus):
            ex = self.exponent_at(bideal)
            assert ex is not None
            images.append(ex)
        return RayClassCharacter(G_big, images)

    def __repr__(self):
        return f"RayClassCharacter(mod N={self.group.modulus.norm()}, exps={self.exponents})"


def characters(G: NarrowRayClassGroup) -> list[RayClassCharacter]:
    """All #G characters, ordered by exponent tuples."""
    out = []
    for nums in product(*[range(e) for e in G.group.orders]):
        out.append(RayClassCharacter(G, [Fraction(n, e) for n, e in
                                         zip(nums, G.group.orders)]))
    if not G.group.orders:
        out.append(RayClassCharacter(G, []))
    return out


def _ideal_divisors(b: FractionalIdeal) -> list[FractionalIdeal]:
    F = b.field
    out = [FractionalIdeal.ring(F)]
    for P, e in factor(b):
        out = [I * P ** k for I in out for k in range(e + 1)]
    return out


def gauss_sum(psi: RayClassCharacter, exact: bool = True) -> Cyc:
    """tau(psi) as an exact cyclotomic number, on psi's own modulus."""
    G = psi.group
    F = G.field
    b = G.modulus
    d_ideal = different_ideal(F)
    if b.is_ring():
        return psi.evaluate(d_ideal)
    dinv = d_ideal.inverse()
    dom = b.inverse() * dinv
    total = Cyc.rational(0)
    r = psi.signature()
    bd = b * d_ideal
    for x in coset_representatives(dom, dinv):
        if x.is_zero():
            continue
        ideal = FractionalIdeal.principal(x) * bd
        if not ideal.is_coprime(b):
            continue
        val = psi.evaluate(ideal)
        sgn = x.sgn_power(r)
        tr = Fraction(x.trace()) % 1
        total = total + val * Cyc.root_of_unity(tr, sgn)
    return total
