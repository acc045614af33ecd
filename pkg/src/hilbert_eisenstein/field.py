"""Totally real number fields: exact elements, embeddings, signs, units.

Elements are stored by their coordinates over the integral basis, so
integrality is a denominator check.  Real embeddings are isolating rational
intervals refined on demand; every sign decision is exact (interval refined
until 0 is excluded), never floating point.

Full algorithmic support (units, class groups, factorization) is guaranteed
for degrees 1 and 2.  Degree >= 3 fields are accepted with user-supplied
unit generators; operations that would need more raise
InsufficientFieldDataError.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, isqrt, lcm

from . import intmat
from .quadcf import fundamental_unit_sqrtD


class FieldError(ValueError):
    pass


class InsufficientFieldDataError(FieldError):
    """Degree >= 3 operation that needs class-group or unit data we lack."""


class UnsupportedScopeError(FieldError):
    """Documented scope boundary (e.g. numeric k = 1 L-values over general F)."""


# -- rational interval helpers ------------------------------------------------

def _iv_add(a, b):
    return (a[0] + b[0], a[1] + b[1])

def _iv_mul(a, b):
    prods = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(prods), max(prods))

def _iv_scale(a, c):
    return (a[0] * c, a[1] * c) if c >= 0 else (a[1] * c, a[0] * c)


def _poly_eval_interval(coeffs, iv):
    """Horner evaluation of a polynomial with Fraction coefficients on an interval."""
    acc = (Fraction(coeffs[-1]), Fraction(coeffs[-1]))
    for c in reversed(coeffs[:-1]):
        acc = _iv_mul(acc, iv)
        acc = _iv_add(acc, (Fraction(c), Fraction(c)))
    return acc


def _poly_eval(coeffs, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _sturm_sequence(coeffs):
    def deriv(p):
        return [i * c for i, c in enumerate(p)][1:]

    def pmod(a, b):
        a = [Fraction(x) for x in a]
        b = [Fraction(x) for x in b]
        while len(a) >= len(b) and any(a):
            f = a[-1] / b[-1]
            shift = len(a) - len(b)
            for i, c in enumerate(b):
                a[i + shift] -= f * c
            while len(a) > 1 and a[-1] == 0:
                a.pop()
            if all(x == 0 for x in a):
                return [Fraction(0)]
        return a

    seq = [[Fraction(c) for c in coeffs], [Fraction(c) for c in deriv(coeffs)]]
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        nxt = [-c for c in pmod(seq[-2], seq[-1])]
        if all(c == 0 for c in nxt):
            break
        seq.append(nxt)
    return seq


def _sign_changes(seq, x: Fraction) -> int:
    signs = []
    for p in seq:
        v = _poly_eval(p, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def isolate_real_roots(coeffs) -> list[tuple[Fraction, Fraction]]:
    """Disjoint isolating intervals for all real roots of a squarefree
    integer polynomial, sorted descending (largest root first)."""
    deg = len(coeffs) - 1
    if deg == 1:
        r = Fraction(-coeffs[0], coeffs[1])
        return [(r, r)]
    bound = Fraction(1) + max(abs(Fraction(c, coeffs[-1])) for c in coeffs[:-1])
    seq = _sturm_sequence(coeffs)

    def count(lo, hi):
        return _sign_changes(seq, lo) - _sign_changes(seq, hi)

    out = []
    stack = [(-bound, bound)]
    while stack:
        lo, hi = stack.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1 and _poly_eval(coeffs, lo) != 0 and _poly_eval(coeffs, hi) != 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if _poly_eval(coeffs, mid) == 0:  # rational root: nudge the cut
            mid += Fraction(1, (hi - lo).denominator * 7919)
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda iv: iv[0], reverse=True)
    return out


class EmbeddingInterval:
    """Refinable isolating interval for one real root of the defining polynomial."""

    def __init__(self, coeffs, lo: Fraction, hi: Fraction):
        self.coeffs = [Fraction(c) for c in coeffs]
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)

    def refine(self) -> None:
        if self.lo == self.hi:
            return
        mid = (self.lo + self.hi) / 2
        vm = _poly_eval(self.coeffs, mid)
        if vm == 0:
            # exact rational root (degree-1 case only); collapse
            self.lo = self.hi = mid
            return
        vl = _poly_eval(self.coeffs, self.lo)
        if (vl > 0) == (vm > 0):
            self.lo = mid
        else:
            self.hi = mid

    def width(self) -> Fraction:
        return self.hi - self.lo

    def interval(self) -> tuple[Fraction, Fraction]:
        return (self.lo, self.hi)


_ELEMENT_TERM = re.compile(r"^\s*([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*(?:(\*)?\s*(w))?\s*$")


@dataclass(frozen=True)
class FieldElement:
    field: "FieldDescription"
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    # arithmetic -------------------------------------------------------------

    def __add__(self, other) -> FieldElement:
        if not isinstance(other, (FieldElement, int, Fraction, str)):
            return NotImplemented
        other = self.field.coerce(other)
        return FieldElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    __radd__ = __add__

    def __neg__(self) -> FieldElement:
        return FieldElement(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other) -> FieldElement:
        return self + (-self.field.coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)):
            return FieldElement(self.field, tuple(a * other for a in self.coords))
        if not isinstance(other, (FieldElement, str)):
            return NotImplemented
        other = self.field.coerce(other)
        d = self.field.degree
        out = [Fraction(0)] * d
        table = self.field.mult_table
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        ab = a * b
                        for k, t in enumerate(table[i][j]):
                            if t:
                                out[k] += ab * t
        return FieldElement(self.field, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other) -> FieldElement:
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / other)
        other = self.field.coerce(other)
        sol = intmat.rat_solve(other.regular_matrix_columns(), list(self.coords))
        return FieldElement(self.field, tuple(sol))

    def __rtruediv__(self, other):
        return self.field.coerce(other) / self

    def __pow__(self, n: int) -> FieldElement:
        if n < 0:
            return (self.field.one() / self) ** (-n)
        r = self.field.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    # structure ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def denominator(self) -> int:
        return lcm(*[c.denominator for c in self.coords]) if self.field.degree > 1 \
            else self.coords[0].denominator

    def rational_value(self) -> Fraction | None:
        if all(c == 0 for c in self.coords[1:]):
            return self.coords[0]
        return None

    def regular_matrix_columns(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self on the w-basis (columns = images)."""
        d = self.field.degree
        cols = []
        for j in range(d):
            img = self * self.field.basis_element(j)
            cols.append(list(img.coords))
        return [[cols[j][i] for j in range(d)] for i in range(d)]

    def trace(self) -> Fraction:
        m = self.regular_matrix_columns()
        return sum(m[i][i] for i in range(self.field.degree))

    def norm(self) -> Fraction:
        return intmat.det_fraction(self.regular_matrix_columns())

    # embeddings ---------------------------------------------------------------

    def power_basis_coeffs(self) -> list[Fraction]:
        """Coordinates over 1, theta, theta^2, ... (theta = defining root)."""
        d = self.field.degree
        out = [Fraction(0)] * d
        for i, c in enumerate(self.coords):
            if c:
                for k, b in enumerate(self.field.basis_in_power[i]):
                    out[k] += c * b
        return out

    def embedding_intervals(self, max_width: Fraction | None = None):
        coeffs = self.power_basis_coeffs()
        out = []
        for emb in self.field.embeddings:
            iv = _poly_eval_interval(coeffs, emb.interval())
            if max_width is not None:
                while iv[1] - iv[0] > max_width:
                    emb.refine()
                    iv = _poly_eval_interval(coeffs, emb.interval())
            out.append(iv)
        return out

    def embedding_floats(self) -> tuple[float, ...]:
        ivs = self.embedding_intervals(max_width=Fraction(1, 2 ** 64))
        return tuple(float((lo + hi) / 2) for lo, hi in ivs)

    def signs(self) -> tuple[int, ...]:
        """Exact sign at each real embedding; raises on the zero element."""
        if self.is_zero():
            raise FieldError("sign of the zero element is undefined")
        coeffs = self.power_basis_coeffs()
        out = []
        for emb in self.field.embeddings:
            for _ in range(20000):
                lo, hi = _poly_eval_interval(coeffs, emb.interval())
                if lo > 0:
                    out.append(1)
                    break
                if hi < 0:
                    out.append(-1)
                    break
                emb.refine()
            else:
                raise FieldError("embedding refinement did not separate from 0")
        return tuple(out)

    def is_totally_positive(self) -> bool:
        return all(s > 0 for s in self.signs())

    def sgn_power(self, exponents) -> int:
        """prod_sigma sgn(a^sigma)^(q_sigma) for an exponent vector q over Z/2."""
        s = self.signs()
        v = 1
        for sig, q in zip(s, exponents):
            if q % 2:
                v *= sig
        return v

    def __repr__(self):
        names = ["", "w"] + [f"w{i}" for i in range(2, self.field.degree)]
        parts = []
        for c, n in zip(self.coords, names):
            if c:
                parts.append(f"{c}" if not n else (f"{c}*{n}" if c != 1 else n))
        return " + ".join(parts) if parts else "0"


class FieldDescription:
    """A totally real field: defining data, exact embeddings, unit generators."""

    def __init__(self, poly, basis_in_power, unit_generators_coords=None,
                 quadratic_D: int | None = None, class_data: dict | None = None):
        self.poly = tuple(int(c) for c in poly)  # monic, c0..cd
        self.degree = len(self.poly) - 1
        if self.poly[-1] != 1:
            raise FieldError("defining polynomial must be monic")
        self.basis_in_power = [[Fraction(x) for x in row] for row in basis_in_power]
        self.quadratic_D = quadratic_D
        self.class_data = class_data
        roots = isolate_real_roots(list(self.poly))
        if len(roots) != self.degree:
            raise FieldError("polynomial is not totally real (or not squarefree)")
        self.embeddings = [EmbeddingInterval(self.poly, lo, hi) for lo, hi in roots]
        self._power_to_basis = intmat.rat_inv(
            [[self.basis_in_power[j][i] for j in range(self.degree)] for i in range(self.degree)])
        self.mult_table = self._build_mult_table()
        self.discriminant = self._discriminant()
        self.unit_generators: list[FieldElement] = []
        if unit_generators_coords is not None:
            self.unit_generators = [self.element(c) for c in unit_generators_coords]
        elif self.degree == 2:
            self.unit_generators = [self._fundamental_unit()]
        for u in self.unit_generators:
            if abs(u.norm()) != 1:
                raise FieldError(f"unit generator {u} has |norm| != 1")
        self._different = None

    # construction helpers -----------------------------------------------------

    def _power_mul_mod(self, a, b):
        d = self.degree
        prod = [Fraction(0)] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        for k in range(2 * d - 2, d - 1, -1):
            c = prod[k]
            if c:
                prod[k] = Fraction(0)
                for i in range(d):  # theta^k = theta^(k-d) * (theta^d)
                    prod[k - d + i] -= c * self.poly[i]
        return prod[:d]

    def _build_mult_table(self):
        d = self.degree
        table = []
        for i in range(d):
            row = []
            for j in range(d):
                prod_power = self._power_mul_mod(self.basis_in_power[i], self.basis_in_power[j])
                coords = [sum(self._power_to_basis[k][l] * prod_power[l] for l in range(d))
                          for k in range(d)]
                if any(c.denominator != 1 for c in coords):
                    raise FieldError("integral basis is not closed under multiplication")
                row.append(tuple(coords))
            table.append(row)
        return table

    def _discriminant(self) -> int:
        d = self.degree
        tr = [[ (self.basis_element(i) * self.basis_element(j)).trace()
                for j in range(d)] for i in range(d)]
        det = intmat.det_fraction(tr)
        if det.denominator != 1 or det == 0:
            raise FieldError("trace form of the integral basis is not unimodular-integral")
        return int(det)

    def sqrt_disc_element(self) -> FieldElement:
        """The element sqrt(d_F), positive at the first embedding (degree 2)."""
        if self.degree != 2:
            raise FieldError("sqrt_disc_element is a quadratic-field notion")
        if self.basis_in_power[0] != [Fraction(1), Fraction(0)]:
            raise InsufficientFieldDataError("integral basis must start with 1")
        wtilde = self.basis_element(1)
        s_elt = wtilde * 2 - wtilde.trace()
        assert (s_elt * s_elt).rational_value() == self.discriminant
        if s_elt.signs()[0] < 0:
            s_elt = -s_elt
        return s_elt

    def _fundamental_unit(self) -> FieldElement:
        x, y = fundamental_unit_sqrtD(self.discriminant)
        return self.one() * x + self.sqrt_disc_element() * y

    # element factories -----------------------------------------------------------

    def element(self, coords) -> FieldElement:
        return FieldElement(self, tuple(Fraction(c) for c in coords))

    def basis_element(self, i: int) -> FieldElement:
        return self.element(tuple(1 if j == i else 0 for j in range(self.degree)))

    def zero(self) -> FieldElement:
        return self.element((0,) * self.degree)

    def one(self) -> FieldElement:
        return self.element((1,) + (0,) * (self.degree - 1))

    def w(self) -> FieldElement:
        if self.degree < 2:
            raise FieldError("w is the second integral-basis element; degree >= 2 required")
        return self.basis_element(1)

    def coerce(self, x) -> FieldElement:
        if isinstance(x, FieldElement):
            if x.field is not self:
                raise FieldError("element of a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return self.element((Fraction(x),) + (Fraction(0),) * (self.degree - 1))
        if isinstance(x, str):
            return self.parse_element(x)
        raise FieldError(f"cannot coerce {x!r}")

    def parse_element(self, text: str) -> FieldElement:
        """Parse 'x + y*w' literals; rationals as 'p/q'."""
        if self.degree == 1:
            return self.coerce(Fraction(text.strip()))
        s = text.replace("-", "+-").replace(" ", "")
        if s.startswith("+"):
            s = s[1:]
        x = Fraction(0)
        y = Fraction(0)
        for term in s.split("+"):
            if not term:
                continue
            m = _ELEMENT_TERM.match(term.replace("+-", "-"))
            if not m:
                raise FieldError(f"bad element literal {text!r}")
            sign, num, _, is_w = m.groups()
            val = Fraction(num) if num else Fraction(1)
            if sign == "-":
                val = -val
            if is_w:
                y += val
            else:
                x += val
        return self.element((x, y) + (Fraction(0),) * (self.degree - 2))

    # units -----------------------------------------------------------------------

    def unit_sign_group(self) -> set[tuple[int, ...]]:
        """Subgroup of {+-1}^d realized as sign vectors of units."""
        gens = [tuple([-1] * self.degree)]
        gens += [u.signs() for u in self.unit_generators]
        group = {tuple([1] * self.degree)}
        frontier = [tuple([1] * self.degree)]
        while frontier:
            nxt = []
            for s in frontier:
                for g in gens:
                    t = tuple(a * b for a, b in zip(s, g))
                    if t not in group:
                        group.add(t)
                        nxt.append(t)
            frontier = nxt
        return group

    def __repr__(self):
        if self.quadratic_D:
            return f"Q(sqrt({self.quadratic_D}))"
        if self.degree == 1:
            return "Q"
        return f"NumberField({list(self.poly)})"


@dataclass
class UnitSubgroup:
    """U = {u in O^x : N(u)^k = 1, u = 1 mod m}, with its index in O^x."""
    modulus: object
    weight: int
    generators: list[FieldElement]
    index: int
    free_generator: FieldElement | None  # infinite-order generator, > 1 at the first embedding
    contains_minus_one: bool = dc_field(default=False)


def _is_squarefree(n: int) -> bool:
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def make_field(spec) -> FieldDescription:
    """Build a field from a spec: a squarefree integer D > 1 (real quadratic
    shorthand), the integer 1 (the rationals), or a dict with keys
    poly/basis/units[/class_group]."""
    if isinstance(spec, int):
        if spec == 1:
            return FieldDescription(poly=(0, 1), basis_in_power=[[1]])
        if spec <= 1 or not _is_squarefree(spec):
            raise FieldError("quadratic shorthand needs a squarefree integer D > 1")
        D = spec
        if D % 4 == 1:
            poly = (-(D - 1) // 4, -1, 1)  # x^2 - x - (D-1)/4, root (1+sqrt D)/2
        else:
            poly = (-D, 0, 1)
        return FieldDescription(poly=poly, basis_in_power=[[1, 0], [0, 1]], quadratic_D=D)
    if isinstance(spec, dict):
        if "quadratic_D" in spec:
            return make_field(int(spec["quadratic_D"]))
        if "poly" not in spec:
            raise FieldError("field spec needs 'quadratic_D' or 'poly'")
        poly = [int(c) for c in spec["poly"]]
        deg = len(poly) - 1
        basis = spec.get("basis") or [[1 if i == j else 0 for j in range(deg)] for i in range(deg)]
        units = spec.get("units")
        if deg >= 3 and not units:
            raise InsufficientFieldDataError(
                "degree >= 3 fields require user-supplied unit generators")
        basis = [[Fraction(str(x)) for x in row] for row in basis]
        units_coords = [[Fraction(str(x)) for x in row] for row in units] if units else None
        return FieldDescription(poly=poly, basis_in_power=basis,
                                unit_generators_coords=units_coords,
                                class_data=spec.get("class_group"))
    raise FieldError(f"unrecognized field spec {spec!r}")


def rationals() -> FieldDescription:
    return make_field(1)


def unit_subgroup(F: FieldDescription, modulus, k: int) -> UnitSubgroup:
    """Generators and index of U = {u in O^x : N(u)^k = 1, u = 1 mod m}.

    Found by exhaustive search over the finite quotient of O^x by an
    everything-satisfying power of the fundamental unit.
    """
    if not modulus.is_integral() or modulus.norm() == 0:
        raise FieldError("unit_subgroup needs a nonzero integral modulus")
    one = F.one()
    minus_one = -one

    def in_U(u: FieldElement) -> bool:
        nk = u.norm() ** k
        return nk == 1 and modulus.contains_element(u - one)

    if F.degree == 1:
        if in_U(minus_one):
            return UnitSubgroup(modulus, k, [minus_one], 1, None, True)
        return UnitSubgroup(modulus, k, [], 2, None, False)

    if F.degree != 2:
        raise InsufficientFieldDataError("unit_subgroup implemented for degrees 1 and 2")

    eps = F.unit_generators[0]
    # order T of eps in (O/m)^x; eps^(2T) is = 1 mod m with norm-power +1
    t = 1
    p = eps
    while not modulus.contains_element(p - one):
        p = p * eps
        t += 1
        if t > 4 * int(modulus.norm()) + 8:
            raise FieldError("unit order search exceeded the residue ring size")
    period = 2 * t  # membership of -(+-)eps^n is periodic in n with period | 2t
    members = []
    for s in (0, 1):
        for n in range(period):
            u = (minus_one if s else one) * eps ** n
            if in_U(u):
                members.append((s, n))
    # U is generated by eps^period plus the found coset representatives
    big = eps ** period
    assert in_U(big)
    group_size = 2 * period
    index = group_size // len(members)
    minus_in = (1, 0) in members
    positive_n = [n for s, n in members if n > 0]
    if positive_n:
        free_n = min(positive_n)
        free_s = min(s for s, n in members if n == free_n)
        u0 = (minus_one if free_s else one) * eps ** free_n
    else:
        u0 = eps ** period
    # prefer the totally-positive-at-sigma1 representative when -1 is in U
    if u0.signs()[0] < 0 and minus_in:
        u0 = -u0
    gens = [u0] + ([minus_one] if minus_in else [])
    return UnitSubgroup(modulus, k, gens, index, u0, minus_in)
