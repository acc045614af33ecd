"""Structure of a finite abelian group given as a black box.

Elements are hashable, totally orderable labels; the group is described by a
multiplication function on labels.  ``FiniteAbelianGroup`` enumerates the
closure of the generators, finds a basis realizing the invariant-factor
decomposition Z/e1 x Z/e2 x ... (e_{i+1} | e_i), and tabulates discrete logs.

Group orders here stay small (residue rings, ray class groups for moduli of
modest norm), so exhaustive enumeration is the honest and simple choice.
"""

from __future__ import annotations

from itertools import product


class FiniteAbelianGroup:
    def __init__(self, identity, op, generators):
        self.identity = identity
        self.op = op
        self.elements = self._closure(generators)
        self.order = len(self.elements)
        self.basis, self.orders = self._find_basis()
        self._dlog = self._tabulate()

    # -- construction -----------------------------------------------------

    def _closure(self, generators):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in generators:
                    y = self.op(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return sorted(seen)

    def element_order(self, x) -> int:
        n = 1
        y = x
        while y != self.identity:
            y = self.op(y, x)
            n += 1
        return n

    def power(self, x, n: int):
        r = self.identity
        y = x
        n0 = n % self.order if self.order else 0
        while n0:
            if n0 & 1:
                r = self.op(r, y)
            y = self.op(y, y)
            n0 >>= 1
        return r

    def inverse(self, x):
        return self.power(x, self.order - 1)

    def _find_basis(self):
        """Basis via the classical peel-off-a-maximal-order-cyclic argument."""
        if self.order == 1:
            return [], []
        # g1 of maximal order == the exponent of the group
        orders = {x: self.element_order(x) for x in self.elements}
        g1 = max(self.elements, key=lambda x: (orders[x], x))
        e1 = orders[g1]
        if e1 == self.order:
            return [g1], [e1]
        # coset labels modulo <g1>
        g1_powers = []
        y = self.identity
        for _ in range(e1):
            g1_powers.append(y)
            y = self.op(y, g1)
        pow_index = {p: k for k, p in enumerate(g1_powers)}

        def coset_label(x):
            return min(self.op(x, p) for p in g1_powers)

        label_rep = {}
        for x in self.elements:
            label_rep.setdefault(coset_label(x), x)

        def qop(a, b):
            return coset_label(self.op(label_rep[a], label_rep[b]))

        quotient = FiniteAbelianGroup(coset_label(self.identity), qop, list(label_rep))
        basis = [g1]
        orders_out = [e1]
        for qb, m in zip(quotient.basis, quotient.orders):
            g = label_rep[qb]
            t = pow_index[self.power(g, m)]  # g^m == g1^t, and m | t
            g = self.op(g, self.power(g1, (-(t // m)) % e1))
            basis.append(g)
            orders_out.append(m)
        return basis, orders_out

    def _tabulate(self):
        table = {}
        ranges = [range(e) for e in self.orders]
        for exps in product(*ranges) if self.orders else [()]:
            x = self.identity
            for g, k in zip(self.basis, exps):
                x = self.op(x, self.power(g, k))
            table[x] = tuple(exps)
        if len(table) != self.order:
            raise AssertionError("basis does not span the group")
        return table

    # -- queries -----------------------------------------------------------

    def dlog(self, x) -> tuple[int, ...]:
        return self._dlog[x]

    def all_exponents(self) -> list[tuple[int, ...]]:
        """Every exponent tuple, sorted (the zero tuple first)."""
        return sorted(self._dlog.values())

    def from_exponents(self, exps):
        x = self.identity
        for g, k, e in zip(self.basis, exps, self.orders):
            x = self.op(x, self.power(g, k % e))
        return x

    def __contains__(self, x) -> bool:
        return x in self._dlog

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order
