"""Finite groups as explicit multiplication tables.

Groups enter either as full Cayley tables or as permutation generators
(closed on load).  Elements carry a fixed total order so that coset
representatives and structure constants are reproducible bit for bit.
"""

from __future__ import annotations

from .groupoid import StructureError, okey


class FiniteGroup:
    def __init__(self, elements, table, name=None):
        self.elements = tuple(sorted(elements, key=okey))
        self.table = dict(table)
        self.name = name or "G%d" % len(self.elements)
        eset = set(self.elements)
        if len(eset) != len(self.elements):
            raise StructureError("duplicate group elements")
        for a in self.elements:
            for b in self.elements:
                if (a, b) not in self.table or self.table[(a, b)] not in eset:
                    raise StructureError("multiplication table not total")
        self.identity = self._find_identity()
        if self.identity is None:
            raise StructureError("group axiom fails: no identity element")
        self._inv = {}
        for a in self.elements:
            for b in self.elements:
                if self.table[(a, b)] == self.identity and \
                   self.table[(b, a)] == self.identity:
                    self._inv[a] = b
                    break
        bad = self.axiom_report()
        if bad:
            raise StructureError("group axiom fails: %s" % bad[0])

    def _find_identity(self):
        for e in self.elements:
            if all(self.table[(e, x)] == x == self.table[(x, e)]
                   for x in self.elements):
                return e
        return None

    def axiom_report(self):
        out = []
        for a in self.elements:
            if a not in self._inv:
                out.append("no inverse for %r" % (a,))
        for a in self.elements:
            for b in self.elements:
                for c in self.elements:
                    if self.table[(self.table[(a, b)], c)] != \
                       self.table[(a, self.table[(b, c)])]:
                        out.append("associativity fails at (%r,%r,%r)" % (a, b, c))
                        return out
        return out

    def mul(self, a, b):
        return self.table[(a, b)]

    def inv(self, a):
        return self._inv[a]

    def __len__(self):
        return len(self.elements)

    def order_of(self, a):
        n, x = 1, a
        while x != self.identity:
            x = self.mul(x, a)
            n += 1
        return n

    def __repr__(self):
        return "FiniteGroup(%s, order %d)" % (self.name, len(self))

    # -- constructions -------------------------------------------------------

    @staticmethod
    def from_permutations(gens, degree=None, name=None):
        """Close a set of permutations (tuples of images) under composition."""
        gens = [tuple(g) for g in gens]
        if degree is None:
            degree = max((len(g) for g in gens), default=1)
        gens = [tuple(g) + tuple(range(len(g), degree)) for g in gens]
        ident = tuple(range(degree))
        elems = {ident}
        frontier = [ident]
        while frontier:
            a = frontier.pop()
            for g in gens:
                c = tuple(g[a[i]] for i in range(degree))
                if c not in elems:
                    elems.add(c)
                    frontier.append(c)

        def compose(a, b):  # a after b
            return tuple(a[b[i]] for i in range(degree))

        table = {(a, b): compose(a, b) for a in elems for b in elems}
        return FiniteGroup(sorted(elems), table, name=name)

    @staticmethod
    def cyclic(n, name=None):
        elems = list(range(n))
        table = {(a, b): (a + b) % n for a in elems for b in elems}
        return FiniteGroup(elems, table, name=name or "C%d" % n)

    @staticmethod
    def direct_product(G, H, name=None):
        elems = [(g, h) for g in G.elements for h in H.elements]
        table = {((g1, h1), (g2, h2)): (G.mul(g1, g2), H.mul(h1, h2))
                 for (g1, h1) in elems for (g2, h2) in elems}
        return FiniteGroup(elems, table,
                           name=name or "%sx%s" % (G.name, H.name))

    def subgroup(self, elems, name=None):
        elems = set(elems)
        table = {(a, b): self.mul(a, b) for a in elems for b in elems}
        for v in table.values():
            if v not in elems:
                raise StructureError("subset not closed under multiplication")
        return FiniteGroup(sorted(elems, key=okey), table, name=name)

    def generated_subgroup(self, gens):
        span = {self.identity}
        frontier = [self.identity] + list(gens)
        span |= set(gens)
        while frontier:
            a = frontier.pop()
            for g in list(span):
                for c in (self.mul(a, g), self.mul(g, a)):
                    if c not in span:
                        span.add(c)
                        frontier.append(c)
        return frozenset(span)

    def all_subgroups(self):
        """All subgroups (as frozensets), by iterated one-generator
        extension."""
        seen = {frozenset({self.identity})}
        frontier = [frozenset({self.identity})]
        while frontier:
            H = frontier.pop()
            for g in self.elements:
                if g in H:
                    continue
                K = self.generated_subgroup(set(H) | {g})
                if K not in seen:
                    seen.add(K)
                    frontier.append(K)
        return sorted(seen, key=lambda H: (len(H), sorted(okey(x) for x in H)))

    def conjugate_subgroup(self, H, g):
        gi = self.inv(g)
        return frozenset(self.mul(self.mul(g, h), gi) for h in H)

    def subgroups_up_to_conjugacy(self):
        """One representative per conjugacy class of subgroups (the
        lexicographically least member of the class)."""
        classes = []
        seen = set()
        for H in self.all_subgroups():
            if H in seen:
                continue
            orbit = {self.conjugate_subgroup(H, g) for g in self.elements}
            seen |= orbit
            rep = min(orbit, key=lambda K: sorted(okey(x) for x in K))
            classes.append(rep)
        return classes

    def is_subgroup(self, elems):
        s = set(elems)
        if self.identity not in s:
            return False
        return all(self.mul(a, b) in s for a in s for b in s) and \
            all(self.inv(a) in s for a in s)
