"""Finite categories and groupoids with exact table-based structure.

Objects and morphisms are identified by hashable ids (strings, ints, or
nested tuples); equality is always by id, never positional.  All structure
(composition, identities, inverses) is stored in explicit tables, and every
axiom check is an exact table lookup.

The module provides validation, deloopings of finite groups, action
groupoids, iso-comma fiber products (the 2-categorical pullback of
groupoids), anchored n-fold relative products, skeletalization, equivalence
testing, component/automorphism extraction, and truncated Čech nerves.
"""

from __future__ import annotations

from dataclasses import dataclass


class StructureError(Exception):
    """Malformed input tables (dangling ids, non-total maps) - distinct from
    an axiom violation, which is reported, not raised."""


@dataclass(frozen=True)
class Violation:
    code: str
    detail: str

    def __str__(self):
        return "[%s] %s" % (self.code, self.detail)


_okey_memo = {}


def okey(x):
    """Canonical total order key for mixed hashable ids (memoized)."""
    try:
        return _okey_memo[x]
    except KeyError:
        pass
    except TypeError:
        return _okey_raw(x)
    out = _okey_raw(x)
    if len(_okey_memo) < 1 << 20:
        _okey_memo[x] = out
    return out


def _okey_raw(x):
    if isinstance(x, tuple):
        return "(" + ",".join(okey(a) for a in x) + ")"
    if isinstance(x, frozenset):
        return "{" + ",".join(sorted(okey(a) for a in x)) + "}"
    return "%s:%s" % (type(x).__name__, x)


class FiniteCategory:
    """A finite category given by explicit tables.

    compose[(g, f)] = g∘f, defined exactly when dst(f) == src(g).
    """

    is_groupoid = False

    def __init__(self, objects, morphisms, src, dst, identity, compose):
        self.objects = tuple(sorted(objects, key=okey))
        self.morphisms = tuple(sorted(morphisms, key=okey))
        self.src = dict(src)
        self.dst = dict(dst)
        self.identity = dict(identity)
        if callable(compose):
            self._comp = None
            self._comp_fn = compose
        else:
            self._comp = dict(compose)
            self._comp_fn = None
        self._check_structure()

    def _check_structure(self):
        oset, mset = set(self.objects), set(self.morphisms)
        if len(oset) != len(self.objects) or len(mset) != len(self.morphisms):
            raise StructureError("duplicate ids")
        for m in self.morphisms:
            if m not in self.src or m not in self.dst:
                raise StructureError("morphism %r missing source/target" % (m,))
            if self.src[m] not in oset or self.dst[m] not in oset:
                raise StructureError("morphism %r has dangling endpoint" % (m,))
        for x in self.objects:
            if x not in self.identity:
                raise StructureError("object %r has no identity" % (x,))
            e = self.identity[x]
            if e not in mset:
                raise StructureError("identity of %r is dangling" % (x,))
            if self.src[e] != x or self.dst[e] != x:
                raise StructureError("identity of %r is not an endomorphism" % (x,))
        if self._comp is not None:
            for (g, f), h in self._comp.items():
                if g not in mset or f not in mset or h not in mset:
                    raise StructureError("composition entry with dangling id")
                if self.dst[f] != self.src[g]:
                    raise StructureError(
                        "composition entry (%r,%r) not composable" % (g, f))

    def compose(self, g, f):
        if self._comp is not None:
            try:
                return self._comp[(g, f)]
            except KeyError:
                raise StructureError("missing composite (%r, %r)" % (g, f))
        if self.dst[f] != self.src[g]:
            raise StructureError("missing composite (%r, %r)" % (g, f))
        return self._comp_fn(g, f)

    def composable_pairs(self):
        by_src = {}
        for m in self.morphisms:
            by_src.setdefault(self.src[m], []).append(m)
        for f in self.morphisms:
            for g in by_src.get(self.dst[f], ()):
                yield g, f

    def hom(self, x, y):
        return [m for m in self.morphisms
                if self.src[m] == x and self.dst[m] == y]

    def is_identity_morphism(self, m):
        return self.identity.get(self.src[m]) == m

    def is_iso(self, m):
        x, y = self.src[m], self.dst[m]
        for n in self.hom(y, x):
            if (self.compose(n, m) == self.identity[x]
                    and self.compose(m, n) == self.identity[y]):
                return True
        return False

    def validate(self):
        """Axiom report: empty iff the tables form a category."""
        report = []
        mset = set(self.morphisms)

        def comp_get(g, f):
            try:
                h = self.compose(g, f)
            except StructureError:
                return None
            return h if h in mset else None

        for g, f in self.composable_pairs():
            if comp_get(g, f) is None:
                report.append(Violation(
                    "axiom/composability",
                    "composite of (%r, %r) undefined" % (g, f)))
        for g, f in self.composable_pairs():
            h = comp_get(g, f)
            if h is None:
                continue
            if self.src[h] != self.src[f] or self.dst[h] != self.dst[g]:
                report.append(Violation(
                    "axiom/endpoints",
                    "composite %r of (%r,%r) has wrong endpoints" % (h, g, f)))
        for m in self.morphisms:
            ex, ey = self.identity[self.src[m]], self.identity[self.dst[m]]
            if comp_get(m, ex) != m:
                report.append(Violation(
                    "axiom/unit", "%r ∘ id != %r" % (m, m)))
            if comp_get(ey, m) != m:
                report.append(Violation(
                    "axiom/unit", "id ∘ %r != %r" % (m, m)))
        for h in self.morphisms:
            for g in self.morphisms:
                if self.src[h] != self.dst[g]:
                    continue
                gh = comp_get(h, g)
                for f in self.morphisms:
                    if self.src[g] != self.dst[f]:
                        continue
                    gf = comp_get(g, f)
                    lhs = comp_get(h, gf) if gf is not None else None
                    rhs = comp_get(gh, f) if gh is not None else None
                    if lhs != rhs:
                        report.append(Violation(
                            "axiom/associativity",
                            "(%r∘%r)∘%r != %r∘(%r∘%r)" % (h, g, f, h, g, f)))
        return report

    def __repr__(self):
        return "%s(%d objects, %d morphisms)" % (
            type(self).__name__, len(self.objects), len(self.morphisms))


class FiniteGroupoid(FiniteCategory):
    is_groupoid = True

    def __init__(self, objects, morphisms, src, dst, identity, compose, inverse):
        super().__init__(objects, morphisms, src, dst, identity, compose)
        self.inverse = dict(inverse)
        mset = set(self.morphisms)
        for m in self.morphisms:
            if m not in self.inverse or self.inverse[m] not in mset:
                raise StructureError("morphism %r lacks an inverse entry" % (m,))

    def validate(self):
        report = super().validate()
        for m in self.morphisms:
            n = self.inverse[m]
            x, y = self.src[m], self.dst[m]
            try:
                left, right = self.compose(n, m), self.compose(m, n)
            except StructureError:
                left = right = None
            if left != self.identity[x] or right != self.identity[y]:
                report.append(Violation(
                    "axiom/inverse", "inverse of %r fails" % (m,)))
        return report


def validate_category(cat):
    return cat.validate()


# ---------------------------------------------------------------------------
# Functors and natural transformations
# ---------------------------------------------------------------------------

class Functor:
    def __init__(self, dom, cod, ob, mor, name=None):
        self.dom, self.cod = dom, cod
        self.ob = dict(ob)
        self.mor = dict(mor)
        self.name = name
        cod_objs = set(cod.objects)
        cod_mors = set(cod.morphisms)
        for x in dom.objects:
            if x not in self.ob:
                raise StructureError("object map not total at %r" % (x,))
            if self.ob[x] not in cod_objs:
                raise StructureError("object map leaves target at %r" % (x,))
        for m in dom.morphisms:
            if m not in self.mor:
                raise StructureError("morphism map not total at %r" % (m,))
            if self.mor[m] not in cod_mors:
                raise StructureError("morphism map leaves target at %r" % (m,))

    def validate(self):
        report = []
        for m in self.dom.morphisms:
            fm = self.mor[m]
            if self.cod.src[fm] != self.ob[self.dom.src[m]] or \
               self.cod.dst[fm] != self.ob[self.dom.dst[m]]:
                report.append(Violation(
                    "functor/endpoints", "image of %r has wrong endpoints" % (m,)))
        for x in self.dom.objects:
            if self.mor[self.dom.identity[x]] != self.cod.identity[self.ob[x]]:
                report.append(Violation(
                    "functor/identity", "identity at %r not preserved" % (x,)))
        for g, f in self.dom.composable_pairs():
            lhs = self.mor[self.dom.compose(g, f)]
            rhs = self.cod.compose(self.mor[g], self.mor[f])
            if lhs != rhs:
                report.append(Violation(
                    "functor/composition",
                    "composite (%r,%r) not preserved" % (g, f)))
        return report

    def __repr__(self):
        return "Functor(%s)" % (self.name or "%r -> %r" % (self.dom, self.cod))


def validate_functor(F, dom=None, cod=None):
    return F.validate()


def identity_functor(cat):
    return Functor(cat, cat, {x: x for x in cat.objects},
                   {m: m for m in cat.morphisms}, name="id")


def compose_functors(g, f):
    assert f.cod is g.dom or f.cod.morphisms == g.dom.morphisms
    return Functor(f.dom, g.cod,
                   {x: g.ob[f.ob[x]] for x in f.dom.objects},
                   {m: g.mor[f.mor[m]] for m in f.dom.morphisms},
                   name=None)


def functors_equal(f, g):
    return f.ob == g.ob and f.mor == g.mor


class NatTrans:
    """component[x]: F(x) -> G(x) in the target category."""

    def __init__(self, F, G, component):
        self.F, self.G = F, G
        self.component = dict(component)

    def validate(self):
        report = []
        C = self.F.cod
        _cmors = set(C.morphisms)
        for x in self.F.dom.objects:
            c = self.component.get(x)
            if c is None or c not in _cmors:
                report.append(Violation("nat/total", "no component at %r" % (x,)))
                continue
            if C.src[c] != self.F.ob[x] or C.dst[c] != self.G.ob[x]:
                report.append(Violation("nat/endpoints",
                                        "component at %r has wrong endpoints" % (x,)))
        for m in self.F.dom.morphisms:
            x, y = self.F.dom.src[m], self.F.dom.dst[m]
            lhs = C.compose(self.component[y], self.F.mor[m])
            rhs = C.compose(self.G.mor[m], self.component[x])
            if lhs != rhs:
                report.append(Violation("nat/naturality",
                                        "square at %r fails" % (m,)))
        return report

    def is_invertible(self):
        C = self.F.cod
        return all(C.is_iso(c) for c in self.component.values())

    def inverse(self):
        C = self.F.cod
        assert C.is_groupoid
        return NatTrans(self.G, self.F,
                        {x: C.inverse[c] for x, c in self.component.items()})


# ---------------------------------------------------------------------------
# Group deloopings and action groupoids
# ---------------------------------------------------------------------------

def delooping(group, obj="*"):
    """One-object groupoid of a finite group (see hecke.FiniteGroup)."""
    bad = group.axiom_report()
    if bad:
        raise StructureError("not a group: %s" % bad[0])
    e = group.identity
    morphisms = list(group.elements)
    return FiniteGroupoid(
        objects=[obj],
        morphisms=morphisms,
        src={g: obj for g in morphisms},
        dst={g: obj for g in morphisms},
        identity={obj: e},
        compose={(g, h): group.mul(g, h) for g in morphisms for h in morphisms},
        inverse={g: group.inv(g) for g in morphisms})


def delooping_hom(phi, dom_grpd, cod_grpd):
    """Functor of deloopings induced by a group homomorphism table."""
    o1, o2 = dom_grpd.objects[0], cod_grpd.objects[0]
    return Functor(dom_grpd, cod_grpd, {o1: o2}, dict(phi))


def action_groupoid(group, xset, action):
    """Quotient stack X//G of a finite G-set: objects X, morphisms
    (g, x): x -> g·x, with the projection functor to the delooping."""
    e = group.identity
    for x in xset:
        if action[(e, x)] != x:
            raise StructureError("unit acts nontrivially on %r" % (x,))
    for g in group.elements:
        for h in group.elements:
            for x in xset:
                if action[(g, action[(h, x)])] != action[(group.mul(g, h), x)]:
                    raise StructureError(
                        "action axiom fails at (%r,%r,%r)" % (g, h, x))
    morphisms = [(g, x) for g in group.elements for x in xset]
    src = {(g, x): x for (g, x) in morphisms}
    dst = {(g, x): action[(g, x)] for (g, x) in morphisms}
    comp = {}
    for (g, x) in morphisms:
        gx = action[(g, x)]
        for h in group.elements:
            comp[((h, gx), (g, x))] = (group.mul(h, g), x)
    G = FiniteGroupoid(
        objects=list(xset), morphisms=morphisms, src=src, dst=dst,
        identity={x: (e, x) for x in xset},
        compose=comp,
        inverse={(g, x): (group.inv(g), action[(g, x)]) for (g, x) in morphisms})
    BG = delooping(group)
    proj = Functor(G, BG, {x: BG.objects[0] for x in xset},
                   {(g, x): g for (g, x) in morphisms}, name="X//G -> */G")
    return G, proj


def terminal_groupoid(obj="*"):
    return FiniteGroupoid([obj], [("id", obj)], {("id", obj): obj},
                          {("id", obj): obj}, {obj: ("id", obj)},
                          {(("id", obj), ("id", obj)): ("id", obj)},
                          {("id", obj): ("id", obj)})


def to_terminal(X, pt):
    o = pt.objects[0]
    e = pt.identity[o]
    return Functor(X, pt, {x: o for x in X.objects},
                   {m: e for m in X.morphisms}, name="to *")


def disjoint_union(grpds):
    objects, morphisms, src, dst, ident, comp, inv = [], [], {}, {}, {}, {}, {}
    for i, G in enumerate(grpds):
        for x in G.objects:
            objects.append((i, x))
            ident[(i, x)] = (i, G.identity[x])
        for m in G.morphisms:
            morphisms.append((i, m))
            src[(i, m)] = (i, G.src[m])
            dst[(i, m)] = (i, G.dst[m])
            inv[(i, m)] = (i, G.inverse[m])
        if G._comp is not None:
            for (g, f), h in G._comp.items():
                comp[((i, g), (i, f))] = (i, h)
        else:
            for g, f in G.composable_pairs():
                comp[((i, g), (i, f))] = (i, G.compose(g, f))
    return FiniteGroupoid(objects, morphisms, src, dst, ident, comp, inv)


# ---------------------------------------------------------------------------
# Components, automorphism groups, skeletalization, equivalence
# ---------------------------------------------------------------------------

def _components(grpd):
    parent = {x: x for x in grpd.objects}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for m in grpd.morphisms:
        a, b = find(grpd.src[m]), find(grpd.dst[m])
        if a != b:
            parent[max(a, b, key=okey)] = min(a, b, key=okey)
    comps = {}
    for x in grpd.objects:
        comps.setdefault(find(x), []).append(x)
    return {rep: sorted(xs, key=okey) for rep, xs in
            sorted(comps.items(), key=lambda kv: okey(kv[0]))}


def pi0_and_aut(grpd):
    """List of (component representative, automorphism multiplication table).

    The table is a dict (g, h) -> g∘h over the endomorphisms at the
    representative (all invertible in a groupoid).
    """
    out = []
    for rep, _xs in _components(grpd).items():
        auts = grpd.hom(rep, rep)
        table = {(g, h): grpd.compose(g, h) for g in auts for h in auts}
        out.append((rep, tuple(sorted(auts, key=okey)), table))
    return out


def transport_to_reps(grpd):
    """For each object pick a morphism t_x: rep -> x (t_rep = id), by
    deterministic BFS inside each component."""
    t = {}
    comp_of = {}
    by_src = {}
    for m in sorted(grpd.morphisms, key=okey):
        by_src.setdefault(grpd.src[m], []).append(m)
    for rep, xs in _components(grpd).items():
        t[rep] = grpd.identity[rep]
        comp_of[rep] = rep
        frontier = [rep]
        seen = {rep}
        while frontier:
            new = []
            for x in frontier:
                for m in by_src.get(x, ()):
                    y = grpd.dst[m]
                    if y not in seen:
                        seen.add(y)
                        t[y] = grpd.compose(m, t[x])
                        comp_of[y] = rep
                        new.append(y)
            frontier = new
        for x in xs:
            comp_of[x] = rep
    return t, comp_of


def skeletalize(grpd):
    """(skeletal groupoid, incl, retr, eta) with retr∘incl = id on the nose
    and eta: incl∘retr -> id an invertible natural transformation."""
    t, comp_of = transport_to_reps(grpd)
    reps = sorted(set(comp_of.values()), key=okey)
    rep_set = set(reps)
    morphisms = [m for m in grpd.morphisms
                 if grpd.src[m] in rep_set and grpd.dst[m] in rep_set]
    skel = FiniteGroupoid(
        reps, morphisms,
        {m: grpd.src[m] for m in morphisms},
        {m: grpd.dst[m] for m in morphisms},
        {x: grpd.identity[x] for x in reps},
        {(g, f): grpd.compose(g, f) for g in morphisms for f in morphisms
         if grpd.src[g] == grpd.dst[f]},
        {m: grpd.inverse[m] for m in morphisms})
    incl = Functor(skel, grpd, {x: x for x in reps},
                   {m: m for m in morphisms}, name="incl")

    def retract_mor(m):
        x, y = grpd.src[m], grpd.dst[m]
        return grpd.compose(grpd.inverse[t[y]], grpd.compose(m, t[x]))

    retr = Functor(grpd, skel, {x: comp_of[x] for x in grpd.objects},
                   {m: retract_mor(m) for m in grpd.morphisms}, name="retr")
    eta = NatTrans(compose_functors(incl, retr), identity_functor(grpd),
                   {x: t[x] for x in grpd.objects})
    return skel, incl, retr, eta


def group_table_isomorphic(elems_a, table_a, elems_b, table_b):
    """Exhaustive generator-pruned isomorphism search between two finite
    groups given as multiplication tables (dicts)."""
    if len(elems_a) != len(elems_b):
        return False
    elems_a = sorted(elems_a, key=okey)
    elems_b = sorted(elems_b, key=okey)

    def identity_of(elems, table):
        for e in elems:
            if all(table[(e, x)] == x == table[(x, e)] for x in elems):
                return e
        return None

    def order(e, x, table):
        n, y = 1, x
        while y != e:
            y = table[(y, x)]
            n += 1
        return n

    ea, eb = identity_of(elems_a, table_a), identity_of(elems_b, table_b)
    if ea is None or eb is None:
        return False
    orders_a = {x: order(ea, x, table_a) for x in elems_a}
    orders_b = {x: order(eb, x, table_b) for x in elems_b}
    if sorted(orders_a.values()) != sorted(orders_b.values()):
        return False

    def closure(subset):
        span = {ea} | set(subset)
        frontier = list(span)
        while frontier:
            a = frontier.pop()
            for b in list(span):
                for c in (table_a[(a, b)], table_a[(b, a)]):
                    if c not in span:
                        span.add(c)
                        frontier.append(c)
        return span

    gens = []
    span = {ea}
    for x in elems_a:
        if x not in span:
            gens.append(x)
            span = closure(gens)
        if len(span) == len(elems_a):
            break

    def extend(partial):
        """Grow the generator assignment to a full map by closing words;
        return the map or None on inconsistency."""
        out = {ea: eb}
        frontier = [ea]
        while frontier:
            x = frontier.pop()
            for g in gens:
                gx = table_a[(g, x)]
                gy = table_b[(partial[g], out[x])]
                if gx in out:
                    if out[gx] != gy:
                        return None
                else:
                    out[gx] = gy
                    frontier.append(gx)
        if len(out) != len(elems_a) or len(set(out.values())) != len(elems_a):
            return None
        for x in elems_a:
            for y in elems_a:
                if out[table_a[(x, y)]] != table_b[(out[x], out[y])]:
                    return None
        return out

    def backtrack(i, partial):
        if i == len(gens):
            return extend(partial) is not None
        g = gens[i]
        for cand in elems_b:
            if orders_b[cand] != orders_a[g]:
                continue
            partial[g] = cand
            if backtrack(i + 1, partial):
                return True
            del partial[g]
        return False

    if not gens:
        return True
    return backtrack(0, {})


def equivalent_groupoids(X, Y):
    """Equivalence test via skeletalization and component-wise group
    isomorphism search."""
    ax = pi0_and_aut(X)
    ay = pi0_and_aut(Y)
    if len(ax) != len(ay):
        return False
    used = [False] * len(ay)

    def match(i):
        if i == len(ax):
            return True
        _, auts_x, tab_x = ax[i]
        for j, (_, auts_y, tab_y) in enumerate(ay):
            if used[j] or len(auts_x) != len(auts_y):
                continue
            if group_table_isomorphic(auts_x, tab_x, auts_y, tab_y):
                used[j] = True
                if match(i + 1):
                    return True
                used[j] = False
        return False

    return match(0)


# ---------------------------------------------------------------------------
# Iso-comma fiber products and anchored relative products
# ---------------------------------------------------------------------------

@dataclass
class IsoComma:
    grpd: FiniteGroupoid
    p1: Functor   # to the domain of f
    p2: Functor   # to the domain of g
    phi: NatTrans  # f∘p1 -> g∘p2, invertible

    def mediate(self, W, p, q, nu):
        """Universal factorization: for a cone (p: W->Y, q: W->X,
        nu: f∘p -> g∘q) return the induced functor W -> grpd."""
        ob = {w: (p.ob[w], q.ob[w], nu.component[w]) for w in W.objects}
        mor = {m: (ob[W.src[m]], (p.mor[m], q.mor[m])) for m in W.morphisms}
        return Functor(W, self.grpd, ob, mor, name="mediator")


def iso_comma_pullback(f, g):
    """2-categorical fiber product of groupoids along f: Y -> S <- X :g.

    Objects are triples (y, x, m) with m: f(y) -> g(x) in S; morphisms are
    pairs (u, v) making the evident square commute.
    """
    Y, X, S = f.dom, g.dom, f.cod
    if not (Y.is_groupoid and X.is_groupoid and S.is_groupoid):
        raise StructureError("iso-comma is defined here only for groupoids")
    objects = []
    for y in Y.objects:
        for x in X.objects:
            for m in S.hom(f.ob[y], g.ob[x]):
                objects.append((y, x, m))
    morphisms, src, dst, ident, inv = [], {}, {}, {}, {}
    for o in objects:
        y, x, m = o
        for u in Y.morphisms:
            if Y.src[u] != y:
                continue
            fu = f.mor[u]
            for v in X.morphisms:
                if X.src[v] != x:
                    continue
                # target anchor: m' with m'∘f(u) = g(v)∘m
                m2 = S.compose(g.mor[v], S.compose(m, S.inverse[fu]))
                o2 = (Y.dst[u], X.dst[v], m2)
                mm = (o, (u, v))
                morphisms.append(mm)
                src[mm], dst[mm] = o, o2
                inv[mm] = (o2, (Y.inverse[u], X.inverse[v]))
        ident[o] = (o, (Y.identity[y], X.identity[x]))
    def comp(m2, m1):
        o1, (u1, v1) = m1
        _o2, (u2, v2) = m2
        return (o1, (Y.compose(u2, u1), X.compose(v2, v1)))

    P = FiniteGroupoid(objects, morphisms, src, dst, ident, comp, inv)
    p1 = Functor(P, Y, {o: o[0] for o in objects},
                 {m: m[1][0] for m in morphisms}, name="pr1")
    p2 = Functor(P, X, {o: o[1] for o in objects},
                 {m: m[1][1] for m in morphisms}, name="pr2")
    phi = NatTrans(compose_functors(f, p1), compose_functors(g, p2),
                   {o: o[2] for o in objects})
    return IsoComma(P, p1, p2, phi)


class RelProduct:
    """Anchored n-fold relative product of maps a_i: X_i -> S (n >= 2).

    Objects are (xs, ms) where xs is a tuple of objects and ms[i] is an
    iso a_0(x_0) -> a_i(x_i) in S for i >= 1 (the anchor).  Morphisms are
    tuples of morphisms.  Sub-index projections compose strictly:
    proj(I)∘proj(J)|... and factor projections satisfy
    factor(i)∘proj(I) = factor(I[i]) on the nose.
    """

    def __init__(self, S, factors):
        assert len(factors) >= 2
        self.S = S
        self.factors = list(factors)   # list of (groupoid, functor to S)
        n = len(factors)
        Xs = [g for g, _ in factors]
        As = [a for _, a in factors]
        objects = []

        def rec(i, xs, ms):
            if i == n:
                objects.append((tuple(xs), tuple(ms)))
                return
            X = Xs[i]
            for x in X.objects:
                if i == 0:
                    rec(1, [x], [])
                else:
                    for m in S.hom(As[0].ob[xs[0]], As[i].ob[x]):
                        rec(i + 1, xs + [x], ms + [m])

        rec(0, [], [])
        morphisms, src, dst, ident, inv = [], {}, {}, {}, {}
        for o in objects:
            xs, ms = o
            # enumerate tuples of morphisms out of xs
            outs = [[u for u in Xs[i].morphisms if Xs[i].src[u] == xs[i]]
                    for i in range(n)]

            def rec_m(i, us):
                if i == n:
                    us_t = tuple(us)
                    a0u0 = As[0].mor[us[0]]
                    new_ms = []
                    for k in range(1, n):
                        mk = S.compose(As[k].mor[us[k]],
                                       S.compose(ms[k - 1], S.inverse[a0u0]))
                        new_ms.append(mk)
                    o2 = (tuple(Xs[i2].dst[us[i2]] for i2 in range(n)),
                          tuple(new_ms))
                    mm = (o, us_t)
                    morphisms.append(mm)
                    src[mm], dst[mm] = o, o2
                    inv[mm] = (o2, tuple(Xs[i2].inverse[us[i2]] for i2 in range(n)))
                    return
                for u in outs[i]:
                    rec_m(i + 1, us + [u])

            rec_m(0, [])
            ident[o] = (o, tuple(Xs[i].identity[xs[i]] for i in range(n)))
        def comp(m2, m1):
            return (src[m1], tuple(Xs[i].compose(m2[1][i], m1[1][i])
                                   for i in range(n)))

        self.grpd = FiniteGroupoid(objects, morphisms, src, dst, ident,
                                   comp, inv)

    def factor_proj(self, i):
        X = self.factors[i][0]
        return Functor(self.grpd, X,
                       {o: o[0][i] for o in self.grpd.objects},
                       {m: m[1][i] for m in self.grpd.morphisms},
                       name="pr%d" % i)

    def proj_onto(self, indices, target):
        """Projection functor onto another RelProduct built from the
        sub-list of factors at `indices` (re-anchored at indices[0])."""
        S = self.S
        i0 = indices[0]

        def ob_map(o):
            xs, ms = o
            new_xs = tuple(xs[i] for i in indices)
            new_ms = []
            for i in indices[1:]:
                if i0 == 0:
                    new_ms.append(ms[i - 1])
                else:
                    new_ms.append(S.compose(ms[i - 1], S.inverse[ms[i0 - 1]]))
            return (new_xs, tuple(new_ms))

        ob = {o: ob_map(o) for o in self.grpd.objects}
        mor = {m: (ob[self.grpd.src[m]], tuple(m[1][i] for i in indices))
               for m in self.grpd.morphisms}
        return Functor(self.grpd, target.grpd, ob, mor,
                       name="pr" + "".join(str(i) for i in indices))

    def diagonal_from(self, X, a, copies):
        """For the product of `copies` identical factors (X, a): the
        diagonal functor X -> product."""
        def ob_map(x):
            ms = tuple(self.S.identity[a.ob[x]] for _ in range(copies - 1))
            return ((x,) * copies, ms)
        ob = {x: ob_map(x) for x in X.objects}
        mor = {m: (ob[X.src[m]], (m,) * copies) for m in X.morphisms}
        return Functor(X, self.grpd, ob, mor, name="diag")


def rel_product(S, factors):
    return RelProduct(S, factors)


# ---------------------------------------------------------------------------
# Čech nerves
# ---------------------------------------------------------------------------

class TruncatedSimplicialGroupoid:
    """Levels 0..N with face/degeneracy functors; simplicial identities are
    exact and asserted by `validate`."""

    def __init__(self, levels, faces, degeneracies):
        self.levels = levels              # list of FiniteGroupoid
        self.faces = faces                # faces[n][i]: level n -> level n-1
        self.degeneracies = degeneracies  # degeneracies[n][i]: level n -> n+1

    @property
    def depth(self):
        return len(self.levels) - 1

    def validate(self):
        report = []
        N = self.depth
        for n in range(2, N + 1):
            for i in range(n + 1):
                for j in range(i):
                    # d_j d_i = d_{i-1} d_j for j < i
                    lhs = compose_functors(self.faces[n - 1][j], self.faces[n][i])
                    rhs = compose_functors(self.faces[n - 1][i - 1], self.faces[n][j])
                    if not functors_equal(lhs, rhs):
                        report.append(Violation(
                            "simplicial/face", "d_%d d_%d != d_%d d_%d at level %d"
                            % (j, i, i - 1, j, n)))
        for n in range(0, N):
            for i in range(n + 1):
                for j in range(n + 1):
                    # face-degeneracy identities
                    s = self.degeneracies[n][j]
                    if i < j:
                        lhs = compose_functors(self.faces[n + 1][i], s)
                        rhs = compose_functors(self.degeneracies[n - 1][j - 1],
                                               self.faces[n][i]) if n >= 1 else None
                        if rhs is not None and not functors_equal(lhs, rhs):
                            report.append(Violation("simplicial/mixed",
                                                    "d_%d s_%d at level %d" % (i, j, n)))
                    elif i in (j, j + 1):
                        lhs = compose_functors(self.faces[n + 1][i], s)
                        if not functors_equal(lhs, identity_functor(self.levels[n])):
                            report.append(Violation("simplicial/unit",
                                                    "d_%d s_%d != id at level %d" % (i, j, n)))
                    else:
                        lhs = compose_functors(self.faces[n + 1][i], s)
                        rhs = compose_functors(self.degeneracies[n - 1][j],
                                               self.faces[n][i - 1]) if n >= 1 else None
                        if rhs is not None and not functors_equal(lhs, rhs):
                            report.append(Violation("simplicial/mixed",
                                                    "d_%d s_%d at level %d" % (i, j, n)))
        return report


def cech_nerve(f, N=3):
    """Truncated Čech nerve of f: Y -> X.  Level n is the (n+1)-fold
    iso-comma fiber power of Y over X."""
    if N < 0:
        raise ValueError("truncation level must be >= 0")
    Y, X = f.dom, f.cod
    levels = [Y]
    prods = [None]
    for n in range(1, N + 1):
        rp = rel_product(X, [(Y, f)] * (n + 1))
        prods.append(rp)
        levels.append(rp.grpd)
    faces = [None] * (N + 1)
    degeneracies = [None] * (N + 1)
    for n in range(1, N + 1):
        rp = prods[n]
        fs = []
        for i in range(n + 1):
            keep = [k for k in range(n + 1) if k != i]
            if n == 1:
                fs.append(rp.factor_proj(keep[0]))
            else:
                fs.append(rp.proj_onto(keep, prods[n - 1]))
        faces[n] = fs
    for n in range(0, N):
        rp_up = prods[n + 1]
        ds = []
        for i in range(n + 1):
            if n == 0:
                ob = {}
                mor = {}
                for y in Y.objects:
                    ms = (X.identity[f.ob[y]],)
                    ob[y] = ((y, y), ms)
                for m in Y.morphisms:
                    mor[m] = (ob[Y.src[m]], (m, m))
                ds.append(Functor(Y, rp_up.grpd, ob, mor, name="s0"))
            else:
                rp = prods[n]

                def dup(o, i=i):
                    xs, ms = o
                    anchored = (None,) + ms
                    new_xs = xs[:i + 1] + (xs[i],) + xs[i + 1:]
                    full = list(anchored[:i + 1]) + [anchored[i]] + list(anchored[i + 1:])
                    # re-anchor: ms entries for positions 1..n+1
                    S = rp.S
                    new_ms = []
                    for k in range(1, n + 2):
                        a = full[k]
                        if a is None:
                            a = S.identity[rp.factors[0][1].ob[xs[0]]]
                        new_ms.append(a)
                    return (new_xs, tuple(new_ms))

                ob = {o: dup(o) for o in rp.grpd.objects}
                mor = {m: (ob[rp.grpd.src[m]],
                           m[1][:i + 1] + (m[1][i],) + m[1][i + 1:])
                       for m in rp.grpd.morphisms}
                ds.append(Functor(rp.grpd, rp_up.grpd, ob, mor, name="s%d" % i))
        degeneracies[n] = ds
    return TruncatedSimplicialGroupoid(levels, faces, degeneracies)
