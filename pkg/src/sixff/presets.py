"""Built-in worked objects: standard small groups, the skeleton of finite
sets of size <= n with all functions, and divisor posets.

These presets back the default verification battery, so it runs with no
external input files.
"""

from __future__ import annotations

from functools import lru_cache

from .groupoid import FiniteCategory
from .groups import FiniteGroup


@lru_cache(maxsize=None)
def group(name):
    name = name.upper()
    if name == "1":
        return FiniteGroup.cyclic(1, name="1")
    if name.startswith("C") and name[1:].isdigit():
        return FiniteGroup.cyclic(int(name[1:]))
    if name == "S3":
        return FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)], name="S3")
    if name == "S4":
        return FiniteGroup.from_permutations([(1, 0, 2, 3), (1, 2, 3, 0)], name="S4")
    if name == "D4":
        return FiniteGroup.from_permutations([(1, 2, 3, 0), (3, 2, 1, 0)], name="D4")
    if name == "Q8":
        # unit quaternions as pairs (letter, sign-index); table via formulas
        elems = [("1", 0), ("1", 1), ("i", 0), ("i", 1),
                 ("j", 0), ("j", 1), ("k", 0), ("k", 1)]

        def q_mul(a, b):
            table = {
                ("1", "1"): ("1", 0), ("1", "i"): ("i", 0), ("1", "j"): ("j", 0),
                ("1", "k"): ("k", 0), ("i", "1"): ("i", 0), ("j", "1"): ("j", 0),
                ("k", "1"): ("k", 0),
                ("i", "i"): ("1", 1), ("j", "j"): ("1", 1), ("k", "k"): ("1", 1),
                ("i", "j"): ("k", 0), ("j", "i"): ("k", 1),
                ("j", "k"): ("i", 0), ("k", "j"): ("i", 1),
                ("k", "i"): ("j", 0), ("i", "k"): ("j", 1),
            }
            (la, sa), (lb, sb) = a, b
            lc, sc = table[(la, lb)]
            return (lc, (sa + sb + sc) % 2)

        table = {(a, b): q_mul(a, b) for a in elems for b in elems}
        return FiniteGroup(elems, table, name="Q8")
    if name in ("C2XC4", "C2*C4"):
        return FiniteGroup.direct_product(
            FiniteGroup.cyclic(2), FiniteGroup.cyclic(4), name="C2xC4")
    raise KeyError("unknown preset group %r" % name)


GROUP_PRESETS = ("1", "C2", "C3", "C4", "S3", "S4", "D4", "Q8", "C2xC4")


@lru_cache(maxsize=None)
def finset_category(max_size=3):
    """Skeleton of finite sets of cardinality <= max_size, with all
    functions as morphisms.  Objects are the integers 0..max_size."""
    objects = list(range(max_size + 1))
    morphisms, src, dst = [], {}, {}

    def functions(n, m):
        if n == 0:
            return [()]
        out = [()]
        for _ in range(n):
            out = [t + (v,) for t in out for v in range(m)]
        return out

    for n in objects:
        for m in objects:
            for fn in functions(n, m):
                mid = ("fn", n, m, fn)
                morphisms.append(mid)
                src[mid], dst[mid] = n, m
    identity = {n: ("fn", n, n, tuple(range(n))) for n in objects}
    compose = {}
    for g in morphisms:
        for f in morphisms:
            if dst[f] != src[g]:
                continue
            _, n, _, ft = f
            _, _, m, gt = g
            compose[(g, f)] = ("fn", n, m, tuple(gt[v] for v in ft))
    return FiniteCategory(objects, morphisms, src, dst, identity, compose)


@lru_cache(maxsize=None)
def divisor_poset(n):
    """Divisors of n ordered by divisibility, as a poset category with a
    unique morphism d -> e whenever d | e."""
    divs = [d for d in range(1, n + 1) if n % d == 0]
    morphisms, src, dst = [], {}, {}
    for d in divs:
        for e in divs:
            if e % d == 0:
                mid = ("le", d, e)
                morphisms.append(mid)
                src[mid], dst[mid] = d, e
    identity = {d: ("le", d, d) for d in divs}
    compose = {}
    for g in morphisms:
        for f in morphisms:
            if dst[f] == src[g]:
                compose[(g, f)] = ("le", src[f], dst[g])
    return FiniteCategory(divs, morphisms, src, dst, identity, compose)


def chain_poset(names=("a", "b", "c")):
    """A linear order as a poset category."""
    objs = list(names)
    morphisms, src, dst = [], {}, {}
    for i, d in enumerate(objs):
        for e in objs[i:]:
            mid = ("le", d, e)
            morphisms.append(mid)
            src[mid], dst[mid] = d, e
    identity = {d: ("le", d, d) for d in objs}
    compose = {(g, f): ("le", src[f], dst[g])
               for g in morphisms for f in morphisms if dst[f] == src[g]}
    return FiniteCategory(objs, morphisms, src, dst, identity, compose)


def cospan_category():
    """Three objects x -> z <- y (plus identities); has no pullbacks."""
    objs = ["x", "y", "z"]
    morphisms = [("id", o) for o in objs] + [("f", "x", "z"), ("g", "y", "z")]
    src = {("id", o): o for o in objs}
    dst = dict(src)
    src[("f", "x", "z")], dst[("f", "x", "z")] = "x", "z"
    src[("g", "y", "z")], dst[("g", "y", "z")] = "y", "z"
    identity = {o: ("id", o) for o in objs}
    compose = {}
    for g in morphisms:
        for f in morphisms:
            if dst[f] != src[g]:
                continue
            if g == ("id", src[g]):
                compose[(g, f)] = f
            elif f == ("id", src[f]):
                compose[(g, f)] = g
    return FiniteCategory(objs, morphisms, src, dst, identity, compose)


def parallel_arrows_category():
    """Two objects with two parallel arrows x => y."""
    objs = ["x", "y"]
    morphisms = [("id", "x"), ("id", "y"), ("f",), ("g",)]
    src = {("id", "x"): "x", ("id", "y"): "y", ("f",): "x", ("g",): "x"}
    dst = {("id", "x"): "x", ("id", "y"): "y", ("f",): "y", ("g",): "y"}
    identity = {"x": ("id", "x"), "y": ("id", "y")}
    compose = {}
    for g in morphisms:
        for f in morphisms:
            if dst[f] != src[g]:
                continue
            if g in (("id", "x"), ("id", "y")):
                compose[(g, f)] = f
            elif f in (("id", "x"), ("id", "y")):
                compose[(g, f)] = g
    return FiniteCategory(objs, morphisms, src, dst, identity, compose)
