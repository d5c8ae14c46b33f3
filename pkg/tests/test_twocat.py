import itertools

import pytest

from sixff import presets
from sixff.fields import QQ
from sixff.groupoid import StructureError, delooping, terminal_groupoid, to_terminal
from sixff.linalg import Matrix
from sixff.twocat import (
    AdjunctionQuadruple, BoundedSearchRefusal, PointwiseAuditReport,
    StrictTwoCat, adjoint_uniqueness, generated_two_cat, kron_two_cat,
    mate_lambda, mate_rho, pointwise_audit, scalar_two_cat, upgrade_weak,
    verify_adjunction,
)


def test_scalar_two_cat_valid():
    C = scalar_two_cat(["0", "1", "2"], 3)
    assert C.validate() == []
    for X in C.objects:
        for Y in C.objects:
            assert len(C.two_cells(X, Y)) == 3


def test_identity_adjunction_passes():
    C = scalar_two_cat(["0", "1"], 3)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    q = AdjunctionQuadruple(f, g, ("s", "0", "0", 1), ("s", "1", "1", 1))
    ok, why = verify_adjunction(q, C)
    assert ok, why


def test_mismatched_counit_fails_with_name():
    C = scalar_two_cat(["0", "1"], 5)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    q = AdjunctionQuadruple(f, g, ("s", "0", "0", 1), ("s", "1", "1", 2))
    ok, why = verify_adjunction(q, C)
    assert not ok and "left triangle" in why


def test_upgrade_weak_repairs_twist():
    C = scalar_two_cat(["0", "1"], 5)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    # eta twisted by the invertible scalar 2: composites are invertible
    q = AdjunctionQuadruple(f, g, ("s", "0", "0", 2), ("s", "1", "1", 1))
    ok, _ = verify_adjunction(q, C)
    assert not ok
    q2 = upgrade_weak(q, C)
    ok, why = verify_adjunction(q2, C)
    assert ok, why


def test_upgrade_weak_central_order_two():
    # identity adjunction twisted by -1 (order 2) over F5: 4 = -1
    C = scalar_two_cat(["0"], 5)
    f = ("c", "0", "0")
    q = AdjunctionQuadruple(f, f, ("s", "0", "0", 4), ("s", "0", "0", 1))
    q2 = upgrade_weak(q, C)
    assert verify_adjunction(q2, C)[0]


def test_upgrade_weak_rejects_non_invertible():
    C = scalar_two_cat(["0"], 5)
    f = ("c", "0", "0")
    q = AdjunctionQuadruple(f, f, ("s", "0", "0", 0), ("s", "0", "0", 1))
    with pytest.raises(StructureError):
        upgrade_weak(q, C)


def _all_adjunctions(C, f, g):
    Y, X = C.hom_of_1cell(f)
    out = []
    for eta in C.hom[(Y, Y)].hom(C.id1[Y], C.h1(g, f)):
        for eps in C.hom[(X, X)].hom(C.h1(f, g), C.id1[X]):
            q = AdjunctionQuadruple(f, g, eta, eps)
            if verify_adjunction(q, C)[0]:
                out.append(q)
    return out


def test_mates_exhaustive_scalar_model():
    """rho and lambda are mutually inverse on every 2-cell of every mate
    square of a 3-object strict 2-category with 3 cells per hom set."""
    C = scalar_two_cat(["0", "1", "2"], 3)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    adjs = _all_adjunctions(C, f, g)
    assert adjs
    adj = adjs[0]
    fp = ("c", "2", "1")
    gp = ("c", "1", "2")
    adjp = _all_adjunctions(C, fp, gp)[0]
    a = ("c", "0", "2")
    b = ("c", "1", "1")
    hom_phi = C.hom[("0", "1")]
    count = 0
    for phi in hom_phi.hom(C.h1(fp, a), C.h1(b, f)):
        psi = mate_rho(phi, adj, adjp, a, b, C)
        back = mate_lambda(psi, adj, adjp, a, b, C)
        assert back == phi
        count += 1
    for psi in C.hom[("1", "2")].hom(C.h1(a, adj.g), C.h1(adjp.g, b)):
        phi = mate_lambda(psi, adj, adjp, a, b, C)
        again = mate_rho(phi, adj, adjp, a, b, C)
        assert again == psi
        count += 1
    assert count == 6  # exhaustive over both hom sets


def test_mates_identity_square():
    C = scalar_two_cat(["0", "1"], 3)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    adj = _all_adjunctions(C, f, g)[0]
    a = C.id1["0"]
    b = C.id1["1"]
    ident = C.id2(C.h1(f, a))
    # rho of the identity collapses to the unit-counit composite
    psi = mate_rho(ident, adj, adj, a, b, C)
    back = mate_lambda(psi, adj, adj, a, b, C)
    assert back == ident


def test_adjoint_uniqueness():
    C = scalar_two_cat(["0", "1"], 5)
    f = ("c", "0", "1")
    g = ("c", "1", "0")
    adjs = _all_adjunctions(C, f, g)
    q1 = adjs[0]
    for q2 in adjs:
        cell = adjoint_uniqueness(q1, q2, C)
        assert C.is_invertible_2cell(cell)


def test_kron_two_cat_strict_and_adjunctions():
    C = kron_two_cat(["0", "1"], [0, 1], 3)
    assert C.validate() == []
    # the dimension-1 cells form an adjunction with scalar unit/counit
    f = ("d", "0", "1", 1)
    g = ("d", "1", "0", 1)
    adjs = _all_adjunctions(C, f, g)
    assert adjs
    # the zero 1-cell is self-adjoint (empty unit/counit, trivial triangles)
    z = ("d", "0", "1", 0)
    zadj = _all_adjunctions(C, z, ("d", "1", "0", 0))
    assert len(zadj) == 1


def test_pointwise_audit_equivalence():
    C = scalar_two_cat(["0", "1"], 3)
    f = ("c", "0", "1")
    report = pointwise_audit(f, C)
    assert report.has_right_adjoint
    assert report.criterion_holds
    assert report.agreement


def test_pointwise_audit_failure_case():
    """In the genuine 2-category of small categories, post-composition with
    the collapse functor [1] -> {0,1} onto one point has no right adjoint
    on hom(1, -), so condition (a) of the criterion fails."""
    from sixff.groupoid import FiniteCategory
    from sixff.twocat import cat_two_cat

    one = FiniteCategory(["*"], [("i",)], {("i",): "*"}, {("i",): "*"},
                         {"*": ("i",)}, {(("i",), ("i",)): ("i",)})
    arrow_objs = ["a0", "a1"]
    arrow_m = [("id", "a0"), ("id", "a1"), ("ar",)]
    arrow = FiniteCategory(
        arrow_objs, arrow_m,
        {("id", "a0"): "a0", ("id", "a1"): "a1", ("ar",): "a0"},
        {("id", "a0"): "a0", ("id", "a1"): "a1", ("ar",): "a1"},
        {"a0": ("id", "a0"), "a1": ("id", "a1")},
        {(("id", "a0"), ("id", "a0")): ("id", "a0"),
         (("id", "a1"), ("id", "a1")): ("id", "a1"),
         (("ar",), ("id", "a0")): ("ar",),
         (("id", "a1"), ("ar",)): ("ar",)})
    two_disc = FiniteCategory(
        ["d0", "d1"], [("id", "d0"), ("id", "d1")],
        {("id", "d0"): "d0", ("id", "d1"): "d1"},
        {("id", "d0"): "d0", ("id", "d1"): "d1"},
        {"d0": ("id", "d0"), "d1": ("id", "d1")},
        {(("id", "d0"), ("id", "d0")): ("id", "d0"),
         (("id", "d1"), ("id", "d1")): ("id", "d1")})
    C = cat_two_cat({"Z": one, "Y": arrow, "X": two_disc})
    assert C.validate() == []
    # the collapse functor Y -> X constant at d0
    f = None
    for c in C.one_cells("Y", "X"):
        ob = dict(c[3])
        if ob["a0"] == "d0" and ob["a1"] == "d0":
            f = c
    assert f is not None
    report = pointwise_audit(f, C, test_objects=["Z"])
    assert not report.has_right_adjoint
    assert "condition (a)" in report.detail
    # sanity: an equivalence passes the audit with an adjoint found
    iden = C.id1["X"]
    rep2 = pointwise_audit(iden, C, test_objects=["Z", "X"])
    assert rep2.has_right_adjoint and rep2.criterion_holds and rep2.agreement


def test_pointwise_audit_budget_refusal():
    C = kron_two_cat(["0", "1"], [0, 1], 3)
    with pytest.raises(BoundedSearchRefusal):
        pointwise_audit(("d", "0", "1", 1), C, budget=1)


def test_generated_two_cat_sheaf_witness():
    """Embed the exceptional-pushforward adjunction for */C2 -> * as a
    strict 2-category of multiplicity matrices and verify its triangles."""
    from sixff.fields import QQ as QQf
    from sixff.groupoid import identity_functor
    from sixff.sheaves import adj_lan_pullback, unit_sheaf
    C2 = presets.group("C2")
    BC2 = delooping(C2)
    PT = terminal_groupoid()
    p = to_terminal(BC2, PT)
    adj = adj_lan_pullback(p)
    one_y = unit_sheaf(BC2, QQf)
    eta_mat = adj.unit(one_y).comp[BC2.objects[0]]
    eps_mat = adj.counit(unit_sheaf(PT, QQf)).comp[PT.objects[0]]
    assert eta_mat.shape == (1, 1) and eps_mat.shape == (1, 1)
    # multiplicity picture: Y has simples (triv, sign), X has one simple
    obj_simples = {"Y": 2, "X": 1}
    F = ("Y", "X", ((1, 0),))          # f_!: triv -> k, sign -> 0
    G = ("X", "Y", ((1,), (0,)))       # f^!: k -> triv
    gens1 = {"F": F, "G": G}
    eta_blocks = {(0, 0): eta_mat, (0, 1): Matrix.zero(QQf, 0, 0),
                  (1, 0): Matrix.zero(QQf, 0, 0),
                  (1, 1): Matrix.zero(QQf, 0, 1)}
    eps_blocks = {(0, 0): eps_mat}
    gens2 = [("idY", "GF", None)]
    # build identity-of-Y and GF one-cells through the generator dict
    gens1["idY"] = ("Y", "Y", ((1, 0), (0, 1)))
    gens1["GF"] = ("Y", "Y", ((1, 0), (0, 0)))
    gens1["FG"] = ("X", "X", ((1,),))
    gens1["idX"] = ("X", "X", ((1,),))
    gens2 = [("idY", "GF", eta_blocks), ("FG", "idX", eps_blocks)]
    C = generated_two_cat(obj_simples, gens1, gens2, QQf)
    f1 = ("d", "Y", "X", ((1, 0),))
    g1 = ("d", "X", "Y", ((1,), (0,)))
    eta = None
    eps = None
    idY = C.id1["Y"]
    idX = C.id1["X"]
    for t in C.two_cells("Y", "Y"):
        if C.cell_src(t) == idY and C.cell_dst(t) == C.h1(g1, f1) and \
                t != C.id2(idY):
            eta = t
    for t in C.two_cells("X", "X"):
        if C.cell_src(t) == C.h1(f1, g1) and C.cell_dst(t) == idX:
            eps = t
    assert eta is not None and eps is not None
    q = AdjunctionQuadruple(f1, g1, eta, eps)
    ok, why = verify_adjunction(q, C)
    assert ok, why
