import pytest

from sixff import presets
from sixff.fields import GF, QQ, GateError
from sixff.groupoid import delooping, okey
from sixff.hecke import (
    HeckeAlgebra, anti_involution, compact_induction, double_cosets,
    dual_weight_transport, frobenius_check, prim_duality_on_hecke,
    right_coset_reps,
)
from sixff.linalg import Matrix
from sixff.sheaves import Sheaf, hom_dim, unit_sheaf

S3 = presets.group("S3")
C2 = S3.subgroup(S3.generated_subgroup([(1, 0, 2)]), name="C2")
TRIV1 = presets.group("1")


def test_double_cosets_whole_group():
    dc = double_cosets(S3, S3, S3)
    assert len(dc.representatives) == 1
    assert dc.sizes == (6,)


def test_double_cosets_s3_c2():
    dc = double_cosets(S3, C2, C2)
    assert sorted(dc.sizes) == [2, 4]
    assert len(dc.representatives) == 2


def test_double_cosets_trivial_left():
    E = S3.subgroup(frozenset({S3.identity}), name="1")
    dc = double_cosets(S3, E, C2)
    assert len(dc.representatives) == 3  # right cosets G/K... K\\G count
    assert all(s == 2 for s in dc.sizes)


def test_double_cosets_battery_cross_check():
    for gname in ("S3", "D4", "Q8"):
        G = presets.group(gname)
        for H_el in G.subgroups_up_to_conjugacy():
            H = G.subgroup(H_el)
            for K_el in G.subgroups_up_to_conjugacy():
                K = G.subgroup(K_el)
                double_cosets(G, H, K)  # raises on any mismatch


def test_compact_induction_dimensions():
    triv = unit_sheaf(delooping(C2), QQ)
    ind = compact_induction(S3, C2, triv)
    assert ind.sheaf.dim[ind.sheaf.base.objects[0]] == 3
    assert ind.comparison.is_invertible()
    # K = G: induction is the identity
    full = compact_induction(S3, S3, unit_sheaf(delooping(S3), QQ))
    assert full.sheaf.dim[full.sheaf.base.objects[0]] == 1


def test_compact_induction_regular():
    # inducing the regular representation of K gives the regular rep of G
    BK = delooping(C2)
    obK = BK.objects[0]
    idx = {g: i for i, g in enumerate(C2.elements)}
    mats = {}
    for g in C2.elements:
        rows = [[QQ.zero] * 2 for _ in range(2)]
        for h in C2.elements:
            rows[idx[C2.mul(g, h)]][idx[h]] = QQ.one
        mats[g] = Matrix(QQ, rows)
    regK = Sheaf(BK, QQ, {obK: 2}, mats)
    ind = compact_induction(S3, C2, regK)
    assert ind.sheaf.dim[ind.sheaf.base.objects[0]] == 6
    # End of the regular rep has dimension |G|
    assert hom_dim(ind.sheaf, ind.sheaf) == 6


def test_compact_induction_gate():
    with pytest.raises(GateError):
        compact_induction(S3, C2, unit_sheaf(delooping(C2), GF(3)))


def test_hecke_algebra_s3_c2():
    alg = HeckeAlgebra(S3, C2, unit_sheaf(delooping(C2), QQ))
    assert alg.dim == 2
    sc = alg.structure_constants()
    # identify T_e (identity) and T_w on the function basis
    ident = alg.identity_coords
    e_idx = max(range(2), key=lambda i: abs(ident[i]) if ident[i] else 0)
    # find which basis element is supported on the identity coset
    supp = []
    for F in alg.function_basis:
        nonzero = [g for g, m in F.values.items() if not m.is_zero()]
        supp.append(len(nonzero))
    te = supp.index(2)   # identity double coset has size |K| = 2
    tw = 1 - te
    # T_w^2 = 2 T_e + T_w
    coords = sc[tw][tw]
    assert coords[te] == QQ.of(2)
    assert coords[tw] == QQ.of(1)


def test_hecke_algebra_trivial_cases():
    alg = HeckeAlgebra(S3, S3, unit_sheaf(delooping(S3), QQ))
    assert alg.dim == 1
    E = S3.subgroup(frozenset({S3.identity}), name="1")
    algE = HeckeAlgebra(S3, E, unit_sheaf(delooping(E), QQ))
    # End_G(k[G]) = k[G]: dimension |G|
    assert algE.dim == 6


def test_anti_involution_s3_c2():
    alg = HeckeAlgebra(S3, C2, unit_sheaf(delooping(C2), QQ))
    iota, cert = anti_involution(alg)
    assert cert.anti_multiplicative
    assert cert.involutive
    # the nontrivial double coset of (S3, C2) is inversion stable
    for w, wrep in cert.coset_swap.items():
        assert wrep == w
    for F in alg.function_basis:
        assert iota(iota(F)) == F


def test_anti_involution_identity_element():
    alg = HeckeAlgebra(S3, C2, unit_sheaf(delooping(C2), QQ))
    iota, _ = anti_involution(alg)
    e = alg.function_identity()
    assert iota(e) == e


def test_anti_involution_abelian_inversion():
    C4 = presets.group("C4")
    C2sub = C4.subgroup(C4.generated_subgroup([2]), name="C2")
    alg = HeckeAlgebra(C4, C2sub, unit_sheaf(delooping(C2sub), QQ))
    assert alg.dim == 2
    iota, cert = anti_involution(alg)
    assert cert.anti_multiplicative and cert.involutive
    # inversion permutes the cosets (here: fixes them, since w = -w mod K)
    for w, wrep in cert.coset_swap.items():
        orbit = {C4.mul(C4.mul(k, w), kp) for k in C2sub.elements
                 for kp in C2sub.elements}
        assert wrep in orbit or wrep == min(
            {C4.mul(C4.mul(k, C4.inv(w)), kp) for k in C2sub.elements
             for kp in C2sub.elements}, key=okey)


def test_dual_weight_transport():
    alg = HeckeAlgebra(S3, C2, unit_sheaf(delooping(C2), QQ))
    to_dual = dual_weight_transport(alg)
    F = alg.function_basis[0]
    G2 = to_dual(to_dual(F))
    assert G2 == F


def test_frobenius_check():
    BK = delooping(C2)
    BG = delooping(S3)
    triv_k = unit_sheaf(BK, QQ)
    triv_g = unit_sheaf(BG, QQ)
    ok, lhs, rhs = frobenius_check(S3, C2, triv_k, triv_g)
    assert ok and lhs == rhs == 1
    # W = cInd V: both sides equal the Hecke algebra dimension
    ind = compact_induction(S3, C2, triv_k)
    ok2, lhs2, rhs2 = frobenius_check(S3, C2, triv_k, ind.sheaf)
    assert ok2 and lhs2 == 2


def test_frobenius_std_rep():
    # dim Hom(cInd 1, std) = 1 = dim Hom(1, Res std)
    BG = delooping(S3)
    ob = BG.objects[0]

    def std_mat(g):
        cols = []
        for (a, b) in ((0, 1), (1, 2)):
            img = {g[a]: 1, g[b]: -1}
            vec = [img.get(i, 0) for i in range(3)]
            cols.append([vec[0], -vec[2]])
        return Matrix.from_int_rows(QQ, list(map(list, zip(*cols))))

    std = Sheaf(BG, QQ, {ob: 2}, {g: std_mat(g) for g in S3.elements})
    triv_k = unit_sheaf(delooping(C2), QQ)
    ok, lhs, rhs = frobenius_check(S3, C2, triv_k, std)
    assert ok and lhs == 1


def test_prim_duality_on_hecke_trivial():
    cert = prim_duality_on_hecke(S3, S3, QQ)
    assert cert.prim_ok and cert.dual_matches_induction
    assert cert.anti_automorphism_ok and cert.agrees_with_iota
    assert cert.algebra_dim == 1


def test_prim_duality_on_hecke_s3_c2():
    cert = prim_duality_on_hecke(S3, C2, QQ)
    assert cert.prim_ok and cert.dual_matches_induction
    assert cert.anti_automorphism_ok
    assert cert.agrees_with_iota
    assert cert.algebra_dim == 2


def test_prim_duality_on_hecke_c4_c2():
    C4 = presets.group("C4")
    C2sub = C4.subgroup(C4.generated_subgroup([2]), name="C2")
    cert = prim_duality_on_hecke(C4, C2sub, QQ)
    assert cert.prim_ok and cert.agrees_with_iota
    assert cert.algebra_dim == 2
