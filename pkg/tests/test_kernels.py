import random

import pytest

from sixff import presets
from sixff.fields import QQ
from sixff.groupoid import (
    Functor, delooping, delooping_hom, disjoint_union, identity_functor,
    terminal_groupoid, to_terminal,
)
from sixff.kernels import (
    Kernel, KernelContext, MapCalculus, associator, base_change_suave_prim,
    etale_proper_test, kernel_compose, kernel_hom, kernel_identity,
    kernel_swap, left_unitor, phi, prim_test, psi, PsiEvaluator,
    psi_composition_certificate, psi_phi_certificate, right_unitor,
    suave_test, swap_compatibility, whisker_left,
)
from sixff.linalg import Matrix
from sixff.sheaves import (
    PullbackFunctor, Sheaf, hom_dim, sheaves_equal, unit_sheaf,
)

PT = terminal_groupoid()
S3 = presets.group("S3")
BS3 = delooping(S3)
C2 = S3.subgroup(S3.generated_subgroup([(1, 0, 2)]), name="C2")
BC2 = delooping(C2)
INCL = delooping_hom({g: g for g in C2.elements}, BC2, BS3)


def point_ctx():
    ctx = KernelContext(PT, QQ)
    return ctx


def discrete(n):
    return disjoint_union([PT] * n)


def sheaf_on(grpd, dims, rng=None):
    """Random-ish sheaf with identity transitions on a discrete groupoid."""
    field = QQ
    dim = {}
    mat = {}
    for i, x in enumerate(grpd.objects):
        dim[x] = dims[i % len(dims)]
    for m in grpd.morphisms:
        a, b = grpd.src[m], grpd.dst[m]
        assert a == b
        mat[m] = Matrix.identity(field, dim[a])
    return Sheaf(grpd, field, dim, mat)


def test_kernel_identity_point():
    ctx = point_ctx()
    ctx.add_object("pt", PT, identity_functor(PT))
    k = kernel_identity(ctx, "pt")
    assert k.payload.total_dim() == 1


def test_kernel_identity_group():
    ctx = point_ctx()
    ctx.add_object("BS3", BS3, to_terminal(BS3, PT))
    k = kernel_identity(ctx, "BS3")
    # regular bimodule: total dimension |G|
    assert k.payload.total_dim() == 6


def test_kernel_identity_three_points():
    ctx = point_ctx()
    X = discrete(3)
    ctx.add_object("X", X, to_terminal(X, PT))
    k = kernel_identity(ctx, "X")
    rp = ctx.prod(("X", "X"))
    dims = {o: k.payload.dim[o] for o in rp.grpd.objects}
    on_diag = sum(v for o, v in dims.items() if o[0][0] == o[0][1])
    off_diag = sum(v for o, v in dims.items() if o[0][0] != o[0][1])
    assert on_diag == 3 and off_diag == 0


def test_kernel_compose_matrix_dims():
    # kernels between finite sets over the point are matrices of vector
    # spaces; composition multiplies dimension matrices
    ctx = point_ctx()
    X, Y, Z = discrete(2), discrete(2), discrete(2)
    ctx.add_object("X", X, to_terminal(X, PT))
    ctx.add_object("Y", Y, to_terminal(Y, PT))
    ctx.add_object("Z", Z, to_terminal(Z, PT))
    rng = random.Random(3)

    def rand_kernel(srcn, tgtn):
        rp = ctx.prod((tgtn, srcn))
        dims = {}
        mats = {}
        for o in rp.grpd.objects:
            dims[o] = rng.randrange(0, 3)
        for m in rp.grpd.morphisms:
            mats[m] = Matrix.identity(QQ, dims[rp.grpd.src[m]])
        return Kernel(ctx, srcn, tgtn, Sheaf(rp.grpd, QQ, dims, mats))

    M = rand_kernel("Y", "X")
    N = rand_kernel("Z", "Y")
    C = kernel_compose(M, N)
    # dimension bookkeeping: C[x,z] = sum_y M[x,y] * N[y,z]
    rp_xy = ctx.prod(("X", "Y")).grpd
    rp_yz = ctx.prod(("Y", "Z")).grpd
    rp_xz = ctx.prod(("X", "Z")).grpd

    def dim_of(payload, grpd, a, b):
        for o in grpd.objects:
            if o[0] == (a, b):
                return payload.dim[o]
        raise KeyError

    for xo in X.objects:
        for zo in Z.objects:
            expected = sum(dim_of(M.payload, rp_xy, xo, yo) *
                           dim_of(N.payload, rp_yz, yo, zo)
                           for yo in Y.objects)
            assert dim_of(C.payload, rp_xz, xo, zo) == expected


def test_kernels_vector_space_tensor():
    ctx = point_ctx()
    ctx.add_object("pt", PT, identity_functor(PT))
    rp = ctx.prod(("pt", "pt"))
    o = rp.grpd.objects[0]
    V = Sheaf(rp.grpd, QQ, {o: 2},
              {m: Matrix.identity(QQ, 2) for m in rp.grpd.morphisms})
    W = Sheaf(rp.grpd, QQ, {o: 3},
              {m: Matrix.identity(QQ, 3) for m in rp.grpd.morphisms})
    M = Kernel(ctx, "pt", "pt", V)
    N = Kernel(ctx, "pt", "pt", W)
    assert kernel_compose(M, N).payload.dim[o] == 6


def test_unitors():
    ctx = point_ctx()
    X, Y = discrete(2), discrete(3)
    ctx.add_object("X", X, to_terminal(X, PT))
    ctx.add_object("Y", Y, to_terminal(Y, PT))
    rng = random.Random(5)
    rp = ctx.prod(("X", "Y"))
    dims = {o: rng.randrange(0, 3) for o in rp.grpd.objects}
    mats = {m: Matrix.identity(QQ, dims[rp.grpd.src[m]])
            for m in rp.grpd.morphisms}
    M = Kernel(ctx, "Y", "X", Sheaf(rp.grpd, QQ, dims, mats))
    ru = right_unitor(M)
    lu = left_unitor(M)
    assert ru.is_invertible() and lu.is_invertible()
    assert sheaves_equal(ru.dst, M.payload)
    assert sheaves_equal(lu.dst, M.payload)


def test_unitors_group_case():
    ctx = KernelContext(BS3, QQ)
    ctx.add_object("BC2", BC2, INCL)
    k = kernel_identity(ctx, "BC2")
    ru = right_unitor(k)
    lu = left_unitor(k)
    assert ru.is_invertible() and lu.is_invertible()


def _random_kernels_chain(ctx, names, rng, maxdim=2):
    out = []
    for a, b in zip(names[:-1], names[1:]):
        rp = ctx.prod((a, b))
        dims = {o: rng.randrange(0, maxdim + 1) for o in rp.grpd.objects}
        mats = {m: Matrix.identity(QQ, dims[rp.grpd.src[m]])
                for m in rp.grpd.morphisms}
        out.append(Kernel(ctx, b, a, Sheaf(rp.grpd, QQ, dims, mats)))
    return out


def test_associator_randomized():
    ctx = point_ctx()
    for i, n in enumerate((2, 3, 2, 2)):
        X = discrete(n)
        ctx.add_object("X%d" % i, X, to_terminal(X, PT))
    rng = random.Random(11)
    for trial in range(3):
        M, N, L = _random_kernels_chain(
            ctx, ["X0", "X1", "X2", "X3"], rng)
        al = associator(M, N, L)
        assert al.is_invertible()
        lhs = kernel_compose(kernel_compose(M, N), L)
        rhs = kernel_compose(M, kernel_compose(N, L))
        assert sheaves_equal(al.src, lhs.payload)
        assert sheaves_equal(al.dst, rhs.payload)


def test_associator_group_base():
    C2g = presets.group("C2")
    BC2g = delooping(C2g)
    ctx = KernelContext(BC2g, QQ)
    triv = delooping(presets.group("1"))
    j = Functor(triv, BC2g, {triv.objects[0]: BC2g.objects[0]},
                {triv.morphisms[0]: BC2g.identity[BC2g.objects[0]]})
    ctx.add_object("a", triv, j)
    ctx.add_object("b", BC2g, identity_functor(BC2g))
    ida = kernel_identity(ctx, "a")
    one = unit_sheaf(ctx.prod(("b", "a")).grpd, QQ)
    K = Kernel(ctx, "a", "b", one)
    al = associator(K, ida, ida)
    assert al.is_invertible()


def test_swap_compatibility():
    ctx = point_ctx()
    for i, n in enumerate((2, 2, 2)):
        X = discrete(n)
        ctx.add_object("Y%d" % i, X, to_terminal(X, PT))
    rng = random.Random(23)
    M, N = _random_kernels_chain(ctx, ["Y0", "Y1", "Y2"], rng)
    cell = swap_compatibility(M, N)
    assert cell.is_invertible()
    sw = kernel_swap(kernel_compose(M, N))
    assert sheaves_equal(cell.src, sw.payload)
    rhs = kernel_compose(kernel_swap(N), kernel_swap(M))
    assert sheaves_equal(cell.dst, rhs.payload)


def test_phi_graph_kernel():
    ctx = point_ctx()
    X, Y = discrete(2), discrete(3)
    ctx.add_object("X", X, to_terminal(X, PT))
    ctx.add_object("Y", Y, to_terminal(Y, PT))
    # the graph of a function q: X -> Y as a span [X <- X -> Y]
    q = Functor(X, Y, {X.objects[0]: Y.objects[0],
                       X.objects[1]: Y.objects[2]},
                {m: Y.identity[Y.objects[0] if X.src[m] == X.objects[0]
                               else Y.objects[2]] for m in X.morphisms})
    K, j = phi(ctx, "X", "Y", X, identity_functor(X), q)
    rp = ctx.prod(("Y", "X"))
    for o in rp.grpd.objects:
        (yo, xo), _ = o
        expected = 1 if q.ob[xo] == yo else 0
        assert K.payload.dim[o] == expected


def test_phi_identity_is_kernel_identity():
    ctx = point_ctx()
    X = discrete(2)
    ctx.add_object("X", X, to_terminal(X, PT))
    K, _ = phi(ctx, "X", "X", X, identity_functor(X), identity_functor(X))
    kid = kernel_identity(ctx, "X")
    assert K.payload.dim == kid.payload.dim


def test_psi_matrix_action():
    ctx = point_ctx()
    X, Y = discrete(2), discrete(2)
    ctx.add_object("X", X, to_terminal(X, PT))
    ctx.add_object("Y", Y, to_terminal(Y, PT))
    rp = ctx.prod(("X", "Y"))
    dims = {}
    for o in rp.grpd.objects:
        (xo, yo), _ = o
        dims[o] = 2 if (xo == X.objects[0]) else 1
    mats = {m: Matrix.identity(QQ, dims[rp.grpd.src[m]])
            for m in rp.grpd.morphisms}
    M = Kernel(ctx, "Y", "X", Sheaf(rp.grpd, QQ, dims, mats))
    ev = PsiEvaluator(M)
    V = sheaf_on(Y, [1, 3])
    out = ev.obj(V)
    # dimension vector = matrix * vector
    assert out.dim[X.objects[0]] == 2 * 1 + 2 * 3
    assert out.dim[X.objects[1]] == 1 * 1 + 1 * 3


def test_psi_identity_kernel_acts_as_identity():
    ctx = KernelContext(BS3, QQ)
    ctx.add_object("a", BC2, INCL)
    kid = kernel_identity(ctx, "a")
    ev = PsiEvaluator(kid)
    V = unit_sheaf(BC2, QQ)
    out = ev.obj(V)
    assert out.dim == V.dim
    assert hom_dim(out, V) >= 1


def test_psi_composition_certificate():
    ctx = point_ctx()
    for i, n in enumerate((2, 2, 2)):
        X = discrete(n)
        ctx.add_object("Z%d" % i, X, to_terminal(X, PT))
    rng = random.Random(31)
    M, N = _random_kernels_chain(ctx, ["Z0", "Z1", "Z2"], rng)
    Z2 = ctx.objects["Z2"][0]
    probes = [unit_sheaf(Z2, QQ), sheaf_on(Z2, [2, 1])]
    cells = psi_composition_certificate(M, N, probes)
    assert all(c.is_invertible() for c in cells)


def test_psi_phi_agrees_with_direct():
    ctx = point_ctx()
    X, Y = discrete(2), discrete(2)
    ctx.add_object("X", X, to_terminal(X, PT))
    ctx.add_object("Y", Y, to_terminal(Y, PT))
    swapf = Functor(X, Y, {X.objects[0]: Y.objects[1],
                           X.objects[1]: Y.objects[0]},
                    {m: Y.identity[Y.objects[1] if X.src[m] == X.objects[0]
                                   else Y.objects[0]] for m in X.morphisms})
    probes = [unit_sheaf(X, QQ), sheaf_on(X, [2, 1])]
    K, cells = psi_phi_certificate(ctx, "X", "Y", X,
                                   identity_functor(X), swapf, probes)
    assert all(c.is_invertible() for c in cells)


def test_suave_test_identity_map():
    # S = X, f = id: suave dual of any sheaf is its pointwise dual
    f = identity_functor(BC2)
    P = unit_sheaf(BC2, QQ)
    cert = suave_test(f, P, QQ)
    assert cert.ok and cert.triangle1 and cert.triangle2
    assert cert.dual.dim == P.dim


def test_suave_test_classifying_map():
    f = to_terminal(BC2, PT)
    P = unit_sheaf(BC2, QQ)
    cert = suave_test(f, P, QQ)
    assert cert.ok
    assert cert.dual.dim[BC2.objects[0]] == 1


def test_suave_test_finite_sets():
    X = discrete(3)
    f = to_terminal(X, PT)
    P = sheaf_on(X, [1, 2, 0])
    cert = suave_test(f, P, QQ)
    assert cert.ok
    for x in X.objects:
        assert cert.dual.dim[x] == P.dim[x]


def test_suave_test_subgroup_inclusion():
    P = unit_sheaf(BC2, QQ)
    cert = suave_test(INCL, P, QQ)
    assert cert.ok, cert.failing


def test_prim_test_identity_and_unit():
    f = identity_functor(BC2)
    P = unit_sheaf(BC2, QQ)
    cert = prim_test(f, P, QQ)
    assert cert.ok and cert.double_dual_ok


def test_prim_test_zero_sheaf():
    from sixff.sheaves import zero_sheaf
    f = to_terminal(BC2, PT)
    P = zero_sheaf(BC2, QQ)
    cert = prim_test(f, P, QQ)
    assert cert.ok
    assert cert.dual.total_dim() == 0


def test_prim_test_subgroup_inclusion():
    P = unit_sheaf(BC2, QQ)
    cert = prim_test(INCL, P, QQ, check_double_dual=True)
    assert cert.ok, cert.failing
    assert cert.double_dual_ok


def test_etale_proper_identity():
    f = identity_functor(BC2)
    cert = etale_proper_test(f, QQ)
    assert cert.etale_ok and cert.proper_ok
    assert cert.omega.total_dim() == 1
    assert cert.delta.total_dim() == 1


def test_etale_proper_subgroup():
    from sixff.sheaves import Sheaf as Sh
    sgn_mats = {g: Matrix.from_int_rows(
        QQ, [[1 if g == S3.identity or g in
              [x for x in S3.elements if sorted([x]) and
               _sign(x) == 0] else -1]])
        for g in S3.elements}
    probes = [unit_sheaf(BS3, QQ)]
    cert = etale_proper_test(INCL, QQ, probes)
    assert cert.etale_ok and cert.proper_ok
    assert cert.suave_twist_ok and cert.prim_twist_ok


def _sign(perm):
    inv = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm))
              if perm[i] > perm[j])
    return inv % 2


def test_etale_proper_three_points():
    X = discrete(3)
    f = to_terminal(X, PT)
    cert = etale_proper_test(f, QQ, [unit_sheaf(PT, QQ)])
    assert cert.etale_ok and cert.proper_ok
    assert cert.omega.total_dim() == 3  # unit on each of the 3 points


def test_base_change_eight_maps():
    pt_incl = Functor(PT, BS3, {PT.objects[0]: BS3.objects[0]},
                      {PT.morphisms[0]: BS3.identity[BS3.objects[0]]})
    probes_Y = [unit_sheaf(PT, QQ)]
    probes_Xp = [unit_sheaf(BC2, QQ)]
    out, ic = base_change_suave_prim(
        pt_incl, INCL,
        probes_Y=probes_Y, probes_Xp=probes_Xp,
        probes_W=[unit_sheaf_of_iso_comma(pt_incl, INCL)],
        probes_X=[unit_sheaf(BS3, QQ)])
    assert len(out) == 8


def unit_sheaf_of_iso_comma(f, g):
    from sixff.groupoid import iso_comma_pullback
    ic = iso_comma_pullback(f, g)
    return unit_sheaf(ic.grpd, QQ)


def test_base_change_eight_maps_product_square():
    A, B = discrete(2), discrete(2)
    f, g = to_terminal(A, PT), to_terminal(B, PT)
    out, ic = base_change_suave_prim(
        f, g,
        probes_Y=[unit_sheaf(A, QQ)],
        probes_Xp=[unit_sheaf(B, QQ)],
        probes_W=[unit_sheaf_of_iso_comma(f, g)],
        probes_X=[unit_sheaf(PT, QQ)])
    assert len(out) == 8
