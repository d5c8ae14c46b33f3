"""Compact induction, double cosets, and Hecke algebras of finite groups
with the canonical anti-involution.

The Hecke algebra of (G, K, V) is computed twice: as the endomorphism
algebra of the induced representation (model A, by solving the intertwiner
system), and as the convolution algebra of bi-equivariant functions
supported on double cosets (model B); the explicit function-evaluation map
is certified to be an algebra isomorphism between them.  The anti-
involution T(g) -> T(g^{-1})^* is verified to be an involutive anti-
automorphism and cross-checked against the transport of endomorphisms
through the adjunction produced by the primness certificate of the induced
object (the mate construction), which must agree with it on the double
coset basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import GateError
from .groupoid import (
    Functor, delooping, delooping_hom, iso_comma_pullback,
    okey, pi0_and_aut, terminal_groupoid, to_terminal,
)
from .groups import FiniteGroup
from .linalg import Matrix, stack_columns
from .sheaves import (
    LanFunctor, PullbackFunctor, Sheaf, SheafMorphism, TheoremViolation,
    find_isomorphism, hom_dim, hom_space,
    identity_morphism, tensor_morphisms, unit_sheaf,
)


# ---------------------------------------------------------------------------
# Double cosets
# ---------------------------------------------------------------------------

@dataclass
class DoubleCosets:
    group: FiniteGroup
    left: FiniteGroup
    right: FiniteGroup
    representatives: tuple     # minimal under the element order
    sizes: tuple
    stabilizer_orders: tuple   # |H ∩ w K w^{-1}| per representative


def double_cosets(G, H, K, cross_check=True):
    """Orbits HgK with minimal representatives; sizes sum to |G|.  When
    cross_check is set, the component count and automorphism orders of
    */H x_{*/G} */K are matched against the brute-force decomposition."""
    for sub in (H, K):
        if not G.is_subgroup(sub.elements):
            raise TheoremViolation("not a subgroup of the ambient group")
    seen = set()
    reps, sizes, stabs = [], [], []
    for g in G.elements:
        if g in seen:
            continue
        orbit = {G.mul(G.mul(h, g), k) for h in H.elements
                 for k in K.elements}
        seen |= orbit
        w = min(orbit, key=okey)
        reps.append(w)
        sizes.append(len(orbit))
        conj = {G.mul(G.mul(w, k), G.inv(w)) for k in K.elements}
        stabs.append(len(set(H.elements) & conj))
    if sum(sizes) != len(G.elements):
        raise TheoremViolation("double coset sizes do not sum to |G|")
    out = DoubleCosets(G, H, K, tuple(reps), tuple(sizes), tuple(stabs))
    if cross_check:
        _cross_check_against_fiber_product(out)
    return out


def _cross_check_against_fiber_product(dc):
    G, H, K = dc.group, dc.left, dc.right
    BG, BH, BK = delooping(G), delooping(H), delooping(K)
    iH = delooping_hom({h: h for h in H.elements}, BH, BG)
    iK = delooping_hom({k: k for k in K.elements}, BK, BG)
    ic = iso_comma_pullback(iH, iK)
    comps = pi0_and_aut(ic.grpd)
    if len(comps) != len(dc.representatives):
        raise TheoremViolation(
            "fiber product component count %d != double coset count %d"
            % (len(comps), len(dc.representatives)))
    # component containing (•,•,m) corresponds to the double coset of m^{-1}
    expected = {}
    for w, st in zip(dc.representatives, dc.stabilizer_orders):
        orbit = frozenset(G.mul(G.mul(h, w), k) for h in H.elements
                          for k in K.elements)
        expected[orbit] = st
    for rep_obj, auts, _table in comps:
        m = rep_obj[2]
        w = G.inv(m)
        orbit = frozenset(G.mul(G.mul(h, w), k) for h in H.elements
                          for k in K.elements)
        if orbit not in expected:
            raise TheoremViolation("component does not match any double coset")
        if len(auts) != expected[orbit]:
            raise TheoremViolation(
                "automorphism order %d != stabilizer order %d"
                % (len(auts), expected[orbit]))


# ---------------------------------------------------------------------------
# Compact induction
# ---------------------------------------------------------------------------

def right_coset_reps(G, K):
    """Representatives of K\\G, minimal under the element order."""
    seen = set()
    reps = []
    for g in G.elements:
        if g in seen:
            continue
        coset = {G.mul(k, g) for k in K.elements}
        seen |= coset
        reps.append(min(coset, key=okey))
    return reps


@dataclass
class InducedModel:
    group: FiniteGroup
    subgroup: FiniteGroup
    weight: Sheaf
    reps: tuple          # right coset representatives
    sheaf: Sheaf         # the function-space model on */G
    comparison: SheafMorphism   # invertible intertwiner to the Lan model

    def coset_of(self, g):
        G, K = self.group, self.subgroup
        for j, r in enumerate(self.reps):
            if G.mul(g, G.inv(r)) in set(K.elements):
                return j, G.mul(g, G.inv(r))
        raise KeyError(g)


def compact_induction(G, K, V, field=None):
    """Function-space model of the induced sheaf on */G: functions
    f: G -> V with f(kg) = k f(g), acted on by right translation, with a
    certified isomorphism to the exceptional pushforward."""
    field = field or V.field
    if field.characteristic and len(G.elements) % field.characteristic == 0:
        raise GateError("characteristic divides the group order")
    BK = V.base
    obK = BK.objects[0]
    d = V.dim[obK]
    reps = right_coset_reps(G, K)
    n = len(reps)
    BG = delooping(G)
    obG = BG.objects[0]

    def block_index(j, b):
        return j * d + b

    mats = {}
    kset = set(K.elements)
    for x in G.elements:
        rows = [[field.zero] * (n * d) for _ in range(n * d)]
        for i, gi in enumerate(reps):
            target = G.mul(gi, G.inv(x))
            for j, gj in enumerate(reps):
                k = G.mul(gj, G.mul(x, G.inv(gi)))
                if k in kset:
                    blk = V.mat[k]
                    for a in range(d):
                        for b in range(d):
                            rows[block_index(j, a)][block_index(i, b)] = \
                                blk.rows[a][b]
                    break
        mats[x] = Matrix(field, rows, ncols=n * d)
    sheaf = Sheaf(BG, field, {obG: n * d}, mats)
    bad = sheaf.validate()
    if bad:
        raise TheoremViolation("induced model not a sheaf: %s" % bad[0])
    incl = delooping_hom({k: k for k in K.elements}, BK, BG)
    lan_model = LanFunctor(incl).obj(V)
    cmp_iso = find_isomorphism(lan_model, sheaf)
    if cmp_iso is None:
        raise TheoremViolation("no intertwiner to the Lan model")
    return InducedModel(G, K, V, tuple(reps), sheaf, cmp_iso)


# ---------------------------------------------------------------------------
# Hecke algebras: two models and the agreement certificate
# ---------------------------------------------------------------------------

@dataclass
class HeckeFunction:
    """A bi-equivariant function G -> End(V), stored on all of G."""
    values: dict         # g -> Matrix

    def __eq__(self, other):
        return self.values == other.values


class HeckeAlgebra:
    """Both models of End_G(cInd_K^G V) with structure constants."""

    def __init__(self, G, K, V, field=None):
        field = field or V.field
        self.G, self.K, self.V, self.field = G, K, V, field
        self.induced = compact_induction(G, K, V, field)
        self.dc = double_cosets(G, K, K)
        # model A: endomorphisms of the induced sheaf
        self.end_basis = hom_space(self.induced.sheaf, self.induced.sheaf)
        self.dim = len(self.end_basis)
        obG = self.induced.sheaf.base.objects[0]
        self.obG = obG
        # model B: bi-equivariant functions supported on double cosets
        self.function_basis = self._function_basis()
        if len(self.function_basis) != self.dim:
            raise TheoremViolation("model dimensions disagree")
        self.phi_matrix = self._phi_matrix()
        if not self.phi_matrix.is_invertible():
            raise TheoremViolation("model comparison not invertible")
        self._check_phi_multiplicative()
        self.identity_coords = self._identity_coords()

    # -- model B -------------------------------------------------------------

    def _function_basis(self):
        G, K, V, field = self.G, self.K, self.V, self.field
        d = V.dim[V.base.objects[0]]
        out = []
        kset = list(K.elements)
        for w in self.dc.representatives:
            # T(w) must satisfy rho(k) T(w) rho(k') = T(w) when k w k' = w
            rows = []
            eye = Matrix.identity(field, d)
            for k in kset:
                for kp in kset:
                    if G.mul(G.mul(k, w), kp) != w:
                        continue
                    lhs = V.mat[k].kron(V.mat[kp].transpose())
                    rows.append(lhs - Matrix.identity(field, d * d))
            if rows:
                sysm = rows[0]
                for r in rows[1:]:
                    sysm = sysm.vstack(r)
                null = sysm.nullspace()
            else:
                null = Matrix.identity(field, d * d).column_space_basis()
            for vec in null:
                Tw = Matrix(field, [[vec.rows[i * d + j][0]
                                     for j in range(d)] for i in range(d)],
                            ncols=d)
                out.append(self._extend_function(w, Tw))
        return out

    def _extend_function(self, w, Tw):
        G, K, V, field = self.G, self.K, self.V, self.field
        d = Tw.nrows
        values = {g: Matrix.zero(field, d, d) for g in G.elements}
        for k in K.elements:
            for kp in K.elements:
                g = G.mul(G.mul(k, w), kp)
                values[g] = V.mat[k] * Tw * V.mat[kp]
        return HeckeFunction(values)

    def convolve(self, F1, F2):
        """(F1 * F2)(g) = sum over right cosets Ky of F1(g y^{-1}) F2(y)."""
        G, field = self.G, self.field
        d = self.V.dim[self.V.base.objects[0]]
        values = {}
        for g in G.elements:
            acc = Matrix.zero(field, d, d)
            for y in self.induced.reps:
                acc = acc + F1.values[G.mul(g, G.inv(y))] * F2.values[y]
            values[g] = acc
        return HeckeFunction(values)

    def function_identity(self):
        """The unit: supported on K, value rho(k) at k."""
        G, K, V, field = self.G, self.K, self.V, self.field
        d = V.dim[V.base.objects[0]]
        values = {g: Matrix.zero(field, d, d) for g in G.elements}
        for k in K.elements:
            values[k] = V.mat[k]
        return HeckeFunction(values)

    def function_coordinates(self, F):
        field = self.field
        cols = []
        order = sorted(self.G.elements, key=okey)
        for b in self.function_basis:
            entries = []
            for g in order:
                for row in b.values[g].rows:
                    entries.extend(row)
            cols.append(Matrix.column(field, entries))
        target = []
        for g in order:
            for row in F.values[g].rows:
                target.extend(row)
        mat = stack_columns(field, cols, len(target))
        sol = mat.solve(Matrix.column(field, target))
        if sol is None:
            raise TheoremViolation("function outside the coset-basis span")
        return [sol.rows[i][0] for i in range(len(cols))]

    # -- the comparison A -> B -----------------------------------------------

    def to_function(self, T):
        """Phi(T)(g) v = T([1, v])(g): evaluate the endomorphism on the
        canonical generators."""
        G, K, V, field = self.G, self.K, self.V, self.field
        d = V.dim[V.base.objects[0]]
        reps = self.induced.reps
        mat = T.comp[self.obG]
        # [1, v] in coordinates: supported on the coset of the identity
        j0, k0 = self.induced.coset_of(G.identity)
        rho_g0 = V.mat[k0]    # value shift if the representative is not e
        values = {}
        for g in G.elements:
            j, k = self.induced.coset_of(g)
            out_cols = []
            for b in range(d):
                vcol = Matrix.column(field, [field.one if i == b else
                                             field.zero for i in range(d)])
                coeff = rho_g0 * vcol
                vec = [field.zero] * (len(reps) * d)
                for i in range(d):
                    vec[j0 * d + i] = coeff.rows[i][0]
                image = mat * Matrix.column(field, vec)
                block = [image.rows[j * d + i][0] for i in range(d)]
                valcol = V.mat[k] * Matrix.column(field, block)
                out_cols.append([valcol.rows[i][0] for i in range(d)])
            values[g] = Matrix(field, list(map(list, zip(*out_cols))),
                               ncols=d)
        return HeckeFunction(values)

    def _phi_matrix(self):
        cols = []
        for T in self.end_basis:
            coords = self.function_coordinates(self.to_function(T))
            cols.append(Matrix.column(self.field, coords))
        return stack_columns(self.field, cols, self.dim)

    def _check_phi_multiplicative(self):
        for T1 in self.end_basis:
            F1 = self.to_function(T1)
            for T2 in self.end_basis:
                F2 = self.to_function(T2)
                lhs = self.to_function(T2.then(T1))
                rhs = self.convolve(F1, F2)
                if lhs != rhs:
                    raise TheoremViolation(
                        "evaluation map is not an algebra homomorphism")

    def _identity_coords(self):
        return self.function_coordinates(self.function_identity())

    # -- structure constants --------------------------------------------------

    def structure_constants(self):
        """c[i][j][k]: basis_i * basis_j = sum_k c[i][j][k] basis_k in the
        convolution model."""
        out = []
        for F1 in self.function_basis:
            row = []
            for F2 in self.function_basis:
                row.append(self.function_coordinates(self.convolve(F1, F2)))
            out.append(row)
        return out


# ---------------------------------------------------------------------------
# Anti-involution
# ---------------------------------------------------------------------------

@dataclass
class InvolutionCertificate:
    anti_multiplicative: bool
    involutive: bool
    coset_swap: dict     # representative w -> representative of K w^{-1} K


def anti_involution(algebra, pairing=None):
    """iota(T)(g) = (T(g^{-1}))^* on the function model.  The weight must
    be self-dual: `pairing` is the invertible matrix V -> V* (taken to be 1
    for the trivial weight); otherwise a precondition error is raised.

    Returns (iota as a function on HeckeFunctions, certificate)."""
    V = algebra.V
    d = V.dim[V.base.objects[0]]
    field = algebra.field
    if pairing is None:
        if d != 1:
            raise GateError("weight not rank 1: supply a self-duality pairing")
        pairing = Matrix.identity(field, 1)
    if not pairing.is_invertible():
        raise GateError("pairing not invertible")
    pinv = pairing.inverse()
    G = algebra.G

    def iota(F):
        values = {}
        for g in G.elements:
            values[g] = pinv * F.values[G.inv(g)].transpose() * pairing
        return HeckeFunction(values)

    anti = True
    for F1 in algebra.function_basis:
        for F2 in algebra.function_basis:
            lhs = iota(algebra.convolve(F1, F2))
            rhs = algebra.convolve(iota(F2), iota(F1))
            if lhs != rhs:
                anti = False
    invol = all(iota(iota(F)) == F for F in algebra.function_basis)
    swap = {}
    K = algebra.K
    for w in algebra.dc.representatives:
        wi = G.inv(w)
        orbit = {G.mul(G.mul(k, wi), kp) for k in K.elements
                 for kp in K.elements}
        swap[w] = min(orbit, key=okey)
    return iota, InvolutionCertificate(anti, invol, swap)


def dual_weight_transport(algebra):
    """The map H(G,K,V) -> H(G,K,V*) for a not-necessarily-self-dual
    weight: T -> [g -> T(g^{-1})^t].  No involution is claimed."""
    G = algebra.G

    def to_dual(F):
        return HeckeFunction({g: F.values[G.inv(g)].transpose()
                              for g in G.elements})

    return to_dual


# ---------------------------------------------------------------------------
# Prim duality comparison
# ---------------------------------------------------------------------------

@dataclass
class PrimDualityCertificate:
    prim_ok: bool
    dual_matches_induction: bool
    anti_automorphism_ok: bool
    agrees_with_iota: bool
    algebra_dim: int


def prim_duality_on_hecke(G, K, field):
    """Compute the prim dual of the induced unit, transport endomorphisms
    through the mate bijection of the resulting adjunction, and certify
    agreement with the concrete anti-involution on the double coset basis."""
    from .kernels import (
        ComposedAfterXX, ComposedRightS, MapCalculus, prim_test,
    )
    from .sheaves import tensor
    BK = delooping(K)
    trivK = unit_sheaf(BK, field)
    ind = compact_induction(G, K, trivK, field)
    P = ind.sheaf
    BG = P.base
    pt = terminal_groupoid()
    f = to_terminal(BG, pt)
    cert = prim_test(f, P, field, check_double_dual=False)
    if not cert.ok:
        return PrimDualityCertificate(False, False, False, False, 0)
    calc = MapCalculus(f, field)
    r = cert.dual
    eta, eps = cert.unit, cert.counit
    c = find_isomorphism(r, P)
    if c is None:
        return PrimDualityCertificate(True, False, False, False, 0)

    # mate transport: T in End(P) -> rho(T) in End(r), then conjugate by c
    etaR_f = ComposedRightS(calc, r)
    rAfter = ComposedAfterXX(calc, r)
    from .kernels import _invert_certified
    from .sheaves import (
        projection_formula_cell_right as pf_right,
    )
    rp_t = tensor(r, P)
    pf4 = pf_right(calc.pi2, calc.pull_p1.obj(rp_t), r)
    bc4 = calc.bc_p2p1(rp_t)
    a4_fwd = pf4.then(tensor_morphisms(bc4, identity_morphism(r)))
    a4 = _invert_certified(a4_fwd, "hecke associator")
    rho_unitor = calc.right_unitor_reduced(r)

    def mate(T):
        etaR = etaR_f.mor(eta)
        start = SheafMorphism(r, etaR.dst, etaR.comp)
        a4r = SheafMorphism(etaR.dst, a4_fwd.src, a4.comp)
        # middle: r∘(T∘r): whisker T into pi1*P ⊗ pi2*r
        mid_cell = tensor_morphisms(calc.pull_p1.mor(T),
                                    identity_morphism(calc.pull_p2.obj(r)))
        whisked = rAfter.mor(mid_cell.then(eps))
        whisked = SheafMorphism(a4_fwd.src, whisked.dst, whisked.comp)
        tail = SheafMorphism(whisked.dst, r, rho_unitor.comp)
        return start.then(a4r).then(whisked).then(tail)

    def transported(T):
        return c.inverse().then(mate(T)).then(c)

    alg = HeckeAlgebra(G, K, trivK, field)
    # express P-endomorphisms in the algebra's own model: P here IS the
    # function model sheaf, so the bases coincide
    iota, inv_cert = anti_involution(alg)
    anti_ok = True
    agree = True
    for T in alg.end_basis:
        tr = transported(T)
        lhs = alg.to_function(tr)
        rhs = iota(alg.to_function(T))
        if lhs != rhs:
            agree = False
    for T1 in alg.end_basis:
        for T2 in alg.end_basis:
            lhs = alg.to_function(transported(T1.then(T2)))
            rhs = alg.to_function(
                transported(T2).then(transported(T1)))
            if lhs != rhs:
                anti_ok = False
    return PrimDualityCertificate(True, True, anti_ok, agree, alg.dim)


def frobenius_check(G, K, V, W, field=None):
    """dim Hom_G(cInd V, W) == dim Hom_K(V, Res W), both by linear algebra."""
    field = field or V.field
    ind = compact_induction(G, K, V, field)
    BK = V.base
    BG = W.base
    incl = delooping_hom({k: k for k in K.elements}, BK, BG)
    res = PullbackFunctor(incl).obj(W)
    lhs = hom_dim(ind.sheaf, W)
    rhs = hom_dim(V, res)
    return lhs == rhs, lhs, rhs
