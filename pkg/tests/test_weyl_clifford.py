import random

import pytest
import sympy as sp
from gmpy2 import mpq
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact.dual_pairs import canonical_dual_form
from artifact.graded_linear import BilinearSpace, SuperMatrix, SuperSpace, spo_ambient, superbracket
from artifact.invariants_howe import spo_space
from artifact.scalars_division import QQI
from artifact.weyl_clifford import (
    FockBasis,
    GroupElement,
    WeylClifford,
    beta,
    fock_act,
    group_act,
    lagrangian_split,
    spoly_act,
    spoly_mul,
    sym_count,
    symbol,
    wc_mul,
)
from oracles import all_words, brute_sym_count, fermion_matrices, weyl_operator


def split(n0, n1, field="QQ"):
    par, gram, t, s = canonical_dual_form((0,) * n0 + (1,) * n1, field)
    return BilinearSpace(SuperSpace(par, field), gram), t, s


SPLITS = {k: split(*k) for k in [(1, 0), (2, 0), (0, 1), (0, 2), (1, 1), (2, 2)]}
WCS = {k: WeylClifford(B) for k, (B, _, _) in SPLITS.items()}


def random_element(wc, rnd, max_deg=4, terms=3):
    e = wc.zero()
    for _ in range(terms):
        k = rnd.randint(0, max_deg)
        e = e + wc.word([rnd.randrange(wc.dim) for _ in range(k)]).scale(rnd.randint(-3, 3))
    return e


def homogeneous_element(wc, rnd, deg, terms=3):
    """A random element whose top-degree part sits in degree ``deg``."""
    e = wc.zero()
    for _ in range(terms):
        e = e + wc.word([rnd.randrange(wc.dim) for _ in range(deg)]).scale(rnd.randint(1, 3))
    return e


def rat(c):
    return sp.Rational(int(c.numerator), int(c.denominator))


# --- defining relations ----------------------------------------------------

@pytest.mark.parametrize("key", list(SPLITS))
def test_generators_satisfy_relations(key):
    wc = WCS[key]
    for i in range(wc.dim):
        for j in range(wc.dim):
            assert wc.bracket(wc.gen(i), wc.gen(j)) == wc.scalar(wc.b(i, j))


def test_odd_square_is_half_the_form():
    B, _ = spo_space(0, 2)
    wc = WeylClifford(B)
    assert wc.mul(wc.gen(0), wc.gen(0)) == wc.scalar(mpq(1, 2))
    assert wc.mul(wc.gen(1), wc.gen(0)) == -wc.gen(0) * wc.gen(1)


def test_weyl_rewrite_of_s_times_t():
    B, t, s = SPLITS[(1, 0)]
    wc = WeylClifford(B)
    # x_s x_t = x_t x_s + B(s, t), and (t, s) is the normal order
    got = wc.word([s[0], t[0]])
    assert got == wc.word([t[0], s[0]]) + wc.scalar(wc.b(s[0], t[0]))
    assert got.degree == 2


def test_normal_monomials_are_sorted_and_odd_free():
    wc = WCS[(1, 1)]
    for d in range(5):
        ms = wc.monomials(d)
        assert len(ms) == sym_count(2, 2, d)
        for m in ms:
            assert list(m) == sorted(m)
            odd = [i for i in m if wc.parities[i]]
            assert len(odd) == len(set(odd))


@pytest.mark.parametrize("n0,n1,d", [(a, b, d) for a in range(4) for b in range(4) for d in range(5)])
def test_sym_count_matches_enumeration(n0, n1, d):
    assert sym_count(n0, n1, d) == brute_sym_count(n0, n1, d)


def test_basis_must_list_even_first():
    par = (1, 0)
    gram = SuperMatrix(par, par, {(0, 0): mpq(1), (1, 1): mpq(1)})
    with pytest.raises(ValueError):
        WeylClifford(BilinearSpace(SuperSpace(par), gram, validate=False))


def test_mixing_algebras_is_rejected():
    with pytest.raises(ValueError):
        wc_mul(WCS[(1, 0)].one(), WCS[(2, 0)].one())


# --- operator oracles ------------------------------------------------------

def test_weyl_words_match_differential_operators():
    B, t, s = SPLITS[(2, 0)]
    wc = WeylClifford(B)
    tests = None
    for word in all_words(wc.dim, 4):
        direct, qs = weyl_operator(word, 2, t, s)
        if tests is None:
            tests = [sp.Integer(1), qs[0], qs[1], qs[0] ** 2 * qs[1], qs[0] * qs[1] ** 3]
        normal = wc.word(word)
        for f in tests:
            acc = 0
            for m, c in normal.terms.items():
                op, _ = weyl_operator(m, 2, t, s)
                acc += rat(c) * op(f)
            assert sp.expand(acc - direct(f)) == 0, word


def test_clifford_words_match_fermion_matrices():
    B, t, s = SPLITS[(0, 2)]
    wc = WeylClifford(B)
    create, annih = fermion_matrices(2)
    mat = {}
    for k in range(2):
        mat[t[k]] = create[k]
        mat[s[k]] = annih[k]
    one = sp.eye(4)

    def rep(m):
        out = one
        for i in m:
            out = out * mat[i]
        return out

    for word in all_words(wc.dim, 4):
        normal = wc.word(word)
        acc = sp.zeros(4)
        for m, c in normal.terms.items():
            acc += rat(c) * rep(m)
        assert acc == rep(word), word


# --- associativity ---------------------------------------------------------

@pytest.mark.parametrize("key", [(2, 0), (0, 2), (1, 1), (2, 2)])
def test_associativity_on_random_triples(key):
    wc = WCS[key]
    rnd = random.Random(hash(key) & 0xFFFF)
    for _ in range(100):
        x, y, z = (random_element(wc, rnd) for _ in range(3))
        assert wc.mul(wc.mul(x, y), z) == wc.mul(x, wc.mul(y, z))


@given(st.integers(0, 2 ** 32), st.sampled_from([(1, 1), (2, 2)]))
def test_reduction_order_independent(seed, key):
    wc = WCS[key]
    rnd = random.Random(seed)
    w = [rnd.randrange(wc.dim) for _ in range(4)]
    g = [wc.gen(i) for i in w]
    left = ((g[0] * g[1]) * g[2]) * g[3]
    right = g[0] * (g[1] * (g[2] * g[3]))
    mid = (g[0] * g[1]) * (g[2] * g[3])
    assert left == right == mid == wc.word(w)


# --- filtration ------------------------------------------------------------

@given(st.integers(0, 2 ** 32))
def test_filtration_bounds(seed):
    wc = WCS[(1, 1)]
    rnd = random.Random(seed)
    k, l = rnd.randint(0, 3), rnd.randint(0, 3)
    a, b = homogeneous_element(wc, rnd, k), homogeneous_element(wc, rnd, l)
    assert (a * b).degree <= k + l
    br = wc.bracket(a, b)
    if a.parity is not None and b.parity is not None:
        assert not br or br.degree <= k + l - 2


@given(st.integers(0, 2 ** 32))
def test_symbol_is_multiplicative(seed):
    wc = WCS[(1, 1)]
    rnd = random.Random(seed)
    k, l = rnd.randint(0, 3), rnd.randint(0, 3)
    a, b = homogeneous_element(wc, rnd, k), homogeneous_element(wc, rnd, l)
    assert symbol(a * b, k + l) == spoly_mul(wc.parities, symbol(a, k), symbol(b, l))


def test_symbol_rejects_low_filtration():
    wc = WCS[(1, 0)]
    with pytest.raises(ValueError):
        symbol(wc.word([0, 1, 1]), 2)
    assert symbol(wc.word([0, 1]), 3) == {}


def test_spoly_mul_is_supercommutative():
    par = (0, 0, 1, 1)
    x, y, e, f = ({(i,): mpq(1)} for i in range(4))
    assert spoly_mul(par, x, y) == spoly_mul(par, y, x)
    assert spoly_mul(par, e, f) == {m: -c for m, c in spoly_mul(par, f, e).items()}
    assert spoly_mul(par, e, e) == {}


# --- beta ------------------------------------------------------------------

@pytest.mark.parametrize("key", [(1, 0), (0, 2), (1, 1), (2, 2)])
def test_beta_is_a_lie_superalgebra_map(key):
    wc = WCS[key]
    amb = spo_ambient(wc.B)
    bs = wc.beta_many(amb.basis)
    for X, bX in zip(amb.basis, bs):
        for v in range(wc.dim):
            img = {r: c for (r, col), c in X.entries.items() if col == v}
            assert wc.bracket(bX, wc.gen(v)) == wc.vector(img)
    for i, X in enumerate(amb.basis):
        for j, Y in enumerate(amb.basis):
            assert wc.bracket(bs[i], bs[j]) == wc.beta(superbracket(X, Y))


@pytest.mark.parametrize("key", [(1, 0), (0, 2), (1, 1), (2, 2)])
def test_beta_is_onto_omega(key):
    from artifact._linalg import Echelon

    wc = WCS[key]
    amb = spo_ambient(wc.B)
    index = {m: k for k, m in enumerate(wc.filtered_monomials(2))}

    def vec(e):
        return {index[m]: c for m, c in e.terms.items()}

    images = Echelon([vec(b) for b in wc.beta_many(amb.basis)])
    omega = Echelon([vec(w) for w in wc.omega_basis()])
    assert images.rank == amb.dim == omega.rank
    assert images.basis() == omega.basis()


def test_beta_of_zero_and_non_member():
    wc = WCS[(1, 1)]
    par = wc.parities
    assert beta(wc, SuperMatrix.zero(par)) == wc.zero()
    with pytest.raises(ValueError):
        wc.beta(SuperMatrix.identity(par))


def test_beta_on_larger_space():
    B, _, _ = split(3, 3)
    wc = WeylClifford(B)
    amb = spo_ambient(B)
    bs = wc.beta_many(amb.basis[:6])
    for X, bX in zip(amb.basis[:6], bs):
        assert bX.degree == 2 or not bX
        for v in range(wc.dim):
            img = {r: c for (r, col), c in X.entries.items() if col == v}
            assert wc.bracket(bX, wc.gen(v)) == wc.vector(img)


# --- group action ----------------------------------------------------------

def _group_elements(B, t, s):
    par = B.parities
    n = len(par)
    # scale a hyperbolic pair by (2, 1/2) and swap an odd hyperbolic pair
    out = [GroupElement(B, SuperMatrix.identity(par), "id")]
    ev = [k for k in range(len(t)) if par[t[k]] == 0]
    od = [k for k in range(len(t)) if par[t[k]] == 1]
    if ev:
        k = ev[0]
        ent = {(i, i): mpq(1) for i in range(n)}
        ent[(t[k], t[k])], ent[(s[k], s[k])] = mpq(2), mpq(1, 2)
        out.append(GroupElement(B, SuperMatrix(par, par, ent), "scale"))
    if od:
        k = od[0]
        ent = {(i, i): mpq(1) for i in range(n) if i not in (t[k], s[k])}
        ent[(t[k], s[k])] = ent[(s[k], t[k])] = mpq(1)
        out.append(GroupElement(B, SuperMatrix(par, par, ent), "swap"))
    return out


def test_group_element_validation():
    B, t, s = SPLITS[(1, 1)]
    par = B.parities
    with pytest.raises(ValueError):
        GroupElement(B, SuperMatrix.identity(par).scale(mpq(2)))
    with pytest.raises(ValueError):
        GroupElement(B, SuperMatrix(par, par, {(0, 2): mpq(1)}))
    Bq, _ = spo_space(0, 2)
    r = GroupElement.reflection(Bq, 0)
    assert r.matrix.entries[(0, 0)] == -1


@given(st.integers(0, 2 ** 32))
def test_group_action_is_an_automorphism(seed):
    key = (1, 1)
    B, t, s = SPLITS[key]
    wc = WCS[key]
    rnd = random.Random(seed)
    a, b = random_element(wc, rnd, 3), random_element(wc, rnd, 3)
    for g in _group_elements(B, t, s):
        assert group_act(g, a * b) == group_act(g, a) * group_act(g, b)
        if g.tag == "id":
            assert group_act(g, a) == a


@given(st.integers(0, 2 ** 32))
def test_symbol_is_equivariant(seed):
    key = (1, 1)
    B, t, s = SPLITS[key]
    wc = WCS[key]
    rnd = random.Random(seed)
    k = rnd.randint(0, 3)
    a = homogeneous_element(wc, rnd, k)
    for g in _group_elements(B, t, s):
        assert symbol(group_act(g, a), k) == spoly_act(wc.parities, g.matrix, symbol(a, k))


# --- Fock model ------------------------------------------------------------

def _fock(key, N):
    B, t, s = SPLITS[key]
    wc = WCS[key]
    return wc, FockBasis(wc, [{i: mpq(1)} for i in t], [{i: mpq(1)} for i in s], N)


@pytest.mark.parametrize("key", [(1, 0), (2, 0), (0, 2), (1, 1), (2, 2)])
def test_fock_degree_counts(key):
    _, F = _fock(key, 4)
    n1 = sum(F.vpar)
    for d in range(5):
        assert F.count(d) == len(F.degree_block(d)) == brute_sym_count(len(F.vpar) - n1, n1, d)


def test_fock_vacuum_and_creation():
    wc, F = _fock((1, 1), 3)
    B, t, s = SPLITS[(1, 1)]
    vac = F.index[()]
    for k, i in enumerate(t):
        M = fock_act(wc.gen(i), F)
        assert M.entries.get((F.index[(k,)], vac)) == 1
    for i in s:
        M = fock_act(wc.gen(i), F)
        assert all(col != vac for (_, col) in M.entries)


def test_derivation_commutator_with_multiplication():
    # D_k M_j - (-1)^{|j||k|} M_j D_k = B(V'_k, V_j) on polynomials
    wc, F = _fock((1, 1), 4)
    polys = [{m: mpq(1)} for m in F.monomials if len(m) <= 3]
    for j in range(len(F.V)):
        for k in range(len(F.Vp)):
            pj, pk = F.vpar[j], F.vp_par[k]
            val = F.wc.B.value(F.Vp[k], F.V[j])
            for f in polys:
                lhs = F.deriv(k, F.mult(j, f))
                rhs = F.mult(j, F.deriv(k, f))
                diff = dict(lhs)
                for m, c in rhs.items():
                    diff[m] = diff.get(m, 0) - (-1) ** (pj * pk) * c
                diff = {m: c for m, c in diff.items() if c}
                assert diff == {m: val * c for m, c in f.items() if val}


@pytest.mark.parametrize("key", [(2, 0), (0, 2), (1, 1)])
def test_fock_respects_products_on_safe_window(key):
    wc, F = _fock(key, 5)
    rnd = random.Random(7)
    for _ in range(10):
        a, b = random_element(wc, rnd, 2), random_element(wc, rnd, 2)
        da, db = max(a.degree, 0), max(b.degree, 0)
        window = range(0, F.N - da - db + 1)
        cols = set(k for d in window for k in F.degree_block(d))
        lhs = fock_act(a * b, F, degrees=list(window))
        rhs = fock_act(a, F) @ fock_act(b, F, degrees=list(window))
        assert {k: v for k, v in lhs.entries.items() if k[1] in cols} == \
               {k: v for k, v in rhs.entries.items() if k[1] in cols}


# --- Lagrangian splitting --------------------------------------------------

def _check_split(B, V, Vp):
    for a in V:
        for b in V:
            assert B.value(a, b) == 0
    for a in Vp:
        for b in Vp:
            assert B.value(a, b) == 0
    assert len(V) + len(Vp) == len(B.parities)


@pytest.mark.parametrize("key", list(SPLITS))
def test_lagrangian_split_of_split_forms(key):
    B, _, _ = SPLITS[key]
    V, Vp = lagrangian_split(B)
    _check_split(B, V, Vp)
    FockBasis(WeylClifford(B), V, Vp, 2)


def test_identity_odd_form_splits_only_over_gaussian_field():
    Bq, _ = spo_space(2, 2)
    with pytest.raises(ValueError):
        lagrangian_split(Bq)
    Bi, _ = spo_space(2, 2, QQI)
    V, Vp = lagrangian_split(Bi)
    _check_split(Bi, V, Vp)
    F = FockBasis(WeylClifford(Bi), V, Vp, 3)
    assert [F.count(d) for d in range(4)] == [1, 2, 2, 2]


@settings(max_examples=10)
@given(st.integers(0, 2 ** 32))
def test_to_json_lists_each_term(seed):
    wc = WCS[(1, 1)]
    a = random_element(wc, random.Random(seed), 3)
    js = a.to_json()
    assert len(js) == len(a.terms)
    for entry in js:
        assert len(entry["even"]) == len(wc.even_slots)
        assert all(wc.parities[i] for i in entry["odd"])
