import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from artifact.graded_linear import (
    BilinearSpace,
    DModule,
    DSuperMatrix,
    LieSpan,
    SuperMatrix,
    SuperSpace,
    complex_to_real,
    gl_span,
    realify,
    spo_ambient,
    spo_dimension,
    superbracket,
    supercommutant,
)
from artifact.realizations import embed_map
from artifact.scalars_division import ALGEBRA_NAMES, GaussianRational, gauss, make_algebra
from oracles import spo_dim_formula

small = st.integers(-3, 3)


def canon(m2, n):
    par = (0,) * m2 + (1,) * n
    G = {}
    h = m2 // 2
    for i in range(h):
        G[(i, h + i)] = mpq(1)
        G[(h + i, i)] = mpq(-1)
    for j in range(n):
        G[(m2 + j, m2 + j)] = mpq(1)
    return BilinearSpace(par, SuperMatrix(par, par, G))


def homogeneous(par, p):
    n = len(par)
    cells = [(r, c) for r in range(n) for c in range(n) if (par[r] + par[c]) % 2 == p]
    return st.lists(small, min_size=len(cells), max_size=len(cells)).map(
        lambda vs: SuperMatrix(par, par, {rc: mpq(v) for rc, v in zip(cells, vs) if v}))


PAR = (0, 0, 1, 1, 1)


# --- superbracket ----------------------------------------------------------

def test_odd_self_bracket_is_twice_square():
    X = SuperMatrix((0, 1), (0, 1), {(0, 1): mpq(2), (1, 0): mpq(3)})
    assert superbracket(X, X) == (X @ X).scale(2)


def test_gl11_odd_bracket():
    E12 = SuperMatrix((0, 1), (0, 1), {(0, 1): mpq(1)})
    E21 = SuperMatrix((0, 1), (0, 1), {(1, 0): mpq(1)})
    assert superbracket(E12, E21).entries == {(0, 0): 1, (1, 1): 1}


def test_even_bracket_is_commutator():
    X = SuperMatrix((0, 0), (0, 0), {(0, 1): mpq(1)})
    Y = SuperMatrix((0, 0), (0, 0), {(1, 0): mpq(1)})
    assert superbracket(X, Y) == X @ Y - Y @ X


def test_inhomogeneous_bracket_rejected():
    X = SuperMatrix((0, 1), (0, 1), {(0, 0): mpq(1), (0, 1): mpq(1)})
    with pytest.raises(ValueError):
        superbracket(X, X)


@given(st.data())
def test_super_jacobi(data):
    ps = [data.draw(st.integers(0, 1)) for _ in range(3)]
    X, Y, Z = (data.draw(homogeneous(PAR, p)) for p in ps)
    a, b, c = ps
    s = lambda k: -1 if k % 2 else 1
    lhs = superbracket(X, superbracket(Y, Z))
    rhs = superbracket(superbracket(X, Y), Z) + superbracket(Y, superbracket(X, Z)).scale(s(a * b))
    assert lhs == rhs
    assert superbracket(X, Y) == superbracket(Y, X).scale(-s(a * b))


# --- spo ambient -----------------------------------------------------------

@pytest.mark.parametrize("m2,n", [(2, 0), (0, 2), (2, 2), (4, 3), (2, 5), (6, 1)])
def test_spo_dimension_formula(m2, n):
    S = spo_ambient(canon(m2, n))
    assert S.graded_dim == spo_dim_formula(m2, n) == spo_dimension(m2, n)


def test_spo_small_cases():
    assert spo_ambient(canon(2, 0)).graded_dim == (3, 0)
    assert spo_ambient(canon(0, 2)).graded_dim == (1, 0)
    assert spo_ambient(canon(2, 2)).graded_dim == (4, 4)


@pytest.mark.parametrize("m2,n", [(2, 1), (2, 2), (4, 1)])
def test_spo_closed_and_preserves_form(m2, n):
    B = canon(m2, n)
    S = spo_ambient(B)
    assert S.is_closed()
    for X in S.basis:
        assert B.preserves(X)
        # defining identity on all basis pairs
        N = len(B.parities)
        for u in range(N):
            for v in range(N):
                Xu = X.apply({u: mpq(1)})
                Xv = X.apply({v: mpq(1)})
                sgn = -1 if (X.parity * B.parities[u]) % 2 else 1
                assert B.value(Xu, {v: mpq(1)}) + sgn * B.value({u: mpq(1)}, Xv) == 0


def test_degenerate_or_wrong_symmetry_rejected():
    par = (0, 0)
    with pytest.raises(ValueError):
        BilinearSpace(par, SuperMatrix(par, par, {(0, 0): mpq(1), (1, 1): mpq(1)}))
    with pytest.raises(ValueError):
        BilinearSpace(par, SuperMatrix(par, par, {}))


# --- supercommutant --------------------------------------------------------

def test_center_of_spo22_is_zero():
    S = spo_ambient(canon(2, 2))
    assert supercommutant(S, S).dim == 0


def test_commutant_of_zero_is_ambient():
    S = spo_ambient(canon(2, 2))
    assert supercommutant(LieSpan(S.ambient, []), S) == S


def test_commutant_of_sp2_contains_so2():
    S = spo_ambient(canon(2, 2))
    sp2 = LieSpan(S.ambient, [x for x in S.basis if all(r < 2 and c < 2 for (r, c) in x.entries)])
    assert sp2.graded_dim == (3, 0)
    so2 = LieSpan(S.ambient, [x for x in S.basis if all(r >= 2 and c >= 2 for (r, c) in x.entries)])
    assert so2.graded_dim == (1, 0)
    assert supercommutant(sp2, S).contains_span(so2)


def test_commutant_antitone():
    S = spo_ambient(canon(2, 2))
    g = LieSpan(S.ambient, S.basis[:2])
    h = LieSpan(S.ambient, S.basis[:5])
    assert supercommutant(g, S).contains_span(supercommutant(h, S))


def test_commutant_rejects_outside_element():
    S = spo_ambient(canon(2, 0))
    bad = LieSpan(S.ambient, [SuperMatrix.identity((0, 0))])
    with pytest.raises(ValueError):
        supercommutant(bad, S)


# --- realification ---------------------------------------------------------

def test_xi_of_complex_scalar():
    xi = embed_map("xi", 1)
    assert xi([[gauss(2, 5)]]) == [[2, 5], [-5, 2]]


def test_xi_prime_of_quaternion():
    H = make_algebra("Cl4R")
    q = H.element([1, 2, 3, 4])  # (1 + 2i) + j(3 - 4i) since ij = k
    out = embed_map("xi'", 1)([[q]])
    assert out == [[GaussianRational(1, 2), GaussianRational(-3, 4)],
                   [GaussianRational(3, 4), GaussianRational(1, -2)]]


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_realify_identity(name):
    A = make_algebra(name)
    for side in ("right", "left"):
        mod = DModule(A, (0,), side)
        Id = DSuperMatrix(mod, {(0, 0): A.one()})
        assert realify(Id) == SuperMatrix.identity(mod.parities)


def dmatrices(mod, p):
    A = mod.algebra
    cells = [(r, c, b) for r in range(mod.rank) for c in range(mod.rank) for b in range(A.dim)
             if (mod.gen_parities[r] + mod.gen_parities[c] + A.parities[b]) % 2 == p]

    def build(vs):
        ent = {}
        for (r, c, b), v in zip(cells, vs):
            if v:
                ent[(r, c)] = ent.get((r, c), A.zero()) + A.basis(b) * mpq(v)
        return DSuperMatrix(mod, ent)

    return st.lists(small, min_size=len(cells), max_size=len(cells)).map(build)


@given(st.data())
def test_realify_is_homomorphism(data):
    A = make_algebra(data.draw(st.sampled_from(ALGEBRA_NAMES)))
    side = data.draw(st.sampled_from(["right", "left"]))
    mod = DModule(A, (0, 1), side)
    p, q = data.draw(st.integers(0, 1)), data.draw(st.integers(0, 1))
    X, Y = data.draw(dmatrices(mod, p)), data.draw(dmatrices(mod, q))
    RX, RY = realify(X), realify(Y)
    assert realify(X @ Y) == RX @ RY
    if not RX.is_zero():
        assert RX.parity == p


@pytest.mark.parametrize("name", ALGEBRA_NAMES)
def test_gl_realification_is_injective(name):
    mod = DModule(make_algebra(name), (0, 1))
    assert gl_span(mod).dim == len(mod.gl_basis())


def test_basis_order_even_first_generator_major():
    mod = DModule(make_algebra("Cl1R"), (0, 1))
    assert mod.real_basis == ((0, 0), (1, 1), (0, 1), (1, 0))
    assert mod.parities == (0, 0, 1, 1)


def test_complex_to_real_multiplicative():
    i = gauss(0, 1)
    X = SuperMatrix((0, 1), (0, 1), {(0, 1): i, (1, 0): mpq(2)})
    Y = SuperMatrix((0, 1), (0, 1), {(0, 0): gauss(1, 1), (1, 1): mpq(3)})
    assert complex_to_real(X @ Y) == complex_to_real(X) @ complex_to_real(Y)


def test_lie_span_json_shape():
    S = spo_ambient(canon(2, 0))
    js = S.to_json()
    assert js["ambient_parities"] == [0, 0]
    assert {b["parity"] for b in js["basis"]} == {0}
    assert all(isinstance(v, str) for b in js["basis"] for row in b["matrix"] for v in row)


def test_superspace_graded_dim():
    assert SuperSpace((0, 1, 1)).graded_dim == (1, 2)
