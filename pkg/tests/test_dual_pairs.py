import pytest
from gmpy2 import mpq

from artifact.dual_pairs import (
    DualPairInstance,
    build_type_I,
    build_type_II,
    direct_sum,
    factorize,
    find_row,
    generated_submodule,
    instance_from_row,
    isotypic_split,
    table_rows,
    verify_dual_pair,
)
from artifact.forms_involutions import standard_form
from artifact.graded_linear import BilinearSpace, SuperMatrix, spo_ambient, superbracket
from artifact.scalars_division import make_algebra

ROWS = table_rows()

# (E, g, g') graded dimensions from the supercommutant computation, frozen
FROZEN = {
    "I:1": ((4, 5), (3, 2), (3, 2)), "I:2": ((2, 2), (1, 1), (1, 1)), "I:3": ((8, 10), (6, 4), (6, 4)),
    "I:4": ((4, 4), (2, 2), (2, 2)), "I:5": ((4, 4), (2, 2), (2, 2)), "I:6": ((4, 4), (2, 2), (2, 2)),
    "I:7": ((8, 8), (4, 4), (4, 4)), "I:8": ((8, 8), (4, 4), (4, 4)), "I:9": ((2, 2), (1, 1), (1, 1)),
    "IC:1": ((4, 5), (3, 2), (3, 2)), "IC:2": ((2, 2), (1, 1), (1, 1)),
    "II:1": ((4, 4), (2, 2), (2, 2)), "II:2": ((8, 8), (4, 4), (4, 4)), "II:3": ((8, 8), (8, 8), (4, 0)),
    "II:4": ((2, 2), (1, 1), (1, 1)), "II:5": ((4, 4), (2, 2), (2, 2)), "II:6": ((8, 8), (4, 4), (4, 4)),
    "II:7": ((4, 4), (2, 2), (2, 2)), "IIC:1": ((4, 4), (2, 2), (2, 2)), "IIC:2": ((2, 2), (1, 1), (1, 1)),
}


def key(row):
    return f"{row['table']}:{row['row']}"


def test_manifest_covers_all_four_tables():
    assert {r["table"] for r in ROWS} == {"I", "IC", "II", "IIC"}
    assert len(ROWS) == len(FROZEN)


@pytest.mark.parametrize("row", ROWS, ids=key)
def test_table_row_is_dual_pair(row):
    inst = instance_from_row(row)
    rep = verify_dual_pair(inst)
    assert rep["inside_spo"] and rep["commute"]
    assert rep["C(g)=g'"] and rep["C(g')=g"] and rep["C(C(g))=g"]
    assert rep["centralizer_ok"]
    E, g, gp = FROZEN[key(row)]
    assert tuple(rep["E"]) == E and tuple(rep["dims"]["g"]) == g and tuple(rep["dims"]["g_prime"]) == gp
    assert all(superbracket(x, y).is_zero() for x in inst.g.basis for y in inst.g_prime.basis)
    for X in inst.g.basis + inst.g_prime.basis:
        assert inst.E.preserves(X)


def test_rank_counting_for_type_two():
    # E = 2 * dim(W (x)_D U); gl(1|1) needs (4|4), q(1) needs (2|2)
    assert build_type_II(make_algebra("Cl0R"), (0, 1), (0, 1)).E.space.graded_dim == (4, 4)
    assert build_type_II(make_algebra("Cl7R"), (0,), (0,)).E.space.graded_dim == (2, 2)
    assert build_type_II(make_algebra("Cl4R"), (0,), (0,)).E.space.graded_dim == (8, 0)


def test_queer_type_one_row_lives_in_spo22():
    inst = instance_from_row(find_row("I", 9))
    assert inst.E.space.graded_dim == (2, 2)
    assert inst.g.graded_dim == (1, 1)


def test_zero_module_rejected():
    R = make_algebra("Cl0R")
    gu = standard_form(R, "triv", -1, 0, (2, 0, 0, 0), side="left")
    with pytest.raises(ValueError):
        build_type_II(R, (), (0,))
    with pytest.raises(ValueError):
        build_type_I(gu, standard_form(R, "triv", 1, 0, (0, 0, 0, 0)))


def test_ambient_is_not_its_own_commutant():
    inst = instance_from_row(find_row("II", 4))
    S = spo_ambient(inst.E)
    rep = verify_dual_pair(DualPairInstance(inst.E, S, S, "I"))
    assert not rep["C(g)=g'"] and not rep["centralizer_ok"]


def test_complex_type_two_gl11():
    rep = verify_dual_pair(instance_from_row(find_row("IIC", 1)))
    assert rep["centralizer_ok"]


# --- factorization ---------------------------------------------------------

def test_factorize_self_action():
    inst = instance_from_row(find_row("I", 2))
    S = spo_ambient(inst.E)
    N = len(inst.E.parities)
    res = factorize(S, [{i: mpq(1)} for i in range(N)])
    assert res.D_dim == 1 and res.W_dim == 1 and res.bijective and res.is_division


# p(n) on its defining module has an invariant line, so U is reducible there
PERIPLECTIC = {"I:2", "I:4", "IC:2"}


@pytest.mark.parametrize("row", [r for r in ROWS if r["type"] == "I" and key(r) not in PERIPLECTIC], ids=key)
def test_factorize_round_trip(row):
    inst = instance_from_row(row)
    tm = inst.tensor
    seed = [{tm.index[t]: mpq(1)} for t in tm.basis if t[0] == 0]
    U = generated_submodule(inst.g, seed[0])
    res = factorize(inst.g, U)
    assert res.is_division and res.bijective
    A = tm.W.algebra
    assert res.D_dim == A.dim
    assert res.W_dim * res.U_dim == len(inst.E.parities) * res.D_dim


@pytest.mark.parametrize("k", sorted(PERIPLECTIC))
def test_periplectic_u_factor_is_reducible(k):
    table, row = k.split(":")
    inst = instance_from_row(find_row(table, int(row)))
    tm = inst.tensor
    U = generated_submodule(inst.g, {tm.index[tm.basis[0]]: mpq(1)})
    with pytest.raises(ValueError, match="irreducible"):
        factorize(inst.g, U)


def test_factorize_rejects_non_invariant_line():
    inst = instance_from_row(find_row("I", 1))
    g = inst.g
    for i in range(len(inst.E.parities)):
        if len(generated_submodule(g, {i: mpq(1)})) > 1:
            with pytest.raises(ValueError):
                factorize(g, [{i: mpq(1)}])
            return
    pytest.fail("no non-invariant line found")


# --- isotypic components ---------------------------------------------------

def test_type_one_single_nondegenerate_component():
    out = isotypic_split(instance_from_row(find_row("I", 1)).g, instance_from_row(find_row("I", 1)).E)
    assert [c["tag"] for c in out["components"]] == ["nondegenerate"]


def test_type_two_two_paired_isotropic_components():
    inst = instance_from_row(find_row("II", 1))
    out = isotypic_split(inst.g, inst.E)
    comps = out["components"]
    assert len(comps) == 2
    assert all(c["tag"] == "isotropic-paired" for c in comps)
    assert comps[0]["partners"] == [1] and comps[1]["partners"] == [0]


def test_direct_sum_gives_orthogonal_nondegenerate_components():
    p = direct_sum(instance_from_row(find_row("I", 1)), instance_from_row(find_row("I", 5)))
    out = isotypic_split(p.g, p.E)
    comps = out["components"]
    assert len(comps) == 2
    assert all(c["tag"] == "nondegenerate" and c["partners"] == [] for c in comps)
    assert verify_dual_pair(p)["commute"]


def test_periplectic_rows_are_not_semisimple():
    inst = instance_from_row(find_row("I", 2))
    with pytest.raises(ValueError):
        isotypic_split(inst.g, inst.E)


def test_direct_sum_field_mismatch():
    with pytest.raises(ValueError):
        direct_sum(instance_from_row(find_row("I", 1)), instance_from_row(find_row("IC", 1)))
