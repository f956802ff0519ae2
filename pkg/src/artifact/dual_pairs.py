"""Type I and Type II dual pairs inside spo(E, B) and their verification."""

from __future__ import annotations

import json
import time
from importlib import resources
from dataclasses import dataclass, field
from typing import Sequence

from gmpy2 import mpq

from ._linalg import Echelon, IncrementalSpan, nullspace
from .forms_involutions import SuperhermitianForm, TensorModule, g_of_form, standard_form, tensor_form
from .graded_linear import (
    BilinearSpace,
    DModule,
    LieSpan,
    SuperMatrix,
    SuperSpace,
    gl_span,
    realify,
    sign,
    spo_ambient,
    superbracket,
    supercommutant,
)
from .scalars_division import QQ, QQI, DivisionSuperalgebra, make_algebra


@dataclass
class DualPairInstance:
    E: BilinearSpace
    g: LieSpan
    g_prime: LieSpan
    pair_type: str
    provenance: dict = field(default_factory=dict)
    tensor: TensorModule | None = None
    split: tuple | None = None  # Type II: (indices of T, indices of T*)

    @property
    def graded_dim(self) -> tuple:
        return self.E.space.graded_dim


def build_type_I(gamma_U: SuperhermitianForm, gamma_W: SuperhermitianForm,
                 provenance: dict | None = None) -> DualPairInstance:
    """(g(U, gamma), g(W, gamma')) acting on W (x)_D U with B = Re(gamma' (x) gamma)."""
    if gamma_U.module.rank == 0 or gamma_W.module.rank == 0:
        raise ValueError("both modules must be nonzero")
    if gamma_U.module.side != "left" or gamma_W.module.side != "right":
        raise ValueError("U must be a left module and W a right module")
    tm, B = tensor_form(gamma_W, gamma_U)
    g = LieSpan(tm.space, [tm.lift_from_U(x) for x in g_of_form(gamma_U).basis])
    gp = LieSpan(tm.space, [tm.lift_from_W(y) for y in g_of_form(gamma_W).basis])
    return DualPairInstance(B, g, gp, "I", dict(provenance or {}), tensor=tm)


def canonical_dual_form(T_par: Sequence[int], field_: str = QQ):
    """E = T + T* with the canonical pairing, basis (T0, T0*, T1, T1*).

    Returns ``(parities, gram, T_index, Tstar_index)``.
    """
    ev = [k for k, p in enumerate(T_par) if p == 0]
    od = [k for k, p in enumerate(T_par) if p == 1]
    order = [("T", k) for k in ev] + [("S", k) for k in ev] + [("T", k) for k in od] + [("S", k) for k in od]
    pos = {t: i for i, t in enumerate(order)}
    par = tuple(T_par[k] for _, k in order)
    ent = {}
    for k, p in enumerate(T_par):
        t, s = pos[("T", k)], pos[("S", k)]
        # B(e + e*, f + f*) = e*(f) -+ f*(e)
        ent[(s, t)] = mpq(1)
        ent[(t, s)] = mpq(1) if p else mpq(-1)
    gram = SuperMatrix(par, par, ent)
    return par, gram, [pos[("T", k)] for k in range(len(T_par))], [pos[("S", k)] for k in range(len(T_par))]


def _embed_T(X: SuperMatrix, par, t_idx) -> SuperMatrix:
    return SuperMatrix(par, par, {(t_idx[r], t_idx[c]): v for (r, c), v in X.entries.items()})


def hat(X: SuperMatrix, B: BilinearSpace, par, t_idx) -> SuperMatrix:
    """X acting on T extended to T + T* inside spo:  X (+) 0 - (X (+) 0)^#."""
    Xe = _embed_T(X, par, t_idx)
    return Xe - B.adjoint(Xe)


def build_type_II(D: DivisionSuperalgebra, U_parities: Sequence[int], W_parities: Sequence[int],
                  provenance: dict | None = None) -> DualPairInstance:
    """(gl_D(U), gl_D(W)) on E = (W (x)_D U) + its dual."""
    U = DModule(D, tuple(U_parities), "left")
    W = DModule(D, tuple(W_parities), "right")
    if U.rank == 0 or W.rank == 0:
        raise ValueError("both modules must be nonzero")
    tm = TensorModule(W, U)
    par, gram, t_idx, s_idx = canonical_dual_form(tm.parities, D.base_field)
    B = BilinearSpace(SuperSpace(par, D.base_field), gram)
    g = LieSpan(par, [hat(tm.lift_from_U(x), B, par, t_idx) for x in gl_span(U).basis])
    gp = LieSpan(par, [hat(tm.lift_from_W(y), B, par, t_idx) for y in gl_span(W).basis])
    return DualPairInstance(B, g, gp, "II", dict(provenance or {}), tensor=tm, split=(t_idx, s_idx))


def _shift(X: SuperMatrix, par, off: int) -> SuperMatrix:
    return SuperMatrix(par, par, {(r + off, c + off): v for (r, c), v in X.entries.items()})


def direct_sum(p: DualPairInstance, q: DualPairInstance) -> DualPairInstance:
    """(g1 + g2, g1' + g2') acting block-diagonally on E1 + E2."""
    par = tuple(p.E.parities) + tuple(q.E.parities)
    n = len(p.E.parities)
    if p.E.space.field != q.E.space.field:
        raise ValueError("both instances must live over the same field")
    gram = SuperMatrix(par, par, {**_shift(p.E.gram, par, 0).entries, **_shift(q.E.gram, par, n).entries})
    E = BilinearSpace(SuperSpace(par, p.E.space.field), gram)
    g = LieSpan(E.space, [_shift(X, par, 0) for X in p.g.basis] + [_shift(X, par, n) for X in q.g.basis])
    gp = LieSpan(E.space, [_shift(X, par, 0) for X in p.g_prime.basis] + [_shift(X, par, n) for X in q.g_prime.basis])
    return DualPairInstance(E, g, gp, "sum", {"summands": [p.provenance, q.provenance]})


def commute_elementwise(a: LieSpan, b: LieSpan) -> bool:
    return all(superbracket(x, y).is_zero() for x in a.basis for y in b.basis)


def verify_dual_pair(p: DualPairInstance, ambient: LieSpan | None = None) -> dict:
    """Mutual-centralizer report for a pair inside spo(E, B)."""
    t0 = time.perf_counter()
    amb = ambient if ambient is not None else spo_ambient(p.E)
    inside = amb.contains_span(p.g) and amb.contains_span(p.g_prime)
    Cg = supercommutant(p.g, amb, check=False)
    Cgp = supercommutant(p.g_prime, amb, check=False)
    c1 = Cg == p.g_prime
    c2 = Cgp == p.g
    # C(C(g)) = C(g') when C(g) = g'; otherwise compute it
    CCg = Cgp if c1 else supercommutant(Cg, amb, check=False)
    report = {
        "pair_type": p.pair_type,
        "provenance": p.provenance,
        "E": list(p.E.space.graded_dim),
        "dims": {
            "g": list(p.g.graded_dim),
            "g_prime": list(p.g_prime.graded_dim),
            "C(g)": list(Cg.graded_dim),
            "C(g_prime)": list(Cgp.graded_dim),
            "spo": list(amb.graded_dim),
        },
        "inside_spo": inside,
        "commute": commute_elementwise(p.g, p.g_prime),
        "C(g)=g'": c1,
        "C(g')=g": c2,
        "C(C(g))=g": CCg == p.g,
    }
    report["centralizer_ok"] = bool(inside and report["commute"] and c1 and c2 and report["C(C(g))=g"])
    report["runtime_ms"] = round((time.perf_counter() - t0) * 1000, 1)
    return report


# ---------------------------------------------------------------------------
# manifest rows


def table_rows(table: str | None = None) -> list[dict]:
    """Rows of the bundled dual-pair manifest, optionally filtered by table name."""
    text = resources.files("artifact").joinpath("data/tables.json").read_text()
    rows = json.loads(text)
    return [r for r in rows if table is None or r["table"] == table]


def find_row(table: str, row: int) -> dict:
    for r in table_rows(table):
        if r["row"] == row:
            return r
    raise KeyError(f"no row {row} in table {table}")


def instance_from_row(row: dict) -> DualPairInstance:
    """Build a pair from a manifest entry (see ``data/tables.json``)."""
    field_ = QQI if row.get("field") == "C" else QQ
    D = make_algebra(row["D"], field_)
    prov = {k: row[k] for k in ("table", "row", "D", "involution", "parity", "label") if k in row}
    if row["type"] == "I":
        iota = row["involution"]
        iota_w = {"iota1": "iota2", "iota2": "iota1"}.get(iota, iota)
        gu = standard_form(D, iota, -1, row["parity"], _shape(row["U"]), side="left")
        gw = standard_form(D, iota_w, 1, row["parity"], _shape(row["W"]), side="right")
        return build_type_I(gu, gw, prov)
    return build_type_II(D, _gens(row["U"]), _gens(row["W"]), prov)


def _shape(s):
    return s if isinstance(s, int) else tuple(s)


def _gens(s):
    n, m = (s, 0) if isinstance(s, int) else tuple(s)
    return (0,) * n + (1,) * m


# ---------------------------------------------------------------------------
# module structure: factorization and isotypic components


def _apply(X: SuperMatrix, v: dict) -> dict:
    return X.apply(v)


def generated_submodule(g: LieSpan, seed: dict) -> list[dict]:
    """Smallest g-stable subspace containing ``seed``."""
    span = IncrementalSpan()
    todo = [seed]
    if span.add(seed) is None:
        return []
    while todo:
        v = todo.pop()
        for X in g.basis:
            w = span.add(X.apply(v))
            if w is not None:
                todo.append(w)
    return span.basis()


def _homogeneous_parts(v: dict, par) -> list[dict]:
    out = []
    for p in (0, 1):
        w = {k: x for k, x in v.items() if par[k] == p}
        if w:
            out.append(w)
    return out


def _restrict(X: SuperMatrix, basis: list[dict], ech: Echelon) -> list[dict] | None:
    """Matrix (column dicts) of X on span(basis) in the given basis, None if not stable."""
    n = len(basis)
    rows: dict = {}
    for i, b in enumerate(basis):
        for k, v in b.items():
            rows.setdefault(k, {})[i] = v
    keys = sorted(rows)
    from ._linalg import solve_many

    images = [X.apply(b) for b in basis]
    rhs = []
    for img in images:
        if set(img) - set(rows):
            return None
        rhs.append({j: img[k] for j, k in enumerate(keys) if k in img})
    sols = solve_many([rows[k] for k in keys], n, rhs)
    if any(s is None for s in sols):
        return None
    return sols


def _intertwiners(g: LieSpan, src: list[dict], src_par, tgt_dim: int, tgt_par, target_action) -> list[tuple]:
    """Homogeneous T: src -> target with T X_src = (-1)^{|T||X|} X_tgt T.

    ``src`` is a list of homogeneous basis vectors (with parities ``src_par``);
    ``target_action(X)`` returns the target matrix of X as a SuperMatrix.
    Returns a list of ``(parity, {(row, col): value})``.
    """
    m = len(src)
    ech = Echelon(src)
    restr = [(_restrict(X, src, ech), X.parity) for X in g.basis]
    out = []
    for p in (0, 1):
        slots = [(r, c) for r in range(tgt_dim) for c in range(m) if (tgt_par[r] + src_par[c]) % 2 == p]
        idx = {s: i for i, s in enumerate(slots)}
        eqs: dict = {}
        for (cols, px), X in zip(restr, g.basis):
            Xt = target_action(X)
            s = sign(p * px)
            # (T X_src)[r, c] = sum_k T[r, k] X_src[k, c]
            for c, col in enumerate(cols):
                for k, v in col.items():
                    for r in range(tgt_dim):
                        i = idx.get((r, k))
                        if i is not None:
                            key = (id(X), r, c)
                            eqs.setdefault(key, {})
                            eqs[key][i] = eqs[key].get(i, 0) + v
            # - s (X_tgt T)[r, c] = - s sum_k X_tgt[r, k] T[k, c]
            for (r, k), v in Xt.entries.items():
                for c in range(m):
                    i = idx.get((k, c))
                    if i is not None:
                        key = (id(X), r, c)
                        eqs.setdefault(key, {})
                        eqs[key][i] = eqs[key].get(i, 0) - s * v
        for vec in nullspace(list(eqs.values()), len(slots)):
            out.append((p, {slots[i]: v for i, v in vec.items()}))
    return out


@dataclass
class FactorizationResult:
    D_basis: list
    W_basis: list
    D_dim: int
    W_dim: int
    U_dim: int
    is_division: bool
    bijective: bool

    def to_json(self) -> dict:
        return {"D_dim": self.D_dim, "W_dim": self.W_dim, "U_dim": self.U_dim,
                "is_division": self.is_division, "bijective": self.bijective}


def factorize(g: LieSpan, U: Sequence[dict]) -> FactorizationResult:
    """E = W (x)_D U with D = End_g(U) and W = Hom_g(U, E)."""
    par = g.ambient.parities
    N = len(par)
    basis = []
    for v in U:
        basis.extend(_homogeneous_parts(v, par))
    basis = Echelon(basis).basis()
    basis = [b for v in basis for b in _homogeneous_parts(v, par)]
    basis = Echelon(basis).basis()
    ech = Echelon(basis)
    if not basis:
        raise ValueError("U is zero")
    for X in g.basis:
        for b in basis:
            if not ech.contains(X.apply(b)):
                raise ValueError("U is not g-invariant")
    for b in basis:
        if len(generated_submodule(g, b)) != len(basis):
            raise ValueError("U is not irreducible")
    upar = [par[next(iter(b))] for b in basis]
    m = len(basis)

    def action_on_U(X):
        cols = _restrict(X, basis, ech)
        return SuperMatrix(upar, upar, {(k, c): v for c, col in enumerate(cols) for k, v in col.items()})

    D = _intertwiners(g, basis, upar, m, upar, action_on_U)
    Wb = _intertwiners(g, basis, upar, N, par, lambda X: X)
    # division check: every homogeneous basis element of D is invertible
    is_div = True
    for p, ent in D:
        rows: dict = {}
        for (r, c), v in ent.items():
            rows.setdefault(r, {})[c] = v
        if Echelon(rows.values()).rank < m:
            is_div = False
    # evaluation map W (x)_D U -> E
    images = []
    for _, ent in Wb:
        for c, b in enumerate(basis):
            images.append({r: v for (r, cc), v in ent.items() if cc == c and v})
    surj = Echelon(images).rank == N
    count_ok = len(D) > 0 and (len(Wb) * m) % len(D) == 0 and len(Wb) * m // len(D) == N
    return FactorizationResult(D, Wb, len(D), len(Wb), m, is_div, bool(surj and count_ok))


def isotypic_split(g: LieSpan, E: BilinearSpace) -> dict:
    """Isotypic components of E under g with their B-pairing profile."""
    par = E.parities
    N = len(par)
    # irreducible candidates grown from basis vectors
    cands = []
    for i in range(N):
        M = generated_submodule(g, {i: mpq(1)})
        M = Echelon([h for v in M for h in _homogeneous_parts(v, par)]).basis()
        irreducible = all(len(generated_submodule(g, b)) == len(M) for b in M
                          for b in _homogeneous_parts(b, par))
        if irreducible:
            cands.append(M)
    # keep one representative per isomorphism class
    reps: list = []
    for M in cands:
        mpar = [par[min(b)] for b in M]
        iso = False
        for R in reps:
            if len(R) != len(M):
                continue
            rpar = [par[min(b)] for b in R]
            ech = Echelon(M)

            def act(X, M=M, ech=ech, mpar=mpar):
                cols = _restrict(X, M, ech)
                return SuperMatrix(mpar, mpar, {(k, c): v for c, col in enumerate(cols) for k, v in col.items()})

            if _intertwiners(g, R, rpar, len(M), mpar, act):
                iso = True
                break
        if not iso:
            reps.append(M)
    comps = []
    for R in reps:
        rpar = [par[min(b)] for b in R]
        hom = _intertwiners(g, R, rpar, N, par, lambda X: X)
        vecs = []
        for _, ent in hom:
            for c in range(len(R)):
                v = {r: x for (r, cc), x in ent.items() if cc == c}
                if v:
                    vecs.append(v)
        comps.append(Echelon(vecs).basis())
    total = Echelon([v for c in comps for v in c]).rank
    if total != N or sum(len(c) for c in comps) != N:
        raise ValueError("decomposition incomplete: the action is not semisimple on the computed pieces")
    k = len(comps)
    pairing = [[any(E.value(u, v) for u in comps[i] for v in comps[j]) for j in range(k)] for i in range(k)]
    out = []
    for i, C in enumerate(comps):
        restricted = [[E.value(u, v) for v in C] for u in C]
        nondeg = Echelon([{j: x for j, x in enumerate(r) if x} for r in restricted]).rank == len(C)
        partners = [j for j in range(k) if j != i and pairing[i][j]]
        tag = "nondegenerate" if nondeg else ("isotropic-paired" if len(partners) == 1 else "isotropic")
        out.append({"dim": len(C), "graded_dim": [sum(1 for v in C if par[min(v)] == 0),
                                                  sum(1 for v in C if par[min(v)] == 1)],
                    "tag": tag, "partners": partners, "basis": C})
    return {"components": out, "pairing": pairing}
