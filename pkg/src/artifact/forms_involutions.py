"""Superhermitian forms, their symmetry superalgebras, the adjoint and B = Re(g'(x)g).

A form lives on a free module (see :class:`~artifact.graded_linear.DModule`);
right modules use the sesquilinearity rule

    g(v d1, w d2) = (-1)^{|d1||v| + |d1||g|} iota(d1) g(v, w) d2

and left modules the mirror rule

    g(d1 v, d2 w) = (-1)^{|d2||w| + |d1||g|} d1 g(v, w) iota(d2).
"""

from __future__ import annotations

from collections import defaultdict
from functools import cached_property

from gmpy2 import mpq

from ._linalg import Echelon, solve_many
from .graded_linear import (
    BilinearSpace,
    DModule,
    DSuperMatrix,
    LieSpan,
    SuperMatrix,
    SuperSpace,
    realify,
    sign,
    solve_in_span,
)
from .scalars_division import (
    DElement,
    DivisionSuperalgebra,
    Superinvolution,
    gauss,
    get_involution,
    re_part,
    scalar_to_json,
)


class SuperhermitianForm:
    def __init__(self, module: DModule, involution: Superinvolution, sign_: int, parity: int,
                 gram: dict, validate: bool = True):
        self.module = module
        self.involution = involution
        self.sign = sign_
        self.parity = parity
        self.gram = {k: v for k, v in gram.items() if v}
        if validate:
            problems = self.problems()
            if problems:
                raise ValueError("invalid superhermitian form: " + "; ".join(problems))

    @property
    def algebra(self) -> DivisionSuperalgebra:
        return self.module.algebra

    def g(self, a: int, b: int) -> DElement:
        return self.gram.get((a, b), self.algebra.zero())

    def problems(self) -> list[str]:
        out = []
        gp = self.module.gen_parities
        n = self.module.rank
        for a in range(n):
            for b in range(n):
                v = self.g(a, b)
                if v and v.parity != (gp[a] + gp[b] + self.parity) % 2:
                    out.append(f"gram entry ({a},{b}) has the wrong parity")
                # g(w, v) = eps (-1)^{|v||w|} iota(g(v, w))
                rhs = self.involution(self.g(b, a)) * (self.sign * sign(gp[a] * gp[b]))
                if v != rhs:
                    out.append(f"symmetry law fails at ({a},{b})")
        if not out and self.gram_rank() < len(self.module.real_basis):
            out.append("form is degenerate")
        return out

    def gram_rank(self) -> int:
        M = realify(DSuperMatrix(DModule(self.algebra, self.module.gen_parities, "right"), self.gram))
        rows = defaultdict(dict)
        for (r, c), v in M.entries.items():
            rows[r][c] = v
        return Echelon(rows.values()).rank

    @cached_property
    def table(self) -> list[list[tuple]]:
        """Values on the realified basis, as coordinate tuples in D."""
        mod = self.module
        A = mod.algebra
        iota = self.involution
        gp = mod.gen_parities
        basis = [A.basis(b) for b in range(A.dim)]
        iot = [iota(e) for e in basis]
        out = []
        for (a, b) in mod.real_basis:
            row = []
            for (a2, b2) in mod.real_basis:
                G = self.g(a, a2)
                if not G:
                    row.append(None)
                    continue
                if mod.side == "right":
                    s = sign(A.parities[b] * (gp[a] + self.parity))
                    val = iot[b] * G * basis[b2]
                else:
                    s = sign(A.parities[b2] * gp[a2] + A.parities[b] * self.parity)
                    val = basis[b] * G * iot[b2]
                row.append(tuple(x * s for x in val.coords) if val else None)
            out.append(row)
        return out

    def value(self, u: dict, v: dict) -> DElement:
        """g(u, v) for realified coordinate vectors (base-field bilinear)."""
        A = self.algebra
        acc = [mpq(0)] * A.dim
        for k, x in u.items():
            row = self.table[k]
            for k2, y in v.items():
                t = row[k2]
                if t is not None:
                    xy = x * y
                    for i, c in enumerate(t):
                        if c:
                            acc[i] = acc[i] + xy * c
        return A.element(acc)

    def scaled(self, c: DElement) -> "SuperhermitianForm":
        """The form c * g (c even and central with iota(c) = c keeps the type)."""
        return SuperhermitianForm(self.module, self.involution, self.sign, self.parity,
                                  {k: c * v for k, v in self.gram.items()})

    def to_json(self) -> dict:
        n = self.module.rank
        return {
            "algebra": self.algebra.name,
            "involution_tag": self.involution.tag,
            "sign": self.sign,
            "parity": self.parity,
            "gram": [[[scalar_to_json(x) for x in self.g(a, b).coords] for b in range(n)] for a in range(n)],
        }

    def __repr__(self):
        return (f"SuperhermitianForm({self.algebra.name}, {self.involution.tag}, eps={self.sign}, "
                f"parity={self.parity}, gens={self.module.gen_parities})")


# ---------------------------------------------------------------------------
# canonical forms


def _diag_block(A, start, signs, unit):
    return {(start + i, start + i): unit * s for i, s in enumerate(signs)}


def _j_block(A, start, m, unit):
    if m % 2:
        raise ValueError("a skew block needs even size")
    h = m // 2
    out = {}
    for i in range(h):
        out[(start + i, start + h + i)] = unit
        out[(start + h + i, start + i)] = -unit
    return out


def standard_form(algebra: DivisionSuperalgebra, involution: str, sign_: int, parity: int, shape,
                  side: str = "right") -> SuperhermitianForm:
    """Canonical Gram matrix for one of the families in the real and complex tables.

    Shapes:
      * even form over R, C or H: ``(p, q, r, s)`` (or ``(p, q, m)`` meaning
        ``(p, q, m, 0)``), i.e. p+q even generators and r+s odd ones with the
        signatures of the hermitian-type blocks; skew blocks take their size
        from the first entry of the pair and require the second to be 0;
      * even form over Cl1C: ``(p, q)`` even generators;
      * odd form over R, C or H: ``n`` (n even plus n odd generators).
    """
    A = algebra
    base = A.name
    iota = get_involution(A, involution)
    if sign_ not in (1, -1) or parity not in (0, 1):
        raise ValueError("sign must be +-1 and parity 0 or 1")
    one = A.one()
    has_i = "i" in A.symbols
    if base == "Cl1C":
        if parity:
            raise ValueError("odd forms over Cl1C are reduced to even ones and are not tabulated")
        p, q = _pair(shape)
        unit = one if sign_ == 1 else A["i"]
        gram = _diag_block(A, 0, [1] * p + [-1] * q, unit)
        mod = DModule(A, (0,) * (p + q), side)
        return SuperhermitianForm(mod, iota, sign_, parity, gram)
    if A.odd_indices:
        raise ValueError(f"{base} carries no superinvolution")
    if parity == 1:
        n = shape if isinstance(shape, int) else shape[0]
        gram = {}
        for i in range(n):
            gram[(i, n + i)] = one
            gram[(n + i, i)] = one * sign_
        mod = DModule(A, (0,) * n + (1,) * n, side)
        return SuperhermitianForm(mod, iota, sign_, parity, gram)
    if isinstance(shape, int):
        shape = (shape, 0, 0, 0)
    shape = tuple(shape) + (0,) * (4 - len(shape))
    p, q, r, s = shape
    gram = {}
    # the even block is of type sign_, the odd block of type -sign_
    for start, (x, y), typ in ((0, (p, q), sign_), (p + q, (r, s), -sign_)):
        if involution == "triv":
            if typ == 1:
                gram.update(_diag_block(A, start, [1] * x + [-1] * y, one))
            else:
                if y:
                    raise ValueError("a skew block has no signature")
                gram.update(_j_block(A, start, x, one))
        else:
            if not has_i:
                raise ValueError("conjugation needs a complex unit")
            unit = one if typ == 1 else A["i"]
            gram.update(_diag_block(A, start, [1] * x + [-1] * y, unit))
    mod = DModule(A, (0,) * (p + q) + (1,) * (r + s), side)
    return SuperhermitianForm(mod, iota, sign_, parity, gram)


def _pair(shape):
    if isinstance(shape, int):
        return shape, 0
    return tuple(shape)[0], (tuple(shape)[1] if len(shape) > 1 else 0)


# ---------------------------------------------------------------------------
# symmetry superalgebras and adjoints


def _invariance_constraint(gamma: SuperhermitianForm, Z: SuperMatrix, target=None) -> dict:
    """Coordinates of g(Zu, v) + (-1)^{|Z||u|} g(u, Zv) over the realified basis."""
    par = gamma.module.parities
    T = gamma.table
    p = Z.parity
    out: dict = defaultdict(lambda: 0)
    N = len(par)
    for (f, k), v in Z.entries.items():
        # first term: g(Z e_k, e_k') gets v * T[f][k']
        row = T[f]
        for k2 in range(N):
            t = row[k2]
            if t is not None:
                for i, c in enumerate(t):
                    if c:
                        out[(k, k2, i)] += v * c
        # second term with roles: g(e_k', Z e_k) gets sign * v * T[k'][f]
        for k1 in range(N):
            t = T[k1][f]
            if t is not None:
                s = sign(p * par[k1])
                for i, c in enumerate(t):
                    if c:
                        out[(k1, k, i)] += s * v * c
    return {k: v for k, v in out.items() if v}


def g_of_form_d(gamma: SuperhermitianForm) -> list[DSuperMatrix]:
    """D-matrix basis of g(W, gamma)."""
    basis = gamma.module.gl_basis()
    out = []
    for p in (0, 1):
        group = [m for m in basis if m.parity == p]
        real = [realify(m) for m in group]
        for vec in solve_in_span(real, lambda Z: _invariance_constraint(gamma, Z)):
            acc = None
            for i, c in vec.items():
                term = group[i].scale(c)
                acc = term if acc is None else acc + term
            out.append(acc)
    return out


def g_of_form(gamma: SuperhermitianForm) -> LieSpan:
    """g(W, gamma) realified over the base field."""
    return LieSpan(gamma.module.space, [realify(m) for m in g_of_form_d(gamma)])


def adjoint(T: DSuperMatrix, gamma: SuperhermitianForm) -> DSuperMatrix:
    """The D-linear T# with g(T# w, v) = (-1)^{|T||w|} g(w, T v)."""
    p = T.parity
    if p is None:
        raise ValueError("adjoint needs a homogeneous map")
    par = gamma.module.parities
    N = len(par)
    TT = gamma.table
    group = [m for m in gamma.module.gl_basis() if m.parity == p]
    real = [realify(m) for m in group]
    # unknown part: g(X e_k, e_k') as a linear function of the coefficients
    rows = defaultdict(dict)
    for j, Z in enumerate(real):
        for (f, k), v in Z.entries.items():
            for k2 in range(N):
                t = TT[f][k2]
                if t is not None:
                    for i, c in enumerate(t):
                        if c:
                            key = (k, k2, i)
                            rows[key][j] = rows[key].get(j, 0) + v * c
    # right-hand side: (-1)^{|T| |e_k|} g(e_k, T e_k')
    rhs: dict = defaultdict(lambda: 0)
    RT = realify(T)
    for (f, k2), v in RT.entries.items():
        for k in range(N):
            t = TT[k][f]
            if t is not None:
                s = sign(p * par[k])
                for i, c in enumerate(t):
                    if c:
                        rhs[(k, k2, i)] += s * v * c
    keys = sorted(set(rows) | {k for k, v in rhs.items() if v})
    eqs = [rows.get(k, {}) for k in keys]
    b = {n: rhs[k] for n, k in enumerate(keys) if rhs.get(k)}
    sol = solve_many(eqs, len(group), [b])[0]
    if sol is None:
        raise ValueError("adjoint does not exist (degenerate form?)")
    acc = DSuperMatrix(gamma.module, {})
    for i, c in sol.items():
        acc = acc + group[i].scale(c)
    return acc


# ---------------------------------------------------------------------------
# tensor products


class TensorModule:
    """Realified W (x)_D U with basis w_a (x) d_b u_c.

    Basis order: even before odd, then generator pair (a, c), then b.
    """

    def __init__(self, W: DModule, U: DModule):
        if W.algebra is not U.algebra:
            raise ValueError("W and U must be modules over the same algebra")
        if W.side != "right" or U.side != "left":
            raise ValueError("W must be a right module and U a left module")
        self.W, self.U = W, U
        A = W.algebra
        items = [(a, b, c) for a in range(W.rank) for c in range(U.rank) for b in range(A.dim)]
        par = {t: (W.gen_parities[t[0]] + A.parities[t[1]] + U.gen_parities[t[2]]) % 2 for t in items}
        self.basis = tuple([t for t in items if par[t] == 0] + [t for t in items if par[t] == 1])
        self.index = {t: k for k, t in enumerate(self.basis)}
        self.parities = tuple(par[t] for t in self.basis)

    @property
    def space(self) -> SuperSpace:
        return SuperSpace(self.parities, self.W.algebra.base_field)

    def lift_from_U(self, X: SuperMatrix) -> SuperMatrix:
        """Action of X in End(U) on W (x) U:  w (x) u -> (-1)^{|X||w|} w (x) X u."""
        p = X.parity
        Uidx = self.U.real_basis
        ent = {}
        for (r, c), v in X.entries.items():
            (c1, b1), (c0, b0) = Uidx[r], Uidx[c]
            for a in range(self.W.rank):
                s = sign(p * self.W.gen_parities[a])
                ent[(self.index[(a, b1, c1)], self.index[(a, b0, c0)])] = s * v
        return SuperMatrix(self.parities, self.parities, ent)

    def lift_from_W(self, Y: SuperMatrix) -> SuperMatrix:
        """Action of Y in End(W) on W (x) U:  w (x) u -> Y w (x) u."""
        Widx = self.W.real_basis
        ent = {}
        for (r, c), v in Y.entries.items():
            (a1, b1), (a0, b0) = Widx[r], Widx[c]
            for cc in range(self.U.rank):
                ent[(self.index[(a1, b1, cc)], self.index[(a0, b0, cc)])] = v
        return SuperMatrix(self.parities, self.parities, ent)


def tensor_form(gamma_w: SuperhermitianForm, gamma_u: SuperhermitianForm, check: bool = True):
    """B(w1 (x) u1, w2 (x) u2) = (-1)^{|u1||w2|+|w1||w2|} Re(g'(w2, w1) g(u1, u2)).

    Returns ``(TensorModule, BilinearSpace)``.
    """
    if check:
        if gamma_w.parity != gamma_u.parity:
            raise ValueError("the two forms must have the same parity")
        if gamma_w.sign != -gamma_u.sign:
            raise ValueError("the two forms must have opposite signs")
        expected = gamma_u.involution.compose_delta()
        if gamma_w.involution.matrix != expected.matrix:
            raise ValueError("the W-form must use iota o delta")
    tm = TensorModule(gamma_w.module, gamma_u.module)
    A = tm.W.algebra
    Wp, Up = tm.W.gen_parities, tm.U.gen_parities
    Uidx = tm.U.index
    TU = gamma_u.table
    ent = {}
    for k1, (a1, b1, c1) in enumerate(tm.basis):
        u1p = (A.parities[b1] + Up[c1]) % 2
        w1p = Wp[a1]
        row = TU[Uidx[(c1, b1)]]
        for k2, (a2, b2, c2) in enumerate(tm.basis):
            gw = gamma_w.g(a2, a1)
            if not gw:
                continue
            t = row[Uidx[(c2, b2)]]
            if t is None:
                continue
            val = re_part(gw * A.element(t))
            if val:
                w2p = Wp[a2]
                ent[(k1, k2)] = val * sign(u1p * w2p + w1p * w2p)
    gram = SuperMatrix(tm.parities, tm.parities, ent)
    return tm, BilinearSpace(tm.space, gram, validate=check)
