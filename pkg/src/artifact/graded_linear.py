"""Z2-graded spaces and matrices, realification and Lie superalgebra spans.

Matrices are stored sparsely as ``{(row, col): value}``.  Basis vectors are
always ordered with all even vectors first; inside a parity class a module
basis is ordered generator-major, algebra-basis-minor.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from gmpy2 import mpq

from . import _linalg
from ._linalg import Echelon, nullspace, solve_many  # noqa: F401  (re-exported)
from .scalars_division import (
    QQ,
    QQI,
    DElement,
    DivisionSuperalgebra,
    GaussianRational,
    gauss,
    make_algebra,
    scalar_to_json,
)


@dataclass(frozen=True)
class SuperSpace:
    parities: tuple
    field: str = QQ

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def graded_dim(self) -> tuple:
        odd = sum(self.parities)
        return (self.dim - odd, odd)

    @staticmethod
    def standard(n: int, m: int, field: str = QQ) -> "SuperSpace":
        return SuperSpace((0,) * n + (1,) * m, field)


class SuperMatrix:
    """Sparse matrix between graded spaces with exact entries."""

    __slots__ = ("rows", "cols", "entries", "_parity")

    def __init__(self, row_par: Sequence[int], col_par: Sequence[int] | None = None, entries=None):
        self.rows = tuple(row_par)
        self.cols = tuple(col_par) if col_par is not None else self.rows
        self.entries = {k: v for k, v in (entries or {}).items() if v}
        self._parity = -1

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_dense(cls, mat, row_par, col_par=None):
        ent = {}
        for r, row in enumerate(mat):
            for c, v in enumerate(row):
                if v:
                    ent[(r, c)] = _num(v)
        return cls(row_par, col_par, ent)

    @classmethod
    def identity(cls, par):
        return cls(par, par, {(i, i): mpq(1) for i in range(len(par))})

    @classmethod
    def zero(cls, row_par, col_par=None):
        return cls(row_par, col_par, {})

    # -- basic properties --------------------------------------------------
    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    @property
    def parity(self):
        """Parity of a homogeneous matrix (zero is even), None otherwise."""
        if self._parity == -1:
            ps = {(self.rows[r] + self.cols[c]) % 2 for (r, c) in self.entries}
            self._parity = 0 if not ps else (ps.pop() if len(ps) == 1 else None)
        return self._parity

    def is_zero(self) -> bool:
        return not self.entries

    def to_dense(self):
        out = [[mpq(0)] * len(self.cols) for _ in self.rows]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    def vec(self) -> dict:
        n = len(self.cols)
        return {r * n + c: v for (r, c), v in self.entries.items()}

    @classmethod
    def from_vec(cls, vec: dict, row_par, col_par=None):
        col_par = row_par if col_par is None else col_par
        n = len(col_par)
        return cls(row_par, col_par, {divmod(k, n): v for k, v in vec.items()})

    # -- arithmetic --------------------------------------------------------
    def __add__(self, o: "SuperMatrix") -> "SuperMatrix":
        ent = dict(self.entries)
        for k, v in o.entries.items():
            ent[k] = ent.get(k, 0) + v
        return SuperMatrix(self.rows, self.cols, ent)

    def __sub__(self, o: "SuperMatrix") -> "SuperMatrix":
        ent = dict(self.entries)
        for k, v in o.entries.items():
            ent[k] = ent.get(k, 0) - v
        return SuperMatrix(self.rows, self.cols, ent)

    def __neg__(self):
        return SuperMatrix(self.rows, self.cols, {k: -v for k, v in self.entries.items()})

    def scale(self, s) -> "SuperMatrix":
        if not s:
            return SuperMatrix(self.rows, self.cols, {})
        return SuperMatrix(self.rows, self.cols, {k: s * v for k, v in self.entries.items()})

    __rmul__ = scale

    def __matmul__(self, o: "SuperMatrix") -> "SuperMatrix":
        if self.cols != o.rows:
            raise ValueError("incompatible shapes or gradings")
        by_row = defaultdict(list)
        for (k, c), v in o.entries.items():
            by_row[k].append((c, v))
        out: dict = {}
        for (r, k), a in self.entries.items():
            for c, b in by_row.get(k, ()):
                key = (r, c)
                out[key] = out.get(key, 0) + a * b
        return SuperMatrix(self.rows, o.cols, out)

    def apply(self, vec: dict) -> dict:
        """Matrix times sparse column vector."""
        out: dict = {}
        for (r, c), v in self.entries.items():
            x = vec.get(c)
            if x:
                out[r] = out.get(r, 0) + v * x
        return {k: v for k, v in out.items() if v}

    def transpose(self) -> "SuperMatrix":
        return SuperMatrix(self.cols, self.rows, {(c, r): v for (r, c), v in self.entries.items()})

    def map_entries(self, f) -> "SuperMatrix":
        return SuperMatrix(self.rows, self.cols, {k: f(v) for k, v in self.entries.items()})

    def __eq__(self, o):
        if not isinstance(o, SuperMatrix):
            return NotImplemented
        return self.rows == o.rows and self.cols == o.cols and self.entries == o.entries

    def __hash__(self):
        return hash((self.rows, self.cols, frozenset(self.entries.items())))

    def __repr__(self):
        return f"SuperMatrix({self.shape}, parity={self.parity}, nnz={len(self.entries)})"

    def to_json(self) -> dict:
        return {
            "row_parities": list(self.rows),
            "col_parities": list(self.cols),
            "parity": self.parity,
            "matrix": [[scalar_to_json(v) for v in row] for row in self.to_dense()],
        }


def _num(v):
    if isinstance(v, GaussianRational):
        return gauss(v.re, v.im)
    if isinstance(v, complex):
        return gauss(mpq(v.real), mpq(v.imag))
    return mpq(v)


def superbracket(X: SuperMatrix, Y: SuperMatrix) -> SuperMatrix:
    """[X, Y] = XY - (-1)^{|X||Y|} YX for homogeneous X, Y."""
    px, py = X.parity, Y.parity
    if px is None or py is None:
        raise ValueError("superbracket needs homogeneous arguments")
    xy = X @ Y
    yx = Y @ X
    return xy + yx if px and py else xy - yx


def sign(k) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# spans


class LieSpan:
    """A list of homogeneous matrices spanning a subspace of gl(ambient)."""

    def __init__(self, ambient: SuperSpace | Sequence[int], basis: Iterable[SuperMatrix], reduce: bool = True):
        if not isinstance(ambient, SuperSpace):
            ambient = SuperSpace(tuple(ambient))
        self.ambient = ambient
        mats = [m for m in basis if not m.is_zero()]
        for m in mats:
            if m.parity is None:
                raise ValueError("LieSpan basis elements must be homogeneous")
        if reduce:
            mats = _independent(mats, ambient.parities)
        self.basis = mats

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def graded_dim(self) -> tuple:
        odd = sum(1 for m in self.basis if m.parity == 1)
        return (self.dim - odd, odd)

    def by_parity(self, p: int) -> list[SuperMatrix]:
        return [m for m in self.basis if m.parity == p]

    @cached_property
    def echelon(self) -> Echelon:
        return Echelon([m.vec() for m in self.basis])

    def contains(self, X: SuperMatrix) -> bool:
        return self.echelon.contains(X.vec())

    def contains_span(self, other: "LieSpan") -> bool:
        return all(self.contains(m) for m in other.basis)

    def __eq__(self, other):
        if not isinstance(other, LieSpan):
            return NotImplemented
        return self.ambient.parities == other.ambient.parities and self.echelon.key() == other.echelon.key()

    def __hash__(self):
        return hash(self.echelon.key())

    def coordinates(self, X: SuperMatrix) -> dict | None:
        """Coefficients of X in this basis, or None if X is outside the span."""
        n = self.dim
        rows = defaultdict(dict)
        for i, m in enumerate(self.basis):
            for k, v in m.vec().items():
                rows[k][i] = v
        keys = sorted(set(rows) | set(X.vec()))
        xv = X.vec()
        eqs = [rows.get(k, {}) for k in keys]
        sol = solve_many(eqs, n, [{j: xv[k] for j, k in enumerate(keys) if k in xv}])[0]
        return sol

    def is_closed(self) -> bool:
        for i, a in enumerate(self.basis):
            for b in self.basis[i:]:
                if not self.contains(superbracket(a, b)):
                    return False
        return True

    def is_homogeneous(self) -> bool:
        return all(m.parity is not None for m in self.basis)

    def conjugate(self, P: SuperMatrix, Pinv: SuperMatrix) -> "LieSpan":
        return LieSpan(self.ambient, [P @ m @ Pinv for m in self.basis])

    def to_json(self) -> dict:
        return {
            "ambient_parities": list(self.ambient.parities),
            "graded_dim": list(self.graded_dim),
            "basis": [{"parity": m.parity, "matrix": m.to_json()["matrix"]} for m in self.basis],
        }

    def __repr__(self):
        return f"LieSpan(dim={self.graded_dim}, ambient={self.ambient.graded_dim})"


def _independent(mats: list[SuperMatrix], par) -> list[SuperMatrix]:
    """Canonical homogeneous basis of the span (echelon form per parity)."""
    out = []
    for p in (0, 1):
        group = [m for m in mats if m.parity == p]
        if not group:
            continue
        for v in Echelon([m.vec() for m in group]).basis():
            out.append(SuperMatrix.from_vec(v, par))
    return out


def span_of(par, mats) -> LieSpan:
    return LieSpan(SuperSpace(tuple(par)), mats)


def spans_equal(a: LieSpan, b: LieSpan) -> bool:
    return a == b


# ---------------------------------------------------------------------------
# bilinear spaces and spo


class BilinearSpace:
    """A graded space with a Gram matrix.  ``validate`` checks the spo axioms."""

    def __init__(self, space: SuperSpace | Sequence[int], gram: SuperMatrix, validate: bool = True):
        if not isinstance(space, SuperSpace):
            space = SuperSpace(tuple(space))
        self.space = space
        self.gram = gram
        if validate:
            problems = self.problems()
            if problems:
                raise ValueError("invalid bilinear space: " + "; ".join(problems))

    @property
    def parities(self):
        return self.space.parities

    def value(self, u: dict, v: dict):
        tot = 0
        for (r, c), g in self.gram.entries.items():
            a = u.get(r)
            if a:
                b = v.get(c)
                if b:
                    tot = tot + a * g * b
        return tot

    def problems(self) -> list[str]:
        out = []
        par = self.parities
        G = self.gram
        if G.parity not in (0,):
            out.append("form is not even")
        for (r, c), v in G.entries.items():
            w = G.entries.get((c, r), 0)
            if v != -sign(par[r] * par[c]) * w:
                out.append("form is not (-1)-supersymmetric")
                break
        if Echelon([{c: v for (r2, c), v in G.entries.items() if r2 == r} for r in range(len(par))]).rank < len(par):
            out.append("form is degenerate")
        return out

    def adjoint(self, X: SuperMatrix) -> SuperMatrix:
        """X^# with B(X^# u, v) = (-1)^{|X||u|} B(u, X v)."""
        p = X.parity
        par = self.parities
        Ginv = _inverse(self.gram)
        # (X^#)^T G = S G X  =>  X^# = (S G X G^{-1})^T
        M = self.gram @ X @ Ginv
        if p:
            M = SuperMatrix(M.rows, M.cols, {(r, c): (-v if par[r] else v) for (r, c), v in M.entries.items()})
        return M.transpose()

    def preserves(self, X: SuperMatrix) -> bool:
        return (self.adjoint(X) + X).is_zero()


def _inverse(M: SuperMatrix) -> SuperMatrix:
    n = len(M.rows)
    rows = [dict() for _ in range(n)]
    for (r, c), v in M.entries.items():
        rows[r][c] = v
    rhs = [{i: mpq(1)} for i in range(n)]
    sols = solve_many(rows, n, rhs)
    if any(s is None for s in sols):
        raise ValueError("matrix is singular")
    ent = {}
    for c, s in enumerate(sols):
        for r, v in s.items():
            ent[(r, c)] = v
    inv = SuperMatrix(M.cols, M.rows, ent)
    if not (M @ inv - SuperMatrix.identity(M.rows)).is_zero():
        raise ValueError("matrix is singular")
    return inv


inverse = _inverse


def spo_ambient(B: BilinearSpace) -> LieSpan:
    """Basis of spo(E, B), one parity at a time, from the defining identity."""
    par = B.parities
    n = len(par)
    G = B.gram
    g_rows = defaultdict(list)
    g_cols = defaultdict(list)
    for (r, c), v in G.entries.items():
        g_rows[r].append((c, v))
        g_cols[c].append((r, v))
    basis = []
    for p in (0, 1):
        slots = [(r, c) for r in range(n) for c in range(n) if (par[r] + par[c]) % 2 == p]
        idx = {rc: i for i, rc in enumerate(slots)}
        eqs = []
        for a in range(n):
            s = sign(p * par[a])
            for b in range(n):
                row: dict = {}
                # sum_c X[c,a] G[c,b]
                for c, v in g_cols[b]:
                    k = idx.get((c, a))
                    if k is not None:
                        row[k] = row.get(k, 0) + v
                # (-1)^{p p_a} sum_c G[a,c] X[c,b]
                for c, v in g_rows[a]:
                    k = idx.get((c, b))
                    if k is not None:
                        row[k] = row.get(k, 0) + s * v
                if any(row.values()):
                    eqs.append(row)
        for vec in nullspace(eqs, len(slots)):
            basis.append(SuperMatrix(par, par, {slots[k]: v for k, v in vec.items()}))
    return LieSpan(B.space, basis, reduce=False)


def spo_dimension(m2: int, n: int) -> tuple:
    """(even, odd) dimension of spo(2m|n)."""
    m = m2 // 2
    return (m * (2 * m + 1) + n * (n - 1) // 2, 2 * m * n)


def solve_in_span(basis: Sequence, constraint, parity_of=None) -> list[dict]:
    """Coefficient vectors c with constraint(sum c_i basis_i) = 0.

    ``constraint`` maps one basis element to a sparse dict of values and must
    be linear.  Returns sparse coefficient dicts (a nullspace basis).
    """
    rows = defaultdict(dict)
    for i, z in enumerate(basis):
        for k, v in constraint(z).items():
            if v:
                rows[k][i] = v
    return nullspace(list(rows.values()), len(basis))


def combine(basis: Sequence[SuperMatrix], coeffs: dict) -> SuperMatrix:
    out: dict = {}
    for i, c in coeffs.items():
        for k, v in basis[i].entries.items():
            out[k] = out.get(k, 0) + c * v
    b0 = basis[0]
    return SuperMatrix(b0.rows, b0.cols, out)


def supercommutant(g: LieSpan, ambient: LieSpan, check: bool = True) -> LieSpan:
    """{X in ambient : [X, Y] = 0 for every basis element Y of g}."""
    if check and not ambient.contains_span(g):
        raise ValueError("g is not contained in the ambient span")
    out = []
    for p in (0, 1):
        zs = ambient.by_parity(p)
        if not zs:
            continue
        rows = defaultdict(dict)
        for i, z in enumerate(zs):
            for j, y in enumerate(g.basis):
                for (r, c), v in superbracket(z, y).entries.items():
                    rows[(j, r, c)][i] = v
        for vec in nullspace(list(rows.values()), len(zs)):
            out.append(combine(zs, vec))
    return LieSpan(ambient.ambient, out)


# ---------------------------------------------------------------------------
# modules over division superalgebras and realification


@dataclass(frozen=True)
class DModule:
    """A free module D^{n|m} with homogeneous generators.

    ``side`` is ``"right"`` (maps act by left matrix multiplication on D-column
    vectors, no signs) or ``"left"`` (maps satisfy X(d u) = (-1)^{|d||X|} d X(u)).
    """

    algebra: DivisionSuperalgebra
    gen_parities: tuple
    side: str = "right"

    @property
    def rank(self) -> int:
        return len(self.gen_parities)

    @cached_property
    def real_basis(self) -> tuple:
        """Pairs (generator, algebra index) in the canonical base-field order."""
        A = self.algebra
        items = [(g, b) for g in range(self.rank) for b in range(A.dim)]
        par = {it: (self.gen_parities[it[0]] + A.parities[it[1]]) % 2 for it in items}
        return tuple([it for it in items if par[it] == 0] + [it for it in items if par[it] == 1])

    @cached_property
    def index(self) -> dict:
        return {it: k for k, it in enumerate(self.real_basis)}

    @cached_property
    def parities(self) -> tuple:
        A = self.algebra
        return tuple((self.gen_parities[g] + A.parities[b]) % 2 for g, b in self.real_basis)

    @property
    def space(self) -> SuperSpace:
        return SuperSpace(self.parities, self.algebra.base_field)

    def elementary(self, r: int, c: int, b: int) -> "DSuperMatrix":
        return DSuperMatrix(self, {(r, c): self.algebra.basis(b)})

    def gl_basis(self) -> list["DSuperMatrix"]:
        n, A = self.rank, self.algebra
        return [self.elementary(r, c, b) for r in range(n) for c in range(n) for b in range(A.dim)]

    def vector(self, coords: dict) -> list[DElement]:
        """D-coordinates of a realified vector, as a list indexed by generator."""
        A = self.algebra
        out = [[mpq(0)] * A.dim for _ in range(self.rank)]
        for k, v in coords.items():
            g, b = self.real_basis[k]
            out[g][b] = out[g][b] + v
        return [A.element(c) for c in out]


def realify_module(shape, algebra: DivisionSuperalgebra, side: str = "right") -> SuperSpace:
    """Underlying base-field space of D^{n|m} (``shape`` is n or (n, m))."""
    n, m = (shape, 0) if isinstance(shape, int) else shape
    return DModule(algebra, (0,) * n + (1,) * m, side).space


class DSuperMatrix:
    """A D-linear endomorphism of a free module, stored by D-valued entries.

    Right modules: X(w_c) = sum_r w_r M[r, c].
    Left modules:  X(u_c) = sum_r M[r, c] u_r.
    """

    __slots__ = ("module", "entries")

    def __init__(self, module: DModule, entries: dict):
        self.module = module
        self.entries = {k: v for k, v in entries.items() if v}

    @property
    def algebra(self):
        return self.module.algebra

    @property
    def parity(self):
        gp = self.module.gen_parities
        ps = set()
        for (r, c), d in self.entries.items():
            pd = d.parity
            if pd is None:
                return None
            ps.add((gp[r] + gp[c] + pd) % 2)
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def __add__(self, o):
        ent = dict(self.entries)
        for k, v in o.entries.items():
            ent[k] = ent[k] + v if k in ent else v
        return DSuperMatrix(self.module, ent)

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return DSuperMatrix(self.module, {k: -v for k, v in self.entries.items()})

    def scale(self, s):
        return DSuperMatrix(self.module, {k: v * s for k, v in self.entries.items()})

    def __matmul__(self, o: "DSuperMatrix") -> "DSuperMatrix":
        """Composition self o o."""
        out: dict = {}
        if self.module.side == "right":
            for (r, k), a in self.entries.items():
                for (k2, c), b in o.entries.items():
                    if k2 == k:
                        out[(r, c)] = out[(r, c)] + a * b if (r, c) in out else a * b
        else:
            px = self.parity
            if px is None:
                raise ValueError("left-module composition needs a homogeneous left factor")
            # (X o Y)(u_c) = sum_r (-1)^{|Y_rc||X|} Y_rc X(u_r)
            for (r, c), y in o.entries.items():
                s = -1 if (px and y.parity) else 1
                for (t, r2), x in self.entries.items():
                    if r2 == r:
                        val = (y * x) * s
                        out[(t, c)] = out[(t, c)] + val if (t, c) in out else val
        return DSuperMatrix(self.module, out)

    def __eq__(self, o):
        if not isinstance(o, DSuperMatrix):
            return NotImplemented
        return self.module == o.module and self.entries == o.entries

    def __repr__(self):
        return f"DSuperMatrix({self.module.rank}x{self.module.rank} over {self.algebra.name}, parity={self.parity})"

    def realify(self) -> SuperMatrix:
        return realify(self)


def realify(M: DSuperMatrix) -> SuperMatrix:
    """Base-field matrix of M on the realified module basis {w_a d_b}."""
    mod = M.module
    A = mod.algebra
    idx = mod.index
    par = mod.parities
    ent: dict = {}
    px = M.parity if mod.side == "left" else 0
    if px is None:
        raise ValueError("left-module realification needs a homogeneous map")
    for (r, c), d in M.entries.items():
        for b in range(A.dim):
            if mod.side == "right":
                prod = A.mul_coords(d.coords, A.basis(b).coords)
                s = 1
            else:
                prod = A.mul_coords(A.basis(b).coords, d.coords)
                s = -1 if (px and A.parities[b]) else 1
            col = idx[(c, b)]
            for b2, v in enumerate(prod):
                if v:
                    key = (idx[(r, b2)], col)
                    ent[key] = ent.get(key, 0) + s * v
    return SuperMatrix(par, par, ent)


def gl_span(module: DModule) -> LieSpan:
    """gl_D of a free module, realified."""
    return LieSpan(module.space, [realify(m) for m in module.gl_basis()])


def complex_to_real(X: SuperMatrix) -> SuperMatrix:
    """Realify a matrix over Q(i) into one over Q (basis v, v*i per vector)."""
    C = make_algebra("Cl0C")
    n = len(X.cols)
    mod = DModule(C, X.cols)
    if X.rows != X.cols:
        raise ValueError("complex_to_real expects an endomorphism")
    ent = {}
    for (r, c), z in X.entries.items():
        re, im = (z.re, z.im) if isinstance(z, GaussianRational) else (z, 0)
        ent[(r, c)] = C.element([re, im])
    return realify(DSuperMatrix(mod, ent))


def complex_span_to_real(span: LieSpan) -> LieSpan:
    """Real form of a complex Lie superalgebra viewed as a real one."""
    out = []
    for m in span.basis:
        out.append(complex_to_real(m))
        out.append(complex_to_real(m.scale(gauss(0, 1))))
    return LieSpan(DModule(make_algebra("Cl0C"), span.ambient.parities).space, out)
