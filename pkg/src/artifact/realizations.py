"""Explicit matrix realizations of the Lie superalgebras occurring in dual pairs.

Every family is cut out of Mat(n|m, D0) (D0 = R, C or H) by its block
equations and solved as a nullspace; nothing is a hand-written basis list.
Matrices act on D0-column vectors of a right D0-module, so realification goes
through :func:`artifact.graded_linear.realify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from gmpy2 import mpq

from ._linalg import nullspace
from .forms_involutions import g_of_form, standard_form
from .graded_linear import (
    DModule,
    DSuperMatrix,
    LieSpan,
    SuperMatrix,
    gl_span,
    realify,
    supercommutant,
)
from .scalars_division import QQ, QQI, DElement, DivisionSuperalgebra, GaussianRational, conj, make_algebra

FAMILIES = (
    "gl", "q", "qbar", "p", "pbar", "p-star", "osp", "spo",
    "osp-c", "spo-c", "u", "spo-star", "osp-star", "q-pq",
)

_EVEN_ALGEBRA = {"R": "Cl0R", "C": "Cl0C", "H": "Cl4R"}
# division superalgebras D = D0 + D0 eps behind the queer-type families
_QUEER = {"R": "Cl7R", "C": "Cl1C", "H": "Cl3R"}


@dataclass(frozen=True)
class FamilyTag:
    name: str
    params: tuple
    division: str = "R"  # D0 for gl, q, p
    field: str = "R"  # "C" emits complex-linear families over Q(i)

    def __post_init__(self):
        if self.name not in FAMILIES:
            raise ValueError(f"unknown family {self.name!r}")
        if self.division not in _EVEN_ALGEBRA:
            raise ValueError("division must be R, C or H")
        if self.field not in ("R", "C"):
            raise ValueError("field must be R or C")

    def label(self) -> str:
        ps = ",".join(map(str, self.params))
        extra = f",{self.division}" if self.name in ("gl", "q", "p") else ""
        return f"{self.name}({ps}{extra})" + ("_C" if self.field == "C" else "")


# ---------------------------------------------------------------------------
# small block-matrix toolkit over D0; a matrix is (rows, cols, {(r, c): DElement})


class _M:
    __slots__ = ("n", "m", "e", "A")

    def __init__(self, A, n, m, e):
        self.A, self.n, self.m = A, n, m
        self.e = {k: v for k, v in e.items() if v}

    def __add__(self, o):
        e = dict(self.e)
        for k, v in o.e.items():
            e[k] = e[k] + v if k in e else v
        return _M(self.A, self.n, self.m, e)

    def __neg__(self):
        return _M(self.A, self.n, self.m, {k: -v for k, v in self.e.items()})

    def __sub__(self, o):
        return self + (-o)

    def __matmul__(self, o):
        out: dict = {}
        for (r, k), a in self.e.items():
            for (k2, c), b in o.e.items():
                if k == k2:
                    out[(r, c)] = out[(r, c)] + a * b if (r, c) in out else a * b
        return _M(self.A, self.n, o.m, out)

    @property
    def T(self):
        return _M(self.A, self.m, self.n, {(c, r): v for (r, c), v in self.e.items()})

    @property
    def bar(self):
        return _M(self.A, self.n, self.m, {k: _conj(v) for k, v in self.e.items()})

    @property
    def H(self):
        return self.T.bar


def _conj(d: DElement) -> DElement:
    """Conjugation of C or H (identity on R)."""
    A = d.algebra
    if A.base_field == QQI:
        return A.element([conj(c) for c in d.coords])
    return A.element([c if k == A.unit_index else -c for k, c in enumerate(d.coords)])


def _block(X: _M, r0, r1, c0, c1) -> _M:
    return _M(X.A, r1 - r0, c1 - c0,
              {(r - r0, c - c0): v for (r, c), v in X.e.items() if r0 <= r < r1 and c0 <= c < c1})


def _blocks(X: _M, n: int):
    N, M = X.n, X.m
    return (_block(X, 0, n, 0, n), _block(X, 0, n, n, M), _block(X, n, N, 0, n), _block(X, n, N, n, M))


def _diag(A, signs, unit=None) -> _M:
    u = unit if unit is not None else A.one()
    return _M(A, len(signs), len(signs), {(i, i): u * s for i, s in enumerate(signs)})


def _J(A, m) -> _M:
    if m % 2:
        raise ValueError("symplectic blocks need even size")
    h = m // 2
    e = {}
    for i in range(h):
        e[(i, h + i)] = A.one()
        e[(h + i, i)] = -A.one()
    return _M(A, m, m, e)


def _ipq(A, p, q, unit=None) -> _M:
    return _diag(A, [1] * p + [-1] * q, unit)


def _pi(X: _M, n: int) -> _M:
    a, b, c, d = _blocks(X, n)
    return _assemble(X.A, d, c, b, a)


def _assemble(A, a, b, c, d) -> _M:
    n, m = a.n, d.n
    e = dict(a.e)
    e.update({(r, c_ + n): v for (r, c_), v in b.e.items()})
    e.update({(r + n, c_): v for (r, c_), v in c.e.items()})
    e.update({(r + n, c_ + n): v for (r, c_), v in d.e.items()})
    return _M(A, n + m, n + m, e)


def _neg_st(X: _M, n: int) -> _M:
    a, b, c, d = _blocks(X, n)
    return _assemble(X.A, -a.T, c.T, -b.T, -d.T)


# ---------------------------------------------------------------------------
# constraint solving


def _solve(D0: DivisionSuperalgebra, gens: tuple, constraint: Callable[[_M, int], list]) -> list[DSuperMatrix]:
    """Homogeneous D0-matrix basis of {X : every residual in constraint(X) vanishes}."""
    mod = DModule(D0, gens)
    N = len(gens)
    out = []
    for p in (0, 1):
        unknowns = [(r, c, b) for r in range(N) for c in range(N) for b in range(D0.dim)
                    if (gens[r] + gens[c] + D0.parities[b]) % 2 == p]
        cols = []
        for (r, c, b) in unknowns:
            X = _M(D0, N, N, {(r, c): D0.basis(b)})
            res: dict = {}
            for j, R in enumerate(constraint(X, p)):
                for (i, k), d in R.e.items():
                    for t, v in enumerate(d.coords):
                        if v:
                            res[(j, i, k, t)] = v
            cols.append(res)
        rows: dict = {}
        for u, col in enumerate(cols):
            for key, v in col.items():
                rows.setdefault(key, {})[u] = v
        for vec in nullspace(list(rows.values()), len(unknowns)):
            ent: dict = {}
            for u, v in vec.items():
                r, c, b = unknowns[u]
                term = D0.basis(b) * v
                ent[(r, c)] = ent[(r, c)] + term if (r, c) in ent else term
            out.append(DSuperMatrix(mod, ent))
    return out


def _even_form_family(D0, n, m, G0: _M, G1: _M, hermitian: bool):
    """X with X1'G0 + G0X1 = 0, X4'G1 + G1X4 = 0, X3'G1 + G0X2 = 0 (' = t or *)."""

    def cons(X, p):
        x1, x2, x3, x4 = _blocks(X, n)
        t = (lambda Y: Y.H) if hermitian else (lambda Y: Y.T)
        return [t(x1) @ G0 + G0 @ x1, t(x4) @ G1 + G1 @ x4, t(x3) @ G1 + G0 @ x2]

    return _solve(D0, (0,) * n + (1,) * m, cons)


def _odd_form_family(D0, n, hermitian: bool):
    """X = (X1 X2; X3 -X1'), X2 = X2', X3 = -X3' (' = t or *)."""

    def cons(X, p):
        x1, x2, x3, x4 = _blocks(X, n)
        t = (lambda Y: Y.H) if hermitian else (lambda Y: Y.T)
        return [x4 + t(x1), x2 - t(x2), x3 + t(x3)]

    return _solve(D0, (0,) * n + (1,) * n, cons)


def _even(tag: FamilyTag, name: str | None = None):
    fld = QQI if tag.field == "C" else QQ
    return make_algebra(name or _EVEN_ALGEBRA[tag.division], fld)


def _need(cond, msg):
    if not cond:
        raise ValueError(msg)


def realize_d(tag: FamilyTag) -> list[DSuperMatrix]:
    """D-matrix basis of the family (before realification)."""
    nm, ps = tag.name, tuple(tag.params)
    _need(all(isinstance(x, int) and x >= 0 for x in ps), "parameters must be non-negative integers")
    if tag.field == "C":
        _need(nm in ("gl", "q", "p", "osp-c", "spo-c") and (nm in ("osp-c", "spo-c") or tag.division == "C"),
              f"{nm} is not a complex-linear family over the division algebra {tag.division}")
    if nm == "gl":
        _need(len(ps) == 2 and sum(ps) > 0, "gl needs (n, m)")
        D0 = _even(tag)
        return _solve(D0, (0,) * ps[0] + (1,) * ps[1], lambda X, p: [])
    if nm == "q":
        _need(len(ps) == 1 and ps[0] > 0, "q needs n >= 1")
        n = ps[0]
        return _solve(_even(tag), (0,) * n + (1,) * n, lambda X, p: [_pi(X, n) - X])
    if nm == "qbar":
        _need(len(ps) == 1 and ps[0] > 0, "qbar needs n >= 1")
        n = ps[0]
        return _solve(make_algebra("Cl0C"), (0,) * n + (1,) * n, lambda X, p: [_pi(X, n).bar - X])
    if nm in ("p", "pbar", "p-star"):
        _need(len(ps) == 1 and ps[0] > 0, f"{nm} needs n >= 1")
        if nm == "p":
            _need(tag.division in ("R", "C"), "p(n, D) needs D = R or C")
            return _odd_form_family(_even(tag), ps[0], hermitian=False)
        D0 = make_algebra("Cl0C" if nm == "pbar" else "Cl4R")
        return _odd_form_family(D0, ps[0], hermitian=True)
    if nm == "osp":
        _need(len(ps) == 3 and ps[2] % 2 == 0 and sum(ps) > 0, "osp needs (p, q, m) with m even")
        D0 = make_algebra("Cl0R")
        p, q, m = ps
        return _even_form_family(D0, p + q, m, _ipq(D0, p, q), _J(D0, m), False)
    if nm == "spo":
        _need(len(ps) == 3 and ps[0] % 2 == 0 and sum(ps) > 0, "spo needs (n, p, q) with n even")
        D0 = make_algebra("Cl0R")
        n, p, q = ps
        return _even_form_family(D0, n, p + q, _J(D0, n), _ipq(D0, p, q), False)
    if nm in ("osp-c", "spo-c"):
        _need(len(ps) == 2 and sum(ps) > 0, f"{nm} needs (n, m)")
        D0 = _even(tag, "Cl0C")
        n, m = ps
        if nm == "osp-c":
            _need(m % 2 == 0, "osp(n|m, C) needs m even")
            return _even_form_family(D0, n, m, _ipq(D0, n, 0), _J(D0, m), False)
        _need(n % 2 == 0, "spo(n|m, C) needs n even")
        return _even_form_family(D0, n, m, _J(D0, n), _ipq(D0, m, 0), False)
    if nm == "u":
        _need(len(ps) == 4 and sum(ps) > 0, "u needs (p, q, r, s)")
        D0 = make_algebra("Cl0C")
        p, q, r, s = ps
        return _even_form_family(D0, p + q, r + s, _ipq(D0, p, q), _ipq(D0, r, s, D0["i"]), True)
    if nm == "spo-star":
        _need(len(ps) == 3 and sum(ps) > 0, "spo-star needs (p, q, m)")
        D0 = make_algebra("Cl4R")
        p, q, m = ps
        n = p + q
        I, i1 = _ipq(D0, p, q), _diag(D0, [1] * m, D0["i"])

        def cons(X, par):
            x1, x2, x3, x4 = _blocks(X, n)
            return [x1.H @ I + I @ x1, x4 - i1 @ x4.H @ i1, x2.H @ I - i1 @ x3]

        return _solve(D0, (0,) * n + (1,) * m, cons)
    if nm == "osp-star":
        _need(len(ps) == 3 and sum(ps) > 0, "osp-star needs (n, p, q)")
        D0 = make_algebra("Cl4R")
        n, p, q = ps
        return _even_form_family(D0, n, p + q, _diag(D0, [1] * n, D0["i"]), _ipq(D0, p, q), True)
    if nm == "q-pq":
        _need(len(ps) == 2 and sum(ps) > 0, "q-pq needs (p, q)")
        return _q_pq(*ps)
    raise ValueError(nm)  # pragma: no cover


def _q_pq(p: int, q: int, twist: int = -1) -> list[DSuperMatrix]:
    """X + Y eps over Cl1C with X* = -I X I and Y* = twist * i I Y I.

    ``twist = -1`` is the printed relation; it is the symmetry algebra of the
    diagonal form built with iota2.  With iota1 the sign of i flips (twist = +1).
    """
    D = make_algebra("Cl1C")
    C = make_algebra("Cl0C")
    n = p + q
    I = _ipq(C, p, q)
    iI = _ipq(C, p, q, C["i"] * (-twist))
    one, i_, e, ie = (D.symbols.index(s) for s in ("1", "i", "e", "ie"))

    def split(Z: _M):
        X = {k: C.element([d.coords[one], d.coords[i_]]) for k, d in Z.e.items()}
        Y = {k: C.element([d.coords[e], d.coords[ie]]) for k, d in Z.e.items()}
        return _M(C, n, n, X), _M(C, n, n, Y)

    def cons(Z, par):
        X, Y = split(Z)
        return [X.H + I @ X @ I, Y.H + iI @ Y @ I]

    return _solve(D, (0,) * n, cons)


def realize(tag: FamilyTag) -> LieSpan:
    """The family as a base-field LieSpan (over Q, or over Q(i) when field is C)."""
    mats = realize_d(tag)
    if not mats:
        raise ValueError(f"{tag.label()} is zero")
    mod = mats[0].module
    return LieSpan(mod.space, [realify(m) for m in mats])


# ---------------------------------------------------------------------------
# embeddings


def _odd_split(d: DElement, D: DivisionSuperalgebra, D0: DivisionSuperalgebra):
    """d = a + b*eps with a, b in D0."""
    n0 = D0.dim
    return D0.element(d.coords[:n0]), D0.element(d.coords[n0:])


def embed_map(kind: str, size: int) -> Callable:
    """Matrix-valued maps of the explicit realizations.

    * ``xi``: t x t matrices over C (Q(i) scalars) to 2t x 2t over Q,
      A + iB -> (A B; -B A).
    * ``xi'``: t x t matrices over H (``Cl4R`` elements) to 2t x 2t over Q(i),
      (A + iB) + j(C - iD) -> (A+iB  -C+iD; C+iD  A-iB).
    * ``Psi``, ``Psi'``, ``Psi-check``, ``Psi-check'``: n x n matrices over
      D = D0 + D0 eps to Mat(n|n, D0) as grids of D0 elements,
      A + B eps -> (A B; B A), (A B; -B A), (A B; B- A-), (A B; -B- A-).

    Inputs and outputs are lists of lists.
    """
    t = size
    if t < 1:
        raise ValueError("size must be positive")
    if kind == "xi":
        def xi(M):
            out = [[mpq(0)] * (2 * t) for _ in range(2 * t)]
            for r in range(t):
                for c in range(t):
                    z = M[r][c]
                    a, b = (z.re, z.im) if isinstance(z, GaussianRational) else (mpq(z), mpq(0))
                    out[r][c], out[r][t + c] = a, b
                    out[t + r][c], out[t + r][t + c] = -b, a
            return out
        return xi
    if kind == "xi'":
        def xi_p(M):
            zero = GaussianRational(0, 0)
            out = [[zero] * (2 * t) for _ in range(2 * t)]
            for r in range(t):
                for c in range(t):
                    a, b, cc, d = M[r][c].coords  # a + ib + jc + ij d
                    out[r][c] = GaussianRational(a, b)
                    out[r][t + c] = GaussianRational(-cc, d)
                    out[t + r][c] = GaussianRational(cc, d)
                    out[t + r][t + c] = GaussianRational(a, -b)
            return out
        return xi_p
    signs = {"Psi": (1, False), "Psi'": (-1, False), "Psi-check": (1, True), "Psi-check'": (-1, True)}
    if kind not in signs:
        raise ValueError(f"unknown embedding {kind!r}")
    s, bar = signs[kind]

    def psi(M):
        D = M[0][0].algebra
        D0 = make_algebra(even_part_name(D), D.base_field)
        out = [[D0.zero()] * (2 * t) for _ in range(2 * t)]
        for r in range(t):
            for c in range(t):
                a, b = _odd_split(M[r][c], D, D0)
                out[r][c], out[r][t + c] = a, b
                lo_b, lo_a = (_conj(b), _conj(a)) if bar else (b, a)
                out[t + r][c] = lo_b * s
                out[t + r][t + c] = lo_a
        return out
    return psi


def even_part_name(D: DivisionSuperalgebra) -> str:
    n0 = len(D.even_indices)
    return {1: "Cl0R", 2: "Cl0C", 4: "Cl4R"}[n0] if D.base_field == QQ else "Cl0C"


def grid_to_dmatrix(grid, gens) -> DSuperMatrix:
    A = grid[0][0].algebra
    mod = DModule(A, tuple(gens))
    return DSuperMatrix(mod, {(r, c): v for r, row in enumerate(grid) for c, v in enumerate(row) if v})


def pi_fixed(grid) -> bool:
    n = len(grid) // 2
    return all(grid[r][c] == grid[(r + n) % (2 * n)][(c + n) % (2 * n)] for r in range(2 * n) for c in range(2 * n))


# ---------------------------------------------------------------------------
# cross-checks


def identification_signs(D: DivisionSuperalgebra, n: int) -> list[int]:
    """Diagonal change of basis from D^n to D0^{n|n}.

    The odd D0-generators are f_c = w_c eps^-1, so w_c (d eps) = f_c (eps d eps)
    and eps d eps = +-d.
    """
    mod = DModule(D, (0,) * n)
    eps = D.symbols.index("e")
    out = []
    for g, b in mod.real_basis:
        if D.parities[b] == 0:
            out.append(1)
            continue
        d = b - len(D.even_indices)
        x = D.basis(eps) * D.basis(d) * D.basis(eps)
        out.append(int(x.coords[d]))
    return out


def _sign_conjugate(span: LieSpan, signs) -> LieSpan:
    mats = [SuperMatrix(X.rows, X.cols, {(r, c): v * signs[r] * signs[c] for (r, c), v in X.entries.items()})
            for X in span.basis]
    return LieSpan(span.ambient, mats)


def reference(tag: FamilyTag) -> LieSpan:
    """The same Lie superalgebra obtained from gl_D or g(W, gamma)."""
    nm, ps = tag.name, tuple(tag.params)
    fld = QQI if tag.field == "C" else QQ
    if nm == "gl":
        return gl_span(DModule(make_algebra(_EVEN_ALGEBRA[tag.division], fld), (0,) * ps[0] + (1,) * ps[1]))
    if nm in ("q", "qbar"):
        D = make_algebra("Cl6R" if nm == "qbar" else _QUEER[tag.division], fld)
        n = ps[0]
        return _sign_conjugate(gl_span(DModule(D, (0,) * n)), identification_signs(D, n))
    spec = {
        "p": (_EVEN_ALGEBRA[tag.division], "triv", 1, 1, lambda: ps[0]),
        "pbar": ("Cl0C", "conj", 1, 1, lambda: ps[0]),
        "p-star": ("Cl4R", "conj", 1, 1, lambda: ps[0]),
        "osp": ("Cl0R", "triv", 1, 0, lambda: ps),
        "spo": ("Cl0R", "triv", -1, 0, lambda: (ps[0], 0, ps[1], ps[2])),
        "osp-c": ("Cl0C", "triv", 1, 0, lambda: (ps[0], 0, ps[1], 0)),
        "spo-c": ("Cl0C", "triv", -1, 0, lambda: (ps[0], 0, ps[1], 0)),
        "u": ("Cl0C", "conj", 1, 0, lambda: ps),
        "spo-star": ("Cl4R", "conj", 1, 0, lambda: ps),
        "osp-star": ("Cl4R", "conj", -1, 0, lambda: (ps[0], 0, ps[1], ps[2])),
        "q-pq": ("Cl1C", "iota2", 1, 0, lambda: ps),
    }[nm]
    A = make_algebra(spec[0], fld)
    return g_of_form(standard_form(A, spec[1], spec[2], spec[3], spec[4]()))


def crosscheck(tag: FamilyTag) -> dict:
    """Compare realize(tag) with the gl_D / g(W, gamma) construction."""
    got = realize(tag)
    ref = reference(tag)
    report = {
        "family": tag.label(),
        "graded_dim": list(got.graded_dim),
        "reference_graded_dim": list(ref.graded_dim),
        "closed": got.is_closed(),
        "equal": got == ref,
    }
    if tag.name == "q":
        report["omega2_commutant_equal"] = omega2_commutant(tag) == got
    return report


def omega2_commutant(tag: FamilyTag) -> LieSpan:
    """Supercommutant of the odd structure map Omega_2 = (0 I; -I 0) inside gl(n|n, D0)."""
    n = tag.params[0]
    D0 = _even(tag)
    mod = DModule(D0, (0,) * n + (1,) * n)
    om = DSuperMatrix(mod, {**{(i, n + i): D0.one() for i in range(n)}, **{(n + i, i): -D0.one() for i in range(n)}})
    amb = gl_span(mod)
    # D0 acts on the right, so Omega_2 commutes with the D0-structure only as a D0-linear map
    g = LieSpan(mod.space, [realify(om)])
    return supercommutant(g, amb, check=False)


MINIMAL_TAGS = (
    FamilyTag("gl", (1, 1), "R"),
    FamilyTag("gl", (1, 1), "C"),
    FamilyTag("gl", (1, 1), "H"),
    FamilyTag("gl", (1, 1), "C", "C"),
    FamilyTag("q", (1,), "R"),
    FamilyTag("q", (2,), "R"),
    FamilyTag("q", (1,), "C"),
    FamilyTag("q", (1,), "H"),
    FamilyTag("q", (1,), "C", "C"),
    FamilyTag("qbar", (1,)),
    FamilyTag("p", (1,), "R"),
    FamilyTag("p", (2,), "R"),
    FamilyTag("p", (1,), "C"),
    FamilyTag("p", (1,), "C", "C"),
    FamilyTag("pbar", (1,)),
    FamilyTag("p-star", (1,)),
    FamilyTag("osp", (1, 1, 2)),
    FamilyTag("spo", (2, 1, 1)),
    FamilyTag("osp-c", (1, 2), field="C"),
    FamilyTag("spo-c", (2, 1), field="C"),
    FamilyTag("osp-c", (1, 2), "C"),
    FamilyTag("u", (1, 0, 1, 0)),
    FamilyTag("u", (1, 1, 1, 0)),
    FamilyTag("spo-star", (1, 0, 1)),
    FamilyTag("osp-star", (1, 1, 0)),
    FamilyTag("q-pq", (1, 0)),
    FamilyTag("q-pq", (1, 1)),
)
