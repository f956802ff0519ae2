"""Exact scalars and the ten real/complex division superalgebras.

The real field is modelled by Q (``gmpy2.mpq``) and the complex field by the
Gaussian rationals Q(i).  Every division superalgebra used here has a basis
in which products of basis elements are signed basis elements, so the
multiplication table is stored as ``(sign, index)`` pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cache, cached_property
from itertools import permutations, product
from typing import Sequence

from gmpy2 import mpq

Rational = mpq
QQ = "Q"
QQI = "Q(i)"


def rational(x, den: int = 1) -> mpq:
    if isinstance(x, str):
        return mpq(x)
    return mpq(x, den) if den != 1 else mpq(x)


class GaussianRational:
    """An element re + im*i of Q(i).

    Values with zero imaginary part are normalised back to plain rationals by
    :func:`gauss`, so the rational fast path is used whenever possible.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = mpq(re)
        self.im = mpq(im)

    # -- arithmetic -----------------------------------------------------
    @staticmethod
    def _parts(x):
        if isinstance(x, GaussianRational):
            return x.re, x.im
        return mpq(x), mpq(0)

    def __add__(self, o):
        a, b = self._parts(o)
        return gauss(self.re + a, self.im + b)

    __radd__ = __add__

    def __sub__(self, o):
        a, b = self._parts(o)
        return gauss(self.re - a, self.im - b)

    def __rsub__(self, o):
        a, b = self._parts(o)
        return gauss(a - self.re, b - self.im)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, o):
        a, b = self._parts(o)
        return gauss(self.re * a - self.im * b, self.re * b + self.im * a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        a, b = self._parts(o)
        n = a * a + b * b
        if not n:
            raise ZeroDivisionError("division by zero in Q(i)")
        return gauss((self.re * a + self.im * b) / n, (self.im * a - self.re * b) / n)

    def __rtruediv__(self, o):
        a, b = self._parts(o)
        return GaussianRational(a, b) / self

    def __eq__(self, o):
        try:
            a, b = self._parts(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == a and self.im == b

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return gauss(self.re, -self.im)

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"

    def __str__(self):
        return f"{self.re}+{self.im}i"


I = GaussianRational(0, 1)


def gauss(re, im=0):
    """Build an element of Q(i), collapsing to a rational when im == 0."""
    if not im:
        return mpq(re)
    return GaussianRational(re, im)


def conj(x):
    if isinstance(x, GaussianRational):
        return x.conjugate()
    return x


def scalar_to_json(x):
    if isinstance(x, GaussianRational):
        return {"re": str(x.re), "im": str(x.im)}
    return str(mpq(x))


def scalar_from_json(obj):
    if isinstance(obj, dict):
        return gauss(mpq(obj["re"]), mpq(obj["im"]))
    return mpq(obj)


# ---------------------------------------------------------------------------
# division superalgebras


ALGEBRA_NAMES = ("Cl0R", "Cl1R", "Cl2R", "Cl3R", "Cl4R", "Cl5R", "Cl6R", "Cl7R", "Cl0C", "Cl1C")

# even part name, epsilon^2, does epsilon conjugate the even part
_RECIPES = {
    "Cl0R": ("R", None, False),
    "Cl1R": ("R", -1, False),
    "Cl2R": ("C", -1, True),
    "Cl3R": ("H", 1, False),
    "Cl4R": ("H", None, False),
    "Cl5R": ("H", -1, False),
    "Cl6R": ("C", 1, True),
    "Cl7R": ("R", 1, False),
    "Cl0C": ("C", None, False),
    "Cl1C": ("C", 1, False),
}

# signed multiplication tables of R, C and H on the bases {1}, {1,i}, {1,i,j,ij}
_EVEN = {
    "R": (["1"], [[(1, 0)]]),
    "C": (["1", "i"], [[(1, 0), (1, 1)], [(1, 1), (-1, 0)]]),
    "H": (
        ["1", "i", "j", "k"],
        [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ],
    ),
}


@dataclass(frozen=True, eq=False)
class DivisionSuperalgebra:
    """Structure-constant superalgebra with a signed multiplication table."""

    name: str
    base_field: str
    symbols: tuple
    parities: tuple
    table: tuple  # table[a][b] = (sign, index) with e_a e_b = sign * e_index
    unit_index: int = 0

    @property
    def dim(self) -> int:
        return len(self.symbols)

    @property
    def real_dim(self) -> int:
        return self.dim * (2 if self.base_field == QQI else 1)

    @cached_property
    def even_indices(self) -> tuple:
        return tuple(i for i, p in enumerate(self.parities) if p == 0)

    @cached_property
    def odd_indices(self) -> tuple:
        return tuple(i for i, p in enumerate(self.parities) if p == 1)

    def basis(self, i: int) -> "DElement":
        return DElement(self, tuple(mpq(1) if k == i else mpq(0) for k in range(self.dim)))

    def one(self) -> "DElement":
        return self.basis(self.unit_index)

    def zero(self) -> "DElement":
        return DElement(self, (mpq(0),) * self.dim)

    def element(self, coords: Sequence) -> "DElement":
        if len(coords) != self.dim:
            raise ValueError("coordinate vector has wrong length")
        return DElement(self, tuple(gauss_or_q(c) for c in coords))

    def __getitem__(self, symbol: str) -> "DElement":
        return self.basis(self.symbols.index(symbol))

    def mul_coords(self, x: Sequence, y: Sequence) -> tuple:
        out = [mpq(0)] * self.dim
        for a, xa in enumerate(x):
            if not xa:
                continue
            row = self.table[a]
            for b, yb in enumerate(y):
                if yb:
                    s, c = row[b]
                    out[c] = out[c] + s * xa * yb
        return tuple(out)

    def structure_constants(self) -> list:
        """Dense table ``t[a][b][c]`` of coefficients of e_c in e_a e_b."""
        n = self.dim
        out = []
        for a in range(n):
            row = []
            for b in range(n):
                s, c = self.table[a][b]
                row.append([s if k == c else 0 for k in range(n)])
            out.append(row)
        return out

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "base_field": self.base_field,
            "basis": [{"symbol": s, "parity": p} for s, p in zip(self.symbols, self.parities)],
            "table": [[[str(v) for v in cell] for cell in row] for row in self.structure_constants()],
        }

    def __repr__(self):
        return f"DivisionSuperalgebra({self.name!r}, {self.base_field})"


def gauss_or_q(c):
    if isinstance(c, GaussianRational):
        return gauss(c.re, c.im)
    if isinstance(c, complex):
        return gauss(mpq(c.real), mpq(c.imag))
    return mpq(c)


def make_algebra(name: str, field: str = QQ) -> DivisionSuperalgebra:
    """One of the ten division superalgebras.

    Over ``Q`` all ten are available (real forms).  Over ``Q(i)`` only the
    complex ones make sense: ``Cl0C`` is then C itself and ``Cl1C`` is
    C + C*eps with eps^2 = 1.  Instances are shared per (name, field), so
    elements built in different places can be multiplied together.
    """
    return _make_algebra(name, field)


@cache
def _make_algebra(name: str, field: str) -> DivisionSuperalgebra:
    if name not in _RECIPES:
        raise ValueError(f"unknown division superalgebra {name!r}")
    even, eps2, twist = _RECIPES[name]
    if field == QQI:
        if name not in ("Cl0C", "Cl1C"):
            raise ValueError(f"{name} is a real algebra; only Cl0C and Cl1C exist over Q(i)")
        even = "R"
    elif field != QQ:
        raise ValueError(f"unknown base field {field!r}")
    syms0, tab0 = _EVEN[even]
    n0 = len(syms0)
    if eps2 is None:
        return DivisionSuperalgebra(name, field, tuple(syms0), (0,) * n0,
                                    tuple(tuple(r) for r in tab0))

    def tau(b, p):
        # eps^p * e_b = sign * e_b' * eps^p
        if p and twist and syms0[b] == "i":
            return -1, b
        return 1, b

    symbols = tuple(syms0) + tuple(("e" if s == "1" else s + "e") for s in syms0)
    parities = (0,) * n0 + (1,) * n0
    table = [[None] * (2 * n0) for _ in range(2 * n0)]
    for p, a, q, b in product((0, 1), range(n0), (0, 1), range(n0)):
        st, b2 = tau(b, p)
        sm, c = tab0[a][b2]
        s = st * sm
        if p and q:
            s *= eps2
        table[p * n0 + a][q * n0 + b] = (s, c + ((p + q) % 2) * n0)
    return DivisionSuperalgebra(name, field, symbols, parities, tuple(tuple(r) for r in table))


@dataclass(frozen=True)
class DElement:
    algebra: DivisionSuperalgebra
    coords: tuple

    def _wrap(self, coords):
        return DElement(self.algebra, tuple(coords))

    def __add__(self, o):
        if not isinstance(o, DElement):
            o = self.algebra.one() * o
        return self._wrap(x + y for x, y in zip(self.coords, o.coords))

    __radd__ = __add__

    def __sub__(self, o):
        if not isinstance(o, DElement):
            o = self.algebra.one() * o
        return self._wrap(x - y for x, y in zip(self.coords, o.coords))

    def __neg__(self):
        return self._wrap(-x for x in self.coords)

    def __mul__(self, o):
        if isinstance(o, DElement):
            if o.algebra is not self.algebra:
                raise ValueError("elements of different algebras")
            return self._wrap(self.algebra.mul_coords(self.coords, o.coords))
        return self._wrap(x * o for x in self.coords)

    def __rmul__(self, s):
        return self._wrap(s * x for x in self.coords)

    def __eq__(self, o):
        if isinstance(o, DElement):
            return self.algebra is o.algebra and self.coords == o.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def __bool__(self):
        return any(self.coords)

    @property
    def parity(self):
        """0 or 1 for homogeneous elements (zero counts as even), else None."""
        par = {self.algebra.parities[i] for i, c in enumerate(self.coords) if c}
        if not par:
            return 0
        return par.pop() if len(par) == 1 else None

    def __repr__(self):
        terms = [f"{c}*{s}" for c, s in zip(self.coords, self.algebra.symbols) if c]
        return "DElement(" + (" + ".join(terms) or "0") + ")"


def mul(a: DElement, b: DElement) -> DElement:
    return a * b


def inv(a: DElement) -> DElement:
    """Two-sided inverse of a nonzero homogeneous element."""
    from ._linalg import solve_dense

    if not a:
        raise ZeroDivisionError("zero has no inverse")
    if a.parity is None:
        raise ValueError("inverse requested for an inhomogeneous element")
    A = a.algebra
    n = A.dim
    cols = [A.mul_coords(a.coords, A.basis(b).coords) for b in range(n)]
    mat = [[cols[b][r] for b in range(n)] for r in range(n)]
    x = solve_dense(mat, list(A.one().coords))
    if x is None:
        raise ZeroDivisionError("element is not invertible")
    return A.element(x)


def delta(a: DElement) -> DElement:
    """The parity automorphism d -> (-1)^|d| d."""
    par = a.algebra.parities
    return DElement(a.algebra, tuple(-c if par[i] else c for i, c in enumerate(a.coords)))


def re_part(a: DElement):
    """Coefficient of the unit; over Q(i) this is the whole scalar part."""
    return a.coords[a.algebra.unit_index]


def sop(A: DivisionSuperalgebra) -> DivisionSuperalgebra:
    """Super-opposite algebra: x . y = (-1)^{|x||y|} y x."""
    n = A.dim
    table = []
    for a in range(n):
        row = []
        for b in range(n):
            s, c = A.table[b][a]
            if A.parities[a] and A.parities[b]:
                s = -s
            row.append((s, c))
        table.append(tuple(row))
    name = A.name[:-4] if A.name.endswith("^sop") else A.name + "^sop"
    return DivisionSuperalgebra(name, A.base_field, A.symbols, A.parities, tuple(table), A.unit_index)


def tables_equal(A: DivisionSuperalgebra, B: DivisionSuperalgebra) -> bool:
    return A.base_field == B.base_field and A.parities == B.parities and A.table == B.table


def find_isomorphism(A: DivisionSuperalgebra, B: DivisionSuperalgebra):
    """Search signed basis bijections phi: A -> B that respect products.

    Returns ``(perm, signs)`` with phi(e_a) = signs[a] * f_{perm[a]}, or None.
    The unit is fixed and parity is preserved.
    """
    if A.dim != B.dim or A.base_field != B.base_field:
        return None
    if sorted(A.parities) != sorted(B.parities):
        return None
    n = A.dim
    order = [A.unit_index] + [i for i in range(n) if i != A.unit_index]
    perm = [None] * n
    signs = [None] * n
    used = [False] * n

    def consistent(k):
        # check all products among assigned basis elements involving order[k]
        assigned = order[: k + 1]
        new = order[k]
        for a in assigned:
            for x, y in ((a, new), (new, a)):
                s, c = A.table[x][y]
                if perm[c] is None:
                    continue
                sb, cb = B.table[perm[x]][perm[y]]
                if cb != perm[c] or signs[x] * signs[y] * sb != s * signs[c]:
                    return False
        return True

    def rec(k):
        if k == n:
            return True
        a = order[k]
        for t in range(n):
            if used[t] or B.parities[t] != A.parities[a]:
                continue
            if a == A.unit_index and t != B.unit_index:
                continue
            for s in ((1,) if a == A.unit_index else (1, -1)):
                perm[a], signs[a], used[t] = t, s, True
                if consistent(k) and rec(k + 1):
                    return True
                perm[a], signs[a], used[t] = None, None, False
        return False

    if rec(0):
        # a final full check guards the incremental pruning
        for x in range(n):
            for y in range(n):
                s, c = A.table[x][y]
                sb, cb = B.table[perm[x]][perm[y]]
                if cb != perm[c] or signs[x] * signs[y] * sb != s * signs[c]:
                    return None
        return tuple(perm), tuple(signs)
    return None


def identify(A: DivisionSuperalgebra) -> str | None:
    """Name of the standard algebra isomorphic to ``A`` via a signed bijection."""
    for name in ALGEBRA_NAMES:
        try:
            B = make_algebra(name, A.base_field)
        except ValueError:
            continue
        if find_isomorphism(A, B) is not None:
            return name
    return None


# ---------------------------------------------------------------------------
# superinvolutions


@dataclass(frozen=True)
class Superinvolution:
    algebra: DivisionSuperalgebra
    tag: str
    matrix: tuple  # matrix[r][c]: coefficient of e_r in iota(e_c)

    def __call__(self, x: DElement) -> DElement:
        n = self.algebra.dim
        out = [mpq(0)] * n
        for c, v in enumerate(x.coords):
            if v:
                for r in range(n):
                    m = self.matrix[r][c]
                    if m:
                        out[r] = out[r] + m * v
        return DElement(self.algebra, tuple(out))

    def compose_delta(self) -> "Superinvolution":
        """iota o delta, again a superinvolution."""
        par = self.algebra.parities
        mat = tuple(tuple(-v if par[c] else v for c, v in enumerate(row)) for row in self.matrix)
        tag = {"iota1": "iota2", "iota2": "iota1"}.get(self.tag, self.tag)
        return Superinvolution(self.algebra, tag, mat)

    def check(self) -> bool:
        """iota^2 = id and the signed anti-homomorphism law on basis pairs."""
        A = self.algebra
        for a in range(A.dim):
            e = A.basis(a)
            if self(self(e)) != e:
                return False
            for b in range(A.dim):
                f = A.basis(b)
                lhs = self(e * f)
                rhs = self(f) * self(e)
                if A.parities[a] and A.parities[b]:
                    rhs = -rhs
                if lhs != rhs:
                    return False
        return True


def _signed_matrix(n, images):
    mat = [[0] * n for _ in range(n)]
    for c, (s, r) in enumerate(images):
        mat[r][c] = s
    return tuple(tuple(mpq(v) for v in row) for row in mat)


def superinvolutions(A: DivisionSuperalgebra) -> list[Superinvolution]:
    """All superinvolutions in the standard list, keyed by tag."""
    base = A.name.replace("^sop", "")
    n = A.dim
    ident = Superinvolution(A, "triv", _signed_matrix(n, [(1, i) for i in range(n)]))
    if base == "Cl0R":
        return [ident]
    if base == "Cl0C":
        if A.base_field == QQI:
            return [ident]
        return [ident, Superinvolution(A, "conj", _signed_matrix(n, [(1, 0), (-1, 1)]))]
    if base == "Cl4R":
        return [Superinvolution(A, "conj", _signed_matrix(n, [(1, 0), (-1, 1), (-1, 2), (-1, 3)]))]
    if base == "Cl1C" and A.base_field == QQ:
        # basis 1, i, e, ie:  iota_k(a + b e) = conj(a) +/- i conj(b) e
        i1 = _signed_matrix(n, [(1, 0), (-1, 1), (1, 3), (1, 2)])
        i2 = _signed_matrix(n, [(1, 0), (-1, 1), (-1, 3), (-1, 2)])
        return [Superinvolution(A, "iota1", i1), Superinvolution(A, "iota2", i2)]
    return []


def get_involution(A: DivisionSuperalgebra, tag: str) -> Superinvolution:
    for s in superinvolutions(A):
        if s.tag == tag:
            return s
    raise ValueError(f"{A.name} has no superinvolution {tag!r}")
