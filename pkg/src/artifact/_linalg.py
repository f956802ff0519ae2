"""Exact linear algebra kernels shared by the algebraic modules.

Rows are sparse dictionaries ``{column: value}`` with exact scalars
(``gmpy2.mpq`` or :class:`artifact.scalars_division.GaussianRational`).
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpq

Row = dict


def _coerce(v):
    if isinstance(v, (int, Fraction)):
        return mpq(v)
    return v


def clean_row(row) -> dict:
    """Copy a row, dropping zeros and coercing plain numbers."""
    return {c: _coerce(v) for c, v in row.items() if v}


class Echelon:
    """Reduced row echelon form of a set of sparse rows.

    Pivots are chosen column by column in increasing order, so the result is
    the canonical RREF of the row space (restricted to ``pivot_limit``
    columns when given, which is how linear systems with right-hand sides are
    solved).
    """

    def __init__(self, rows: Iterable[dict], pivot_limit: int | None = None):
        rows = [clean_row(r) for r in rows]
        rows = [r for r in rows if r]
        colmap: dict = defaultdict(set)
        for i, r in enumerate(rows):
            for c in r:
                colmap[c].add(i)
        active = set(range(len(rows)))
        pivots: dict = {}
        for c in sorted(colmap):
            if pivot_limit is not None and c >= pivot_limit:
                break
            cands = [i for i in colmap[c] if i in active]
            if not cands:
                continue
            p = min(cands, key=lambda i: (len(rows[i]), i))
            active.discard(p)
            pr = rows[p]
            lead = pr[c]
            if lead != 1:
                inv = 1 / lead
                for k in pr:
                    pr[k] = pr[k] * inv
            for i in list(colmap[c]):
                if i == p:
                    continue
                r = rows[i]
                f = r[c]
                for k, v in pr.items():
                    nv = r.get(k, 0) - f * v
                    if nv:
                        if k not in r:
                            colmap[k].add(i)
                        r[k] = nv
                    elif k in r:
                        del r[k]
                        colmap[k].discard(i)
            pivots[c] = p
        self._rows = rows
        self._colmap = colmap
        self.pivots = pivots
        self.leftover = [rows[i] for i in sorted(active) if rows[i]]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def basis(self) -> list[dict]:
        """Canonical basis of the row space, sorted by pivot column."""
        out = [dict(self._rows[self.pivots[c]]) for c in sorted(self.pivots)]
        out.extend(dict(r) for r in self.leftover)
        return out

    def key(self) -> tuple:
        """Hashable canonical form, used for span equality."""
        return tuple(tuple(sorted(r.items())) for r in self.basis())

    def free_columns(self, ncols: int) -> list[int]:
        return [c for c in range(ncols) if c not in self.pivots]

    def nullspace(self, ncols: int) -> list[dict]:
        row_pivot = {p: c for c, p in self.pivots.items()}
        out = []
        for f in self.free_columns(ncols):
            vec = {f: mpq(1)}
            # each pivot row touching f contributes -r[f] at its pivot
            for i in self._colmap.get(f, ()):
                v = self._rows[i].get(f)
                pc = row_pivot.get(i)
                if v and pc is not None:
                    vec[pc] = -v
            out.append(vec)
        return out

    def reduce(self, row: dict) -> dict:
        """Reduce ``row`` modulo the row space (remainder has no pivot columns)."""
        r = clean_row(row)
        for c in [c for c in r if c in self.pivots]:
            f = r.get(c)
            if not f:
                continue
            for k, v in self._rows[self.pivots[c]].items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)


def nullspace(rows: Iterable[dict], ncols: int) -> list[dict]:
    """Basis of ``{x : row . x = 0 for every row}`` as sparse vectors."""
    return Echelon(rows, pivot_limit=ncols).nullspace(ncols)


def rank(rows: Iterable[dict]) -> int:
    return Echelon(rows).rank


def span_key(rows: Iterable[dict]) -> tuple:
    return Echelon(rows).key()


def spans_equal(a: Sequence[dict], b: Sequence[dict]) -> bool:
    return span_key(a) == span_key(b)


def solve_many(rows: Sequence[dict], nunknowns: int, rhs: Sequence[dict]):
    """Solve ``A x = b_k`` for several right-hand sides at once.

    ``rows`` are the equations over unknown columns ``0..nunknowns-1``;
    ``rhs[k]`` maps equation index to value.  Returns one solution dict per
    right-hand side, or ``None`` where the system is inconsistent.
    """
    aug = []
    for i, r in enumerate(rows):
        row = dict(r)
        for k, b in enumerate(rhs):
            v = b.get(i)
            if v:
                row[nunknowns + k] = v
        aug.append(row)
    ech = Echelon(aug, pivot_limit=nunknowns)
    bad = set()
    for r in ech.leftover:
        for c in r:
            if c >= nunknowns:
                bad.add(c - nunknowns)
    out = []
    for k in range(len(rhs)):
        if k in bad:
            out.append(None)
            continue
        col = nunknowns + k
        sol = {}
        for c, p in ech.pivots.items():
            v = ech._rows[p].get(col)
            if v:
                sol[c] = v
        out.append(sol)
    return out


def dense_to_rows(mat: Sequence[Sequence]) -> list[dict]:
    return [{j: v for j, v in enumerate(r) if v} for r in mat]


def sparse_to_dense(vec: dict, n: int) -> list:
    return [vec.get(i, mpq(0)) for i in range(n)]


def bareiss_nullspace(mat: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Dense fraction-free (Bareiss) elimination; nullspace basis over Q.

    Rows are scaled to integers first; only the back substitution uses
    fractions.  Used for dense rational systems and as an independent oracle
    for the sparse kernel.
    """
    rows = [[_frac(v) for v in r] for r in mat]
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    ints = []
    for r in rows:
        den = 1
        for v in r:
            den = den * v.denominator // _gcd(den, v.denominator)
        ints.append([int(v * den) for v in r])
    m = len(ints)
    a = ints
    prev = 1
    piv_cols = []
    r = 0
    for c in range(n):
        if r >= m:
            break
        sel = next((i for i in range(r, m) if a[i][c] != 0), None)
        if sel is None:
            continue
        a[r], a[sel] = a[sel], a[r]
        for i in range(r + 1, m):
            for j in range(c + 1, n):
                a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) // prev
            a[i][c] = 0
        prev = a[r][c]
        piv_cols.append(c)
        r += 1
    free = [c for c in range(n) if c not in piv_cols]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for k in range(len(piv_cols) - 1, -1, -1):
            pc = piv_cols[k]
            s = sum((Fraction(a[k][j]) * x[j] for j in range(pc + 1, n) if a[k][j]), Fraction(0))
            x[pc] = -s / a[k][pc]
        basis.append(x)
    return basis


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if hasattr(v, "numerator"):
        return Fraction(int(v.numerator), int(v.denominator))
    return Fraction(v)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def solve_dense(mat: Sequence[Sequence], rhs: Sequence):
    """Unique solution of a square or overdetermined consistent system, or None."""
    n = len(mat[0])
    rows = dense_to_rows(mat)
    if Echelon(rows).rank < n:
        return None
    sol = solve_many(rows, n, [{i: b for i, b in enumerate(rhs) if b}])[0]
    if sol is None:
        return None
    return [sol.get(i, mpq(0)) for i in range(n)]


class IncrementalSpan:
    """Growing subspace; each stored vector has a distinct pivot (its first key)."""

    def __init__(self):
        self.vectors: dict = {}  # pivot -> vector normalised at pivot

    def reduce(self, vec: dict) -> dict:
        r = clean_row(vec)
        while True:
            hits = [c for c in r if c in self.vectors]
            if not hits:
                return r
            c = min(hits)
            f = r[c]
            for k, v in self.vectors[c].items():
                nv = r.get(k, 0) - f * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)

    def add(self, vec: dict) -> dict | None:
        """Insert ``vec``; return the new reduced vector, or None if dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        c = min(r)
        inv = 1 / r[c]
        r = {k: v * inv for k, v in r.items()}
        self.vectors[c] = r
        return r

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def basis(self) -> list[dict]:
        return [self.vectors[c] for c in sorted(self.vectors)]
