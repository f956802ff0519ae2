"""The Weyl-Clifford algebra WC(E, B) in normal-ordered form, and its Fock model.

Relations: x y - (-1)^{|x||y|} y x = B(x, y) for homogeneous x, y in E.  A
normal-ordered monomial is a non-decreasing tuple of basis indices in which odd
indices do not repeat; the basis of E lists even vectors first.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations, combinations_with_replacement
from math import comb
from typing import Iterable, Sequence

from gmpy2 import is_square, isqrt, mpq

from ._linalg import Echelon, solve_many
from .graded_linear import BilinearSpace, SuperMatrix, sign
from .scalars_division import QQI, GaussianRational, gauss, scalar_to_json


class WCElement:
    """An element of WC(E, B): a map from normal-ordered monomials to scalars."""

    __slots__ = ("wc", "terms")

    def __init__(self, wc: "WeylClifford", terms: dict | None = None):
        self.wc = wc
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    def __add__(self, o):
        t = dict(self.terms)
        for m, c in o.terms.items():
            t[m] = t.get(m, 0) + c
        return WCElement(self.wc, t)

    def __sub__(self, o):
        return self + (-o)

    def __neg__(self):
        return WCElement(self.wc, {m: -c for m, c in self.terms.items()})

    def scale(self, s) -> "WCElement":
        return WCElement(self.wc, {m: c * s for m, c in self.terms.items()})

    def __mul__(self, o):
        if isinstance(o, WCElement):
            return self.wc.mul(self, o)
        return self.scale(o)

    __rmul__ = scale

    def __eq__(self, o):
        return isinstance(o, WCElement) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    @property
    def parity(self):
        ps = {sum(self.wc.parities[i] for i in m) % 2 for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def to_json(self) -> list:
        out = []
        ev = self.wc.even_slots
        for m in sorted(self.terms):
            exps = [m.count(i) for i in ev]
            odd = [i for i in m if self.wc.parities[i]]
            out.append({"even": exps, "odd": odd, "coeff": scalar_to_json(self.terms[m])})
        return out

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (len(m), m)):
            word = "*".join(f"x{i}" for i in m) or "1"
            parts.append(f"{self.terms[m]}*{word}")
        return " + ".join(parts)


class WeylClifford:
    """WC(E, B) for an even, (-1)-supersymmetric, nondegenerate B."""

    def __init__(self, B: BilinearSpace):
        self.B = B
        self.parities = tuple(B.parities)
        if list(self.parities) != sorted(self.parities):
            raise ValueError("the basis of E must list even vectors first")
        self.dim = len(self.parities)
        self.gram = dict(B.gram.entries)
        self.even_slots = [i for i, p in enumerate(self.parities) if p == 0]
        self.odd_slots = [i for i, p in enumerate(self.parities) if p == 1]
        self._cache: dict = {}
        self._omega = None
        self._beta_eqs = None

    # -- basic elements

    def b(self, i: int, j: int):
        return self.gram.get((i, j), 0)

    def one(self) -> WCElement:
        return WCElement(self, {(): mpq(1)})

    def zero(self) -> WCElement:
        return WCElement(self)

    def scalar(self, c) -> WCElement:
        return WCElement(self, {(): c})

    def gen(self, i: int) -> WCElement:
        return WCElement(self, {(i,): mpq(1)})

    def vector(self, vec: dict) -> WCElement:
        """The image of a vector of E (a dict index -> coefficient)."""
        return WCElement(self, {(i,): c for i, c in vec.items()})

    # -- multiplication

    def _mul_gen(self, mono: tuple, i: int) -> dict:
        """Normal form of mono * x_i."""
        key = (mono, i)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if not mono:
            res = {(i,): mpq(1)}
        else:
            a = mono[-1]
            odd_i = self.parities[i]
            if a < i or (a == i and not odd_i):
                res = {mono + (i,): mpq(1)}
            elif a == i:
                # odd square: x^2 = B(x, x)/2
                c = self.b(i, i) / 2
                res = {mono[:-1]: c} if c else {}
            else:
                # x_a x_i = s x_i x_a + B(x_a, x_i)
                s = sign(self.parities[a] * odd_i)
                prefix = mono[:-1]
                acc: dict = defaultdict(lambda: 0)
                for m, c in self._mul_gen(prefix, i).items():
                    for m2, c2 in self._mul_gen(m, a).items():
                        acc[m2] += s * c * c2
                bb = self.b(a, i)
                if bb:
                    acc[prefix] += bb
                res = {m: c for m, c in acc.items() if c}
        self._cache[key] = res
        return res

    def mul_mono(self, m1: tuple, m2: tuple) -> dict:
        cur = {m1: mpq(1)}
        for i in m2:
            nxt: dict = defaultdict(lambda: 0)
            for m, c in cur.items():
                for m3, c3 in self._mul_gen(m, i).items():
                    nxt[m3] += c * c3
            cur = {m: c for m, c in nxt.items() if c}
        return cur

    def mul(self, a: WCElement, b: WCElement) -> WCElement:
        out: dict = defaultdict(lambda: 0)
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                for m, c in self.mul_mono(m1, m2).items():
                    out[m] += c1 * c2 * c
        return WCElement(self, out)

    def word(self, indices: Sequence[int]) -> WCElement:
        """Normal form of x_{i1} x_{i2} ... in the given (arbitrary) order."""
        cur = {(): mpq(1)}
        for i in indices:
            nxt: dict = defaultdict(lambda: 0)
            for m, c in cur.items():
                for m3, c3 in self._mul_gen(m, i).items():
                    nxt[m3] += c * c3
            cur = nxt
        return WCElement(self, cur)

    def bracket(self, a: WCElement, b: WCElement) -> WCElement:
        """Supercommutator; inhomogeneous arguments are split into parity parts."""
        out = self.zero()
        for pa, ea in _parity_parts(a).items():
            for pb, eb in _parity_parts(b).items():
                out = out + self.mul(ea, eb) - self.mul(eb, ea).scale(sign(pa * pb))
        return out

    # -- the quadratic copy of spo(E, B)

    def omega_basis(self) -> list[WCElement]:
        """x_i x_j + x_j x_i (even, i <= j), x_i x_j - x_j x_i (odd, i < j), x_i x_j (mixed)."""
        if self._omega is None:
            out = []
            ev, od = self.even_slots, self.odd_slots
            for a, i in enumerate(ev):
                for j in ev[a:]:
                    out.append(self.word((i, j)) + self.word((j, i)))
            for a, i in enumerate(od):
                for j in od[a + 1:]:
                    out.append(self.word((i, j)) - self.word((j, i)))
            for i in ev:
                for j in od:
                    out.append(self.word((i, j)))
            self._omega = out
        return self._omega

    def ad_matrix(self, w: WCElement) -> dict:
        """Matrix of v -> [w, x_v] on E for a quadratic w, as {(r, c): value}."""
        out = {}
        for v in range(self.dim):
            br = self.bracket(w, self.gen(v))
            for m, c in br.terms.items():
                if len(m) != 1:
                    raise ValueError("ad(w) does not preserve E; w is not quadratic")
                out[(m[0], v)] = c
        return out

    def _beta_system(self):
        if self._beta_eqs is None:
            om = self.omega_basis()
            rows: dict = {}
            for k, w in enumerate(om):
                for key, val in self.ad_matrix(w).items():
                    rows.setdefault(key, {})[k] = val
            keys = sorted(rows)
            ech = Echelon(rows.values())
            if ech.rank != len(om):
                raise ArithmeticError("omega -> spo is not injective")
            self._beta_eqs = (keys, [rows[k] for k in keys])
        return self._beta_eqs

    def beta_many(self, mats: Iterable[SuperMatrix]) -> list[WCElement]:
        keys, rows = self._beta_system()
        idx = {k: j for j, k in enumerate(keys)}
        mats = list(mats)
        rhs = []
        for X in mats:
            r = {}
            for key, v in X.entries.items():
                if key not in idx:
                    raise ValueError("X is not in spo(E, B)")
                r[idx[key]] = v
            rhs.append(r)
        sols = solve_many(rows, len(self.omega_basis()), rhs)
        om = self.omega_basis()
        out = []
        for s in sols:
            if s is None:
                raise ValueError("X is not in spo(E, B)")
            acc = self.zero()
            for k, c in s.items():
                acc = acc + om[k].scale(c)
            out.append(acc)
        return out

    def beta(self, X: SuperMatrix) -> WCElement:
        """The unique element of Omega with [beta(X), x_v] = x_{Xv}."""
        return self.beta_many([X])[0]

    # -- filtration pieces

    def monomials(self, d: int) -> list[tuple]:
        """All normal-ordered monomials of degree exactly d."""
        out = []
        for b in range(0, min(d, len(self.odd_slots)) + 1):
            for e in combinations_with_replacement(self.even_slots, d - b):
                for o in combinations(self.odd_slots, b):
                    out.append(e + o)
        return sorted(out)

    def filtered_monomials(self, d: int) -> list[tuple]:
        """Monomials of degree <= d, by degree."""
        return [m for k in range(d + 1) for m in self.monomials(k)]


def sym_count(n0: int, n1: int, d: int) -> int:
    """dim S^d of a superspace of dimension (n0|n1)."""
    return sum(comb(n1, b) * (comb(n0 + d - b - 1, d - b) if n0 else int(d == b))
               for b in range(0, min(d, n1) + 1))


def _parity_parts(a: WCElement) -> dict:
    parts: dict = {}
    for m, c in a.terms.items():
        p = sum(a.wc.parities[i] for i in m) % 2
        parts.setdefault(p, {})[m] = c
    return {p: WCElement(a.wc, t) for p, t in parts.items()}


def wc_mul(a: WCElement, b: WCElement) -> WCElement:
    if a.wc is not b.wc:
        raise ValueError("elements of different Weyl-Clifford algebras")
    return a.wc.mul(a, b)


def beta(wc: WeylClifford, X: SuperMatrix) -> WCElement:
    return wc.beta(X)


# ---------------------------------------------------------------------------
# symbols in S(E)


def spoly_mul(parities, f: dict, g: dict) -> dict:
    """Product in the supersymmetric algebra S(E); keys are sorted index tuples."""
    out: dict = defaultdict(lambda: 0)
    for m1, c1 in f.items():
        for m2, c2 in g.items():
            res = _s_merge(parities, m1, m2)
            if res is not None:
                s, m = res
                out[m] += s * c1 * c2
    return {m: c for m, c in out.items() if c}


def _s_merge(parities, m1, m2):
    odd1 = [i for i in m1 if parities[i]]
    odd2 = [i for i in m2 if parities[i]]
    if set(odd1) & set(odd2):
        return None
    # sign of the shuffle of odd factors
    inv = sum(1 for a in odd1 for b in odd2 if a > b)
    return (-1 if inv % 2 else 1), tuple(sorted(m1 + m2))


def symbol(a: WCElement, k: int) -> dict:
    """Degree-k component of a, read as an element of S^k(E)."""
    if a.degree > k:
        raise ValueError(f"element has degree {a.degree} > {k}")
    return {m: c for m, c in a.terms.items() if len(m) == k}


def spoly_act(parities, g: SuperMatrix, f: dict) -> dict:
    """Action of an even linear map of E on S(E)."""
    cols: dict = defaultdict(dict)
    for (r, c), v in g.entries.items():
        cols[c][(r,)] = v
    out: dict = defaultdict(lambda: 0)
    for m, c in f.items():
        acc = {(): mpq(1)}
        for i in m:
            acc = spoly_mul(parities, acc, cols[i])
        for m2, c2 in acc.items():
            out[m2] += c * c2
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# group action


class GroupElement:
    """An even B-preserving automorphism of E, with a component tag."""

    def __init__(self, B: BilinearSpace, matrix: SuperMatrix, tag: str = ""):
        if matrix.parity not in (0, None) or any((B.parities[r] + B.parities[c]) % 2 for (r, c) in matrix.entries):
            raise ValueError("group elements must be even")
        G = B.gram
        if matrix.transpose() @ G @ matrix != G:
            raise ValueError("matrix does not preserve B")
        self.B = B
        self.matrix = matrix
        self.tag = tag

    @classmethod
    def reflection(cls, B: BilinearSpace, odd_index: int) -> "GroupElement":
        """diag(1, .., -1, .., 1) at an odd slot; preserves B when that slot is orthogonal to the rest."""
        par = B.parities
        ent = {(i, i): mpq(-1 if i == odd_index else 1) for i in range(len(par))}
        return cls(B, SuperMatrix(par, par, ent), "reflection")


def group_act(g: GroupElement, a: WCElement) -> WCElement:
    wc = a.wc
    imgs = {}
    for (r, c), v in g.matrix.entries.items():
        imgs.setdefault(c, {})[r] = v
    out = wc.zero()
    cache: dict = {}
    for m, c in a.terms.items():
        img = cache.get(m)
        if img is None:
            img = wc.one()
            for i in m:
                img = wc.mul(img, wc.vector(imgs.get(i, {})))
            cache[m] = img
        out = out + img.scale(c)
    return out


# ---------------------------------------------------------------------------
# Fock model on S(V) for a split E = V + V'


class FockBasis:
    """Monomials of S^{<=N}(V) for V spanned by E-basis combinations.

    ``V`` and ``Vp`` are lists of vectors of E (dicts) spanning complementary
    B-isotropic subspaces.  Every vector x of E is written x = v + v'; v acts
    by multiplication and v' by the derivation w -> B(v', w).
    """

    def __init__(self, wc: WeylClifford, V: Sequence[dict], Vp: Sequence[dict], N: int):
        self.wc = wc
        self.N = N
        self.V = [dict(v) for v in V]
        self.Vp = [dict(v) for v in Vp]
        par = wc.parities
        self.vpar = [_vec_parity(v, par) for v in self.V]
        if len(self.V) + len(self.Vp) != wc.dim:
            raise ValueError("V and V' must be complementary")
        for X in (self.V, self.Vp):
            for u in X:
                for v in X:
                    if wc.B.value(u, v):
                        raise ValueError("V and V' must be isotropic")
        # coordinates of each basis vector of E in the basis V + V'
        cols = self.V + self.Vp
        n = wc.dim
        mat = [[0] * n for _ in range(n)]
        for k, col in enumerate(cols):
            for i, v in col.items():
                mat[i][k] = v
        self._decomp = []
        for i in range(n):
            rhs = {i: mpq(1)}
            sol = solve_many([{k: mat[r][k] for k in range(n) if mat[r][k]} for r in range(n)], n, [rhs])[0]
            if sol is None:
                raise ValueError("V + V' does not span E")
            self._decomp.append(sol)
        # derivation values phi_{v'}(V_j) = B(v', V_j)
        self._phi = [[wc.B.value(vp, v) for v in self.V] for vp in self.Vp]
        self.vp_par = [_vec_parity(v, par) for v in self.Vp]
        self.monomials = self._enumerate(N)
        self.index = {m: k for k, m in enumerate(self.monomials)}
        self.parities = [sum(self.vpar[i] for i in m) % 2 for m in self.monomials]

    def _enumerate(self, N):
        r = len(self.V)
        out = []

        def rec(start, k, acc):
            out.append(tuple(acc))
            if k == N:
                return
            for j in range(start, r):
                if self.vpar[j] and acc and acc[-1] == j:
                    continue
                rec(j, k + 1, acc + [j])

        rec(0, 0, [])
        return sorted(out, key=lambda m: (len(m), m))

    def degree_block(self, d: int) -> list[int]:
        return [k for k, m in enumerate(self.monomials) if len(m) == d]

    def count(self, d: int) -> int:
        n1 = sum(self.vpar)
        return sym_count(len(self.vpar) - n1, n1, d)

    # operators on polynomials {monomial: coeff}

    def mult(self, j: int, f: dict) -> dict:
        out: dict = defaultdict(lambda: 0)
        odd = self.vpar[j]
        for m, c in f.items():
            if odd and j in m:
                continue
            s = 1
            if odd:
                s = sign(sum(1 for a in m if a < j and self.vpar[a]))
            out[tuple(sorted(m + (j,)))] += s * c
        return {m: c for m, c in out.items() if c}

    def deriv(self, k: int, f: dict) -> dict:
        """Derivation along V'_k: w -> B(V'_k, w), with the Koszul sign."""
        phi = self._phi[k]
        pk = self.vp_par[k]
        out: dict = defaultdict(lambda: 0)
        for m, c in f.items():
            passed = 0
            for t, a in enumerate(m):
                val = phi[a]
                if val:
                    s = sign(pk * passed)
                    out[m[:t] + m[t + 1:]] += s * val * c
                passed += self.vpar[a]
        return {m: c for m, c in out.items() if c}

    def gen_op(self, i: int, f: dict) -> dict:
        """Action of the basis vector x_i of E."""
        out: dict = defaultdict(lambda: 0)
        nV = len(self.V)
        for k, coeff in self._decomp[i].items():
            part = self.mult(k, f) if k < nV else self.deriv(k - nV, f)
            for m, c in part.items():
                out[m] += coeff * c
        return {m: c for m, c in out.items() if c}

    def act_poly(self, a: WCElement, f: dict) -> dict:
        out: dict = defaultdict(lambda: 0)
        for mono, c in a.terms.items():
            g = dict(f)
            for i in reversed(mono):
                g = self.gen_op(i, g)
                if not g:
                    break
            for m, v in g.items():
                out[m] += c * v
        return {m: c for m, c in out.items() if c}


def _vec_parity(v: dict, par) -> int:
    ps = {par[i] for i, c in v.items() if c}
    if len(ps) > 1:
        raise ValueError("V must be spanned by homogeneous vectors")
    return ps.pop() if ps else 0


def fock_act(a: WCElement, F: FockBasis, degrees: Sequence[int] | None = None) -> SuperMatrix:
    """Matrix of a on S^{<=N}(V) (columns restricted to ``degrees`` if given).

    Images are computed exactly and then truncated to degree <= N, so the
    matrix of a product ab agrees with the product of matrices on inputs of
    degree <= N - deg(a) - deg(b) (the safe window).
    """
    ent = {}
    for k, m in enumerate(F.monomials):
        if degrees is not None and len(m) not in degrees:
            continue
        img = F.act_poly(a, {m: mpq(1)})
        for m2, c in img.items():
            r = F.index.get(m2)
            if r is not None:
                ent[(r, k)] = c
    return SuperMatrix(F.parities, F.parities, ent)


def lagrangian_split(B: BilinearSpace):
    """Complementary isotropic subspaces V, V' of E, when the form splits over its field.

    Uses symplectic Gram-Schmidt on the even part and hyperbolic pairing on
    the odd part; raises ValueError if an odd isotropic vector cannot be found
    among basis vectors and their pairwise combinations with square-root-free
    coefficients.
    """
    par = B.parities
    V, Vp = [], []
    for p in (0, 1):
        pool = [{i: mpq(1)} for i, q in enumerate(par) if q == p]
        while pool:
            u = _find_isotropic(B, pool, B.space.field == QQI)
            if u is None:
                raise ValueError("the odd part of B does not split over the base field")
            w = next((x for x in pool if B.value(u, x)), None)
            if w is None:
                raise ValueError("degenerate form")
            # normalise B(w', u) = 1 and make w' isotropic
            c = B.value(w, u)
            w = {k: v / c for k, v in w.items()}
            ww = B.value(w, w)
            if ww:
                w = _axpy(w, u, -ww / 2)
            V.append(u)
            Vp.append(w)
            # project the pool onto the orthogonal complement of span(u, w)
            new = []
            for x in pool:
                # B(w, u) = 1, so subtract B(w, x) u and B(u, x)/B(u, w) w
                y = _axpy(_axpy(x, u, -B.value(w, x)), w, -B.value(u, x) / B.value(u, w))
                y = {k: v for k, v in y.items() if v}
                if y:
                    new.append(y)
            pool = Echelon(new).basis() if new else []
            pool = [dict(r) for r in pool]
    return V, Vp


def _axpy(x: dict, y: dict, a) -> dict:
    out = dict(x)
    for k, v in y.items():
        out[k] = out.get(k, 0) + a * v
    return {k: v for k, v in out.items() if v}


def _find_isotropic(B, pool, allow_i: bool):
    for x in pool:
        if not B.value(x, x):
            return x
    for a in range(len(pool)):
        for b in range(a + 1, len(pool)):
            x, y = pool[a], pool[b]
            bxx, byy, bxy = B.value(x, x), B.value(y, y), B.value(x, y)
            # B(x + t y, x + t y) = bxx + 2 t bxy + t^2 byy, solve for rational t
            disc = bxy * bxy - bxx * byy
            r = _sqrt(disc, allow_i)
            if r is not None and byy:
                return _axpy(x, y, (-bxy + r) / byy)
    return None


def _sqrt(x, allow_i: bool):
    if isinstance(x, GaussianRational):
        if x.im:
            return None
        x = x.re
    x = mpq(x)
    if x == 0:
        return mpq(0)
    n, d = abs(x.numerator), x.denominator
    if not (is_square(n) and is_square(d)):
        return None
    r = mpq(isqrt(n), isqrt(d))
    if x > 0:
        return r
    return gauss(0, r) if allow_i else None
