"""Graded Chow rings of loopless matroids with exact rational arithmetic.

The ring is spanned in each degree by monomials supported on chains of
nonempty proper flats.  A monomial is stored as a tuple of
``(flat_index, exponent)`` pairs in chain order.

Construction works in three steps:

1. The degree of every top-degree chain monomial is computed by rewriting
   repeated factors with the linear relations until only squarefree
   complete flags (degree 1) remain.
2. For each pair of complementary degrees the Poincare pairing between
   chain monomials is assembled, and bases are picked as the
   lexicographically first independent rows and columns.
3. Every chain monomial of degree d gets its coordinates in the chosen basis
   from the pairing (a class is determined by its pairings).
"""
from fractions import Fraction
from functools import lru_cache
from math import comb

import flint

from .errors import CapacityError, ChowForgeError, NotAFlatError, RankError
from .matroid import Matroid, bits, popcount

MAX_CHAIN_MONOMIALS = 250_000
PIVOT_PRIME = (1 << 62) - 57

ZERO = flint.fmpq(0)


def to_fraction(q):
    return Fraction(int(q.p), int(q.q))


def to_fmpq(x):
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


def _lowbit(mask):
    return (mask & -mask).bit_length() - 1


def _pivot_columns(rows, ncols, entries):
    """Indices of the lexicographically first independent columns.

    ``entries`` maps (row, col) to an integer.  Elimination runs modulo a
    62-bit prime; the resulting submatrix is later inverted over Q, which
    certifies its nonsingularity.
    """
    if rows == 0 or ncols == 0:
        return []
    flat = [0] * (rows * ncols)
    for (a, b), v in entries.items():
        flat[a * ncols + b] = v % PIVOT_PRIME
    R, rank = flint.nmod_mat(rows, ncols, flat, PIVOT_PRIME).rref()
    vals = R.entries()
    piv = []
    for i in range(rank):
        base = i * ncols
        start = piv[-1] + 1 if piv else 0
        for j in range(start, ncols):
            if int(vals[base + j]):
                piv.append(j)
                break
    return piv


class ChowRing:
    """The Chow ring A*(M) of a loopless matroid over Q."""

    def __init__(self, matroid, max_monomials=MAX_CHAIN_MONOMIALS):
        M = matroid
        self.matroid = M
        self.r = M.r
        self.top = M.r - 1
        lat = M.lattice
        self.flats = lat.proper
        self.index = {F: k for k, F in enumerate(self.flats)}
        self.flat_rank = [lat.rank_of[F] for F in self.flats]
        nf = len(self.flats)
        self.above = [[g for g in range(nf) if g != f and not self.flats[f] & ~self.flats[g]] for f in range(nf)]
        self.below = [[g for g in range(nf) if g != f and not self.flats[g] & ~self.flats[f]] for f in range(nf)]
        self._above_set = [frozenset(a) for a in self.above]
        self._enumerate_monomials(max_monomials)
        self._deg_memo = {}
        self._pair_cache = {}
        self.cache = {}
        self._build_bases()

    # -- monomials --------------------------------------------------------

    def _mono_key(self, mono):
        ranks, masks = [], []
        for f, a in mono:
            ranks.extend([self.flat_rank[f]] * a)
            masks.extend([self.flats[f]] * a)
        return (tuple(ranks), tuple(masks))

    def _enumerate_monomials(self, limit):
        top = self.top
        monos = [[] for _ in range(top + 1)]
        count = 0
        nf = len(self.flats)

        def rec(mono, last, deg):
            nonlocal count
            monos[deg].append(mono)
            count += 1
            if count > limit:
                raise CapacityError(
                    f"more than {limit} chain monomials; raise max_monomials to continue", limit=limit
                )
            nxt = range(nf) if last is None else self.above[last]
            for g in nxt:
                for a in range(1, top - deg + 1):
                    rec(mono + ((g, a),), g, deg + a)

        rec((), None, 0)
        self.monos = [sorted(level, key=self._mono_key) for level in monos]
        self.mono_index = [{m: k for k, m in enumerate(level)} for level in self.monos]

    def merge(self, u, v):
        """Product of two chain monomials, or None when it vanishes."""
        if not u:
            return v
        if not v:
            return u
        exps = dict(u)
        for f, a in v:
            exps[f] = exps.get(f, 0) + a
        order = sorted(exps)
        for a, b in zip(order, order[1:]):
            if b not in self._above_set[a]:
                return None
        return tuple((f, exps[f]) for f in order)

    def normalize_monomial(self, factors):
        """Chain monomial from ``[(flat_mask, exponent), ...]`` or None if zero."""
        exps = {}
        for F, a in factors:
            if F not in self.index:
                M = self.matroid
                raise NotAFlatError(
                    f"{list(M.to_labels(F))} is not a proper nonempty flat", subset=list(M.to_labels(F))
                )
            if a < 0:
                raise ValueError("negative exponent")
            if a:
                f = self.index[F]
                exps[f] = exps.get(f, 0) + a
        order = sorted(exps)
        for a, b in zip(order, order[1:]):
            if b not in self._above_set[a]:
                return None
        return tuple((f, exps[f]) for f in order)

    def monomial_degree(self, mono):
        return sum(a for _, a in mono)

    def monomial_key(self, mono):
        if not mono:
            return "1"
        parts = []
        for f, a in mono:
            labels = ",".join(str(e) for e in self.matroid.to_labels(self.flats[f]))
            parts.append("x{" + labels + "}" + (f"^{a}" if a > 1 else ""))
        return "*".join(parts)

    # -- degree map by rewriting ------------------------------------------

    def _rewrite_degree(self, mono):
        memo = self._deg_memo
        v = memo.get(mono)
        if v is not None:
            return v
        p = next((k for k, (_, a) in enumerate(mono) if a >= 2), None)
        if p is None:
            v = 1 if len(mono) == self.top else 0
            memo[mono] = v
            return v
        f, a = mono[p]
        F = self.flats[f]
        prev = self.flats[mono[p - 1][0]] if p > 0 else 0
        nxt = self.flats[mono[p + 1][0]] if p + 1 < len(mono) else self.matroid.full
        i_bit = 1 << _lowbit(F & ~prev)
        j_bit = 1 << _lowbit(nxt & ~F)
        head, tail = mono[:p], mono[p + 1 :]
        total = 0
        for g in self.above[f]:
            G = self.flats[g]
            if not G & ~nxt and G != nxt and not G & j_bit:
                total -= self._rewrite_degree(head + ((f, a - 1), (g, 1)) + tail)
        for g in self.below[f]:
            G = self.flats[g]
            if not prev & ~G and G != prev and G & i_bit:
                total -= self._rewrite_degree(head + ((g, 1), (f, a - 1)) + tail)
        memo[mono] = total
        return total

    # -- bases and normal forms -------------------------------------------

    def _pairing_entries(self, d):
        """Sparse pairing between chain monomials of degree d and top - d."""
        e = self.top - d
        idx_d, idx_e = self.mono_index[d], self.mono_index[e]
        entries = {}
        for T in self.monos[self.top]:
            val = self._rewrite_degree(T)
            if not val:
                continue
            for left, right in _splits(T, d):
                entries[(idx_d[left], idx_e[right])] = val
        return entries

    def _linear_basis(self):
        """Degree-one basis: x_F for F of rank >= 2 and the rank-one flat of the first element.

        The linear relations eliminate every other rank-one flat with unit
        coefficients, so integral divisors have integral coordinates.
        """
        idx = self.mono_index[1]
        keep = [f for f, F in enumerate(self.flats) if self.flat_rank[f] >= 2 or (self.flat_rank[f] == 1 and F & 1)]
        return sorted(idx[((f, 1),)] for f in keep)

    @staticmethod
    def _pivots_for(fixed, entries, n, transpose):
        """Lex-first independent partners of a fixed index set in the pairing."""
        pos = {c: k for k, c in enumerate(fixed)}
        if transpose:
            sub = {(pos[b], a): v for (a, b), v in entries.items() if b in pos}
        else:
            sub = {(pos[a], b): v for (a, b), v in entries.items() if a in pos}
        return _pivot_columns(len(fixed), n, sub)

    def _build_bases(self):
        top = self.top
        self.basis_index = [None] * (top + 1)
        self.reduction = [None] * (top + 1)
        self.gram = [None] * (top + 1)
        for d in range(top // 2 + 1):
            e = top - d
            entries = self._pairing_entries(d)
            nd, ne = len(self.monos[d]), len(self.monos[e])
            if d == 1:
                rows = self._linear_basis()
                cols = rows if d == e else self._pivots_for(rows, entries, ne, transpose=False)
            elif e == 1:
                cols = self._linear_basis()
                rows = self._pivots_for(cols, entries, nd, transpose=True)
            elif d == 0 and e > 0:
                # top class: the first complete flag, so the Gram matrix is [1]
                cols = [next(k for k, m in enumerate(self.monos[e]) if len(m) == e)]
                rows = [0]
            else:
                cols = _pivot_columns(nd, ne, entries)
                rows = cols if d == e else self._pivots_for(cols, entries, nd, transpose=True)
            if len(rows) != len(cols):
                raise ChowForgeError("pairing rank mismatch while choosing bases")
            k = len(cols)
            row_pos = {a: t for t, a in enumerate(rows)}
            col_pos = {b: t for t, b in enumerate(cols)}
            G = flint.fmpq_mat(k, k)
            Pc = flint.fmpq_mat(nd, k)
            Pr = flint.fmpq_mat(k, ne)
            for (a, b), v in entries.items():
                if b in col_pos:
                    Pc[a, col_pos[b]] = v
                    if a in row_pos:
                        G[row_pos[a], col_pos[b]] = v
                if a in row_pos:
                    Pr[row_pos[a], b] = v
            alg = "dixon" if k > 40 else None
            # coordinates of a degree-d monomial m solve  c^T G = P[m, cols]
            Xd = G.transpose().solve(Pc.transpose(), algorithm=alg)
            self.basis_index[d] = rows
            self.reduction[d] = _sparse_rows(Xd.transpose())
            self.gram[d] = G
            if d != e:
                Xe = G.solve(Pr, algorithm=alg)
                self.basis_index[e] = cols
                self.reduction[e] = _sparse_rows(Xe.transpose())
                self.gram[e] = G.transpose()
        self.basis = [[self.monos[d][k] for k in self.basis_index[d]] for d in range(top + 1)]
        self.dims = [len(b) for b in self.basis]
        self._top_scale = to_fmpq(self._rewrite_degree(self.basis[top][0]))

    # -- elements ---------------------------------------------------------

    def zero(self):
        return ChowElement(self, [[ZERO] * k for k in self.dims])

    def one(self):
        return self.scalar(1)

    def scalar(self, c):
        z = self.zero()
        z.comps[0][0] = to_fmpq(c)
        return z

    def from_monomial(self, mono, coeff=1):
        """Element for a chain monomial tuple (None stands for zero)."""
        out = self.zero()
        if mono is None:
            return out
        d = self.monomial_degree(mono)
        if d > self.top:
            return out
        c = to_fmpq(coeff)
        vec = out.comps[d]
        for col, val in self.reduction[d][self.mono_index[d][mono]]:
            vec[col] = c * val
        return out

    def monomial(self, factors, coeff=1):
        """Element ``coeff * prod x_F^a`` for ``factors = [(F, a), ...]`` (F masks or label sets)."""
        M = self.matroid
        fs = [(M.to_mask(F), a) for F, a in factors]
        return self.from_monomial(self.normalize_monomial(fs), coeff)

    def linear(self, coeffs):
        """Degree-1 element ``sum c_F x_F`` from a mapping flat -> coefficient."""
        out = self.zero()
        vec = out.comps[1] if self.top >= 1 else None
        M = self.matroid
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        for F, c in items:
            F = M.to_mask(F)
            if F not in self.index:
                raise NotAFlatError(
                    f"{list(M.to_labels(F))} is not a proper nonempty flat", subset=list(M.to_labels(F))
                )
            c = to_fmpq(c)
            if not c:
                continue
            row = self.mono_index[1][((self.index[F], 1),)]
            for col, val in self.reduction[1][row]:
                vec[col] += c * val
        return out

    def x(self, F):
        return self.linear([(F, 1)])

    def alpha(self):
        return self.linear({F: 1 for F in self.flats if F & 1})

    def beta(self):
        return self.linear({F: 1 for F in self.flats if not F & 1})

    def _subset(self, S):
        m = self.matroid.to_mask(S)
        if not m:
            raise ValueError("S must be nonempty")
        return m

    def alpha_S_coeffs(self, S):
        """Integral x_F representative of alpha_S (alpha minus flats containing S)."""
        S = self._subset(S)
        out = {F: (1 if F & 1 else 0) - (1 if not S & ~F else 0) for F in self.flats}
        return {F: c for F, c in out.items() if c}

    def beta_S_coeffs(self, S):
        """Integral x_F representative of beta_S (beta minus flats inside E - S)."""
        S = self._subset(S)
        out = {F: (0 if F & 1 else 1) - (1 if not F & S else 0) for F in self.flats}
        return {F: c for F, c in out.items() if c}

    def alpha_S(self, S):
        return self.linear(self.alpha_S_coeffs(S))

    def beta_S(self, S):
        return self.linear(self.beta_S_coeffs(S))

    def stair(self, k):
        """S_k = sum of x_F over flats of rank r - k."""
        if not 0 < k < self.r:
            raise RankError(f"S_k needs 0 < k < {self.r}")
        return self.linear({F: 1 for F, rk in zip(self.flats, self.flat_rank) if rk == self.r - k})

    def degree(self, a):
        """deg of a class concentrated in the top degree."""
        a = self._own(a)
        for d in range(self.top):
            if any(a.comps[d]):
                raise RankError(f"degree() needs a top-degree class, found a component in degree {d}")
        return to_fraction(a.comps[self.top][0] * self._top_scale)

    def top_degree(self, a):
        """deg of the top-degree component of ``a``."""
        a = self._own(a)
        return to_fraction(a.comps[self.top][0] * self._top_scale)

    def pair_degree(self, a, b):
        """deg(a * b) through the Poincare pairing, without forming the product."""
        a, b = self._own(a), self._own(b)
        total = ZERO
        for d in range(self.top + 1):
            u, v = a.comps[d], b.comps[self.top - d]
            if not any(u) or not any(v):
                continue
            U = flint.fmpq_mat(1, len(u), u)
            V = flint.fmpq_mat(len(v), 1, v)
            total += (U * self.gram[d] * V)[0, 0]
        return to_fraction(total)

    def pairing_matrix(self, d):
        if not 0 <= d <= self.top:
            raise RankError(f"degree {d} outside 0..{self.top}")
        G = self.gram[d]
        return [[to_fraction(G[i, j]) for j in range(G.ncols())] for i in range(G.nrows())]

    def _own(self, a):
        if isinstance(a, ChowElement):
            if a.ring is not self:
                raise ChowForgeError("elements belong to different Chow rings")
            return a
        return self.scalar(a)

    # -- multiplication ---------------------------------------------------

    def _pairs(self, i, j):
        key = (i, j)
        table = self._pair_cache.get(key)
        if table is None:
            idx = self.mono_index[i + j]
            table = []
            for u in self.basis[i]:
                row = []
                for b, v in enumerate(self.basis[j]):
                    m = self.merge(u, v)
                    if m is not None:
                        row.append((b, idx[m]))
                table.append(row)
            self._pair_cache[key] = table
        return table

    def _multiply(self, A, B):
        top = self.top
        out = [[ZERO] * k for k in self.dims]
        for i in range(top + 1):
            a = A[i]
            if not any(a):
                continue
            for j in range(top + 1 - i):
                b = B[j]
                if not any(b):
                    continue
                k = i + j
                if i == 0:
                    s = a[0]
                    acc = out[k]
                    for t, bv in enumerate(b):
                        if bv:
                            acc[t] += s * bv
                    continue
                if j == 0:
                    s = b[0]
                    acc = out[k]
                    for t, av in enumerate(a):
                        if av:
                            acc[t] += s * av
                    continue
                table = self._pairs(i, j)
                w = {}
                for u, au in enumerate(a):
                    if not au:
                        continue
                    for bi, row in table[u]:
                        bv = b[bi]
                        if bv:
                            w[row] = w.get(row, ZERO) + au * bv
                red = self.reduction[k]
                acc = out[k]
                for row, c in w.items():
                    if c:
                        for col, val in red[row]:
                            acc[col] += c * val
        return out


def _splits(T, d):
    """All ways to write the chain monomial T as (degree d part) * (rest)."""
    out = []

    def rec(pos, left, right, need):
        if pos == len(T):
            if need == 0:
                out.append((tuple(left), tuple(right)))
            return
        f, a = T[pos]
        remaining = sum(x for _, x in T[pos + 1 :])
        for b in range(max(0, need - remaining), min(a, need) + 1):
            l2 = left + [(f, b)] if b else left
            r2 = right + [(f, a - b)] if a - b else right
            rec(pos + 1, l2, r2, need - b)

    rec(0, [], [], d)
    return out


def _sparse_rows(X):
    rows = []
    nr, nc = X.nrows(), X.ncols()
    for i in range(nr):
        rows.append(tuple((j, X[i, j]) for j in range(nc) if X[i, j]))
    return rows


class ChowElement:
    """An element of A*(M) stored by coordinates in the ring's basis."""

    __slots__ = ("ring", "comps")

    def __init__(self, ring, comps):
        self.ring = ring
        self.comps = comps

    def copy(self):
        return ChowElement(self.ring, [list(v) for v in self.comps])

    def _coerce(self, other):
        if isinstance(other, ChowElement):
            if other.ring is not self.ring:
                raise ChowForgeError("elements belong to different Chow rings")
            return other
        if isinstance(other, (int, Fraction, flint.fmpq)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowElement(self.ring, [[x + y for x, y in zip(u, v)] for u, v in zip(self.comps, other.comps)])

    __radd__ = __add__

    def __neg__(self):
        return ChowElement(self.ring, [[-x for x in u] for u in self.comps])

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, flint.fmpq)):
            c = to_fmpq(other)
            return ChowElement(self.ring, [[c * x for x in u] for u in self.comps])
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ChowElement(self.ring, self.ring._multiply(self.comps, other.comps))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1 / Fraction(c))

    def __pow__(self, k):
        if k < 0:
            raise ValueError("negative powers are not defined; use inverse() for units")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return False
        return self.comps == other.comps

    def __hash__(self):
        return hash(tuple(tuple(u) for u in self.comps))

    def is_zero(self):
        return not any(any(u) for u in self.comps)

    def component(self, d):
        """The degree-d homogeneous part as an element."""
        out = self.ring.zero()
        if 0 <= d <= self.ring.top:
            out.comps[d] = list(self.comps[d])
        return out

    def truncate(self, d):
        """Drop all components of degree greater than d."""
        out = self.copy()
        for k in range(d + 1, self.ring.top + 1):
            out.comps[k] = [ZERO] * len(out.comps[k])
        return out

    def scalar_part(self):
        return to_fraction(self.comps[0][0])

    def coeffs(self, d):
        return [to_fraction(x) for x in self.comps[d]]

    def degrees(self):
        return [d for d, u in enumerate(self.comps) if any(u)]

    def degree(self):
        return self.ring.degree(self)

    def top_degree(self):
        return self.ring.top_degree(self)

    def inverse(self):
        """Multiplicative inverse of an element with nonzero constant term."""
        c = self.comps[0][0]
        if not c:
            raise ZeroDivisionError("element has zero constant term")
        u = self * (1 / to_fraction(c))
        nil = u - 1
        # (1 + nil)^{-1} = sum (-nil)^k, nil is nilpotent
        result = self.ring.one()
        term = self.ring.one()
        for _ in range(self.ring.top):
            term = term * (-nil)
            if term.is_zero():
                break
            result = result + term
        return result * (1 / to_fraction(c))

    def to_dict(self):
        """Mapping basis monomial key -> Fraction (nonzero entries only)."""
        out = {}
        ring = self.ring
        for d, u in enumerate(self.comps):
            for k, x in enumerate(u):
                if x:
                    out[ring.monomial_key(ring.basis[d][k])] = to_fraction(x)
        return out

    def to_json(self):
        return {k: fraction_str(v) for k, v in self.to_dict().items()}

    def __repr__(self):
        out = ""
        for k, v in self.to_dict().items():
            sign = "-" if v < 0 else "+"
            if k == "1":
                body = fraction_str(abs(v))
            else:
                body = k if abs(v) == 1 else f"{fraction_str(abs(v))}*{k}"
            out += (f"-{body}" if sign == "-" else body) if not out else f" {sign} {body}"
        return out or "0"


def fraction_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


_RING_CACHE = {}


def build_ring(matroid, max_monomials=MAX_CHAIN_MONOMIALS):
    """Chow ring of ``matroid``; results are cached per matroid."""
    ring = _RING_CACHE.get(matroid)
    if ring is None:
        ring = ChowRing(matroid, max_monomials=max_monomials)
        if len(_RING_CACHE) >= 128:
            _RING_CACHE.pop(next(iter(_RING_CACHE)))
        _RING_CACHE[matroid] = ring
    elif sum(len(level) for level in ring.monos) > max_monomials:
        raise CapacityError(f"more than {max_monomials} chain monomials", limit=max_monomials)
    return ring


# -- degree by the pullback recursion -------------------------------------


def alpha_beta_degree(M, d):
    """deg(alpha^(r-1-d) beta^d) from signed flag counts."""
    if not 0 <= d < M.r:
        raise RankError(f"need 0 <= d < {M.r}")
    total = 0
    for sub in range(1 << d):
        ranks = [k + 1 for k in range(d) if sub >> k & 1]
        total += (-1) ** len(ranks) * M.count_flags([], ranks)
    return (-1) ** d * total


def _compress(mask, ground):
    """Re-index the bits of ``mask`` inside ``ground`` to consecutive positions."""
    out = 0
    for t, i in enumerate(bits(ground)):
        if mask >> i & 1:
            out |= 1 << t
    return out


@lru_cache(maxsize=None)
def _ab_degree_cached(M, d):
    return alpha_beta_degree(M, d)


@lru_cache(maxsize=None)
def _recursive(M, beta_exp, chain, alpha_exp):
    if not chain:
        if beta_exp + alpha_exp != M.r - 1:
            return 0
        return _ab_degree_cached(M, beta_exp)
    (F1, d1), rest = chain[0], chain[1:]
    rk = M.rank_mask(F1)
    i = d1 + beta_exp - rk
    if not 0 <= i <= d1 - 1:
        return 0
    low = M.restrict(F1)
    right = _ab_degree_cached(low, beta_exp) if d1 - 1 - i + beta_exp == rk - 1 else 0
    if not right:
        return 0
    ground = M.full & ~F1
    high = M.contract(F1)
    sub_chain = tuple((_compress(G & ~F1, ground), a) for G, a in rest)
    left = _recursive(high, i, sub_chain, alpha_exp)
    return (-1) ** (d1 - 1) * comb(d1 - 1, i) * right * left


def degree_recursive(M, beta_exp=0, chain=(), alpha_exp=0):
    """deg(beta^b x_{F1}^{d1} ... x_{Fk}^{dk} alpha^a) via minors of M.

    ``chain`` is a sequence of ``(flat, exponent)`` with nested flats, given as
    masks or label sets.  The total degree must equal rank(M) - 1.
    """
    masks = []
    for F, a in chain:
        m = M.to_mask(F)
        if M.closure(m) != m or m in (0, M.full):
            raise NotAFlatError(f"{list(M.to_labels(m))} is not a proper nonempty flat", subset=list(M.to_labels(m)))
        if a < 1:
            raise ValueError("chain exponents must be positive")
        masks.append((m, a))
    for (A, _), (B, _) in zip(masks, masks[1:]):
        if A & ~B or A == B:
            raise NotAFlatError("chain flats must be strictly nested")
    total = beta_exp + alpha_exp + sum(a for _, a in masks)
    if total != M.r - 1:
        raise RankError(f"total degree {total} differs from {M.r - 1}")
    return _recursive(M, beta_exp, tuple(masks), alpha_exp)


# -- divisors -------------------------------------------------------------


class DivisorClass:
    """A degree-1 class given by coefficients on x_F (a representative)."""

    def __init__(self, matroid, coeffs):
        self.matroid = matroid
        self.coeffs = {}
        for F, c in coeffs.items():
            F = matroid.to_mask(F)
            c = Fraction(c)
            if c:
                self.coeffs[F] = self.coeffs.get(F, 0) + c

    @classmethod
    def from_element(cls, element):
        ring = element.ring
        if any(any(element.comps[d]) for d in range(ring.top + 1) if d != 1):
            raise RankError("element is not of pure degree 1")
        coeffs = {}
        if ring.top >= 1:
            for (mono,), c in zip(ring.basis[1], element.comps[1]):
                if c:
                    coeffs[ring.flats[mono[0]]] = to_fraction(c)
        return cls(ring.matroid, coeffs)

    @property
    def ring(self):
        return build_ring(self.matroid)

    def element(self):
        return self.ring.linear(self.coeffs)

    def __eq__(self, other):
        return isinstance(other, DivisorClass) and self.matroid == other.matroid and self.element() == other.element()

    def __add__(self, other):
        c = dict(self.coeffs)
        for F, v in other.coeffs.items():
            c[F] = c.get(F, 0) + v
        return DivisorClass(self.matroid, c)

    def __neg__(self):
        return DivisorClass(self.matroid, {F: -v for F, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return DivisorClass(self.matroid, {F: k * v for F, v in self.coeffs.items()})

    __rmul__ = __mul__

    def __repr__(self):
        M = self.matroid
        terms = [f"{fraction_str(c)}*x{{{','.join(map(str, M.to_labels(F)))}}}" for F, c in sorted(self.coeffs.items())]
        return "DivisorClass(" + (" + ".join(terms) or "0") + ")"


__all__ = [
    "ChowRing",
    "ChowElement",
    "DivisorClass",
    "Matroid",
    "alpha_beta_degree",
    "build_ring",
    "degree_recursive",
    "fraction_str",
    "popcount",
]
