"""Loopless matroids on small ground sets, their flats, flags and minors.

Subsets are stored as bitmasks over the internal positions ``0..n-1``; the
public methods also accept iterables of element labels (1-based by default,
minors keep the labels of their parent).  The rank of every subset is
materialised at construction, so rank queries are table lookups.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from .errors import CapacityError, LoopError, NotAFlatError, ParseError, RankError

MAX_GROUND_SET = 12


def popcount(mask):
    return bin(mask).count("1")


def bits(mask):
    """Positions of the set bits of ``mask`` in increasing order."""
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def _rank_mod_p(vectors, p):
    rows = [[x % p for x in v] for v in vectors]
    rank = 0
    width = len(rows[0]) if rows else 0
    for col in range(width):
        piv = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and rows[i][col]:
                f = rows[i][col]
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def random_matroid(n, r, rng, p=3):
    """Random loopless rank-r column matroid over GF(p); parallel columns are allowed."""
    if not 1 <= r <= n:
        raise RankError(f"need 1 <= r <= n, got r={r}, n={n}")
    while True:
        cols = []
        while len(cols) < n:
            v = [rng.randrange(p) for _ in range(r)]
            if any(v):
                cols.append(v)
        if _rank_mod_p(cols, p) == r:
            return Matroid.from_matrix(cols, p, name=f"GF{p}({r},{n})")


@dataclass(frozen=True)
class FlatLattice:
    """All flats of a loopless matroid grouped by rank."""

    flats_by_rank: tuple
    rank_of: dict = field(repr=False)

    @property
    def rank(self):
        return len(self.flats_by_rank) - 1

    @cached_property
    def proper(self):
        """Nonempty proper flats ordered by (rank, bitmask)."""
        return tuple(F for k in range(1, self.rank) for F in self.flats_by_rank[k])

    def __len__(self):
        return sum(len(level) for level in self.flats_by_rank)

    def __contains__(self, mask):
        return mask in self.rank_of

    def counts(self):
        return [len(level) for level in self.flats_by_rank]


class Matroid:
    """A loopless matroid given by its full rank table.

    Parameters
    ----------
    n : int
        Size of the ground set.
    rank_table : sequence of int
        ``rank_table[mask]`` is the rank of the subset encoded by ``mask``.
    labels : sequence, optional
        External names of the elements, defaults to ``1..n``.
    """

    def __init__(self, n, rank_table, labels=None, name=None, validate=True):
        if n < 1:
            raise RankError("ground set must be nonempty")
        if n > MAX_GROUND_SET:
            raise CapacityError(f"ground set of size {n} exceeds the limit {MAX_GROUND_SET}")
        if len(rank_table) != 1 << n:
            raise ParseError("rank table must have 2^n entries")
        self.n = n
        self.labels = tuple(labels) if labels is not None else tuple(range(1, n + 1))
        if len(self.labels) != n:
            raise ParseError("wrong number of labels")
        self._pos = {e: i for i, e in enumerate(self.labels)}
        self._rk = tuple(rank_table)
        self.full = (1 << n) - 1
        self.r = self._rk[self.full]
        self.name = name
        if validate:
            self._check_axioms()
        loops = [self.labels[i] for i in range(n) if self._rk[1 << i] == 0]
        if loops:
            raise LoopError(f"matroid has loops {loops}; only loopless matroids are supported")

    # -- constructors -----------------------------------------------------

    @classmethod
    def uniform(cls, r, n):
        if not 0 <= r <= n:
            raise RankError(f"U_{{{r},{n}}} needs 0 <= r <= n")
        table = [min(popcount(m), r) for m in range(1 << n)]
        return cls(n, table, name=f"U({r},{n})", validate=False)

    @classmethod
    def boolean(cls, n):
        return cls(n, [popcount(m) for m in range(1 << n)], name=f"B({n})", validate=False)

    @classmethod
    def from_bases(cls, n, bases, labels=None, name=None):
        """Matroid whose bases are the given sets of 1-based positions."""
        if n < 1 or n > MAX_GROUND_SET:
            raise CapacityError(f"ground set size {n} outside 1..{MAX_GROUND_SET}")
        masks = set()
        for B in bases:
            m = 0
            for e in B:
                if not 1 <= e <= n:
                    raise ParseError(f"basis element {e} outside 1..{n}")
                m |= 1 << (e - 1)
            masks.add(m)
        if not masks:
            raise ParseError("a matroid needs at least one basis")
        if len({popcount(m) for m in masks}) != 1:
            raise ParseError("bases must all have the same size")
        indep = bytearray(1 << n)
        for m in masks:
            indep[m] = 1
        for m in range((1 << n) - 1, -1, -1):
            if not indep[m]:
                continue
            sub = m
            for i in bits(m):
                indep[sub & ~(1 << i)] = 1
        table = [0] * (1 << n)
        for m in range(1, 1 << n):
            if indep[m]:
                table[m] = popcount(m)
            else:
                table[m] = max(table[m & ~(1 << i)] for i in bits(m))
        M = cls(n, table, labels=labels, name=name)
        if {m for m in range(1 << n) if table[m] == M.r and popcount(m) == M.r} != masks:
            raise ParseError("the given sets violate the basis exchange axiom")
        return M

    @classmethod
    def from_matrix(cls, columns, p=3, name=None):
        """Column matroid of a matrix over GF(p), given as a list of columns."""
        n = len(columns)
        if n < 1 or n > MAX_GROUND_SET:
            raise CapacityError(f"ground set size {n} outside 1..{MAX_GROUND_SET}")
        table = [0] * (1 << n)
        for m in range(1, 1 << n):
            table[m] = _rank_mod_p([columns[i] for i in bits(m)], p)
        return cls(n, table, name=name)

    @classmethod
    def from_json(cls, obj):
        if not isinstance(obj, dict) or "type" not in obj:
            raise ParseError("matroid JSON needs a 'type' field")
        kind = obj["type"]
        try:
            if kind == "uniform":
                return cls.uniform(int(obj["r"]), int(obj["n"]))
            if kind == "boolean":
                return cls.boolean(int(obj["n"]))
            if kind == "bases":
                return cls.from_bases(int(obj["n"]), obj["bases"], name=obj.get("name"))
        except KeyError as exc:
            raise ParseError(f"matroid JSON missing field {exc}") from None
        raise ParseError(f"unknown matroid type {kind!r}")

    def to_json(self):
        return {"type": "bases", "n": self.n, "bases": [list(self.to_labels(B)) for B in self.bases()]}

    # -- basic queries ----------------------------------------------------

    def __repr__(self):
        return self.name or f"Matroid(n={self.n}, r={self.r})"

    def __eq__(self, other):
        return isinstance(other, Matroid) and self.key == other.key

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.key)

    @cached_property
    def key(self):
        return (self.labels, self._rk)

    def to_mask(self, S):
        if isinstance(S, int):
            if S < 0 or S > self.full:
                raise ParseError(f"bitmask {S} outside the ground set")
            return S
        m = 0
        for e in S:
            if e not in self._pos:
                raise ParseError(f"{e!r} is not an element of the ground set {self.labels}")
            m |= 1 << self._pos[e]
        return m

    def to_labels(self, mask):
        return tuple(sorted(self.labels[i] for i in bits(mask)))

    def element(self, e):
        if e not in self._pos:
            raise ParseError(f"{e!r} is not an element of the ground set {self.labels}")
        return self._pos[e]

    def rank(self, S):
        return self._rk[self.to_mask(S)]

    def rank_mask(self, mask):
        return self._rk[mask]

    def closure(self, S):
        """Bitmask of the smallest flat containing ``S``."""
        m = self.to_mask(S)
        rk = self._rk[m]
        for i in range(self.n):
            if not m >> i & 1 and self._rk[m | 1 << i] == rk:
                m |= 1 << i
        return m

    def is_flat(self, S):
        m = self.to_mask(S)
        return self.closure(m) == m

    def bases(self):
        return [m for m in range(1 << self.n) if popcount(m) == self.r and self._rk[m] == self.r]

    def is_coloop(self, e):
        i = self.element(e)
        return self._rk[self.full & ~(1 << i)] == self.r - 1

    def is_simple(self):
        return all(self._rk[(1 << i) | (1 << j)] == 2 for i, j in combinations(range(self.n), 2))

    def _check_axioms(self):
        rk = self._rk
        if rk[0] != 0:
            raise ParseError("rank of the empty set must be 0")
        for m in range(1 << self.n):
            for i in range(self.n):
                if m >> i & 1:
                    continue
                step = rk[m | 1 << i] - rk[m]
                if step not in (0, 1):
                    raise ParseError("rank must grow by 0 or 1 when adding an element")
                for j in range(i + 1, self.n):
                    if m >> j & 1:
                        continue
                    if rk[m | 1 << i] + rk[m | 1 << j] < rk[m | 1 << i | 1 << j] + rk[m]:
                        raise ParseError("rank function is not submodular")

    # -- flats and flags --------------------------------------------------

    @cached_property
    def lattice(self):
        found = {}
        for m in range(1 << self.n):
            F = self.closure(m)
            found.setdefault(F, self._rk[F])
        by_rank = [[] for _ in range(self.r + 1)]
        for F, k in found.items():
            by_rank[k].append(F)
        return FlatLattice(tuple(tuple(sorted(level)) for level in by_rank), found)

    def flats(self):
        return self.lattice

    def _check_flag(self, flag):
        masks = [self.to_mask(F) for F in flag]
        lat = self.lattice
        for F in masks:
            if F not in lat or F in (0, self.full):
                raise NotAFlatError(
                    f"{list(self.to_labels(F))} is not a proper nonempty flat", subset=list(self.to_labels(F))
                )
        masks.sort(key=lambda F: lat.rank_of[F])
        for a, b in zip(masks, masks[1:]):
            if a & ~b or a == b:
                raise NotAFlatError("flag members must form a strictly increasing chain")
        return masks

    def flags(self, max_length=None):
        """All chains of nonempty proper flats (the empty chain first)."""
        lat = self.lattice
        proper = lat.proper
        out = [()]

        def extend(chain, last):
            if max_length is not None and len(chain) >= max_length:
                return
            for F in proper:
                if lat.rank_of[F] > (lat.rank_of[last] if chain else 0) and not last & ~F and F != last:
                    new = chain + (F,)
                    out.append(new)
                    extend(new, F)

        extend((), 0)
        return out

    def count_flags(self, flag, ranks, avoid=None):
        """Number of flags with rank set ``ranks`` that extend ``flag`` disjointly.

        With ``avoid`` set to an element, only flags whose largest member
        misses that element are counted.
        """
        fixed = self._check_flag(flag)
        ranks = sorted(set(ranks))
        if any(not 1 <= k <= self.r - 1 for k in ranks):
            raise RankError(f"ranks must lie in 1..{self.r - 1}")
        s_bit = None if avoid is None else 1 << self.element(avoid)
        if not ranks:
            return 1
        lat = self.lattice

        def compatible(G):
            return all(G != F and (not G & ~F or not F & ~G) for F in fixed)

        ways = {0: 1}
        for k in ranks:
            nxt = {}
            for G in lat.flats_by_rank[k]:
                if not compatible(G):
                    continue
                total = sum(w for H, w in ways.items() if not H & ~G)
                if total:
                    nxt[G] = total
            ways = nxt
        if s_bit is not None:
            return sum(w for G, w in ways.items() if not G & s_bit)
        return sum(ways.values())

    def count_flags_avoiding(self, flag, ranks, s):
        return self.count_flags(flag, ranks, avoid=s)

    def dragon_hall_rado(self, sets):
        """True iff every union of ``m`` of the sets has rank at least ``m + 1``."""
        masks = [self.to_mask(S) for S in sets]
        if any(m == 0 for m in masks):
            raise ParseError("dragon-Hall-Rado sets must be nonempty")
        k = len(masks)
        for sub in range(1, 1 << k):
            union = 0
            for t in bits(sub):
                union |= masks[t]
            if self._rk[union] < 1 + popcount(sub):
                return False
        return True

    # -- minors -----------------------------------------------------------

    def _relabel(self, ground, shift, name=None):
        """Matroid on ``ground`` with rank X -> rk(X | shift) - rk(shift)."""
        pos = bits(ground)
        k = len(pos)
        base = self._rk[shift]
        table = [0] * (1 << k)
        for m in range(1 << k):
            big = shift
            for t in range(k):
                if m >> t & 1:
                    big |= 1 << pos[t]
            table[m] = self._rk[big] - base
        labels = [self.labels[i] for i in pos]
        return Matroid(k, table, labels=labels, name=name, validate=False)

    def minor(self, F1, F2):
        """Contract ``F1`` then restrict to ``F2``; both must be flats with F1 strictly inside F2."""
        a, b = self.to_mask(F1), self.to_mask(F2)
        if a & ~b or a == b:
            raise NotAFlatError("minor needs F1 strictly contained in F2")
        for F in (a, b):
            if self.closure(F) != F:
                raise NotAFlatError(f"{list(self.to_labels(F))} is not a flat", subset=list(self.to_labels(F)))
        return self._relabel(b & ~a, a)

    def restrict(self, S):
        m = self.to_mask(S)
        if not m:
            raise RankError("cannot restrict to the empty set")
        return self._relabel(m, 0)

    def contract(self, S):
        """Contraction by ``S``; raises LoopError if the result has loops."""
        m = self.to_mask(S)
        if m == self.full:
            raise RankError("contracting everything leaves an empty ground set")
        return self._relabel(self.full & ~m, m)

    def delete(self, e):
        i = self.element(e)
        if self.n == 1:
            raise RankError("deleting the only element empties the ground set")
        return self._relabel(self.full & ~(1 << i), 0)
