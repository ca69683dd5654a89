"""Pullback, pushforward and deletion maps between matroid Chow rings.

For a proper nonempty flat F the pullback lands in the tensor product of
the Chow rings of the contraction M_F (left factor) and the restriction
M^F (right factor).  Tensors are kept as lists of (left, right) pairs.
"""
from fractions import Fraction
from math import comb

from .chow import ChowElement, build_ring, to_fraction
from .errors import ChowForgeError, NotAFlatError, ParseError


class Tensor:
    """Element of A(M_F) (x) A(M^F) as a sum of pure tensors."""

    def __init__(self, left_ring, right_ring, terms=()):
        self.left = left_ring
        self.right = right_ring
        self.terms = []
        for u, v in terms:
            if u.ring is not left_ring or v.ring is not right_ring:
                raise ChowForgeError("tensor factor lives in the wrong ring")
            self.terms.append((u, v))

    def __add__(self, other):
        self._check(other)
        return Tensor(self.left, self.right, self.terms + other.terms)

    def __neg__(self):
        return Tensor(self.left, self.right, [(-u, v) for u, v in self.terms])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Tensor(self.left, self.right, [(u * other, v) for u, v in self.terms])
        self._check(other)
        return Tensor(self.left, self.right, [(u * a, v * b) for u, v in self.terms for a, b in other.terms])

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, Tensor) or other.left is not self.left or other.right is not self.right:
            raise ChowForgeError("tensors over different ring pairs")

    def coordinates(self):
        """Canonical form: {(left degree, left index, right degree, right index): Fraction}."""
        out = {}
        for u, v in self.terms:
            for dl, cu in enumerate(u.comps):
                for kl, a in enumerate(cu):
                    if not a:
                        continue
                    for dr, cv in enumerate(v.comps):
                        for kr, b in enumerate(cv):
                            if b:
                                key = (dl, kl, dr, kr)
                                out[key] = out.get(key, 0) + to_fraction(a * b)
        return {k: v for k, v in out.items() if v}

    def __eq__(self, other):
        return isinstance(other, Tensor) and self.coordinates() == other.coordinates()

    def degree(self):
        """deg_{M_F} (x) deg_{M^F} applied to the top bidegree part."""
        return sum((self.left.top_degree(u) * self.right.top_degree(v) for u, v in self.terms), Fraction(0))


def _flat_mask(M, F):
    m = M.to_mask(F)
    if m in (0, M.full) or M.closure(m) != m:
        raise NotAFlatError(f"{list(M.to_labels(m))} is not a proper nonempty flat", subset=list(M.to_labels(m)))
    return m


def factor_rings(M, F):
    """Chow rings of the contraction M_F and the restriction M^F."""
    m = _flat_mask(M, F)
    return build_ring(M.contract(m)), build_ring(M.restrict(m))


def pullback_phi(M, F, a):
    """Image of ``a`` in A(M_F) (x) A(M^F) under the pullback at the flat F."""
    m = _flat_mask(M, F)
    ring = build_ring(M)
    if not isinstance(a, ChowElement) or a.ring is not ring:
        raise ChowForgeError("element does not belong to the Chow ring of M")
    L, R = factor_rings(M, m)
    terms = []
    for d, vec in enumerate(a.comps):
        for k, c in enumerate(vec):
            if c:
                for u, v in _phi_monomial(M, m, ring, L, R, ring.basis[d][k]):
                    terms.append((u * to_fraction(c), v))
    return Tensor(L, R, terms)


def _phi_monomial(M, m, ring, L, R, mono):
    left_f, right_f, own = [], [], 0
    for f, a in mono:
        G = ring.flats[f]
        if G == m:
            own = a
        elif not G & ~m:
            right_f.append((M.to_labels(G), a))
        elif not m & ~G:
            left_f.append((M.to_labels(G & ~m), a))
        else:
            return []
    u0 = L.monomial(left_f)
    v0 = R.monomial(right_f)
    if not own:
        return [(u0, v0)]
    # phi(x_F) = -(1 (x) alpha + beta (x) 1), expand the power binomially
    out = []
    beta_L, alpha_R = L.beta(), R.alpha()
    for i in range(own + 1):
        c = (-1) ** own * comb(own, i)
        out.append((u0 * (beta_L**i) * c, v0 * (alpha_R ** (own - i))))
    return out


def pushforward_psi(M, F, t):
    """psi(u (x) v) = x_F * lift(u) * lift(v) for a tensor over (M_F, M^F)."""
    m = _flat_mask(M, F)
    ring = build_ring(M)
    L, R = factor_rings(M, m)
    if not isinstance(t, Tensor) or t.left is not L or t.right is not R:
        raise ParseError("tensor is not over the factor rings of this flat")
    out = ring.zero()
    cache = {}
    for (dl, kl, dr, kr), c in t.coordinates().items():
        key = (dl, kl, dr, kr)
        if key not in cache:
            factors = [(m, 1)]
            for f, a in L.basis[dl][kl]:
                factors.append((M.to_mask(L.matroid.to_labels(L.flats[f])) | m, a))
            for f, a in R.basis[dr][kr]:
                factors.append((M.to_mask(R.matroid.to_labels(R.flats[f])), a))
            cache[key] = ring.from_monomial(ring.normalize_monomial(factors))
        out = out + cache[key] * c
    return out


def deletion_theta(M, i, a):
    """theta_i: A(M \\ i) -> A(M), x_F -> x_F + x_{F+i} with non-flats dropped."""
    ring = build_ring(M)
    Mi = M.delete(i)
    small = build_ring(Mi)
    if not isinstance(a, ChowElement) or a.ring is not small:
        raise ChowForgeError("element does not belong to the Chow ring of M \\ i")
    ibit = 1 << M.element(i)
    images = {}
    for f, F in enumerate(small.flats):
        big = M.to_mask(Mi.to_labels(F))
        terms = {}
        for G in (big, big | ibit):
            if G in ring.index:
                terms[G] = 1
        images[f] = ring.linear(terms)
    out = ring.zero()
    for d, vec in enumerate(a.comps):
        for k, c in enumerate(vec):
            if not c:
                continue
            img = ring.one()
            for f, e in small.basis[d][k]:
                img = img * images[f] ** e
            out = out + img * to_fraction(c)
    return out
