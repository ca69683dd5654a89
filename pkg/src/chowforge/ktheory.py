"""K-classes through their Chern characters, tangent classes, Todd classes
and the two Euler characteristic pipelines.

A K-class is stored as its Chern character in A*(M) (x) Q.  Line bundles are
divisors; the exceptional isomorphism zeta is evaluated on divisors written in
the alpha_F spanning set.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import flint
import sympy

from .chow import ChowElement, DivisorClass, build_ring, to_fmpq, to_fraction
from .errors import ChowForgeError, PreconditionError, RankError

# -- exact power series on Fraction lists ---------------------------------


def series_inverse(a, N):
    """Coefficients of 1/a(x) up to x^N; requires a[0] != 0."""
    a = list(a) + [Fraction(0)] * (N + 1)
    out = [Fraction(1) / a[0]]
    for k in range(1, N + 1):
        s = sum(a[i] * out[k - i] for i in range(1, k + 1))
        out.append(-s / a[0])
    return out


def series_log(a, N):
    """Coefficients of log a(x) up to x^N; requires a[0] == 1."""
    a = list(a) + [Fraction(0)] * (N + 1)
    if a[0] != 1:
        raise ValueError("log needs constant term 1")
    inv = series_inverse(a, N)
    deriv = [k * a[k] for k in range(1, N + 1)]
    quot = [sum(deriv[i] * inv[k - i] for i in range(k + 1)) for k in range(N)]
    return [Fraction(0)] + [quot[k - 1] / k for k in range(1, N + 1)]


@lru_cache(maxsize=None)
def todd_log_series(N):
    """Coefficients f_k of log(x / (1 - e^{-x})) for k = 0..N."""
    # (1 - e^{-x}) / x = sum_k (-1)^k x^k / (k+1)!
    g = [Fraction((-1) ** k, factorial(k + 1)) for k in range(N + 1)]
    return tuple(-c for c in series_log(g, N))


def todd_series(N):
    """Coefficients of x / (1 - e^{-x}) up to x^N."""
    g = [Fraction((-1) ** k, factorial(k + 1)) for k in range(N + 1)]
    return series_inverse(g, N)


# -- ring-level exp / log -------------------------------------------------


def ring_exp(x):
    """exp of an element with zero constant term (nilpotent)."""
    ring = x.ring
    if x.comps[0][0]:
        raise ValueError("exp needs an element without constant term")
    out = ring.one()
    term = ring.one()
    for k in range(1, ring.top + 1):
        term = term * x * Fraction(1, k)
        if term.is_zero():
            break
        out = out + term
    return out


def ring_log(u):
    """log of an element with constant term 1."""
    ring = u.ring
    if u.comps[0][0] != 1:
        raise ValueError("log needs constant term 1")
    nil = u - 1
    out = ring.zero()
    term = ring.one()
    for k in range(1, ring.top + 1):
        term = term * nil
        if term.is_zero():
            break
        out = out + term * Fraction((-1) ** (k - 1), k)
    return out


def graded_dual(x):
    """Negate the odd-degree components."""
    out = x.copy()
    for d in range(1, len(out.comps), 2):
        out.comps[d] = [-c for c in out.comps[d]]
    return out


def adams_scale(x, j):
    out = x.copy()
    for d in range(len(out.comps)):
        s = to_fmpq(j**d)
        out.comps[d] = [s * c for c in out.comps[d]]
    return out


# -- Chern data and K-classes ---------------------------------------------


@dataclass
class ChernData:
    rank: int
    total: ChowElement

    def __post_init__(self):
        if self.total.comps[0][0] != 1:
            raise ValueError("total Chern class must have constant term 1")

    @property
    def ring(self):
        return self.total.ring

    def c(self, k):
        return self.total.component(k)


class KClass:
    """A rational K-class represented by its Chern character."""

    def __init__(self, ch):
        self.ch = ch

    @property
    def ring(self):
        return self.ch.ring

    @property
    def rank(self):
        return self.ch.scalar_part()

    @classmethod
    def line(cls, D):
        """Line bundle with first Chern class D (a DivisorClass or degree-1 element)."""
        x = D.element() if isinstance(D, DivisorClass) else D
        return cls(ring_exp(x))

    @classmethod
    def trivial(cls, ring, m=1):
        return cls(ring.scalar(m))

    def __add__(self, other):
        return KClass(self.ch + other.ch)

    def __sub__(self, other):
        return KClass(self.ch - other.ch)

    def __neg__(self):
        return KClass(-self.ch)

    def __mul__(self, other):
        if isinstance(other, KClass):
            return KClass(self.ch * other.ch)
        return KClass(self.ch * other)

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, KClass) and self.ch == other.ch

    def __repr__(self):
        return f"KClass(ch={self.ch!r})"


def chern_to_ch(cd):
    """Chern character from Chern data via Newton's identities."""
    ring = cd.ring
    top = ring.top
    c = [cd.c(k) for k in range(top + 1)]
    p = [None] * (top + 1)
    ch = ring.scalar(cd.rank)
    for k in range(1, top + 1):
        s = c[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            s = s + c[i] * p[k - i] * ((-1) ** (i - 1))
        p[k] = s
        ch = ch + s * Fraction(1, factorial(k))
    return KClass(ch)


def dual(k):
    return KClass(graded_dual(k.ch))


def adams(k, j):
    if j < 1:
        raise ValueError("Adams operations need j >= 1")
    return KClass(adams_scale(k.ch, j))


def exterior_power(k, p):
    """lambda^p from the Newton-type recursion with Adams operations."""
    if p < 0:
        raise ValueError("p must be nonnegative")
    lam = [KClass(k.ring.one())]
    for q in range(1, p + 1):
        s = k.ring.zero()
        for j in range(1, q + 1):
            s = s + lam[q - j].ch * adams(k, j).ch * ((-1) ** (j - 1))
        lam.append(KClass(s * Fraction(1, q)))
    return lam[p]


# -- tangent data ---------------------------------------------------------


def _stairs(ring):
    return [None] + [ring.stair(k) for k in range(1, ring.r)]


def tangent_factors(ring):
    """The 2r - 1 degree-one factors whose product gives c(T_M)."""
    S = _stairs(ring)
    a = ring.alpha()
    out = [S[i] for i in range(1, ring.r)]
    acc = a
    out.append(acc)
    for i in range(1, ring.r):
        acc = acc - S[i]
        out.append(acc)
    return out


def chern_TM(M):
    ring = build_ring(M)
    total = ring.one()
    for t in tangent_factors(ring):
        total = total * (1 + t)
    return ChernData(M.r - 1, total)


def chern_QM(M):
    ring = build_ring(M)
    total = ring.one()
    acc = ring.alpha()
    S = _stairs(ring)
    for i in range(ring.r):
        if i:
            acc = acc - S[i]
        total = total * (1 + acc).inverse()
    return ChernData(M.n - M.r, total)


@lru_cache(maxsize=None)
def tangent_polynomial(n):
    """The recursive polynomial T_n(x, y_1, ..., y_{n-1}) as a sympy expression."""
    x = sympy.Symbol("x")
    y = sympy.symbols(f"y1:{max(n, 1) + 1}")
    if n == 0:
        return sympy.Integer(1)
    T = (1 + x) ** (n + 1)
    for j in range(1, n):
        lower = tangent_polynomial(j - 1)
        yj = y[j - 1]
        shift = x - sum(y[: j - 1], sympy.Integer(0))
        for i in range(0, n + 2 - j):
            T += comb(n + 1 - j, i) * lower * ((1 + yj) * (1 - yj) ** i - 1) * shift ** (n + 1 - i - j)
    return sympy.expand(T)


def evaluate_polynomial(expr, ring, values):
    """Evaluate a polynomial in x, y1, y2, ... at ring elements."""
    x = sympy.Symbol("x")
    gens = [x] + [sympy.Symbol(f"y{k}") for k in range(1, len(values))]
    poly = sympy.Poly(expr, *gens)
    out = ring.zero()
    powers = {}

    def power(idx, e):
        key = (idx, e)
        if key not in powers:
            powers[key] = values[idx] ** e
        return powers[key]

    for exps, coeff in poly.terms():
        if sum(exps) > ring.top:
            continue
        term = ring.scalar(int(coeff))
        for idx, e in enumerate(exps):
            if e:
                term = term * power(idx, e)
        out = out + term
    return out


def chern_TM_recursive(M):
    ring = build_ring(M)
    n = M.r - 1
    values = [ring.alpha()] + [ring.stair(k) for k in range(1, max(n, 1))]
    total = evaluate_polynomial(tangent_polynomial(n), ring, values[: max(n, 1)])
    return ChernData(M.r - 1, total)


def tangent_class(M):
    return chern_to_ch(chern_TM(M))


def cotangent_class(M):
    return dual(tangent_class(M))


# -- Todd classes ---------------------------------------------------------


def todd(cd):
    """Todd class from the universal series in the Chern classes."""
    ring = cd.ring
    f = todd_log_series(ring.top)
    ch = chern_to_ch(cd).ch
    log_td = ring.zero()
    for k in range(1, ring.top + 1):
        log_td = log_td + ch.component(k) * (f[k] * factorial(k))
    return ring_exp(log_td)


def todd_product(M):
    """Todd class of T_M as the product of x / (1 - e^{-x}) over its factors."""
    ring = build_ring(M)
    q = todd_series(ring.top)
    out = ring.one()
    for t in tangent_factors(ring):
        factor = ring.one()
        power = ring.one()
        for k in range(1, ring.top + 1):
            power = power * t
            factor = factor + power * q[k]
        out = out * factor
    return out


def _ring_cached(M, key, compute):
    cache = build_ring(M).cache
    if key not in cache:
        cache[key] = compute()
    return cache[key]


def todd_TM(M):
    """td(T_M); the universal and product forms must agree."""

    def compute():
        a = todd(chern_TM(M))
        if a != todd_product(M):
            raise ChowForgeError("Todd class: universal series and product form disagree")
        return a

    return _ring_cached(M, "todd", compute)


def chi_hrr(k, M=None):
    ring = k.ring
    M = ring.matroid if M is None else M
    return ring.pair_degree(k.ch, todd_TM(M))


def canonical_class(M):
    ring = build_ring(M)
    r = M.r
    x = ring.alpha() * (-r)
    for i in range(1, r - 1):
        x = x + ring.stair(i) * (r - i - 1)
    return DivisorClass.from_element(x)


def serre_check(k, M=None):
    ring = k.ring
    M = ring.matroid if M is None else M
    omega = KClass.line(canonical_class(M))
    lhs = chi_hrr(k, M)
    rhs = (-1) ** (M.r - 1) * chi_hrr(dual(k) * omega, M)
    return lhs == rhs


def chow_polynomial(M):
    """Graded dimensions from (-1)^p chi(Omega^p), checked against linear algebra."""
    ring = build_ring(M)
    omega = cotangent_class(M)
    coeffs = []
    for p in range(M.r):
        value = (-1) ** p * chi_hrr(exterior_power(omega, p), M)
        if value.denominator != 1 or value < 0:
            raise ChowForgeError(f"Chow polynomial coefficient {value} in degree {p} is not a nonnegative integer")
        coeffs.append(int(value))
    if coeffs != ring.dims:
        raise ChowForgeError(f"Chow polynomial {coeffs} disagrees with graded dimensions {ring.dims}")
    return coeffs


# -- exceptional isomorphism on line bundles ------------------------------


def alpha_flats(M):
    """Flats F whose classes alpha_F form a basis of A^1: rank >= 2, including E."""
    lat = M.lattice
    return [F for k in range(2, M.r + 1) for F in lat.flats_by_rank[k]]


def _alpha_basis(M):
    return _ring_cached(M, "alpha_basis", lambda: _compute_alpha_basis(M))


def _compute_alpha_basis(M):
    ring = build_ring(M)
    flats = alpha_flats(M)
    dim = ring.dims[1] if ring.top >= 1 else 0
    elems = [ring.alpha_S(F) for F in flats]
    if len(flats) != dim:
        raise ChowForgeError("alpha_F classes do not match the dimension of A^1")
    A = flint.fmpq_mat(dim, dim)
    for j, e in enumerate(elems):
        for i, c in enumerate(e.comps[1]):
            A[i, j] = c
    return flats, elems, A.inv() if dim else A


def alpha_coordinates(D):
    """Integer coefficients c_F with D = sum c_F alpha_F."""
    M = D.matroid
    flats, _, Ainv = _alpha_basis(M)
    if not flats:
        return {}
    x = D.element()
    v = flint.fmpq_mat(len(flats), 1, x.comps[1])
    sol = Ainv * v
    out = {}
    for k, F in enumerate(flats):
        c = to_fraction(sol[k, 0])
        if c.denominator != 1:
            raise PreconditionError(
                "divisor has no integral expression in the alpha_F classes", flat=list(M.to_labels(F))
            )
        if c:
            out[F] = int(c)
    return out


def _neg_log_one_minus(M, F):
    return _ring_cached(M, ("neg_log", F), lambda: _compute_neg_log(M, F))


def _compute_neg_log(M, F):
    ring = build_ring(M)
    a = ring.alpha_S(F)
    out = ring.zero()
    power = ring.one()
    for k in range(1, ring.top + 1):
        power = power * a
        out = out + power * Fraction(1, k)
    return out


def zeta_line(D):
    """zeta(D) = prod (1 - alpha_F)^(-c_F) for D = sum c_F alpha_F."""
    M = D.matroid
    ring = build_ring(M)
    coords = alpha_coordinates(D)
    log = ring.zero()
    for F, c in coords.items():
        log = log + _neg_log_one_minus(M, F) * c
    return ring_exp(log)


def _alpha_geometric(M):
    return _ring_cached(M, "alpha_geometric", lambda: _compute_alpha_geometric(M))


def _compute_alpha_geometric(M):
    ring = build_ring(M)
    a = ring.alpha()
    out = ring.one()
    power = ring.one()
    for _ in range(ring.top):
        power = power * a
        out = out + power
    return out


def chi_zeta(D):
    M = D.matroid
    ring = build_ring(M)
    return ring.pair_degree(zeta_line(D), _alpha_geometric(M))


def chi_line_hrr(D):
    return chi_hrr(KClass.line(D), D.matroid)


def check_rank(M, lo):
    if M.r < lo:
        raise RankError(f"matroid rank {M.r} below {lo}")
