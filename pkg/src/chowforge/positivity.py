"""Nef, ample and big-and-nef tests by exact LPs, degree products, the
dragon-Hall-Rado criterion, fake-effective probing and Kawamata-Viehweg scans.

A divisor D = sum D_F x_F is changed within its class by the linear forms
J_e = sum_{F containing e0} x_F - sum_{F containing e} x_F, where e0 is the
first element.  Every LP below has one free variable per J_e.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from . import lp
from .chow import DivisorClass, build_ring, fraction_str
from .errors import CapacityError, ChowForgeError, PreconditionError, RankError
from .ktheory import KClass, chi_hrr, zeta_line

MAX_P1_GROUND_SET = 10


def _j_forms(M, masks):
    """Coefficient of each J_e on each mask: [e0 in S] - [e in S]."""
    others = list(range(1, M.n))
    return [[(S & 1) - (S >> e & 1) for e in others] for S in masks]


def _flag_key(M, flag):
    return tuple(sorted((M.to_mask(F) for F in flag), key=lambda F: (M.rank_mask(F), F)))


def insertable(M, flag, F):
    """True if F is not in the flag and is comparable with every member."""
    return all(F != G and (not F & ~G or not G & ~F) for G in flag)


@dataclass
class NefCertificate:
    """Per-flag representatives witnessing P2, P3 or ampleness."""

    property: str
    divisor: DivisorClass
    flags: dict = field(default_factory=dict)

    def verify(self):
        M = self.divisor.matroid
        ring = build_ring(M)
        target = self.divisor.element()
        for flag, coeffs in self.flags.items():
            if ring.linear(coeffs) != target:
                return False
            for F in ring.flats:
                c = coeffs.get(F, 0)
                if F in flag:
                    if c != 0:
                        return False
                elif self.property == "P2" or insertable(M, flag, F):
                    if c < 0 or (self.property == "ample" and c <= 0):
                        return False
        return True

    def to_json(self):
        M = self.divisor.matroid
        out = []
        for flag in sorted(self.flags, key=lambda f: (len(f), [M.to_labels(F) for F in f])):
            coeffs = self.flags[flag]
            out.append(
                {
                    "flag": [list(M.to_labels(F)) for F in flag],
                    "coeffs": {
                        "x{" + ",".join(map(str, M.to_labels(F))) + "}": fraction_str(c)
                        for F, c in sorted(coeffs.items(), key=lambda kv: (M.rank_mask(kv[0]), kv[0]))
                        if c
                    },
                }
            )
        return {"property": self.property, "flags": out}


@dataclass
class SubmodularLift:
    """Values c_S on all subsets with c_empty = c_E = 0."""

    divisor: DivisorClass
    values: dict

    def verify(self):
        M = self.divisor.matroid
        c = dict(self.values)
        c[0] = c.get(0, 0)
        c[M.full] = c.get(M.full, 0)
        if c[0] != 0 or c[M.full] != 0:
            return False
        for S in range(1 << M.n):
            for i in range(M.n):
                for j in range(i + 1, M.n):
                    if S >> i & 1 or S >> j & 1:
                        continue
                    a, b, ab = S | 1 << i, S | 1 << j, S | 1 << i | 1 << j
                    if c.get(a, 0) + c.get(b, 0) < c.get(ab, 0) + c.get(S, 0):
                        return False
        ring = build_ring(M)
        return ring.linear({F: c.get(F, 0) for F in ring.flats}) == self.divisor.element()


def _flag_lp(D, flag, nonneg, strict=False):
    """Representative of D vanishing on ``flag`` and >= 0 (or >= 1 after scaling) on ``nonneg``."""
    M = D.matroid
    ring = build_ring(M)
    flats = ring.flats
    J = _j_forms(M, flats)
    k = M.n - 1
    # variables: lambda_1..lambda_k (free), then the scale t when strict
    nvar = k + (1 if strict else 0)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    for F, jrow in zip(flats, J):
        d = D.coeffs.get(F, Fraction(0))
        if strict:
            row = list(jrow) + [d]
            base = 0
        else:
            row = list(jrow)
            base = d
        if F in flag:
            A_eq.append(row)
            b_eq.append(-base)
        elif F in nonneg:
            # c_F = base + row.x >= bound  <=>  -row.x <= base - bound
            A_ub.append([-v for v in row])
            b_ub.append(base - (1 if strict else 0))
    if strict:
        # cones are scale invariant, so t >= 1 loses nothing
        A_ub.append([0] * k + [-1])
        b_ub.append(-1)
    res = lp.solve([0] * nvar, A_ub, b_ub, A_eq, b_eq, free=range(k))
    if not res.feasible:
        return None
    x = res.x
    scale = x[k] if strict else 1
    coeffs = {}
    for F, jrow in zip(flats, J):
        if strict:
            c = (x[k] * D.coeffs.get(F, 0) + sum(a * b for a, b in zip(jrow, x))) / scale
        else:
            c = D.coeffs.get(F, 0) + sum(a * b for a, b in zip(jrow, x))
        if c:
            coeffs[F] = c
    return coeffs


def _all_flags(M):
    return [tuple(f) for f in M.flags()]


def p3_certificate(D, flag):
    """Coefficients for one flag under the P3 constraints, or None."""
    M = D.matroid
    flag = _flag_key(M, flag)
    ring = build_ring(M)
    nonneg = {F for F in ring.flats if insertable(M, flag, F)}
    return _flag_lp(D, set(flag), nonneg)


def _check_flags(D, prop):
    M = D.matroid
    ring = build_ring(M)
    cert = NefCertificate(prop, D)
    for flag in _all_flags(M):
        if prop == "P2":
            nonneg = set(ring.flats) - set(flag)
        else:
            nonneg = {F for F in ring.flats if insertable(M, flag, F)}
        coeffs = _flag_lp(D, set(flag), nonneg, strict=(prop == "ample"))
        if coeffs is None:
            return False, None
        cert.flags[flag] = coeffs
    return True, cert


def check_P3(D):
    return _check_flags(D, "P3")


def check_P2(D):
    return _check_flags(D, "P2")


def check_ample(D):
    return _check_flags(D, "ample")[0]


def is_nef(D):
    return check_P3(D)[0]


def check_P1(D):
    """Submodular lift of D to all subsets of E, if one exists.

    The J-span consists of the restrictions of modular functions vanishing on
    E, and adding a modular function keeps submodularity.  So the lift can be
    required to agree with the given coefficients on flats exactly, leaving
    only the non-flat subsets as unknowns.
    """
    M = D.matroid
    if M.n > MAX_P1_GROUND_SET:
        raise CapacityError(f"P1 test needs 2^n variables; n = {M.n} exceeds {MAX_P1_GROUND_SET}")
    ring = build_ring(M)
    fixed = {S: Fraction(0) for S in (0, M.full)}
    for F in ring.flats:
        fixed[F] = Fraction(D.coeffs.get(F, 0))
    unknown = [S for S in range(1 << M.n) if S not in fixed]
    pos = {S: t for t, S in enumerate(unknown)}
    A_ub, b_ub = [], []
    for S in range(1 << M.n):
        for i in range(M.n):
            if S >> i & 1:
                continue
            for j in range(i + 1, M.n):
                if S >> j & 1:
                    continue
                # c_{S+i+j} + c_S - c_{S+i} - c_{S+j} <= 0
                row = [0] * len(unknown)
                rhs = Fraction(0)
                for T, sgn in ((S | 1 << i | 1 << j, 1), (S, 1), (S | 1 << i, -1), (S | 1 << j, -1)):
                    if T in pos:
                        row[pos[T]] += sgn
                    else:
                        rhs -= sgn * fixed[T]
                if any(row):
                    A_ub.append(row)
                    b_ub.append(rhs)
                elif rhs < 0:
                    return False, None
    res = lp.solve([0] * len(unknown), A_ub, b_ub, free=range(len(unknown)))
    if not res.feasible:
        return False, None
    values = {S: v for S, v in fixed.items() if v}
    values.update({S: res.x[pos[S]] for S in unknown if res.x[pos[S]]})
    return True, SubmodularLift(D, values)


def degree_of_product(M, divisors):
    ring = build_ring(M)
    out = ring.one()
    for D in divisors:
        out = out * (D.element() if isinstance(D, DivisorClass) else D)
    return out


def mixed_degree(M, divisors):
    """deg(l_1 ... l_{r-1})."""
    if len(divisors) != M.r - 1:
        raise RankError(f"need exactly {M.r - 1} divisors, got {len(divisors)}")
    return build_ring(M).degree(degree_of_product(M, divisors))


def volume_polynomial(M, divisors, exponents):
    """Coefficient of prod t_i^{e_i} in deg((sum t_i l_i)^{r-1}) / (r-1)!."""
    if len(divisors) != len(exponents) or sum(exponents) != M.r - 1 or min(exponents, default=0) < 0:
        raise RankError("exponents must be nonnegative, one per divisor, summing to r - 1")
    ring = build_ring(M)
    prod = ring.one()
    denom = 1
    for D, e in zip(divisors, exponents):
        prod = prod * D.element() ** e
        denom *= factorial(e)
    return ring.degree(prod) / denom


def is_big_and_nef(D):
    M = D.matroid
    if not is_nef(D):
        return False
    return build_ring(M).degree(D.element() ** (M.r - 1)) > 0


def numerical_dimension(D):
    x = D.element()
    ring = x.ring
    power = ring.one()
    t = 0
    for k in range(1, ring.top + 1):
        power = power * x
        if power.is_zero():
            break
        t = k
    return t


def nef_product_expand(M, divisors):
    """Write l_1 ... l_k as a nonnegative combination of flag monomials.

    Returns a dict flag -> coefficient (flags as tuples of masks).
    """
    for D in divisors:
        if not is_nef(D):
            raise PreconditionError("every factor must be nef", divisor=repr(D))
    current = {(): Fraction(1)}
    for D in divisors:
        nxt = {}
        certs = {}
        for flag, lam in current.items():
            if flag not in certs:
                certs[flag] = p3_certificate(D, flag)
            coeffs = certs[flag]
            for F, c in coeffs.items():
                if F in flag or not insertable(M, flag, F):
                    continue
                new = _flag_key(M, flag + (F,))
                nxt[new] = nxt.get(new, 0) + lam * c
        current = {f: v for f, v in nxt.items() if v}
    return current


def flag_combination_element(M, combo):
    ring = build_ring(M)
    out = ring.zero()
    for flag, c in combo.items():
        out = out + ring.monomial([(F, 1) for F in flag], c)
    return out


def default_generators(M):
    """Distinct classes alpha_S and beta_S over all nonempty S."""
    ring = build_ring(M)
    seen = {}
    for S in range(1, M.full + 1):
        for e in (ring.alpha_S(S), ring.beta_S(S)):
            if e.is_zero():
                continue
            key = tuple(tuple(u) for u in e.comps)
            seen.setdefault(key, DivisorClass.from_element(e))
    return list(seen.values())


def fake_effective_probe(D, generators=None):
    """False if some deg(D l_1 ... l_{r-2}) < 0 over generator tuples; True otherwise.

    This is a one-sided test against a finite sample of nef classes.
    """
    M = D.matroid
    ring = build_ring(M)
    gens = default_generators(M) if generators is None else list(generators)
    x = D.element()
    for tup in combinations_with_replacement(range(len(gens)), M.r - 2):
        prod = x
        for t in tup:
            prod = prod * gens[t].element()
        if ring.degree(prod) < 0:
            return False
    return True


def _check_subsets(M, sets):
    if len(sets) != M.r - 1:
        raise RankError(f"need exactly {M.r - 1} subsets, got {len(sets)}")
    masks = [M.to_mask(S) for S in sets]
    if any(m == 0 for m in masks):
        raise ValueError("subsets must be nonempty")
    return masks


def deg_alpha_product(M, sets):
    """1 if the sets satisfy dragon-Hall-Rado, else 0 (checked against the Chow ring)."""
    masks = _check_subsets(M, sets)
    ring = build_ring(M)
    dhr = 1 if M.dragon_hall_rado(masks) else 0
    prod = ring.one()
    for S in masks:
        prod = prod * ring.alpha_S(S)
    if ring.degree(prod) != dhr:
        raise ChowForgeError("alpha product degree disagrees with the dragon-Hall-Rado test")
    return dhr


def beta_product_positive(M, sets):
    masks = _check_subsets(M, sets)
    ring = build_ring(M)
    prod = ring.one()
    for S in masks:
        prod = prod * ring.beta_S(S)
    positive = ring.degree(prod) > 0
    if positive != (deg_alpha_product(M, masks) > 0):
        raise ChowForgeError("beta product positivity disagrees with the dragon-Hall-Rado test")
    return positive


def kv_weak_scan(D):
    """(-1)^(r-1) deg zeta(-D) and whether it is nonnegative; D must be nef."""
    M = D.matroid
    if not is_nef(D):
        raise PreconditionError("divisor is not nef")
    value = (-1) ** (M.r - 1) * build_ring(M).top_degree(zeta_line(-D))
    return value >= 0, value


def kv_strong_scan(D):
    """(-1)^(r-1) chi(-D) and whether it is nonnegative; D must be big and nef."""
    M = D.matroid
    if not is_big_and_nef(D):
        raise PreconditionError("divisor is not big and nef")
    value = (-1) ** (M.r - 1) * chi_hrr(KClass.line(-D), M)
    return value >= 0, value


def rank3_kv_ingredients(D):
    """a = deg(alpha D), b_F = deg(D x_F) on rank-2 flats, and deg(D(D - alpha + S_1))."""
    M = D.matroid
    if M.r != 3:
        raise RankError("rank-3 matroid required")
    ring = build_ring(M)
    x = D.element()
    if x.is_zero():
        raise PreconditionError("divisor must be nonzero")
    if not is_nef(D):
        raise PreconditionError("divisor is not nef")
    a = ring.degree(ring.alpha() * x)
    b = {F: ring.degree(x * ring.x(F)) for F in M.lattice.flats_by_rank[2]}
    value = ring.degree(x * (x - ring.alpha() + ring.stair(1)))
    formula = a * (a - 1) - sum(v * (v - 1) for v in b.values())
    if value != formula or value < 0 or a <= 0 or min(b.values(), default=0) < 0:
        raise ChowForgeError("rank-3 degree formula failed", a=str(a), value=str(value))
    return a, b, value

