"""Invariant suite run on a single matroid.

Each check returns ``(passed, witness)``; the witness describes the first
offending input when a check fails.
"""
import random
import time
from itertools import combinations_with_replacement

from .chow import DivisorClass, alpha_beta_degree, build_ring, degree_recursive
from .ktheory import (
    KClass,
    alpha_flats,
    chern_TM,
    chern_TM_recursive,
    chi_hrr,
    chi_zeta,
    chow_polynomial,
    graded_dual,
    ring_exp,
    serre_check,
    todd,
    todd_product,
)
from .parse import render_divisor
from .positivity import is_nef


def random_divisor(M, rng, bound=2):
    """Random integral divisor as an integer combination of the alpha_F classes."""
    ring = build_ring(M)
    coeffs = {}
    for F in alpha_flats(M):
        c = rng.randint(-bound, bound)
        if c:
            for G, v in ring.alpha_S_coeffs(F).items():
                coeffs[G] = coeffs.get(G, 0) + c * v
    return DivisorClass(M, coeffs)


def random_nef_candidate(M, rng, perturb=2):
    """Positive alpha_S / beta_S combination plus up to ``perturb`` unit x_F changes.

    Without the perturbation the result is P1; with it the sample lands on both
    sides of the nef boundary, which is what implication tests need.
    """
    ring = build_ring(M)
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        S = rng.randint(1, M.full)
        src = ring.alpha_S_coeffs(S) if rng.random() < 0.5 else ring.beta_S_coeffs(S)
        c = rng.randint(1, 2)
        for F, v in src.items():
            coeffs[F] = coeffs.get(F, 0) + c * v
    for _ in range(rng.randint(0, perturb)):
        F = rng.choice(ring.flats)
        coeffs[F] = coeffs.get(F, 0) + rng.choice([-1, 1])
    return DivisorClass(M, {F: c for F, c in coeffs.items() if c})


def random_nef_divisor(M, rng, tries=100):
    """Rejection-sample a P3-nef divisor from random_nef_candidate."""
    for _ in range(tries):
        D = random_nef_candidate(M, rng)
        if is_nef(D):
            return D
    return random_nef_candidate(M, rng, perturb=0)


def random_kclass(M, rng, terms=3):
    ring = build_ring(M)
    ch = ring.zero()
    for _ in range(terms):
        ch = ch + ring_exp(random_divisor(M, rng).element()) * rng.choice([-2, -1, 1, 2])
    return KClass(ch)


def check_top_alpha(M):
    ring = build_ring(M)
    v = ring.degree(ring.alpha() ** (M.r - 1))
    return v == 1, None if v == 1 else str(v)


def check_key_valuative(M):
    ring = build_ring(M)
    a, b = ring.alpha(), ring.beta()
    for d in range(M.r):
        lhs = ring.degree(a ** (M.r - 1 - d) * b**d)
        rhs = alpha_beta_degree(M, d)
        if lhs != rhs:
            return False, {"d": d, "ring": str(lhs), "counts": str(rhs)}
    return True, None


def check_counting_lemma(M):
    for s in M.labels:
        for d in range(1, M.r):
            lhs = rhs = 0
            for sub in range(1 << d):
                ranks = [k + 1 for k in range(d) if sub >> k & 1]
                sign = (-1) ** len(ranks)
                rhs += sign * M.count_flags([], ranks)
                if d in ranks:
                    lhs += sign * M.count_flags([], ranks, avoid=s)
            if lhs != rhs:
                return False, {"s": s, "d": d}
    return True, None


def check_degree_algorithms(M, limit=None):
    """Rewriting degree versus the pullback recursion on chain monomials."""
    ring = build_ring(M)
    monos = ring.monos[ring.top]
    if limit is not None and len(monos) > limit:
        monos = monos[:: max(1, len(monos) // limit)]
    for mono in monos:
        chain = [(ring.flats[f], a) for f, a in mono]
        lhs = ring.degree(ring.from_monomial(mono))
        rhs = degree_recursive(M, 0, chain, 0)
        if lhs != rhs:
            return False, {"monomial": ring.monomial_key(mono), "ring": str(lhs), "recursive": str(rhs)}
    return True, None


def check_poincare(M):
    ring = build_ring(M)
    for d in range(ring.top + 1):
        G = ring.gram[d]
        if G.nrows() != G.ncols() or G.rank() != G.nrows():
            return False, {"degree": d}
        if G.transpose() != ring.gram[ring.top - d]:
            return False, {"degree": d, "reason": "not transpose"}
    return True, None


def check_vanishing(M):
    """x_F alpha^(r - rk F) = 0 and x_F beta^(rk F) = 0."""
    ring = build_ring(M)
    a, b = ring.alpha(), ring.beta()
    for F in ring.flats:
        k = M.rank_mask(F)
        x = ring.x(F)
        if not (x * a ** (M.r - k)).is_zero() or not (x * b**k).is_zero():
            return False, {"flat": list(M.to_labels(F))}
    return True, None


def check_chern_recursive(M):
    ok = chern_TM(M).total == chern_TM_recursive(M).total
    return ok, None


def check_chow_polynomial(M):
    try:
        coeffs = chow_polynomial(M)
    except Exception as exc:  # the function asserts agreement itself
        return False, str(exc)
    return True, {"coefficients": coeffs}


def check_todd_forms(M):
    ok = todd(chern_TM(M)) == todd_product(M)
    return ok, None


def check_todd_dual(M):
    """td(E) exp(-c_1(E)) equals the graded dual of td(E)."""
    cd = chern_TM(M)
    td = todd(cd)
    lhs = td * ring_exp(-cd.c(1))
    return lhs == graded_dual(td), None


def check_chi_minus_xF(M):
    ring = build_ring(M)
    for F in ring.flats:
        v = chi_zeta(DivisorClass(M, {F: -1}))
        if v != 0:
            return False, {"flat": list(M.to_labels(F)), "chi": str(v)}
    return True, None


def check_chi_pipelines(M, samples, rng):
    for _ in range(samples):
        D = random_divisor(M, rng)
        z = chi_zeta(D)
        h = chi_hrr(KClass.line(D), M)
        if z != h:
            return False, {"divisor": render_divisor(D), "chi_zeta": str(z), "chi_hrr": str(h)}
    return True, None


def check_serre(M, samples, rng):
    for _ in range(samples):
        k = random_kclass(M, rng)
        if not serre_check(k, M):
            return False, {"ch": k.ch.to_json()}
    return True, None


def check_beta_dhr(M, max_tuples=400):
    ring = build_ring(M)
    subsets = list(range(1, M.full + 1))
    count = 0
    # the product is commutative, so multisets cover every ordered tuple
    for tup in combinations_with_replacement(subsets, M.r - 1):
        count += 1
        if max_tuples is not None and count > max_tuples:
            break
        prod_a = ring.one()
        prod_b = ring.one()
        for S in tup:
            prod_a = prod_a * ring.alpha_S(S)
            prod_b = prod_b * ring.beta_S(S)
        dhr = M.dragon_hall_rado(tup) if tup else True
        da, db = ring.degree(prod_a), ring.degree(prod_b)
        if da != (1 if dhr else 0) or (db > 0) != dhr:
            return False, {"sets": [list(M.to_labels(S)) for S in tup], "deg_alpha": str(da), "deg_beta": str(db)}
    return True, None


def chi_beta(M, k, S=None):
    """chi(k beta_S) on M; S defaults to the whole ground set."""
    ring = build_ring(M)
    S = M.labels if S is None else S
    return chi_zeta(DivisorClass(M, {F: k * c for F, c in ring.beta_S_coeffs(S).items()}))


def check_beta_deletion_contraction(M, jmax=4):
    """chi(M, -j beta) = chi(M - i, -j beta) - sum_{k<=j} chi(M / i, -k beta)."""
    for i in M.labels:
        e = M.element(i)
        if M.is_coloop(i) or M.closure(1 << e) != 1 << e:
            continue
        Md, Mc = M.delete(i), M.contract([i])
        for j in range(1, jmax + 1):
            lhs = chi_beta(M, -j)
            rhs = chi_beta(Md, -j) - sum(chi_beta(Mc, -k) for k in range(1, j + 1))
            if lhs != rhs:
                return False, {"element": i, "j": j, "lhs": str(lhs), "rhs": str(rhs)}
    return True, None


def check_beta_restriction(M, kmax=3):
    """chi(k beta_S) = chi(k beta) on the restriction to S."""
    for S in range(1, M.full + 1):
        labels = M.to_labels(S)
        for k in range(-kmax, kmax + 1):
            if chi_beta(M, k, labels) != chi_beta(M.restrict(labels), k):
                return False, {"S": list(labels), "k": k}
    return True, None


def b_decomposition_instance(M, rng, max_a=3):
    """Random (n, [(F_i, a_i)]) over rank-one flats whose complement has full rank."""
    ring = build_ring(M)
    pool = [F for F in ring.flats if M.rank_mask(F) == 1 and M.rank_mask(M.full & ~F) == M.r]
    chosen = rng.sample(pool, rng.randint(0, len(pool))) if pool else []
    terms = [(F, rng.randint(1, max_a)) for F in chosen]
    n = sum(a for _, a in terms) + rng.randint(0, max_a)
    return max(n, 1), terms


def check_b_decomposition(M, samples, rng):
    """chi(-B) = chi(-n beta) - sum chi(-a_i beta) + sum chi(-a_i beta_{E - F_i})."""
    ring = build_ring(M)
    beta = ring.beta_S_coeffs(M.labels)
    for _ in range(samples):
        n, terms = b_decomposition_instance(M, rng)
        B = {F: n * c for F, c in beta.items()}
        for F, a in terms:
            B[F] = B.get(F, 0) - a
        lhs = chi_zeta(DivisorClass(M, {F: -c for F, c in B.items()}))
        rhs = chi_beta(M, -n)
        for F, a in terms:
            rhs += chi_beta(M, -a, M.to_labels(M.full & ~F)) - chi_beta(M, -a)
        if lhs != rhs:
            flats = [[list(M.to_labels(F)), a] for F, a in terms]
            return False, {"n": n, "terms": flats, "lhs": str(lhs), "rhs": str(rhs)}
    return True, None


def run_identities(M, samples=5, seed=0, degree_limit=2000):
    """Run the invariant suite; returns a list of result dicts in a fixed order."""
    rng = random.Random(seed)
    checks = [
        ("deg_alpha_top", lambda: check_top_alpha(M)),
        ("key_valuative", lambda: check_key_valuative(M)),
        ("counting_lemma", lambda: check_counting_lemma(M)),
        ("degree_two_algorithms", lambda: check_degree_algorithms(M, degree_limit)),
        ("poincare_pairing", lambda: check_poincare(M)),
        ("flat_vanishing", lambda: check_vanishing(M)),
        ("chern_product_vs_recursive", lambda: check_chern_recursive(M)),
        ("todd_universal_vs_product", lambda: check_todd_forms(M)),
        ("todd_dual", lambda: check_todd_dual(M)),
        ("chow_polynomial", lambda: check_chow_polynomial(M)),
        ("chi_minus_xF_zero", lambda: check_chi_minus_xF(M)),
        ("chi_zeta_vs_hrr", lambda: check_chi_pipelines(M, samples, rng)),
        ("serre_duality", lambda: check_serre(M, samples, rng)),
        ("beta_alpha_dhr", lambda: check_beta_dhr(M)),
        ("beta_deletion_contraction", lambda: check_beta_deletion_contraction(M)),
        ("beta_restriction", lambda: check_beta_restriction(M)),
        ("b_decomposition", lambda: check_b_decomposition(M, samples, rng)),
    ]
    out = []
    for name, fn in checks:
        t0 = time.perf_counter()
        passed, witness = fn()
        entry = {"identity": name, "passed": bool(passed), "ms": round(1000 * (time.perf_counter() - t0), 1)}
        if witness is not None:
            entry["witness"] = witness
        out.append(entry)
    return out

