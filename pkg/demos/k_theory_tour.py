"""Euler characteristics of line bundles, computed two independent ways.

chi_zeta goes through the K-theoretic isomorphism, chi_hrr through
Hirzebruch-Riemann-Roch with the Todd class of the tangent class.

Run: python3 demos/k_theory_tour.py
"""
from chowforge import DivisorClass, KClass, Matroid, build_ring, chern_TM, chi_hrr, chi_zeta, todd

# the rank-3 family: l = k alpha - sum of x_{ij} with i <= k < j has l^2 = 0
for k in range(2, 6):
    M = Matroid.uniform(3, 2 * k)
    ring = build_ring(M)
    ell = ring.alpha() * k - sum(
        (ring.x([i, j]) for i in range(1, k + 1) for j in range(k + 1, 2 * k + 1)), ring.zero()
    )
    D = DivisorClass.from_element(ell)
    print(
        f"U(3,{2 * k}): deg(l^2) = {ring.degree(ell * ell)},"
        f" chi(-l) = {chi_zeta(-D)} (zeta), {chi_hrr(KClass.line(-ell), M)} (HRR)"
    )

M = Matroid.uniform(3, 5)
c = chern_TM(M)
print(f"\n{M}: c(T) = {c.total}")
print(f"{M}: td(T) = {todd(c)}")
