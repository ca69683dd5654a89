"""The three nef tests and where they separate.

P1: pullback of a nef divisor from the permutohedral variety (submodular lift).
P2: one nonnegative representative per flag, vanishing on the flag.
P3: as P2 but nonnegativity only on flats that can be inserted into the flag.

Run: python3 demos/positivity_tour.py
"""
from chowforge import Matroid, check_ample, check_P1, check_P2, check_P3, parse_divisor
from chowforge.positivity import is_big_and_nef, kv_weak_scan, rank3_kv_ingredients

cases = [
    (Matroid.uniform(3, 4), "2*alpha - x{2,3} - x{2,4} - x{1,3} - x{1,4}"),
    (Matroid.uniform(3, 6), "x{1} + x{2} + 2*x{1,2} + x{1,4} + x{2,5} + x{1,6} + x{2,6}"),
    (Matroid.uniform(3, 4), "alpha + beta"),
    (Matroid.uniform(3, 4), "-alpha"),
]
for M, text in cases:
    D = parse_divisor(M, text)
    flags = [check_P1(D)[0], check_P2(D)[0], check_P3(D)[0], check_ample(D)]
    print(f"{M} {text}: P1={flags[0]} P2={flags[1]} P3={flags[2]} ample={flags[3]}")

# a certificate for the P2 example, flag by flag
M = Matroid.uniform(3, 4)
D = parse_divisor(M, cases[0][1])
ok, cert = check_P2(D)
print("\nP2 certificate verifies:", cert.verify())
for entry in cert.to_json()["flags"][:3]:
    print("  flag", entry["flag"], "->", entry["coeffs"])

# rank-3 sign check behind the weak vanishing statement
D = parse_divisor(M, "2*alpha - x{1,2}")
print("\nbig and nef:", is_big_and_nef(D))
ok, value = kv_weak_scan(D)
print(f"(-1)^(r-1) deg zeta(-D) = {value}, nonnegative: {ok}")
a, b, value = rank3_kv_ingredients(D)
print("a =", a, " deg(D(D - alpha + S_1)) =", value)
