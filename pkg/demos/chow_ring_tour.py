"""Walk through the Chow ring of the uniform matroid U(3,4).

Run: python3 demos/chow_ring_tour.py
"""
from chowforge import Matroid, build_ring, parse_divisor

M = Matroid.uniform(3, 4)
ring = build_ring(M)
print(f"{M}: {len(M.lattice.proper)} proper flats, graded dimensions {ring.dims}")

a, b = ring.alpha(), ring.beta()
print("deg(alpha^2) =", ring.degree(a * a))
print("deg(alpha beta) =", ring.degree(a * b))
print("deg(beta^2) =", ring.degree(b * b))

# self-intersections of the flat classes are negative
for F in ([1], [1, 2]):
    x = ring.x(F)
    print(f"deg(x{F}^2) =", ring.degree(x * x))

# incomparable flats multiply to zero
print("x{1} * x{2,3} =", ring.x([1]) * ring.x([2, 3]))

# a divisor written in the flat classes, then in normal form
D = parse_divisor(M, "2*alpha - x{2,3} - x{2,4} - x{1,3} - x{1,4}")
print("normal form of 2 alpha - x23 - x24 - x13 - x14:", D.element())
print("its top self-intersection:", ring.degree(D.element() ** 2))
