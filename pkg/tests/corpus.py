"""Matroids shared by the test modules."""
import random
from functools import lru_cache

from chowforge.matroid import Matroid, random_matroid


def uniform_family(max_n=6):
    return [Matroid.uniform(r, n) for n in range(1, max_n + 1) for r in range(1, n + 1)]


def boolean_family(max_n=5):
    return [Matroid.boolean(n) for n in range(1, max_n + 1)]


@lru_cache(maxsize=None)
def random_family(count=20, seed=2024):
    """Bases-defined loopless matroids with n <= 6, drawn as column matroids over GF(3)."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.randint(4, 6)
        r = rng.randint(2, min(n - 1, 4))
        M = random_matroid(n, r, rng)
        B = Matroid.from_bases(M.n, [M.to_labels(b) for b in M.bases()], name=f"rand{len(out)}({r},{n})")
        out.append(B)
    return tuple(out)


SMALL = [
    Matroid.uniform(2, 3),
    Matroid.uniform(3, 4),
    Matroid.uniform(3, 5),
    Matroid.boolean(4),
    Matroid.from_bases(4, [(1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], name="parallel(2,4)"),
]
