"""Exact rational linear programming: two-phase tableau simplex with Bland's rule.

Problems are given as

    minimize (or maximize) c.x
    subject to A_ub x <= b_ub,  A_eq x = b_eq,
               x_j >= 0 unless j is listed in ``free``.

All arithmetic is exact: the tableau works over flint's fmpq for speed and
results are returned as ``fractions.Fraction``.
"""
from dataclasses import dataclass, field
from fractions import Fraction

from flint import fmpq

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: list = field(default_factory=list)
    value: Fraction = None

    @property
    def feasible(self):
        return self.status != INFEASIBLE


def _q(v):
    v = Fraction(v)
    return fmpq(v.numerator, v.denominator)


def _frac(q):
    return Fraction(int(q.p), int(q.q))


def _eliminate(target, row, f):
    """target -= f * row, dropping zeros."""
    for j, v in row.items():
        w = target.get(j, 0) - f * v
        if w:
            target[j] = w
        else:
            target.pop(j, None)


class _Tableau:
    """Sparse tableau: each row is a dict column -> fmpq."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.obj = {}
        self.obj_rhs = fmpq(0)

    def set_cost(self, cost):
        """Store reduced costs c_j - c_B B^{-1} A_j for the current basis."""
        obj = {j: fmpq(v) for j, v in cost.items() if v}
        val = fmpq(0)
        for i, b in enumerate(self.basis):
            cb = obj.get(b)
            if cb:
                for j, v in self.rows[i].items():
                    obj[j] = obj.get(j, 0) - cb * v
                val -= cb * self.rhs[i]
        self.obj = {j: v for j, v in obj.items() if v}
        self.obj_rhs = val

    def pivot(self, r, col):
        row = self.rows[r]
        p = row[col]
        if p != 1:
            inv = 1 / p
            row = {j: v * inv for j, v in row.items()}
            self.rows[r] = row
            self.rhs[r] *= inv
        b = self.rhs[r]
        for i, other in enumerate(self.rows):
            f = other.get(col) if i != r else None
            if f:
                _eliminate(other, row, f)
                self.rhs[i] -= f * b
        f = self.obj.get(col)
        if f:
            _eliminate(self.obj, row, f)
            self.obj_rhs -= f * b
        self.basis[r] = col

    def run(self, allowed, locked=frozenset()):
        """Minimize the stored objective over columns in ``allowed``; False if unbounded.

        Rows in ``locked`` hold free variables; they never leave the basis.
        """
        while True:
            entering = min((j for j, v in self.obj.items() if v < 0 and allowed(j)), default=None)
            if entering is None:
                return True
            best = None
            for i, row in enumerate(self.rows):
                if i in locked:
                    continue
                a = row.get(entering)
                if a is not None and a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return False
            self.pivot(best[1], entering)


def solve(c, A_ub=(), b_ub=(), A_eq=(), b_eq=(), free=(), maximize=False):
    """Exact LP; see the module docstring for the problem form."""
    nvar = len(c)
    free = sorted(set(free))
    m_ub = len(A_ub)
    # columns 0..nvar-1 are the variables, then one slack per inequality
    ncol = nvar + m_ub
    rows, rhs = [], []
    for i, (coeffs, b) in enumerate(list(zip(A_ub, b_ub)) + list(zip(A_eq, b_eq))):
        row = {j: _q(v) for j, v in enumerate(coeffs) if v}
        if i < m_ub:
            row[nvar + i] = fmpq(1)
        rows.append(row)
        rhs.append(_q(b))
    tab = _Tableau(rows, rhs, [None] * len(rows))
    sign = -1 if maximize else 1
    tab.obj = {j: sign * _q(v) for j, v in enumerate(c) if v}

    # Gauss-Jordan step: each free variable becomes basic in its own locked row
    locked = set()
    for j in free:
        r = min((i for i, row in enumerate(rows) if i not in locked and j in row), default=None)
        if r is not None:
            tab.pivot(r, j)
            locked.add(r)
    loose = [j for j in free if tab.basis.count(j) == 0]

    # remaining rows: give each a basic slack or an artificial variable
    art = []
    for i, row in enumerate(tab.rows):
        if i in locked:
            continue
        if tab.rhs[i] < 0:
            tab.rows[i] = row = {j: -v for j, v in row.items()}
            tab.rhs[i] = -tab.rhs[i]
        slack = nvar + i if i < m_ub else None
        if slack is not None and row.get(slack) == 1:
            tab.basis[i] = slack
        else:
            a = ncol + len(art)
            row[a] = fmpq(1)
            tab.basis[i] = a
            art.append(a)
    cost = tab.obj
    n_real = ncol
    fixed_cols = set(free)
    if art:
        tab.set_cost({a: 1 for a in art})
        tab.run(lambda j: j not in fixed_cols, locked)
        if tab.obj_rhs != 0:
            return LPResult(INFEASIBLE)
        # drive artificial variables out of the basis, dropping redundant rows
        keep = []
        for i in range(len(tab.rows)):
            if tab.basis[i] >= n_real:
                col = min((j for j in tab.rows[i] if j < n_real and j not in fixed_cols), default=None)
                if col is None:
                    continue
                tab.pivot(i, col)
            keep.append(i)
        locked = {k for k, i in enumerate(keep) if i in locked}
        tab.rows = [{j: v for j, v in tab.rows[i].items() if j < n_real} for i in keep]
        tab.rhs = [tab.rhs[i] for i in keep]
        tab.basis = [tab.basis[i] for i in keep]
    tab.set_cost(cost)
    bounded = tab.run(lambda j: j < n_real and j not in fixed_cols, locked)
    if bounded and any(tab.obj.get(j) for j in loose):
        # a free variable constrained by nothing but itself
        bounded = False
    x = [Fraction(0)] * nvar
    for i, b in enumerate(tab.basis):
        if b < nvar:
            x[b] = _frac(tab.rhs[i])
    if not bounded:
        return LPResult(UNBOUNDED, x, None)
    value = sum((Fraction(cj) * xj for cj, xj in zip(c, x)), Fraction(0))
    return LPResult(OPTIMAL, x, value)


def feasible_point(A_ub=(), b_ub=(), A_eq=(), b_eq=(), nvar=None, free=()):
    """A feasible point of the constraint system, or None."""
    if nvar is None:
        nvar = len((list(A_ub) + list(A_eq))[0])
    res = solve([0] * nvar, A_ub, b_ub, A_eq, b_eq, free=free)
    return res.x if res.feasible else None
