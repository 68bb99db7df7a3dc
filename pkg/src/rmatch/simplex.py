"""Exact simplex over :class:`fractions.Fraction` with Bland's rule.

Solves ``max c.x  s.t.  A x <= b, x >= 0`` on a condensed (Tucker) tableau:
one row per constraint, one column per nonbasic variable.  Variables
``0 .. n-1`` are the structural ones and ``n .. n+m-1`` the slacks; Bland's
rule always picks the smallest label among eligible candidates, which rules
out cycling.

Three routes, chosen from the data:

* ``b >= 0`` -- the slack basis is primal feasible; run primal simplex.
* ``c <= 0`` -- the slack basis is dual feasible; run dual simplex.
* otherwise -- phase one with an auxiliary variable, then primal simplex.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from .errors import Infeasible, Unbounded

ZERO = Fraction(0)


@dataclass
class LPResult:
    value: Fraction
    x: List[Fraction]
    pivots: int
    route: str


class Tableau:
    def __init__(self, A, b, c):
        self.m = len(b)
        self.n = len(c)
        self.T = [[Fraction(v) for v in row] for row in A]
        self.b = [Fraction(v) for v in b]
        self.c = [Fraction(v) for v in c]
        self.v = ZERO
        self.nonbasic = list(range(self.n))
        self.basic = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, i: int, j: int) -> None:
        T, b, c = self.T, self.b, self.c
        row = T[i]
        p = row[j]
        inv = 1 / p
        for k in range(self.n):
            row[k] = inv if k == j else row[k] * inv
        b[i] *= inv
        # incidence matrices are sparse; only nonzero pivot-row entries matter
        nz = [k for k in range(self.n) if k != j and row[k]]
        for l in range(self.m):
            if l == i:
                continue
            other = T[l]
            f = other[j]
            if not f:
                continue
            for k in nz:
                other[k] -= f * row[k]
            other[j] = -f * inv
            b[l] -= f * b[i]
        f = c[j]
        if f:
            for k in nz:
                c[k] -= f * row[k]
            c[j] = -f * inv
            self.v += f * b[i]
        self.basic[i], self.nonbasic[j] = self.nonbasic[j], self.basic[i]
        self.pivots += 1

    def primal(self) -> None:
        while True:
            entering = [j for j in range(self.n) if self.c[j] > 0]
            if not entering:
                return
            j = min(entering, key=lambda k: self.nonbasic[k])
            best = None
            for i in range(self.m):
                a = self.T[i][j]
                if a > 0:
                    key = (self.b[i] / a, self.basic[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded above")
            self.pivot(best[1], j)

    def dual(self) -> None:
        while True:
            leaving = [i for i in range(self.m) if self.b[i] < 0]
            if not leaving:
                return
            i = min(leaving, key=lambda k: self.basic[k])
            best = None
            for j in range(self.n):
                a = self.T[i][j]
                if a < 0:
                    key = (self.c[j] / a, self.nonbasic[j])
                    if best is None or key < best[0]:
                        best = (key, j)
            if best is None:
                raise Infeasible(f"constraint row of variable {self.basic[i]} cannot be satisfied")
            self.pivot(i, best[1])

    def solution(self, count: int) -> List[Fraction]:
        x = [ZERO] * count
        for i, var in enumerate(self.basic):
            if var < count:
                x[var] = self.b[i]
        return x


def _phase_one(A, b, c) -> Tableau:
    """Feasible basis via an auxiliary variable ``x0`` subtracted from every row."""
    m, n = len(b), len(c)
    tab = Tableau([[-1] + list(row) for row in A], b, [-1] + [0] * n)
    # label the auxiliary variable n + m so the structural labels stay 0 .. n-1
    tab.nonbasic = [n + m] + list(range(n))
    tab.basic = list(range(n, n + m))
    i = min(range(m), key=lambda k: (tab.b[k], tab.basic[k]))
    tab.pivot(i, 0)
    tab.primal()
    if tab.v < 0:
        raise Infeasible("linear program has no feasible point")
    aux = n + m
    if aux in tab.basic:
        # degenerate: x0 = 0 but basic; swap it out on any nonzero entry
        i = tab.basic.index(aux)
        j = next((k for k in range(tab.n) if tab.T[i][k] != 0), None)
        if j is None:
            # the row reads x0 = 0 identically; it carries no constraint
            del tab.T[i], tab.b[i], tab.basic[i]
            tab.m -= 1
        else:
            tab.pivot(i, j)
    if aux in tab.nonbasic:
        col = tab.nonbasic.index(aux)
        for row in tab.T:
            del row[col]
        del tab.nonbasic[col]
        tab.n -= 1
    # restate the real objective in terms of the current nonbasic variables
    cost = [Fraction(v) for v in c]
    tab.c = [ZERO] * tab.n
    tab.v = ZERO
    for j, var in enumerate(tab.nonbasic):
        if var < n:
            tab.c[j] += cost[var]
    for i, var in enumerate(tab.basic):
        if var < n and cost[var]:
            tab.v += cost[var] * tab.b[i]
            for j in range(tab.n):
                tab.c[j] -= cost[var] * tab.T[i][j]
    return tab


def maximize(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    """Exact optimum of ``max c.x`` subject to ``A x <= b`` and ``x >= 0``.

    Raises :class:`Infeasible` or :class:`Unbounded` accordingly.
    """
    n = len(c)
    if any(len(row) != n for row in A) or len(A) != len(b):
        raise ValueError("inconsistent LP dimensions")
    if all(Fraction(v) >= 0 for v in b):
        tab, route = Tableau(A, b, c), "primal"
        tab.primal()
    elif all(Fraction(v) <= 0 for v in c):
        tab, route = Tableau(A, b, c), "dual"
        tab.dual()
    else:
        tab, route = _phase_one(A, b, c), "two-phase"
        tab.primal()
    return LPResult(tab.v, tab.solution(n), tab.pivots, route)
