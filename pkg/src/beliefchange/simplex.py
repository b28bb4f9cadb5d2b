"""Two-phase tableau simplex over exact rationals, Bland's anti-cycling rule.

Solves ``min/max c.x  s.t.  A x (<=|=|>=) b,  x >= 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    x: tuple[Fraction, ...] | None = None


class _Tableau:
    def __init__(self, rows, basis, ncols):
        self.rows = rows  # each row: ncols coefficients followed by rhs
        self.basis = basis
        self.ncols = ncols
        self.obj = None  # reduced-cost row, same layout; last entry is -value

    def set_objective(self, cost):
        obj = list(cost) + [ZERO]
        for r, bv in zip(self.rows, self.basis):
            cb = obj[bv]
            if cb:
                for j, v in enumerate(r):
                    if v:
                        obj[j] -= cb * v
        self.obj = obj

    def pivot(self, i, j):
        row = self.rows[i]
        piv = row[j]
        if piv != ONE:
            row = [v / piv for v in row]
            self.rows[i] = row
        nz = [(k, v) for k, v in enumerate(row) if v]
        for r_idx, r in enumerate(self.rows):
            if r_idx == i:
                continue
            f = r[j]
            if f:
                for k, v in nz:
                    r[k] -= f * v
        f = self.obj[j]
        if f:
            for k, v in nz:
                self.obj[k] -= f * v
        self.basis[i] = j

    def run(self, allowed):
        """Minimise the current objective; ``allowed`` masks enterable columns."""
        while True:
            enter = next(
                (j for j in range(self.ncols) if allowed[j] and self.obj[j] < 0), None
            )
            if enter is None:
                return OPTIMAL
            best = None
            for i, r in enumerate(self.rows):
                a = r[enter]
                if a > 0:
                    ratio = r[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def solve_lp(
    cost: Sequence,
    A: Sequence[Sequence],
    senses: Sequence[str],
    b: Sequence,
    maximize: bool = False,
) -> LPResult:
    nvar = len(cost)
    cost = [Fraction(c) for c in cost]
    rows_in = []
    for a, sense, rhs in zip(A, senses, b):
        a = [Fraction(v) for v in a]
        rhs = Fraction(rhs)
        if len(a) != nvar:
            raise ValueError("constraint row length does not match objective")
        if sense not in ("<=", ">=", "="):
            raise ValueError(f"unknown relation {sense!r}")
        if rhs < 0:
            a = [-v for v in a]
            rhs = -rhs
            sense = {"<=": ">=", ">=": "<=", "=": "="}[sense]
        rows_in.append((a, sense, rhs))

    n_slack = sum(1 for _, s, _ in rows_in if s != "=")
    n_art = sum(1 for _, s, _ in rows_in if s != "<=")
    ncols = nvar + n_slack + n_art
    art_start = nvar + n_slack
    rows = []
    basis = []
    s_idx = nvar
    a_idx = art_start
    for a, sense, rhs in rows_in:
        row = a + [ZERO] * (n_slack + n_art) + [rhs]
        if sense == "<=":
            row[s_idx] = ONE
            basis.append(s_idx)
            s_idx += 1
        else:
            if sense == ">=":
                row[s_idx] = -ONE
                s_idx += 1
            row[a_idx] = ONE
            basis.append(a_idx)
            a_idx += 1
        rows.append(row)

    tab = _Tableau(rows, basis, ncols)
    if n_art:
        tab.set_objective([ZERO] * art_start + [ONE] * n_art)
        tab.run([True] * ncols)
        if -tab.obj[-1] != 0:
            return LPResult(INFEASIBLE)
        # drive remaining (zero-level) artificials out of the basis
        i = 0
        while i < len(tab.rows):
            if tab.basis[i] >= art_start:
                r = tab.rows[i]
                j = next((j for j in range(art_start) if r[j] != 0), None)
                if j is None:
                    del tab.rows[i]
                    del tab.basis[i]
                    continue
                tab.pivot(i, j)
            i += 1
    allowed = [j < art_start for j in range(ncols)]
    sign = -1 if maximize else 1
    tab.set_objective([sign * c for c in cost] + [ZERO] * (ncols - nvar))
    status = tab.run(allowed)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [ZERO] * ncols
    for r, bv in zip(tab.rows, tab.basis):
        x[bv] = r[-1]
    x = tuple(x[:nvar])
    value = sum((c * v for c, v in zip(cost, x)), ZERO)
    return LPResult(OPTIMAL, value, x)
