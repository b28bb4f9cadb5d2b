"""Brute-force reference computations.

Nothing here touches the simplex solver or the MCE solver: vertices come from
enumerating bases of the standard-form system, grid points from enumerating
all compositions of the resolution.  Tests and the CLI ``--oracle`` mode use
these to cross-check the fast paths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from .errors import CapExceededError, InconsistentError
from .lprob import ConstraintSet
from .prob import ProbFunction

DEFAULT_VERTEX_N = 4
DEFAULT_GRID_BUDGET = 20_000_000


# --------------------------------------------------------------------------
# exact linear algebra


def rational_rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and their pivot columns."""
    M = [[Fraction(v) for v in r] for r in rows]
    if not M:
        return [], []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        piv = M[r][c]
        M[r] = [v / piv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rational_nullspace(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : rows . x = 0}``."""
    R, pivots = rational_rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b) if x and y), Fraction(0))


# --------------------------------------------------------------------------
# vertices


def _standard_form(S: ConstraintSet):
    N = S.lang.num_atoms
    ineq = [c for c in S if c.relation != "="]
    width = N + len(ineq)
    rows = []
    k = 0
    for c in S:
        row = list(c.coeffs) + [Fraction(0)] * len(ineq)
        if c.relation != "=":
            row[N + k] = Fraction(1 if c.relation == "<=" else -1)
            k += 1
        rows.append(row + [c.rhs])
    rows.append([Fraction(1)] * N + [Fraction(0)] * len(ineq) + [Fraction(1)])
    return rows, width


def vertices(S: ConstraintSet, max_letters: int = DEFAULT_VERTEX_N) -> list[ProbFunction]:
    """All vertices of the polytope, by enumerating square bases of its standard form."""
    lang = S.lang
    if lang.n > max_letters:
        raise CapExceededError(f"vertex enumeration capped at {max_letters} letters")
    N = lang.num_atoms
    rows, width = _standard_form(S)
    R, pivots = rational_rref(rows)
    if pivots and pivots[-1] == width:
        return []  # inconsistent equality system
    m = len(R)
    A = [r[:width] for r in R]
    b = [r[width] for r in R]
    found = set()
    for cols in combinations(range(width), m):
        sub = [[A[i][c] for c in cols] + [b[i]] for i in range(m)]
        E, piv = rational_rref(sub)
        if len(piv) != m or piv[-1] == m:
            continue
        xb = [E[i][m] for i in range(m)]
        if any(v < 0 for v in xb):
            continue
        x = [Fraction(0)] * width
        for c, v in zip(cols, xb):
            x[c] = v
        found.add(tuple(x[:N]))
    return [ProbFunction(lang, v) for v in sorted(found, reverse=True)]


def vertex_bounds(S: ConstraintSet, objective: Sequence, verts=None) -> tuple[Fraction, Fraction] | None:
    verts = vertices(S) if verts is None else verts
    if not verts:
        return None
    vals = [_dot(objective, v.mass) for v in verts]
    return min(vals), max(vals)


def conditioned_vertex_bounds(
    S: ConstraintSet, query_event: int, evidence_event: int, verts=None
) -> tuple[Fraction, Fraction] | None:
    """Envelope of ``P(query | evidence)`` over the vertices with positive evidence.

    Conditioning is fractional-linear with a common denominator, so the image of
    the polytope is the hull of the conditioned vertices.
    """
    verts = vertices(S) if verts is None else verts
    vals = []
    for v in verts:
        pe = sum((m for i, m in enumerate(v.mass) if (evidence_event >> i) & 1), Fraction(0))
        if pe > 0:
            both = evidence_event & query_event
            pq = sum((m for i, m in enumerate(v.mass) if (both >> i) & 1), Fraction(0))
            vals.append(pq / pe)
    if not vals:
        return None
    return min(vals), max(vals)


# --------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class GridSpec:
    resolution: int
    budget: int = DEFAULT_GRID_BUDGET

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("grid resolution must be a positive integer")

    def size(self, num_atoms: int) -> int:
        return math.comb(self.resolution + num_atoms - 1, num_atoms - 1)


def compositions(total: int, parts: int) -> np.ndarray:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``, lexicographic."""
    if parts == 1:
        return np.array([[total]], dtype=np.int64)
    if parts == 2:
        first = np.arange(total + 1, dtype=np.int64)
        return np.stack([first, total - first], axis=1)
    if parts == 3:
        lengths = total + 1 - np.arange(total + 1, dtype=np.int64)
        first = np.repeat(np.arange(total + 1, dtype=np.int64), lengths)
        starts = np.repeat(np.cumsum(lengths) - lengths, lengths)
        second = np.arange(len(first), dtype=np.int64) - starts
        return np.stack([first, second, total - first - second], axis=1)
    blocks = []
    for first in range(total + 1):
        rest = compositions(total - first, parts - 1)
        blocks.append(np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest]))
    return np.vstack(blocks)


def _integer_checks(S: ConstraintSet, d: int):
    """Constraints rescaled to integers over the count vector ``k`` (mass = k / d)."""
    checks = []
    for c in S:
        scale = math.lcm(*(x.denominator for x in c.coeffs), 1)
        coeffs = np.array([int(x * scale) for x in c.coeffs], dtype=np.int64)
        target = c.rhs * d * scale
        if max(abs(int(v)) for v in coeffs) * d * len(coeffs) >= 2**62:
            raise CapExceededError("constraint coefficients too large for the integer grid check")
        checks.append((coeffs, c.relation, target))
    return checks


def _feasible_counts(counts: np.ndarray, checks) -> np.ndarray:
    keep = np.ones(len(counts), dtype=bool)
    for coeffs, rel, target in checks:
        lhs = counts @ coeffs
        if rel == "=":
            if target.denominator != 1:
                return np.zeros(len(counts), dtype=bool)
            keep &= lhs == int(target)
        elif rel == "<=":
            keep &= lhs <= math.floor(target)
        else:
            keep &= lhs >= math.ceil(target)
    return keep


def _chunks(S: ConstraintSet, g: GridSpec):
    N = S.lang.num_atoms
    if g.size(N) > g.budget:
        raise CapExceededError(
            f"grid of resolution {g.resolution} over {N} atoms exceeds budget {g.budget}"
        )
    d = g.resolution
    checks = _integer_checks(S, d)
    if N == 1:
        counts = np.array([[d]], dtype=np.int64)
        yield counts[_feasible_counts(counts, checks)]
        return
    for first in range(d + 1):
        rest = compositions(d - first, N - 1)
        counts = np.hstack([np.full((len(rest), 1), first, dtype=np.int64), rest])
        yield counts[_feasible_counts(counts, checks)]


def grid_points(S: ConstraintSet, g: GridSpec) -> list[ProbFunction]:
    d = g.resolution
    out = []
    for block in _chunks(S, g):
        for row in block:
            out.append(ProbFunction(S.lang, tuple(Fraction(int(k), d) for k in row)))
    return out


def kl_divergence(q: Sequence[float], p: Sequence[float]) -> float:
    """``sum q log(q / p)`` in nats, with ``0 log 0 = 0``; infinite off the support of ``p``."""
    total = 0.0
    for qi, pi in zip(q, p):
        if qi > 0:
            if pi <= 0:
                return math.inf
            total += qi * math.log(qi / pi)
    return total


def kl_grid_min(P: ProbFunction, S: ConstraintSet, g: GridSpec) -> tuple[ProbFunction, float]:
    """Grid point of ``S`` minimising ``I(Q, P)``; ties go to the lexicographically smallest."""
    d = g.resolution
    p = np.array([float(m) for m in P.mass])
    logp = np.where(p > 0, np.log(np.where(p > 0, p, 1.0)), -np.inf)
    best_val = math.inf
    best_row = None
    any_point = False
    for block in _chunks(S, g):
        if not len(block):
            continue
        any_point = True
        q = block / d
        with np.errstate(divide="ignore", invalid="ignore"):
            logq = np.where(q > 0, np.log(np.where(q > 0, q, 1.0)), 0.0)
            terms = np.where(q > 0, q * (logq - logp), 0.0)
        vals = terms.sum(axis=1)
        i = int(np.argmin(vals))
        if vals[i] < best_val or best_row is None:
            best_val = float(vals[i])
            best_row = block[i]
    if not any_point:
        raise InconsistentError("no grid point satisfies the constraints")
    Q = ProbFunction(P.lang, tuple(Fraction(int(k), d) for k in best_row))
    return Q, best_val
