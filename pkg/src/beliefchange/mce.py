"""Minimum cross-entropy (I-projection) updating under linear constraints.

The primal ``min_Q sum Q log(Q / P)`` over a polytope is solved through its
dual: for multipliers ``lam`` the minimiser is the exponential tilt
``Q_j ~ P_j exp(-lam . a_j)``, and ``lam`` minimises the convex function
``log Z(lam) + lam . b`` with sign constraints on inequality multipliers.  A
projected Newton method with backtracking handles that.

Before solving, atoms that carry no mass anywhere on the feasible set (within
the support of ``P``) are removed by exact LP; otherwise the dual optimum
drifts to infinity.  Masses are floats from here on; the constraint data and
the feasibility decisions stay exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from .errors import InconsistentError, SolverError
from .lprob import MAX, ConstraintSet, LinearConstraint, feasible, indicator, optimize, satisfies
from .logic import Event, Language
from .prob import ProbFunction, uniform

Dist = Union[ProbFunction, Sequence[float]]


class InfiniteObjectiveError(InconsistentError):
    """Every feasible point puts mass where the prior has none."""


@dataclass(frozen=True)
class MceConfig:
    residual_tol: float = 1e-10
    objective_tol: float = 1e-12
    max_iters: int = 1_000_000


@dataclass(frozen=True)
class MceSolution:
    lang: Language
    result: tuple[float, ...]
    objective: float  # nats
    iterations: int
    residual: float
    unit: str = field(default="nats", repr=False)

    def prob(self, event: Event) -> float:
        return math.fsum(m for i, m in enumerate(self.result) if (event >> i) & 1)

    def as_array(self) -> np.ndarray:
        return np.array(self.result)


def _prior_array(P: Dist, lang: Language) -> np.ndarray:
    if isinstance(P, ProbFunction):
        if P.lang != lang:
            raise ValueError("prior and constraints live on different languages")
        p = np.array([float(m) for m in P.mass])
    else:
        p = np.asarray(P, dtype=float)
        if p.shape != (lang.num_atoms,):
            raise ValueError(f"prior needs {lang.num_atoms} masses")
        if (p < 0).any() or abs(p.sum() - 1) > 1e-9:
            raise ValueError("prior is not a probability vector")
    return p / p.sum()


def constraint_residual(S: ConstraintSet, q: Sequence[float]) -> float:
    """Largest violation of any constraint (and of normalisation) at the float point ``q``."""
    q = np.asarray(q, dtype=float)
    worst = abs(q.sum() - 1.0)
    for c in S:
        v = float(np.dot([float(x) for x in c.coeffs], q)) - float(c.rhs)
        if c.relation == "=":
            worst = max(worst, abs(v))
        elif c.relation == "<=":
            worst = max(worst, v)
        else:
            worst = max(worst, -v)
    return max(worst, float(-q.min(initial=0.0)))


def kl(q: Sequence[float], p: Sequence[float]) -> float:
    total = 0.0
    for qi, pi in zip(map(float, q), map(float, p)):
        if qi > 0:
            if pi <= 0:
                return math.inf
            total += qi * math.log(qi / pi)
    return total


def _active_atoms(S: ConstraintSet, support: Event) -> list[int]:
    lang = S.lang
    outside = lang.full ^ support
    restricted = S
    if outside:
        restricted = S.add(LinearConstraint.event_mass(lang, outside, "=", 0))
    if not feasible(S):
        raise InconsistentError("constraint set admits no probability function")
    if not feasible(restricted):
        raise InfiniteObjectiveError(
            "every feasible distribution puts mass outside the prior's support"
        )
    return [
        a
        for a in range(lang.num_atoms)
        if (support >> a) & 1 and optimize(restricted, indicator(lang, 1 << a), MAX) > 0
    ]


class _Dual:
    def __init__(self, logp, A, b, is_ineq):
        self.logp = logp
        self.A = A
        self.b = b
        self.is_ineq = is_ineq

    def tilt(self, lam):
        z = self.logp - lam @ self.A
        zmax = z.max()
        w = np.exp(z - zmax)
        s = w.sum()
        return w / s, zmax + math.log(s)

    def value(self, lam):
        _, logz = self.tilt(lam)
        return logz + lam @ self.b


def _solve_dual(dual: _Dual, cfg: MceConfig):
    m = len(dual.b)
    lam = np.zeros(m)
    A, b, ineq = dual.A, dual.b, dual.is_ineq
    q, logz = dual.tilt(lam)
    val = logz + lam @ b
    prev = math.inf
    for it in range(1, cfg.max_iters + 1):
        Aq = A @ q
        grad = b - Aq
        viol = np.where(ineq, np.maximum(-grad, 0.0), np.abs(grad))
        slack = np.where(ineq, np.abs(lam * grad), 0.0)
        resid = float(max(viol.max(initial=0.0), slack.max(initial=0.0)))
        if resid <= cfg.residual_tol and abs(prev - val) < cfg.objective_tol:
            return q, it, resid
        blocked = ineq & (lam <= 1e-15) & (grad > 0)
        free = ~blocked
        H = (A * q) @ A.T - np.outer(Aq, Aq)
        d = np.zeros(m)
        if free.any():
            Hff = H[np.ix_(free, free)]
            gf = grad[free]
            step, *_ = np.linalg.lstsq(Hff + 1e-14 * np.eye(len(gf)), -gf, rcond=None)
            if not np.all(np.isfinite(step)) or gf @ step >= 0:
                step = -gf
            d[free] = step
        alpha = 1.0
        while True:
            trial = lam + alpha * d
            trial[ineq] = np.maximum(trial[ineq], 0.0)
            tq, tlogz = dual.tilt(trial)
            tval = tlogz + trial @ b
            # slack of a few ulps so Newton steps below roundoff are still taken
            armijo = val + 1e-4 * grad @ (trial - lam) + 1e-14 * (1.0 + abs(val))
            if tval <= armijo or alpha < 1e-20:
                break
            alpha *= 0.5
        prev = val
        if alpha < 1e-20 and tval > val:
            # no further descent available at double precision
            return q, it, resid
        lam, q, val = trial, tq, tval
    raise SolverError(f"MCE dual did not converge in {cfg.max_iters} iterations")


def mce_update(P: Dist, S: ConstraintSet, config: MceConfig | None = None) -> MceSolution:
    """The distribution satisfying ``S`` closest to ``P`` in cross entropy ``I(Q, P)``.

    Atoms outside the support of ``P`` are held at zero (``0 log 0 = 0``).
    """
    cfg = config or MceConfig()
    lang = S.lang
    p = _prior_array(P, lang)
    if isinstance(P, ProbFunction):
        support = P.support
    else:
        support = sum(1 << i for i, v in enumerate(p) if v > 0)
    active = _active_atoms(S, support)

    rows, rhs, ineq = [], [], []
    for c in S:
        coeffs = [float(c.coeffs[a]) for a in active]
        if not any(coeffs):
            continue  # consistent by the feasibility check above
        sign = -1.0 if c.relation == ">=" else 1.0
        rows.append([sign * x for x in coeffs])
        rhs.append(sign * float(c.rhs))
        ineq.append(c.relation != "=")
    pa = p[active]
    logp = np.log(pa / pa.sum())
    if rows:
        dual = _Dual(logp, np.array(rows), np.array(rhs), np.array(ineq, dtype=bool))
        qa, iters, _ = _solve_dual(dual, cfg)
    else:
        qa, iters = pa / pa.sum(), 0
    q = np.zeros(lang.num_atoms)
    q[active] = qa
    resid = constraint_residual(S, q)
    if resid > cfg.residual_tol * 100:
        raise SolverError(f"MCE solution violates constraints by {resid:.3g}")
    return MceSolution(lang, tuple(float(v) for v in q), kl(q, p), iters, resid)


def maxent(S: ConstraintSet, config: MceConfig | None = None) -> MceSolution:
    return mce_update(uniform(S.lang), S, config)


def entropy_bits(q: Sequence[float]) -> float:
    return -math.fsum(v * math.log2(v) for v in q if v > 0)


@dataclass(frozen=True)
class PreservationWitness:
    start: ProbFunction
    after_first: MceSolution
    after_second: MceSolution
    violation: float


def _rationalize_point(S: ConstraintSet, q: Sequence[float]) -> ProbFunction | None:
    mass = [Fraction(v).limit_denominator(10**6) for v in q]
    total = sum(mass)
    if total == 0:
        return None
    mass = [m / total for m in mass]
    P = ProbFunction(S.lang, tuple(mass))
    return P if satisfies(P, S) else None


def mce_preservation_witness(
    model,
    phi: ConstraintSet,
    psi: ConstraintSet,
    config: MceConfig | None = None,
    tol: float = 1e-6,
) -> PreservationWitness | None:
    """Search the maxent point and vertices of ``model`` for a start that loses ``phi``.

    Updating by ``phi`` then ``psi`` should keep ``phi`` if MCE were preservative
    over sets; a returned witness shows the second update broke it.
    """
    from .oracle import vertices

    base: ConstraintSet = model.base
    if not feasible(base | phi | psi):
        raise InconsistentError("model, phi and psi are not jointly consistent")
    candidates = []
    centre = _rationalize_point(base, maxent(base, config).result)
    if centre is not None:
        candidates.append(centre)
    candidates += [v for v in vertices(base) if v not in candidates]
    for start in candidates:
        try:
            first = mce_update(start, phi, config)
            second = mce_update(first.result, psi, config)
        except InfiniteObjectiveError:
            continue
        violation = constraint_residual(phi, second.result)
        if violation > tol:
            return PreservationWitness(start, first, second, violation)
    return None
