"""Credal sets (partial probabilistic models): constraining, extended conditioning, envelopes."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence, Union

from .errors import InconsistentError, NullEvidenceError
from .logic import (
    BeliefSet,
    Event,
    Language,
    Sentence,
    as_sentence,
    conjoin,
    models,
)
from .lprob import (
    MAX,
    MIN,
    ConstraintSet,
    LinearConstraint,
    feasible,
    indicator,
    optimize,
    parse_constraint,
)
from .oracle import DEFAULT_VERTEX_N, rational_nullspace, rational_rref, vertices
from .prob import ProbFunction
from .simplex import OPTIMAL, solve_lp

Query = Union[Sentence, str, Event]


@dataclass(frozen=True)
class PartialModel:
    """The polytope of probability functions satisfying ``base``."""

    base: ConstraintSet

    def __post_init__(self):
        if not feasible(self.base):
            raise InconsistentError("constraint set admits no probability function")

    @classmethod
    def ignorant(cls, lang: Language) -> "PartialModel":
        return cls(ConstraintSet(lang))

    @property
    def lang(self) -> Language:
        return self.base.lang


@dataclass(frozen=True)
class ConditionedModel:
    """``{P(. | evidence) : P in base, P(evidence) > 0}``, kept lazily."""

    base: ConstraintSet
    evidence: Sentence

    def __post_init__(self):
        top = optimize(self.base, indicator(self.lang, models(self.evidence, self.lang)), MAX)
        if top is None:
            raise InconsistentError("constraint set admits no probability function")
        if top == 0:
            raise NullEvidenceError(f"{self.evidence} has probability zero throughout the model")

    @property
    def lang(self) -> Language:
        return self.base.lang


Model = Union[PartialModel, ConditionedModel]


def _event(M: Model, q: Query) -> Event:
    return q if isinstance(q, int) else models(q, M.lang)


def embed_belief_set(K: BeliefSet) -> PartialModel:
    lang = K.lang
    outside = lang.full ^ K.atoms
    if not outside:
        return PartialModel.ignorant(lang)
    c = LinearConstraint.event_mass(lang, outside, "=", 0)
    c = LinearConstraint(c.coeffs, "=", 0, f"P({lang.event_sentence(outside)}) = 0")
    return PartialModel(ConstraintSet(lang, (c,)))


def embed_prob(P: ProbFunction) -> PartialModel:
    lang = P.lang
    cs = []
    for i, m in enumerate(P.mass):
        c = LinearConstraint.event_mass(lang, 1 << i, "=", m)
        cs.append(LinearConstraint(c.coeffs, "=", m, f"P({lang.atom_label(i)}) = {m}"))
    return PartialModel(ConstraintSet(lang, tuple(cs)))


def as_constraint(item: Sentence | LinearConstraint | str, lang: Language) -> LinearConstraint:
    """A sentence becomes ``P(phi) = 1``; strings containing ``P(`` are constraints."""
    if isinstance(item, LinearConstraint):
        return item
    if isinstance(item, str) and "P" in item and "(" in item and any(r in item for r in "=<>≤≥"):
        return parse_constraint(item, lang)
    return LinearConstraint.certain(as_sentence(item, lang), lang)


def constrain(M: Model, item: Sentence | LinearConstraint | str) -> PartialModel:
    """Keep the members of ``M`` satisfying ``item``.

    A conditioned model is first materialised with :func:`as_constraints`.
    """
    base = M.base if isinstance(M, PartialModel) else as_constraints(M)
    c = as_constraint(item, M.lang)
    new = base.add(c)
    if not feasible(new):
        raise InconsistentError(f"constraining with {c} leaves no probability function")
    return PartialModel(new)


def condition_extended(M: Model, phi: Sentence | str) -> ConditionedModel:
    phi = as_sentence(phi, M.lang)
    if isinstance(M, ConditionedModel):
        return ConditionedModel(M.base, conjoin(M.evidence, phi))
    return ConditionedModel(M.base, phi)


def _fractional_optimum(M: ConditionedModel, objective: Sequence[Fraction], sense: str) -> Fraction:
    """Optimise ``objective . P / P(evidence)`` by the Charnes-Cooper substitution.

    With ``y = t * P`` and ``t = 1 / P(evidence)`` the ratio becomes the linear
    objective ``objective . y`` under ``y . evidence = 1`` and ``sum y = t``;
    the homogenised constraints keep ``y / t`` inside the polytope.
    """
    lang = M.lang
    N = lang.num_atoms
    ev = indicator(lang, models(M.evidence, lang))
    A, senses, b = [], [], []
    for c in M.base:
        A.append(list(c.coeffs) + [-c.rhs])
        senses.append(c.relation)
        b.append(Fraction(0))
    A.append([Fraction(1)] * N + [Fraction(-1)])
    senses.append("=")
    b.append(Fraction(0))
    A.append(list(ev) + [Fraction(0)])
    senses.append("=")
    b.append(Fraction(1))
    res = solve_lp(list(objective) + [Fraction(0)], A, senses, b, maximize=sense == MAX)
    if res.status != OPTIMAL:
        raise NullEvidenceError(f"{M.evidence} has probability zero throughout the model")
    return res.value


def _bound(M: Model, q: Query, sense: str) -> Fraction:
    event = _event(M, q)
    if isinstance(M, PartialModel):
        return optimize(M.base, indicator(M.lang, event), sense)
    event &= models(M.evidence, M.lang)
    return _fractional_optimum(M, indicator(M.lang, event), sense)


def lower(M: Model, q: Query) -> Fraction:
    return _bound(M, q, MIN)


def upper(M: Model, q: Query) -> Fraction:
    return _bound(M, q, MAX)


def bounds(M: Model, q: Query) -> tuple[Fraction, Fraction]:
    return lower(M, q), upper(M, q)


def accepted(M: Model, phi: Sentence | str) -> bool:
    return lower(M, phi) == 1


def top(M: Model) -> BeliefSet:
    """Largest belief set accepted throughout ``M``: atoms with positive upper probability."""
    atoms = sum(1 << a for a in range(M.lang.num_atoms) if upper(M, 1 << a) > 0)
    return BeliefSet(M.lang, atoms)


def entails(M: Model, c: LinearConstraint | str) -> bool:
    from .lprob import entails as _entails

    base = M.base if isinstance(M, PartialModel) else as_constraints(M)
    return _entails(base, c if isinstance(c, LinearConstraint) else parse_constraint(c, M.lang))


def conditioned_points(M: ConditionedModel, max_letters: int = DEFAULT_VERTEX_N) -> list[ProbFunction]:
    """Conditioned images of the base vertices that give the evidence positive mass."""
    ev = models(M.evidence, M.lang)
    out = []
    seen = set()
    for v in vertices(M.base, max_letters):
        pe = sum((m for i, m in enumerate(v.mass) if (ev >> i) & 1), Fraction(0))
        if pe > 0:
            mass = tuple(m / pe if (ev >> i) & 1 else Fraction(0) for i, m in enumerate(v.mass))
            if mass not in seen:
                seen.add(mass)
                out.append(ProbFunction(M.lang, mass))
    return out


def as_constraints(M: Model, max_letters: int = DEFAULT_VERTEX_N) -> ConstraintSet:
    """Linear description of the closed conditioned set.

    Conditioning maps a mixture of vertices to a mixture of the conditioned
    vertices (weights rescale by each vertex's evidence mass), so the
    conditioned set is exactly the convex hull of those images.
    """
    if isinstance(M, PartialModel):
        return M.base
    return hull_constraints(M.lang, conditioned_points(M, max_letters))


def hull_constraints(lang: Language, points: Sequence[ProbFunction]) -> ConstraintSet:
    """Equalities for the affine hull plus one inequality per facet of the convex hull."""
    if not points:
        raise InconsistentError("hull of no points")
    N = lang.num_atoms
    pts = [list(p.mass) for p in points]
    origin = pts[0]
    diffs = [[a - b for a, b in zip(p, origin)] for p in pts[1:]]
    span, _ = rational_rref(diffs) if diffs else ([], [])
    dim = len(span)
    out: list[LinearConstraint] = []
    for normal in rational_nullspace(span, N) if span else _identity(N):
        rhs = sum((a * b for a, b in zip(normal, origin)), Fraction(0))
        out.append(_tidy(LinearConstraint(tuple(normal), "=", rhs)))
    if dim > 0:
        seen = set()
        for chosen in combinations(range(len(pts)), dim):
            base_pt = pts[chosen[0]]
            rows = []
            for k in chosen[1:]:
                d = [a - b for a, b in zip(pts[k], base_pt)]
                rows.append([sum((s * x for s, x in zip(srow, d)), Fraction(0)) for srow in span])
            coeff_null = rational_nullspace(rows, dim) if rows else [[Fraction(1)]]
            if len(coeff_null) != 1:
                continue
            cvec = coeff_null[0]
            normal = [sum((c * srow[j] for c, srow in zip(cvec, span)), Fraction(0)) for j in range(N)]
            rhs = sum((a * b for a, b in zip(normal, base_pt)), Fraction(0))
            vals = [sum((a * b for a, b in zip(normal, p)), Fraction(0)) for p in pts]
            if all(v >= rhs for v in vals):
                rel = ">="
            elif all(v <= rhs for v in vals):
                rel = "<="
            else:
                continue
            c = _tidy(LinearConstraint(tuple(normal), rel, rhs))
            key = (c.coeffs, c.relation, c.rhs)
            if key not in seen:
                seen.add(key)
                out.append(c)
    return ConstraintSet(lang, tuple(_label(lang, c) for c in out))


def _identity(N):
    return [[Fraction(int(i == j)) for j in range(N)] for i in range(N)]


def _tidy(c: LinearConstraint) -> LinearConstraint:
    """Scale so the first nonzero coefficient is +1 (flipping the relation if needed)."""
    lead = next((x for x in c.coeffs if x != 0), None)
    if lead is None:
        return c
    rel = c.relation
    if lead < 0 and rel != "=":
        rel = "<=" if rel == ">=" else ">="
    return LinearConstraint(tuple(x / lead for x in c.coeffs), rel, c.rhs / lead)


def _label(lang: Language, c: LinearConstraint) -> LinearConstraint:
    terms = []
    for i, x in enumerate(c.coeffs):
        if x == 0:
            continue
        atom = f"P({lang.atom_label(i)})"
        if x == 1:
            terms.append(("+", atom))
        elif x == -1:
            terms.append(("-", atom))
        else:
            terms.append(("-" if x < 0 else "+", f"{abs(x)} * {atom}"))
    if not terms:
        text = f"0 {c.relation} {c.rhs}"
    else:
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        text = " ".join([head] + [f"{s} {t}" for s, t in terms[1:]]) + f" {c.relation} {c.rhs}"
    return LinearConstraint(c.coeffs, c.relation, c.rhs, text)


def ignorant(lang: Language) -> PartialModel:
    return PartialModel.ignorant(lang)


__all__ = [
    "PartialModel",
    "ConditionedModel",
    "embed_belief_set",
    "embed_prob",
    "constrain",
    "condition_extended",
    "lower",
    "upper",
    "bounds",
    "accepted",
    "top",
    "entails",
    "as_constraints",
    "hull_constraints",
    "conditioned_points",
    "ignorant",
]
