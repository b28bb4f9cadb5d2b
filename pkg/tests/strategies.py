"""Hypothesis strategies shared by the suites."""

from fractions import Fraction

from hypothesis import strategies as st

from beliefchange.logic import And, Bottom, Iff, Implies, Language, Letter, Not, Or, Top
from beliefchange.lprob import ConstraintSet, LinearConstraint
from beliefchange.prob import ProbFunction

LANGS = {n: Language.of(*"pqr"[:n]) for n in (1, 2, 3)}


def languages(max_n=3, min_n=1):
    return st.sampled_from([LANGS[n] for n in range(min_n, max_n + 1)])


def sentences(lang, max_leaves=6):
    leaves = st.sampled_from([Letter(x) for x in lang.letters] + [Top(), Bottom()])
    return st.recursive(
        leaves,
        lambda ch: st.one_of(
            st.builds(Not, ch),
            st.builds(And, ch, ch),
            st.builds(Or, ch, ch),
            st.builds(Implies, ch, ch),
            st.builds(Iff, ch, ch),
        ),
        max_leaves=max_leaves,
    )


@st.composite
def points(draw, lang, support=None, high=6):
    """Rational probability functions, optionally restricted to a support event."""
    N = lang.num_atoms
    allowed = [i for i in range(N) if support is None or (support >> i) & 1]
    counts = [0] * N
    for i in allowed:
        counts[i] = draw(st.integers(0, high))
    if not any(counts):
        counts[allowed[0]] = 1
    total = sum(counts)
    return ProbFunction(lang, tuple(Fraction(c, total) for c in counts))


def constraint_through(lang, coeffs, relation, anchor, slack):
    value = sum((Fraction(c) * m for c, m in zip(coeffs, anchor.mass)), Fraction(0))
    rhs = value + slack if relation == "<=" else value - slack if relation == ">=" else value
    terms = " + ".join(f"{c}*P({lang.atom_label(i)})" for i, c in enumerate(coeffs) if c)
    return LinearConstraint(tuple(Fraction(c) for c in coeffs), relation, rhs, f"{terms or 0} {relation} {rhs}")


@st.composite
def constraints_at(draw, lang, anchor, coeff_range=2):
    """A random constraint satisfied by ``anchor``."""
    coeffs = draw(st.lists(st.integers(-coeff_range, coeff_range), min_size=lang.num_atoms, max_size=lang.num_atoms))
    relation = draw(st.sampled_from(["=", "<=", ">="]))
    slack = Fraction(0) if relation == "=" else draw(st.sampled_from([Fraction(0), Fraction(1, 4), Fraction(1, 2)]))
    return constraint_through(lang, coeffs, relation, anchor, slack)


@st.composite
def constraint_sets(draw, lang, anchor=None, max_size=3):
    """``(S, anchor)`` with ``anchor`` a member of the polytope of ``S``."""
    anchor = anchor or draw(points(lang))
    k = draw(st.integers(0, max_size))
    cs = tuple(draw(constraints_at(lang, anchor)) for _ in range(k))
    return ConstraintSet(lang, cs), anchor
