"""Linear probabilistic constraints over atom masses and the LP queries on them.

A constraint is ``coeffs . mass  REL  rhs`` with ``REL`` one of ``=``, ``<=``,
``>=``.  A :class:`ConstraintSet` together with ``mass >= 0`` and
``sum(mass) == 1`` describes a polytope of probability functions (a credal
set); the set itself stands in for the probabilistic belief set of that
polytope, with consequence decided semantically by linear programming.

Constraint grammar::

    constraint := lincomb REL lincomb          REL in  =  <=  >=
    lincomb    := terms built from rational literals, P(sentence), + - * /
                  (products and quotients must have a constant side)
    P(phi | psi) = c                            conditional sugar

Inside ``P(...)`` a ``|`` with whitespace on both sides separates the
conditional's event from its condition; a bare ``|`` is disjunction, so
``P(p | p|q)`` reads "probability of p given p or q".  The conditional form is
linearised as ``P(phi & psi) - c * P(psi) = 0``, which also admits
``P(psi) = 0``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import InconsistentError, ParseError
from .logic import Event, Language, Sentence, as_sentence, iter_atoms, models, parse_sentence
from .prob import ProbFunction, as_fraction, parse_rational
from .simplex import INFEASIBLE, OPTIMAL, LPResult, solve_lp

RELATIONS = ("=", "<=", ">=")
MIN, MAX = "min", "max"


@dataclass(frozen=True)
class LinearConstraint:
    coeffs: tuple[Fraction, ...]
    relation: str
    rhs: Fraction
    source_text: str = ""

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(as_fraction(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", as_fraction(self.rhs))
        if self.relation not in RELATIONS:
            raise ValueError(f"unknown relation {self.relation!r}")

    def __eq__(self, other):
        if not isinstance(other, LinearConstraint):
            return NotImplemented
        return (self.coeffs, self.relation, self.rhs) == (
            other.coeffs,
            other.relation,
            other.rhs,
        )

    def __hash__(self):
        return hash((self.coeffs, self.relation, self.rhs))

    def value(self, mass: Sequence[Fraction]) -> Fraction:
        return sum((c * m for c, m in zip(self.coeffs, mass) if c), Fraction(0))

    def holds(self, mass: Sequence[Fraction]) -> bool:
        v = self.value(mass)
        if self.relation == "=":
            return v == self.rhs
        if self.relation == "<=":
            return v <= self.rhs
        return v >= self.rhs

    def __str__(self):
        if self.source_text:
            return self.source_text
        terms = [f"{c}*a{i}" for i, c in enumerate(self.coeffs) if c]
        return f"{' + '.join(terms) or '0'} {self.relation} {self.rhs}"

    @classmethod
    def event_mass(cls, lang: Language, event: Event, relation: str, value) -> "LinearConstraint":
        coeffs = tuple(Fraction((event >> i) & 1) for i in range(lang.num_atoms))
        return cls(coeffs, relation, as_fraction(value))

    @classmethod
    def certain(cls, phi: Sentence | str, lang: Language) -> "LinearConstraint":
        """``P(phi) = 1``: how a plain sentence enters as a constraint."""
        phi = as_sentence(phi, lang)
        c = cls.event_mass(lang, models(phi, lang), "=", 1)
        return cls(c.coeffs, "=", c.rhs, f"P({phi}) = 1")


@dataclass(frozen=True)
class ConstraintSet:
    lang: Language
    constraints: tuple[LinearConstraint, ...] = ()

    def __post_init__(self):
        cs = tuple(self.constraints)
        object.__setattr__(self, "constraints", cs)
        for c in cs:
            if len(c.coeffs) != self.lang.num_atoms:
                raise ValueError("constraint does not match the language size")

    @classmethod
    def parse(cls, lang: Language, lines: Iterable[str]) -> "ConstraintSet":
        return cls(lang, tuple(parse_constraint(t, lang) for t in lines))

    def __iter__(self) -> Iterator[LinearConstraint]:
        return iter(self.constraints)

    def __len__(self):
        return len(self.constraints)

    def add(self, *more: LinearConstraint | str) -> "ConstraintSet":
        extra = tuple(
            parse_constraint(c, self.lang) if isinstance(c, str) else c for c in more
        )
        return ConstraintSet(self.lang, self.constraints + extra)

    def __or__(self, other: "ConstraintSet") -> "ConstraintSet":
        if other.lang != self.lang:
            raise ValueError("constraint sets over different languages")
        return ConstraintSet(self.lang, self.constraints + other.constraints)


# --------------------------------------------------------------------------
# Parsing

_TOK_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?|\.\d+)|(?P<prob>P\s*\()|(?P<rel><=|>=|=|≤|≥)"
    r"|(?P<op>[-+*/()])|(?P<bad>\S))"
)


@dataclass
class _Form:
    vec: list[Fraction]
    const: Fraction
    cond: tuple[Event, Event] | None = None

    @property
    def is_const(self) -> bool:
        return self.cond is None and not any(self.vec)


class _ConstraintParser:
    def __init__(self, text: str, lang: Language):
        self.text = text
        self.lang = lang
        self.N = lang.num_atoms
        self.tokens = self._tokenize()
        self.i = 0

    def _err(self, msg, pos=None):
        return ParseError(msg, self.text, pos)

    def _tokenize(self):
        text = self.text
        toks = []
        pos = 0
        while pos < len(text):
            m = _TOK_RE.match(text, pos)
            if m is None:
                break
            kind = m.lastgroup
            start = m.start(kind)
            if kind == "bad":
                raise self._err(f"unexpected character {m.group(kind)!r}", start)
            if kind == "prob":
                depth = 1
                j = m.end()
                while j < len(text) and depth:
                    if text[j] == "(":
                        depth += 1
                    elif text[j] == ")":
                        depth -= 1
                    j += 1
                if depth:
                    raise self._err("unclosed P(", start)
                toks.append(("prob", (text[m.end() : j - 1], m.end()), start))
                pos = j
                continue
            value = m.group(kind)
            if kind == "rel":
                value = {"≤": "<=", "≥": ">="}.get(value, value)
            toks.append((kind, value, start))
            pos = m.end()
        toks.append(("end", None, len(text)))
        return toks

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        t = self.tokens[self.i]
        self.i += 1
        return t

    def parse(self) -> LinearConstraint:
        lhs = self.expr()
        tok = self.take()
        if tok[0] != "rel":
            raise self._err("expected a relation (=, <=, >=)", tok[2])
        rel = tok[1]
        rhs = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise self._err(f"unexpected {tok[1]!r} after constraint", tok[2])
        if rhs.cond is not None:
            raise self._err("a conditional term must stand alone on the left-hand side")
        if lhs.cond is not None:
            if rel != "=" or not rhs.is_const:
                raise self._err("a conditional term is only allowed as 'P(a | b) = c'")
            both, given = lhs.cond
            c = rhs.const
            coeffs = [
                Fraction((both >> i) & 1) - c * ((given >> i) & 1) for i in range(self.N)
            ]
            return LinearConstraint(tuple(coeffs), "=", Fraction(0), self.text.strip())
        coeffs = tuple(a - b for a, b in zip(lhs.vec, rhs.vec))
        return LinearConstraint(coeffs, rel, rhs.const - lhs.const, self.text.strip())

    def expr(self) -> _Form:
        out = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            right = self.term()
            self._no_cond(out, right)
            sign = 1 if op == "+" else -1
            out = _Form(
                [a + sign * b for a, b in zip(out.vec, right.vec)],
                out.const + sign * right.const,
            )
        return out

    def term(self) -> _Form:
        out = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            right = self.factor()
            self._no_cond(out, right)
            if op == "*":
                if out.is_const:
                    out, right = right, out
                if not right.is_const:
                    raise self._err("nonlinear expression: product of probability terms", pos)
                k = right.const
            else:
                if not right.is_const:
                    raise self._err("nonlinear expression: division by a probability term", pos)
                if right.const == 0:
                    raise self._err("division by zero", pos)
                k = 1 / right.const
            out = _Form([a * k for a in out.vec], out.const * k)
        return out

    def factor(self) -> _Form:
        kind, value, pos = self.take()
        if kind == "op" and value in ("+", "-"):
            f = self.factor()
            if value == "-":
                self._no_cond(f)
                f = _Form([-a for a in f.vec], -f.const)
            return f
        if kind == "num":
            lit = value
            # a/b with literal operands binds as a single rational literal
            if (
                self.peek()[1] == "/"
                and self.tokens[self.i + 1][0] == "num"
                and "." not in lit
                and "." not in self.tokens[self.i + 1][1]
            ):
                self.take()
                lit = f"{lit}/{self.take()[1]}"
            try:
                c = parse_rational(lit)
            except ParseError:
                raise self._err(f"bad rational literal {lit!r}", pos) from None
            return _Form([Fraction(0)] * self.N, c)
        if kind == "prob":
            inner, start = value
            return self._prob_term(inner, start)
        if kind == "op" and value == "(":
            f = self.expr()
            if self.peek()[1] != ")":
                raise self._err("expected ')'", self.peek()[2])
            self.take()
            return f
        if kind == "end":
            raise self._err("unexpected end of constraint", pos)
        raise self._err(f"unexpected {value!r}", pos)

    def _prob_term(self, inner: str, start: int) -> _Form:
        split = _conditional_bar(inner)
        try:
            if split is None:
                event = models(parse_sentence(inner, self.lang), self.lang)
                vec = [Fraction((event >> i) & 1) for i in range(self.N)]
                return _Form(vec, Fraction(0))
            a = models(parse_sentence(inner[:split], self.lang), self.lang)
            b = models(parse_sentence(inner[split + 1 :], self.lang), self.lang)
        except ParseError as exc:
            pos = None if exc.position is None else start + exc.position
            raise ParseError(f"in P(...): {exc.reason}", self.text, pos) from None
        return _Form([Fraction(0)] * self.N, Fraction(0), (a & b, b))

    def _no_cond(self, *forms):
        if any(f.cond is not None for f in forms):
            raise self._err("a conditional term must stand alone on the left-hand side")


def _conditional_bar(inner: str) -> int | None:
    depth = 0
    for i, ch in enumerate(inner):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif (
            ch == "|"
            and depth == 0
            and 0 < i < len(inner) - 1
            and inner[i - 1].isspace()
            and inner[i + 1].isspace()
        ):
            return i
    return None


def parse_constraint(text: str, lang: Language) -> LinearConstraint:
    """Parse e.g. ``"P(p & q) = 1/2"`` or ``"P(p) - P(q) <= 0.1"``."""
    return _ConstraintParser(text, lang).parse()


def parse_constraint_file(text: str, lang: Language | None = None) -> ConstraintSet:
    """Model file: ``letters p q r`` header then one constraint per line; ``#`` comments."""
    constraints = []
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if lines and lines[0][1].split(None, 1)[0].rstrip(":") in ("letters", "language"):
        lineno, header = lines.pop(0)
        try:
            lang = parse_letters(header)
        except ValueError as exc:
            raise ParseError(str(exc), header, line=lineno) from None
    if lang is None:
        raise ParseError("model file needs a 'letters ...' header")
    for lineno, line in lines:
        try:
            constraints.append(parse_constraint(line, lang))
        except ParseError as exc:
            raise ParseError(exc.reason, line, exc.position, line=lineno) from None
    return ConstraintSet(lang, tuple(constraints))


def parse_letters(header: str) -> Language:
    parts = header.split(None, 1)
    body = parts[1] if len(parts) > 1 else ""
    names = [t for t in re.split(r"[\s,]+", body) if t]
    return Language(tuple(names))


# --------------------------------------------------------------------------
# Semantics


def satisfies(P: ProbFunction, S: ConstraintSet) -> bool:
    return all(c.holds(P.mass) for c in S)


def _rows(S: ConstraintSet):
    N = S.lang.num_atoms
    A = [list(c.coeffs) for c in S] + [[Fraction(1)] * N]
    senses = [c.relation for c in S] + ["="]
    b = [c.rhs for c in S] + [Fraction(1)]
    return A, senses, b


def solve(S: ConstraintSet, objective: Sequence, sense: str = MAX) -> LPResult:
    """Optimise ``objective . mass`` over the polytope, returning the optimal point too."""
    if sense not in (MIN, MAX):
        raise ValueError(f"sense must be 'min' or 'max', not {sense!r}")
    if len(objective) != S.lang.num_atoms:
        raise ValueError("objective length does not match the language")
    A, senses, b = _rows(S)
    return solve_lp(list(objective), A, senses, b, maximize=sense == MAX)


def optimize(S: ConstraintSet, objective: Sequence, sense: str = MAX) -> Fraction | None:
    """Exact optimum of a linear objective over the polytope; ``None`` when it is empty."""
    res = solve(S, objective, sense)
    if res.status == INFEASIBLE:
        return None
    assert res.status == OPTIMAL, "a bounded polytope cannot be unbounded"
    return res.value


def indicator(lang: Language, event: Event) -> tuple[Fraction, ...]:
    return tuple(Fraction((event >> i) & 1) for i in range(lang.num_atoms))


def feasible(S: ConstraintSet) -> bool:
    return optimize(S, [0] * S.lang.num_atoms, MAX) is not None


def entails(S: ConstraintSet, c: LinearConstraint | str) -> bool:
    """Whether ``c`` holds at every point of the polytope of ``S``."""
    if isinstance(c, str):
        c = parse_constraint(c, S.lang)
    if c.relation in ("=", "<="):
        hi = optimize(S, c.coeffs, MAX)
        if hi is None:
            raise InconsistentError("entailment from an inconsistent constraint set")
        if hi > c.rhs:
            return False
    if c.relation in ("=", ">="):
        lo = optimize(S, c.coeffs, MIN)
        if lo is None:
            raise InconsistentError("entailment from an inconsistent constraint set")
        if lo < c.rhs:
            return False
    return True


def event_bounds(S: ConstraintSet, event: Event) -> tuple[Fraction, Fraction] | None:
    obj = indicator(S.lang, event)
    lo = optimize(S, obj, MIN)
    if lo is None:
        return None
    return lo, optimize(S, obj, MAX)


def atom_is_possible(S: ConstraintSet, atom: int) -> bool:
    hi = optimize(S, indicator(S.lang, 1 << atom), MAX)
    return hi is not None and hi > 0


def forced_zero_atoms(S: ConstraintSet) -> Event:
    """Atoms whose mass is zero at every point of the (nonempty) polytope."""
    return sum(
        1 << a for a in range(S.lang.num_atoms) if not atom_is_possible(S, a)
    )


__all__ = [
    "LinearConstraint",
    "ConstraintSet",
    "parse_constraint",
    "parse_constraint_file",
    "parse_letters",
    "satisfies",
    "solve",
    "optimize",
    "feasible",
    "entails",
    "indicator",
    "event_bounds",
    "forced_zero_atoms",
    "iter_atoms",
    "MIN",
    "MAX",
]
