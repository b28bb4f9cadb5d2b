"""Evidence-ledger scripts: parse, execute with the constrain-before-condition rule, report.

Script lines::

    letters p q r                       # language header (or pass letters explicitly)
    constrain <constraint | sentence>   # generic evidence about the prior
    condition <sentence>                # specific evidence
    jeffrey <sentence> : <rational>
    jeffrey-partition (<sentence>:<rational>) (<sentence>:<rational>) ...
    mce <constraint>[; <constraint>]*
    collapse maxent                     # pick the maxent member, switch to point mode
    query <expr>                        # lower s | upper s | accepted s | entails c
                                        # | top | uncertainty | ignorance | dist

Generic evidence always refines the retained prior.  When a ``constrain``
arrives after specific entries, it is added to the prior and every specific
entry is replayed on top, with a warning.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Union

import numpy as np

from . import credal, measures, oracle
from .credal import ConditionedModel, PartialModel
from .errors import BeliefChangeError, InconsistentError, ModeError, NullEvidenceError, ParseError
from .logic import Language, Sentence, models, parse_sentence
from .lprob import ConstraintSet, LinearConstraint, parse_constraint, parse_letters, satisfies
from .mce import MceConfig, entropy_bits, maxent, mce_update
from .prob import (
    ProbFunction,
    condition,
    format_distribution,
    jeffrey_binary,
    jeffrey_general,
    parse_rational,
)

GENERIC, SPECIFIC = "generic", "specific"
KINDS = ("constrain", "condition", "jeffrey", "jeffrey-partition", "mce", "collapse")
QUERY_KINDS = ("lower", "upper", "accepted", "entails", "top", "uncertainty", "ignorance", "dist")


@dataclass(frozen=True)
class Caps:
    vertex_n: int = oracle.DEFAULT_VERTEX_N
    event_n: int = measures.DEFAULT_EVENT_N


@dataclass(frozen=True)
class RunConfig:
    mce: MceConfig = field(default_factory=MceConfig)
    caps: Caps = field(default_factory=Caps)
    oracle: bool = False


@dataclass(frozen=True)
class LedgerEntry:
    kind: str
    payload: object
    tag: str
    index: int
    line: int
    text: str

    def to_json(self) -> dict:
        return {"index": self.index, "line": self.line, "kind": self.kind, "tag": self.tag, "text": self.text}


@dataclass(frozen=True)
class QueryLine:
    kind: str
    arg: object
    text: str
    line: int


@dataclass
class Script:
    lang: Language
    items: list  # LedgerEntry | QueryLine in file order


# --------------------------------------------------------------------------
# parsing

_QUERY_RE = re.compile(r"(\w+)\s*(.*)\Z", re.S)


def _strip_prob(text: str) -> str:
    """``P(s)`` -> ``s`` so queries accept either spelling."""
    t = text.strip()
    if t.startswith("P(") and t.endswith(")"):
        depth = 0
        for i, ch in enumerate(t[1:], 1):
            depth += ch == "("
            depth -= ch == ")"
            if depth == 0:
                return t[2:-1] if i == len(t) - 1 else t
    return t


def _split_weight(text: str) -> tuple[str, Fraction]:
    if ":" not in text:
        raise ParseError(f"expected '<sentence> : <rational>' in {text!r}")
    sent, weight = text.rsplit(":", 1)
    return sent.strip(), parse_rational(weight)


def _partition_groups(text: str) -> list[str]:
    groups, depth, start = [], 0, None
    for i, ch in enumerate(text):
        if ch == "(":
            if depth == 0:
                start = i + 1
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ParseError("unbalanced ')'", text, i)
            if depth == 0:
                groups.append(text[start:i])
        elif depth == 0 and not ch.isspace():
            raise ParseError(f"unexpected {ch!r} outside a (sentence:weight) group", text, i)
    if depth:
        raise ParseError("unbalanced '('", text)
    if not groups:
        raise ParseError("jeffrey-partition needs at least one (sentence:weight) group", text)
    return groups


def _constraint_or_sentence(text: str, lang: Language) -> LinearConstraint:
    if "P(" in text.replace(" ", "") or any(r in text for r in ("=", "<=", ">=")):
        return parse_constraint(text, lang)
    return LinearConstraint.certain(parse_sentence(text, lang), lang)


def _parse_query(text: str, lang: Language, lineno: int) -> QueryLine:
    m = _QUERY_RE.match(text.strip())
    if m is None or m.group(1) not in QUERY_KINDS:
        raise ParseError(f"unknown query {text.strip()!r}", text, line=lineno)
    kind, rest = m.group(1), m.group(2).strip()
    if kind in ("lower", "upper", "accepted"):
        arg = parse_sentence(_strip_prob(rest), lang)
    elif kind == "entails":
        arg = _constraint_or_sentence(rest, lang)
    else:
        if rest:
            raise ParseError(f"query {kind!r} takes no argument", text, line=lineno)
        arg = None
    return QueryLine(kind, arg, text.strip(), lineno)


def _parse_entry(kind: str, rest: str, lang: Language) -> object:
    if kind == "constrain":
        return _constraint_or_sentence(rest, lang)
    if kind == "condition":
        return parse_sentence(rest, lang)
    if kind == "jeffrey":
        sent, w = _split_weight(rest)
        if not 0 <= w <= 1:
            raise ParseError(f"Jeffrey weight {w} outside [0, 1]", rest)
        return parse_sentence(sent, lang), w
    if kind == "jeffrey-partition":
        return [
            (parse_sentence(s, lang), w) for s, w in map(_split_weight, _partition_groups(rest))
        ]
    if kind == "mce":
        parts = [p for p in rest.split(";") if p.strip()]
        if not parts:
            raise ParseError("mce needs at least one constraint", rest)
        return ConstraintSet(lang, tuple(_constraint_or_sentence(p, lang) for p in parts))
    if kind == "collapse":
        if rest != "maxent":
            raise ParseError("only 'collapse maxent' is supported", rest)
        return "maxent"
    raise ParseError(f"unknown entry kind {kind!r}")


def parse_script(text: str, lang: Language | None = None) -> Script:
    items: list = []
    n_entries = 0
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        try:
            if head.rstrip(":") in ("letters", "language"):
                if items:
                    raise ParseError("the letters header must precede all entries")
                lang = parse_letters(line)
                continue
            if lang is None:
                raise ParseError("no language: add a 'letters ...' header or pass letters")
            if head == "query":
                items.append(_parse_query(rest, lang, lineno))
                continue
            if head not in KINDS:
                raise ParseError(f"unknown entry kind {head!r}")
            payload = _parse_entry(head, rest, lang)
        except ParseError as exc:
            raise ParseError(exc.reason, line, exc.position, line=lineno) from None
        except ValueError as exc:
            raise ParseError(str(exc), line, line=lineno) from None
        tag = GENERIC if head == "constrain" else SPECIFIC
        items.append(LedgerEntry(head, payload, tag, n_entries, lineno, line))
        n_entries += 1
    if lang is None:
        raise ParseError("no language: add a 'letters ...' header or pass letters")
    return Script(lang, items)


# --------------------------------------------------------------------------
# point-mode helpers for float-backed distributions


def _snap(lang: Language, q, exact: ConstraintSet) -> ProbFunction | None:
    """A nearby exact distribution satisfying ``exact``, if one rounds out of ``q``."""
    mass = [Fraction(float(v)).limit_denominator(10**6) for v in q]
    if sum(mass) != 1 or max(abs(float(m) - float(v)) for m, v in zip(mass, q)) > 1e-9:
        return None
    P = ProbFunction(lang, tuple(mass))
    return P if satisfies(P, exact) else None


Point = Union[ProbFunction, np.ndarray]


def _float_mass(P: Point) -> np.ndarray:
    return np.array([float(m) for m in P.mass]) if isinstance(P, ProbFunction) else P


def _float_jeffrey(q: np.ndarray, cells, lang: Language) -> np.ndarray:
    out = np.zeros_like(q)
    seen = 0
    for event, w in cells:
        if event & seen:
            raise InconsistentError("Jeffrey cells must be mutually exclusive")
        seen |= event
        sel = np.array([(event >> i) & 1 for i in range(lang.num_atoms)], dtype=bool)
        total = q[sel].sum()
        if w == 0:
            continue
        if total <= 0:
            raise NullEvidenceError("Jeffrey cell has probability zero")
        out[sel] += float(w) * q[sel] / total
    if not math.isclose(sum(float(w) for _, w in cells), 1.0):
        raise InconsistentError("Jeffrey weights must sum to 1")
    return out


# --------------------------------------------------------------------------
# execution


class Session:
    def __init__(self, lang: Language, config: RunConfig | None = None):
        self.lang = lang
        self.config = config or RunConfig()
        self.generic: list[LedgerEntry] = []
        self.specific: list[LedgerEntry] = []
        self.ledger: list[LedgerEntry] = []
        self.warnings: list[str] = []
        self.answers: dict[str, object] = {}
        self.oracle_checks = 0
        self.oracle_max_dev = Fraction(0)
        self.state: Union[PartialModel, ConditionedModel, ProbFunction, np.ndarray] = PartialModel.ignorant(lang)

    @property
    def mode(self) -> str:
        return "credal" if isinstance(self.state, (PartialModel, ConditionedModel)) else "point"

    @property
    def prior(self) -> ConstraintSet:
        return ConstraintSet(self.lang, tuple(e.payload for e in self.generic))

    # entries ---------------------------------------------------------------

    def apply(self, entry: LedgerEntry) -> None:
        self.ledger.append(entry)
        if entry.tag == GENERIC:
            self.generic.append(entry)
            if self.specific:
                self.warnings.append(
                    f"line {entry.line}: generic evidence after specific evidence; "
                    f"added to the prior and {len(self.specific)} specific "
                    f"entr{'y' if len(self.specific) == 1 else 'ies'} replayed"
                )
                self._replay()
            else:
                self.state = credal.constrain(self.state, entry.payload)
            return
        self.specific.append(entry)
        self.state = self._step(self.state, entry)

    def _replay(self) -> None:
        state = PartialModel(self.prior)
        for entry in self.specific:
            state = self._step(state, entry)
        self.state = state

    def _step(self, state, entry: LedgerEntry):
        kind, payload = entry.kind, entry.payload
        if isinstance(state, (PartialModel, ConditionedModel)):
            if kind == "condition":
                return credal.condition_extended(state, payload)
            if kind == "collapse":
                base = credal.as_constraints(state, self.config.caps.vertex_n)
                sol = maxent(base, self.config.mce)
                return _snap(self.lang, sol.result, base) or np.array(sol.result)
            raise ModeError(f"line {entry.line}: '{kind}' needs point mode (use 'collapse maxent' first)")
        if kind == "collapse":
            return state
        if isinstance(state, ProbFunction):
            if kind == "condition":
                return condition(state, payload)
            if kind == "jeffrey":
                return jeffrey_binary(state, *payload)
            if kind == "jeffrey-partition":
                return jeffrey_general(state, payload)
        q = _float_mass(state)
        if kind == "condition":
            return _float_jeffrey(q, [(models(payload, self.lang), 1)], self.lang)
        if kind == "jeffrey":
            phi, w = payload
            ev = models(phi, self.lang)
            cells = [(ev, w), (self.lang.full ^ ev, 1 - w)]
            return _float_jeffrey(q, [c for c in cells if c[1] != 0], self.lang)
        if kind == "jeffrey-partition":
            return _float_jeffrey(q, [(models(s, self.lang), w) for s, w in payload], self.lang)
        if kind == "mce":
            sol = mce_update(state if isinstance(state, ProbFunction) else q, payload, self.config.mce)
            return _snap(self.lang, sol.result, payload) or np.array(sol.result)
        raise ModeError(f"cannot apply {kind!r}")

    # queries ---------------------------------------------------------------

    def answer(self, q: QueryLine):
        state = self.state
        if self.mode == "credal":
            return self._credal_answer(state, q)
        return self._point_answer(state, q)

    def _credal_answer(self, M, q: QueryLine):
        caps = self.config.caps
        if q.kind in ("lower", "upper"):
            value = credal.lower(M, q.arg) if q.kind == "lower" else credal.upper(M, q.arg)
            if self.config.oracle:
                self._oracle_check(M, q.arg, q.kind, value)
            return value
        if q.kind == "accepted":
            return credal.accepted(M, q.arg)
        if q.kind == "entails":
            return credal.entails(M, q.arg)
        if q.kind == "top":
            return [self.lang.atom_label(a) for a in credal.top(M).atom_list()]
        if q.kind == "uncertainty":
            return measures.uncertainty(M, self.config.mce, caps.vertex_n)
        if q.kind == "ignorance":
            return measures.ignorance(M, caps.event_n)
        raise ModeError(f"line {q.line}: 'dist' needs point mode (use 'collapse maxent' first)")

    def _point_answer(self, P, q: QueryLine):
        exact = isinstance(P, ProbFunction)
        mass = P.mass if exact else [float(v) for v in P]

        def prob(event):
            vals = [m for i, m in enumerate(mass) if (event >> i) & 1]
            return sum(vals, Fraction(0)) if exact else math.fsum(vals)

        if q.kind in ("lower", "upper"):
            return prob(models(q.arg, self.lang))
        if q.kind == "accepted":
            v = prob(models(q.arg, self.lang))
            return v == 1 if exact else abs(v - 1) <= 1e-12
        if q.kind == "entails":
            v = q.arg.value(mass) if exact else float(np.dot([float(c) for c in q.arg.coeffs], mass))
            if exact:
                return q.arg.holds(mass)
            rhs = float(q.arg.rhs)
            return {"=": abs(v - rhs) <= 1e-9, "<=": v <= rhs + 1e-9, ">=": v >= rhs - 1e-9}[q.arg.relation]
        if q.kind == "top":
            return [self.lang.atom_label(i) for i, m in enumerate(mass) if m > 0]
        if q.kind == "uncertainty":
            return entropy_bits([float(m) for m in mass])
        if q.kind == "ignorance":
            return 0.0
        if q.kind == "dist":
            return format_distribution(P) if exact else [float(m) for m in mass]
        raise ModeError(f"unknown query {q.kind!r}")

    def _oracle_check(self, M, sentence: Sentence, kind: str, value: Fraction) -> None:
        event = models(sentence, self.lang)
        verts = oracle.vertices(M.base, self.config.caps.vertex_n)
        if isinstance(M, ConditionedModel):
            ref = oracle.conditioned_vertex_bounds(M.base, event, models(M.evidence, self.lang), verts)
        else:
            ref = oracle.vertex_bounds(M.base, [Fraction((event >> i) & 1) for i in range(self.lang.num_atoms)], verts)
        ref_value = ref[0] if kind == "lower" else ref[1]
        self.oracle_checks += 1
        self.oracle_max_dev = max(self.oracle_max_dev, abs(ref_value - value))

    # driver ----------------------------------------------------------------

    def run(self, script: Script) -> dict:
        for item in script.items:
            if isinstance(item, QueryLine):
                key = item.text
                k = 2
                while key in self.answers:
                    key = f"{item.text} #{k}"
                    k += 1
                self.answers[key] = self.answer(item)
            else:
                try:
                    self.apply(item)
                except BeliefChangeError as exc:
                    if not str(exc).startswith("line "):
                        exc.args = (f"line {item.line}: {exc}",) + exc.args[1:]
                    raise
        return self.report()

    def state_summary(self) -> dict:
        out: dict = {"mode": self.mode, "prior": [str(e.payload) for e in self.generic]}
        if self.mode == "credal":
            M = self.state
            out["evidence"] = str(M.evidence) if isinstance(M, ConditionedModel) else None
            out["atom_envelopes"] = {
                self.lang.atom_label(a): [jsonable(v) for v in credal.bounds(M, 1 << a)]
                for a in range(self.lang.num_atoms)
            }
        else:
            out["distribution"] = self._point_answer(self.state, QueryLine("dist", None, "dist", 0))
        return out

    def report(self) -> dict:
        rep = {
            "language": list(self.lang.letters),
            "ledger": [e.to_json() for e in self.ledger],
            "warnings": list(self.warnings),
            "answers": {k: jsonable(v) for k, v in self.answers.items()},
            "state": self.state_summary(),
        }
        if self.config.oracle:
            rep["oracle"] = {"checked": self.oracle_checks, "max_deviation": jsonable(self.oracle_max_dev)}
        return rep


def jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (np.floating, float)):
        return float(v)
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    return v


def run_script_text(text: str, lang: Language | None = None, config: RunConfig | None = None) -> dict:
    script = parse_script(text, lang)
    return Session(script.lang, config).run(script)


def run_script(path: str | Path, lang: Language | None = None, config: RunConfig | None = None) -> dict:
    return run_script_text(Path(path).read_text(encoding="utf-8"), lang, config)
