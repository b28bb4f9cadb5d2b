"""Exact probability functions over atoms, Bayesian and Jeffrey conditioning."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NullEvidenceError, ParseError, PreconditionError
from .logic import BeliefSet, Event, Language, Sentence, iter_atoms, models

_RATIONAL_RE = re.compile(r"\s*([+-]?(?:\d+/\d+|\d+\.\d*|\.\d+|\d+))\s*\Z")


def parse_rational(text: str) -> Fraction:
    """Parse ``a/b`` or a finite decimal into an exact fraction."""
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"not a rational literal: {text!r}", text)
    try:
        return Fraction(m.group(1))
    except ZeroDivisionError:
        raise ParseError(f"zero denominator in {text!r}", text) from None


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return parse_rational(x)
    if isinstance(x, float):
        # floats are taken at their shortest decimal repr, not their binary value
        return Fraction(repr(x))
    return Fraction(x)


@dataclass(frozen=True)
class ProbFunction:
    lang: Language
    mass: tuple[Fraction, ...]

    def __post_init__(self):
        mass = tuple(as_fraction(m) for m in self.mass)
        object.__setattr__(self, "mass", mass)
        if len(mass) != self.lang.num_atoms:
            raise ValueError(f"expected {self.lang.num_atoms} atom masses, got {len(mass)}")
        if any(m < 0 for m in mass):
            raise ValueError("atom masses must be nonnegative")
        if sum(mass) != 1:
            raise ValueError(f"atom masses sum to {sum(mass)}, not 1")

    @classmethod
    def from_dict(cls, lang: Language, masses: dict[int, object]) -> "ProbFunction":
        vec = [Fraction(0)] * lang.num_atoms
        for i, m in masses.items():
            vec[i] = as_fraction(m)
        return cls(lang, tuple(vec))

    @property
    def support(self) -> Event:
        return sum(1 << i for i, m in enumerate(self.mass) if m > 0)

    def __call__(self, phi: Sentence | str) -> Fraction:
        return evaluate(self, phi)

    def __str__(self):
        return format_distribution(self)


def evaluate(P: ProbFunction, phi: Sentence | str | Event) -> Fraction:
    """P(phi): total mass of the atoms in the model set of ``phi``."""
    event = phi if isinstance(phi, int) else models(phi, P.lang)
    return sum((P.mass[i] for i in iter_atoms(event)), Fraction(0))


def uniform(lang: Language) -> ProbFunction:
    return ProbFunction(lang, (Fraction(1, lang.num_atoms),) * lang.num_atoms)


def point_mass(lang: Language, atom: int) -> ProbFunction:
    return ProbFunction.from_dict(lang, {atom: 1})


def _condition_event(P: ProbFunction, event: Event) -> ProbFunction:
    total = evaluate(P, event)
    if total == 0:
        raise NullEvidenceError("cannot condition on an event of probability zero")
    mass = tuple(
        m / total if (event >> i) & 1 else Fraction(0) for i, m in enumerate(P.mass)
    )
    return ProbFunction(P.lang, mass)


def condition(P: ProbFunction, phi: Sentence | str) -> ProbFunction:
    return _condition_event(P, models(phi, P.lang))


def jeffrey_binary(P: ProbFunction, phi: Sentence | str, x) -> ProbFunction:
    """``x * P_phi + (1 - x) * P_!phi``.

    The end points are admitted whenever the surviving conditional exists, so
    ``x == 1`` is plain conditioning on ``phi``.
    """
    x = as_fraction(x)
    if not 0 <= x <= 1:
        raise PreconditionError(f"Jeffrey weight {x} outside [0, 1]")
    event = models(phi, P.lang)
    p_in = evaluate(P, event)
    if x == 1:
        return _condition_event(P, event)
    if x == 0:
        return _condition_event(P, P.lang.full ^ event)
    if not 0 < p_in < 1:
        raise PreconditionError(
            f"binary Jeffrey conditioning needs 0 < P({phi}) < 1, got {p_in}"
        )
    scale_in = x / p_in
    scale_out = (1 - x) / (1 - p_in)
    mass = tuple(
        m * (scale_in if (event >> i) & 1 else scale_out) for i, m in enumerate(P.mass)
    )
    return ProbFunction(P.lang, mass)


def jeffrey_general(
    P: ProbFunction, pairs: Sequence[tuple[Sentence | str, object]]
) -> ProbFunction:
    """Mixture ``sum x_i * P_{phi_i}`` over mutually exclusive cells ``phi_i``."""
    if not pairs:
        raise PreconditionError("Jeffrey conditioning needs at least one cell")
    lang = P.lang
    seen = 0
    cells = []
    for phi, x in pairs:
        x = as_fraction(x)
        if not 0 <= x <= 1:
            raise PreconditionError(f"Jeffrey weight {x} outside [0, 1]")
        event = models(phi, lang)
        if event & seen:
            raise PreconditionError("Jeffrey cells must be mutually exclusive")
        seen |= event
        if evaluate(P, event) == 0:
            raise NullEvidenceError(f"Jeffrey cell {phi} has probability zero")
        cells.append((event, x))
    if sum(x for _, x in cells) != 1:
        raise PreconditionError("Jeffrey weights must sum to 1")
    mass = [Fraction(0)] * lang.num_atoms
    for event, x in cells:
        if x == 0:
            continue
        cond = _condition_event(P, event)
        for i in iter_atoms(event):
            mass[i] += x * cond.mass[i]
    return ProbFunction(lang, tuple(mass))


@dataclass(frozen=True)
class JeffreyStep:
    event: Sentence
    weight: Fraction

    def apply(self, P: ProbFunction) -> ProbFunction:
        return jeffrey_binary(P, self.event, self.weight)


def jeffrey_path(source: ProbFunction, target: ProbFunction) -> list[JeffreyStep]:
    """Binary Jeffrey steps turning ``source`` into ``target`` exactly.

    At most ``|support(target)|`` steps: one conditioning on the target support
    (only when supports differ), then one singleton step per target atom but
    the last.  A singleton step rescales every other atom by the same factor,
    so each step can fix the ratio of its atom to the never-stepped last atom.
    """
    lang = source.lang
    if target.lang != lang:
        raise ValueError("source and target live on different languages")
    supp = target.support
    if supp & ~source.support:
        raise PreconditionError("target support must lie inside the source support")
    if source == target:
        return []
    steps: list[JeffreyStep] = []
    current = source
    if supp != source.support:
        steps.append(JeffreyStep(lang.event_sentence(supp), Fraction(1)))
        current = steps[-1].apply(current)
    atoms = list(iter_atoms(supp))
    last = atoms[-1]
    for a in atoms[:-1]:
        if current == target:
            break
        ratio = target.mass[a] / target.mass[last]
        scaled = ratio * current.mass[last] / (1 - current.mass[a])
        w = scaled / (1 + scaled)
        if w == current.mass[a]:
            continue
        step = JeffreyStep(lang.atom_sentence(a), w)
        steps.append(step)
        current = step.apply(current)
    assert current == target, "Jeffrey path construction failed to reach target"
    return steps


def apply_path(P: ProbFunction, steps: Iterable[JeffreyStep]) -> ProbFunction:
    for step in steps:
        P = step.apply(P)
    return P


def top(P: ProbFunction) -> BeliefSet:
    return BeliefSet(P.lang, P.support)


# --------------------------------------------------------------------------
# Distribution literals: "0: 1/4, 1: 1/4, 7: 1/2"; omitted atoms are zero.

_ENTRY_RE = re.compile(r"\s*(\d+)\s*:\s*([^,\s]+)\s*")


def parse_distribution(text: str, lang: Language) -> ProbFunction:
    masses: dict[int, Fraction] = {}
    body = text.strip()
    if not body:
        raise ParseError("empty distribution literal", text)
    for part in re.split(r"[,;]|\s+(?=\d+\s*:)", body):
        if not part.strip():
            continue
        m = _ENTRY_RE.fullmatch(part)
        if m is None:
            raise ParseError(f"bad distribution entry {part.strip()!r}", text)
        idx = int(m.group(1))
        if idx >= lang.num_atoms:
            raise ParseError(f"atom index {idx} out of range", text)
        if idx in masses:
            raise ParseError(f"atom index {idx} given twice", text)
        masses[idx] = parse_rational(m.group(2))
    try:
        return ProbFunction.from_dict(lang, masses)
    except ValueError as exc:
        raise ParseError(str(exc), text) from None


def format_distribution(P: ProbFunction) -> str:
    return ", ".join(f"{i}: {m}" for i, m in enumerate(P.mass) if m != 0)
