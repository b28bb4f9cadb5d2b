"""Finite propositional languages, sentence parsing, model sets and belief sets.

Atoms (possible worlds) are indexed ``0 .. 2**n - 1``.  Letter ``j`` is true
in atom ``i`` iff bit ``n - 1 - j`` of ``i`` is clear, so for letters
``(p, q)`` the atom order is ``p&q, p&!q, !p&q, !p&!q``.  An event (the model
set of a sentence) is a Python ``int`` used as a bitset: bit ``i`` is set iff
atom ``i`` belongs to it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

from .errors import InconsistentError, ParseError

Event = int

DEFAULT_MAX_LETTERS = 16
_LETTER_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
_RESERVED = {"T", "F", "P"}


@dataclass(frozen=True)
class Language:
    letters: tuple[str, ...]
    max_letters: int = field(default=DEFAULT_MAX_LETTERS, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        if not 1 <= len(self.letters) <= self.max_letters:
            raise ValueError(
                f"need between 1 and {self.max_letters} letters, got {len(self.letters)}"
            )
        if len(set(self.letters)) != len(self.letters):
            raise ValueError(f"duplicate letters in {self.letters}")
        for name in self.letters:
            if not _LETTER_RE.match(name) or name in _RESERVED:
                raise ValueError(f"invalid letter name {name!r}")

    @classmethod
    def of(cls, *letters: str) -> "Language":
        if len(letters) == 1 and not isinstance(letters[0], str):
            letters = tuple(letters[0])
        return cls(tuple(letters))

    @property
    def n(self) -> int:
        return len(self.letters)

    @property
    def num_atoms(self) -> int:
        return 1 << self.n

    @property
    def full(self) -> Event:
        return (1 << self.num_atoms) - 1

    @cached_property
    def _letter_masks(self) -> dict[str, Event]:
        masks = {}
        for j, name in enumerate(self.letters):
            shift = self.n - 1 - j
            masks[name] = sum(
                1 << i for i in range(self.num_atoms) if not (i >> shift) & 1
            )
        return masks

    def letter_mask(self, name: str) -> Event:
        return self._letter_masks[name]

    def truth(self, atom: int, name: str) -> bool:
        j = self.letters.index(name)
        return not (atom >> (self.n - 1 - j)) & 1

    def atom_label(self, atom: int) -> str:
        return "&".join(
            name if self.truth(atom, name) else "!" + name for name in self.letters
        )

    def atom_sentence(self, atom: int) -> "Sentence":
        lits = [
            Letter(name) if self.truth(atom, name) else Not(Letter(name))
            for name in self.letters
        ]
        out = lits[0]
        for lit in lits[1:]:
            out = And(out, lit)
        return out

    def event_sentence(self, event: Event) -> "Sentence":
        """A disjunctive-normal-form sentence whose model set is ``event``."""
        atoms = list(iter_atoms(event))
        if not atoms:
            return Bottom()
        if event == self.full:
            return Top()
        out = self.atom_sentence(atoms[0])
        for a in atoms[1:]:
            out = Or(out, self.atom_sentence(a))
        return out

    def parse(self, text: str) -> "Sentence":
        return parse_sentence(text, self)


def iter_atoms(event: Event) -> Iterator[int]:
    i = 0
    while event:
        if event & 1:
            yield i
        event >>= 1
        i += 1


def popcount(event: Event) -> int:
    return bin(event).count("1")


# --------------------------------------------------------------------------
# Sentences


class Sentence:
    __slots__ = ()

    def __and__(self, other):
        return And(self, other)

    def __or__(self, other):
        return Or(self, other)

    def __invert__(self):
        return Not(self)

    def __str__(self):
        return _render(self, 0)


@dataclass(frozen=True)
class Letter(Sentence):
    name: str


@dataclass(frozen=True)
class Top(Sentence):
    pass


@dataclass(frozen=True)
class Bottom(Sentence):
    pass


@dataclass(frozen=True)
class Not(Sentence):
    arg: Sentence


@dataclass(frozen=True)
class And(Sentence):
    left: Sentence
    right: Sentence


@dataclass(frozen=True)
class Or(Sentence):
    left: Sentence
    right: Sentence


@dataclass(frozen=True)
class Implies(Sentence):
    left: Sentence
    right: Sentence


@dataclass(frozen=True)
class Iff(Sentence):
    left: Sentence
    right: Sentence


# binding strength used by the renderer; higher binds tighter
_STRENGTH = {Iff: 1, Implies: 2, Or: 3, And: 4}
_SYMBOL = {Iff: "<->", Implies: "->", Or: "|", And: "&"}


def _render(s: Sentence, outer: int) -> str:
    if isinstance(s, Letter):
        return s.name
    if isinstance(s, Top):
        return "T"
    if isinstance(s, Bottom):
        return "F"
    if isinstance(s, Not):
        return "!" + _render(s.arg, 5)
    k = type(s)
    own = _STRENGTH[k]
    right_assoc = k in (Implies, Iff)
    left = _render(s.left, own + 1 if right_assoc else own)
    right = _render(s.right, own if right_assoc else own + 1)
    text = f"{left} {_SYMBOL[k]} {right}"
    return f"({text})" if own < outer else text


def conjoin(*sentences: Sentence) -> Sentence:
    if not sentences:
        return Top()
    out = sentences[0]
    for s in sentences[1:]:
        out = And(out, s)
    return out


# --------------------------------------------------------------------------
# Parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<op><->|->|[!&|()~])|(?P<name>[A-Za-z][A-Za-z0-9_]*)|(?P<bad>\S))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:  # trailing whitespace
            break
        if m.group("bad") is not None:
            raise ParseError(
                f"unexpected character {m.group('bad')!r}", text, m.start("bad")
            )
        if m.group("op") is not None:
            tok = m.group("op")
            tokens.append(("op", "!" if tok == "~" else tok, m.start("op")))
        elif m.group("name") is not None:
            tokens.append(("name", m.group("name"), m.start("name")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _SentenceParser:
    # iff > implies > or > and > not > primary (loosest to tightest)

    def __init__(self, text: str, lang: Language):
        self.text = text
        self.lang = lang
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return ParseError(message, self.text, tok[2])

    def parse(self) -> Sentence:
        if self.peek()[0] == "end":
            raise self.error("empty sentence")
        s = self.iff()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return s

    def iff(self):
        left = self.implies()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self):
        out = self.conj()
        while self.peek()[1] == "|":
            self.take()
            out = Or(out, self.conj())
        return out

    def conj(self):
        out = self.unary()
        while self.peek()[1] == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self):
        if self.peek()[1] == "!":
            self.take()
            return Not(self.unary())
        return self.primary()

    def primary(self):
        tok = self.take()
        kind, value, _ = tok
        if kind == "op" and value == "(":
            inner = self.iff()
            if self.peek()[1] != ")":
                raise self.error("expected ')'")
            self.take()
            return inner
        if kind == "name":
            if value == "T":
                return Top()
            if value == "F":
                return Bottom()
            if value not in self.lang.letters:
                raise self.error(f"unknown letter {value!r}", tok)
            return Letter(value)
        if kind == "end":
            raise self.error("unexpected end of sentence", tok)
        raise self.error(f"unexpected token {value!r}", tok)


def parse_sentence(text: str, lang: Language) -> Sentence:
    """Parse the sentence DSL.

    Operators, tightest first: ``!`` (or ``~``), ``&``, ``|``, ``->``, ``<->``.
    The two arrows associate to the right; ``T`` and ``F`` are the constants.

    >>> str(parse_sentence("!p & q | r", Language.of("p", "q", "r")))
    '!p & q | r'
    """
    return _SentenceParser(text, lang).parse()


def as_sentence(s: Sentence | str, lang: Language) -> Sentence:
    return parse_sentence(s, lang) if isinstance(s, str) else s


# --------------------------------------------------------------------------
# Semantics


def models(phi: Sentence | str, lang: Language) -> Event:
    """The set of atoms satisfying ``phi``, evaluated bit-parallel over all atoms."""
    phi = as_sentence(phi, lang)
    full = lang.full

    def ev(s: Sentence) -> Event:
        if isinstance(s, Letter):
            if s.name not in lang.letters:
                raise ValueError(f"letter {s.name!r} not in language")
            return lang.letter_mask(s.name)
        if isinstance(s, Top):
            return full
        if isinstance(s, Bottom):
            return 0
        if isinstance(s, Not):
            return full ^ ev(s.arg)
        a, b = ev(s.left), ev(s.right)
        if isinstance(s, And):
            return a & b
        if isinstance(s, Or):
            return a | b
        if isinstance(s, Implies):
            return (full ^ a) | b
        if isinstance(s, Iff):
            return full ^ (a ^ b)
        raise TypeError(f"not a sentence: {s!r}")

    return ev(phi)


@dataclass(frozen=True)
class BeliefSet:
    """A consistent, logically closed theory, kept as its set of possible atoms."""

    lang: Language
    atoms: Event

    def __post_init__(self):
        if self.atoms == 0:
            raise InconsistentError("a belief set must be consistent (nonempty atom set)")
        if self.atoms & ~self.lang.full:
            raise ValueError("atom set exceeds the language")

    @classmethod
    def ignorant(cls, lang: Language) -> "BeliefSet":
        return cls(lang, lang.full)

    @classmethod
    def from_sentences(cls, lang: Language, sentences: Sequence[Sentence | str]) -> "BeliefSet":
        atoms = lang.full
        for s in sentences:
            atoms &= models(s, lang)
        return cls(lang, atoms)

    def atom_list(self) -> list[int]:
        return list(iter_atoms(self.atoms))


def accepted(K: BeliefSet, phi: Sentence | str) -> bool:
    return K.atoms & ~models(phi, K.lang) == 0


def expand(K: BeliefSet, phi: Sentence | str) -> BeliefSet:
    """``Cn(K + phi)``; refuses when ``!phi`` is already accepted."""
    atoms = K.atoms & models(phi, K.lang)
    if not atoms:
        raise InconsistentError(f"expanding with {phi} is inconsistent with the belief set")
    return BeliefSet(K.lang, atoms)
