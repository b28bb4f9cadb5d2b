import pytest
from hypothesis import given
from hypothesis import strategies as st

from beliefchange.errors import InconsistentError, ParseError
from beliefchange.logic import (
    And,
    BeliefSet,
    Bottom,
    Iff,
    Implies,
    Language,
    Letter,
    Not,
    Or,
    Top,
    accepted,
    expand,
    models,
    parse_sentence,
)
from strategies import LANGS, languages, sentences

L2 = LANGS[2]
L3 = LANGS[3]


def truth(phi, lang, atom):
    """Reference evaluator, one atom at a time."""
    if isinstance(phi, Letter):
        return lang.truth(atom, phi.name)
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bottom):
        return False
    if isinstance(phi, Not):
        return not truth(phi.arg, lang, atom)
    a, b = truth(phi.left, lang, atom), truth(phi.right, lang, atom)
    if isinstance(phi, And):
        return a and b
    if isinstance(phi, Or):
        return a or b
    if isinstance(phi, Implies):
        return (not a) or b
    return a == b


def truth_table(phi, lang):
    return sum(1 << i for i in range(lang.num_atoms) if truth(phi, lang, i))


class TestLanguage:
    def test_atom_order(self):
        assert [L2.atom_label(i) for i in range(4)] == ["p&q", "p&!q", "!p&q", "!p&!q"]

    @pytest.mark.parametrize("bad", [("p", "p"), ("T",), ("P",), ("1x",), ()])
    def test_rejects_bad_letters(self, bad):
        with pytest.raises(ValueError):
            Language.of(*bad)

    def test_letter_cap(self):
        with pytest.raises(ValueError):
            Language.of(*[f"x{i}" for i in range(17)])


class TestParser:
    def test_leaf(self):
        assert parse_sentence("p", L2) == Letter("p")

    def test_precedence(self):
        assert parse_sentence("!p & q | r", L3) == Or(And(Not(Letter("p")), Letter("q")), Letter("r"))

    def test_arrows_right_associative(self):
        p, q, r = map(Letter, "pqr")
        assert parse_sentence("p -> q -> r", L3) == Implies(p, Implies(q, r))
        assert parse_sentence("p <-> q <-> r", L3) == Iff(p, Iff(q, r))

    def test_arrow_binds_looser_than_or(self):
        p, q, r = map(Letter, "pqr")
        assert parse_sentence("p | q -> r", L3) == Implies(Or(p, q), r)

    def test_constants_and_tilde(self):
        assert parse_sentence("~T | F", L2) == Or(Not(Top()), Bottom())

    @pytest.mark.parametrize("text,col", [("p &", 4), ("p q", 3), ("(p", 3), ("s", 1), ("p @ q", 3)])
    def test_errors_carry_position(self, text, col):
        with pytest.raises(ParseError) as info:
            parse_sentence(text, L2)
        assert info.value.position is not None
        assert f"column {col}" in str(info.value)

    @given(st.data())
    def test_render_roundtrip(self, data):
        lang = data.draw(languages())
        phi = data.draw(sentences(lang))
        assert parse_sentence(str(phi), lang) == phi


class TestModels:
    def test_examples(self):
        assert models(parse_sentence("p", L2), L2) == 0b0011
        assert models(Bottom(), L2) == 0
        assert models(Top(), L2) == 0b1111
        assert models(parse_sentence("p <-> q", L2), L2) == 0b1001

    @given(st.data())
    def test_matches_truth_table(self, data):
        lang = data.draw(languages())
        phi = data.draw(sentences(lang))
        assert models(phi, lang) == truth_table(phi, lang)

    @given(st.data())
    def test_connectives(self, data):
        lang = data.draw(languages())
        a, b = data.draw(sentences(lang)), data.draw(sentences(lang))
        assert models(Not(a), lang) == lang.full ^ models(a, lang)
        assert models(And(a, b), lang) == models(a, lang) & models(b, lang)


class TestBeliefSets:
    def test_expand_examples(self):
        full = BeliefSet.ignorant(L2)
        assert expand(full, parse_sentence("p", L2)).atoms == 0b0011
        K = BeliefSet(L2, models(parse_sentence("p | q", L2), L2))
        assert expand(K, parse_sentence("!p", L2)).atoms == 0b0100
        with pytest.raises(InconsistentError):
            expand(BeliefSet(L2, 0b0011), parse_sentence("!p", L2))

    def test_accepted_examples(self):
        assert accepted(BeliefSet(L2, 0b0001), parse_sentence("p", L2))
        assert accepted(BeliefSet(L2, 0b0110), Top())
        assert not accepted(BeliefSet.ignorant(L2), parse_sentence("p", L2))

    def test_empty_belief_set_rejected(self):
        with pytest.raises(InconsistentError):
            BeliefSet(L2, 0)

    @given(st.data())
    def test_expansion_laws(self, data):
        lang = data.draw(languages())
        K = BeliefSet(lang, data.draw(st.integers(1, lang.full)))
        phi, psi = data.draw(sentences(lang)), data.draw(sentences(lang))
        both = K.atoms & models(phi, lang) & models(psi, lang)
        if not both:
            return
        Kp = expand(K, phi)
        assert Kp.atoms == K.atoms & models(phi, lang)
        assert expand(Kp, phi) == Kp
        assert expand(Kp, psi) == expand(expand(K, psi), phi)
        assert accepted(expand(Kp, psi), phi)
