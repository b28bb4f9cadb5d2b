from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from beliefchange.errors import NullEvidenceError, ParseError, PreconditionError
from beliefchange.logic import models, parse_sentence
from beliefchange.prob import (
    ProbFunction,
    apply_path,
    condition,
    evaluate,
    format_distribution,
    jeffrey_binary,
    jeffrey_general,
    jeffrey_path,
    parse_distribution,
    parse_rational,
    point_mass,
    top,
    uniform,
)
from strategies import LANGS, languages, points, sentences

L1, L2, L3 = LANGS[1], LANGS[2], LANGS[3]


def dist(lang, *masses):
    return ProbFunction(lang, tuple(Fr(m) for m in masses))


def test_rationals():
    assert parse_rational("2/7") == Fr(2, 7)
    assert parse_rational("0.1") == Fr(1, 10)
    with pytest.raises(ParseError):
        parse_rational("1/0")


def test_mass_validation():
    with pytest.raises(ValueError):
        dist(L1, "1/2", "1/3")
    with pytest.raises(ValueError):
        dist(L1, "3/2", "-1/2")


def test_uniform():
    assert uniform(L1).mass == (Fr(1, 2), Fr(1, 2))
    assert uniform(L2).mass == (Fr(1, 4),) * 4


def test_condition_examples():
    P = dist(L3, 0, 0, 0, "1/4", 0, "1/4", "1/2", 0)
    Q = condition(P, parse_sentence("!p", L3))
    assert Q == dist(L3, 0, 0, 0, 0, 0, "1/3", "2/3", 0)
    assert condition(uniform(L1), parse_sentence("p", L1)) == point_mass(L1, 0)
    with pytest.raises(NullEvidenceError):
        condition(point_mass(L1, 0), parse_sentence("!p", L1))


def test_jeffrey_binary_examples():
    p = parse_sentence("p", L1)
    assert jeffrey_binary(uniform(L1), p, Fr(1, 10)) == dist(L1, "1/10", "9/10")
    P = dist(L2, "2/7", "5/14", "5/14", 0)
    assert jeffrey_binary(P, parse_sentence("p", L2), Fr(9, 10)) == dist(L2, "2/5", "1/2", "1/10", 0)
    assert jeffrey_binary(uniform(L2), parse_sentence("p", L2), 1) == condition(uniform(L2), parse_sentence("p", L2))
    with pytest.raises(PreconditionError):
        jeffrey_binary(point_mass(L1, 0), p, Fr(1, 2))


@given(st.data())
def test_jeffrey_binary_is_general_with_complement(data):
    lang = data.draw(languages())
    P = data.draw(points(lang))
    phi = data.draw(sentences(lang))
    p_in = evaluate(P, phi)
    if not 0 < p_in < 1:
        return
    x = Fr(data.draw(st.integers(0, 12)), 12)
    from beliefchange.logic import Not

    binary = jeffrey_binary(P, phi, x)
    assert evaluate(binary, phi) == x
    assert binary == jeffrey_general(P, [(phi, x), (Not(phi), 1 - x)])


@given(st.data())
def test_jeffrey_general_over_atoms_hits_target(data):
    lang = data.draw(languages())
    P = data.draw(points(lang))
    Q = data.draw(points(lang, support=P.support))
    pairs = [(lang.atom_sentence(i), m) for i, m in enumerate(Q.mass) if m > 0]
    assert jeffrey_general(P, pairs) == Q


def test_jeffrey_general_errors():
    p, q = parse_sentence("p", L2), parse_sentence("q", L2)
    with pytest.raises(PreconditionError):
        jeffrey_general(uniform(L2), [(p, Fr(1, 2)), (q, Fr(1, 2))])
    with pytest.raises(PreconditionError):
        jeffrey_general(uniform(L2), [(p, Fr(1, 2))])
    assert jeffrey_general(uniform(L2), [(parse_sentence("T", L2), 1)]) == uniform(L2)


class TestJeffreyPath:
    def test_example(self):
        target = dist(L2, "2/5", "1/2", "1/10", 0)
        steps = jeffrey_path(uniform(L2), target)
        assert len(steps) <= 3
        assert apply_path(uniform(L2), steps) == target

    def test_identity(self):
        assert jeffrey_path(uniform(L2), uniform(L2)) == []

    def test_support_must_shrink(self):
        with pytest.raises(PreconditionError):
            jeffrey_path(point_mass(L1, 0), uniform(L1))

    @given(st.data())
    def test_random_paths(self, data):
        lang = data.draw(languages())
        P = data.draw(points(lang))
        Q = data.draw(points(lang, support=P.support))
        steps = jeffrey_path(P, Q)
        assert len(steps) <= bin(Q.support).count("1")
        assert apply_path(P, steps) == Q


def test_top_and_distribution_literals():
    assert top(dist(L1, 1, 0)).atoms == 0b01
    P = parse_distribution("0: 1/4, 1: 1/4, 2: 1/2", L2)
    assert P == dist(L2, "1/4", "1/4", "1/2", 0)
    assert format_distribution(P) == "0: 1/4, 1: 1/4, 2: 1/2"
    for bad in ("", "0: 1/2", "9: 1", "0: 1/2, 0: 1/2"):
        with pytest.raises(ParseError):
            parse_distribution(bad, L2)


@given(st.data())
def test_evaluate_is_additive(data):
    lang = data.draw(languages())
    P = data.draw(points(lang))
    phi = data.draw(sentences(lang))
    ev = models(phi, lang)
    assert evaluate(P, phi) + evaluate(P, lang.full ^ ev) == 1
