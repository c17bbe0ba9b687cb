import pytest

from sullivan.exceptions import BudgetExceededError, UnsupportedDiagramError
from sullivan.models import Flavor
from sullivan.operations import class_zeta
from sullivan.sentences import (
    EPS,
    SentenceUniverse,
    all_sentences,
    decomposition,
    f_map,
    format_words,
    in_I,
    in_J,
    parse_words,
    reduce_word,
    sentence,
    universe_size,
)


# --- Words ---


def test_reduce_word_fuses_placeholders():
    assert reduce_word((EPS, EPS, 1, EPS, EPS)) == (EPS, 1, EPS)


def test_printed_form_reverses_words():
    words = parse_words("(), (3 4)")
    assert words == ((4, 3), ())
    assert format_words(words) == "(), (3 4)"


def test_parse_accepts_placeholder_spellings():
    assert parse_words("(e 1 ε)") == ((EPS, 1, EPS),)
    with pytest.raises(ValueError):
        parse_words("3 4")


def test_f_map_inserts_at_minimal_position():
    assert f_map(((EPS,),), 0, 0) == ((1, EPS),)
    assert f_map(((),), 0, 0) == ((1,),)


def test_membership():
    assert in_I(((1,),), 1)
    assert in_J(((1,),), 1)
    assert decomposition(((EPS,),), 0) is None
    assert decomposition(((1, EPS),), 1) == (1, 0)


# --- Universes ---


@pytest.mark.parametrize("n, k, size", [(1, 1, 4), (2, 1, 16), (1, 2, 16)])
def test_universe_size_matches_enumeration(n, k, size):
    assert universe_size(n, k) == size
    assert len(all_sentences(n, k)) == size


@pytest.mark.parametrize("n, k", [(1, 1), (2, 1), (1, 2), (2, 2), (3, 1)])
def test_universe_decomposes(n, k):
    u = SentenceUniverse(n, k)
    assert set(u.I) <= set(u.J)
    assert set(u.J).isdisjoint(u.B)
    assert set(u.J) | set(u.B) == set(u.A)
    pieces = u.strata()
    assert sum(len(p) for p in pieces.values()) == len(u.J)


@pytest.mark.parametrize("n, k", [(1, 1), (2, 1), (1, 2), (2, 2)])
def test_insertion_lands_in_I(n, k):
    u = SentenceUniverse(n, k)
    for (t, _), image in u.f.items():
        assert in_I(image, n + 1)


def test_universe_budget():
    with pytest.raises(BudgetExceededError):
        SentenceUniverse(3, 3, budget=10)


def test_universe_rejects_bad_sizes():
    with pytest.raises(ValueError):
        SentenceUniverse(1, 0)


# --- Sentences of cells ---


def test_sentence_of_enumerated_zeta():
    t = sentence(class_zeta(2, Flavor.UNPAR_ENUM))
    assert t.words == ((1, 2),)
    assert t.n == 2
    assert t.free_letter is None
    assert t.letter_positions == (0, 1)
    assert t.to_text() == "(2 1)"


def test_sentence_needs_enumerated_flavor(zeta2):
    with pytest.raises(UnsupportedDiagramError):
        sentence(zeta2)
