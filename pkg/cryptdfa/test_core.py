import pytest

from hypothesis import given, settings
from hypothesis import strategies as st

from . import core, exceptions
from .core import Cryptarithm, CryptarithmSequence


SEND_MORE_MONEY = Cryptarithm.from_terms('send', 'more', 'money')
SEND_MORE_MONEY_SOLUTION = {
    'd': 7, 'e': 5, 'y': 2, 'n': 6, 'r': 8, 'o': 0, 's': 9, 'm': 1}


@st.composite
def cryptarithms(draw, alphabet='abcd'):
    w1 = draw(st.text(alphabet=alphabet, min_size=1, max_size=4))
    w2 = draw(st.text(alphabet=alphabet, min_size=1, max_size=4))
    # sums shorter than a summand are legal, just never solvable
    longest = max(len(w1), len(w2))
    w3 = draw(st.text(alphabet=alphabet, min_size=1, max_size=longest + 1))
    return Cryptarithm.from_terms(w1, w2, w3)


def test_encode_send_more_money():
    s = core.encode_sequence(SEND_MORE_MONEY)

    assert str(s) == 'deynreeonsmo$$m$$$'
    assert s.size == 5
    assert s.trigrams[-1] == '$$$'
    assert repr(s) == "CryptarithmSequence('deynreeonsmo$$m$$$')"


def test_decode_sequence():
    c = core.decode_sequence('aaabbc$$$')

    assert c.terms == ('ba', 'ba', 'ca')
    assert str(c) == 'ba+ba=ca'

    with pytest.raises(exceptions.MalformedSequence):
        core.decode_sequence('$$a$$$')


@pytest.mark.parametrize('text', [
    'aab$$',        # not a multiple of three
    'aab',          # no terminal trigram
    'aa$$$$',       # empty sum
    'a$bbab$$$',    # second summand resumes after a pad
    '$$$aab$$$',    # terminal trigram in the middle
    'abcab$$ac$$$', # sum resumes after a pad
    'a1b$$$',
])
def test_malformed_sequences(text):
    with pytest.raises(exceptions.MalformedSequence):
        CryptarithmSequence.from_text(text)


def test_canonicalize_send_more_money():
    canonical, gamma = core.canonicalize(SEND_MORE_MONEY)

    assert canonical.terms == ('gbda', 'hfeb', 'hfdbc')
    assert gamma == {'d': 'a', 'e': 'b', 'y': 'c', 'n': 'd',
                     'r': 'e', 'o': 'f', 's': 'g', 'm': 'h'}
    assert core.is_canonical(core.encode_sequence(canonical))
    assert not core.is_canonical(core.encode_sequence(SEND_MORE_MONEY))

    with pytest.raises(exceptions.TooManyLetters):
        core.canonicalize(SEND_MORE_MONEY, k=7)


def test_is_canonical():
    assert core.is_canonical('aab$$$')
    assert core.is_canonical('abc$ab$$$')
    assert not core.is_canonical('bba$$$')
    assert not core.is_canonical('aac$$$')


def test_length_lex_order():
    assert core.compare_length_lex('aab$$$', 'aaabbc$$$') == -1
    assert core.compare_length_lex('aab$aa$$$', 'aab$$b$$$') == 1
    assert core.compare_length_lex('aab$$$', 'aab$$$') == 0

    listing = ['aab$aa$$$', 'aab$$$', 'aab$$b$$$', 'aaabbc$$$']
    assert sorted(listing, key=core.sort_key) == [
        'aab$$$', 'aaabbc$$$', 'aab$$b$$$', 'aab$aa$$$']


def test_solution_holds():
    assert core.solution_holds(SEND_MORE_MONEY, SEND_MORE_MONEY_SOLUTION, 10)

    wrong = dict(SEND_MORE_MONEY_SOLUTION, y=3)
    assert not core.solution_holds(SEND_MORE_MONEY, wrong, 10)

    # digits must be distinct
    repeated = dict(SEND_MORE_MONEY_SOLUTION, y=7)
    assert not core.solution_holds(SEND_MORE_MONEY, repeated, 10)

    # P+P=PA in base 2 and the leading-zero rule
    pa = Cryptarithm.from_terms('p', 'p', 'pa')
    assert core.solution_holds(pa, {'p': 1, 'a': 0}, 2)
    assert not core.solution_holds(pa, {'p': 0, 'a': 1}, 2)


def test_solve_outcome():
    assert core.SolveOutcome.from_solutions([]).status is core.Solvability.UNSOLVABLE
    assert not core.SolveOutcome.from_solutions([]).solvable

    outcome = core.SolveOutcome.from_solutions([{'a': 1}, {'a': 2}])
    assert outcome.status is core.Solvability.MULTIPLE
    assert outcome.count == 2


def test_symbols():
    assert core.trigram_codes('a$c') == (1, 0, 3)
    assert core.render_trigram((0, 2, 26)) == '$bz'

    with pytest.raises(exceptions.WrongAlphabet):
        core.symbol_code('A')


@settings(max_examples=200)
@given(cryptarithms())
def test_sequence_form_is_faithful(c):
    assert core.decode_sequence(core.encode_sequence(c)) == c


@settings(max_examples=200)
@given(cryptarithms())
def test_canonical_form_is_stable(c):
    canonical, gamma = core.canonicalize(c)

    assert core.is_canonical(core.encode_sequence(canonical))
    assert core.canonicalize(canonical)[0] == canonical
    assert core.relabel(c, gamma) == canonical
    assert len(set(gamma.values())) == len(gamma)


def test_short_sum():
    c = Cryptarithm.from_terms('ab', 'c', 'd')
    s = core.encode_sequence(c)

    assert str(s) == 'bcda$$$$$'
    assert core.decode_sequence(s) == c

    canonical, gamma = core.canonicalize(c)
    assert canonical.terms == ('da', 'b', 'c')
    assert gamma == {'b': 'a', 'c': 'b', 'd': 'c', 'a': 'd'}
    assert core.is_canonical(core.encode_sequence(canonical))

    assert not core.solution_holds(c, {'a': 1, 'b': 0, 'c': 2, 'd': 3}, 4)


@given(cryptarithms(), cryptarithms(), cryptarithms())
def test_length_lex_is_a_total_order(c1, c2, c3):
    s1, s2, s3 = (core.encode_sequence(c) for c in (c1, c2, c3))

    assert core.compare_length_lex(s1, s2) == -core.compare_length_lex(s2, s1)
    assert (core.compare_length_lex(s1, s2) == 0) == (str(s1) == str(s2))

    ordered = sorted([s1, s2, s3], key=core.sort_key)
    assert core.compare_length_lex(ordered[0], ordered[1]) <= 0
    assert core.compare_length_lex(ordered[1], ordered[2]) <= 0
    assert core.compare_length_lex(ordered[0], ordered[2]) <= 0

    if core.compare_length_lex(s1, s2) <= 0 and core.compare_length_lex(s2, s3) <= 0:
        assert core.compare_length_lex(s1, s3) <= 0
