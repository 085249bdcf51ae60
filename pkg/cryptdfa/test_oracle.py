import pytest

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from . import oracle, exceptions
from .core import (
    Cryptarithm, Solvability, canonicalize, decode_sequence, encode_sequence, relabel)
from .test_core import cryptarithms


FIRST_24 = [
    'aab$$$', 'aaabbc$$$', 'aab$$b$$$', 'aab$aa$$$', 'aab$ba$$$',
    'aab$bb$$$', 'aaba$a$$$', 'aabaab$$$', 'aabb$a$$$', 'aabb$b$$$',
    'aba$aa$$$', 'aba$cc$$$', 'abaaac$$$', 'abacca$$$', 'abbb$b$$$',
    'abbbbc$$$', 'abbc$c$$$', 'abbccb$$$', 'abc$$a$$$', 'abc$$b$$$',
    'abc$ab$$$', 'abc$ba$$$', 'abca$b$$$', 'abcb$a$$$',
]


def test_send_more_money():
    c = Cryptarithm.from_terms('send', 'more', 'money')
    solutions = oracle.oracle_solutions(c, 10)

    assert solutions == [
        {'d': 7, 'e': 5, 'y': 2, 'n': 6, 'r': 8, 'o': 0, 's': 9, 'm': 1}]


@pytest.mark.parametrize('method', oracle.ORACLE_METHODS)
def test_p_plus_p(method):
    c = Cryptarithm.from_terms('p', 'p', 'pa')

    outcome = oracle.oracle_classify(c, 2, method=method)
    assert outcome.status is Solvability.UNIQUE
    assert outcome.solutions == [{'p': 1, 'a': 0}]

    assert oracle.oracle_classify(c, 10, method=method).status is Solvability.UNSOLVABLE


@pytest.mark.parametrize('terms,k', [
    (('a', 'a', 'b'), 3),
    (('ab', 'ab', 'cb'), 4),
    (('ab', 'ba', 'cc'), 4),
    (('ab', 'c', 'ad'), 5),
    (('a', 'b', 'ca'), 4),
    (('abc', 'cba', 'dddd'), 6),
    (('send', 'more', 'money'), 10),
])
def test_engines_agree(terms, k):
    c = Cryptarithm(terms)

    backtrack = oracle.oracle_solutions(c, k, method='backtrack')
    assert oracle.oracle_solutions(c, k, method='exhaustive') == backtrack
    assert oracle.oracle_solutions(c, k, method='cpsat') == backtrack


def test_base_too_small():
    with pytest.raises(exceptions.BaseTooSmall):
        oracle.oracle_solutions(Cryptarithm.from_terms('abc', 'd', 'ef'), 2)

    with pytest.raises(ValueError):
        oracle.oracle_solutions(Cryptarithm.from_terms('a', 'a', 'b'), 3, method='guess')


def test_catalogue_first_sizes():
    catalogue = oracle.oracle_catalogue(3, 3, 2)

    assert [str(s) for s in catalogue] == FIRST_24

    unique = oracle.oracle_catalogue(3, 3, 2, cls='unique')
    assert len(unique) == 1 + 19


def test_catalogue_of_base_two():
    assert oracle.oracle_catalogue(2, 2, 1) == []
    assert len(oracle.oracle_catalogue(2, 2, 3)) == 3 + 18


def test_catalogue_entries_are_solvable():
    for s in oracle.oracle_catalogue(4, 2, 2, cls='unique'):
        c = decode_sequence(s)
        assert oracle.oracle_classify(c, 4).status is Solvability.UNIQUE
        assert encode_sequence(c) == s


def test_catalogue_budget():
    with pytest.raises(exceptions.BudgetExceeded) as excinfo:
        oracle.oracle_catalogue(3, 3, 3, budget=10)

    assert excinfo.value.estimate == oracle.estimate_candidates(3, 3)


def test_catalogue_worker_count():
    assert oracle.oracle_catalogue(3, 3, 2, n_processes=2) == \
        oracle.oracle_catalogue(3, 3, 2, n_processes=1)


def test_short_sum_has_no_solutions():
    c = Cryptarithm.from_terms('ab', 'c', 'd')

    assert oracle.oracle_solutions(c, 4) == []
    assert oracle.oracle_classify(c, 4, method='cpsat').status is Solvability.UNSOLVABLE


@settings(max_examples=100, deadline=None)
@given(cryptarithms(alphabet='abcd'), st.integers(min_value=2, max_value=4))
def test_canonical_form_keeps_solution_count(c, k):
    assume(max(len(t) for t in c.terms) <= 3)
    assume(len(c.letters()) <= k)

    canonical, _ = canonicalize(c, k)

    assert len(oracle.oracle_solutions(canonical, k)) == len(oracle.oracle_solutions(c, k))


@settings(max_examples=100, deadline=None)
@given(cryptarithms(alphabet='abc'), st.permutations('abcd'))
def test_solutions_follow_relabeling(c, image):
    gamma = dict(zip('abc', image))
    renamed = relabel(c, gamma)

    expected = sorted(
        sorted(solution.items()) for solution in oracle.oracle_solutions(c, 4))
    pulled_back = sorted(
        sorted((ch, solution[gamma[ch]]) for ch in c.letters())
        for solution in oracle.oracle_solutions(renamed, 4))

    assert pulled_back == expected
