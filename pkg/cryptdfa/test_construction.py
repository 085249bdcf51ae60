import os
import re
import logging

import pytest
from unittest.mock import patch

from . import construction, exceptions, persistence
from .analysis import count_table, verify_against_oracle
from .construction import Configuration, PEntry, StepContext
from .core import Solvability


slow = pytest.mark.skipif(
    not os.getenv('CRYPTDFA_SLOW'), reason='set CRYPTDFA_SLOW=1 for long builds')


@pytest.fixture(scope='module')
def naive():
    return {k: construction.build_naive(k) for k in (2, 3, 4)}


def example_configuration():
    return Configuration(0, 0, 2, (PEntry((0,), 0, 0, 0),))


def test_step_repeating_letter():
    q = example_configuration()
    assert construction.config_step(q, (1, 1, 1), 3, 3) == q


def test_step_with_promotion():
    q = example_configuration()

    succ = construction.config_step(q, (1, 2, 2), 3, 3)

    assert succ == Configuration(0, 0, 3, (
        PEntry((0, 1, 2), 0, 0, 1),
        PEntry((0, 2, 1), 0, 0, 1),
    ))
    assert succ.m == 3


def test_step_without_survivors():
    q = example_configuration()
    assert construction.config_step(q, (1, 2, 3), 3, 3) is None


def test_step_gates():
    init = construction.INITIAL_CONFIGURATION

    # b before a
    assert construction.config_step(init, (2, 1, 1), 3, 3) is None
    # sum padded while a summand continues
    assert construction.config_step(init, (1, 1, 0), 3, 3) is None
    # letter beyond the limit
    assert construction.config_step(init, (1, 2, 3), 4, 2) is None

    succ = construction.config_step(init, (1, 1, 2), 3, 3)
    assert succ is not None
    assert succ.ell == 3


def test_entry_step():
    p = PEntry((0,), 0, 0, 0)

    assert construction.entry_step(p, (1, 2, 2), StepContext(3, 3, 3)) == {
        PEntry((0, 1, 2), 0, 0, 1), PEntry((0, 2, 1), 0, 0, 1)}
    assert construction.entry_step(p, (1, 2, 3), StepContext(3, 3, 3)) == set()

    empty = PEntry((), 0, 0, 0)
    assert construction.entry_step(empty, (0, 1, 2), StepContext(3, 3, 2)) == set()

    # a sum outgrowing both summands needs a carry
    ended = PEntry((1, 2), 0, 1, 1)
    assert construction.entry_step(ended, (0, 0, 1), StepContext(3, 3, 2)) == set()
    carried = PEntry((1, 2), 1, 1, 1)
    assert construction.entry_step(carried, (0, 0, 1), StepContext(3, 3, 2)) == {
        PEntry((1, 2), 0, 1, 1)}


@pytest.mark.parametrize('k,n_states,n_edges', [
    (2, 28, 112),
    (3, 110, 1032),
    (4, 859, 17662),
    pytest.param(5, 10267, 350019, marks=slow),
])
def test_naive_sizes(k, n_states, n_edges):
    d = construction.build_naive(k)

    assert d.n_states == n_states
    assert d.n_edges == n_edges


def test_base_two_has_no_multiple_state(naive):
    assert naive[2].f2 is None
    assert naive[2].f1 is not None
    assert naive[2].accepting_states('any') == [naive[2].f1]


@pytest.mark.parametrize('k', [2, 3, 4])
def test_full_base_is_trim(naive, k):
    assert construction.trim(naive[k]).n_states == naive[k].n_states


def _reaches_acceptance(d):
    alive = set(d.accepting_states())
    changed = True
    while changed:
        changed = False
        for q in range(d.n_states):
            if q not in alive and any(dst in alive for _, _, dst in d.edges(q)):
                alive.add(q)
                changed = True
    return alive


def test_trim_drops_dead_states():
    # 2 is a dead end; 3 is the unique-solution acceptor
    transitions = [
        {(1, 1, 2): (None, 1), (1, 2, 3): (None, 2)},
        {(0, 0, 0): (None, 3)},
        {},
        {},
    ]
    d = construction.CryptDfa(3, 3, transitions, 0, 3, None)
    trimmed = construction.trim(d)

    assert trimmed.n_states == 3
    assert trimmed.f1 == 2
    assert trimmed.transitions == [{(1, 1, 2): (None, 1)}, {(0, 0, 0): (None, 2)}, {}]


def test_trim_keeps_live_states():
    d = construction.build_naive(4, 2)
    trimmed = construction.trim(d)

    assert trimmed.n_states <= d.n_states
    assert _reaches_acceptance(trimmed) == set(range(trimmed.n_states))
    assert count_table(trimmed, 6).equals(count_table(d, 6))


@pytest.mark.parametrize('k,n_states,n_edges', [
    (2, 27, 111),
    (3, 93, 985),
    (4, 607, 16602),
    pytest.param(5, 6589, 330297, marks=slow),
])
def test_minimize(naive, k, n_states, n_edges):
    d = naive[k] if k in naive else construction.build_naive(k)
    minimized, count, edges = construction.minimize(d)

    assert (count, edges) == (n_states, n_edges)
    assert minimized.n_states == n_states
    assert minimized.accept_class(minimized.f1) is Solvability.UNIQUE


def test_minimize_single_state():
    d = construction.CryptDfa(2, 2, [{}], 0, None, None)
    minimized, n_states, n_edges = construction.minimize(d)

    assert (n_states, n_edges) == (1, 0)


def test_run_naive(naive):
    outcome = naive[3].run('aab$$$')
    assert outcome.status is Solvability.UNIQUE
    assert outcome.solutions == [{'a': 1, 'b': 2}]

    assert naive[2].run('aab$$$').status is Solvability.UNSOLVABLE
    assert naive[3].run('aab$aa$$$').solvable

    # ab+c=d: the sum ends before the first summand
    assert naive[4].run('abcd$$$$$').status is Solvability.UNSOLVABLE

    with pytest.raises(exceptions.NotCanonical):
        naive[3].run('bba$$$')
    with pytest.raises(exceptions.MalformedSequence):
        naive[3].run('aab$$')

    limited = construction.build_naive(3, 2)
    with pytest.raises(exceptions.WrongAlphabet):
        limited.run('abc$$$')


@pytest.mark.parametrize('k,max_size', [
    (2, 4), (3, 3), (4, 3), pytest.param(3, 4, marks=slow)])
def test_agrees_with_oracle(naive, k, max_size):
    passed, counterexample = verify_against_oracle(naive[k], max_size)
    assert passed, counterexample


def test_summand_flags_never_reset(naive):
    d = naive[4]
    for q in range(d.n_states):
        if d.configs[q] is None:
            continue
        for t, _, dst in d.edges(q):
            succ = d.configs[dst]
            if succ is None:
                continue
            assert succ.d1 >= d.configs[q].d1
            assert succ.d2 >= d.configs[q].d2
            assert succ.d1 == int(t[0] == 0)


def test_entries_share_a_domain(naive):
    for config in naive[4].configs:
        if config is not None:
            assert len({len(p.theta) for p in config.entries}) == 1
            assert list(config.entries) == sorted(set(config.entries))


def test_builds_are_deterministic(naive):
    assert persistence.save_dfa(construction.build_naive(3)) == \
        persistence.save_dfa(naive[3])


def test_resource_limit():
    with pytest.raises(exceptions.ResourceLimit) as excinfo:
        construction.build_naive(3, max_states=10)

    assert excinfo.value.n_states == 11


def test_interrupted_build():
    with patch.object(construction, 'config_step', side_effect=KeyboardInterrupt):
        with pytest.raises(exceptions.BuildInterrupted) as excinfo:
            construction.build_naive(3)

    assert excinfo.value.n_states == 1


def test_bad_parameters():
    with pytest.raises(ValueError):
        construction.build_naive(1)
    with pytest.raises(ValueError):
        construction.build_naive(3, 4)


def test_build_logs_elapsed_time(caplog):
    with caplog.at_level(logging.INFO, logger='cryptdfa.construction'):
        construction.build_naive(2)

    explored = [r.getMessage() for r in caplog.records if r.getMessage().startswith('Explored')]
    assert len(explored) == 1
    assert re.fullmatch(r"Explored base 2 with 2 letters: 28 states in \d+\.\d\ds", explored[0])
