"""Counting, closed forms, and length-lexicographic enumeration.

Every question here is answered from the automaton's graph alone, so it
works the same on naive and compressed automata and on automata loaded
without configurations. A solvable sequence of size n is an accepting path
of n+1 edges; on a compressed automaton an input trigram ``t`` follows the
edge labelled ``gamma(t)``, where ``gamma`` is the renaming accumulated so
far.
"""
import collections
import logging

from fractions import Fraction

import numpy as np
import pandas as pd

from . import exceptions, util
from .core import (
    CryptarithmSequence, decode_sequence, render_trigram, sort_key)
from .compressed import compose, invert
from .construction import checked_codes
from .oracle import oracle_catalogue, oracle_classify

logger = logging.getLogger(__name__)

COUNT_METHODS = ['vector', 'matrix']

# matrix powers are dense: states^2 arbitrary-precision entries
MATRIX_STATE_CAP = 5000


def _successors(d):
    return [[dst for _, _, dst in d.edges(q)] for q in range(d.n_states)]


def _path_counts(d, max_size):
    """Accepting paths per size, as ``[(unique, any), ...]`` for 1..max_size.

    Accepting states have no outgoing edges, so the mass arriving there
    after j steps counts exactly the sequences of j trigrams.
    """
    succ = _successors(d)

    vec = [0] * d.n_states
    vec[d.initial] = 1

    out = []
    for step in range(1, max_size + 2):
        nxt = [0] * d.n_states
        for q, paths in enumerate(vec):
            if paths:
                for dst in succ[q]:
                    nxt[dst] += paths
        vec = nxt

        if step >= 2:
            unique = vec[d.f1] if d.f1 is not None else 0
            multiple = vec[d.f2] if d.f2 is not None else 0
            out.append((unique, unique + multiple))

    return out


def _matrix_count(d, n, cls):
    if d.n_states > MATRIX_STATE_CAP:
        raise exceptions.TooLarge(
            f"Matrix counting is limited to {MATRIX_STATE_CAP} states; the "
            f"automaton has {d.n_states}.")

    adjacency = np.zeros((d.n_states, d.n_states), dtype=object)
    for q, succ in enumerate(_successors(d)):
        for dst in succ:
            adjacency[q, dst] += 1

    power = np.linalg.matrix_power(adjacency, n + 1)

    return int(sum(power[d.initial, f] for f in d.accepting_states(cls)))


def count_solvable(d, n, cls='any', method='vector'):
    """Number of canonical sequences of size ``n`` accepted under ``cls``."""
    if n < 1:
        raise ValueError(f"Size must be at least 1, got {n}")
    if cls not in ('unique', 'any'):
        raise ValueError(f"Unknown class '{cls}' (choose 'unique' or 'any')")

    if method == 'vector':
        unique, total = _path_counts(d, n)[-1]
        return unique if cls == 'unique' else total
    elif method == 'matrix':
        return _matrix_count(d, n, cls)
    else:
        raise ValueError(f"Unknown counting method '{method}' (choose from {COUNT_METHODS})")


def count_table(d, max_size):
    """A DataFrame of exact counts indexed by size, columns ``unique``/``any``."""
    counts = _path_counts(d, max_size)

    df = pd.DataFrame(
        {'unique': pd.Series([u for u, _ in counts], dtype=object),
         'any': pd.Series([a for _, a in counts], dtype=object)})
    df.index = pd.RangeIndex(1, max_size + 1, name='n')

    return df


def closed_form(k, n, cls='any'):
    """Exact count as a formula of ``n`` for base 2 (either class) and for
    solvable base-3 sequences, else None.

    No formula is known for the other cases, including uniquely solvable
    base-3 sequences.
    """
    if n < 1:
        raise ValueError(f"Size must be at least 1, got {n}")

    if k == 2:
        value = 6 * Fraction(4) ** (n - 2) - 3 * Fraction(2) ** (n - 2)
    elif k == 3 and cls == 'any':
        value = 4 * Fraction(9) ** (n - 1) - 2 * Fraction(5) ** (n - 1) - Fraction(3) ** (n - 1)
    else:
        return None

    assert value.denominator == 1, f"Non-integral closed form at k={k}, n={n}"
    return int(value)


def published_f3_formula(n):
    """A formula for uniquely solvable base-3 counts as it circulates in print.

    It disagrees with the counted values (13 rather than 19 at n=2) and is
    kept only to report that discrepancy.
    """
    return 4 * 9 ** (n - 1) - 4 * 5 ** (n - 1) - 3 ** (n - 1)


def _input_edges(d, q, gamma):
    """Edges leaving ``q`` as ``(input trigram, next gamma, dst)``, sorted.

    ``gamma`` is None on naive automata.
    """
    if gamma is None:
        return sorted((t, None, dst) for t, _, dst in d.edges(q))

    inverse = invert(gamma)

    edges = []
    for label, perm, dst in d.edges(q):
        t = tuple(inverse[x] for x in label)
        edges.append((t, compose(perm, gamma), dst))
    edges.sort(key=lambda e: e[0])

    return edges


def _initial_gamma(d):
    return tuple(range(d.k + 1)) if d.kind == 'compressed' else None


class SuffixCounts:
    """``paths(j, q)``: accepting paths of exactly j edges leaving ``q``.

    Rows are added on demand and kept for later queries.
    """

    def __init__(self, d, cls):
        self.accepting = set(d.accepting_states(cls))
        self.successors = _successors(d)
        self.rows = [[1 if q in self.accepting else 0 for q in range(d.n_states)]]

    def _extend(self, j):
        while len(self.rows) <= j:
            prev = self.rows[-1]
            self.rows.append([sum(prev[dst] for dst in succ) for succ in self.successors])

    def paths(self, j, q):
        self._extend(j)
        return self.rows[j][q]

    def tier(self, d, n):
        """Number of accepted sequences of size ``n``."""
        return self.paths(n + 1, d.initial)


# automata kept in the suffix-count cache, least recently used evicted first
SUFFIX_CACHE_SIZE = 8

_SUFFIX_CACHE = collections.OrderedDict()


def suffix_counts(d, cls):
    key = (d.content_digest(), cls)
    found = _SUFFIX_CACHE.get(key)
    if found is None:
        logger.debug("Suffix-count cache miss for %s, class %s", d, cls)
        found = SuffixCounts(d, cls)
        _SUFFIX_CACHE[key] = found
        while len(_SUFFIX_CACHE) > SUFFIX_CACHE_SIZE:
            _SUFFIX_CACHE.popitem(last=False)
    else:
        _SUFFIX_CACHE.move_to_end(key)
    return found


def _enumerate_tier(d, counts, n):
    """Accepted sequences of size ``n`` in lexicographic order."""

    path = []

    def walk(q, gamma, remaining):
        if remaining == 0:
            yield CryptarithmSequence(tuple(render_trigram(t) for t in path))
            return
        for t, next_gamma, dst in _input_edges(d, q, gamma):
            if counts.paths(remaining - 1, dst) == 0:
                continue
            path.append(t)
            yield from walk(dst, next_gamma, remaining - 1)
            path.pop()

    yield from walk(d.initial, _initial_gamma(d), n + 1)


def enumerate_solvable(d, cls='any', limit=None, max_size=None):
    """Yield accepted sequences in length-lexicographic order.

    Stops after ``limit`` sequences or once sizes exceed ``max_size``
    (default: the ``max_enumeration_size`` setting).
    """
    if max_size is None:
        max_size = util.DEFAULT_SETTINGS['max_enumeration_size']
    if limit is not None and limit < 1:
        return

    counts = suffix_counts(d, cls)
    if not counts.accepting:
        return

    emitted = 0
    for n in range(1, max_size + 1):
        if counts.tier(d, n) == 0:
            continue
        for s in _enumerate_tier(d, counts, n):
            yield s
            emitted += 1
            if limit is not None and emitted >= limit:
                return


def rank_sequence(d, s, cls='any'):
    """1-based position of ``s`` in the order of :func:`enumerate_solvable`.

    Raises:
        NotAccepted: if ``s`` is not accepted under ``cls``.
    """
    codes = checked_codes(d, s)
    n = len(codes) - 1
    counts = suffix_counts(d, cls)

    rank = sum(counts.tier(d, size) for size in range(1, n))

    q, gamma = d.initial, _initial_gamma(d)
    for pos, t in enumerate(codes):
        remaining = len(codes) - pos
        taken = None
        for t_in, next_gamma, dst in _input_edges(d, q, gamma):
            if t_in == t:
                taken = (next_gamma, dst)
                break
            rank += counts.paths(remaining - 1, dst)

        if taken is None:
            raise exceptions.NotAccepted(f"'{s}' is not accepted by {d} under class '{cls}'.")
        gamma, q = taken

    if q not in counts.accepting:
        raise exceptions.NotAccepted(f"'{s}' is not accepted by {d} under class '{cls}'.")

    return rank + 1


def unrank_sequence(d, i, cls='any', max_size=None):
    """The ``i``-th (1-based) sequence of :func:`enumerate_solvable`.

    Raises:
        IndexOutOfRange: if fewer than ``i`` sequences have size at most
            ``max_size``.
    """
    if max_size is None:
        max_size = util.DEFAULT_SETTINGS['max_enumeration_size']
    if i < 1:
        raise exceptions.IndexOutOfRange(f"Index {i} is below 1.")

    counts = suffix_counts(d, cls)

    remaining_index = i
    size = None
    for n in range(1, max_size + 1):
        tier = counts.tier(d, n)
        if remaining_index <= tier:
            size = n
            break
        remaining_index -= tier

    if size is None:
        raise exceptions.IndexOutOfRange(
            f"Only {i - remaining_index} sequences of size <= {max_size} are "
            f"accepted by {d} under class '{cls}'; index {i} is out of range.")

    trigrams = []
    q, gamma = d.initial, _initial_gamma(d)
    for remaining in range(size + 1, 0, -1):
        for t, next_gamma, dst in _input_edges(d, q, gamma):
            below = counts.paths(remaining - 1, dst)
            if remaining_index <= below:
                trigrams.append(render_trigram(t))
                q, gamma = dst, next_gamma
                break
            remaining_index -= below

    return CryptarithmSequence(tuple(trigrams))


def verify_against_oracle(d, max_size, cls='any', method='backtrack',
                          budget=None, n_processes=1):
    """Compare the automaton with the brute-force oracle up to ``max_size``.

    The enumerated language must equal the oracle catalogue, and when ``d``
    carries configurations every catalogued sequence must also run to the
    oracle's class and solutions.

    Returns:
        (passed, counterexample): ``counterexample`` is the first sequence
        in length-lexicographic order on which they disagree, or None.
    """
    catalogue = oracle_catalogue(d.k, d.s, max_size, cls=cls, budget=budget,
                                 n_processes=n_processes)
    enumerated = list(enumerate_solvable(d, cls, max_size=max_size))

    disagreement = set(map(str, catalogue)) ^ set(map(str, enumerated))
    if disagreement:
        first = min(disagreement, key=sort_key)
        logger.warning("Language mismatch up to size %d at '%s'", max_size, first)
        return False, first

    if d.has_payload:
        for s in catalogue:
            expected = oracle_classify(decode_sequence(s), d.k, method=method)
            outcome = d.run(s)
            if (outcome.status, outcome.solutions) != (expected.status, expected.solutions):
                logger.warning("Outcome mismatch at '%s': automaton %s, oracle %s",
                               s, outcome.status.value, expected.status.value)
                return False, str(s)

    logger.info("Automaton agrees with the oracle on %d sequences of size <= %d",
                len(catalogue), max_size)

    return True, None
