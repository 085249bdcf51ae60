"""The compressed automaton: configurations merged up to letter renaming.

Two configurations are permutative variants when renaming the letters of
one turns it into the other. Only one representative per class is kept,
the variant whose sorted entries are smallest, and every edge carries the
renaming ``perm`` that takes the stepped configuration onto its
representative.

A permutation is a tuple ``perm`` of length k+1 with ``perm[0] == 0``
(the pad is fixed) and ``perm[x]`` the new name of letter x. Letters
outside the renamed domain are fixed, so fresh letters keep their names.

A run keeps ``gamma``, the accumulated renaming from input letters to the
letters of the current state: each input trigram is renamed by ``gamma``
before lookup and each edge composes its ``perm`` on the left.
"""
import logging
import functools
import itertools
import collections

import numpy as np

from . import exceptions
from .core import SolveOutcome
from .construction import (
    ALL_PAD_CODES, Configuration, CryptDfa, PEntry, candidate_trigrams,
    checked_codes, explore, extract_solutions, identity_permutation,
    _outcome)

logger = logging.getLogger(__name__)


class PermDfa(CryptDfa):
    """An automaton whose edges also carry letter renamings."""

    kind = 'compressed'

    def run(self, s):
        return run_compressed(self, s)


@functools.lru_cache(maxsize=None)
def _permutation_tables(m):
    perms = np.array(list(itertools.permutations(range(m))), dtype=np.int64)
    inverses = np.argsort(perms, axis=1)
    return perms, inverses


def compose(outer, inner):
    """The renaming ``outer`` after ``inner``."""
    return tuple(outer[x] for x in inner)


def invert(perm):
    inverse = [0] * len(perm)
    for x, y in enumerate(perm):
        inverse[y] = x
    return tuple(inverse)


def rename_config(q, perm):
    """Apply the letter renaming ``perm`` to every assignment of ``q``."""
    m = q.m
    entries = []
    for p in q.entries:
        theta = [0] * m
        for i, digit in enumerate(p.theta):
            theta[perm[i + 1] - 1] = digit
        entries.append(PEntry(tuple(theta), p.c, p.b1, p.b2))

    return Configuration(q.d1, q.d2, q.ell, tuple(sorted(entries)))


def canonicalize_config(q, k):
    """Return the representative of the variant class of ``q`` and a
    permutation taking ``q`` onto it.

    Every renaming of the domain a_1..a_m is tried at once: each entry is
    packed into one integer that orders like the entry itself, the keys of
    each renamed configuration are sorted, and the lexicographically
    smallest row wins.
    """
    m = q.m
    if m <= 1:
        return q, identity_permutation(k)

    perms, inverses = _permutation_tables(m)

    theta = np.array([p.theta for p in q.entries], dtype=np.int64)
    flags = np.array([p.c * 4 + p.b1 * 2 + p.b2 for p in q.entries], dtype=np.int64)

    # renamed[j, e, x] is the digit of letter x in entry e after renaming j
    renamed = np.transpose(theta[:, inverses], (1, 0, 2))
    radix = k ** np.arange(m - 1, -1, -1, dtype=np.int64)
    keys = np.sort((renamed @ radix) * 8 + flags, axis=1)

    best = np.lexsort(keys[:, ::-1].T)[0]

    perm = (0,) + tuple(int(x) + 1 for x in perms[best]) + tuple(range(m + 1, k + 1))

    return rename_config(q, perm), perm


def build_compressed(k, s=None, max_states=None, progress_interval=None):
    """Build the compressed automaton for base ``k`` and ``s`` letters."""
    if s is None:
        s = k

    cache = {}
    hits = 0

    def normalize(q):
        nonlocal hits
        found = cache.get(q)
        if found is None:
            found = canonicalize_config(q, k)
            cache[q] = found
        else:
            hits += 1
        return found

    configs, transitions, initial, f1, f2 = explore(
        k, s, normalize=normalize, max_states=max_states,
        progress_interval=progress_interval)

    logger.debug("Canonicalized %d distinct configurations (%d cache hits)",
                 len(cache), hits)

    return PermDfa(k, s, transitions, initial, f1, f2, configs=configs)


def run_compressed(d, s):
    codes = checked_codes(d, s)
    occurring = {x for t in codes for x in t if x}

    gamma = identity_permutation(d.k)
    q = d.initial
    for t in codes[:-1]:
        edge = d.transitions[q].get(tuple(gamma[x] for x in t))
        if edge is None:
            return SolveOutcome.from_solutions([])
        perm, q = edge
        gamma = compose(perm, gamma)

    edge = d.transitions[q].get(ALL_PAD_CODES)
    if edge is None:
        return SolveOutcome.from_solutions([])

    return _outcome(d, extract_solutions(d.config(q), occurring, gamma), edge[1])


def expand(d):
    """Unfold a compressed automaton into the naive automaton of the same
    base and letter limit.

    A naive state is a representative together with the renaming from its
    own letters to the representative's. Trigrams are visited in the order
    :func:`cryptdfa.construction.explore` uses, so the result is numbered
    exactly as ``build_naive`` numbers it.

    Raises:
        PayloadUnavailable: if ``d`` was loaded without configurations.
    """
    if not d.has_payload:
        raise exceptions.PayloadUnavailable(
            "Expanding a compressed automaton needs its configurations.")

    F1, F2 = -1, -2

    start = d.config(d.initial)
    identity = identity_permutation(d.k)

    ids = {start: 0}
    configs = [start]
    frontier = collections.deque([(d.initial, identity)])
    transitions = []

    while frontier:
        rep, gamma = frontier.popleft()
        q = configs[len(transitions)]

        edges = {}
        for t in candidate_trigrams(q.d1, q.d2, q.ell, d.k, d.s):
            edge = d.transitions[rep].get(tuple(gamma[x] for x in t))
            if edge is None:
                continue
            perm, dst = edge

            if dst == d.f1 or dst == d.f2:
                edges[t] = (None, F1 if dst == d.f1 else F2)
                continue

            succ_gamma = compose(perm, gamma)
            succ = rename_config(d.config(dst), invert(succ_gamma))

            target = ids.get(succ)
            if target is None:
                target = len(configs)
                ids[succ] = target
                configs.append(succ)
                frontier.append((dst, succ_gamma))
            edges[t] = (None, target)

        transitions.append(edges)

        assert rename_config(q, gamma) == d.config(rep), \
            f"Representative {rep} does not match its unfolded configuration"

    accept_ids = {}
    reached = {dst for edges in transitions for _, dst in edges.values() if dst < 0}
    for marker in (F1, F2):
        if marker in reached:
            accept_ids[marker] = len(configs) + len(accept_ids)

    for edges in transitions:
        for t, (perm, dst) in edges.items():
            if dst < 0:
                edges[t] = (None, accept_ids[dst])

    for _ in accept_ids:
        configs.append(None)
        transitions.append({})

    logger.info("Expanded %d compressed states into %d states",
                d.n_states, len(configs))

    return CryptDfa(d.k, d.s, transitions, 0, accept_ids.get(F1),
                    accept_ids.get(F2), configs=configs)
