"""Configurations, their transition relation, and the naive automaton.

A state of the automaton carries a :class:`Configuration`
``<d1, d2, ell, P>``:

- ``d1``/``d2`` record that the first/second summand has ended (the last
  trigram padded that slot);
- ``ell`` is the index of the next letter that may appear for the first
  time, capped at ``k``;
- ``P`` holds every surviving :class:`PEntry` ``[theta, c, b1, b2]``: an
  injective assignment of digits to the letters a_1..a_m, the carry into the
  next column, and for each summand whether its current leading digit is
  nonzero.

Reading ``$$$`` ends the input. It leads to the accepting state ``f1`` when
exactly one assignment survives and to ``f2`` when several do.

Symbols are integers (0 for the pad, i for a_i) and trigrams are integer
triples; see :mod:`cryptdfa.core`.
"""
import time
import logging
import hashlib
import itertools
import functools
import collections

from typing import NamedTuple

import numpy as np

from . import exceptions, util
from .core import (
    LETTERS, PAD, SolveOutcome, Solvability, as_sequence, is_canonical,
    letter)

logger = logging.getLogger(__name__)

ALL_PAD_CODES = (0, 0, 0)


class PEntry(NamedTuple):
    theta: tuple   # theta[i] is the digit of letter a_{i+1}
    c: int
    b1: int
    b2: int


class Configuration(NamedTuple):
    d1: int
    d2: int
    ell: int
    entries: tuple  # sorted and duplicate-free

    @property
    def m(self):
        return len(self.entries[0].theta)


INITIAL_CONFIGURATION = Configuration(0, 0, 1, (PEntry((), 0, 0, 0),))


class StepContext(NamedTuple):
    k: int
    s: int
    m_new: int      # every successor assignment has domain a_1..a_{m_new}


def gate_trigram(ell, t, k, s):
    """Return the next-letter index after reading ``t``, or None.

    Each slot may repeat a letter already seen or introduce the single next
    fresh letter a_ell, which must lie within the letter limit ``s``.
    """
    for x in t:
        if x == 0:
            continue
        if x > ell or x > s:
            return None
        if x == ell:
            ell = min(k, ell + 1)
    return ell


def domain_size(ell, k, s):
    """Size of the assignment domain once the next-letter index is ``ell``.

    At full base the assignments are promoted to all of a_1..a_k as soon as
    k-1 letters have appeared; the last letter then has a single choice.
    """
    if s == k and ell == k:
        return k
    return ell - 1


def _extensions(theta, m_new, k):
    if m_new == len(theta):
        yield theta
        return

    free = [d for d in range(k) if d not in theta]
    for tail in itertools.permutations(free, m_new - len(theta)):
        yield theta + tail


def entry_step(p, t, ctx):
    """All successors of one entry on trigram ``t``.

    An empty set means the entry does not survive.
    """
    x1, x2, x3 = t

    if (p.b1 == 0 and x1 == 0) or (p.b2 == 0 and x2 == 0):
        return set()

    # the sum may only outgrow both summands to absorb a carry, otherwise
    # its leading digit ends up zero
    if x1 == 0 and x2 == 0 and x3 != 0 and p.c == 0:
        return set()

    k = ctx.k
    out = set()
    for theta in _extensions(p.theta, ctx.m_new, k):
        v1 = theta[x1 - 1] if x1 else 0
        v2 = theta[x2 - 1] if x2 else 0
        v3 = theta[x3 - 1] if x3 else 0

        total = p.c + v1 + v2
        if total % k != v3:
            continue

        out.add(PEntry(
            theta, total // k,
            0 if (x1 and v1 == 0) else 1,
            0 if (x2 and v2 == 0) else 1))

    return out


def config_step(q, t, k, s):
    """The successor configuration of ``q`` on ``t``, or None if undefined."""
    x1, x2, x3 = t

    if x3 == 0 and (x1 or x2):
        return None
    if (q.d1 and x1) or (q.d2 and x2):
        return None

    ell = gate_trigram(q.ell, t, k, s)
    if ell is None:
        return None

    ctx = StepContext(k, s, domain_size(ell, k, s))

    entries = set()
    for p in q.entries:
        entries |= entry_step(p, t, ctx)

    if not entries:
        return None

    return Configuration(int(x1 == 0), int(x2 == 0), ell, tuple(sorted(entries)))


@functools.lru_cache(maxsize=None)
def candidate_trigrams(d1, d2, ell, k, s):
    """Trigrams that pass the pad and canonicity gates, in symbol order."""
    symbols = range(0, min(k, s) + 1)

    out = []
    for t in itertools.product(symbols, repeat=3):
        if t[2] == 0 and (t[0] or t[1]):
            continue
        if (d1 and t[0]) or (d2 and t[1]):
            continue
        if gate_trigram(ell, t, k, s) is None:
            continue
        out.append(t)

    return tuple(out)


def identity_permutation(k):
    return tuple(range(k + 1))


class CryptDfa:
    """A cryptarithm automaton.

    States are numbered ``0..n_states-1``. ``transitions[q]`` maps a trigram
    to ``(perm, dst)``; ``perm`` is None on naive automata. ``configs[q]``
    is the configuration of a non-accepting state, or None when the
    automaton was loaded without payloads (and always for f1/f2). ``f2``
    (and, for letter-limited automata, ``f1``) is None when unreachable.
    """

    kind = 'naive'

    def __init__(self, k, s, transitions, initial, f1, f2, configs=None):
        self.k = k
        self.s = s
        self.transitions = transitions
        self.initial = initial
        self.f1 = f1
        self.f2 = f2
        self.configs = configs
        self._digest = None

    @property
    def n_states(self):
        return len(self.transitions)

    @property
    def n_edges(self):
        return sum(len(edges) for edges in self.transitions)

    @property
    def has_payload(self):
        return self.configs is not None

    def edges(self, q):
        """Yield ``(trigram, perm, dst)`` for each edge leaving ``q``."""
        for t, (perm, dst) in self.transitions[q].items():
            yield t, perm, dst

    def accepting_states(self, cls='any'):
        if cls == 'unique':
            states = [self.f1]
        elif cls == 'any':
            states = [self.f1, self.f2]
        else:
            raise ValueError(f"Unknown class '{cls}' (choose 'unique' or 'any')")
        return [q for q in states if q is not None]

    def accept_class(self, q):
        """Solvability reported by reaching ``q``, or None if not accepting."""
        if q is not None and q == self.f1:
            return Solvability.UNIQUE
        if q is not None and q == self.f2:
            return Solvability.MULTIPLE
        return None

    def config(self, q):
        if self.configs is None or self.configs[q] is None:
            raise exceptions.PayloadUnavailable(
                f"State {q} carries no configuration; solutions cannot be "
                f"extracted from a topology-only automaton.")
        return self.configs[q]

    def content_digest(self):
        if self._digest is not None:
            return self._digest

        h = hashlib.sha256()
        h.update(f"{self.kind} {self.k} {self.s} {self.initial} {self.f1} {self.f2}\n".encode())
        for q in range(self.n_states):
            for t, perm, dst in sorted(self.edges(q), key=lambda e: e[0]):
                h.update(f"{q} {t} {perm} {dst}\n".encode())
        self._digest = h.hexdigest()
        return self._digest

    def run(self, s):
        return run_naive(self, s)

    def __repr__(self):
        return (f"{type(self).__name__}(k={self.k}, s={self.s}, "
                f"states={self.n_states}, edges={self.n_edges})")


def check_parameters(k, s):
    if not 2 <= k <= 26:
        raise ValueError(f"Base {k} must lie in 2..26")
    if not 1 <= s <= k:
        raise ValueError(f"Letter limit {s} must lie in 1..{k}")


def explore(k, s, normalize=None, max_states=None, progress_interval=None):
    """Breadth-first closure of config_step from the initial configuration.

    ``normalize(config)`` may map each successor to a representative and
    return ``(representative, perm)``; the naive automaton uses none.

    Returns:
        (configs, transitions, initial, f1, f2) with accepting states
        numbered after the configurations.
    """
    check_parameters(k, s)

    if max_states is None:
        max_states = util.DEFAULT_SETTINGS['max_states']
    if progress_interval is None:
        progress_interval = util.DEFAULT_SETTINGS['progress_interval']

    start = time.time()
    accept_perm = identity_permutation(k) if normalize else None

    # accepting states get their ids once the exploration is over
    F1, F2 = -1, -2

    ids = {INITIAL_CONFIGURATION: 0}
    configs = [INITIAL_CONFIGURATION]
    transitions = []
    queue = collections.deque([0])

    try:
        while queue:
            q = configs[queue.popleft()]
            edges = {}

            for t in candidate_trigrams(q.d1, q.d2, q.ell, k, s):
                succ = config_step(q, t, k, s)
                if succ is None:
                    continue

                if t == ALL_PAD_CODES:
                    edges[t] = (accept_perm, F1 if len(succ.entries) == 1 else F2)
                    continue

                perm = None
                if normalize is not None:
                    succ, perm = normalize(succ)

                dst = ids.get(succ)
                if dst is None:
                    dst = len(configs)
                    ids[succ] = dst
                    configs.append(succ)
                    queue.append(dst)

                    if len(configs) > max_states:
                        raise exceptions.ResourceLimit(
                            f"Building base {k} with {s} letters exceeded "
                            f"{max_states} states.", n_states=len(configs))
                    if len(configs) % progress_interval == 0:
                        logger.info("Discovered %d states, %d awaiting expansion",
                                    len(configs), len(queue))

                edges[t] = (perm, dst)

            transitions.append(edges)

    except KeyboardInterrupt:
        raise exceptions.BuildInterrupted(
            f"Build of base {k} with {s} letters interrupted.",
            n_states=len(configs))

    reached = {dst for edges in transitions for _, dst in edges.values() if dst < 0}

    accept_ids = {}
    for marker in (F1, F2):
        if marker in reached:
            accept_ids[marker] = len(configs) + len(accept_ids)

    for edges in transitions:
        for t, (perm, dst) in edges.items():
            if dst < 0:
                edges[t] = (perm, accept_ids[dst])

    for _ in accept_ids:
        configs.append(None)
        transitions.append({})

    logger.info("Explored base %d with %d letters: %d states in %.2fs",
                k, s, len(configs), time.time() - start)

    return configs, transitions, 0, accept_ids.get(F1), accept_ids.get(F2)


def build_naive(k, s=None, max_states=None, progress_interval=None):
    """Build the naive automaton over all k letters, or only the first s."""
    if s is None:
        s = k

    configs, transitions, initial, f1, f2 = explore(
        k, s, max_states=max_states, progress_interval=progress_interval)

    return CryptDfa(k, s, transitions, initial, f1, f2, configs=configs)


def trim(d):
    """Drop states that cannot reach an accepting state, keeping order."""
    accepting = set(d.accepting_states('any'))

    predecessors = collections.defaultdict(list)
    for q in range(d.n_states):
        for _, _, dst in d.edges(q):
            predecessors[dst].append(q)

    alive = set(accepting)
    stack = list(accepting)
    while stack:
        q = stack.pop()
        for p in predecessors[q]:
            if p not in alive:
                alive.add(p)
                stack.append(p)

    if d.initial not in alive:
        alive.add(d.initial)

    kept = [q for q in range(d.n_states) if q in alive]
    renumber = {q: i for i, q in enumerate(kept)}

    transitions = []
    for q in kept:
        transitions.append({
            t: (perm, renumber[dst]) for t, (perm, dst) in d.transitions[q].items()
            if dst in alive})

    configs = None
    if d.configs is not None:
        configs = [d.configs[q] for q in kept]

    logger.info("Trimmed %d dead states", d.n_states - len(kept))

    return type(d)(
        d.k, d.s, transitions, renumber[d.initial],
        renumber.get(d.f1), renumber.get(d.f2), configs=configs)


def minimize(d):
    """Partition-refinement minimization keeping f1 and f2 apart.

    The transition function stays partial: two states are merged only if,
    for every edge label, both lack the edge or both lead to merged states.
    Configurations are dropped, so the result cannot extract solutions.

    Returns:
        (minimized automaton, state count, edge count)
    """
    n = d.n_states

    labels = {}
    for q in range(n):
        for t, perm, _ in d.edges(q):
            labels.setdefault((t, perm), len(labels))

    table = np.full((n, max(len(labels), 1)), -1, dtype=np.int64)
    for q in range(n):
        for t, perm, dst in d.edges(q):
            table[q, labels[(t, perm)]] = dst

    classes = np.zeros(n, dtype=np.int64)
    if d.f1 is not None:
        classes[d.f1] = 1
    if d.f2 is not None:
        classes[d.f2] = 2
    _, classes = np.unique(classes, return_inverse=True)
    classes = classes.reshape(-1)
    n_classes = int(classes.max()) + 1

    rounds = 0
    while True:
        rounds += 1
        targets = np.where(table >= 0, classes[table], -1)
        signature = np.column_stack([classes, targets])
        _, refined = np.unique(signature, axis=0, return_inverse=True)
        refined = refined.reshape(-1)
        n_refined = int(refined.max()) + 1

        if n_refined == n_classes:
            break
        classes, n_classes = refined, n_refined

    logger.info("Minimized %d states to %d classes in %d rounds", n, n_classes, rounds)

    # number classes by their first member so the result is deterministic
    _, first_member = np.unique(classes, return_index=True)
    order = np.argsort(first_member)
    renumber = np.empty(n_classes, dtype=np.int64)
    renumber[order] = np.arange(n_classes)
    classes = renumber[classes]
    representatives = np.sort(first_member)

    transitions = []
    for rep in representatives:
        transitions.append({
            t: (perm, int(classes[dst])) for t, (perm, dst) in d.transitions[rep].items()})

    def mapped(q):
        return None if q is None else int(classes[q])

    minimized = type(d)(d.k, d.s, transitions, mapped(d.initial),
                        mapped(d.f1), mapped(d.f2))

    return minimized, minimized.n_states, minimized.n_edges


def checked_codes(d, s):
    """Integer trigrams of ``s`` after checking it is a valid input of ``d``."""
    s = as_sequence(s)

    allowed = PAD + LETTERS[:d.s]
    for tri in s.trigrams:
        for ch in tri:
            if ch not in allowed:
                raise exceptions.WrongAlphabet(
                    f"'{s}' uses '{ch}', outside the letters a..{letter(d.s)}.")

    if not is_canonical(s):
        raise exceptions.NotCanonical(
            f"'{s}' is not canonical: letters must first appear in the order "
            f"a, b, c, ...")

    return s.codes()


def extract_solutions(config, occurring, gamma=None):
    """Solutions read off the entries ``[theta, 0, 1, 1]`` of ``config``.

    ``gamma`` maps input letters to the letters of ``config`` (identity when
    None). Assignments are restricted to the ``occurring`` letters.
    """
    solutions = []
    for p in config.entries:
        if (p.c, p.b1, p.b2) != (0, 1, 1):
            continue
        solutions.append({
            letter(x): p.theta[(gamma[x] if gamma else x) - 1] for x in occurring})

    occurring = sorted(occurring)
    return sorted(solutions, key=lambda sol: tuple(sol[letter(x)] for x in occurring))


def _outcome(d, solutions, accepted_at):
    outcome = SolveOutcome.from_solutions(solutions)

    expected = Solvability.UNIQUE if accepted_at == d.f1 else Solvability.MULTIPLE
    assert outcome.status is expected, \
        f"Accepted at state {accepted_at} but {outcome.count} solutions survive"

    return outcome


def run_naive(d, s):
    codes = checked_codes(d, s)
    occurring = {x for t in codes for x in t if x}

    q = d.initial
    for t in codes[:-1]:
        edge = d.transitions[q].get(t)
        if edge is None:
            return SolveOutcome.from_solutions([])
        q = edge[1]

    edge = d.transitions[q].get(ALL_PAD_CODES)
    if edge is None:
        return SolveOutcome.from_solutions([])

    return _outcome(d, extract_solutions(d.config(q), occurring), edge[1])
