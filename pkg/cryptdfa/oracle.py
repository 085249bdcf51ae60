"""Brute-force reference semantics, independent of every automaton.

``oracle_solutions`` solves a single cryptarithm by search. Three engines
are available and must agree:

- ``backtrack``: digits are chosen column by column from the least
  significant end, pruning on each column's sum.
- ``exhaustive``: every injection of letters into digits is tried and
  checked with :func:`cryptdfa.core.solution_holds`.
- ``cpsat``: the OR-Tools CP-SAT model of :mod:`cryptdfa.model`, with all
  solutions enumerated.

``oracle_catalogue`` lists every canonical solvable sequence up to a size
by generating canonical term triples directly.
"""
import logging
import itertools
import multiprocessing

from ortools.sat.python import cp_model

from . import exceptions, callback, util
from . import model as mdl
from .core import (
    Cryptarithm, CryptarithmSequence, SolveOutcome, Solvability, PAD, ALL_PAD, letter,
    solution_holds, sort_key)

logger = logging.getLogger(__name__)

ORACLE_METHODS = ['backtrack', 'exhaustive', 'cpsat']


def _distinct_letters(c):
    return sorted(set(''.join(c.terms)))


def _ordered(solutions, letters):
    return sorted(solutions, key=lambda s: tuple(s[ch] for ch in letters))


def _backtrack_solutions(c, k):

    w1, w2, w3 = c.terms
    n = c.size
    leading = {term[0] for term in c.terms}

    columns = []
    for j in range(1, n + 1):
        columns.append(tuple(
            term[-j] if j <= len(term) else None for term in (w1, w2, w3)))

    assignment = {}
    used = [False] * k
    found = []

    def place(ch, digit):
        if used[digit] or (digit == 0 and ch in leading):
            return False
        assignment[ch] = digit
        used[digit] = True
        return True

    def unplace(ch):
        used[assignment.pop(ch)] = False

    def solve_column(j, carry):
        if j == n:
            if carry == 0:
                found.append(dict(assignment))
            return

        x1, x2, x3 = columns[j]
        free = [ch for ch in dict.fromkeys((x1, x2))
                if ch is not None and ch not in assignment]

        def close_column():
            total = carry
            for ch in (x1, x2):
                if ch is not None:
                    total += assignment[ch]
            digit, carry_out = total % k, total // k

            if x3 is None:
                if digit == 0:
                    solve_column(j + 1, carry_out)
            elif x3 in assignment:
                if assignment[x3] == digit:
                    solve_column(j + 1, carry_out)
            elif place(x3, digit):
                solve_column(j + 1, carry_out)
                unplace(x3)

        def assign_free(i):
            if i == len(free):
                close_column()
                return
            for digit in range(k):
                if place(free[i], digit):
                    assign_free(i + 1)
                    unplace(free[i])

        assign_free(0)

    solve_column(0, 0)

    return found


def _exhaustive_solutions(c, k):
    letters = _distinct_letters(c)

    found = []
    for digits in itertools.permutations(range(k), len(letters)):
        assignment = dict(zip(letters, digits))
        if solution_holds(c, assignment, k):
            found.append(assignment)

    return found


def _cpsat_solutions(c, k):
    letter_vars, model = mdl.generate_model(c, k)

    solver = cp_model.CpSolver()
    solver.parameters.enumerate_all_solutions = True
    solver.parameters.num_search_workers = 1

    collector = callback.AssignmentCollector(letter_vars)
    status = solver.Solve(model, collector)

    status = ["UNKNOWN", "MODEL_INVALID", "FEASIBLE", "INFEASIBLE", "OPTIMAL"][status]
    logger.debug("CP-SAT finished %s with status %s and %d solutions",
                 c, status, len(collector.assignments))

    if status in ["UNKNOWN", "MODEL_INVALID"]:
        raise RuntimeError(f"CP-SAT could not decide '{c}': {status}")

    return collector.assignments


_ENGINES = {
    'backtrack': _backtrack_solutions,
    'exhaustive': _exhaustive_solutions,
    'cpsat': _cpsat_solutions,
}


def oracle_solutions(c, k, method='backtrack'):
    """Return every base-k solution of ``c`` as letter -> digit dicts.

    Solutions are ordered by their digit vectors, letters taken in
    alphabetical order.

    Raises:
        BaseTooSmall: if ``c`` has more distinct letters than ``k``.
    """
    if method not in _ENGINES:
        raise ValueError(f"Unknown oracle method '{method}' (choose from {ORACLE_METHODS})")

    letters = _distinct_letters(c)
    if len(letters) > k:
        raise exceptions.BaseTooSmall(
            f"'{c}' has {len(letters)} distinct letters but base {k} offers "
            f"only {k} digits.")

    return _ordered(_ENGINES[method](c, k), letters)


def oracle_classify(c, k, method='backtrack'):
    return SolveOutcome.from_solutions(oracle_solutions(c, k, method=method))


def _catalogue_shapes(max_size):
    """Term-length triples of canonical candidates up to ``max_size``.

    The sum is the longest term and at most one digit longer than either
    summand, as a leading zero is forbidden.
    """
    for l1 in range(1, max_size + 1):
        for l2 in range(1, max_size + 1):
            longest = max(l1, l2)
            for l3 in range(longest, min(max_size, longest + 1) + 1):
                yield (l1, l2, l3)


def estimate_candidates(s, max_size):
    """Upper bound on the candidate triples visited by oracle_catalogue."""
    return sum(s ** sum(shape) for shape in _catalogue_shapes(max_size))


def _canonical_fillings(n_positions, s):
    """Restricted-growth strings: position values 1..s in first-use order."""

    filling = [0] * n_positions

    def fill(i, seen):
        if i == n_positions:
            yield tuple(filling)
            return
        for x in range(1, min(seen + 1, s) + 1):
            filling[i] = x
            yield from fill(i + 1, max(seen, x))

    yield from fill(0, 0)


def _catalogue_shape(args):
    k, s, shape, unique_only = args

    # positions in column order, least significant column first
    positions = []
    for j in range(1, shape[2] + 1):
        for slot in range(3):
            if j <= shape[slot]:
                positions.append((j, slot))

    found = []
    for filling in _canonical_fillings(len(positions), s):
        digits = [[None] * shape[slot] for slot in range(3)]
        for (j, slot), x in zip(positions, filling):
            digits[slot][shape[slot] - j] = letter(x)

        c = _cryptarithm_from_digits(digits)
        outcome = oracle_classify(c, k)
        if outcome.status is Solvability.UNSOLVABLE:
            continue
        if unique_only and outcome.status is not Solvability.UNIQUE:
            continue

        text = ''
        for j in range(1, shape[2] + 1):
            for slot in range(3):
                text += digits[slot][shape[slot] - j] if j <= shape[slot] else PAD
        found.append(CryptarithmSequence.from_text(text + ALL_PAD))

    return found


def _cryptarithm_from_digits(digits):
    return Cryptarithm(tuple(''.join(term) for term in digits))


def oracle_catalogue(k, s, max_size, cls='any', budget=None, n_processes=1):
    """All canonical sequences over a..(s-th letter) of size <= ``max_size``
    that are base-k solvable (``cls='any'``) or uniquely solvable
    (``cls='unique'``), in length-lexicographic order.

    Raises:
        BudgetExceeded: if the candidate count may exceed ``budget``.
    """
    if not 1 <= s <= k:
        raise ValueError(f"Letter limit {s} must lie in 1..{k}")
    if cls not in ('any', 'unique'):
        raise ValueError(f"Unknown class '{cls}' (choose 'unique' or 'any')")

    if budget is None:
        budget = util.DEFAULT_SETTINGS['oracle_budget']

    estimate = estimate_candidates(s, max_size)
    if estimate > budget:
        raise exceptions.BudgetExceeded(
            f"Catalogue of base {k}, {s} letters, size <= {max_size} may visit "
            f"{estimate} candidates, over the budget of {budget}.",
            estimate=estimate)

    logger.info("Oracle catalogue k=%d s=%d max_size=%d: at most %d candidates",
                k, s, max_size, estimate)

    tasks = [(k, s, shape, cls == 'unique') for shape in _catalogue_shapes(max_size)]

    if n_processes > 1:
        with multiprocessing.Pool(n_processes) as pool:
            results = pool.map(_catalogue_shape, tasks)
    else:
        results = [_catalogue_shape(t) for t in tasks]

    return sorted(itertools.chain.from_iterable(results), key=sort_key)
