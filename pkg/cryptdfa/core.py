"""Cryptarithms, their sequential (trigram) form, and canonical naming.

A cryptarithm is stored as three terms written most-significant letter
first, exactly as a puzzle is printed (``send + more = money``). Its
sequential form reads the three terms column by column from the least
significant digit, one trigram per column, padding finished terms with
``$`` and closing with the all-pad trigram ``$$$``::

    >>> encode_sequence(Cryptarithm.from_terms('send', 'more', 'money'))
    CryptarithmSequence('deynreeonsmo$$m$$$')

Inside automata a symbol is an integer: 0 is the pad ``$`` and i >= 1 is
the letter a_i, rendered 'a', 'b', ... . The integer order is the symbol
order used by length-lexicographic comparison.
"""
import logging
import enum
import itertools

from dataclasses import dataclass

from . import exceptions

logger = logging.getLogger(__name__)

PAD = '$'
LETTERS = 'abcdefghijklmnopqrstuvwxyz'
ALL_PAD = PAD * 3


def letter(i):
    """Render the letter a_i (1-based) as 'a', 'b', ..."""
    if not 1 <= i <= len(LETTERS):
        raise exceptions.WrongAlphabet(f"Letter index {i} cannot be rendered.")
    return LETTERS[i - 1]


def symbol_code(ch):
    if ch == PAD:
        return 0
    idx = LETTERS.find(ch)
    if idx < 0 or len(ch) != 1:
        raise exceptions.WrongAlphabet(
            f"Symbol '{ch}' is neither the pad '{PAD}' nor a letter a..z.")
    return idx + 1


def symbol_char(code):
    return PAD if code == 0 else letter(code)


def trigram_codes(trigram):
    return tuple(symbol_code(ch) for ch in trigram)


def render_trigram(codes):
    return ''.join(symbol_char(x) for x in codes)


@dataclass(frozen=True)
class Cryptarithm:
    """The equation ``terms[0] + terms[1] = terms[2]`` over letters."""

    terms: tuple

    def __post_init__(self):
        if len(self.terms) != 3:
            raise ValueError(f"A cryptarithm has three terms, got {self.terms!r}")
        for term in self.terms:
            if not isinstance(term, str) or not term or not term.isalpha():
                raise ValueError(f"Term {term!r} must be a non-empty letter string")

    @classmethod
    def from_terms(cls, w1, w2, w3):
        return cls((w1, w2, w3))

    @property
    def size(self):
        return max(len(t) for t in self.terms)

    def letters(self):
        """Distinct letters in order of first occurrence in the sequential form."""
        return sequence_letters(encode_sequence(self))

    def __str__(self):
        return f"{self.terms[0]}+{self.terms[1]}={self.terms[2]}"


def _check_trigrams(trigrams):

    if len(trigrams) < 2:
        raise exceptions.MalformedSequence(
            f"A sequence needs at least one column before '{ALL_PAD}'.")

    for pos, tri in enumerate(trigrams):
        if len(tri) != 3:
            raise exceptions.MalformedSequence(
                f"Trigram {pos + 1} ('{tri}') does not have three symbols.")
        for ch in tri:
            if ch != PAD and not ch.isalpha():
                raise exceptions.MalformedSequence(
                    f"Trigram {pos + 1} ('{tri}') holds symbol '{ch}'.")

    if trigrams[-1] != ALL_PAD:
        raise exceptions.MalformedSequence(
            f"Sequence must end with '{ALL_PAD}', ends with '{trigrams[-1]}'.")

    if PAD in trigrams[0]:
        raise exceptions.MalformedSequence(
            f"First trigram '{trigrams[0]}' leaves a term empty.")

    # a sum shorter than a summand pads slot 3 early; such puzzles are
    # unsolvable but still have a sequential form
    ended = [False, False, False]
    for pos, tri in enumerate(trigrams[:-1]):
        if tri == ALL_PAD:
            raise exceptions.MalformedSequence(
                f"All-pad trigram at position {pos + 1} before the end.")
        for i in range(3):
            if tri[i] == PAD:
                ended[i] = True
            elif ended[i]:
                raise exceptions.MalformedSequence(
                    f"Term {i + 1} resumes at trigram {pos + 1} ('{tri}') "
                    f"after a pad.")


@dataclass(frozen=True)
class CryptarithmSequence:
    """A well-formed sequential form: trigrams closed by ``$$$``."""

    trigrams: tuple

    def __post_init__(self):
        _check_trigrams(self.trigrams)

    @classmethod
    def from_text(cls, text):
        text = ''.join(text.split())
        if len(text) % 3:
            raise exceptions.MalformedSequence(
                f"Sequence '{text}' has {len(text)} symbols, not a multiple "
                f"of three.")
        return cls(tuple(text[i:i + 3] for i in range(0, len(text), 3)))

    @property
    def size(self):
        return len(self.trigrams) - 1

    def codes(self):
        """The trigrams as integer symbol triples."""
        return tuple(trigram_codes(t) for t in self.trigrams)

    def __len__(self):
        return len(self.trigrams)

    def __str__(self):
        return ''.join(self.trigrams)

    def __repr__(self):
        return f"CryptarithmSequence('{self}')"


def as_sequence(s):
    if isinstance(s, CryptarithmSequence):
        return s
    return CryptarithmSequence.from_text(s)


def encode_sequence(c):
    n = c.size
    trigrams = []
    for j in range(1, n + 1):
        trigrams.append(''.join(
            term[-j] if j <= len(term) else PAD for term in c.terms))
    trigrams.append(ALL_PAD)

    return CryptarithmSequence(tuple(trigrams))


def decode_sequence(s):
    s = as_sequence(s)

    terms = []
    for slot in range(3):
        digits = [tri[slot] for tri in s.trigrams[:-1] if tri[slot] != PAD]
        if not digits:
            raise exceptions.MalformedSequence(
                f"Term {slot + 1} of '{s}' is empty.")
        terms.append(''.join(reversed(digits)))

    return Cryptarithm(tuple(terms))


def sequence_letters(s):
    seen = []
    for tri in as_sequence(s).trigrams:
        for ch in tri:
            if ch != PAD and ch not in seen:
                seen.append(ch)
    return seen


def relabel(c, gamma):
    """Apply the letter map ``gamma`` to every term of ``c``."""
    return Cryptarithm(tuple(''.join(gamma[ch] for ch in t) for t in c.terms))


def canonicalize(c, k=None):
    """Return the canonical form of ``c`` and the letter bijection used.

    Letters are renamed a, b, c, ... in order of first occurrence in the
    sequential form. ``k`` bounds the number of distinct letters.
    """
    order = sequence_letters(encode_sequence(c))

    limit = len(LETTERS) if k is None else min(k, len(LETTERS))
    if len(order) > limit:
        raise exceptions.TooManyLetters(
            f"'{c}' uses {len(order)} distinct letters, more than the "
            f"{limit} available.")

    gamma = {ch: letter(i + 1) for i, ch in enumerate(order)}

    return relabel(c, gamma), gamma


def is_canonical(s):
    seen = 0
    for tri in as_sequence(s).trigrams:
        for ch in tri:
            if ch == PAD:
                continue
            idx = LETTERS.find(ch) + 1
            if idx == 0 or idx > seen + 1:
                return False
            if idx == seen + 1:
                seen += 1
    return True


def sort_key(s):
    text = str(as_sequence(s))
    return (len(text), tuple(0 if ch == PAD else ord(ch) for ch in text))


def compare_length_lex(s1, s2):
    """Return -1, 0 or 1 as ``s1`` sorts before, with, or after ``s2``."""
    k1, k2 = sort_key(s1), sort_key(s2)
    return (k1 > k2) - (k1 < k2)


def solution_holds(c, assignment, k):
    """Check ``assignment`` against ``c`` by column addition with carries.

    Independent of the automaton and oracle search code: every letter must
    be assigned a distinct base-k digit, leading letters must be nonzero,
    and adding the summands column by column must reproduce the sum.
    """
    letters = set(itertools.chain.from_iterable(c.terms))
    if set(assignment) != letters:
        return False

    values = list(assignment.values())
    if len(set(values)) != len(values) or any(not 0 <= v < k for v in values):
        return False

    if any(assignment[term[0]] == 0 for term in c.terms):
        return False

    w1, w2, w3 = c.terms
    carry = 0
    for j in range(1, c.size + 1):
        total = carry
        for term in (w1, w2):
            if j <= len(term):
                total += assignment[term[-j]]
        expected = assignment[w3[-j]] if j <= len(w3) else 0
        if total % k != expected:
            return False
        carry = total // k

    return carry == 0


class Solvability(enum.Enum):
    UNSOLVABLE = 'unsolvable'
    UNIQUE = 'unique'
    MULTIPLE = 'multiple'


@dataclass
class SolveOutcome:
    """How many solutions a cryptarithm has, with the solutions found.

    ``solutions`` holds letter -> digit dicts; oracle outcomes list every
    solution, automaton outcomes list every surviving assignment.
    """

    status: Solvability
    solutions: list
    count: int

    @classmethod
    def from_solutions(cls, solutions):
        solutions = list(solutions)
        if not solutions:
            status = Solvability.UNSOLVABLE
        elif len(solutions) == 1:
            status = Solvability.UNIQUE
        else:
            status = Solvability.MULTIPLE
        return cls(status=status, solutions=solutions, count=len(solutions))

    @property
    def solvable(self):
        return self.status is not Solvability.UNSOLVABLE
