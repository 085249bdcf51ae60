import pyparsing as pp

from . import exceptions
from .core import Cryptarithm, CryptarithmSequence, PAD


def _puzzle_grammar():
    term = pp.Word(pp.alphas)
    return (
        term('w1') + pp.Suppress('+') + term('w2') +
        pp.Suppress('=') + term('w3')
    )


def _sequence_grammar():
    symbol = pp.Char(pp.alphas + PAD)
    return pp.OneOrMore(symbol)


def parse_puzzle(text):
    """Parse ``TERM1+TERM2=TERM3`` into a Cryptarithm with lower-case letters.

    Raises:
        PuzzleParseError: with the 0-based position of the first offending
            character.
    """
    try:
        parsed = _puzzle_grammar().parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise exceptions.PuzzleParseError(
            f"Cannot parse puzzle '{text}' at position {e.loc}: expected "
            f"TERM1+TERM2=TERM3", position=e.loc)

    return Cryptarithm.from_terms(
        parsed['w1'].lower(), parsed['w2'].lower(), parsed['w3'].lower())


def parse_sequence(text):
    """Parse a sequence such as ``'dey nre eon smo $$m $$$'``.

    Whitespace between symbols is cosmetic and dropped.
    """
    try:
        symbols = _sequence_grammar().parse_string(text, parse_all=True)
    except pp.ParseException as e:
        raise exceptions.MalformedSequence(
            f"Unexpected symbol in sequence '{text}' at position {e.loc}.")

    return CryptarithmSequence.from_text(''.join(symbols))
