import os
import sys
import logging
import argparse

from . import analysis, compressed, construction, exceptions, oracle, persistence, util
from .core import (
    Solvability, SolveOutcome, canonicalize, decode_sequence, encode_sequence)
from .parser import parse_puzzle, parse_sequence

logger = logging.getLogger(__name__)


def _add_automaton_args(parser):
    parser.add_argument(
        '--base', '-k', type=int, required=True,
        help='The base (number of digits) the puzzles are solved in.'
    )
    parser.add_argument(
        '--letters', '-s', type=int, default=None,
        help='Restrict puzzles to this many distinct letters '
             '(default: as many as the base).'
    )
    parser.add_argument(
        '--dfa', default=None,
        help='An automaton file written by `cryptdfa build`; otherwise one '
             'is taken from the cache or built on demand.'
    )


def _add_class_arg(parser):
    parser.add_argument(
        '--unique', action='store_true',
        help='Only consider uniquely solvable puzzles (default: solvable).'
    )


def parse_args(argv):
    parser = argparse.ArgumentParser(
        prog='cryptdfa',
        description='Automata that recognize solvable cryptarithms.')

    parser.add_argument(
        '--config', default=None,
        help='A YAML file overriding the default settings.'
    )
    parser.add_argument(
        '-v', '--verbose', action='count', default=0,
        help='Log progress (-v) or debugging detail (-vv).'
    )

    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('build', help='Build an automaton and report its size.')
    p.add_argument('--base', '-k', type=int, required=True)
    p.add_argument('--letters', '-s', type=int, default=None)
    p.add_argument(
        '--compressed', action='store_true',
        help='Merge configurations that differ by a renaming of letters.'
    )
    p.add_argument('--out', default=None, help='Where to write the automaton.')
    p.add_argument('--mode', choices=persistence.PAYLOAD_MODES, default='full')

    p = sub.add_parser('solve', help='Solve one cryptarithm.')
    p.add_argument('--base', '-k', type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument('--puzzle', help='A puzzle such as SEND+MORE=MONEY.')
    group.add_argument('--sequence', help='A canonical sequence such as aab$$$.')
    source = p.add_mutually_exclusive_group()
    source.add_argument('--dfa', default=None)
    source.add_argument(
        '--brute', action='store_true',
        help='Solve by search instead of with an automaton.'
    )
    p.add_argument('--method', choices=oracle.ORACLE_METHODS, default='backtrack',
                   help='The search engine used by --brute.')

    p = sub.add_parser('count', help='Count solvable puzzles of one size.')
    _add_automaton_args(p)
    _add_class_arg(p)
    p.add_argument('--size', '-n', type=int, required=True)
    p.add_argument(
        '--table', action='store_true',
        help='Print the counts of every size up to --size.'
    )
    p.add_argument('--csv', default=None, help='Write the count table as a csv.')
    p.add_argument('--method', choices=analysis.COUNT_METHODS, default='vector')

    p = sub.add_parser('enum', help='List solvable puzzles in order.')
    _add_automaton_args(p)
    _add_class_arg(p)
    limit = p.add_mutually_exclusive_group(required=True)
    limit.add_argument('--limit', type=int, help='How many puzzles to list.')
    limit.add_argument('--max-size', type=int, help='List every puzzle up to this size.')

    p = sub.add_parser('rank', help='Position of a puzzle in the enum order.')
    _add_automaton_args(p)
    _add_class_arg(p)
    p.add_argument('--sequence', required=True)

    p = sub.add_parser('unrank', help='The puzzle at a position of the enum order.')
    _add_automaton_args(p)
    _add_class_arg(p)
    p.add_argument('--index', '-i', type=int, required=True)

    p = sub.add_parser('minimize', help='Minimize an automaton and report its size.')
    p.add_argument('--dfa', required=True)
    p.add_argument('--out', default=None)

    p = sub.add_parser('verify', help='Cross-check an automaton against search.')
    _add_automaton_args(p)
    _add_class_arg(p)
    p.add_argument('--max-size', type=int, required=True)
    p.add_argument('--method', choices=oracle.ORACLE_METHODS, default='backtrack')
    p.add_argument(
        '-p', '--n_processes', default=None, type=int,
        help='Worker processes for the search (default: $N_THREADS or the CPU count).'
    )

    p = sub.add_parser('export', help='Write an automaton as a DOT graph.')
    p.add_argument('--dfa', required=True)
    p.add_argument('--out', default=None)

    args = parser.parse_args(argv)

    return args


def _cls(args):
    return 'unique' if args.unique else 'any'


def _cache_path(cache_dir, k, s):
    return os.path.join(cache_dir, f"compressed-k{k}-s{s}.dfa")


def obtain_automaton(k, s, settings, path=None):
    """The automaton read from ``path``, cached, or built if allowed.

    Raises:
        AutomatonUnavailable: if the settings forbid building it here.
    """
    if path is not None:
        d = persistence.read_dfa(path)
        if d.k != k:
            raise exceptions.AutomatonUnavailable(
                f"'{path}' holds a base-{d.k} automaton, not base {k}.")
        return d

    if s is None:
        s = k

    cache_dir = util.get_cache_dir(settings)
    if cache_dir is not None and os.path.exists(_cache_path(cache_dir, k, s)):
        logger.info("Using cached automaton %s", _cache_path(cache_dir, k, s))
        return persistence.read_dfa(_cache_path(cache_dir, k, s))

    if (s == k and k > settings['max_full_base']) or \
       (s < k and s > settings['max_limited_letters']):
        raise exceptions.AutomatonUnavailable(
            f"No automaton for base {k} with {s} letters is cached and "
            f"building one is disabled by the settings; build it with "
            f"`cryptdfa build` and pass --dfa.")

    logger.info("Building compressed automaton for base %d with %d letters", k, s)
    d = compressed.build_compressed(
        k, s, max_states=settings['max_states'],
        progress_interval=settings['progress_interval'])

    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        persistence.write_dfa(d, _cache_path(cache_dir, k, s))

    return d


def _format_solution(solution):
    return ' '.join(f"{ch}={solution[ch]}" for ch in sorted(solution))


def _report(outcome):
    if outcome.status is Solvability.UNSOLVABLE:
        print("no solution")
        return
    if outcome.status is Solvability.UNIQUE:
        print("unique")
    else:
        print(f"multiple ({outcome.count} solutions)")
    for solution in outcome.solutions:
        print(_format_solution(solution))


def _solve_with_automaton(d, c):
    canonical, gamma = canonicalize(c, d.k)
    outcome = d.run(encode_sequence(canonical))
    solutions = [{ch: sol[gamma[ch]] for ch in gamma} for sol in outcome.solutions]

    return SolveOutcome.from_solutions(
        sorted(solutions, key=lambda sol: tuple(sol[ch] for ch in sorted(sol))))


def cmd_build(args, settings):
    build = compressed.build_compressed if args.compressed else construction.build_naive

    try:
        d = build(args.base, args.letters, max_states=settings['max_states'],
                  progress_interval=settings['progress_interval'])
    except exceptions.BuildInterrupted as e:
        print(f"interrupted after {e.n_states} states", file=sys.stderr)
        return 1

    print(f"states {d.n_states}")
    print(f"edges {d.n_edges}")

    if args.out:
        persistence.write_dfa(d, args.out, mode=args.mode)
        print(f"Automaton at {args.out}")

    return 0


def cmd_solve(args, settings):
    if args.puzzle is not None:
        c = parse_puzzle(args.puzzle)
    else:
        sequence = parse_sequence(args.sequence)
        c = None

    if args.brute:
        if c is None:
            c = decode_sequence(sequence)
        _report(oracle.oracle_classify(c, args.base, method=args.method))
        return 0

    try:
        d = obtain_automaton(args.base, None, settings, path=args.dfa)
    except exceptions.AutomatonUnavailable as e:
        if args.dfa is not None:
            raise
        print(f"notice: {e} Solving by search instead.", file=sys.stderr)
        if c is None:
            c = decode_sequence(sequence)
        _report(oracle.oracle_classify(c, args.base, method=args.method))
        return 0

    if c is None:
        _report(d.run(sequence))
    else:
        _report(_solve_with_automaton(d, c))

    return 0


def cmd_count(args, settings):
    d = obtain_automaton(args.base, args.letters, settings, path=args.dfa)

    if args.table or args.csv:
        df = analysis.count_table(d, args.size)
        if args.csv:
            df.to_csv(args.csv)
            print(f"Counts at {args.csv}")
        if args.table:
            print(df.to_string())
        return 0

    print(analysis.count_solvable(d, args.size, _cls(args), method=args.method))
    return 0


def cmd_enum(args, settings):
    d = obtain_automaton(args.base, args.letters, settings, path=args.dfa)

    max_size = args.max_size if args.max_size is not None else settings['max_enumeration_size']
    for s in analysis.enumerate_solvable(d, _cls(args), limit=args.limit, max_size=max_size):
        print(s)

    return 0


def cmd_rank(args, settings):
    d = obtain_automaton(args.base, args.letters, settings, path=args.dfa)
    print(analysis.rank_sequence(d, parse_sequence(args.sequence), _cls(args)))
    return 0


def cmd_unrank(args, settings):
    d = obtain_automaton(args.base, args.letters, settings, path=args.dfa)
    print(analysis.unrank_sequence(d, args.index, _cls(args),
                                   max_size=settings['max_enumeration_size']))
    return 0


def cmd_minimize(args, settings):
    d = persistence.read_dfa(args.dfa)
    minimized, n_states, n_edges = construction.minimize(d)

    print(f"states {n_states}")
    print(f"edges {n_edges}")

    if args.out:
        persistence.write_dfa(minimized, args.out, mode='topology')
        print(f"Automaton at {args.out}")

    return 0


def cmd_verify(args, settings):
    d = obtain_automaton(args.base, args.letters, settings, path=args.dfa)
    n_processes = args.n_processes or util.get_parallelism()

    passed, counterexample = analysis.verify_against_oracle(
        d, args.max_size, cls=_cls(args), method=args.method,
        budget=settings['oracle_budget'], n_processes=n_processes)

    if passed:
        print("PASS")
        return 0

    print(f"FAIL {counterexample}")
    return 1


def cmd_export(args, settings):
    d = persistence.read_dfa(args.dfa)
    text = persistence.export_graph(d, node_cap=settings['dot_node_cap'])

    if args.out:
        try:
            with open(args.out, 'w') as f:
                f.write(text)
        except OSError as e:
            raise exceptions.IoFailure(f"Cannot write '{args.out}': {e}")
        print(f"Graph at {args.out}")
    else:
        sys.stdout.write(text)

    return 0


COMMANDS = {
    'build': cmd_build,
    'solve': cmd_solve,
    'count': cmd_count,
    'enum': cmd_enum,
    'rank': cmd_rank,
    'unrank': cmd_unrank,
    'minimize': cmd_minimize,
    'verify': cmd_verify,
    'export': cmd_export,
}


def dispatch(argv):
    """Run one command; return 0 on success, 1 on domain errors, 2 on
    usage errors."""
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        format='%(asctime)s %(name)s %(levelname)s: %(message)s')

    try:
        settings = util.load_settings(args.config)
        return COMMANDS[args.command](args, settings)
    except exceptions.CryptDfaError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]

    return dispatch(argv)


if __name__ == '__main__':
    sys.exit(main())
