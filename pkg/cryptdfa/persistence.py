"""Line-oriented text files for built automata, and DOT export.

A file looks like::

    CRYPTDFA 1
    base 2
    letters 2
    kind compressed
    mode full
    initial 0
    accept1 14
    accept2 -
    config 0 0 0 1 0 {:000}
    config 1 0 0 2 1 {1:000}
    ...
    edge 0 aab ab 1
    ...

``config ID d1 d2 ell m {ENTRY,...}`` lists the entries of a state, each
as the digits of a_1..a_m followed by ``:`` and the bits c, b1, b2.
``edge SRC TRIGRAM PERM DST`` gives the renaming as the images of
a_1..a_k, or ``-`` on naive automata. Topology files omit the ``config``
records.
"""
import logging

from . import exceptions, util
from .core import LETTERS, PAD, letter, render_trigram, symbol_code
from .construction import Configuration, CryptDfa, PEntry
from .compressed import PermDfa

logger = logging.getLogger(__name__)

FORMAT_VERSION = '1'
PAYLOAD_MODES = ['full', 'topology']

DIGITS = '0123456789abcdefghijklmnopqrstuvwxyz'

_KINDS = {'naive': CryptDfa, 'compressed': PermDfa}


def _render_perm(perm, k):
    return ''.join(letter(perm[x]) for x in range(1, k + 1))


def _render_config(q):
    entries = ','.join(
        ''.join(DIGITS[v] for v in p.theta) + f":{p.c}{p.b1}{p.b2}"
        for p in q.entries)
    return f"{q.d1} {q.d2} {q.ell} {q.m} {{{entries}}}"


def _optional_id(q):
    return '-' if q is None else str(q)


def save_dfa(d, mode='full'):
    """Serialize ``d``; equal automata give byte-identical output.

    Raises:
        PayloadUnavailable: for ``mode='full'`` on an automaton without
            configurations.
    """
    if mode not in PAYLOAD_MODES:
        raise ValueError(f"Unknown payload mode '{mode}' (choose from {PAYLOAD_MODES})")
    if mode == 'full' and not d.has_payload:
        raise exceptions.PayloadUnavailable(
            "Cannot save configurations of a topology-only automaton; use "
            "mode 'topology'.")

    lines = [
        f"CRYPTDFA {FORMAT_VERSION}",
        f"base {d.k}",
        f"letters {d.s}",
        f"kind {d.kind}",
        f"mode {mode}",
        f"initial {d.initial}",
        f"accept1 {_optional_id(d.f1)}",
        f"accept2 {_optional_id(d.f2)}",
    ]

    if mode == 'full':
        for q, config in enumerate(d.configs):
            if config is not None:
                lines.append(f"config {q} {_render_config(config)}")

    for q in range(d.n_states):
        for t, perm, dst in sorted(d.edges(q), key=lambda e: e[0]):
            label = '-' if perm is None else _render_perm(perm, d.k)
            lines.append(f"edge {q} {render_trigram(t)} {label} {dst}")

    return ('\n'.join(lines) + '\n').encode('ascii')


class _Reader:
    """Walks the lines of a file, keeping the line number for errors."""

    def __init__(self, text):
        self.lines = text.split('\n')
        if self.lines and self.lines[-1] == '':
            self.lines.pop()
        self.pos = 0

    @property
    def lineno(self):
        return self.pos + 1

    def peek(self):
        if self.pos >= len(self.lines):
            return None
        return self.lines[self.pos].split(' ')

    def next(self, expected):
        fields = self.peek()
        if fields is None:
            raise exceptions.FormatError(
                f"file ends early; expected '{expected}'", line=self.lineno)
        self.pos += 1
        return fields

    def header(self, keyword):
        fields = self.next(keyword)
        if len(fields) != 2 or fields[0] != keyword:
            raise exceptions.FormatError(
                f"expected '{keyword} VALUE', got '{' '.join(fields)}'",
                line=self.lineno - 1)
        return fields[1]

    def integer(self, value, what, low, high):
        try:
            parsed = int(value)
        except ValueError:
            raise exceptions.FormatError(
                f"{what} '{value}' is not an integer", line=self.lineno - 1)
        if not low <= parsed <= high:
            raise exceptions.FormatError(
                f"{what} {parsed} outside {low}..{high}", line=self.lineno - 1)
        return parsed

    def state(self, value, optional=False):
        if optional and value == '-':
            return None
        try:
            q = int(value)
        except ValueError:
            q = -1
        if q < 0:
            raise exceptions.FormatError(
                f"'{value}' is not a state id", line=self.lineno - 1)
        return q


def _parse_config(reader, fields, k):
    line = reader.lineno - 1
    if len(fields) < 7:
        raise exceptions.FormatError("truncated config record", line=line)

    d1, d2 = (reader.integer(v, 'flag', 0, 1) for v in fields[2:4])
    ell = reader.integer(fields[4], 'next-letter index', 1, k)
    m = reader.integer(fields[5], 'domain size', 0, k)

    body = ' '.join(fields[6:])
    if not (body.startswith('{') and body.endswith('}')) or body == '{}':
        raise exceptions.FormatError(f"malformed entry set '{body}'", line=line)

    entries = []
    for item in body[1:-1].split(','):
        digits, _, bits = item.partition(':')
        if len(digits) != m or len(bits) != 3 or any(b not in '01' for b in bits):
            raise exceptions.FormatError(f"malformed entry '{item}'", line=line)
        theta = tuple(DIGITS.find(ch) for ch in digits)
        if any(not 0 <= v < k for v in theta) or len(set(theta)) != m:
            raise exceptions.FormatError(f"entry '{item}' is not an injective assignment", line=line)
        entries.append(PEntry(theta, int(bits[0]), int(bits[1]), int(bits[2])))

    if entries != sorted(set(entries)):
        raise exceptions.FormatError("entries are not sorted and distinct", line=line)

    return Configuration(d1, d2, ell, tuple(entries))


def _parse_trigram(reader, value, s):
    try:
        codes = tuple(symbol_code(ch) for ch in value)
    except exceptions.WrongAlphabet:
        codes = None
    if codes is None or len(codes) != 3 or any(x > s for x in codes):
        raise exceptions.FormatError(
            f"'{value}' is not a trigram over {PAD} and a..{LETTERS[s - 1]}",
            line=reader.lineno - 1)
    # automata never read a sum column that ends before a summand
    if codes[2] == 0 and (codes[0] or codes[1]):
        raise exceptions.FormatError(
            f"'{value}' ends the sum before a summand; no automaton reads it",
            line=reader.lineno - 1)
    return codes


def _parse_perm(reader, value, k):
    if len(value) != k or sorted(value) != list(LETTERS[:k]):
        raise exceptions.FormatError(
            f"'{value}' is not a permutation of a..{LETTERS[k - 1]}",
            line=reader.lineno - 1)
    return (0,) + tuple(symbol_code(ch) for ch in value)


def load_dfa(data):
    """Rebuild an automaton from :func:`save_dfa` output, validating it.

    The state count is the largest id any record mentions, plus one. In
    full mode every state but the accepting ones needs a ``config`` record,
    which is how a file cut short inside its configurations is caught.

    Raises:
        FormatError: with the offending line number.
        VersionUnsupported: for files of another format version.
    """
    if isinstance(data, bytes):
        try:
            data = data.decode('ascii')
        except UnicodeDecodeError:
            raise exceptions.FormatError("file is not ASCII text")

    reader = _Reader(data)

    magic = reader.next('CRYPTDFA')
    if len(magic) != 2 or magic[0] != 'CRYPTDFA':
        raise exceptions.FormatError("not a CRYPTDFA file", line=1)
    if magic[1] != FORMAT_VERSION:
        raise exceptions.VersionUnsupported(
            f"Format version '{magic[1]}' is not supported (expected "
            f"{FORMAT_VERSION}).", version=magic[1])

    k = reader.integer(reader.header('base'), 'base', 2, len(LETTERS))
    s = reader.integer(reader.header('letters'), 'letter limit', 1, k)

    kind = reader.header('kind')
    if kind not in _KINDS:
        raise exceptions.FormatError(f"unknown kind '{kind}'", line=reader.lineno - 1)
    mode = reader.header('mode')
    if mode not in PAYLOAD_MODES:
        raise exceptions.FormatError(f"unknown mode '{mode}'", line=reader.lineno - 1)

    initial = reader.state(reader.header('initial'))
    f1 = reader.state(reader.header('accept1'), optional=True)
    f2 = reader.state(reader.header('accept2'), optional=True)
    if f1 is not None and f1 == f2:
        raise exceptions.FormatError("accept1 and accept2 coincide", line=reader.lineno - 1)

    configs = {}
    while reader.peek() is not None and reader.peek()[0] == 'config':
        fields = reader.next('config')
        if mode != 'full':
            raise exceptions.FormatError("config record in a topology file", line=reader.lineno - 1)
        q = reader.state(fields[1])
        if q in (f1, f2) or q in configs:
            raise exceptions.FormatError(f"unexpected config for state {q}", line=reader.lineno - 1)
        configs[q] = _parse_config(reader, fields, k)

    edges = []
    while reader.peek() is not None:
        fields = reader.next('edge')
        line = reader.lineno - 1
        if fields[0] != 'edge':
            raise exceptions.FormatError(
                f"expected an edge record, got '{' '.join(fields)}'", line=line)
        if len(fields) != 5:
            raise exceptions.FormatError("edge records have four fields", line=line)

        src = reader.state(fields[1])
        t = _parse_trigram(reader, fields[2], s)
        if fields[3] == '-':
            if kind == 'compressed':
                raise exceptions.FormatError("compressed edge without permutation", line=line)
            perm = None
        else:
            if kind == 'naive':
                raise exceptions.FormatError("naive edge with a permutation", line=line)
            perm = _parse_perm(reader, fields[3], k)
        dst = reader.state(fields[4])

        if src in (f1, f2):
            raise exceptions.FormatError(f"edge leaves accepting state {src}", line=line)
        edges.append((src, t, perm, dst, line))

    ids = [initial, *configs]
    ids += [q for q in (f1, f2) if q is not None]
    ids += [q for src, _, _, dst, _ in edges for q in (src, dst)]
    n_states = max(ids) + 1

    mentioned = set(ids)
    if len(mentioned) != n_states:
        unknown = min(q for q in range(n_states) if q not in mentioned)
        raise exceptions.FormatError(f"state {unknown} is never mentioned", line=reader.lineno)

    if mode == 'full':
        missing = [q for q in range(n_states) if q not in configs and q not in (f1, f2)]
        if missing:
            raise exceptions.FormatError(
                f"no config for state {missing[0]}", line=reader.lineno)
        configs = [configs.get(q) for q in range(n_states)]
    else:
        configs = None

    transitions = [{} for _ in range(n_states)]
    for src, t, perm, dst, line in edges:
        if t in transitions[src]:
            raise exceptions.FormatError(
                f"second edge for state {src} on '{render_trigram(t)}'", line=line)
        transitions[src][t] = (perm, dst)

    targets = {dst for _, _, _, dst, _ in edges}
    for f in (f1, f2):
        if f is not None and f not in targets:
            raise exceptions.FormatError(f"no edge enters accepting state {f}", line=reader.lineno)

    logger.debug("Loaded %s automaton (k=%d, s=%d, %d states, %s mode)",
                 kind, k, s, n_states, mode)

    return _KINDS[kind](k, s, transitions, initial, f1, f2, configs=configs)


def write_dfa(d, path, mode='full'):
    try:
        with open(path, 'wb') as f:
            f.write(save_dfa(d, mode=mode))
    except OSError as e:
        raise exceptions.IoFailure(f"Cannot write '{path}': {e}")
    logger.info("Wrote %s to %s", d, path)


def read_dfa(path):
    try:
        with open(path, 'rb') as f:
            data = f.read()
    except OSError as e:
        raise exceptions.IoFailure(f"Cannot read '{path}': {e}")
    return load_dfa(data)


def export_graph(d, node_cap=None):
    """Render ``d`` as a Graphviz DOT digraph.

    Raises:
        TooLarge: if ``d`` has more than ``node_cap`` states.
    """
    if node_cap is None:
        node_cap = util.DEFAULT_SETTINGS['dot_node_cap']
    if d.n_states > node_cap:
        raise exceptions.TooLarge(
            f"{d} has {d.n_states} states, more than the {node_cap} that "
            f"can be exported.")

    lines = [
        "digraph cryptdfa {",
        "  rankdir=LR;",
        "  node [shape=circle];",
        "  start [shape=point];",
        f"  start -> {d.initial};",
    ]

    for q in range(d.n_states):
        if q == d.f1:
            lines.append(f'  {q} [shape=doublecircle, label="f1"];')
        elif q == d.f2:
            lines.append(f'  {q} [shape=doubleoctagon, label="f2"];')
        else:
            lines.append(f"  {q};")

    for q in range(d.n_states):
        for t, perm, dst in sorted(d.edges(q), key=lambda e: e[0]):
            label = render_trigram(t)
            if perm is not None:
                label += '/' + _render_perm(perm, d.k)
            lines.append(f'  {q} -> {dst} [label="{label}"];')

    lines.append("}")

    return '\n'.join(lines) + '\n'
