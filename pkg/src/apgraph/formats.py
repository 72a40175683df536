"""Text formats for number sets and graphs.

SetFile: one rational per line (``7`` or ``-3/4``, lowest terms), written
sorted; ``#`` starts a comment.

GraphFile: a header ``n=<count> loops=<0|1>`` followed by ``i j`` lines with
``i <= j``; or a single keyword line ``complete``, ``complete_loops`` or
``random p=<rational> seed=<u64>`` which is resolved against the set it is
used with.
"""

from __future__ import annotations

import re
from fractions import Fraction
from pathlib import Path
from typing import Union

from apgraph.exact import NumberSet, PairGraph, format_rational
from apgraph.harness import CompleteGraph, GraphSpec, RandomGraph, generate_graph

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")
_HEADER = re.compile(r"^n=(\d+)\s+loops=([01])$")
_RANDOM = re.compile(r"^random\s+p=(\S+)\s+seed=(\d+)$")


class InputError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_set(text: str, source: str = "<set>") -> NumberSet:
    values = []
    for number, line in _lines(text):
        if not _RATIONAL.match(line):
            raise InputError(source, number, f"not an integer or p/q fraction: {line!r}")
        try:
            value = Fraction(line)
        except ZeroDivisionError:
            raise InputError(source, number, f"zero denominator: {line!r}") from None
        if "/" in line and f"{value.numerator}/{value.denominator}" != line.lstrip("+"):
            raise InputError(source, number, f"fraction not in lowest terms: {line!r}")
        values.append(value)
    return NumberSet(values)


def serialize_set(A: NumberSet) -> str:
    return "".join(format_rational(x) + "\n" for x in A)


GraphSource = Union[PairGraph, GraphSpec]


def parse_graph(text: str, source: str = "<graph>") -> GraphSource:
    body = list(_lines(text))
    if not body:
        raise InputError(source, 1, "empty graph file")
    number, first = body[0]
    keyword = _parse_keyword(first, source, number)
    if keyword is not None:
        if len(body) > 1:
            raise InputError(source, body[1][0], "nothing may follow a keyword graph line")
        return keyword
    header = _HEADER.match(first)
    if not header:
        raise InputError(source, number, "expected 'n=<count> loops=<0|1>' or a graph keyword")
    n, loops = int(header.group(1)), header.group(2) == "1"
    pairs = set()
    for number, line in body[1:]:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise InputError(source, number, f"expected 'i j', got {line!r}")
        i, j = map(int, parts)
        if i > j:
            raise InputError(source, number, f"edge must be written with i <= j: {line!r}")
        if j >= n:
            raise InputError(source, number, f"vertex {j} out of range for n={n}")
        if i == j and not loops:
            raise InputError(source, number, "loop present but header says loops=0")
        if (i, j) in pairs:
            raise InputError(source, number, f"duplicate edge {i} {j}")
        pairs.add((i, j))
    return PairGraph(n, frozenset(pairs), loops)


def _parse_keyword(line: str, source: str, number: int) -> GraphSpec | None:
    if line == "complete":
        return CompleteGraph(False)
    if line == "complete_loops":
        return CompleteGraph(True)
    m = _RANDOM.match(line)
    if m:
        if not _RATIONAL.match(m.group(1)) or m.group(1).endswith("/0"):
            raise InputError(source, number, f"bad probability {m.group(1)!r}")
        return RandomGraph(Fraction(m.group(1)), int(m.group(2)))
    if line.startswith("random"):
        raise InputError(source, number, "expected 'random p=<rational> seed=<u64>'")
    return None


def serialize_graph(G: GraphSource) -> str:
    if isinstance(G, CompleteGraph):
        return "complete_loops\n" if G.loops else "complete\n"
    if isinstance(G, RandomGraph):
        return f"random p={format_rational(G.p)} seed={G.seed}\n"
    if not isinstance(G, PairGraph):
        raise TypeError(f"cannot serialize {G!r}")
    lines = [f"n={G.vertex_count} loops={int(G.allow_loops)}"]
    lines += [f"{i} {j}" for i, j in G.sorted_pairs()]
    return "\n".join(lines) + "\n"


def resolve_graph(G: GraphSource, A: NumberSet) -> PairGraph:
    if isinstance(G, PairGraph):
        if G.vertex_count != len(A):
            raise ValueError(f"graph has n={G.vertex_count} but the set has {len(A)} elements")
        return G
    return generate_graph(G, A)


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(str(path), 0, f"cannot read file ({exc.strerror or exc})") from exc


def read_set(path: str | Path) -> NumberSet:
    return parse_set(_read(path), str(path))


def read_graph(path: str | Path) -> GraphSource:
    return parse_graph(_read(path), str(path))


def write_set(path: str | Path, A: NumberSet) -> None:
    Path(path).write_text(serialize_set(A), encoding="utf-8")


def write_graph(path: str | Path, G: GraphSource) -> None:
    Path(path).write_text(serialize_graph(G), encoding="utf-8")
