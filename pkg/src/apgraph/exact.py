"""Exact number sets, graphs on their indices, and sumset arithmetic.

Every value is a :class:`fractions.Fraction`; floats are rejected at the
boundary so nothing downstream ever rounds.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple, Union

RationalLike = Union[int, Fraction, str]


def as_rational(value: RationalLike) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would smuggle rounding into an exact pipeline.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"refusing inexact value {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(c in text for c in ".eE"):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class NumberSet(Sequence):
    """Finite set of rationals, kept sorted ascending and duplicate free."""

    __slots__ = ("_elements", "_members")

    def __init__(self, values: Iterable[RationalLike] = ()):
        self._elements: tuple[Fraction, ...] = tuple(sorted({as_rational(v) for v in values}))
        self._members = frozenset(self._elements)

    @property
    def elements(self) -> tuple[Fraction, ...]:
        return self._elements

    def __len__(self) -> int:
        return len(self._elements)

    def __getitem__(self, i):
        return self._elements[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._elements)

    def __contains__(self, value) -> bool:
        return value in self._members

    def __eq__(self, other) -> bool:
        if isinstance(other, NumberSet):
            return self._elements == other._elements
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._elements)

    def __repr__(self) -> str:
        body = ", ".join(format_rational(x) for x in self._elements)
        return f"NumberSet({{{body}}})"

    def common_denominator(self) -> int:
        """Least common multiple of the element denominators (1 when empty)."""
        return math.lcm(1, *(x.denominator for x in self._elements))

    def scaled(self, factor: int | None = None) -> tuple[int, tuple[int, ...]]:
        """Return ``(L, ints)`` with ``ints[i] == elements[i] * L`` exactly."""
        scale = self.common_denominator() if factor is None else factor
        ints = []
        for x in self._elements:
            num = x.numerator * scale
            if num % x.denominator:
                raise ValueError(f"scale {scale} does not clear denominator of {x}")
            ints.append(num // x.denominator)
        return scale, tuple(ints)

    def negated(self) -> NumberSet:
        return NumberSet(-x for x in self._elements)

    def translated(self, t: RationalLike) -> NumberSet:
        t = as_rational(t)
        return NumberSet(x + t for x in self._elements)

    def dilated(self, factor: RationalLike) -> NumberSet:
        factor = as_rational(factor)
        return NumberSet(x * factor for x in self._elements)


def make_number_set(values: Iterable[RationalLike]) -> NumberSet:
    return NumberSet(values)


@dataclass(frozen=True)
class PairGraph:
    """Undirected graph on ``range(vertex_count)``.

    ``pairs`` holds every edge as ``(i, j)`` with ``i <= j``; ``(i, i)`` is a
    loop and is only legal when ``allow_loops`` is set.
    """

    vertex_count: int
    pairs: frozenset[tuple[int, int]] = field(default_factory=frozenset)
    allow_loops: bool = False

    def __post_init__(self):
        if self.vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        normal = set()
        for i, j in self.pairs:
            if i > j:
                i, j = j, i
            if i < 0 or j >= self.vertex_count:
                raise ValueError(f"edge ({i}, {j}) out of range for {self.vertex_count} vertices")
            if i == j and not self.allow_loops:
                raise ValueError(f"loop at {i} but loops are not allowed")
            normal.add((i, j))
        object.__setattr__(self, "pairs", frozenset(normal))

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]], allow_loops: bool = False) -> PairGraph:
        return cls(vertex_count, frozenset((min(i, j), max(i, j)) for i, j in pairs), allow_loops)

    @classmethod
    def complete(cls, vertex_count: int, loops: bool = False) -> PairGraph:
        pairs = set(combinations(range(vertex_count), 2))
        if loops:
            pairs.update((i, i) for i in range(vertex_count))
        return cls(vertex_count, frozenset(pairs), loops)

    @property
    def edge_count(self) -> int:
        """Number of non-loop edges."""
        return sum(1 for i, j in self.pairs if i != j)

    @property
    def loop_count(self) -> int:
        return sum(1 for i, j in self.pairs if i == j)

    @property
    def pair_count(self) -> int:
        """Edges plus loops."""
        return len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def subgraph(self, keep: Iterable[tuple[int, int]]) -> PairGraph:
        keep = frozenset(keep)
        if not keep <= self.pairs:
            raise ValueError("subgraph edges must come from the parent graph")
        return PairGraph(self.vertex_count, keep, self.allow_loops)


class APWitness(NamedTuple):
    """A k-term arithmetic progression, stored increasing."""

    terms: tuple[Fraction, ...]
    difference: Fraction

    @property
    def k(self) -> int:
        return len(self.terms)

    @classmethod
    def from_terms(cls, terms: Iterable[RationalLike]) -> APWitness:
        ts = sorted(as_rational(t) for t in terms)
        if len(ts) < 2:
            raise ValueError("a progression needs at least two terms")
        q = ts[1] - ts[0]
        if q <= 0 or any(b - a != q for a, b in zip(ts, ts[1:])):
            raise ValueError(f"{ts} is not a nontrivial arithmetic progression")
        return cls(tuple(ts), q)

    def __str__(self) -> str:
        return " ".join(format_rational(t) for t in self.terms)


def _check_dims(A: NumberSet, G: PairGraph) -> None:
    if G.vertex_count != len(A):
        raise ValueError(f"graph has {G.vertex_count} vertices but the set has {len(A)} elements")


def sumset_along_graph(A: NumberSet, G: PairGraph) -> NumberSet:
    _check_dims(A, G)
    a = A.elements
    return NumberSet(a[i] + a[j] for i, j in G.pairs)


def difference_set_along_graph(A: NumberSet, G: PairGraph) -> NumberSet:
    _check_dims(A, G)
    a = A.elements
    out = set()
    for i, j in G.pairs:
        t = a[i] - a[j]
        out.add(t)
        out.add(-t)
    return NumberSet(out)


def sumset(A: Iterable[Fraction], B: Iterable[Fraction]) -> NumberSet:
    """Full sumset ``{a + b}`` over all pairs."""
    B = tuple(B)
    return NumberSet(a + b for a in A for b in B)


def difference_set(A: Iterable[Fraction], B: Iterable[Fraction]) -> NumberSet:
    B = tuple(B)
    return NumberSet(a - b for a in A for b in B)


def iterated_sumset(B: NumberSet, k: int, l: int) -> NumberSet:
    """``kB - lB``: all sums of k elements minus sums of l elements (repetition allowed)."""
    if k < 0 or l < 0:
        raise ValueError("k and l must be nonnegative")
    if k + l > 0 and len(B) == 0:
        raise ValueError("B must be nonempty when k + l > 0")
    if k + l == 0:
        return NumberSet([0])
    scale, ints = B.scaled()
    acc = {0}
    for _ in range(k):
        acc = {s + b for s in acc for b in ints}
    for _ in range(l):
        acc = {s - b for s in acc for b in ints}
    return NumberSet(Fraction(s, scale) for s in acc)


def count_k_aps(A: NumberSet, k: int) -> tuple[int, list[APWitness]]:
    """All k-term progressions with positive difference inside A, lexicographic."""
    if k < 3:
        raise ValueError("k must be at least 3")
    elems = A.elements
    found = []
    for i, a in enumerate(elems):
        for b in elems[i + 1:]:
            q = b - a
            if all(a + m * q in A for m in range(2, k)):
                found.append(APWitness(tuple(a + m * q for m in range(k)), q))
    return len(found), found


def doubling_ratio(A: NumberSet, B: NumberSet) -> Fraction:
    """``|A + B| / |A|``."""
    if len(A) == 0:
        raise ValueError("A must be nonempty")
    return Fraction(len(sumset(A, B)), len(A))
