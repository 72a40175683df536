"""Planar point/line arrangements built from subsets of ``A x A``.

Lines come from four parallel families and a point's line in a family is
read off its coordinates (``y``, ``x``, ``x - y`` or ``x + y``), so every
incidence test is an exact dictionary lookup.
"""

from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import NamedTuple

from apgraph._parallel import chunked, pmap
from apgraph.exact import (
    APWitness,
    NumberSet,
    PairGraph,
    difference_set_along_graph,
    sumset_along_graph,
)


class Family(IntEnum):
    HORIZONTAL = 0  # y = a
    VERTICAL = 1  # x = a
    DIAGONAL = 2  # x - y = t
    ANTIDIAGONAL = 3  # x + y = s

    def parameter(self, p: Point2) -> Fraction:
        if self is Family.HORIZONTAL:
            return p.y
        if self is Family.VERTICAL:
            return p.x
        if self is Family.DIAGONAL:
            return p.x - p.y
        return p.x + p.y


class Orientation(IntEnum):
    UP = 0
    DOWN = 1


class Point2(NamedTuple):
    x: Fraction
    y: Fraction


class Line2(NamedTuple):
    family: Family
    parameter: Fraction

    def contains(self, p: Point2) -> bool:
        return self.family.parameter(p) == self.parameter


class TriangleWitness(NamedTuple):
    base_left: Point2
    base_right: Point2
    apex: Point2
    orientation: Orientation

    @property
    def points(self) -> tuple[Point2, Point2, Point2]:
        return self.base_left, self.base_right, self.apex


SUM_FAMILIES = (Family.HORIZONTAL, Family.VERTICAL, Family.ANTIDIAGONAL)
AP_FAMILIES = (Family.HORIZONTAL, Family.DIAGONAL, Family.ANTIDIAGONAL)


@dataclass(frozen=True)
class Arrangement2:
    points: tuple[Point2, ...]
    lines: dict[Family, tuple[Fraction, ...]]

    def __post_init__(self):
        for fam, params in self.lines.items():
            present = set(params)
            for p in self.points:
                if fam.parameter(p) not in present:
                    raise ValueError(f"point ({p.x}, {p.y}) lies on no {fam.name.lower()} line")

    @property
    def families(self) -> tuple[Family, ...]:
        return tuple(sorted(self.lines))

    @property
    def point_count(self) -> int:
        return len(self.points)

    @property
    def line_count(self) -> int:
        return sum(len(v) for v in self.lines.values())

    def all_lines(self) -> list[Line2]:
        return [Line2(fam, t) for fam in self.families for t in self.lines[fam]]

    def incidence(self, p: Point2) -> tuple[Line2, ...]:
        """The one line per active family through ``p``."""
        return tuple(Line2(fam, fam.parameter(p)) for fam in self.families)


def _make(points, lines: dict[Family, set]) -> Arrangement2:
    return Arrangement2(
        tuple(sorted(set(points))),
        {fam: tuple(sorted(params)) for fam, params in lines.items()},
    )


def _graph_points(A: NumberSet, G: PairGraph) -> set[Point2]:
    a = A.elements
    pts = set()
    for i, j in G.pairs:
        pts.add(Point2(a[i], a[j]))
        pts.add(Point2(a[j], a[i]))
    return pts


def build_sum_arrangement(A: NumberSet, G: PairGraph) -> Arrangement2:
    """Points ``(a_i, a_j)`` for edges of G with verticals, horizontals and antidiagonals ``x + y = t``."""
    sums = sumset_along_graph(A, G)
    return _make(
        _graph_points(A, G),
        {
            Family.HORIZONTAL: set(A),
            Family.VERTICAL: set(A),
            Family.ANTIDIAGONAL: set(sums),
        },
    )


def build_ap_arrangement(A: NumberSet, Gp: PairGraph, diffs: NumberSet, sums: NumberSet) -> Arrangement2:
    """Points of ``E(G')`` with horizontals ``y = a``, diagonals over ``diffs`` and antidiagonals over ``sums``.

    Raises ValueError when some point misses the supplied diagonal or
    antidiagonal families.
    """
    if Gp.vertex_count != len(A):
        raise ValueError(f"graph has {Gp.vertex_count} vertices but the set has {len(A)} elements")
    return _make(
        _graph_points(A, Gp),
        {
            Family.HORIZONTAL: set(A),
            Family.DIAGONAL: set(diffs),
            Family.ANTIDIAGONAL: set(sums),
        },
    )


def _require(arr: Arrangement2, families: tuple[Family, ...]) -> None:
    if arr.families != tuple(sorted(families)):
        want = ", ".join(f.name for f in families)
        raise ValueError(f"expected families {want}, got {', '.join(f.name for f in arr.families)}")


def _scaled_rows(points) -> tuple[int, dict[int, list[int]], set[tuple[int, int]]]:
    scale = math.lcm(1, *(c.denominator for p in points for c in p))
    rows: dict[int, list[int]] = defaultdict(list)
    members = set()
    for p in points:
        X = p.x.numerator * (scale // p.x.denominator)
        Y = p.y.numerator * (scale // p.y.denominator)
        rows[Y].append(X)
        members.add((X, Y))
    for xs in rows.values():
        xs.sort()
    return scale, rows, members


def _row_triangles(job) -> list[tuple[int, int, int, int, int]]:
    rows, members = job
    out = []
    for Y, xs in rows:
        for i, X1 in enumerate(xs):
            for X2 in xs[i + 1:]:
                s = X1 + X2
                if s & 1:
                    continue
                M, H = s >> 1, (X2 - X1) >> 1
                if (M, Y + H) in members:
                    out.append((X1, X2, Y, M, Y + H))
                if (M, Y - H) in members:
                    out.append((X1, X2, Y, M, Y - H))
    return out


def enumerate_triangles(arr: Arrangement2, workers: int = 1) -> list[TriangleWitness]:
    """All proper triangles of an HORIZONTAL/DIAGONAL/ANTIDIAGONAL arrangement.

    Each has a horizontal base; its apex sits over the base midpoint at
    height half the base length, above (UP) or below (DOWN).
    """
    _require(arr, AP_FAMILIES)
    if not arr.points:
        return []
    scale, rows, members = _scaled_rows(arr.points)
    row_items = sorted(rows.items())
    jobs = [(chunk, members) for chunk in chunked(row_items, workers)]
    raw = [t for part in pmap(_row_triangles, jobs, workers) for t in part]

    def q(v: int) -> Fraction:
        return Fraction(v, scale)

    out = []
    for X1, X2, Y, M, AY in raw:
        orient = Orientation.UP if AY > Y else Orientation.DOWN
        out.append(TriangleWitness(Point2(q(X1), q(Y)), Point2(q(X2), q(Y)), Point2(q(M), q(AY)), orient))
    out.sort()
    return out


def right_angle_counts(arr: Arrangement2) -> dict[Point2, int]:
    """For each point ``(a, b)``, how many ``t != 0`` have ``(a, b+t)`` and ``(a+t, b)`` both in P."""
    _require(arr, SUM_FAMILIES)
    members = set(arr.points)
    by_column: dict[Fraction, list[Fraction]] = defaultdict(list)
    for p in arr.points:
        by_column[p.x].append(p.y)
    counts = {}
    for p in arr.points:
        n = 0
        for y in by_column[p.x]:
            t = y - p.y
            if t and Point2(p.x + t, p.y) in members:
                n += 1
        counts[p] = n
    return counts


def square_fourth_vertex(p: Point2, t: Fraction) -> Point2:
    """Corner completing the square on the right angle at ``p`` with legs of signed length ``t``."""
    return Point2(p.x + t, p.y + t)


def difference_counts(A: NumberSet) -> Counter:
    """``r(t) = #{(a, b) in A x A : a - b = t}``."""
    elems = A.elements
    return Counter(a - b for a in elems for b in elems)


def popular_differences(A: NumberSet, threshold: int) -> NumberSet:
    if threshold < 1:
        raise ValueError("threshold must be at least 1")
    return NumberSet(t for t, r in difference_counts(A).items() if r >= threshold)


@dataclass(frozen=True)
class RefinementReport:
    epsilon: Fraction
    alpha_used: Fraction
    strategy: str
    edges_before: int
    edges_after: int
    popular_difference_count: int
    D_achieved: Fraction
    bound_satisfied: bool


def _kept_pairs(A: NumberSet, G: PairGraph, r: Counter, alpha: Fraction) -> frozenset:
    a = A.elements
    level = alpha * len(A)
    return frozenset((i, j) for i, j in G.pairs if r[a[i] - a[j]] >= level)


def refine_graph(
    A: NumberSet,
    G: PairGraph,
    epsilon: Fraction,
    alpha: Fraction | None = None,
) -> tuple[PairGraph, RefinementReport]:
    """Keep the edges whose difference is popular at level ``alpha * |A|``.

    With ``alpha=None`` (AUTO) the largest alpha among the realised levels
    ``r(t)/|A|`` is found by bisection subject to keeping at least
    ``(1 - epsilon)`` of the edges. A fixed alpha may break that bound; the
    report says so instead of raising. Loops count as edges here.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon < 1:
        raise ValueError("epsilon must satisfy 0 < epsilon < 1")
    if G.vertex_count != len(A):
        raise ValueError(f"graph has {G.vertex_count} vertices but the set has {len(A)} elements")
    before = G.pair_count
    if before == 0:
        raise ValueError("cannot refine an empty graph")
    n = len(A)
    a = A.elements
    r = difference_counts(A)
    need = (1 - epsilon) * before

    if alpha is None:
        levels = sorted({Fraction(r[a[i] - a[j]], n) for i, j in G.pairs})
        lo, hi = 0, len(levels) - 1  # levels[0] keeps every edge
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if len(_kept_pairs(A, G, r, levels[mid])) >= need:
                lo = mid
            else:
                hi = mid - 1
        alpha_used, strategy = levels[lo], "auto"
    else:
        alpha_used, strategy = Fraction(alpha), "fixed"
        if alpha_used < 0:
            raise ValueError("alpha must be nonnegative")

    kept = _kept_pairs(A, G, r, alpha_used)
    Gp = G.subgraph(kept)
    level = alpha_used * n
    popular = sum(1 for t, c in r.items() if c >= level)
    diffs = difference_set_along_graph(A, Gp)
    report = RefinementReport(
        epsilon=epsilon,
        alpha_used=alpha_used,
        strategy=strategy,
        edges_before=before,
        edges_after=len(kept),
        popular_difference_count=popular,
        D_achieved=Fraction(len(diffs), n),
        bound_satisfied=len(kept) >= need,
    )
    return Gp, report


def triangles_to_aps(ts) -> list[tuple[APWitness, int]]:
    """Project triangles to the 3-APs of their x-coordinates, with multiplicities."""
    counts = Counter()
    for t in ts:
        q = t.apex.x - t.base_left.x
        counts[APWitness((t.base_left.x, t.apex.x, t.base_right.x), q)] += 1
    return sorted(counts.items())


@dataclass
class K3Report:
    n: int
    refinement: RefinementReport | None
    graph: PairGraph | None
    point_count: int = 0
    line_counts: dict[str, int] | None = None
    triangle_count: int = 0
    aps: list[tuple[APWitness, int]] | None = None

    @property
    def distinct_ap_count(self) -> int:
        return len(self.aps or ())


def pipeline_k3(
    A: NumberSet,
    G: PairGraph,
    epsilon: Fraction,
    alpha: Fraction | None = None,
    workers: int = 1,
) -> K3Report:
    """Refine G, draw the AP arrangement on ``E(G')`` and read 3-APs off its triangles.

    Antidiagonals are taken over the sums along the original G, a superset
    of the sums along G'.
    """
    if len(A) < 2:
        return K3Report(n=len(A), refinement=None, graph=None, line_counts={}, aps=[])
    Gp, report = refine_graph(A, G, epsilon, alpha)
    arr = build_ap_arrangement(A, Gp, difference_set_along_graph(A, Gp), sumset_along_graph(A, G))
    triangles = enumerate_triangles(arr, workers)
    return K3Report(
        n=len(A),
        refinement=report,
        graph=Gp,
        point_count=arr.point_count,
        line_counts={fam.name.lower(): len(arr.lines[fam]) for fam in arr.families},
        triangle_count=len(triangles),
        aps=triangles_to_aps(triangles),
    )


def lines_graph(arr: Arrangement2) -> tuple[list[Line2], PairGraph]:
    """Graph on the lines of ``arr``; two lines are adjacent when they meet at a point of P."""
    if len(arr.families) != 3:
        raise ValueError("lines_graph needs exactly three line families")
    lines = arr.all_lines()
    index = {ln: i for i, ln in enumerate(lines)}
    pairs = set()
    for p in arr.points:
        u, v, w = (index[ln] for ln in arr.incidence(p))
        pairs.update({(min(u, v), max(u, v)), (min(u, w), max(u, w)), (min(v, w), max(v, w))})
    return lines, PairGraph(len(lines), frozenset(pairs))


def graph_triangle_count(G: PairGraph) -> int:
    adj: dict[int, set[int]] = defaultdict(set)
    for i, j in G.pairs:
        if i != j:
            adj[i].add(j)
            adj[j].add(i)
    total = 0
    for i, j in G.pairs:
        if i < j:
            total += sum(1 for k in adj[i] & adj[j] if k > j)
    return total
