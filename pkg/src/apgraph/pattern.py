"""Lattice patterns in Cartesian powers ``A^d`` and their homothetic copies.

The two patterns that matter are the simplex ``S_d`` (origin, ``i*e1 + e_{i+1}``
for ``1 <= i < d``, and ``d*e1``) and the grid
``T_d = {0..d-1} x {-1,0,1} x {0,1}^(d-2)``. A homothetic copy is a pair
``(holder, ratio)`` whose image ``holder + ratio * pattern`` lies in ``A^d``.
Because ``A^d`` is a product, membership of an image splits into one
independent 1-D condition per coordinate, which is what every enumerator
here exploits.
"""

from __future__ import annotations

import math
import statistics
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Iterable, NamedTuple, Sequence

from apgraph._parallel import chunked, pmap
from apgraph.exact import APWitness, NumberSet, count_k_aps

IntVector = tuple[int, ...]
PointND = tuple[Fraction, ...]

DEFAULT_MAX_CELLS = 10**7
POSITIVE = "positive"
NONZERO = "nonzero"


class SizeCapError(ValueError):
    pass


def check_cells(n: int, d: int, max_cells: int) -> None:
    if n**d > max_cells:
        raise SizeCapError(f"|A|^d = {n}^{d} = {n**d} exceeds the cap of {max_cells} cells")


def primitive(v: Sequence[int]) -> IntVector:
    """Divide by the coordinate gcd and make the first nonzero entry positive."""
    g = math.gcd(*v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    out = [x // g for x in v]
    first = next(x for x in out if x)
    if first < 0:
        out = [-x for x in out]
    return tuple(out)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v) if a and b)


def _reduce(rows: list[list[Fraction]], width: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rows, pivot columns)."""
    m = [list(map(Fraction, r)) for r in rows]
    pivots = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        lead = m[r][c]
        m[r] = [x / lead for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def affine_rank(points: Sequence[Sequence]) -> int:
    if len(points) <= 1:
        return 0
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    return len(_reduce(rows, len(p0))[1])


def hyperplane_through(points: Sequence[Sequence]) -> tuple[IntVector, Fraction]:
    """Primitive integer normal and offset of the hyperplane spanned by d points in d-space."""
    d = len(points[0])
    p0 = points[0]
    rows = [[a - b for a, b in zip(p, p0)] for p in points[1:]]
    reduced, pivots = _reduce(rows, d)
    free = [c for c in range(d) if c not in pivots]
    if len(free) != 1:
        raise ValueError("points do not span a hyperplane")
    f = free[0]
    vec = [Fraction(0)] * d
    vec[f] = Fraction(1)
    for row, c in zip(reduced, pivots):
        vec[c] = -row[f]
    scale = math.lcm(*(x.denominator for x in vec))
    normal = primitive([int(x * scale) for x in vec])
    return normal, Fraction(dot(normal, p0))


@dataclass(frozen=True)
class Pattern:
    name: str
    points: tuple[IntVector, ...]

    def __post_init__(self):
        dims = {len(p) for p in self.points}
        if len(dims) > 1:
            raise ValueError("pattern points must share one dimension")

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def coordinate_values(self) -> list[tuple[int, ...]]:
        return [tuple(sorted({p[j] for p in self.points})) for j in range(self.dim)]


def _need_dim(d: int) -> None:
    if d < 2:
        raise ValueError("dimension must be at least 2")


def simplex_vertices(d: int) -> Pattern:
    """``S_d`` in vertex order ``v_0, ..., v_d``."""
    _need_dim(d)
    verts = [(0,) * d]
    for i in range(1, d):
        v = [0] * d
        v[0], v[i] = i, 1
        verts.append(tuple(v))
    verts.append((d,) + (0,) * (d - 1))
    return Pattern(f"S_{d}", tuple(verts))


def grid_pattern(d: int) -> Pattern:
    _need_dim(d)
    axes = [range(d), (-1, 0, 1)] + [(0, 1)] * (d - 2)
    return Pattern(f"T_{d}", tuple(product(*axes)))


def facets(d: int) -> list[tuple[int, ...]]:
    """Vertex-index tuples of the facets of ``S_d``; the one omitting ``v_d`` comes first."""
    return list(combinations(range(d + 1), d))


def facet_normals(d: int) -> list[IntVector]:
    verts = simplex_vertices(d).points
    out = []
    for f in facets(d):
        try:
            normal, _ = hyperplane_through([verts[i] for i in f])
        except ValueError as exc:
            raise RuntimeError(f"degenerate facet {f} of S_{d}") from exc
        out.append(normal)
    return out


@dataclass(frozen=True)
class FacetWitness:
    facet: tuple[int, ...]
    normal: IntVector
    points: tuple[IntVector, ...]


def facet_shift_check(d: int) -> list[FacetWitness]:
    """Show each facet of ``S_d`` is parallel to a hyperplane through the origin spanned by points of ``T_d``.

    Facets through the origin and ``v_d`` swap ``v_d`` for ``(d-1) e1``;
    the facet avoiding the origin is translated by ``-v_1``.
    """
    verts = simplex_vertices(d).points
    grid = set(grid_pattern(d).points)
    normals = facet_normals(d)
    origin = verts[0]
    shorter = (d - 1,) + (0,) * (d - 1)
    out = []
    for f, normal in zip(facets(d), normals):
        pts = [verts[i] for i in f]
        if 0 not in f:
            pts = [tuple(a - b for a, b in zip(p, verts[1])) for p in pts]
        elif d in f:
            pts = [shorter if i == d else verts[i] for i in f]
        ok = (
            origin in pts
            and all(p in grid for p in pts)
            and all(dot(normal, p) == 0 for p in pts)
            and affine_rank(pts) == d - 1
        )
        if not ok:
            raise RuntimeError(f"no shorter-grid witness for facet {f} of S_{d}")
        out.append(FacetWitness(f, normal, tuple(pts)))
    return out


class HomotheticCopy(NamedTuple):
    holder: PointND
    ratio: Fraction
    pattern: str

    def image(self, pattern: Pattern) -> list[PointND]:
        return [tuple(h + self.ratio * c if c else h for h, c in zip(self.holder, p)) for p in pattern.points]


class _Frame:
    """Integer copy of A: every element and candidate ratio times ``scale``.

    ``scale`` is the common denominator of A times the smallest coordinate
    span of the pattern, which makes every candidate ratio integral.
    """

    def __init__(self, A: NumberSet, pattern: Pattern, ratios: str):
        if ratios not in (POSITIVE, NONZERO):
            raise ValueError(f"unknown ratio policy {ratios!r}")
        spans = [vals[-1] - vals[0] for vals in pattern.coordinate_values() if len(vals) > 1]
        if not spans:
            raise ValueError("pattern must contain two distinct points")
        gap = min(spans)
        self.scale, self.ints = A.scaled(A.common_denominator() * gap)
        self.members = frozenset(self.ints)
        self.back = dict(zip(self.ints, A.elements))
        lams = {(b - a) // gap for a in self.ints for b in self.ints if b > a}
        if ratios == NONZERO:
            lams |= {-x for x in lams}
        self.lams = sorted(lams)

    def value(self, X: int) -> Fraction:
        v = self.back.get(X)
        return Fraction(X, self.scale) if v is None else v

    def point(self, P: tuple[int, ...]) -> PointND:
        return tuple(self.value(X) for X in P)

    def ratio(self, lam: int) -> Fraction:
        return Fraction(lam, self.scale)

    def to_int(self, x: Fraction) -> int | None:
        X = Fraction(x) * self.scale
        return X.numerator if X.denominator == 1 else None


def _holders_per_coordinate(values, ints, members, lam) -> list[list[int]]:
    out = []
    for vals in values:
        c0 = vals[0]
        rest = [lam * c for c in vals[1:]]
        hs = []
        for a in ints:
            h = a - lam * c0
            if all(h + s in members for s in rest):
                hs.append(h)
        out.append(hs)
    return out


def _copies_job(job) -> list[tuple[tuple[int, ...], int]]:
    values, ints, lams = job
    members = frozenset(ints)
    out = []
    for lam in lams:
        out.extend((h, lam) for h in product(*_holders_per_coordinate(values, ints, members, lam)))
    return out


def _int_copies(pattern: Pattern, frame: _Frame, workers: int) -> list[tuple[tuple[int, ...], int]]:
    values = pattern.coordinate_values()
    jobs = [(values, frame.ints, chunk) for chunk in chunked(frame.lams, workers)]
    return [c for part in pmap(_copies_job, jobs, workers) for c in part]


def _check_pattern(pattern: Pattern, d: int | None) -> int:
    if d is not None and pattern.dim != d:
        raise ValueError(f"pattern has dimension {pattern.dim}, expected {d}")
    return pattern.dim


def enumerate_homothetic_copies(
    pattern: Pattern,
    A: NumberSet,
    d: int | None = None,
    ratios: str = POSITIVE,
    workers: int = 1,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> list[HomotheticCopy]:
    """All ``(holder, ratio)`` with ``holder + ratio * pattern`` inside ``A^d``.

    Output is ordered by ratio, then holder. Candidate ratios are the
    differences of A divided by the smallest coordinate span of the pattern.
    """
    d = _check_pattern(pattern, d)
    check_cells(len(A), d, max_cells)
    frame = _Frame(A, pattern, ratios)
    if len(A) < 2:
        return []
    return [HomotheticCopy(frame.point(h), frame.ratio(lam), pattern.name) for h, lam in _int_copies(pattern, frame, workers)]


def count_homothetic_copies(pattern: Pattern, A: NumberSet, ratios: str = POSITIVE) -> int:
    frame = _Frame(A, pattern, ratios)
    values = pattern.coordinate_values()
    total = 0
    for lam in frame.lams:
        total += math.prod(len(hs) for hs in _holders_per_coordinate(values, frame.ints, frame.members, lam))
    return total


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return Fraction(a) / b


def brute_force_copies(pattern_points: Sequence[Sequence[int]], host_points: Iterable[Sequence], ratios: str = POSITIVE) -> set:
    """Reference matcher over an explicit point set of any dimension.

    Fixes two pattern points ``u0, u1`` and tries every pair of host points
    on a common line parallel to ``u1 - u0`` as their images.
    """
    pts = [tuple(p) for p in pattern_points]
    u0, u1 = pts[0], next(p for p in pts if p != pts[0])
    w = [b - a for a, b in zip(u0, u1)]
    j = next(i for i, x in enumerate(w) if x)
    host = {tuple(p) for p in host_points}
    lines = defaultdict(list)
    for x in host:
        t = _div(x[j], w[j])
        lines[tuple(xi - t * wi for xi, wi in zip(x, w))].append((t, x))
    found = set()
    for members in lines.values():
        for (t1, x), (t2, _) in product(members, members):
            lam = t2 - t1
            if lam == 0 or (ratios == POSITIVE and lam < 0):
                continue
            holder = tuple(xi - lam * ui for xi, ui in zip(x, u0))
            if all(tuple(h + lam * c for h, c in zip(holder, p)) in host for p in pts):
                found.add((tuple(Fraction(h) for h in holder), Fraction(lam)))
    return found


def popular_holders(copies: Iterable[HomotheticCopy], threshold: int) -> frozenset[PointND]:
    counts = Counter(c.holder for c in copies)
    return frozenset(h for h, m in counts.items() if m >= threshold)


@dataclass(frozen=True)
class HyperplaneClass:
    """Offsets ``normal . x`` over ``A^d`` with the number of points at each."""

    normal: IntVector
    classes: dict[Fraction, int]
    rich_threshold: int

    @property
    def rich(self) -> frozenset[Fraction]:
        return frozenset(t for t, c in self.classes.items() if c >= self.rich_threshold)

    def offset(self, point: Sequence) -> Fraction:
        return Fraction(dot(self.normal, point))

    def count_at(self, point: Sequence) -> int:
        return self.classes.get(self.offset(point), 0)


def _class_counts(ints: Sequence[int], normal: Sequence[int]) -> Counter:
    """Multiset of ``normal . x`` over ``x`` in ``ints^d`` as a convolution of 1-D counts."""
    if not ints:
        return Counter()
    acc = Counter({0: 1})
    for coef in normal:
        if coef == 0:
            acc = Counter({s: c * len(ints) for s, c in acc.items()})
            continue
        nxt = Counter()
        for s, c in acc.items():
            for v in ints:
                nxt[s + coef * v] += c
        acc = nxt
    return acc


def hyperplane_classes(A: NumberSet, d: int, normal: Sequence[int], beta_threshold: int) -> HyperplaneClass:
    """Class census of ``A^d`` along ``normal`` without materialising ``A^d``."""
    if len(normal) != d:
        raise ValueError(f"normal has length {len(normal)}, expected {d}")
    normal = primitive(normal)
    scale, ints = A.scaled()
    counts = _class_counts(ints, normal)
    classes = {Fraction(s, scale): c for s, c in sorted(counts.items())}
    return HyperplaneClass(normal, classes, beta_threshold)


@dataclass
class RichFilterResult:
    kept: frozenset[PointND]
    normals: list[IntVector]
    classes: list[HyperplaneClass]

    @property
    def rich_sets(self) -> list[frozenset[Fraction]]:
        return [hc.rich for hc in self.classes]


def rich_hyperplane_filter(A: NumberSet, d: int, popular: Iterable[PointND], beta_threshold: int) -> RichFilterResult:
    """Keep popular points lying on a rich hyperplane parallel to every facet of ``S_d``."""
    normals = facet_normals(d)
    classes = [hyperplane_classes(A, d, nu, beta_threshold) for nu in normals]
    kept = frozenset(p for p in popular if all(hc.count_at(p) >= beta_threshold for hc in classes))
    return RichFilterResult(kept, normals, classes)


class SimplexWitness(NamedTuple):
    vertices: tuple[PointND, ...]
    holder: PointND
    ratio: Fraction
    projected_ap: APWitness


def _simplex_image(h: tuple[int, ...], lam: int, d: int) -> list[tuple[int, ...]]:
    verts = [h]
    for i in range(1, d):
        v = list(h)
        v[0] += i * lam
        v[i] += lam
        verts.append(tuple(v))
    v = list(h)
    v[0] += d * lam
    verts.append(tuple(v))
    return verts


def _simplex_job(job) -> list[tuple[tuple[int, ...], int]]:
    d, ints, lams, allowed, rich = job
    members = frozenset(ints)
    values = simplex_vertices(d).coordinate_values()
    normals = facet_normals(d)
    firsts = [f[0] for f in facets(d)]
    out = []
    for lam in lams:
        for h in product(*_holders_per_coordinate(values, ints, members, lam)):
            verts = _simplex_image(h, lam, d)
            if allowed is not None and not all(v in allowed for v in verts):
                continue
            if rich is not None and not all(dot(nu, verts[i]) in rs for nu, i, rs in zip(normals, firsts, rich)):
                continue
            out.append((h, lam))
    return out


def _int_simplices(frame: _Frame, d: int, allowed, rich, workers: int) -> list[tuple[tuple[int, ...], int]]:
    jobs = [(d, frame.ints, chunk, allowed, rich) for chunk in chunked(frame.lams, workers)]
    return [s for part in pmap(_simplex_job, jobs, workers) for s in part]


def _simplex_witness(frame: _Frame, h: tuple[int, ...], lam: int, d: int) -> SimplexWitness:
    verts = tuple(frame.point(v) for v in _simplex_image(h, lam, d))
    ratio = frame.ratio(lam)
    terms = tuple(v[0] for v in verts)
    ap = APWitness(terms if lam > 0 else terms[::-1], abs(ratio))
    return SimplexWitness(verts, verts[0], ratio, ap)


def enumerate_simplices(
    A: NumberSet,
    d: int,
    allowed_points: Iterable[PointND] | None = None,
    rich_sets: Sequence[Iterable[Fraction]] | None = None,
    ratios: str = NONZERO,
    workers: int = 1,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> list[SimplexWitness]:
    """Homothets of ``S_d`` with all vertices allowed and every facet on an allowed hyperplane.

    ``None`` for either filter means no restriction. ``rich_sets[i]`` lists
    the permitted offsets for the facet ``facets(d)[i]``. Ordered by ratio,
    then holder.
    """
    simplex = simplex_vertices(d)
    check_cells(len(A), d, max_cells)
    frame = _Frame(A, simplex, ratios)
    allowed = rich = None
    if allowed_points is not None:
        allowed = set()
        for p in allowed_points:
            P = tuple(frame.to_int(x) for x in p)
            if None not in P:
                allowed.add(P)
        if not allowed:
            return []
    if rich_sets is not None:
        rich = [frozenset(X for X in map(frame.to_int, rs) if X is not None) for rs in rich_sets]
    return [_simplex_witness(frame, h, lam, d) for h, lam in _int_simplices(frame, d, allowed, rich, workers)]


def brute_force_simplices(
    points: Iterable[PointND],
    d: int,
    rich_sets: Sequence[Iterable[Fraction]] | None = None,
    cap: int = 200,
) -> set[frozenset]:
    """Every (d+1)-subset whose d-subsets lie on hyperplanes of pairwise distinct facet directions.

    Test oracle only; refuses more than ``cap`` points.
    """
    pts = sorted({tuple(p) for p in points})
    if len(pts) > cap:
        raise SizeCapError(f"brute-force simplex search is capped at {cap} points, got {len(pts)}")
    normals = facet_normals(d)
    rich = None if rich_sets is None else [frozenset(s) for s in rich_sets]
    found = set()
    for subset in combinations(pts, d + 1):
        if affine_rank(subset) != d:
            continue
        used = set()
        for i in range(d + 1):
            face = subset[:i] + subset[i + 1:]
            match = None
            for k, nu in enumerate(normals):
                off = dot(nu, face[0])
                if all(dot(nu, p) == off for p in face[1:]):
                    match = k
                    break
            if match is None or match in used:
                break
            if rich is not None and Fraction(dot(normals[match], face[0])) not in rich[match]:
                break
            used.add(match)
        else:
            found.add(frozenset(subset))
    return found


@dataclass
class ProjectionReport:
    distinct: list[APWitness]
    multiplicity: dict[APWitness, int]
    positive_multiplicity: dict[APWitness, int]
    bound: int


def project_simplices(ws: Iterable[SimplexWitness], A: NumberSet, d: int) -> ProjectionReport:
    """Collapse simplices to their first-axis progressions and check the multiplicity bound."""
    mult = Counter()
    pos = Counter()
    for w in ws:
        ap = w.projected_ap
        if ap.k != d + 1 or ap.difference != abs(w.ratio) or any(t not in A for t in ap.terms):
            raise RuntimeError(f"simplex at {w.holder} projects to an invalid progression")
        mult[ap] += 1
        if w.ratio > 0:
            pos[ap] += 1
    return _projection_report(mult, pos, len(A), d)


def _projection_report(mult: Counter, pos: Counter, n: int, d: int) -> ProjectionReport:
    bound = n ** (d - 1)
    worst = max(pos.values(), default=0)
    if worst > bound:
        raise RuntimeError(f"projection multiplicity {worst} exceeds |A|^(d-1) = {bound}")
    return ProjectionReport(sorted(mult), dict(sorted(mult.items())), dict(sorted(pos.items())), bound)


def _project_ints(found, frame: _Frame, d: int) -> ProjectionReport:
    """``project_simplices`` for integer (holder, ratio) pairs; converts only distinct progressions."""
    mult, pos = Counter(), Counter()
    for h, lam in found:
        key = (h[0] if lam > 0 else h[0] + d * lam, abs(lam))
        mult[key] += 1
        if lam > 0:
            pos[key] += 1

    def ap(key) -> APWitness:
        start, step = key
        terms = [start + m * step for m in range(d + 1)]
        if any(t not in frame.members for t in terms):
            raise RuntimeError(f"simplex projects outside A: {terms}")
        return APWitness(tuple(frame.value(t) for t in terms), frame.ratio(step))

    return _projection_report(
        Counter({ap(k): v for k, v in mult.items()}),
        Counter({ap(k): v for k, v in pos.items()}),
        len(frame.ints),
        d,
    )


@dataclass
class GeneralReport:
    n: int
    d: int
    copy_count: int = 0
    copy_density: Fraction = Fraction(0)
    holder_count: int = 0
    alpha_used: Fraction | None = None
    popular_count: int = 0
    gamma: Fraction = Fraction(0)
    beta_used: Fraction | None = None
    rich_threshold: int = 0
    rich_counts: list[int] = field(default_factory=list)
    rich_bound: Fraction | None = None
    kept_count: int = 0
    simplex_count: int = 0
    positive_simplex_count: int = 0
    projection: ProjectionReport | None = None
    reference_ap_count: int = 0
    beta_choice_lhs: Fraction | None = None
    empty_stage: str | None = None

    @property
    def distinct_ap_count(self) -> int:
        return len(self.projection.distinct) if self.projection else 0


def _largest_level(values: list[int], enough) -> int:
    """Largest v in ``values`` with ``enough(#{x >= v})``; values must be nonempty."""
    ordered = sorted(values, reverse=True)
    for i, v in enumerate(ordered):
        if (i + 1 == len(ordered) or ordered[i + 1] != v) and enough(i + 1):
            return v
    return ordered[-1]


def general_pipeline(
    A: NumberSet,
    d: int,
    alpha: Fraction | None = None,
    beta: Fraction | None = None,
    holder_fraction: Fraction = Fraction(1, 2),
    workers: int = 1,
    max_cells: int = DEFAULT_MAX_CELLS,
) -> GeneralReport:
    """Grid copies, popular holders, rich-hyperplane filter, simplices, projection.

    ``alpha``/``beta`` of ``None`` pick thresholds automatically: the
    largest holder level keeping ``holder_fraction`` of holders, then the
    largest richness level keeping half of the popular points. A holder is
    popular when it holds at least ``alpha * |A|`` grids (``alpha = 0``
    admits all of ``A^d``); a hyperplane is rich with at least
    ``beta * |A|^(d-1)`` points.
    """
    _need_dim(d)
    n = len(A)
    check_cells(n, d, max_cells)
    report = GeneralReport(n=n, d=d)
    report.reference_ap_count = count_k_aps(A, d)[0] if d >= 3 else n * (n - 1) // 2
    if n < 2:
        report.empty_stage = "grid_copies"
        return report

    grid, simplex = grid_pattern(d), simplex_vertices(d)
    tframe = _Frame(A, grid, POSITIVE)
    sframe = _Frame(A, simplex, NONZERO)
    # both patterns have a coordinate of span 1, so the two frames share a scale
    assert tframe.scale == sframe.scale

    copies = _int_copies(grid, tframe, workers)
    report.copy_count = len(copies)
    report.copy_density = Fraction(len(copies), n ** (d + 1))
    if not copies:
        report.empty_stage = "grid_copies"
        return report
    held = Counter(h for h, _ in copies)
    del copies
    report.holder_count = len(held)

    if alpha is None:
        level = _largest_level(list(held.values()), lambda k: k >= holder_fraction * len(held))
        alpha = Fraction(level, n)
    alpha = Fraction(alpha)
    report.alpha_used = alpha
    if alpha <= 0:
        popular = set(product(tframe.ints, repeat=d))
    else:
        popular = {h for h, m in held.items() if m >= alpha * n}
    report.popular_count = len(popular)
    report.gamma = Fraction(len(popular), n**d)
    if not popular:
        report.empty_stage = "popular_holders"
        return report

    normals = facet_normals(d)
    census = [_class_counts(tframe.ints, nu) for nu in normals]
    cell = n ** (d - 1)
    if beta is None:
        minima = [min(cc[dot(nu, p)] for nu, cc in zip(normals, census)) for p in popular]
        level = _largest_level(minima, lambda k: 2 * k >= len(popular))
        beta = Fraction(level, cell)
    beta = Fraction(beta)
    report.beta_used = beta
    threshold = max(0, math.ceil(beta * cell))
    report.rich_threshold = threshold
    rich = [frozenset(o for o, c in cc.items() if c >= threshold) for cc in census]
    report.rich_counts = [len(r) for r in rich]
    report.rich_bound = Fraction(n) / beta if beta > 0 else None
    report.beta_choice_lhs = report.gamma * alpha / (2 * d)
    kept = {p for p in popular if all(dot(nu, p) in r for nu, r in zip(normals, rich))}
    report.kept_count = len(kept)
    if not kept:
        report.empty_stage = "rich_hyperplane_filter"
        return report

    found = _int_simplices(sframe, d, kept, rich, workers)
    report.simplex_count = len(found)
    report.positive_simplex_count = sum(1 for _, lam in found if lam > 0)
    report.projection = _project_ints(found, sframe, d)
    if not found:
        report.empty_stage = "simplices"
    return report


@dataclass
class ScalingReport:
    sizes: list[int]
    counts: list[int]
    slope: float | None
    ceiling: Fraction


def covering_scaling_report(pattern: Pattern, hosts: Sequence[NumberSet], ratios: str = POSITIVE) -> ScalingReport:
    """Copy counts of ``pattern`` in ``host^dim`` for growing hosts, with a log-log slope.

    The pattern is read as a facet living in a ``dim``-flat of
    ``(dim+1)``-space, so the reference ceiling is ``1 + 1/dim``. Counts come
    from the brute-force matcher and must agree with the factorised
    enumerator.
    """
    if len(hosts) < 3:
        raise ValueError("at least 3 host sizes are required")
    m = pattern.dim
    sizes, counts = [], []
    for host in hosts:
        cells = list(product(host.elements, repeat=m))
        brute = len(brute_force_copies(pattern.points, cells, ratios))
        fast = count_homothetic_copies(pattern, host, ratios)
        if brute != fast:
            raise RuntimeError(f"copy count mismatch on host of size {len(host)}: {brute} != {fast}")
        sizes.append(len(cells))
        counts.append(brute)
    slope = None
    if all(c > 0 for c in counts) and len(set(sizes)) > 1:
        slope = statistics.linear_regression([math.log(s) for s in sizes], [math.log(c) for c in counts]).slope
    return ScalingReport(sizes, counts, slope, 1 + Fraction(1, m))
