"""Doubling-based checks: ``|kB - lB| <= (|A+B|/|A|)^(k+l) |A|`` and hyperplane covers of ``A^d``."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from apgraph.exact import NumberSet, doubling_ratio, iterated_sumset, sumset
from apgraph.pattern import facet_normals


@dataclass(frozen=True)
class PluenneckeResult:
    n: int
    delta: Fraction
    k: int
    l: int
    lhs: int
    rhs_bound: Fraction

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs_bound


def pluennecke_check(A: NumberSet, B: NumberSet, k: int, l: int) -> PluenneckeResult:
    if not len(A) or not len(B):
        raise ValueError("A and B must be nonempty")
    if k < 0 or l < 0 or k + l < 1:
        raise ValueError("need k, l >= 0 with k + l >= 1")
    delta = doubling_ratio(A, B)
    lhs = len(iterated_sumset(B, k, l))
    return PluenneckeResult(len(A), delta, k, l, lhs, delta ** (k + l) * len(A))


@dataclass(frozen=True)
class CoverResult:
    normal: tuple[int, ...]
    d: int
    distinct_offsets: int
    bound_reference: int


def scaled_sumset(A: NumberSet, v: Sequence[int]) -> NumberSet:
    """``x_1 A + ... + x_d A``; a zero coefficient contributes ``{0}``."""
    acc = NumberSet([0])
    for x in v:
        if x:
            acc = sumset(acc, (x * a for a in A))
    return acc


def cover_count(A: NumberSet, v: Sequence[int]) -> CoverResult:
    """Number of hyperplanes with normal ``v`` needed to cover ``A^d``."""
    v = tuple(int(x) for x in v)
    if not any(v):
        raise ValueError("normal vector must be nonzero")
    if not len(A):
        raise ValueError("A must be nonempty")
    size = len(scaled_sumset(A, v))
    return CoverResult(v, len(v), size, size)


@dataclass(frozen=True)
class GateResult:
    allowed: bool
    doubling: Fraction
    delta_cap: Fraction
    covers: tuple[CoverResult, ...]


def direct_mode_gate(A: NumberSet, delta_cap: Fraction, d: int) -> GateResult:
    """ALLOWED when ``|A+A|/|A| <= delta_cap``; then every facet direction of ``S_d`` gets its cover count."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    delta_cap = Fraction(delta_cap)
    ratio = doubling_ratio(A, A)
    if ratio > delta_cap:
        return GateResult(False, ratio, delta_cap, ())
    return GateResult(True, ratio, delta_cap, tuple(cover_count(A, nu) for nu in facet_normals(d)))
