"""Instance generators and seeded experiment drivers.

An :class:`InstanceSpec` pairs a set recipe with a graph recipe; both are
plain frozen dataclasses with a JSON-friendly ``to_dict``/``from_dict`` so a
report can echo exactly what produced it.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Union

from apgraph._parallel import pmap
from apgraph.arrangement import pipeline_k3
from apgraph.exact import (
    NumberSet,
    PairGraph,
    as_rational,
    count_k_aps,
    format_rational,
    sumset_along_graph,
)
from apgraph.pattern import general_pipeline
from apgraph.pluennecke import cover_count, pluennecke_check
from apgraph.rng import SplitMix64


def _q(x) -> str:
    return format_rational(as_rational(x))


@dataclass(frozen=True)
class APSet:
    n: int
    start: Fraction = Fraction(0)
    step: Fraction = Fraction(1)

    def values(self) -> list[Fraction]:
        start, step = as_rational(self.start), as_rational(self.step)
        if step == 0:
            raise ValueError("AP step must be nonzero")
        return [start + i * step for i in range(self.n)]


@dataclass(frozen=True)
class GAPSet:
    dims: tuple[int, ...]
    steps: tuple[Fraction, ...]
    start: Fraction = Fraction(0)


@dataclass(frozen=True)
class RandomSubset:
    n: int
    N: int
    seed: int


@dataclass(frozen=True)
class UnionOfAPs:
    parts: tuple[APSet, ...]


@dataclass(frozen=True)
class ExplicitSet:
    values: tuple[Fraction, ...]


SetSpec = Union[APSet, GAPSet, RandomSubset, UnionOfAPs, ExplicitSet]


@dataclass(frozen=True)
class CompleteGraph:
    loops: bool = False


@dataclass(frozen=True)
class RandomGraph:
    p: Fraction
    seed: int


@dataclass(frozen=True)
class SumRestricted:
    s: int


GraphSpec = Union[CompleteGraph, RandomGraph, SumRestricted]


@dataclass(frozen=True)
class InstanceSpec:
    set_spec: SetSpec
    graph_spec: GraphSpec = CompleteGraph()

    def to_dict(self) -> dict:
        return {"set": _set_to_dict(self.set_spec), "graph": _graph_to_dict(self.graph_spec)}

    @classmethod
    def from_dict(cls, data: dict) -> InstanceSpec:
        graph = data.get("graph", {"kind": "complete"})
        return cls(_set_from_dict(data["set"]), _graph_from_dict(graph))


def _set_to_dict(s: SetSpec) -> dict:
    if isinstance(s, APSet):
        return {"kind": "ap", "n": s.n, "start": _q(s.start), "step": _q(s.step)}
    if isinstance(s, GAPSet):
        return {"kind": "gap", "dims": list(s.dims), "steps": [_q(x) for x in s.steps], "start": _q(s.start)}
    if isinstance(s, RandomSubset):
        return {"kind": "random_subset", "n": s.n, "N": s.N, "seed": s.seed}
    if isinstance(s, UnionOfAPs):
        return {"kind": "union_of_aps", "parts": [_set_to_dict(p) for p in s.parts]}
    if isinstance(s, ExplicitSet):
        return {"kind": "explicit", "values": [_q(v) for v in s.values]}
    raise TypeError(f"unknown set spec {s!r}")


def _set_from_dict(d: dict) -> SetSpec:
    kind = d.get("kind")
    if kind == "ap":
        return APSet(int(d["n"]), as_rational(str(d.get("start", 0))), as_rational(str(d.get("step", 1))))
    if kind == "gap":
        return GAPSet(
            tuple(int(x) for x in d["dims"]),
            tuple(as_rational(str(x)) for x in d["steps"]),
            as_rational(str(d.get("start", 0))),
        )
    if kind == "random_subset":
        return RandomSubset(int(d["n"]), int(d["N"]), int(d["seed"]))
    if kind == "union_of_aps":
        return UnionOfAPs(tuple(_set_from_dict(p) for p in d["parts"]))
    if kind == "explicit":
        return ExplicitSet(tuple(as_rational(str(v)) for v in d["values"]))
    raise ValueError(f"unknown set kind {kind!r}")


def _graph_to_dict(g: GraphSpec) -> dict:
    if isinstance(g, CompleteGraph):
        return {"kind": "complete_loops" if g.loops else "complete"}
    if isinstance(g, RandomGraph):
        return {"kind": "random", "p": _q(g.p), "seed": g.seed}
    if isinstance(g, SumRestricted):
        return {"kind": "sum_restricted", "s": g.s}
    raise TypeError(f"unknown graph spec {g!r}")


def _graph_from_dict(d: dict) -> GraphSpec:
    kind = d.get("kind")
    if kind in ("complete", "complete_loops"):
        return CompleteGraph(kind == "complete_loops")
    if kind == "random":
        return RandomGraph(as_rational(str(d["p"])), int(d["seed"]))
    if kind == "sum_restricted":
        return SumRestricted(int(d["s"]))
    raise ValueError(f"unknown graph kind {kind!r}")


def generate_set(spec: SetSpec) -> NumberSet:
    if isinstance(spec, APSet):
        return NumberSet(spec.values())
    if isinstance(spec, GAPSet):
        if len(spec.dims) != len(spec.steps):
            raise ValueError("GAP needs one step per dimension")
        start = as_rational(spec.start)
        steps = [as_rational(s) for s in spec.steps]
        A = NumberSet(start + sum(i * s for i, s in zip(idx, steps)) for idx in product(*map(range, spec.dims)))
        if len(A) != math.prod(spec.dims):
            raise ValueError("GAP is not proper: distinct index vectors collide")
        return A
    if isinstance(spec, RandomSubset):
        if spec.n > spec.N + 1 or spec.n < 0:
            raise ValueError(f"cannot draw {spec.n} distinct values from {{0..{spec.N}}}")
        return NumberSet(SplitMix64(spec.seed).subset(spec.n, spec.N + 1))
    if isinstance(spec, UnionOfAPs):
        return NumberSet(v for part in spec.parts for v in part.values())
    if isinstance(spec, ExplicitSet):
        return NumberSet(spec.values)
    raise TypeError(f"unknown set spec {spec!r}")


def random_graph(n: int, p: Fraction, seed: int) -> PairGraph:
    """Each pair ``i < j`` in lexicographic order kept with probability p."""
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = SplitMix64(seed)
    return PairGraph(n, frozenset((i, j) for i in range(n) for j in range(i + 1, n) if rng.bernoulli(p)))


def generate_graph(spec: GraphSpec, A: NumberSet) -> PairGraph:
    n = len(A)
    if isinstance(spec, CompleteGraph):
        return PairGraph.complete(n, spec.loops)
    if isinstance(spec, RandomGraph):
        return random_graph(n, spec.p, spec.seed)
    if isinstance(spec, SumRestricted):
        if spec.s < 0:
            raise ValueError("target sumset size must be nonnegative")
        a = A.elements
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        keep_sums = set(sorted({a[i] + a[j] for i, j in pairs})[: spec.s])
        return PairGraph(n, frozenset((i, j) for i, j in pairs if a[i] + a[j] in keep_sums))
    raise TypeError(f"unknown graph spec {spec!r}")


def generate(spec: InstanceSpec) -> tuple[NumberSet, PairGraph]:
    A = generate_set(spec.set_spec)
    return A, generate_graph(spec.graph_spec, A)


def ap_free_subset(n: int, N: int, k: int, seed: int, attempts: int = 50) -> NumberSet:
    """Greedy random k-AP-free subset of ``{0..N}`` of size n, certified by ``count_k_aps``."""
    rng = SplitMix64(seed)
    for _ in range(attempts):
        chosen: list[int] = []
        members: set[int] = set()
        for x in rng.shuffled(list(range(N + 1))):
            if _extends_ap(members, x, k):
                continue
            chosen.append(x)
            members.add(x)
            if len(chosen) == n:
                A = NumberSet(chosen)
                if count_k_aps(A, k)[0] == 0:
                    return A
                break
    raise ValueError(f"no {k}-AP-free subset of size {n} found in {{0..{N}}}")


def _extends_ap(members: set[int], x: int, k: int) -> bool:
    """Would adding x complete a k-term progression inside ``members | {x}``?"""
    for y in members:
        q = abs(y - x)
        for pos in range(k):  # position of x within the progression
            start = x - pos * q
            if all(start + m * q in members for m in range(k) if m != pos):
                return True
    return False


@dataclass(frozen=True)
class K3Task:
    epsilon: Fraction = Fraction(1, 10)
    alpha: Fraction | None = None


@dataclass(frozen=True)
class GeneralTask:
    d: int
    alpha: Fraction | None = None
    beta: Fraction | None = None


@dataclass(frozen=True)
class PluenneckeBattery:
    seed: int = 0
    count: int = 200


@dataclass(frozen=True)
class CoverTask:
    v: tuple[int, ...]


Task = Union[K3Task, GeneralTask, PluenneckeBattery, CoverTask]


def _task_to_dict(task: Task) -> dict:
    def opt(x):
        return "auto" if x is None else _q(x)

    if isinstance(task, K3Task):
        return {"task": "k3_pipeline", "epsilon": _q(task.epsilon), "alpha": opt(task.alpha)}
    if isinstance(task, GeneralTask):
        return {"task": "general_pipeline", "d": task.d, "alpha": opt(task.alpha), "beta": opt(task.beta)}
    if isinstance(task, PluenneckeBattery):
        return {"task": "pluennecke_battery", "seed": task.seed, "count": task.count}
    if isinstance(task, CoverTask):
        return {"task": "cover_report", "v": list(task.v)}
    raise TypeError(f"unknown task {task!r}")


@dataclass
class ExperimentReport:
    instance: dict
    task: dict
    counts: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self, timings: bool = False) -> dict:
        out = {"instance": self.instance, "task": self.task, "counts": _plain(self.counts)}
        if timings:
            out["timings"] = dict(self.timings)
        return out


def _plain(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def battery_instances(seed: int, count: int) -> list[tuple[NumberSet, NumberSet]]:
    """``count`` pairs ``(A, B)`` of subsets of ``{0..100}`` with sizes in ``[2, 20]``."""
    rng = SplitMix64(seed)
    out = []
    for _ in range(count):
        A = NumberSet(rng.subset(rng.between(2, 20), 101))
        B = NumberSet(rng.subset(rng.between(2, 20), 101))
        out.append((A, B))
    return out


BATTERY_KL = tuple(product((1, 2, 3), repeat=2))


def _battery_job(pair) -> list[bool]:
    A, B = pair
    return [pluennecke_check(A, B, k, l).holds for k, l in BATTERY_KL]


def run_battery(pairs, workers: int = 1) -> tuple[int, int]:
    """Check every pair at every ``(k, l)`` in ``{1,2,3}^2``; returns ``(checks, holding)``."""
    results = [h for part in pmap(_battery_job, pairs, workers) for h in part]
    return len(results), sum(results)


def hypothesis_counts(A: NumberSet, G: PairGraph) -> dict[str, Any]:
    n = len(A)
    sums = len(sumset_along_graph(A, G))
    return {
        "n": n,
        "edges": G.pair_count,
        "sums": sums,
        "K_achieved": Fraction(sums, n) if n else Fraction(0),
        "c_achieved": Fraction(G.pair_count, n * n) if n else Fraction(0),
    }


def run_experiment(spec: InstanceSpec, task: Task, workers: int = 1) -> ExperimentReport:
    report = ExperimentReport(spec.to_dict(), _task_to_dict(task))
    t0 = time.perf_counter()
    try:
        A, G = generate(spec)
    except ValueError as exc:
        raise ValueError(f"[generate] {exc}") from exc
    report.timings["generate"] = time.perf_counter() - t0
    report.counts.update(hypothesis_counts(A, G))

    t0 = time.perf_counter()
    stage = _task_to_dict(task)["task"]
    try:
        if isinstance(task, K3Task):
            k3 = pipeline_k3(A, G, task.epsilon, task.alpha, workers)
            ref = k3.refinement
            report.counts.update(
                {
                    "alpha_used": ref.alpha_used if ref else None,
                    "edges_after": ref.edges_after if ref else 0,
                    "D_achieved": ref.D_achieved if ref else None,
                    "bound_satisfied": ref.bound_satisfied if ref else True,
                    "triangles": k3.triangle_count,
                    "distinct_aps": k3.distinct_ap_count,
                    "max_multiplicity": max((m for _, m in k3.aps), default=0),
                }
            )
        elif isinstance(task, GeneralTask):
            gen = general_pipeline(A, task.d, task.alpha, task.beta, workers=workers)
            report.counts.update(
                {
                    "grid_copies": gen.copy_count,
                    "holders": gen.holder_count,
                    "alpha_used": gen.alpha_used,
                    "popular": gen.popular_count,
                    "beta_used": gen.beta_used,
                    "rich_counts": gen.rich_counts,
                    "kept": gen.kept_count,
                    "simplices": gen.simplex_count,
                    "distinct_aps": gen.distinct_ap_count,
                    "reference_ap_count": gen.reference_ap_count,
                    "empty_stage": gen.empty_stage,
                }
            )
        elif isinstance(task, PluenneckeBattery):
            pairs = [(A, A)] + battery_instances(task.seed, task.count)
            checks, holding = run_battery(pairs, workers)
            report.counts.update({"checks": checks, "holds": holding, "all_hold": checks == holding})
        elif isinstance(task, CoverTask):
            cov = cover_count(A, task.v)
            report.counts.update({"distinct_offsets": cov.distinct_offsets, "per_element": Fraction(cov.distinct_offsets, len(A))})
        else:
            raise TypeError(f"unknown task {task!r}")
    except ValueError as exc:
        raise ValueError(f"[{stage}] {exc}") from exc
    report.timings[stage] = time.perf_counter() - t0
    return report
