"""Command-line front end.

Every subcommand prints a ``key=value`` report starting with ``schema=1``;
tabular parts follow as ``columns.<table>=a,b,...`` and one
``<table>=v1,v2,...`` line per row. ``--csv`` prints the table alone as
comma-separated values (or ``field,value`` pairs when there is no table).
Exit status: 0 success, 1 domain or input error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction
from pathlib import Path

from apgraph import arrangement as arr2
from apgraph import pattern as pnd
from apgraph.exact import (
    NumberSet,
    as_rational,
    count_k_aps,
    difference_set_along_graph,
    format_rational,
    sumset_along_graph,
)
from apgraph.formats import (
    GraphSource,
    InputError,
    parse_graph,
    read_graph,
    read_set,
    resolve_graph,
    write_graph,
    write_set,
)
from apgraph.harness import InstanceSpec, battery_instances, generate, hypothesis_counts, run_battery
from apgraph.pluennecke import cover_count, direct_mode_gate, pluennecke_check

SCHEMA = "1"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return "none"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return " ".join(_fmt(v) for v in value)
    return str(value)


class Report:
    def __init__(self, command: str):
        self.fields: list[tuple[str, str]] = [("schema", SCHEMA), ("command", command)]
        self.table_name: str | None = None
        self.columns: list[str] = []
        self.rows: list[list[str]] = []

    def add(self, key: str, value) -> None:
        self.fields.append((key, _fmt(value)))

    def table(self, name: str, columns: list[str], rows) -> None:
        self.table_name, self.columns = name, columns
        self.rows = [[_fmt(v) for v in row] for row in rows]

    def render(self, as_csv: bool = False) -> str:
        if as_csv:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            if self.table_name is None:
                writer.writerow(["field", "value"])
                writer.writerows(self.fields)
            else:
                writer.writerow(self.columns)
                writer.writerows(self.rows)
            return buf.getvalue()
        lines = [f"{k}={v}" for k, v in self.fields]
        if self.table_name is not None:
            lines.append(f"columns.{self.table_name}={','.join(self.columns)}")
            lines += [f"{self.table_name}={','.join(row)}" for row in self.rows]
        return "\n".join(lines) + "\n"


def rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not an exact rational: {text!r}") from exc


def optional_rational(text: str) -> Fraction | None:
    return None if text == "auto" else rational(text)


def int_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


_KEYWORD = re.compile(r"^(complete|complete_loops|random\s+p=\S+\s+seed=\d+)$")


def load_graph(arg: str) -> GraphSource:
    if _KEYWORD.match(arg.strip()):
        return parse_graph(arg, "--graph")
    return read_graph(arg)


def _point(p) -> str:
    return " ".join(format_rational(c) for c in p)


def cmd_gen(args, rep: Report) -> None:
    text = args.spec
    if text.startswith("@"):
        text = Path(text[1:]).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"--spec is not valid JSON: {exc}") from exc
    for part in (data.get("set", {}), data.get("graph", {})):
        if part.get("kind") in ("random_subset", "random") and "seed" not in part:
            part["seed"] = args.seed
    spec = InstanceSpec.from_dict(data)
    A, G = generate(spec)
    if args.out_set:
        write_set(args.out_set, A)
    if args.out_graph:
        write_graph(args.out_graph, G)
    rep.add("spec", json.dumps(spec.to_dict(), sort_keys=True, separators=(",", ":")))
    for k, v in hypothesis_counts(A, G).items():
        rep.add(k, v)
    rep.table("element", ["value"], [[x] for x in A])


def cmd_sumset(args, rep: Report) -> None:
    A = read_set(args.set)
    G = resolve_graph(load_graph(args.graph), A)
    op = sumset_along_graph if args.command == "sumset" else difference_set_along_graph
    S = op(A, G)
    rep.add("n", len(A))
    rep.add("edges", G.pair_count)
    rep.add("size", len(S))
    rep.table("element", ["value"], [[x] for x in S])


def cmd_aps(args, rep: Report) -> None:
    A = read_set(args.set)
    count, witnesses = count_k_aps(A, args.k)
    rep.add("n", len(A))
    rep.add("k", args.k)
    rep.add("count", count)
    rep.table("ap", ["terms", "difference"], [[str(w), w.difference] for w in witnesses])


def cmd_refine(args, rep: Report) -> None:
    A = read_set(args.set)
    G = resolve_graph(load_graph(args.graph), A)
    Gp, r = arr2.refine_graph(A, G, args.epsilon, args.alpha)
    if args.out_graph:
        write_graph(args.out_graph, Gp)
    for key in ("strategy", "epsilon", "alpha_used", "edges_before", "edges_after",
                "popular_difference_count", "D_achieved", "bound_satisfied"):
        rep.add(key, getattr(r, key))
    rep.table("difference", ["value"], [[t] for t in difference_set_along_graph(A, Gp)])


def cmd_triangles(args, rep: Report) -> None:
    A = read_set(args.set)
    G = resolve_graph(load_graph(args.graph), A)
    if args.arrangement == "sum":
        arr = arr2.build_sum_arrangement(A, G)
        counts = arr2.right_angle_counts(arr)
        rep.add("points", arr.point_count)
        rep.add("lines", arr.line_count)
        rep.add("right_angle_total", sum(counts.values()))
        rep.table("point", ["x", "y", "right_angles"], [[p.x, p.y, counts[p]] for p in arr.points])
        return
    arr = arr2.build_ap_arrangement(A, G, difference_set_along_graph(A, G), sumset_along_graph(A, G))
    tris = arr2.enumerate_triangles(arr, args.threads)
    rep.add("points", arr.point_count)
    for fam in arr.families:
        rep.add(f"lines_{fam.name.lower()}", len(arr.lines[fam]))
    rep.add("triangles", len(tris))
    if args.lines_graph:
        _, LG = arr2.lines_graph(arr)
        rep.add("graph_triangles", arr2.graph_triangle_count(LG))
    rep.table(
        "triangle",
        ["base_left", "base_right", "apex", "orientation"],
        [[_point(t.base_left), _point(t.base_right), _point(t.apex), t.orientation.name] for t in tris],
    )


def cmd_pipeline3(args, rep: Report) -> None:
    A = read_set(args.set)
    G = resolve_graph(load_graph(args.graph), A)
    out = arr2.pipeline_k3(A, G, args.epsilon, args.alpha, args.threads)
    rep.add("n", out.n)
    r = out.refinement
    rep.add("alpha_used", r.alpha_used if r else None)
    rep.add("edges_before", r.edges_before if r else 0)
    rep.add("edges_after", r.edges_after if r else 0)
    rep.add("D_achieved", r.D_achieved if r else None)
    rep.add("bound_satisfied", r.bound_satisfied if r else True)
    rep.add("points", out.point_count)
    rep.add("triangles", out.triangle_count)
    rep.add("distinct", out.distinct_ap_count)
    rep.table("ap", ["terms", "multiplicity"], [[str(ap), m] for ap, m in out.aps])


def cmd_pattern(args, rep: Report) -> None:
    d = args.d
    rep.add("d", d)
    if args.kind in ("simplex", "grid"):
        pat = pnd.simplex_vertices(d) if args.kind == "simplex" else pnd.grid_pattern(d)
        rep.add("name", pat.name)
        rep.add("size", len(pat.points))
        rep.table("point", ["coordinates"], [[list(p)] for p in pat.points])
    elif args.kind == "normals":
        rep.table("facet", ["vertices", "normal"], [[list(f), list(nu)] for f, nu in zip(pnd.facets(d), pnd.facet_normals(d))])
    else:
        ws = pnd.facet_shift_check(d)
        rep.add("facets_checked", len(ws))
        rep.table(
            "witness",
            ["vertices", "normal", "points"],
            [[list(w.facet), list(w.normal), ";".join(" ".join(map(str, p)) for p in w.points)] for w in ws],
        )


def _pattern_for(kind: str, d: int) -> pnd.Pattern:
    return pnd.simplex_vertices(d) if kind == "simplex" else pnd.grid_pattern(d)


def cmd_copies(args, rep: Report) -> None:
    A = read_set(args.set)
    pat = _pattern_for(args.pattern, args.d)
    copies = pnd.enumerate_homothetic_copies(pat, A, args.d, args.ratios, args.threads, args.max_cells)
    rep.add("pattern", pat.name)
    rep.add("ratios", args.ratios)
    rep.add("copies", len(copies))
    if args.threshold is not None:
        rep.add("popular_holders", len(pnd.popular_holders(copies, args.threshold)))
    rep.table("copy", ["holder", "ratio"], [[_point(c.holder), c.ratio] for c in copies])


def cmd_pipelined(args, rep: Report) -> None:
    A = read_set(args.set)
    out = pnd.general_pipeline(A, args.d, args.alpha, args.beta, args.holder_fraction, args.threads, args.max_cells)
    for key in ("n", "d", "copy_count", "copy_density", "holder_count", "alpha_used", "popular_count",
                "gamma", "beta_used", "rich_threshold", "rich_counts", "rich_bound", "kept_count",
                "simplex_count", "positive_simplex_count", "reference_ap_count", "beta_choice_lhs", "empty_stage"):
        rep.add(key, getattr(out, key))
    rep.add("distinct", out.distinct_ap_count)
    proj = out.projection
    rows = []
    if proj:
        rep.add("multiplicity_bound", proj.bound)
        rows = [[str(ap), proj.multiplicity[ap], proj.positive_multiplicity.get(ap, 0)] for ap in proj.distinct]
    rep.table("ap", ["terms", "multiplicity", "positive_multiplicity"], rows)


def cmd_pluennecke(args, rep: Report) -> None:
    if args.battery:
        checks, holding = run_battery(battery_instances(args.seed, args.battery), args.threads)
        rep.add("seed", args.seed)
        rep.add("pairs", args.battery)
        rep.add("checks", checks)
        rep.add("holds", holding)
        rep.add("all_hold", checks == holding)
        return
    if not (args.a and args.b and args.k is not None and args.l is not None):
        raise ValueError("need --a, --b, --k and --l (or --battery)")
    r = pluennecke_check(read_set(args.a), read_set(args.b), args.k, args.l)
    for key in ("n", "delta", "k", "l", "lhs", "rhs_bound", "holds"):
        rep.add(key, getattr(r, key))


def cmd_cover(args, rep: Report) -> None:
    A = read_set(args.set)
    if args.gate:
        g = direct_mode_gate(A, args.delta_cap, args.d)
        rep.add("decision", "ALLOWED" if g.allowed else "DENIED")
        rep.add("doubling", g.doubling)
        rep.add("delta_cap", g.delta_cap)
        rep.table("cover", ["normal", "distinct_offsets"], [[list(c.normal), c.distinct_offsets] for c in g.covers])
        return
    if args.v is None:
        raise ValueError("need --v (or --gate)")
    c = cover_count(A, args.v)
    rep.add("normal", list(c.normal))
    rep.add("distinct_offsets", c.distinct_offsets)


def parse_pattern_points(text: str) -> pnd.Pattern:
    try:
        pts = tuple(tuple(int(x) for x in part.split(",")) for part in text.split(";"))
    except ValueError as exc:
        raise ValueError(f"bad pattern {text!r}: use '0,0;1,1'") from exc
    return pnd.Pattern("custom", pts)


def cmd_scaling(args, rep: Report) -> None:
    pat = parse_pattern_points(args.pattern)
    hosts = [NumberSet(range(m)) for m in args.sizes]
    r = pnd.covering_scaling_report(pat, hosts, args.ratios)
    rep.add("pattern", args.pattern)
    rep.add("slope", "none" if r.slope is None else f"{r.slope:.6f}")
    rep.add("ceiling", r.ceiling)
    rep.table("size", ["host_side", "points", "copies"], [[m, s, c] for m, s, c in zip(args.sizes, r.sizes, r.counts)])


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--csv", action="store_true", help="comma-separated table output")
    common.add_argument("--max-cells", type=int, default=pnd.DEFAULT_MAX_CELLS, help="cap on |A|^d for materialised stages")
    common.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")
    common.add_argument("--seed", type=int, default=0, help="seed for randomised steps")

    parser = argparse.ArgumentParser(prog="apgraph", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(func=fn)
        return p

    p = add("gen", cmd_gen, "generate an instance from a JSON spec")
    p.add_argument("--spec", required=True, help="JSON instance spec, or @file")
    p.add_argument("--out-set")
    p.add_argument("--out-graph")

    for name, text in (("sumset", "sumset along a graph"), ("diffset", "difference set along a graph")):
        p = add(name, cmd_sumset, text)
        p.add_argument("--set", required=True)
        p.add_argument("--graph", required=True, help="graph file or keyword")

    p = add("aps", cmd_aps, "count k-term progressions")
    p.add_argument("--set", required=True)
    p.add_argument("--k", type=int, default=3)

    p = add("refine", cmd_refine, "drop edges with unpopular differences")
    p.add_argument("--set", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", type=rational, required=True)
    p.add_argument("--alpha", type=optional_rational, default=None, help="rational or 'auto'")
    p.add_argument("--out-graph")

    p = add("triangles", cmd_triangles, "enumerate arrangement triangles")
    p.add_argument("--set", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--arrangement", choices=("ap", "sum"), default="ap")
    p.add_argument("--lines-graph", action="store_true", help="also count triangles of the lines graph")

    p = add("pipeline3", cmd_pipeline3, "3-AP pipeline")
    p.add_argument("--set", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--epsilon", type=rational, required=True)
    p.add_argument("--alpha", type=optional_rational, default=None)

    p = add("pattern", cmd_pattern, "simplex, grid, facet normals, shorter-grid witnesses")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kind", choices=("simplex", "grid", "normals", "shift"), default="simplex")

    p = add("copies", cmd_copies, "homothetic copies of S_d or T_d in A^d")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--pattern", choices=("simplex", "grid"), default="grid")
    p.add_argument("--ratios", choices=(pnd.POSITIVE, pnd.NONZERO), default=pnd.POSITIVE)
    p.add_argument("--threshold", type=int, help="also report holders of at least this many copies")

    p = add("pipelined", cmd_pipelined, "general (d+1)-AP pipeline")
    p.add_argument("--set", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--alpha", type=optional_rational, default=None)
    p.add_argument("--beta", type=optional_rational, default=None)
    p.add_argument("--holder-fraction", type=rational, default=Fraction(1, 2))

    p = add("pluennecke", cmd_pluennecke, "check |kB-lB| against the doubling bound")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--k", type=int)
    p.add_argument("--l", type=int)
    p.add_argument("--battery", type=int, metavar="PAIRS", help="run a seeded battery instead")

    p = add("cover", cmd_cover, "hyperplanes needed to cover A^d")
    p.add_argument("--set", required=True)
    p.add_argument("--v", type=int_vector)
    p.add_argument("--gate", action="store_true", help="run the direct-mode gate")
    p.add_argument("--delta-cap", type=rational, default=Fraction(2))
    p.add_argument("--d", type=int, default=3)

    p = add("scaling", cmd_scaling, "copy-count scaling of a pattern")
    p.add_argument("--pattern", required=True, help="points like '0;1' or '0,0;1,1'")
    p.add_argument("--sizes", type=int_vector, required=True, help="host sides, e.g. 8,16,32")
    p.add_argument("--ratios", choices=(pnd.POSITIVE, pnd.NONZERO), default=pnd.POSITIVE)
    return parser


def main(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    rep = Report(args.command)
    try:
        args.func(args, rep)
    except InputError as exc:
        print(f"apgraph: {exc}", file=stderr)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"apgraph {args.command}: {exc}", file=stderr)
        return 1
    stdout.write(rep.render(args.csv))
    return 0


if __name__ == "__main__":
    sys.exit(main())
