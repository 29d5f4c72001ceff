"""Command-line front end.

Subcommands: invariants, construct, verify, experiment.  Graph sources
are JSON files or family:<name>(<params>) strings.  Exit codes: 0 on
success, 1 when a requested property check fails, 2 on usage, parse, or
precondition errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Optional

from .automorphisms import is_distinguishing, perm_to_json, truncation_distinguishing
from .constructions import (RedSchedule, edge_dist_pin_ray,
                            edge_from_vertex_colouring, proper_dist_2d1,
                            subcubic_infmotion_4, total_dist_pin, tree_delta,
                            tree_dplus1, tree_infmotion_3)
from .core import Colouring, Graph, Truncation, is_proper
from .errors import (BudgetExceededError, CertificationError, ColouringError,
                     ConstructionError, GraphError, SizeBoundError, SymbreakError)
from .experiments import (ExperimentConfig, load_corpus_entry, run_experiment,
                          rows_to_csv, rows_to_markdown, summary_line)
from .families import FamilySpec, parse_family, instantiate
from .invariants import (SearchBounds, distinguishing_value, full_report,
                         format_report_table, proper_chromatic)
from .io import (colouring_from_dict, colouring_to_dict,
                 load_colouring, load_graph, to_dot)

_RADIUS_SLOT = {"ray": 0, "double_ray": 0, "regular_tree": 1,
                "star_one_ray": 1, "random_tree_min3": 0}
_SEED_SLOT = {"rationals_sample": 1, "random_tree_min3": 1}


def _load_source(source: str, radius: Optional[int] = None, seed: Optional[int] = None):
    if source.startswith("family:"):
        spec = parse_family(source)
        params = list(spec.params)
        for value, slots in ((radius, _RADIUS_SLOT), (seed, _SEED_SLOT)):
            if value is None:
                continue
            if spec.name not in slots:
                raise GraphError(f"family {spec.name} takes no such override")
            slot = slots[spec.name]
            while len(params) <= slot:
                params.append(0)
            params[slot] = value
        return instantiate(FamilySpec(spec.name, tuple(params)))
    if radius is not None or seed is not None:
        raise GraphError("--radius/--seed overrides apply to family sources only")
    return load_graph(source)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _bounds_from_args(args) -> SearchBounds:
    kw = {}
    if getattr(args, "max_vertices", None) is not None:
        kw["vertex_vertices"] = args.max_vertices
        kw["edge_vertices"] = args.max_vertices
        kw["total_vertices"] = args.max_vertices
    if getattr(args, "max_total_edges", None) is not None:
        kw["total_edges"] = args.max_total_edges
    return SearchBounds(**kw)


def cmd_invariants(args) -> int:
    entry = _load_source(args.source, args.radius, args.seed)
    graph = entry.graph if isinstance(entry, Truncation) else entry
    deadline = (time.monotonic() + args.budget_ms / 1000.0
                if args.budget_ms is not None else None)
    report = full_report(graph, graph_id=args.source, bounds=_bounds_from_args(args),
                         deadline=deadline)
    if args.json:
        _emit(json.dumps(report.to_dict(graph if args.certificates else None),
                         indent=2) + "\n", args.out)
    else:
        _emit(format_report_table([report]) + "\n", args.out)
    if report.missing:
        print(f"error: no value for {', '.join(report.missing)} "
              "(search bound exceeded or the invariant does not exist here)",
              file=sys.stderr)
        return 2
    return 0


_ALGORITHMS = ("edgefromvertex", "2d1", "treedplus1", "tree3", "treedelta",
               "subcubic4", "totalpin", "edgepin")
_FULL_OUTPUT_LIMIT = 200_000


def _needs_truncation(name: str) -> bool:
    return name in ("tree3", "treedelta", "subcubic4", "edgepin")


def cmd_construct(args) -> int:
    entry = _load_source(args.source, args.radius, args.seed)
    graph = entry.graph if isinstance(entry, Truncation) else entry
    if args.max_vertices is not None or args.max_total_edges is not None:
        bounds = _bounds_from_args(args)
    else:
        # baseline colourings are sized to the requested input; the
        # distinguishing searches keep their exact defaults
        bounds = SearchBounds(vertex_vertices=max(12, graph.n),
                              edge_vertices=max(10, graph.n),
                              total_vertices=max(10, graph.n),
                              total_edges=max(20, graph.m))
    deadline = (time.monotonic() + args.budget_ms / 1000.0
                if args.budget_ms is not None else None)
    if _needs_truncation(args.algorithm) and not isinstance(entry, Truncation):
        raise ConstructionError(f"{args.algorithm} needs a truncation input "
                                "(a graph with root and radius)")
    aux: Optional[Colouring] = None
    if args.colouring:
        aux = load_colouring(args.colouring, graph)

    audit = None
    if args.algorithm == "edgefromvertex":
        if aux is None:
            aux = distinguishing_value(graph, "vertex", False,
                                       bounds=_bounds_from_args(args),
                                       deadline=deadline)[1]
        result = edge_from_vertex_colouring(entry, aux)
    elif args.algorithm == "2d1":
        result = proper_dist_2d1(entry)
    elif args.algorithm == "treedplus1":
        result = tree_dplus1(entry)
    elif args.algorithm == "tree3":
        result, audit = tree_infmotion_3(entry)
    elif args.algorithm == "treedelta":
        result = tree_delta(entry)
    elif args.algorithm == "subcubic4":
        result, audit = subcubic_infmotion_4(entry, stage_depth_cap=args.stage_depth_cap)
    elif args.algorithm == "totalpin":
        if aux is None:
            aux = proper_chromatic(graph, "total", bounds=bounds, deadline=deadline)[1]
        result = total_dist_pin(graph, aux)
    elif args.algorithm == "edgepin":
        if aux is None:
            aux = proper_chromatic(graph, "edge", bounds=bounds, deadline=deadline)[1]
        result = edge_dist_pin_ray(entry, aux)
    else:
        raise GraphError(f"unknown algorithm {args.algorithm}")

    payload = {"algorithm": args.algorithm, "source": args.source,
               "colours_used": result.colour_count()}
    if graph.n <= _FULL_OUTPUT_LIMIT:
        payload["colouring"] = colouring_to_dict(result, graph)
    else:
        import numpy as np

        sizes = {}
        if result.vcolours is not None:
            vals, counts = np.unique(np.asarray(result.vcolours), return_counts=True)
            sizes = {int(v): int(c) for v, c in zip(vals, counts)}
        payload["colouring"] = {
            "kind": result.kind,
            "vertex_colour_class_sizes": sizes,
            "reserved": result.reserved,
            "note": f"full colour map omitted above {_FULL_OUTPUT_LIMIT} vertices",
        }
    if audit is not None:
        key = "red_schedule" if isinstance(audit, RedSchedule) else "plan"
        payload[key] = audit.to_dict()
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    if args.dot or args.png:
        if graph.n > _FULL_OUTPUT_LIMIT:
            raise GraphError(
                f"graph too large to render ({graph.n} vertices > {_FULL_OUTPUT_LIMIT})")
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(to_dot(entry, result))
        if args.png:
            from .figures import render_colouring

            render_colouring(entry, result, args.png,
                             title=f"{args.algorithm} on {args.source}")
    return 0


def cmd_verify(args) -> int:
    entry = _load_source(args.source, args.radius, args.seed)
    graph = entry.graph if isinstance(entry, Truncation) else entry
    colouring = load_colouring(args.colouring, graph)
    failures = []
    if args.proper and not is_proper(graph, colouring):
        failures.append({"property": "proper"})
    check_dist = args.distinguishing or not args.proper
    if check_dist:
        if isinstance(entry, Truncation):
            mode = ("boundary_setwise" if args.mode == "setwise"
                    else "boundary_pointwise")
            ok, witness = truncation_distinguishing(entry, colouring, mode)
        else:
            ok, witness = is_distinguishing(graph, colouring)
        if not ok:
            failures.append({"property": "distinguishing",
                             "witness": perm_to_json(witness)})
    if failures:
        print("FAIL")
        print(json.dumps({"failures": failures}, indent=2))
        return 1
    print("OK")
    return 0


def cmd_experiment(args) -> int:
    try:
        with open(args.config) as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot parse config {args.config}: {exc}") from exc
    config = ExperimentConfig.from_dict(raw)
    if args.output:
        config.output = args.output
    if args.budget_ms is not None:
        config.budget_ms = args.budget_ms
    rows, failures = run_experiment(config)
    csv_text = rows_to_csv(rows)
    if config.output:
        with open(config.output, "w") as fh:
            fh.write(csv_text)
        stem, _ = os.path.splitext(config.output)
        from .figures import render_experiment_summary

        render_experiment_summary(rows, stem + "_summary.png")
        sys.stdout.write(rows_to_markdown(rows))
    else:
        sys.stdout.write(csv_text)
    print(summary_line(rows))
    dump_dir = args.figures or (os.path.dirname(config.output) if config.output else None)
    for i, dump in enumerate(failures):
        base = dump_dir or "."
        path = os.path.join(base, f"counterexample_{i}_{dump['check']}.json")
        with open(path, "w") as fh:
            json.dump(dump, fh, indent=2)
        print(f"counterexample dumped: {path}")
    if args.figures:
        os.makedirs(args.figures, exist_ok=True)
        from .figures import render_colouring

        for i, dump in enumerate(failures):
            entry = load_corpus_entry(dump["graph_source"])
            graph = entry.graph if isinstance(entry, Truncation) else entry
            cert = dump.get("certificate")
            col = colouring_from_dict(cert, graph) if cert else None
            render_colouring(entry, col, os.path.join(args.figures, f"counterexample_{i}.png"),
                             title=f"{dump['graph_source']} fails {dump['check']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symbreak",
        description="Distinguishing-colouring invariants and constructions for "
                    "small graphs and truncated infinite families.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--radius", type=int, default=None,
                       help="override the radius parameter of a family source")
        p.add_argument("--seed", type=int, default=None,
                       help="override the seed parameter of a family source")
        p.add_argument("--budget-ms", type=int, default=None, dest="budget_ms",
                       help="wall-clock budget per computation")
        p.add_argument("--max-vertices", type=int, default=None,
                       help="raise the exact-search vertex bound")
        p.add_argument("--max-total-edges", type=int, default=None,
                       help="raise the exact-search edge bound for total colourings")
        p.add_argument("--out", default=None, help="write primary output to a file")

    p = sub.add_parser("invariants", help="compute the invariant report of a graph")
    p.add_argument("source", help="graph JSON file or family:<name>(<params>)")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    p.add_argument("--certificates", action="store_true",
                   help="include certificate colourings in JSON output")
    common(p)
    p.set_defaults(fn=cmd_invariants)

    p = sub.add_parser("construct", help="run a colouring construction")
    p.add_argument("algorithm", choices=_ALGORITHMS)
    p.add_argument("source")
    p.add_argument("--colouring", default=None,
                   help="auxiliary colouring JSON (computed when omitted)")
    p.add_argument("--dot", default=None, help="write DOT output here")
    p.add_argument("--png", default=None, help="render a figure here")
    p.add_argument("--stage-depth-cap", type=int, default=None, dest="stage_depth_cap",
                   help="limit anchor depth beyond each stage radius (subcubic4)")
    common(p)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("verify", help="verify colouring properties")
    p.add_argument("source")
    p.add_argument("colouring", help="colouring JSON file")
    p.add_argument("--proper", action="store_true", help="also require properness")
    p.add_argument("--distinguishing", action="store_true",
                   help="require the distinguishing property (default)")
    p.add_argument("--mode", choices=("pointwise", "setwise"), default="pointwise",
                   help="boundary mode for truncation sources")
    common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("experiment", help="run a corpus experiment from a config file")
    p.add_argument("config", help="JSON config: corpus, checks, budget_ms, output")
    p.add_argument("--output", default=None, help="CSV output path")
    p.add_argument("--figures", default=None,
                   help="directory for counterexample figures")
    common(p)
    p.set_defaults(fn=cmd_experiment)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return 1
    except (GraphError, ColouringError, ConstructionError, SizeBoundError,
            BudgetExceededError, SymbreakError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
