"""Corpus experiments: compare invariants against the conjectured and
proved bounds, one (graph, check) cell at a time.

Cells run under an optional per-cell wall-clock budget; a cell that runs
out of budget or exceeds a search bound reports "skipped" and never fails
the run.  Output rows are deterministic given the config (corpora are
seeded, cells run in config order).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Union

from .core import Graph, Truncation
from .errors import BudgetExceededError, GraphError, SizeBoundError
from .families import parse_family, instantiate
from .invariants import (SearchBounds, distinguishing_value,
                         min_proper_distinguishing_truncation, proper_chromatic)

GraphLike = Union[Graph, Truncation]

CHECK_NAMES = (
    "dprime_le_d_plus1",
    "chiD_le_2delta_minus1",
    "chiD_le_2delta_minus2",
    "chiD_le_delta_plus1_motion",
    "chiprimeD_le_delta_plus1",
    "chiprimeD_le_chiprime_plus1",
    "chi2primeD_le_chi2prime_plus1",
)


@dataclass
class ExperimentConfig:
    corpus: list[str]
    checks: list[str]
    budget_ms: Optional[int] = None
    output: Optional[str] = None
    bounds: SearchBounds = field(default_factory=SearchBounds)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        if not isinstance(d.get("corpus"), list) or not d["corpus"]:
            raise GraphError("experiment config needs a nonempty corpus list")
        checks = d.get("checks")
        if not isinstance(checks, list) or not checks:
            raise GraphError("experiment config needs a nonempty checks list")
        for name in checks:
            if name not in CHECK_NAMES:
                raise GraphError(
                    f"unknown check {name!r}; known: {', '.join(CHECK_NAMES)}")
        budget = d.get("budget_ms")
        if budget is not None:
            budget = int(budget)
        bounds = SearchBounds()
        if "bounds" in d:
            bounds = SearchBounds(**{k: int(v) for k, v in d["bounds"].items()})
        return cls(corpus=list(d["corpus"]), checks=list(checks),
                   budget_ms=budget, output=d.get("output"), bounds=bounds)


class _Cell:
    """Lazy invariant store for one graph, sharing values across checks."""

    def __init__(self, entry: GraphLike, bounds: SearchBounds):
        self.entry = entry
        self.graph = entry.graph if isinstance(entry, Truncation) else entry
        self.bounds = bounds
        self.values: dict[str, int] = {}
        self.certificates: dict = {}
        self.deadline: Optional[float] = None

    def get(self, key: str) -> int:
        if key in self.values:
            return self.values[key]
        g, b, dl = self.graph, self.bounds, self.deadline
        if key == "delta":
            val, cert = g.max_degree, None
        elif key == "D":
            val, cert = distinguishing_value(g, "vertex", False, bounds=b, deadline=dl)
        elif key == "D'":
            val, cert = distinguishing_value(g, "edge", False, bounds=b, deadline=dl)
        elif key == "chi'":
            val, cert = proper_chromatic(g, "edge", bounds=b, deadline=dl)
        elif key == "chi''":
            val, cert = proper_chromatic(g, "total", bounds=b, deadline=dl)
        elif key == "chi_D":
            val, cert = distinguishing_value(g, "vertex", True, bounds=b, deadline=dl)
        elif key == "chi'_D":
            val, cert = distinguishing_value(g, "edge", True, bounds=b, deadline=dl)
        elif key == "chi''_D":
            val, cert = distinguishing_value(g, "total", True, bounds=b, deadline=dl)
        elif key == "chi_D_truncation":
            if not isinstance(self.entry, Truncation):
                raise SizeBoundError("check applies to truncations only")
            import numpy as np

            if not bool(np.all(self.entry.extends_to_boundary())):
                raise SizeBoundError("truncation fails the no-finite-end proxy")
            val, cert = min_proper_distinguishing_truncation(
                self.entry, bounds=self.bounds, deadline=dl)
        else:
            raise GraphError(f"unknown invariant key {key}")
        self.values[key] = val
        if cert is not None:
            self.certificates[key] = cert
        return val


_CHECK_SPECS = {
    "dprime_le_d_plus1": ("D'", lambda c: c.get("D") + 1, "D+1"),
    "chiD_le_2delta_minus1": ("chi_D", lambda c: 2 * c.get("delta") - 1, "2*delta-1"),
    "chiD_le_2delta_minus2": ("chi_D", lambda c: 2 * c.get("delta") - 2, "2*delta-2"),
    "chiD_le_delta_plus1_motion": ("chi_D_truncation", lambda c: c.get("delta") + 1, "delta+1"),
    "chiprimeD_le_delta_plus1": ("chi'_D", lambda c: c.get("delta") + 1, "delta+1"),
    "chiprimeD_le_chiprime_plus1": ("chi'_D", lambda c: c.get("chi'") + 1, "chi'+1"),
    "chi2primeD_le_chi2prime_plus1": ("chi''_D", lambda c: c.get("chi''") + 1, "chi''+1"),
}


def load_corpus_entry(source: str) -> GraphLike:
    if source.startswith("family:"):
        return instantiate(parse_family(source))
    from .io import load_graph

    return load_graph(source)


def run_experiment(config: ExperimentConfig, progress=None
                   ) -> tuple[list[dict], list[dict]]:
    """Evaluate every (corpus entry, check) cell.

    Returns (rows, counterexamples); each row has graph, check, lhs, rhs,
    verdict columns, and each counterexample carries the offending graph
    plus the certificate that witnessed the failing left-hand side.
    """
    rows: list[dict] = []
    failures: list[dict] = []
    for source in config.corpus:
        entry = load_corpus_entry(source)
        cell = _Cell(entry, config.bounds)
        for check in config.checks:
            lhs_key, rhs_fn, rhs_label = _CHECK_SPECS[check]
            if config.budget_ms is not None:
                cell.deadline = time.monotonic() + config.budget_ms / 1000.0
            try:
                lhs = cell.get(lhs_key)
                rhs = rhs_fn(cell)
                verdict = "pass" if lhs <= rhs else "fail"
                row = {"graph": source, "check": check,
                       "lhs": f"{lhs_key}={lhs}", "rhs": f"{rhs_label}={rhs}",
                       "verdict": verdict}
            except (SizeBoundError, BudgetExceededError) as exc:
                row = {"graph": source, "check": check,
                       "lhs": lhs_key, "rhs": rhs_label, "verdict": "skipped",
                       "reason": str(exc)}
            rows.append(row)
            if row["verdict"] == "fail":
                from .io import colouring_to_dict, graph_to_dict

                dump = {"graph_source": source, "check": check,
                        "graph": graph_to_dict(entry),
                        "lhs": row["lhs"], "rhs": row["rhs"]}
                cert = cell.certificates.get(lhs_key)
                if cert is not None:
                    dump["certificate"] = colouring_to_dict(cert, cell.graph)
                failures.append(dump)
            if progress is not None:
                progress(row)
    return rows, failures


def rows_to_csv(rows: list[dict]) -> str:
    lines = ["graph,check,lhs,rhs,verdict"]
    for r in rows:
        lines.append(",".join(str(r[k]).replace(",", ";")
                              for k in ("graph", "check", "lhs", "rhs", "verdict")))
    return "\n".join(lines) + "\n"


def rows_to_markdown(rows: list[dict]) -> str:
    lines = ["| graph | check | lhs | rhs | verdict |",
             "| --- | --- | --- | --- | --- |"]
    for r in rows:
        lines.append("| " + " | ".join(str(r[k]) for k in
                                       ("graph", "check", "lhs", "rhs", "verdict")) + " |")
    return "\n".join(lines) + "\n"


def summary_line(rows: list[dict]) -> str:
    passed = sum(1 for r in rows if r["verdict"] == "pass")
    failed = sum(1 for r in rows if r["verdict"] == "fail")
    skipped = sum(1 for r in rows if r["verdict"] == "skipped")
    return f"cells: {len(rows)} passed: {passed} failed: {failed} skipped: {skipped}"
