"""Exact chromatic and distinguishing invariants for small graphs.

Everything here is exhaustive search: colourings are enumerated in
lexicographic order over canonical representatives (restricted-growth
strings, i.e. the first occurrence of colour j precedes the first
occurrence of colour j+1) and the first success is the certificate.
Distinguishing searches track the subgroup of automorphisms still
consistent with the partial colouring; a branch dies as soon as a live
non-identity automorphism has its whole support already coloured, and
succeeds as soon as the consistent set is empty.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .automorphisms import RIGID, aut_group, close_group, is_distinguishing
from .core import EDGE, TOTAL, VERTEX, Colouring, Graph, Truncation, is_proper
from .errors import BudgetExceededError, GraphError, SizeBoundError


@dataclass(frozen=True)
class SearchBounds:
    """Size limits for the exhaustive searches."""

    vertex_vertices: int = 12
    edge_vertices: int = 10
    total_vertices: int = 10
    total_edges: int = 20
    group_cap: int = 1_000_000

    def check(self, g: Graph, kind: str) -> None:
        if kind == VERTEX and g.n > self.vertex_vertices:
            raise SizeBoundError(f"{g.n} vertices exceeds bound {self.vertex_vertices} for vertex searches")
        if kind == EDGE and g.n > self.edge_vertices:
            raise SizeBoundError(f"{g.n} vertices exceeds bound {self.edge_vertices} for edge searches")
        if kind == TOTAL:
            if g.n > self.total_vertices:
                raise SizeBoundError(f"{g.n} vertices exceeds bound {self.total_vertices} for total searches")
            if g.m > self.total_edges:
                raise SizeBoundError(f"{g.m} edges exceeds bound {self.total_edges} for total searches")


DEFAULT_BOUNDS = SearchBounds()


# -- element systems ---------------------------------------------------------


def _conflicts_below(g: Graph, kind: str) -> list[list[int]]:
    """conflicts_below[i] = elements j < i that must differ from i when proper."""
    n, pairs = g.n, g.edge_pairs if kind in (EDGE, TOTAL) else None
    if kind == VERTEX:
        size = n
    elif kind == EDGE:
        size = g.m
    else:
        size = n + g.m
    out: list[list[int]] = [[] for _ in range(size)]

    def add(a: int, b: int) -> None:
        if a > b:
            a, b = b, a
        out[b].append(a)

    if kind in (VERTEX, TOTAL):
        for u, v in g.edge_pairs:
            add(u, v)
    if kind in (EDGE, TOTAL):
        off = n if kind == TOTAL else 0
        incident: list[list[int]] = [[] for _ in range(n)]
        for eid, (u, v) in enumerate(pairs):
            incident[u].append(eid)
            incident[v].append(eid)
        for eids in incident:
            for i in range(len(eids)):
                for j in range(i + 1, len(eids)):
                    add(off + eids[i], off + eids[j])
        if kind == TOTAL:
            for eid, (u, v) in enumerate(pairs):
                add(u, off + eid)
                add(v, off + eid)
    for lst in out:
        lst.sort()
    return out


def _element_perms(g: Graph, kind: str, vertex_perms: Sequence[Sequence[int]]) -> list[list[int]]:
    """Induce the group action on the colouring's elements; identity dropped.

    Raises when a non-identity automorphism acts trivially on the
    elements (then no colouring of this kind can be distinguishing).
    """
    n = g.n
    ident_v = tuple(range(n))
    out: dict[tuple, None] = {}
    if kind == VERTEX:
        for p in vertex_perms:
            tp = tuple(p)
            if tp != ident_v:
                out.setdefault(tp)
        return [list(p) for p in out]
    pairs = g.edge_pairs
    eid = {pair: i for i, pair in enumerate(pairs)}
    for p in vertex_perms:
        tp = tuple(p)
        if tp == ident_v:
            continue
        ep = [0] * len(pairs)
        for i, (u, v) in enumerate(pairs):
            a, b = p[u], p[v]
            ep[i] = eid[(a, b) if a < b else (b, a)]
        if kind == EDGE:
            if all(i == x for i, x in enumerate(ep)):
                raise GraphError(
                    "an automorphism fixes every edge; no distinguishing edge colouring exists")
            out.setdefault(tuple(ep))
        else:
            out.setdefault(tuple(list(tp) + [n + x for x in ep]))
    return [list(p) for p in out]


# -- the searcher -------------------------------------------------------------


class _Search:
    def __init__(self, size: int, conflicts_below: list[list[int]],
                 element_perms: list[list[int]], proper: bool,
                 deadline: Optional[float] = None):
        self.size = size
        self.conf = conflicts_below
        self.proper = proper
        self.deadline = deadline
        self.perms = element_perms
        self.invs = []
        self.maxsup = []
        for p in element_perms:
            inv = [0] * size
            for i, x in enumerate(p):
                inv[x] = i
            self.invs.append(inv)
            sup = [i for i, x in enumerate(p) if x != i]
            self.maxsup.append(max(sup) if sup else -1)
        self.colour = [0] * size
        self._ticks = 0

    def _tick(self) -> None:
        self._ticks += 1
        if self.deadline is not None and (self._ticks & 1023) == 0:
            if time.monotonic() > self.deadline:
                raise BudgetExceededError("search budget exhausted")

    def _complete_plain(self, pos: int) -> bool:
        for i in range(pos, self.size):
            self.colour[i] = 1
        return True

    def _complete_proper(self, pos: int, k: int) -> bool:
        if pos == self.size:
            return True
        self._tick()
        forbidden = {self.colour[j] for j in self.conf[pos]}
        for c in range(1, k + 1):
            if c in forbidden:
                continue
            self.colour[pos] = c
            if self._complete_proper(pos + 1, k):
                return True
        self.colour[pos] = 0
        return False

    def run(self, k: int) -> Optional[list[int]]:
        """First canonical k-colouring whose consistent set is empty."""
        if self.size == 0:
            return [] if not self.perms else None
        return self._dfs(0, 0, list(range(len(self.perms))), k)

    def _dfs(self, pos: int, used: int, alive: list[int], k: int) -> Optional[list[int]]:
        if not alive:
            ok = self._complete_proper(pos, k) if self.proper else self._complete_plain(pos)
            return list(self.colour) if ok else None
        if pos == self.size:
            return None
        self._tick()
        colour = self.colour
        top = min(used + 1, k)
        for c in range(1, top + 1):
            if self.proper:
                clash = False
                for j in self.conf[pos]:
                    if colour[j] == c:
                        clash = True
                        break
                if clash:
                    continue
            colour[pos] = c
            nxt = []
            sealed = False
            for pi in alive:
                p = self.perms[pi]
                j = p[pos]
                if j <= pos and colour[j] != c:
                    continue
                ji = self.invs[pi][pos]
                if ji <= pos and colour[ji] != c:
                    continue
                if self.maxsup[pi] <= pos:
                    sealed = True
                    break
                nxt.append(pi)
            if sealed:
                continue
            res = self._dfs(pos + 1, max(used, c), nxt, k)
            if res is not None:
                return res
        colour[pos] = 0
        return None


def _make_colouring(g: Graph, kind: str, colours: list[int]) -> Colouring:
    if kind == VERTEX:
        return Colouring(VERTEX, vcolours=colours)
    if kind == EDGE:
        return Colouring(EDGE, ecolours=colours)
    return Colouring(TOTAL, vcolours=colours[: g.n], ecolours=colours[g.n :])


def _chromatic_lower_bound(g: Graph, kind: str) -> int:
    if g.n == 0:
        return 0
    if kind == VERTEX:
        return 1 if g.m == 0 else 2
    delta = g.max_degree
    if kind == EDGE:
        cap = g.n // 2
        return max(delta, -(-g.m // cap) if cap else 1, 1)
    return delta + 1


def proper_chromatic(g: Graph, kind: str, bounds: SearchBounds = DEFAULT_BOUNDS,
                     deadline: Optional[float] = None) -> tuple[int, Colouring]:
    """Minimum colours of a proper colouring of the given kind, with certificate."""
    g.connected_or_raise()
    bounds.check(g, kind)
    size = {VERTEX: g.n, EDGE: g.m, TOTAL: g.n + g.m}[kind]
    conf = _conflicts_below(g, kind)
    k = _chromatic_lower_bound(g, kind)
    while k <= max(size, 1):
        search = _Search(size, conf, [], proper=True, deadline=deadline)
        res = search.run(k)
        if res is not None:
            return k, _make_colouring(g, kind, res)
        k += 1
    raise GraphError("no proper colouring found")  # unreachable: rainbow is proper


def distinguishing_value(g: Graph, kind: str, proper_required: bool,
                         bounds: SearchBounds = DEFAULT_BOUNDS,
                         group_elements: Optional[Sequence[Sequence[int]]] = None,
                         deadline: Optional[float] = None) -> tuple[int, Colouring]:
    """Least k admitting a (proper if required) distinguishing k-colouring.

    group_elements optionally restricts the automorphisms to defeat
    (e.g. the boundary-fixing subgroup of a truncation); it must list
    vertex permutations and defaults to the full automorphism group.
    """
    g.connected_or_raise()
    bounds.check(g, kind)
    if group_elements is None:
        group = aut_group(g)
        group_elements = group.elements(cap=bounds.group_cap)
    eperms = _element_perms(g, kind, group_elements)
    size = {VERTEX: g.n, EDGE: g.m, TOTAL: g.n + g.m}[kind]
    conf = _conflicts_below(g, kind)
    k = _chromatic_lower_bound(g, kind) if proper_required else 1
    if proper_required:
        k = max(k, proper_chromatic(g, kind, bounds=bounds, deadline=deadline)[0])
    while k <= max(size, 1):
        search = _Search(size, conf, eperms, proper=proper_required, deadline=deadline)
        res = search.run(k)
        if res is not None:
            return k, _make_colouring(g, kind, res)
        k += 1
    raise GraphError(f"no distinguishing {kind} colouring exists")


def min_proper_distinguishing_truncation(t: Truncation, mode: str = "boundary_pointwise",
                                         bounds: SearchBounds = DEFAULT_BOUNDS,
                                         deadline: Optional[float] = None) -> tuple[int, Colouring]:
    """Least k admitting a proper vertex k-colouring no boundary-respecting
    automorphism of the truncation preserves (pointwise or setwise mode)."""
    from .automorphisms import _search_generators  # boundary-restricted group

    g = t.graph
    on_boundary = np.zeros(g.n, dtype=bool)
    on_boundary[t.boundary] = True
    if mode == "boundary_pointwise":
        labels = [v + 1 if on_boundary[v] else 0 for v in range(g.n)]
    elif mode == "boundary_setwise":
        labels = [1 if on_boundary[v] else 0 for v in range(g.n)]
    else:
        raise GraphError(f"unknown truncation mode {mode!r}")
    gens = _search_generators(g, labels, None)
    elements = close_group(gens, g.n, cap=bounds.group_cap)
    return distinguishing_value(g, VERTEX, True, bounds=bounds,
                                group_elements=elements, deadline=deadline)


# -- full reports -------------------------------------------------------------

INVARIANT_NAMES = ("D", "D'", "D''", "chi", "chi'", "chi''",
                   "chi_D", "chi'_D", "chi''_D", "motion")

_KIND_OF = {
    "D": (VERTEX, False), "D'": (EDGE, False), "D''": (TOTAL, False),
    "chi": (VERTEX, None), "chi'": (EDGE, None), "chi''": (TOTAL, None),
    "chi_D": (VERTEX, True), "chi'_D": (EDGE, True), "chi''_D": (TOTAL, True),
}


@dataclass
class InvariantReport:
    graph_id: str
    values: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)
    missing: list = field(default_factory=list)

    def value(self, name: str):
        return self.values.get(name)

    def to_dict(self, g: Optional[Graph] = None) -> dict:
        from .io import colouring_to_dict

        vals = {}
        for name in INVARIANT_NAMES:
            v = self.values.get(name)
            vals[name] = "rigid" if v is RIGID else v
        d = {"graph": self.graph_id, "values": vals}
        if self.missing:
            d["missing"] = list(self.missing)
        if g is not None and self.certificates:
            d["certificates"] = {name: colouring_to_dict(c, g)
                                 for name, c in self.certificates.items()}
        return d


def _cross_check(report: InvariantReport) -> None:
    v = report.values

    def le(a: str, b: str) -> None:
        if v.get(a) is not None and v.get(b) is not None:
            if v[a] > v[b]:
                raise GraphError(f"invariant inconsistency: {a}={v[a]} > {b}={v[b]}")

    le("chi", "chi_D")
    le("chi'", "chi'_D")
    le("chi''", "chi''_D")
    le("D", "chi_D")
    le("D'", "chi'_D")
    le("D''", "chi''_D")
    if all(v.get(x) is not None for x in ("D", "D'", "D''")):
        if v["D''"] > max(v["D"], v["D'"]):
            raise GraphError("invariant inconsistency: D'' > max(D, D')")


def full_report(g: Graph, graph_id: str = "graph", bounds: SearchBounds = DEFAULT_BOUNDS,
                deadline: Optional[float] = None, verify_certificates: bool = True) -> InvariantReport:
    """All ten invariants with certificates; bound overruns are flagged
    as missing entries instead of failing the whole report."""
    g.connected_or_raise()
    report = InvariantReport(graph_id)
    for name in INVARIANT_NAMES:
        try:
            if name == "motion":
                from .automorphisms import motion as motion_fn

                report.values[name] = motion_fn(g, cap=bounds.group_cap)
                continue
            kind, dist = _KIND_OF[name]
            if dist is None:
                val, cert = proper_chromatic(g, kind, bounds=bounds, deadline=deadline)
            else:
                val, cert = distinguishing_value(g, kind, dist, bounds=bounds, deadline=deadline)
            report.values[name] = val
            report.certificates[name] = cert
        except (SizeBoundError, BudgetExceededError):
            report.values[name] = None
            report.missing.append(name)
        except GraphError:
            # e.g. no distinguishing edge colouring exists on a single edge
            report.values[name] = None
            report.missing.append(name)
    if verify_certificates:
        for name, cert in report.certificates.items():
            kind, dist = _KIND_OF[name]
            if dist is not None and not is_distinguishing(g, cert)[0]:
                raise GraphError(f"certificate for {name} is not distinguishing")
            if (dist is None or dist) and not is_proper(g, cert):
                raise GraphError(f"certificate for {name} is not proper")
    _cross_check(report)
    return report


def format_report_table(reports: Sequence[InvariantReport]) -> str:
    """Aligned text table: one row per graph, one column per invariant."""
    headers = ["graph"] + list(INVARIANT_NAMES)
    rows = []
    for r in reports:
        row = [r.graph_id]
        for name in INVARIANT_NAMES:
            v = r.values.get(name)
            row.append("rigid" if v is RIGID else ("-" if v is None else str(v)))
        rows.append(row)
    widths = [max(len(h), *(len(row[i]) for row in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths))]
    for row in rows:
        lines.append("  ".join(x.ljust(w) for x, w in zip(row, widths)))
    return "\n".join(lines)
