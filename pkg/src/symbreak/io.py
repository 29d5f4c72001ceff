"""JSON and DOT serialization.

Graph JSON: {"n": int, "edges": [[u, v], ...]} with u < v, edges sorted
lexicographically.  Truncation JSON adds "root" and "radius".  Colouring
JSON carries the kind, per-vertex colours as a list, per-edge colours as
[u, v, colour] triples, and the optional reserved colour.
"""

from __future__ import annotations

import json
from typing import Optional, Union

import numpy as np

from .core import EDGE, KINDS, TOTAL, VERTEX, Colouring, Graph, Truncation
from .errors import ColouringError, GraphError

GraphLike = Union[Graph, Truncation]


def graph_to_dict(g: GraphLike) -> dict:
    t = None
    if isinstance(g, Truncation):
        t = g
        g = g.graph
    d = {"n": g.n, "edges": [[u, v] for u, v in g.edge_pairs]}
    if t is not None:
        d["root"] = t.root
        d["radius"] = t.radius
    return d


def graph_from_dict(d: dict) -> GraphLike:
    try:
        n = int(d["n"])
        edges = [(int(u), int(v)) for u, v in d["edges"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise GraphError(f"bad graph JSON: {exc}") from exc
    g = Graph.from_edges(edges, n=n)
    if "root" in d or "radius" in d:
        try:
            root = int(d["root"])
            radius = int(d["radius"])
        except (KeyError, TypeError, ValueError) as exc:
            raise GraphError("truncation JSON needs both root and radius") from exc
        return Truncation(g, root, radius)
    return g


def load_graph(path: str) -> GraphLike:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise GraphError(f"cannot parse graph file {path}: {exc}") from exc
    return graph_from_dict(d)


def dump_graph(g: GraphLike, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g), fh)
        fh.write("\n")


def colouring_to_dict(c: Colouring, g: Graph) -> dict:
    c.validate_for(g)
    d: dict = {"kind": c.kind}
    if c.vcolours is not None:
        d["vertex_colours"] = [int(x) for x in c.vcolours]
    if c.ecolours is not None:
        d["edge_colours"] = [[u, v, int(c.ecolours[eid])]
                             for eid, (u, v) in enumerate(g.edge_pairs)]
    if c.reserved is not None:
        d["reserved"] = int(c.reserved)
    return d


def colouring_from_dict(d: dict, g: Graph) -> Colouring:
    kind = d.get("kind")
    if kind not in KINDS:
        raise ColouringError(f"bad colouring kind {kind!r}")
    vcol = None
    ecol = None
    if kind in (VERTEX, TOTAL):
        raw = d.get("vertex_colours")
        if raw is None or len(raw) != g.n:
            raise ColouringError("vertex_colours must list a colour for every vertex")
        vcol = np.array([int(x) for x in raw])
    if kind in (EDGE, TOTAL):
        raw = d.get("edge_colours")
        if raw is None:
            raise ColouringError("edge_colours missing")
        ecol = np.full(g.m, -1, dtype=np.int64)
        for item in raw:
            u, v, col = int(item[0]), int(item[1]), int(item[2])
            ecol[g.edge_id(u, v)] = col
        if np.any(ecol < 0):
            missing = int(np.flatnonzero(ecol < 0)[0])
            u, v = g.edge_pairs[missing]
            raise ColouringError(f"edge ({u}, {v}) has no colour")
    return Colouring(kind, vcolours=vcol, ecolours=ecol, reserved=d.get("reserved"))


def load_colouring(path: str, g: Graph) -> Colouring:
    try:
        with open(path) as fh:
            d = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ColouringError(f"cannot parse colouring file {path}: {exc}") from exc
    return colouring_from_dict(d, g)


_DOT_SCHEME = "set312"
_DOT_SCHEME_SIZE = 12


def _dot_colour(col: int, reserved: Optional[int], palette: list[int]) -> str:
    if reserved is not None and col == reserved:
        return "black"
    idx = palette.index(col) % _DOT_SCHEME_SIZE + 1
    return f"/{_DOT_SCHEME}/{idx}"


def to_dot(g: GraphLike, colouring: Optional[Colouring] = None, name: str = "g") -> str:
    """Graphviz text; vertex colours as fillcolor, edge colours as color."""
    t = None
    if isinstance(g, Truncation):
        t = g
        g = g.graph
    lines = [f"graph {name} {{"]
    palette: list[int] = []
    if colouring is not None:
        colouring.validate_for(g)
        palette = sorted(colouring.palette)
    for v in range(g.n):
        attrs = []
        if t is not None and v == t.root:
            attrs.append("shape=doublecircle")
        if colouring is not None and colouring.vcolours is not None:
            fill = _dot_colour(int(colouring.vcolours[v]), colouring.reserved, palette)
            attrs.append("style=filled")
            attrs.append(f'fillcolor="{fill}"')
            if fill == "black":
                attrs.append("fontcolor=white")
        lines.append(f"  {v} [{', '.join(attrs)}];" if attrs else f"  {v};")
    for eid, (u, v) in enumerate(g.edge_pairs):
        if colouring is not None and colouring.ecolours is not None:
            col = _dot_colour(int(colouring.ecolours[eid]), colouring.reserved, palette)
            lines.append(f'  {u} -- {v} [color="{col}"];')
        else:
            lines.append(f"  {u} -- {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
