"""Constructive symmetry-breaking colourings.

Every construction certifies its output (properness where claimed,
distinguishing via the automorphism search, boundary_pointwise mode for
truncations) before returning; a construction that cannot certify raises
CertificationError rather than handing back an unverified colouring.
Arbitrary choices are pinned to least ids / least colours so outputs are
byte-stable.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .automorphisms import is_distinguishing, truncation_distinguishing
from .core import (EDGE, TOTAL, VERTEX, Colouring, Graph, Truncation,
                   bfs_order, is_proper, ray_origins)
from .errors import CertificationError, ConstructionError

GraphLike = Union[Graph, Truncation]


def _unwrap(g: GraphLike) -> tuple[Graph, Optional[Truncation]]:
    if isinstance(g, Truncation):
        return g.graph, g
    return g, None


def _certify(g: GraphLike, colouring: Colouring, proper: bool = True,
             label: str = "construction") -> None:
    graph, trunc = _unwrap(g)
    if proper and not is_proper(graph, colouring):
        raise CertificationError(f"{label}: output colouring is not proper")
    if trunc is not None:
        ok, witness = truncation_distinguishing(trunc, colouring)
    else:
        ok, witness = is_distinguishing(graph, colouring)
    if not ok:
        raise CertificationError(
            f"{label}: output not distinguishing; witness image {list(witness)}")


def _root_ray(t: Truncation) -> list[int]:
    """Lexicographically least depth-increasing root-to-boundary path."""
    flags = t.extends_to_boundary()
    depth = t.depth
    path = [t.root]
    v = t.root
    while depth[v] < t.radius:
        nxt = None
        for w in t.graph.neighbours(v):
            w = int(w)
            if depth[w] == depth[v] + 1 and flags[w]:
                nxt = w
                break
        if nxt is None:
            raise ConstructionError("root does not extend to the boundary")
        path.append(nxt)
        v = nxt
    return path


def _is_balanced_complete_bipartite(g: Graph) -> bool:
    if g.n % 2 or g.m != (g.n // 2) ** 2:
        return False
    side = g.bfs_depths(0) % 2
    ptr, idx = g.csr
    rows = np.repeat(np.arange(g.n, dtype=np.int32), np.diff(ptr))
    if np.any(side[rows] == side[idx]):
        return False
    return int(np.sum(side == 0)) == g.n // 2


def _is_cycle(g: Graph, length: Optional[int] = None) -> bool:
    if g.m != g.n or g.max_degree != 2 or not g.is_connected():
        return False
    return length is None or g.n == length


# ---------------------------------------------------------------------------
# Edge colouring from a distinguishing vertex colouring
# ---------------------------------------------------------------------------


def _tree_centre(g: Graph) -> list[int]:
    """Peel leaves layer by layer; the last one or two vertices survive."""
    degree = [g.degree(v) for v in range(g.n)]
    alive = g.n
    removed = [False] * g.n
    layer = [v for v in range(g.n) if degree[v] <= 1]
    while alive > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            alive -= 1
            for w in g.neighbours(v):
                w = int(w)
                if not removed[w]:
                    degree[w] -= 1
                    if degree[w] == 1:
                        nxt.append(w)
        layer = sorted(set(nxt))
    return sorted(v for v in range(g.n) if not removed[v])


def _shortest_cycle(g: Graph) -> list[int]:
    """BFS-found shortest cycle with the lexicographically least vertex set,
    returned as a vertex sequence."""
    best: Optional[tuple[int, tuple[int, ...], list[int]]] = None
    for r in range(g.n):
        depth = g.bfs_depths(r)
        parent = {r: -1}
        order = [r]
        qi = 0
        while qi < len(order):
            u = order[qi]
            qi += 1
            for w in g.neighbours(u):
                w = int(w)
                if w not in parent and depth[w] == depth[u] + 1:
                    parent[w] = u
                    order.append(w)
        seen_edges = set()
        for u in order:
            for w in g.neighbours(u):
                w = int(w)
                if parent.get(w) == u or parent.get(u) == w:
                    continue
                key = (u, w) if u < w else (w, u)
                if key in seen_edges:
                    continue
                seen_edges.add(key)
                pu, pw = [], []
                a = u
                while a != -1:
                    pu.append(a)
                    a = parent[a]
                a = w
                while a != -1:
                    pw.append(a)
                    a = parent[a]
                if pu[-1] != r or pw[-1] != r:
                    continue
                set_u, set_w = set(pu), set(pw)
                if set_u & set_w != {r}:
                    continue
                cycle = pu + pw[::-1][1:]
                if len(cycle) < 3:
                    continue
                cand = (len(cycle), tuple(sorted(cycle)), cycle)
                if best is None or cand[:2] < best[:2]:
                    best = cand
    if best is None:
        raise ConstructionError("graph has no cycle")
    return best[2]


def edge_from_vertex_colouring(g: GraphLike, vc: Colouring) -> Colouring:
    """Turn a distinguishing vertex colouring into a distinguishing edge
    colouring using at most one extra colour.

    Finite trees use their centre (vertex or edge); tree truncations paint
    a root ray with the extra colour; anything with a cycle stabilises a
    shortest cycle and propagates vertex colours outward by distance.
    """
    graph, trunc = _unwrap(g)
    graph.connected_or_raise()
    if vc.kind != VERTEX:
        raise ConstructionError("input colouring must be vertex-kind")
    vc.validate_for(graph)
    if trunc is not None:
        ok, _ = truncation_distinguishing(trunc, vc)
    else:
        ok, _ = is_distinguishing(graph, vc)
    if not ok:
        raise ConstructionError("input vertex colouring is not distinguishing")
    if graph.m == 0:
        raise ConstructionError("graph has no edges to colour")

    vcol = [int(x) for x in vc.vcolours]
    palette = sorted(set(vcol))
    pairs = graph.edge_pairs
    ecol = [0] * graph.m

    if graph.is_tree() and trunc is None:
        centre = _tree_centre(graph)
        if len(centre) == 1:
            v0 = centre[0]
            depth = graph.bfs_depths(v0)
            for eid, (u, v) in enumerate(pairs):
                far = u if depth[u] > depth[v] else v
                ecol[eid] = vcol[far]
            out = Colouring(EDGE, ecolours=ecol)
        else:
            a1, a2 = centre
            d1, d2 = graph.bfs_depths(a1), graph.bfs_depths(a2)
            dist_e = np.minimum(d1, d2)
            e0 = graph.edge_id(a1, a2)
            for eid, (u, v) in enumerate(pairs):
                if eid == e0:
                    ecol[eid] = palette[0]
                    continue
                far = u if dist_e[u] > dist_e[v] else v
                ecol[eid] = vcol[far]
            out = Colouring(EDGE, ecolours=ecol)
            ok, witness = is_distinguishing(graph, out)
            if not ok:
                extra = max(palette) + 1
                moved = next(eid for eid, (u, v) in enumerate(pairs)
                             if eid != e0 and graph.edge_id(witness[u], witness[v]) != eid)
                ecol[moved] = extra
                out = Colouring(EDGE, ecolours=ecol, reserved=extra)
    elif graph.is_tree():
        extra = max(palette) + 1
        ray = _root_ray(trunc)
        ray_edges = {graph.edge_id(a, b) for a, b in zip(ray, ray[1:])}
        depth = trunc.depth
        for eid, (u, v) in enumerate(pairs):
            if eid in ray_edges:
                ecol[eid] = extra
            else:
                far = u if depth[u] > depth[v] else v
                ecol[eid] = vcol[far]
        out = Colouring(EDGE, ecolours=ecol, reserved=extra)
    else:
        if len(palette) == 1:
            out = Colouring(EDGE, ecolours=[palette[0]] * graph.m)
        else:
            cycle = _shortest_cycle(graph)
            start = cycle.index(min(cycle))
            cycle = cycle[start:] + cycle[:start]
            if cycle[-1] < cycle[1]:
                cycle = [cycle[0]] + cycle[1:][::-1]
            zero = max(palette) + 1
            cyc_edges = [graph.edge_id(a, b)
                         for a, b in zip(cycle, cycle[1:] + cycle[:1])]
            dist = np.full(graph.n, -1, dtype=np.int64)
            dq = deque(cycle)
            for v in cycle:
                dist[v] = 0
            while dq:
                u = dq.popleft()
                for w in graph.neighbours(u):
                    w = int(w)
                    if dist[w] < 0:
                        dist[w] = dist[u] + 1
                        dq.append(w)
            for eid, (u, v) in enumerate(pairs):
                if dist[u] == dist[v]:
                    ecol[eid] = palette[0]
                else:
                    far = u if dist[u] > dist[v] else v
                    ecol[eid] = vcol[far]
            for eid in cyc_edges:
                ecol[eid] = zero
            ecol[cyc_edges[0]] = palette[0]
            ecol[cyc_edges[1]] = palette[1]
            out = Colouring(EDGE, ecolours=ecol, reserved=zero)

    if out.colour_count() > len(palette) + 1:
        raise CertificationError("edge colouring exceeded the palette-plus-one budget")
    _certify(g, out, proper=False, label="edge_from_vertex_colouring")
    return out


# ---------------------------------------------------------------------------
# Proper distinguishing colouring within twice-the-degree-minus-one colours
# ---------------------------------------------------------------------------


def _path_vertex_sequence(g: Graph) -> list[int]:
    ends = [v for v in range(g.n) if g.degree(v) == 1]
    if g.n == 1:
        return [0]
    v = min(ends)
    seq = [v]
    prev = -1
    while len(seq) < g.n:
        nxt = [int(w) for w in g.neighbours(v) if w != prev]
        prev, v = v, nxt[0]
        seq.append(v)
    return seq


def _cycle_vertex_sequence(g: Graph) -> list[int]:
    v0 = 0
    nbrs = sorted(int(w) for w in g.neighbours(v0))
    seq = [v0, nbrs[0]]
    while len(seq) < g.n:
        prev, v = seq[-2], seq[-1]
        nxt = [int(w) for w in g.neighbours(v) if w != prev]
        seq.append(nxt[0])
    return seq


def _low_degree_colouring(graph: Graph, trunc: Optional[Truncation]) -> Colouring:
    """Direct colourings for max degree <= 2: paths, cycles, and the
    path-shaped truncations of the one- and two-way infinite paths."""
    n = graph.n
    colours = [0] * n
    if trunc is not None:
        if graph.max_degree > 2 or not graph.is_tree():
            raise ConstructionError("degree-2 truncation must be a path")
        depth = trunc.depth
        if graph.degree(trunc.root) <= 1:
            for v in range(n):
                colours[v] = 1 + int(depth[v]) % 2
        else:
            arms = sorted(int(w) for w in graph.neighbours(trunc.root))
            colours[trunc.root] = 3
            for arm_first, base in ((arms[0], 1), (arms[1], 2)):
                v, prev = arm_first, trunc.root
                while True:
                    colours[v] = 1 + (base + int(depth[v])) % 2
                    step = [int(w) for w in graph.neighbours(v) if w != prev]
                    if not step:
                        break
                    prev, v = v, step[0]
        return Colouring(VERTEX, vcolours=colours)
    if graph.is_tree():
        seq = _path_vertex_sequence(graph)
        for i, v in enumerate(seq):
            colours[v] = 1 + i % 2
        if n % 2 and n >= 3:
            colours[seq[-1]] = 3
        return Colouring(VERTEX, vcolours=colours)
    # cycle, excluding the forbidden lengths checked by the caller
    seq = _cycle_vertex_sequence(graph)
    if n % 2:
        for i, v in enumerate(seq):
            colours[v] = 1 + i % 2
        colours[seq[-1]] = 3
    else:
        for i, v in enumerate(seq[4:], start=4):
            colours[v] = 1 + i % 2
        colours[seq[0]] = 3
        colours[seq[1]] = 1
        colours[seq[2]] = 2
        colours[seq[3]] = 3
    return Colouring(VERTEX, vcolours=colours)


def proper_dist_2d1(g: GraphLike) -> Colouring:
    """Proper distinguishing vertex colouring with at most 2*max_degree - 1
    colours: greedy over a BFS tree from a max-degree root, then a repair
    loop demoting every other vertex that copies the root's hazard pattern
    (colour 2*max_degree-1 over a full rainbow neighbourhood).

    Finite inputs must not be a balanced complete bipartite graph or the
    6-cycle; those are the known finite graphs needing 2*max_degree colours.
    """
    graph, trunc = _unwrap(g)
    graph.connected_or_raise()
    delta = graph.max_degree
    if trunc is None:
        if _is_balanced_complete_bipartite(graph):
            half = graph.n // 2
            raise ConstructionError(
                f"input is the balanced complete bipartite graph on {half}+{half} "
                "vertices; it needs 2*max_degree colours and is excluded")
        if _is_cycle(graph, 6):
            raise ConstructionError(
                "input is the 6-cycle; it needs 4 colours and is excluded")
    if delta <= 2:
        out = _low_degree_colouring(graph, trunc)
        _certify(g, out, label="proper_dist_2d1")
        return out

    top = 2 * delta - 1
    root = min(v for v in range(graph.n) if graph.degree(v) == delta)
    order, parent = bfs_order(graph, root)
    pos = {v: i for i, v in enumerate(order)}
    children: dict[int, list[int]] = {}
    for v, p in parent.items():
        if p >= 0:
            children.setdefault(p, []).append(v)
    colour = [0] * graph.n
    colour[root] = top
    root_kids = sorted(children.get(root, []))
    for i, w in enumerate(root_kids, start=1):
        colour[w] = i
    for w in order:
        if colour[w]:
            continue
        forbidden = {colour[int(x)] for x in graph.neighbours(w) if colour[int(x)]}
        forbidden.update(colour[s] for s in children.get(parent[w], []) if colour[s])
        c = next(c for c in range(1, top + 1) if c not in forbidden)
        colour[w] = c

    def has_hazard(u: int) -> bool:
        if u == root or colour[u] != top or graph.degree(u) != delta:
            return False
        return {colour[int(x)] for x in graph.neighbours(u)} == set(range(1, delta + 1))

    for _ in range(4 * graph.n + 16):
        bad = [u for u in order if has_hazard(u)]
        if not bad:
            break
        x = bad[0]
        nbrs = sorted(graph.neighbours(x), key=lambda y: colour[int(y)])
        by_colour = {colour[int(y)]: int(y) for y in nbrs}
        sibs = [s for s in children.get(parent[x], [])
                if s != x and delta + 1 <= colour[s] <= 2 * delta - 2]
        moved = False
        for s in sorted(sibs, key=lambda s: pos[s]):
            if (set(int(w) for w in graph.neighbours(s))
                    != set(int(w) for w in graph.neighbours(x))
                    and not graph.has_edge(s, x)):
                colour[x] = colour[s]
                moved = True
                break
        if moved:
            continue
        for s in range(1, delta + 1):
            ys = by_colour[s]
            family = [q for q in children.get(parent[ys], []) if q != ys]
            if parent[ys] >= 0:
                family.append(parent[ys])
            if any(colour[q] == top for q in family):
                continue
            if any(colour[int(w)] == top for w in graph.neighbours(ys)):
                continue
            colour[ys] = top
            colour[x] = s
            moved = True
            break
        if moved:
            continue
        for s in range(1, delta + 1):
            ys = by_colour[s]
            if parent[ys] == root:
                continue
            sib_cols = {colour[q] for q in children.get(parent[ys], []) if q != ys}
            if parent[ys] >= 0:
                sib_cols.add(colour[parent[ys]])
            nbr_cols = {colour[int(w)] for w in graph.neighbours(ys) if int(w) != x}
            pick = next((i for i in range(1, delta + 1)
                         if i != s and i not in sib_cols and i not in nbr_cols), None)
            if pick is None:
                continue
            colour[ys] = pick
            colour[x] = s
            moved = True
            break
        if not moved:
            raise ConstructionError("hazard repair found no applicable case")
    else:
        raise ConstructionError("hazard repair loop did not terminate")

    out = Colouring(VERTEX, vcolours=colour)
    if out.colour_count() > top:
        raise CertificationError("colour budget 2*max_degree-1 exceeded")
    _certify(g, out, label="proper_dist_2d1")
    return out


# ---------------------------------------------------------------------------
# Trees: max_degree + 1 greedy
# ---------------------------------------------------------------------------


def tree_dplus1(g: GraphLike) -> Colouring:
    """Proper distinguishing colouring of a tree with max_degree + 1
    colours: the root takes the spare top colour, every other vertex the
    least colour avoiding its parent and its already-coloured siblings."""
    graph, trunc = _unwrap(g)
    if not graph.is_tree():
        raise ConstructionError("input has a cycle; tree construction refused")
    delta = graph.max_degree
    root = trunc.root if trunc is not None else min(
        v for v in range(graph.n) if graph.degree(v) == delta)
    order, parent = bfs_order(graph, root)
    children: dict[int, list[int]] = {}
    for v, p in parent.items():
        if p >= 0:
            children.setdefault(p, []).append(v)
    colour = [0] * graph.n
    colour[root] = delta + 1
    for w in order[1:]:
        forbidden = {colour[parent[w]]}
        forbidden.update(colour[s] for s in children.get(parent[w], []) if colour[s])
        colour[w] = next(c for c in range(1, delta + 2) if c not in forbidden)
    out = Colouring(VERTEX, vcolours=colour)
    if out.colour_count() > delta + 1:
        raise CertificationError("colour budget max_degree+1 exceeded")
    _certify(g, out, label="tree_dplus1")
    return out


# ---------------------------------------------------------------------------
# Trees with the no-finite-end proxy: 3 colours and a red schedule
# ---------------------------------------------------------------------------


@dataclass
class RedSchedule:
    """Audit record: stage start levels, red vertex per level, ray-origin
    counts per stage start, and any placement shifts."""

    levels: list[int] = field(default_factory=list)
    reds: dict[int, int] = field(default_factory=dict)
    origin_counts: dict[int, int] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "stage_levels": list(self.levels),
            "reds_by_level": {str(k): v for k, v in sorted(self.reds.items())},
            "ray_origin_counts": {str(k): v for k, v in sorted(self.origin_counts.items())},
            "notes": list(self.notes),
        }


def _simple_ray_from(t: Truncation, u: int, target_depth: int) -> list[int]:
    """Depth-increasing walk from u, least extending child each step."""
    flags = t.extends_to_boundary()
    depth = t.depth
    path = [u]
    v = u
    while depth[v] < target_depth:
        nxt = None
        for w in t.graph.neighbours(v):
            w = int(w)
            if depth[w] == depth[v] + 1 and flags[w]:
                nxt = w
                break
        if nxt is None:
            raise ConstructionError(f"vertex {u} does not extend to depth {target_depth}")
        path.append(nxt)
        v = nxt
    return path


def _infinite_motion_proxy_ok(t: Truncation) -> bool:
    """Every vertex sits on a root-to-boundary path and no interior leaf."""
    return bool(np.all(t.extends_to_boundary()))


def tree_infmotion_3(t: Truncation) -> tuple[Colouring, RedSchedule]:
    """Proper distinguishing 3-colouring of a tree truncation whose every
    vertex extends to the boundary: black/white by depth parity, red on
    the root and the whole second sphere, then one red per level along
    rays from each stage's ray origins (no red at stage-start levels)."""
    graph = t.graph
    if not graph.is_tree():
        raise ConstructionError("input is not a tree")
    if graph.degree(t.root) < 3:
        raise ConstructionError(f"root degree {graph.degree(t.root)} < 3")
    if not _infinite_motion_proxy_ok(t):
        raise ConstructionError("truncation fails the no-finite-end proxy "
                                "(some vertex misses every root-to-boundary path)")
    if t.radius < 4:
        raise ConstructionError("radius too small to start the schedule (need > 3)")
    c3 = ray_origins(t, 3)[0]
    if t.radius <= 3 + len(c3):
        raise ConstructionError(
            f"radius {t.radius} too small to complete one schedule stage "
            f"(needs > {3 + len(c3)})")

    red = 3
    colour = np.asarray(1 + (t.depth % 2), dtype=np.int8)
    colour[t.root] = red
    sched = RedSchedule()
    for v in np.flatnonzero(t.depth == 2):
        colour[v] = red

    k = 3
    while k < t.radius:
        origins = ray_origins(t, k)[0]
        sched.levels.append(k)
        sched.origin_counts[k] = len(origins)
        for j, u in enumerate(origins):
            level = k + 1 + j
            if level > t.radius:
                break
            ray = _simple_ray_from(t, u, level)
            spot = ray[-1]
            if any(colour[int(w)] == red for w in graph.neighbours(spot)):
                alt = _simple_ray_from(t, u, level + 1)[-1] if level < t.radius else spot
                sched.notes.append(f"level {level}: shifted red from {spot} to {alt}")
                spot = alt
            colour[spot] = red
            sched.reds[level] = int(spot)
        k = k + len(origins) + 1
        if k >= t.radius:
            break

    out = Colouring(VERTEX, vcolours=colour, reserved=red)
    if out.palette != frozenset({1, 2, 3}):
        raise CertificationError(f"expected exactly 3 colours, got {sorted(out.palette)}")
    _certify(t, out, label="tree_infmotion_3")
    return out, sched


# ---------------------------------------------------------------------------
# Trees: max_degree colours after shaving pendant subtrees
# ---------------------------------------------------------------------------


def _ray_rule_colouring(t: Truncation) -> np.ndarray:
    """3-colour rule for path-shaped cores: root gets 3; a root at the path
    end alternates 1,2 outward, an interior root gets opposing alternations
    on its two arms."""
    graph = t.graph
    colours = np.zeros(graph.n, dtype=np.int16)
    colours[t.root] = 3
    arms = sorted(int(w) for w in graph.neighbours(t.root))
    bases = (1, 2)
    for arm_first, base in zip(arms, bases):
        v, prev = arm_first, t.root
        while True:
            colours[v] = 1 + (base + int(t.depth[v])) % 2
            step = [int(w) for w in graph.neighbours(v) if w != prev]
            if not step:
                break
            prev, v = v, step[0]
    return colours


def tree_delta(t: Truncation) -> Colouring:
    """Proper distinguishing colouring of a tree truncation with exactly
    max_degree colours available: colour the core (vertices with boundary
    descendants) with the 3-colour machinery, then extend into each finite
    pendant subtree giving pendant siblings pairwise distinct colours."""
    graph = t.graph
    if not graph.is_tree():
        raise ConstructionError("input is not a tree")
    delta = graph.max_degree
    if delta < 3:
        raise ConstructionError("needs max degree >= 3")
    extends = t.extends_to_boundary()
    core = sorted(int(v) for v in np.flatnonzero(extends))
    remap = {v: i for i, v in enumerate(core)}
    core_edges = [(remap[u], remap[v]) for u, v in graph.edge_pairs
                  if extends[u] and extends[v]]
    core_graph = Graph.from_edges(core_edges, n=len(core))
    core_t = Truncation(core_graph, remap[t.root], t.radius,
                        depth=t.depth[core], validate=False)

    core_root_degree = core_graph.degree(core_t.root)
    if core_root_degree >= 3:
        core_col, _ = tree_infmotion_3(core_t)
        core_colours = np.asarray(core_col.vcolours, dtype=np.int16)
    elif core_graph.max_degree <= 2:
        core_colours = _ray_rule_colouring(core_t)
    else:
        raise ConstructionError(
            "core is neither rooted at a branching vertex nor a path; "
            "re-root the truncation at a vertex of degree >= 3")

    colour = np.zeros(graph.n, dtype=np.int16)
    for v, i in remap.items():
        colour[v] = core_colours[i]

    order, parent = bfs_order(graph, t.root)
    pend_children: dict[int, list[int]] = {}
    for w in order:
        p = parent[w]
        if p >= 0 and not extends[w]:
            pend_children.setdefault(p, []).append(w)
    for w in order:
        if extends[w]:
            continue
        taken = {int(colour[parent[w]])}
        taken.update(int(colour[s]) for s in pend_children.get(parent[w], [])
                     if s != w and colour[s])
        colour[w] = next(c for c in range(1, delta + 1) if c not in taken)

    out = Colouring(VERTEX, vcolours=colour)
    if out.colour_count() > delta:
        raise CertificationError("colour budget max_degree exceeded")
    _certify(t, out, label="tree_delta")
    return out


# ---------------------------------------------------------------------------
# Subcubic truncations: 4 colours with black anchors
# ---------------------------------------------------------------------------


@dataclass
class StageRecord:
    radius: int
    anchors: list[tuple[int, int]]  # (vertex, depth), deepest first
    pi: int
    origin_count: int
    covered: int
    coverage_complete: bool
    retries: int

    @property
    def depths(self) -> list[int]:
        return [d for _, d in self.anchors]

    def to_dict(self) -> dict:
        return {
            "radius": self.radius,
            "anchors": [[v, d] for v, d in self.anchors],
            "anchor_depths": self.depths,
            "pi": self.pi,
            "ray_origin_count": self.origin_count,
            "covered_origins": self.covered,
            "coverage_complete": self.coverage_complete,
            "retries": self.retries,
        }


@dataclass
class SubcubicPlan:
    black: int
    radius_sequence: list[int] = field(default_factory=list)
    stages: list[StageRecord] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "black_colour": self.black,
            "radius_sequence": list(self.radius_sequence),
            "stages": [s.to_dict() for s in self.stages],
        }


BLACK = 4


def _descend_to_depth(t: Truncation, u: int, target: int) -> int:
    return _simple_ray_from(t, u, target)[-1]


def _up_cone_origins(t: Truncation, x: int, base_depth: int,
                     origin_set: set[int]) -> set[int]:
    """Ray origins at base_depth reachable from x by strictly rootward walks."""
    depth = t.depth
    frontier = {x}
    d = int(depth[x])
    while d > base_depth:
        nxt = set()
        for v in frontier:
            for w in t.graph.neighbours(v):
                w = int(w)
                if depth[w] == d - 1:
                    nxt.add(w)
        frontier = nxt
        d -= 1
    return frontier & origin_set


def _proper_small_colour(graph: Graph, colour, vertices: list[int],
                         allowed: tuple[int, ...]) -> bool:
    """Backtracking proper colouring of `vertices` from `allowed`,
    respecting colours already placed around them.  Ascending vertex
    order, least colour first."""
    vertices = sorted(vertices)

    def rec(i: int) -> bool:
        if i == len(vertices):
            return True
        v = vertices[i]
        used = {int(colour[int(w)]) for w in graph.neighbours(v) if colour[int(w)]}
        for c in allowed:
            if c in used:
                continue
            colour[v] = c
            if rec(i + 1):
                return True
        colour[v] = 0
        return False

    return rec(0)


def _standard_colour_batch(graph: Graph, colour, batch: list[int]) -> None:
    """Give the vertices of `batch` pairwise distinct colours, each proper
    against its already-coloured neighbours, black only when forced."""
    used_batch: set[int] = set()
    for v in sorted(batch):
        taken = {int(colour[int(w)]) for w in graph.neighbours(v) if colour[int(w)]}
        taken |= used_batch
        pick = next((c for c in (1, 2, 3) if c not in taken), None)
        if pick is None:
            if BLACK in taken:
                raise ConstructionError(f"no colour available for vertex {v}")
            pick = BLACK
        colour[v] = pick
        used_batch.add(pick)


def _tree_parents(t: Truncation) -> np.ndarray:
    g = t.graph
    ptr, idx = g.csr
    rows = np.repeat(np.arange(g.n, dtype=np.int32), np.diff(ptr))
    parent = np.full(g.n, -1, dtype=np.int32)
    mask = t.depth[idx] == t.depth[rows] - 1
    parent[rows[mask]] = idx[mask]
    return parent


_LUT3 = np.array([next((c for c in (1, 2, 3) if not m & (1 << c)), 0)
                  for m in range(32)], dtype=np.int8)
_LUT4 = np.array([next((c for c in (1, 2, 3, 4) if not m & (1 << c)), 0)
                  for m in range(32)], dtype=np.int8)


def _tree_fill(t: Truncation, colour: np.ndarray, parent: np.ndarray,
               lut: np.ndarray, only_level: Optional[int] = None) -> None:
    """Vectorized least-colour fill for tree truncations: conflicts are the
    parent plus any already-coloured children."""
    levels = ([only_level] if only_level is not None
              else range(int(t.depth[t.root]), t.radius + 1))
    depth = t.depth
    for d in levels:
        cand = np.flatnonzero((depth == d) & (colour == 0))
        if not len(cand):
            continue
        forb = np.zeros(t.graph.n, dtype=np.int8)
        kids = np.flatnonzero((depth == d + 1) & (colour > 0)) if d < t.radius else []
        if len(kids):
            np.bitwise_or.at(forb, parent[kids], np.left_shift(1, colour[kids]).astype(np.int8))
        mask = forb[cand]
        par = parent[cand]
        has_par = par >= 0
        mask[has_par] |= np.left_shift(1, colour[par[has_par]]).astype(np.int8)
        picks = lut[mask]
        if np.any(picks == 0):
            v = int(cand[int(np.flatnonzero(picks == 0)[0])])
            raise ConstructionError(f"no colour available for vertex {v}")
        colour[cand] = picks


def subcubic_infmotion_4(t: Truncation, stage_depth_cap: Optional[int] = None
                         ) -> tuple[Colouring, SubcubicPlan]:
    """Proper distinguishing 4-colouring of a subcubic truncation with no
    finite ends, black playing the anchor role: the root is black and
    isolated from all other blacks by distance >= 5; each stage pins the
    sphere at its working radius through a strict chain of deeper black
    anchors, one per sphere, each on a ray through a covered ray origin.

    stage_depth_cap, when given, limits how far beyond its working radius
    a stage may place anchors (depth <= r_k + stage_depth_cap instead of
    the truncation radius); lowering it yields more recorded stages.
    """
    graph = t.graph
    if graph.max_degree > 3:
        raise ConstructionError(f"max degree {graph.max_degree} > 3")
    depth = t.depth
    interior_leaf = np.flatnonzero((np.diff(graph.csr[0]) == 1) & (depth < t.radius))
    if len(interior_leaf):
        raise ConstructionError(
            f"vertex {int(interior_leaf[0])} is a leaf below the boundary; "
            "the no-finite-end proxy fails")
    r1 = 7
    if t.radius < 2 * r1:
        raise ConstructionError(f"radius {t.radius} below one stage (need >= {2 * r1})")

    is_tree = graph.m == graph.n - 1
    colour = np.zeros(graph.n, dtype=np.int8)
    parent = _tree_parents(t) if is_tree else None
    colour[t.root] = BLACK
    zone = [int(v) for v in np.flatnonzero((depth >= 1) & (depth <= 4))]
    if not _proper_small_colour(graph, colour, zone, (1, 2, 3)):
        raise ConstructionError("cannot 3-colour the first four spheres")

    plan = SubcubicPlan(black=BLACK, radius_sequence=[r1])
    extends = t.extends_to_boundary()
    r_k = r1
    while True:
        cap = t.radius if stage_depth_cap is None else min(t.radius, r_k + stage_depth_cap)
        stage = _subcubic_stage(t, r_k, cap, colour, extends, is_tree, parent)
        plan.stages.append(stage)
        r_next = r_k + stage.depths[0] + 3
        plan.radius_sequence.append(r_next)
        if r_next + 2 > t.radius:
            break
        r_k = r_next

    if is_tree:
        _tree_fill(t, colour, parent, _LUT4)
    else:
        for v in range(graph.n):
            if colour[v]:
                continue
            used = {int(colour[int(w)]) for w in graph.neighbours(v) if colour[int(w)]}
            colour[v] = next(c for c in (1, 2, 3, 4) if c not in used)

    _isolated_black_repair(t, colour)
    _verify_black_layout(t, colour)
    out = Colouring(VERTEX, vcolours=colour, reserved=BLACK)
    if not is_proper(graph, out):
        raise CertificationError("subcubic_infmotion_4: output not proper")
    _certify(t, out, proper=False, label="subcubic_infmotion_4")
    return out, plan


def _subcubic_stage(t: Truncation, r_k: int, cap: int, colour: np.ndarray,
                    extends, is_tree: bool, parent) -> StageRecord:
    graph = t.graph
    depth = t.depth
    origins, others = ray_origins(t, r_k)
    origin_set = set(origins)
    floor = r_k + 2
    retries = 0
    while True:
        anchors: list[tuple[int, int]] = []
        cones: dict[tuple[int, int], set[int]] = {}
        covered: set[int] = set()
        next_depth = cap
        for u in origins:
            if u in covered:
                continue
            if next_depth < floor:
                break
            x = _descend_to_depth(t, u, next_depth)
            cone = _up_cone_origins(t, x, r_k, origin_set)
            if not (cone - covered):
                continue
            anchors.append((x, next_depth))
            cones[(x, next_depth)] = cone
            covered |= cone
            next_depth -= 1
        # single-removal minimality: drop anchors whose cone adds nothing
        for a in sorted(anchors, key=lambda p: p[1]):
            rest_cover: set[int] = set()
            for b in anchors:
                if b != a:
                    rest_cover |= cones[b]
            if covered <= rest_cover:
                anchors.remove(a)
        anchors.sort(key=lambda p: -p[1])
        if not anchors:
            raise ConstructionError(
                f"stage at radius {r_k}: no anchor depths available above {floor - 1}")

        pi, pi_sets = _layer_paths(t, r_k, anchors, origins, others)
        if anchors[-1][1] > pi + 1:
            break
        retries += 1
        floor = pi + 2
        if floor > cap:
            raise ConstructionError(
                f"stage at radius {r_k}: required anchor depth {floor} exceeds "
                f"radius; violated inequality: min anchor depth {anchors[-1][1]} "
                f"<= layer-path depth bound {pi + 1}")

    y_sets, pi_layers, leftover = pi_sets
    for x, d in anchors:
        if any(colour[int(w)] == BLACK for w in graph.neighbours(x)):
            raise ConstructionError(f"anchor {x} has a black neighbour already")
        colour[x] = BLACK
        sphere = np.flatnonzero(depth == d)
        todo = [int(v) for v in sphere if colour[v] == 0]
        if is_tree:
            _tree_fill(t, colour, parent, _LUT3, only_level=d)
        else:
            if not _proper_small_colour(graph, colour, todo, (1, 2, 3)):
                _standard_colour_batch(graph, colour, todo)
        chain = y_sets[(x, d)]
        for y in chain:
            downs = [int(w) for w in graph.neighbours(y)
                     if depth[int(w)] == depth[y] - 1 and colour[int(w)] == 0
                     and depth[y] - 1 >= r_k]
            if downs:
                _standard_colour_batch(graph, colour, downs)
    for layer in pi_layers:
        for w in layer:
            ups = [int(z) for z in graph.neighbours(w) if colour[int(z)] == 0]
            if ups:
                _standard_colour_batch(graph, colour, ups)
    if leftover:
        todo = [v for v in leftover if colour[v] == 0]
        if todo and not _proper_small_colour(graph, colour, todo, (1, 2, 3)):
            _standard_colour_batch(graph, colour, todo)

    return StageRecord(radius=r_k, anchors=anchors, pi=pi,
                       origin_count=len(origins), covered=len(covered),
                       coverage_complete=len(covered) == len(origins),
                       retries=retries)


def _layer_paths(t: Truncation, r_k: int, anchors, origins, others):
    """Shortest paths from stranded sphere vertices to the anchor cones,
    never dipping below the working radius; returns the deepest vertex
    those paths touch plus the colouring work lists."""
    graph = t.graph
    depth = t.depth
    y_sets: dict[tuple[int, int], list[int]] = {}
    y_all: set[int] = set()
    for x, d in anchors:
        chain = _down_chain(t, x, r_k)
        y_sets[(x, d)] = chain
        y_all.update(chain)
    pi = r_k
    pi_layers: list[list[int]] = []
    leftover: list[int] = []
    if others:
        dist = {v: 0 for v in y_all}
        par: dict[int, int] = {}
        dq = deque(sorted(y_all))
        while dq:
            u = dq.popleft()
            for w in graph.neighbours(u):
                w = int(w)
                if depth[w] >= r_k and w not in dist:
                    dist[w] = dist[u] + 1
                    par[w] = u
                    dq.append(w)
        reached = [v for v in others if v in dist]
        leftover = [v for v in others if v not in dist]
        pi_vertices: set[int] = set()
        for v in reached:
            u = v
            while u in par:
                pi_vertices.add(u)
                u = par[u]
            pi_vertices.add(u)
        if pi_vertices:
            pi = max(int(depth[u]) for u in pi_vertices)
            by_layer: dict[int, list[int]] = {}
            for u in pi_vertices:
                by_layer.setdefault(dist[u], []).append(u)
            pi_layers = [sorted(by_layer[i]) for i in sorted(by_layer)]
    return pi, (y_sets, pi_layers, leftover)


def _down_chain(t: Truncation, x: int, stop_depth: int) -> list[int]:
    """Vertices on rootward shortest paths from x to the working sphere,
    ordered deepest first (the colouring order)."""
    depth = t.depth
    frontier = {x}
    chain = [x]
    d = int(depth[x])
    while d > stop_depth:
        nxt = set()
        for v in frontier:
            for w in t.graph.neighbours(v):
                w = int(w)
                if depth[w] == d - 1:
                    nxt.add(w)
        frontier = nxt
        d -= 1
        chain.extend(sorted(frontier))
    return chain


def _isolated_black_repair(t: Truncation, colour: np.ndarray) -> None:
    """Give every lonely black vertex (other than the root) a black
    companion two steps rootward."""
    graph = t.graph
    depth = t.depth
    blacks = [int(v) for v in np.flatnonzero(colour == BLACK)]
    for y in blacks:
        if y == t.root:
            continue
        if _black_within(graph, colour, y, 4):
            continue
        placed = False
        for mid in sorted(int(w) for w in graph.neighbours(y) if depth[int(w)] == depth[y] - 1):
            for u in sorted(int(z) for z in graph.neighbours(mid)
                            if depth[int(z)] == depth[y] - 2 and int(z) != y):
                if depth[u] < 5:
                    continue
                if any(colour[int(q)] == BLACK for q in graph.neighbours(u)):
                    continue
                colour[u] = BLACK
                placed = True
                break
            if placed:
                break
        if not placed:
            raise ConstructionError(
                f"black vertex {y} has no companion candidate two steps rootward")


def _black_within(graph: Graph, colour: np.ndarray, y: int, dist: int) -> bool:
    seen = {y}
    frontier = [y]
    for _ in range(dist):
        nxt = []
        for v in frontier:
            for w in graph.neighbours(v):
                w = int(w)
                if w not in seen:
                    if colour[w] == BLACK:
                        return True
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return False


def _verify_black_layout(t: Truncation, colour: np.ndarray) -> None:
    depth = t.depth
    if colour[t.root] != BLACK:
        raise CertificationError("root lost its black colour")
    near = np.flatnonzero((colour == BLACK) & (depth >= 1) & (depth <= 4))
    if len(near):
        raise CertificationError(f"black vertex {int(near[0])} within distance 4 of the root")
    for y in (int(v) for v in np.flatnonzero(colour == BLACK)):
        if y == t.root:
            continue
        if not _black_within(t.graph, colour, y, 4):
            raise CertificationError(f"black vertex {y} is isolated beyond distance 4")


# ---------------------------------------------------------------------------
# Pinning constructions
# ---------------------------------------------------------------------------


def total_dist_pin(g: Graph, tc: Colouring) -> Colouring:
    """Make a proper total colouring distinguishing with at most one fresh
    colour: a pinned vertex propagates, since its incident edges all carry
    distinct colours."""
    if tc.kind != TOTAL:
        raise ConstructionError("input colouring must be total-kind")
    g.connected_or_raise()
    tc.validate_for(g)
    if not is_proper(g, tc):
        raise ConstructionError("input total colouring is not proper")
    ok, _ = is_distinguishing(g, tc)
    if ok:
        return tc
    fresh = max(tc.palette) + 1
    vcol = [int(x) for x in tc.vcolours]
    vcol[0] = fresh
    out = Colouring(TOTAL, vcolours=vcol, ecolours=list(tc.ecolours), reserved=fresh)
    _certify(g, out, label="total_dist_pin")
    return out


def edge_dist_pin_ray(t: Truncation, ec: Colouring) -> Colouring:
    """Make a proper edge colouring of a truncation distinguishing by
    recolouring the first, third, and sixth edges of the geodesic root ray
    with one fresh colour (an aperiodic pattern that pins the ray)."""
    if ec.kind != EDGE:
        raise ConstructionError("input colouring must be edge-kind")
    g = t.graph
    ec.validate_for(g)
    if not is_proper(g, ec):
        raise ConstructionError("input edge colouring is not proper")
    from .core import geodesic_ray

    ray = geodesic_ray(t)
    edges = [g.edge_id(a, b) for a, b in zip(ray, ray[1:])]
    fresh = max(ec.palette) + 1
    ecol = [int(x) for x in ec.ecolours]
    for pos in (0, 2, 5):
        ecol[edges[pos]] = fresh
    out = Colouring(EDGE, ecolours=ecol, reserved=fresh)
    _certify(t, out, label="edge_dist_pin_ray")
    return out
