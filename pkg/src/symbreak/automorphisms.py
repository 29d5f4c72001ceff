"""Automorphism-group machinery.

The search is individualization-refinement backtracking: iterated
equitable partition refinement on (degree into each cell, vertex label,
edge label), branching on the first smallest non-singleton cell.  Leaves
are discrete partitions; pairing each leaf against the first leaf yields
candidate automorphisms, and the discovered generators prune sibling
branches.  Exact group orders come from a Schreier-Sims orbit-stabilizer
chain over the generators.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .core import EDGE, TOTAL, VERTEX, Colouring, Graph, Truncation
from .errors import ColouringError, GraphError, SizeBoundError

Perm = tuple[int, ...]

#: Returned by motion() for graphs whose only automorphism is the identity;
#: the minimum over an empty set of automorphisms is not a number.
RIGID = type("Rigid", (), {"__repr__": lambda self: "RIGID", "__reduce__": lambda self: "RIGID"})()

ELEMENT_CAP = 1_000_000


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(p: Perm, q: Perm) -> Perm:
    """p after q: (p*q)[i] = p[q[i]]."""
    return tuple(p[x] for x in q)


def inverse(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def support(p: Perm) -> list[int]:
    return [i for i, x in enumerate(p) if x != i]


def perm_to_json(p: Perm) -> dict:
    return {"image": list(p)}


def perm_from_json(d: dict) -> Perm:
    img = tuple(int(x) for x in d["image"])
    if sorted(img) != list(range(len(img))):
        raise GraphError("permutation image is not a bijection")
    return img


def is_automorphism(g: Graph, p: Sequence[int]) -> bool:
    """Edge preservation in both directions for a candidate bijection."""
    n = g.n
    if len(p) != n or sorted(p) != list(range(n)):
        return False
    ptr, idx = g.csr
    for u in range(n):
        row = idx[ptr[u] : ptr[u + 1]]
        image = sorted(p[int(w)] for w in row)
        pu = p[u]
        target = idx[ptr[pu] : ptr[pu + 1]]
        if image != [int(w) for w in target]:
            return False
    return True


# -- equitable refinement ----------------------------------------------------


def _refine(g: Graph, cells: list[list[int]], elab: Optional[dict]) -> list[list[int]]:
    n = g.n
    ptr, idx = g.csr
    cell_of = [0] * n
    while True:
        for ci, cell in enumerate(cells):
            for v in cell:
                cell_of[v] = ci
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            sigs: dict[tuple, list[int]] = {}
            for v in cell:
                row = idx[ptr[v] : ptr[v + 1]]
                if elab is None:
                    sig = tuple(sorted(cell_of[int(w)] for w in row))
                else:
                    sig = tuple(sorted(
                        (cell_of[int(w)], elab[(v, int(w)) if v < w else (int(w), v)])
                        for w in row))
                sigs.setdefault(sig, []).append(v)
            if len(sigs) > 1:
                changed = True
                for key in sorted(sigs):
                    new_cells.append(sorted(sigs[key]))
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _initial_cells(n: int, labels: Optional[Sequence]) -> list[list[int]]:
    if labels is None:
        return [list(range(n))]
    groups: dict = {}
    for v in range(n):
        groups.setdefault(labels[v], []).append(v)
    return [groups[key] for key in sorted(groups)]


def _orbit_contains(v: int, seeds: list[int], gens: list[Perm]) -> bool:
    seen = set(seeds)
    frontier = list(seeds)
    while frontier:
        x = frontier.pop()
        for p in gens:
            y = p[x]
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return v in seen


class _FoundWitness(Exception):
    def __init__(self, perm: Perm):
        self.perm = perm


def _search_generators(g: Graph, labels, elab, prune: bool = True,
                       stop_on_first: bool = False) -> list[Perm]:
    n = g.n
    ident = identity_perm(n)
    ptr, idx = g.csr
    gens: list[Perm] = []
    first_leaf: list[Optional[list[int]]] = [None]

    def leaf_candidate(leaf: list[int]) -> Optional[Perm]:
        base = first_leaf[0]
        p = [0] * n
        for i, v in enumerate(base):
            p[v] = leaf[i]
        p = tuple(p)
        if p == ident:
            return None
        if not is_automorphism(g, p):
            return None
        if elab is not None:
            for (u, v), lab in elab.items():
                a, b = p[u], p[v]
                key = (a, b) if a < b else (b, a)
                if elab.get(key) != lab:
                    return None
        return p

    def dfs(cells: list[list[int]], prefix: list[int]) -> None:
        cells = _refine(g, cells, elab)
        target_idx = -1
        target_len = n + 1
        for i, cell in enumerate(cells):
            if 1 < len(cell) < target_len:
                target_idx = i
                target_len = len(cell)
        if target_idx < 0:
            leaf = [cell[0] for cell in cells]
            if first_leaf[0] is None:
                first_leaf[0] = leaf
                return
            p = leaf_candidate(leaf)
            if p is not None:
                if stop_on_first:
                    raise _FoundWitness(p)
                gens.append(p)
            return
        cell = cells[target_idx]
        done: list[int] = []
        for v in cell:
            if prune and done and gens:
                applicable = [p for p in gens if all(p[x] == x for x in prefix)]
                if applicable and _orbit_contains(v, done, applicable):
                    done.append(v)
                    continue
            rest = [w for w in cell if w != v]
            child = cells[:target_idx] + [[v], rest] + cells[target_idx + 1:]
            dfs(child, prefix + [v])
            done.append(v)

    dfs(_initial_cells(n, labels), [])
    return gens


# -- Schreier-Sims order ------------------------------------------------------


def group_order(gens: Sequence[Perm], n: int) -> int:
    """Exact order of the group generated by gens (orbit-stabilizer chain)."""
    ident = identity_perm(n)
    level = [tuple(p) for p in dict.fromkeys(tuple(p) for p in gens) if tuple(p) != ident]
    order = 1
    while level:
        b = min(min(j for j in range(n) if p[j] != j) for p in level)
        trans: dict[int, Perm] = {b: ident}
        frontier = [b]
        while frontier:
            x = frontier.pop()
            tx = trans[x]
            for p in level:
                y = p[x]
                if y not in trans:
                    trans[y] = compose(p, tx)
                    frontier.append(y)
        order *= len(trans)
        stab: dict[Perm, None] = {}
        for x, tx in trans.items():
            for p in level:
                y = p[x]
                s = compose(inverse(trans[y]), compose(p, tx))
                if s != ident:
                    stab.setdefault(s)
        level = list(stab)
    return order


def close_group(gens: Sequence[Perm], n: int, cap: int = ELEMENT_CAP) -> list[Perm]:
    """All group elements by breadth-first closure; raises over the cap."""
    ident = identity_perm(n)
    seen: dict[Perm, None] = {ident: None}
    frontier = [ident]
    gens = [tuple(p) for p in gens]
    while frontier:
        nxt = []
        for q in frontier:
            for p in gens:
                r = compose(p, q)
                if r not in seen:
                    if len(seen) >= cap:
                        raise SizeBoundError(
                            f"group has more than {cap} elements; enumeration refused")
                    seen[r] = None
                    nxt.append(r)
        frontier = nxt
    return list(seen)


def _orbit_partition(gens: Sequence[Perm], n: int) -> list[list[int]]:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in gens:
        for i, j in enumerate(p):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return [groups[r] for r in sorted(groups)]


@dataclass
class AutGroup:
    """Generators, exact order, and vertex orbits of an automorphism group.

    The order is exact up to 64 vertices; larger graphs carry order None
    (generators and orbits only).
    """

    n: int
    generators: list[Perm]
    order: Optional[int]
    orbits: list[list[int]] = field(default_factory=list)

    def elements(self, cap: int = ELEMENT_CAP) -> list[Perm]:
        if self.order is not None and self.order > cap:
            raise SizeBoundError(
                f"group order {self.order} exceeds enumeration cap {cap}")
        return close_group(self.generators, self.n, cap=cap)

    @property
    def is_trivial(self) -> bool:
        return not self.generators


ORDER_VERTEX_LIMIT = 64


def aut_group(g: Graph, fixed_colours: Optional[Sequence[int]] = None,
              prune: bool = True) -> AutGroup:
    """Automorphism group, optionally constrained to preserve vertex colours."""
    labels = None if fixed_colours is None else list(fixed_colours)
    if labels is not None and len(labels) != g.n:
        raise ColouringError("fixed_colours must assign a colour to every vertex")
    gens = _search_generators(g, labels, None, prune=prune)
    order = group_order(gens, g.n) if g.n <= ORDER_VERTEX_LIMIT else None
    return AutGroup(g.n, gens, order, _orbit_partition(gens, g.n))


def _colouring_constraints(g: Graph, c: Colouring):
    c.validate_for(g)
    labels = None
    elab = None
    if c.kind in (VERTEX, TOTAL):
        labels = [int(x) for x in c.vcolours]
    if c.kind in (EDGE, TOTAL):
        elab = {pair: int(c.ecolours[eid]) for eid, pair in enumerate(g.edge_pairs)}
    return labels, elab


def is_distinguishing(g: Graph, c: Colouring) -> tuple[bool, Optional[Perm]]:
    """True when no non-identity automorphism preserves the colouring.

    On failure the witness is the first colour-preserving non-identity
    automorphism in search order.
    """
    labels, elab = _colouring_constraints(g, c)
    try:
        _search_generators(g, labels, elab, stop_on_first=True)
    except _FoundWitness as w:
        return False, w.perm
    return True, None


BOUNDARY_POINTWISE = "boundary_pointwise"
BOUNDARY_SETWISE = "boundary_setwise"


def _tree_has_no_interior_leaf(t: Truncation) -> bool:
    g = t.graph
    ptr, idx = g.csr
    # tree edges join consecutive depths, so max neighbour depth tells child-ness
    deepest_neighbour = np.maximum.reduceat(t.depth[idx], ptr[:-1])
    has_child = deepest_neighbour == t.depth + 1
    return bool(np.all(has_child | (t.depth == t.radius)))


def _tree_pointwise_check(t: Truncation, c: Colouring) -> tuple[bool, Optional[Perm]]:
    """Exact boundary-pointwise distinguishing test for tree truncations.

    Boundary vertices are fixed by assumption, and whenever a fixed vertex
    has exactly one unfixed neighbour that neighbour is forced too (its
    siblings in the fixed vertex's neighbourhood are all pinned).  After
    this closure the unfixed vertices form pendant components, each hanging
    from a single fixed vertex; a non-identity colour-preserving
    automorphism exists iff two sibling components carry equal coloured
    shapes, or one component repeats a shape among some vertex's children.
    """
    g = t.graph
    n = g.n
    if n >= 2 and _tree_has_no_interior_leaf(t):
        return True, None
    ptr, idx = g.csr
    vcol = c.vcolours if c.vcolours is not None else np.zeros(n, dtype=np.int8)
    ecol_of = None
    if c.ecolours is not None:
        ecol_of = {pair: int(c.ecolours[eid]) for eid, pair in enumerate(g.edge_pairs)}

    fixed = np.zeros(n, dtype=bool)
    fixed[t.boundary] = True
    unfixed_nb = np.zeros(n, dtype=np.int64)
    for v in range(n):
        unfixed_nb[v] = sum(1 for w in idx[ptr[v] : ptr[v + 1]] if not fixed[w])
    queue = [v for v in range(n) if fixed[v] and unfixed_nb[v] == 1]
    while queue:
        v = queue.pop()
        if not fixed[v] or unfixed_nb[v] != 1:
            continue
        u = next(int(w) for w in idx[ptr[v] : ptr[v + 1]] if not fixed[w])
        fixed[u] = True
        for w in idx[ptr[u] : ptr[u + 1]]:
            w = int(w)
            unfixed_nb[w] -= 1
            if fixed[w] and unfixed_nb[w] == 1:
                queue.append(w)
        if unfixed_nb[u] == 1:
            queue.append(u)
    free = np.flatnonzero(~fixed)
    if not len(free):
        return True, None

    def edge_colour(a: int, b: int) -> int:
        if ecol_of is None:
            return 0
        return ecol_of[(a, b) if a < b else (b, a)]

    sig: dict[int, int] = {}
    intern: dict[tuple, int] = {}
    parent_of: dict[int, int] = {}
    roots_by_attach: dict[int, list[int]] = {}
    seen = set()
    for start in sorted(int(v) for v in free):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        attach = None
        root = None
        qi = 0
        while qi < len(comp):
            u = comp[qi]
            qi += 1
            for w in idx[ptr[u] : ptr[u + 1]]:
                w = int(w)
                if fixed[w]:
                    attach, root = w, u
                elif w not in seen:
                    seen.add(w)
                    comp.append(w)
        order = [root]
        parent_of[root] = attach
        oi = 0
        while oi < len(order):
            u = order[oi]
            oi += 1
            for w in idx[ptr[u] : ptr[u + 1]]:
                w = int(w)
                if not fixed[w] and w != parent_of[u]:
                    parent_of[w] = u
                    order.append(w)
        for u in reversed(order):
            kids = tuple(sorted(sig[w] for w in idx[ptr[u] : ptr[u + 1]]
                                if not fixed[int(w)] and parent_of[int(w)] == u))
            if len(kids) >= 2 and any(a == b for a, b in zip(kids, kids[1:])):
                kid_list = sorted((int(w) for w in idx[ptr[u] : ptr[u + 1]]
                                   if not fixed[int(w)] and parent_of[int(w)] == int(u)),
                                  key=lambda w: (sig[w], w))
                dup = next(i for i in range(len(kid_list) - 1)
                           if sig[kid_list[i]] == sig[kid_list[i + 1]])
                return False, _swap_witness(g, sig, parent_of, fixed,
                                            kid_list[dup], kid_list[dup + 1])
            key = (int(vcol[u]), edge_colour(u, parent_of[u]), kids)
            sig[u] = intern.setdefault(key, len(intern))
        roots_by_attach.setdefault(attach, []).append(root)
    for attach, roots in roots_by_attach.items():
        roots = sorted(roots, key=lambda r: (sig[r], r))
        for i in range(len(roots) - 1):
            if sig[roots[i]] == sig[roots[i + 1]]:
                return False, _swap_witness(g, sig, parent_of, fixed,
                                            roots[i], roots[i + 1])
    return True, None


def _swap_witness(g: Graph, sig, parent_of, fixed, a: int, b: int) -> Perm:
    """Automorphism exchanging two colour-isomorphic pendant subtrees."""
    ptr, idx = g.csr
    image = list(range(g.n))

    def pair(x: int, y: int) -> None:
        image[x], image[y] = y, x
        kids_x = sorted((int(w) for w in idx[ptr[x] : ptr[x + 1]]
                         if not fixed[int(w)] and parent_of[int(w)] == x),
                        key=lambda w: (sig[w], w))
        kids_y = sorted((int(w) for w in idx[ptr[y] : ptr[y + 1]]
                         if not fixed[int(w)] and parent_of[int(w)] == y),
                        key=lambda w: (sig[w], w))
        for cx, cy in zip(kids_x, kids_y):
            pair(cx, cy)

    pair(a, b)
    return tuple(image)


def truncation_distinguishing(t: Truncation, c: Colouring, mode: str = BOUNDARY_POINTWISE,
                              allow_fast_path: bool = True) -> tuple[bool, Optional[Perm]]:
    """Distinguishing test against the truncation's boundary-restricted group.

    boundary_pointwise admits only automorphisms fixing every boundary
    vertex (the finite stand-in for excluding finitely-supported
    automorphisms of the infinite graph); boundary_setwise admits those
    mapping the boundary onto itself.
    """
    if mode not in (BOUNDARY_POINTWISE, BOUNDARY_SETWISE):
        raise GraphError(f"unknown truncation mode {mode!r}")
    g = t.graph
    c.validate_for(g)
    if (mode == BOUNDARY_POINTWISE and allow_fast_path
            and g.n >= 2 and g.m == g.n - 1):
        return _tree_pointwise_check(t, c)
    on_boundary = np.zeros(g.n, dtype=bool)
    on_boundary[t.boundary] = True
    vlab = c.vcolours if c.vcolours is not None else np.zeros(g.n, dtype=np.int8)
    if mode == BOUNDARY_POINTWISE:
        labels = [(int(vlab[v]), v + 1 if on_boundary[v] else 0) for v in range(g.n)]
    else:
        labels = [(int(vlab[v]), 1 if on_boundary[v] else 0) for v in range(g.n)]
    elab = None
    if c.kind in (EDGE, TOTAL):
        elab = {pair: int(c.ecolours[eid]) for eid, pair in enumerate(g.edge_pairs)}
    try:
        _search_generators(g, labels, elab, stop_on_first=True)
    except _FoundWitness as w:
        return False, w.perm
    return True, None


def motion(g: Graph, cap: int = ELEMENT_CAP):
    """Minimum number of vertices moved by a non-identity automorphism.

    Rigid graphs return the RIGID sentinel rather than a number.
    """
    group = aut_group(g)
    if group.is_trivial:
        return RIGID
    best = g.n + 1
    ident = identity_perm(g.n)
    for p in group.elements(cap=cap):
        if p == ident:
            continue
        moved = sum(1 for i, x in enumerate(p) if x != i)
        if moved < best:
            best = moved
    return best
