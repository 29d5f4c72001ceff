"""Deterministic generators for the graph families used throughout.

Finite families emit Graphs with a documented fixed vertex order;
truncated infinite families emit Truncations whose vertex ids follow BFS
order from the designated root, so identical parameters always yield
identical bytes.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .core import Graph, Truncation
from .errors import GraphError

GraphLike = Union[Graph, Truncation]

FAMILY_NAMES = (
    "path", "cycle", "complete", "complete_bipartite", "star",
    "ray", "double_ray", "regular_tree", "kdd_minus_edge_rays",
    "star_one_ray", "rationals_sample", "random_tree_min3",
)


@dataclass(frozen=True)
class FamilySpec:
    """A named family instance: deterministic given (name, params)."""

    name: str
    params: tuple[int, ...]

    def __str__(self) -> str:
        return f"family:{self.name}({','.join(str(p) for p in self.params)})"


_SPEC_RE = re.compile(r"^family:([a-z_0-9]+)\(([-0-9,\s]*)\)$")


def parse_family(text: str) -> FamilySpec:
    m = _SPEC_RE.match(text.strip())
    if not m:
        raise GraphError(f"not a family spec: {text!r} (want family:<name>(<ints>))")
    name = m.group(1)
    if name not in FAMILY_NAMES:
        raise GraphError(f"unknown family {name!r}; known: {', '.join(FAMILY_NAMES)}")
    raw = m.group(2).strip()
    params = tuple(int(x) for x in raw.split(",")) if raw else ()
    return FamilySpec(name, params)


def _need(spec: FamilySpec, count: int, names: str) -> tuple[int, ...]:
    if len(spec.params) != count:
        raise GraphError(f"{spec.name} takes {count} parameter(s) ({names}), got {len(spec.params)}")
    return spec.params


def _path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges([(i, i + 1) for i in range(n - 1)], n=n)


def _cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges([(i, (i + 1) % n) for i in range(n)])


def _complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete needs n >= 1")
    return Graph.from_edges([(a, b) for a in range(n) for b in range(a + 1, n)], n=n)


def _complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete_bipartite needs both part sizes >= 1")
    return Graph.from_edges([(i, a + j) for i in range(a) for j in range(b)])


def _star(leaves: int) -> Graph:
    if leaves < 1:
        raise GraphError("star needs >= 1 leaf")
    return Graph.from_edges([(0, i + 1) for i in range(leaves)])


def _ray(radius: int) -> Truncation:
    if radius < 1:
        raise GraphError("ray needs radius >= 1")
    g = _path(radius + 1)
    return Truncation(g, 0, radius, depth=np.arange(radius + 1, dtype=np.int32), validate=False)


def _double_ray(radius: int) -> Truncation:
    """Path of 2r+1 vertices rooted centrally; ids in BFS order (root 0,
    then the two arm vertices of each depth, lower arm first)."""
    if radius < 1:
        raise GraphError("double_ray needs radius >= 1")
    n = 2 * radius + 1
    edges = [(0, 1), (0, 2)] + [(v, v + 2) for v in range(1, n - 2)]
    g = Graph.from_edges(edges, n=n)
    depth = np.zeros(n, dtype=np.int32)
    depth[1:] = (np.arange(1, n) + 1) // 2
    return Truncation(g, 0, radius, depth=depth, validate=False)


def _regular_tree(degree: int, radius: int) -> Truncation:
    """Infinite degree-regular tree truncated at the given radius.

    BFS ids are formulaic: the root's children are 1..d; vertex v >= 1 at
    depth k has children (d-1)*v + 2 .. (d-1)*v + d (while within radius).
    """
    if degree < 3:
        raise GraphError("regular_tree needs degree >= 3")
    if radius < 1:
        raise GraphError("regular_tree needs radius >= 1")
    d = degree
    sphere_sizes = [1] + [d * (d - 1) ** (k - 1) for k in range(1, radius + 1)]
    n = sum(sphere_sizes)
    starts = np.concatenate([[0], np.cumsum(sphere_sizes)])
    depth = np.zeros(n, dtype=np.int32)
    for k in range(1, radius + 1):
        depth[starts[k] : starts[k + 1]] = k
    first_leaf = int(starts[radius])

    ids = np.arange(n, dtype=np.int64)
    parent = np.zeros(n, dtype=np.int64)
    parent[1 : d + 1] = 0
    if n > d + 1:
        parent[d + 1 :] = (ids[d + 1 :] - 2) // (d - 1)
    degs = np.full(n, d, dtype=np.int64)
    degs[first_leaf:] = 1
    indptr = np.concatenate([[0], np.cumsum(degs)])
    indices = np.zeros(int(indptr[-1]), dtype=np.int32)
    # root row
    indices[0:d] = np.arange(1, d + 1)
    internal = ids[(ids >= 1) & (ids < first_leaf)]
    if len(internal):
        base = indptr[internal]
        indices[base] = parent[internal]
        for j in range(1, d):
            indices[base + j] = (d - 1) * internal + 1 + j
    leaves = ids[first_leaf:]
    if len(leaves):
        indices[indptr[leaves]] = parent[leaves]
    g = Graph.from_csr(indptr, indices, validate=n <= 100_000)
    return Truncation(g, 0, radius, depth=depth, validate=n <= 100_000)


def _kdd_minus_edge_rays(delta: int, length: int) -> Truncation:
    """Balanced complete bipartite core minus one edge, one path of
    `length` extra vertices hanging from each deleted-edge endpoint;
    rooted at one of them.  Not an exact ball: both tails carry exactly
    `length` vertices, so the root-side tail ends before the boundary.
    """
    if delta < 3:
        raise GraphError("kdd_minus_edge_rays needs degree >= 3")
    if length < 4:
        raise GraphError("kdd_minus_edge_rays needs ray length >= 4")
    u = 0
    vside = list(range(1, delta))              # v_2..v_delta at depth 1
    uside = list(range(delta, 2 * delta - 1))  # u_2..u_delta at depth 2
    v = 2 * delta - 1                          # depth 3
    p_tail = list(range(2 * delta, 2 * delta + length))
    q_tail = list(range(2 * delta + length, 2 * delta + 2 * length))
    edges = []
    for x in vside:
        edges.append((u, x))
        for y in uside:
            edges.append((x, y))
    for y in uside:
        edges.append((y, v))
    edges.append((u, p_tail[0]))
    for a, b in zip(p_tail, p_tail[1:]):
        edges.append((a, b))
    edges.append((v, q_tail[0]))
    for a, b in zip(q_tail, q_tail[1:]):
        edges.append((a, b))
    g = Graph.from_edges(edges, n=2 * delta + 2 * length)
    # renumber into canonical BFS order: sort by (depth, provisional id)
    depth = g.bfs_depths(u)
    order = sorted(range(g.n), key=lambda w: (int(depth[w]), w))
    relabel = {old: new for new, old in enumerate(order)}
    g2 = Graph.from_edges([(relabel[a], relabel[b]) for a, b in edges], n=g.n)
    return Truncation(g2, relabel[u], length + 3)


def _star_one_ray(delta: int, radius: int) -> Truncation:
    """Star with delta edges, one of them stretched into a ray; rooted at
    the centre.  The delta-1 short edges end in interior leaves at depth 1
    (the pendant-subtree showcase)."""
    if delta < 3:
        raise GraphError("star_one_ray needs degree >= 3")
    if radius < 2:
        raise GraphError("star_one_ray needs radius >= 2")
    edges = [(0, i) for i in range(1, delta)]        # pendant leaves 1..delta-1
    ray = [0] + list(range(delta, delta + radius))   # ray vertices at depths 1..radius
    edges.append((0, delta))
    for a, b in zip(ray[1:], ray[2:]):
        edges.append((a, b))
    g = Graph.from_edges(edges)
    return Truncation(g, 0, radius)


def _rationals_sample(m: int, seed: int) -> Graph:
    """Finite sample of the order graph on the rationals.

    Draws m distinct rationals from the seed, keeps side-1 copies of all
    but the largest and side-0 copies of all but the smallest (the two
    extremes are isolated in the sample and are dropped), and joins
    (a, 1) to (b, 0) whenever a < b.  Vertex ids: side-1 vertices in
    increasing rational order, then side-0 vertices in increasing order.
    """
    if m < 2:
        raise GraphError("rationals_sample needs m >= 2")
    rng = random.Random(seed)
    sample: set[Fraction] = set()
    while len(sample) < m:
        sample.add(Fraction(rng.randint(-8 * m, 8 * m), rng.randint(1, 2 * m)))
    ordered = sorted(sample)
    ones = ordered[:-1]     # (a, 1) has an edge iff a < max
    zeros = ordered[1:]     # (b, 0) has an edge iff b > min
    edges = []
    for i in range(len(ones)):
        for j in range(len(zeros)):
            if ones[i] < zeros[j]:
                edges.append((i, len(ones) + j))
    return Graph.from_edges(edges, n=len(ones) + len(zeros))


def _random_tree_min3(radius: int, seed: int) -> Truncation:
    """Seeded random tree truncation with every interior vertex of degree
    >= 3: the root gets three children, every other interior vertex two or
    three (the seeded draw leans towards two so a full red-schedule stage
    fits at desk-scale radii), and all leaves sit on the boundary."""
    if radius < 1:
        raise GraphError("random_tree_min3 needs radius >= 1")
    rng = random.Random(seed)
    edges = []
    level = [0]
    nxt = 1
    depths = [0]
    for depth in range(1, radius + 1):
        new_level = []
        for v in level:
            kids = 3 if v == 0 else (3 if rng.random() < 0.125 else 2)
            for _ in range(kids):
                edges.append((v, nxt))
                depths.append(depth)
                new_level.append(nxt)
                nxt += 1
        level = new_level
    g = Graph.from_edges(edges, n=nxt)
    return Truncation(g, 0, radius, depth=np.array(depths, dtype=np.int32),
                      validate=nxt <= 100_000)


def instantiate(spec: FamilySpec) -> GraphLike:
    """Build the named family member; deterministic for fixed parameters."""
    name = spec.name
    if name == "path":
        return _path(*_need(spec, 1, "n"))
    if name == "cycle":
        return _cycle(*_need(spec, 1, "n"))
    if name == "complete":
        return _complete(*_need(spec, 1, "n"))
    if name == "complete_bipartite":
        return _complete_bipartite(*_need(spec, 2, "a, b"))
    if name == "star":
        return _star(*_need(spec, 1, "leaves"))
    if name == "ray":
        return _ray(*_need(spec, 1, "radius"))
    if name == "double_ray":
        return _double_ray(*_need(spec, 1, "radius"))
    if name == "regular_tree":
        return _regular_tree(*_need(spec, 2, "degree, radius"))
    if name == "kdd_minus_edge_rays":
        return _kdd_minus_edge_rays(*_need(spec, 2, "degree, ray_length"))
    if name == "star_one_ray":
        return _star_one_ray(*_need(spec, 2, "degree, radius"))
    if name == "rationals_sample":
        return _rationals_sample(*_need(spec, 2, "m, seed"))
    if name == "random_tree_min3":
        return _random_tree_min3(*_need(spec, 2, "radius, seed"))
    raise GraphError(f"unknown family {name!r}")
