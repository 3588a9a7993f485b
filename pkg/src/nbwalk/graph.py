"""Simple d-regular graphs: construction, validation and structural queries.

A :class:`RegularGraph` stores its adjacency as an ``(n, d)`` integer array
whose rows are sorted.  Directed edges are indexed as ``tail * d + slot`` where
``slot`` is the position of the head in the tail's row, so the reverse of an
edge is a table lookup.
"""

from __future__ import annotations

import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from os import PathLike

import numpy as np

from . import _rng
from .errors import (
    Asymmetric,
    DuplicateEdge,
    GenerationTimeout,
    GraphError,
    InfeasibleDegree,
    NonRegular,
    OverlapTimeout,
    SelfLoop,
)

__all__ = [
    "RegularGraph",
    "DecoratedGraph",
    "SpacedSet",
    "from_adjacency",
    "complete_graph",
    "cycle_graph",
    "petersen_graph",
    "random_regular",
    "cycle_decorated_expander",
    "disjoint_union",
    "relabeled",
    "girth",
    "is_connected",
    "is_bipartite",
    "component_count",
    "bfs_distances",
    "spaced_set",
    "to_json",
    "from_json",
    "read_graph",
    "write_graph",
]

DEFAULT_MAX_RESTARTS = 10_000


@dataclass(frozen=True, eq=False)
class RegularGraph:
    """Immutable simple d-regular undirected graph on vertices ``0..n-1``.

    Build instances through :func:`from_adjacency` or a generator; the
    constructor itself trusts its input.
    """

    n: int
    d: int
    adj: np.ndarray

    def __post_init__(self) -> None:
        self.adj.setflags(write=False)

    @property
    def num_edges(self) -> int:
        return self.n * self.d // 2

    @property
    def num_directed_edges(self) -> int:
        return self.n * self.d

    def neighbors(self, v: int) -> np.ndarray:
        return self.adj[v]

    def adjacency_lists(self) -> list[list[int]]:
        return self.adj.tolist()

    @cached_property
    def heads(self) -> np.ndarray:
        """Head vertex of every directed edge id."""
        h = self.adj.ravel().copy()
        h.setflags(write=False)
        return h

    @cached_property
    def tails(self) -> np.ndarray:
        """Tail vertex of every directed edge id."""
        t = np.repeat(np.arange(self.n, dtype=np.int64), self.d)
        t.setflags(write=False)
        return t

    @cached_property
    def reverse(self) -> np.ndarray:
        """``reverse[e]`` is the id of edge ``e`` traversed the other way."""
        # ids are already in lexicographic (tail, head) order
        keys = self.tails * self.n + self.heads
        rev = np.searchsorted(keys, self.heads * self.n + self.tails)
        rev.setflags(write=False)
        return rev

    def edge_id(self, tail: int, head: int) -> int:
        row = self.adj[tail]
        slot = int(np.searchsorted(row, head))
        if slot >= self.d or row[slot] != head:
            raise GraphError(f"({tail}, {head}) is not an edge", vertex=tail)
        return tail * self.d + slot

    def edge_pair(self, e: int) -> tuple[int, int]:
        return int(e) // self.d, int(self.heads[e])

    def edges(self) -> np.ndarray:
        """Undirected edges as an ``(m, 2)`` array with ``u < v``, sorted."""
        mask = self.tails < self.heads
        return np.stack([self.tails[mask], self.heads[mask]], axis=1)

    def adjacency_matrix(self, dtype=np.float64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        a[self.tails, self.heads] = 1
        return a

    def __repr__(self) -> str:
        return f"{type(self).__name__}(n={self.n}, d={self.d})"


@dataclass(frozen=True, eq=False)
class DecoratedGraph(RegularGraph):
    """Regular graph whose vertices are partitioned into consecutive g-cycles.

    Cycle ``c`` is ``c*g, c*g+1, ..., c*g+g-1`` in that cyclic order; its
    edges belong to the graph.
    """

    cycle_length: int = 3

    def cycle_id(self, v: int) -> int:
        return v // self.cycle_length

    def cycle_step(self, v: int, offset: int) -> int:
        """Vertex reached from ``v`` by moving ``offset`` places along its cycle."""
        g = self.cycle_length
        base = (v // g) * g
        return base + (v - base + offset) % g


@dataclass(frozen=True)
class SpacedSet:
    vertices: list[int]
    spacing: int


def _build(n: int, d: int, u: np.ndarray, v: np.ndarray, cls=RegularGraph, **extra) -> RegularGraph:
    tails = np.concatenate([u, v]).astype(np.int64)
    heads = np.concatenate([v, u]).astype(np.int64)
    order = np.lexsort((heads, tails))
    adj = heads[order].reshape(n, d)
    return cls(n=n, d=d, adj=adj, **extra)


def from_adjacency(lists: Sequence[Sequence[int]]) -> RegularGraph:
    """Validate per-vertex neighbour lists and build a :class:`RegularGraph`.

    Raises the specific :class:`~nbwalk.errors.GraphError` subclass naming the
    first offending vertex.
    """
    if len(lists) == 0:
        raise NonRegular("adjacency is empty")
    n = len(lists)
    d = len(lists[0])
    for v, row in enumerate(lists):
        if len(row) != d:
            raise NonRegular(f"vertex {v} has {len(row)} neighbours, expected {d}", vertex=v)
    if d < 2:
        raise NonRegular(f"degree {d} < 2", vertex=0)
    rows = []
    for v, row in enumerate(lists):
        r = sorted(int(x) for x in row)
        if r[0] < 0 or r[-1] >= n:
            raise GraphError(f"vertex {v} lists a neighbour outside 0..{n - 1}", vertex=v)
        if v in r:
            raise SelfLoop(f"vertex {v} lists itself", vertex=v)
        if any(a == b for a, b in zip(r, r[1:])):
            raise DuplicateEdge(f"vertex {v} lists a neighbour twice", vertex=v)
        rows.append(r)
    adj = np.asarray(rows, dtype=np.int64)
    for v in range(n):
        for w in adj[v]:
            # rows are sorted so membership is a binary search
            row = adj[w]
            i = np.searchsorted(row, v)
            if i >= d or row[i] != v:
                raise Asymmetric(f"vertex {v} lists {w} but {w} does not list {v}", vertex=int(w))
    return RegularGraph(n=n, d=d, adj=adj)


def complete_graph(n: int) -> RegularGraph:
    if n < 3:
        raise InfeasibleDegree(f"complete graph needs n >= 3, got {n}")
    adj = np.array([[j for j in range(n) if j != i] for i in range(n)], dtype=np.int64)
    return RegularGraph(n=n, d=n - 1, adj=adj)


def cycle_graph(n: int) -> RegularGraph:
    if n < 3:
        raise InfeasibleDegree(f"cycle needs n >= 3, got {n}")
    u = np.arange(n)
    return _build(n, 2, u, (u + 1) % n)


def petersen_graph() -> RegularGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    e = np.array(outer + spokes + inner)
    return _build(10, 3, e[:, 0], e[:, 1])


def disjoint_union(g1: RegularGraph, g2: RegularGraph) -> RegularGraph:
    if g1.d != g2.d:
        raise NonRegular("disjoint union of graphs with different degrees")
    adj = np.vstack([g1.adj, g2.adj + g1.n])
    return RegularGraph(n=g1.n + g2.n, d=g1.d, adj=adj)


def relabeled(g: RegularGraph, perm: Sequence[int]) -> RegularGraph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    perm = np.asarray(perm, dtype=np.int64)
    e = g.edges()
    return _build(g.n, g.d, perm[e[:, 0]], perm[e[:, 1]])


def _pairing(n: int, r: int, rng: np.random.Generator, forbidden: np.ndarray | None = None):
    """One draw of the configuration model.

    Returns ``(u, v, reason)``; ``reason`` is ``None`` when the pairing is a
    simple graph avoiding every key in ``forbidden``.
    """
    points = np.repeat(np.arange(n, dtype=np.int64), r)
    rng.shuffle(points)
    u, v = points[0::2], points[1::2]
    if np.any(u == v):
        return u, v, "loop"
    keys = np.minimum(u, v) * n + np.maximum(u, v)
    if np.unique(keys).size != keys.size:
        return u, v, "multi"
    if forbidden is not None and np.isin(keys, forbidden).any():
        return u, v, "overlap"
    return u, v, None


def random_regular(
    n: int,
    d: int,
    seed: int,
    *,
    connected: bool = False,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> RegularGraph:
    """Random simple d-regular graph from the pairing model.

    Any pairing with a loop or a repeated edge is discarded whole and redrawn,
    so the result is uniform over simple d-regular graphs.  The expected
    number of draws is about ``exp((d*d - 1) / 4)``; beyond d = 6 the restart
    budget runs out quickly.  With ``connected=True`` disconnected results
    are redrawn too, against the same budget.
    """
    if d < 3:
        raise InfeasibleDegree(f"random_regular needs d >= 3, got {d}")
    if (n * d) % 2 or d >= n:
        raise InfeasibleDegree(f"no simple {d}-regular graph on {n} vertices")
    rng = _rng.stream(seed, _rng.GRAPH)
    for _ in range(max_restarts):
        u, v, reason = _pairing(n, d, rng)
        if reason is not None:
            continue
        g = _build(n, d, u, v)
        if connected and not is_connected(g):
            continue
        return g
    raise GenerationTimeout(f"no simple {d}-regular graph on {n} vertices after {max_restarts} restarts")


def cycle_decorated_expander(
    cycles: int,
    g: int,
    d: int,
    seed: int,
    *,
    connected: bool = False,
    max_restarts: int = DEFAULT_MAX_RESTARTS,
) -> DecoratedGraph:
    """``cycles`` disjoint g-cycles overlaid with a random (d-2)-regular layer.

    The random layer is drawn from the pairing model and redrawn until it is
    simple and shares no edge with the cycles, so every vertex lies on its
    designated g-cycle.
    """
    n = cycles * g
    r = d - 2
    if d < 4:
        raise InfeasibleDegree(f"decorated expander needs d >= 4, got {d}")
    if cycles < 1 or g < 3:
        raise InfeasibleDegree("need at least one cycle of length >= 3")
    if (n * r) % 2 or r >= n - 2:
        raise InfeasibleDegree(f"no {r}-regular layer fits on {n} vertices beside the cycles")
    verts = np.arange(n, dtype=np.int64)
    cu = verts
    cv = (verts // g) * g + (verts % g + 1) % g
    forbidden = np.minimum(cu, cv) * n + np.maximum(cu, cv)
    rng = _rng.stream(seed, _rng.DECORATION)
    overlaps = 0
    for _ in range(max_restarts):
        u, v, reason = _pairing(n, r, rng, forbidden)
        if reason == "overlap":
            overlaps += 1
        if reason is not None:
            continue
        graph = _build(
            n, d, np.concatenate([cu, u]), np.concatenate([cv, v]), cls=DecoratedGraph, cycle_length=g
        )
        if connected and not is_connected(graph):
            continue
        return graph
    exc = OverlapTimeout if overlaps else GenerationTimeout
    raise exc(f"could not place a simple {r}-regular layer after {max_restarts} restarts")


def bfs_distances(g: RegularGraph, source: int, max_depth: int | None = None) -> np.ndarray:
    """Hop distances from ``source``; -1 for vertices not reached."""
    dist = np.full(g.n, -1, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    depth = 0
    while frontier.size and (max_depth is None or depth < max_depth):
        nxt = np.unique(g.adj[frontier].ravel())
        nxt = nxt[dist[nxt] < 0]
        depth += 1
        dist[nxt] = depth
        frontier = nxt
    return dist


def _component_labels(g: RegularGraph) -> tuple[np.ndarray, np.ndarray]:
    label = np.full(g.n, -1, dtype=np.int64)
    depth = np.zeros(g.n, dtype=np.int64)
    c = 0
    for s in range(g.n):
        if label[s] >= 0:
            continue
        dist = bfs_distances(g, s)
        hit = dist >= 0
        label[hit] = c
        depth[hit] = dist[hit]
        c += 1
    return label, depth


def component_count(g: RegularGraph) -> int:
    return int(_component_labels(g)[0].max()) + 1


def is_connected(g: RegularGraph) -> bool:
    return bool(np.all(bfs_distances(g, 0) >= 0))


def is_bipartite(g: RegularGraph) -> bool:
    _, depth = _component_labels(g)
    return bool(np.all((depth[g.tails] - depth[g.heads]) % 2 == 1))


def girth(g: RegularGraph) -> float:
    """Length of the shortest cycle (``math.inf`` if there is none).

    For each root a BFS runs until no shorter cycle can be closed; the first
    non-tree edge ``(u, w)`` gives a closed walk of length
    ``dist[u] + dist[w] + 1`` containing a cycle, and the minimum over all
    roots is exact.
    """
    best = math.inf
    adj = g.adj.tolist()
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        head = 0
        while head < len(queue):
            u = queue[head]
            head += 1
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    best = min(best, du + dist[w] + 1)
    return best


def spaced_set(g: RegularGraph, spacing: int) -> SpacedSet:
    """Greedy set of vertices at pairwise distance >= ``spacing``.

    Scans vertex ids in ascending order and keeps every vertex not yet within
    ``spacing - 1`` hops of a kept one, so the result is maximal.
    """
    if spacing < 1:
        raise ValueError("spacing must be >= 1")
    blocked = np.zeros(g.n, dtype=bool)
    members = []
    for v in range(g.n):
        if blocked[v]:
            continue
        members.append(v)
        blocked[bfs_distances(g, v, max_depth=spacing - 1) >= 0] = True
    return SpacedSet(vertices=members, spacing=spacing)


def to_json(g: RegularGraph) -> str:
    return json.dumps({"n": g.n, "d": g.d, "adj": g.adj.tolist()}, separators=(",", ":")) + "\n"


def from_json(text: str) -> RegularGraph:
    obj = json.loads(text)
    graph = from_adjacency(obj["adj"])
    if graph.n != obj["n"] or graph.d != obj["d"]:
        raise NonRegular(f"header says n={obj['n']}, d={obj['d']} but adjacency has n={graph.n}, d={graph.d}")
    return graph


def write_graph(g: RegularGraph, path: str | PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(to_json(g))


def read_graph(path: str | PathLike) -> RegularGraph:
    with open(path) as fh:
        return from_json(fh.read())
