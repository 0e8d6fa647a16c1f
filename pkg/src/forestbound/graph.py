"""Simple undirected graphs on dense vertex ids, families, and induced views."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

VertexSet = tuple[int, ...]


class GraphError(ValueError):
    """Malformed graph input or invalid family parameters."""


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    Every edge ``(u, v)`` is stored with ``u < v``; that pair also fixes the
    orientation ``u -> v`` used by the incidence matrix.
    """

    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise GraphError("a graph needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        adj: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise GraphError(f"edge ({u}, {v}) not normalized")
            if (u, v) in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
            adj[u].add(v)
            adj[v].add(u)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "adjacency", tuple(frozenset(a) for a in adj))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph from unordered pairs; rejects loops and repeated edges."""
        norm = []
        for e in edges:
            u, v = int(e[0]), int(e[1])
            norm.append((u, v) if u < v else (v, u))
        if len(set(norm)) != len(norm):
            dup = next(e for e in norm if norm.count(e) > 1)
            raise GraphError(f"duplicate edge {dup}")
        return cls(n, tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> VertexSet:
        return tuple(sorted(self.adjacency[v]))

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def vertices(self) -> VertexSet:
        return tuple(range(self.n))

    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self.edges)}


def vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """Validate and canonicalize a subset of ``g``'s vertices."""
    s = sorted(set(int(v) for v in members))
    for v in s:
        if not 0 <= v < g.n:
            raise GraphError(f"vertex {v} out of range for n={g.n}")
    return tuple(s)


@dataclass(frozen=True)
class InducedSubgraph:
    """The subgraph of ``parent`` induced by ``vertices``; edges are derived."""

    parent: Graph
    vertices: VertexSet

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        members = set(self.vertices)
        return tuple(e for e in self.parent.edges if e[0] in members and e[1] in members)

    def neighbors(self, v: int) -> VertexSet:
        members = set(self.vertices)
        return tuple(sorted(self.parent.adjacency[v] & members))

    def degree(self, v: int) -> int:
        return len(self.parent.adjacency[v].intersection(self.vertices))

    def __len__(self) -> int:
        return len(self.vertices)

    def as_graph(self) -> Graph:
        """Relabel onto ``0..k-1`` following the sorted vertex order."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        return Graph.from_edges(len(self.vertices), [(pos[u], pos[v]) for u, v in self.edges])


def induced(g: Graph, s: Iterable[int]) -> InducedSubgraph:
    return InducedSubgraph(g, vertex_set(g, s))


def components(h: Graph | InducedSubgraph) -> list[VertexSet]:
    """Connected components, each sorted, ordered by smallest member."""
    if isinstance(h, Graph):
        members = set(range(h.n))
        adj = h.adjacency
    else:
        members = set(h.vertices)
        adj = h.parent.adjacency
    out: list[VertexSet] = []
    seen: set[int] = set()
    for s in sorted(members):
        if s in seen:
            continue
        stack = [s]
        seen.add(s)
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in adj[v]:
                if w in members and w not in seen:
                    seen.add(w)
                    stack.append(w)
        out.append(tuple(sorted(comp)))
    return out


@dataclass(frozen=True)
class ForestSummary:
    is_forest: bool
    leaves: VertexSet
    isolated: VertexSet
    n_components: int


def is_forest(h: InducedSubgraph | Graph) -> ForestSummary:
    """Acyclicity test plus leaf/isolated/component bookkeeping."""
    if isinstance(h, Graph):
        h = InducedSubgraph(h, h.vertices())
    comps = components(h)
    n_edges = len(h.edges)
    degs = {v: h.degree(v) for v in h.vertices}
    return ForestSummary(
        is_forest=n_edges == len(h.vertices) - len(comps),
        leaves=tuple(v for v in h.vertices if degs[v] == 1),
        isolated=tuple(v for v in h.vertices if degs[v] == 0),
        n_components=len(comps),
    )


# --- families -------------------------------------------------------------


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """Center 0 joined to leaves ``1..n-1``."""
    if n < 2:
        raise GraphError("star needs n >= 2")
    return Graph(n, tuple((0, i) for i in range(1, n)))


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def empty(n: int) -> Graph:
    if n < 1:
        raise GraphError("edgeless graph needs n >= 1")
    return Graph(n, ())


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise GraphError("complete bipartite needs both sides >= 1")
    return Graph(a + b, tuple((i, a + j) for i in range(a) for j in range(b)))


def complete_binary_tree(depth: int) -> Graph:
    """Heap-ordered: vertex ``i`` has children ``2i+1`` and ``2i+2``."""
    if depth < 1:
        raise GraphError("complete binary tree needs depth >= 1")
    n = 2**depth - 1
    return Graph.from_edges(n, [((i - 1) // 2, i) for i in range(1, n)])


def grid(rows: int, cols: int) -> Graph:
    """Row-major ids: vertex ``r*cols + c``."""
    if rows < 1 or cols < 1:
        raise GraphError("grid needs positive dimensions")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def ladder(m: int) -> Graph:
    """The 2 x (m+1) grid, which has ``m`` square faces."""
    if m < 1:
        raise GraphError("ladder needs m >= 1")
    return grid(2, m + 1)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    if n < 1 or not 0.0 <= p <= 1.0:
        raise GraphError("erdos-renyi needs n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(n, tuple(edges))


FAMILIES = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "complete": complete,
    "empty": empty,
    "complete-bipartite": complete_bipartite,
    "complete-binary-tree": complete_binary_tree,
    "grid": grid,
    "ladder": ladder,
    "petersen": petersen,
    "erdos-renyi": erdos_renyi,
}


def build_family(kind: str, *params) -> Graph:
    """Construct a named family member, e.g. ``build_family("star", 10)``."""
    try:
        ctor = FAMILIES[kind]
    except KeyError:
        raise GraphError(f"unknown family {kind!r}") from None
    try:
        return ctor(*params)
    except TypeError as exc:
        raise GraphError(f"bad parameters for {kind}: {params}") from exc
