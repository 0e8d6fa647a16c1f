"""Incidence matrices, graph homology, and the cycle-forest bound.

Edges are oriented ``u -> v`` for ``u < v``.  The incidence matrix has
``+1`` at the head and ``-1`` at the tail of each edge column, so that
``(B^t x)_e = x_v - x_u``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import exact
from .forest import SearchBudget, _Clock, leaf_selection
from .graph import Graph, GraphError, InducedSubgraph, components, is_forest


class CycleError(ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class IncidenceMatrix:
    entries: tuple[tuple[int, ...], ...]
    n: int
    m: int

    def transpose(self) -> list[list[int]]:
        return [list(c) for c in zip(*self.entries)] if self.m else []

    def rank(self) -> int:
        return exact.bareiss_rank(self.entries) if self.m else 0


def incidence(g: Graph) -> IncidenceMatrix:
    rows = [[0] * g.m for _ in range(g.n)]
    for j, (u, v) in enumerate(g.edges):
        rows[u][j] = -1
        rows[v][j] = 1
    return IncidenceMatrix(tuple(tuple(r) for r in rows), g.n, g.m)


@dataclass(frozen=True)
class OrientedCycle:
    """Closed trail as a signed edge vector; ``walk`` lists its vertices."""

    vector: tuple[int, ...]
    walk: tuple[int, ...] = ()

    @property
    def support(self) -> frozenset[int]:
        return frozenset(i for i, c in enumerate(self.vector) if c)

    def __len__(self) -> int:
        return len(self.support)

    def to_json(self) -> dict:
        return {"vector": list(self.vector), "walk": list(self.walk), "edges": sorted(self.support)}


def in_kernel(g: Graph, vec: Sequence[int]) -> bool:
    """``B c = 0`` in exact integer arithmetic."""
    net = [0] * g.n
    for (u, v), c in zip(g.edges, vec):
        net[u] -= c
        net[v] += c
    return not any(net)


def cycle_from_walk(g: Graph, walk: Sequence[int]) -> OrientedCycle:
    """Signed vector of a closed walk ``w0, w1, ..., w0`` without repeated edges."""
    walk = list(walk)
    if walk[0] != walk[-1]:
        walk.append(walk[0])
    index = g.edge_index()
    vec = [0] * g.m
    for a, b in zip(walk, walk[1:]):
        e = (min(a, b), max(a, b))
        if e not in index:
            raise CycleError(f"({a}, {b}) is not an edge")
        j = index[e]
        if vec[j]:
            raise CycleError(f"edge {e} repeated in walk")
        vec[j] = 1 if a < b else -1
    return OrientedCycle(tuple(vec), tuple(walk))


def is_edge_simple_cycle(g: Graph, vec: Sequence[int]) -> bool:
    """A ``{-1,0,1}`` kernel vector with connected, nonempty support.

    Such a vector is a balanced orientation of a connected subgraph, hence
    the signed vector of some closed trail.
    """
    if any(c not in (-1, 0, 1) for c in vec) or not any(vec) or not in_kernel(g, vec):
        return False
    sub_edges = [e for e, c in zip(g.edges, vec) if c]
    verts = sorted({x for e in sub_edges for x in e})
    pos = {v: i for i, v in enumerate(verts)}
    h = Graph.from_edges(len(verts), [(pos[a], pos[b]) for a, b in sub_edges])
    return len(components(h)) == 1


def _euler_walk(g: Graph, vec: Sequence[int]) -> tuple[int, ...]:
    out: dict[int, list[int]] = {}
    for (u, v), c in zip(g.edges, vec):
        if c == 1:
            out.setdefault(u, []).append(v)
        elif c == -1:
            out.setdefault(v, []).append(u)
    for k in out:
        out[k].sort(reverse=True)
    start = min(out)
    stack, walk = [start], []
    while stack:
        v = stack[-1]
        if out.get(v):
            stack.append(out[v].pop())
        else:
            walk.append(stack.pop())
    return tuple(reversed(walk))


def homology_dims(g: Graph) -> tuple[int, int]:
    """``(dim H0, dim H1)``, cross-checked against exact nullities of ``B^t`` and ``B``."""
    c = len(components(g))
    h0, h1 = c, g.m - g.n + c
    b = incidence(g)
    r = b.rank()
    if g.n - r != h0 or g.m - r != h1:
        raise AssertionError(f"homology mismatch: rank B = {r}, formula ({h0}, {h1})")
    return h0, h1


def spanning_forest(g: Graph) -> dict[int, int | None]:
    """BFS parent map from the smallest vertex of each component."""
    parent: dict[int, int | None] = {}
    for root in range(g.n):
        if root in parent:
            continue
        parent[root] = None
        queue = [root]
        for v in queue:
            for w in sorted(g.adjacency[v]):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
    return parent


def fundamental_cycle_basis(g: Graph) -> list[OrientedCycle]:
    """One cycle per non-tree edge of the BFS spanning forest.

    Each cycle traverses its non-tree edge ``u -> v`` along the orientation
    and returns through the tree.
    """
    parent = spanning_forest(g)
    tree = {(min(v, p), max(v, p)) for v, p in parent.items() if p is not None}

    def to_root(v: int) -> list[int]:
        out = [v]
        while parent[out[-1]] is not None:
            out.append(parent[out[-1]])
        return out

    basis = []
    for u, v in g.edges:
        if (u, v) in tree:
            continue
        pu, pv = to_root(u), to_root(v)
        common = set(pu) & set(pv)
        lca = next(x for x in pu if x in common)
        down = pv[: pv.index(lca) + 1]  # v .. lca
        up = pu[: pu.index(lca)]  # u .. child of lca
        walk = [u] + down + list(reversed(up))
        cyc = cycle_from_walk(g, walk)
        if not in_kernel(g, cyc.vector):
            raise AssertionError(f"fundamental cycle of {(u, v)} not in ker B")
        basis.append(cyc)
    return basis


def shared_edges(a: OrientedCycle, b: OrientedCycle) -> int:
    return len(a.support & b.support)


def cycle_intersection_graph(cycles: Sequence[OrientedCycle]) -> tuple[Graph, dict[tuple[int, int], int]]:
    """Graph on cycle indices; ``i ~ j`` when the cycles share an edge."""
    if not cycles:
        raise CycleError("no cycles given")
    counts = {}
    edges = []
    for i, j in itertools.combinations(range(len(cycles)), 2):
        k = shared_edges(cycles[i], cycles[j])
        counts[(i, j)] = k
        if k:
            edges.append((i, j))
    return Graph.from_edges(len(cycles), edges), counts


@dataclass
class CycleForestCertificate:
    cycles: list[OrientedCycle]
    intersection: Graph
    shared: dict[tuple[int, int], int]
    leaf_selection: tuple[int, ...]
    h0: int
    h1: int
    bound: int
    optimal: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "cycles": [c.to_json() for c in self.cycles],
            "intersection_edges": [list(e) for e in self.intersection.edges],
            "leaf_selection": list(self.leaf_selection),
            "h0": self.h0,
            "h1": self.h1,
            "size": len(self.cycles),
            "bound": self.bound,
            "optimal": self.optimal,
        }


def cycle_forest_value(h0: int, h1: int, f_size: int, l_size: int) -> int:
    return h0 + h1 - f_size + l_size


def cycle_forest_bound(g: Graph, cycles: Sequence[OrientedCycle]) -> CycleForestCertificate:
    """Validate a cycle family and evaluate ``dim H0 + dim H1 - |F| + |L|``."""
    cycles = list(cycles)
    for i, c in enumerate(cycles):
        if len(c.vector) != g.m or not is_edge_simple_cycle(g, c.vector):
            raise CycleError(f"cycle {i} is not an edge-simple cycle of the graph")
    inter, counts = cycle_intersection_graph(cycles)
    for (i, j), k in sorted(counts.items()):
        if k > 1:
            raise CycleError(f"cycles {i} and {j} share {k} edges (at most one allowed)", (i, j))
    summary = is_forest(inter)
    if not summary.is_forest:
        raise CycleError("cycle intersection graph contains a cycle")
    if summary.isolated:
        i = summary.isolated[0]
        raise CycleError(f"cycle {i} shares no edge with the others: isolated vertex in the intersection forest", (i, i))
    sel = leaf_selection(InducedSubgraph(inter, inter.vertices()))
    h0, h1 = homology_dims(g)
    return CycleForestCertificate(
        cycles, inter, counts, sel, h0, h1, cycle_forest_value(h0, h1, len(cycles), len(sel))
    )


def candidate_cycles(g: Graph, pair_sums: bool = True, max_basis: int = 24) -> list[OrientedCycle]:
    """Fundamental cycles, plus edge-simple sums/differences of two of them."""
    basis = fundamental_cycle_basis(g)
    out = list(basis)
    seen = {c.vector for c in basis} | {tuple(-x for x in c.vector) for c in basis}
    if pair_sums and len(basis) <= max_basis:
        for a, b in itertools.combinations(basis, 2):
            for sign in (1, -1):
                vec = tuple(x + sign * y for x, y in zip(a.vector, b.vector))
                if vec in seen or not is_edge_simple_cycle(g, vec):
                    continue
                seen.add(vec)
                seen.add(tuple(-x for x in vec))
                out.append(OrientedCycle(vec, _euler_walk(g, vec)))
    return out


def search_cycle_forest(
    g: Graph, budget: SearchBudget | None = None, pair_sums: bool = True
) -> CycleForestCertificate | None:
    """Best cycle family among candidate cycles, or ``None`` if none is valid.

    Maximizes ``|F| - |L|`` over families whose cycles pairwise share at most
    one edge and whose intersection graph is a forest without isolated
    vertices.  The candidate pool is limited, so the result is optimal only
    relative to that pool.
    """
    budget = budget or SearchBudget()
    clock = _Clock(budget)
    cands = candidate_cycles(g, pair_sums)
    k = len(cands)
    if k < 2:
        return None
    share = [[shared_edges(cands[i], cands[j]) for j in range(k)] for i in range(k)]
    best: dict = {"gain": 0, "set": None}
    chosen: list[int] = []
    comp = list(range(k))

    def gain_of(sel: list[int]) -> int | None:
        deg = {i: sum(1 for j in sel if j != i and share[i][j]) for i in sel}
        if any(d == 0 for d in deg.values()):
            return None
        inter = Graph.from_edges(len(sel), [(a, b) for a in range(len(sel)) for b in range(a + 1, len(sel))
                                            if share[sel[a]][sel[b]]])
        comps = components(inter)
        leaves = sum(1 for d in deg.values() if d == 1)
        return len(sel) - leaves + len(comps)

    def rec(i: int) -> None:
        if not clock.tick():
            return
        if len(chosen) + (k - i) - 1 <= best["gain"]:
            return
        if i == k:
            if chosen:
                gv = gain_of(chosen)
                if gv is not None and gv > best["gain"]:
                    best["gain"], best["set"] = gv, list(chosen)
            return
        ok = all(share[i][j] <= 1 for j in chosen)
        if ok:
            roots = [comp[j] for j in chosen if share[i][j]]
            ok = len(roots) == len(set(roots))
        if ok:
            merged = set(roots)
            saved = comp[:]
            for j in range(k):
                if comp[j] in merged:
                    comp[j] = i
            comp[i] = i
            chosen.append(i)
            rec(i + 1)
            chosen.pop()
            comp[:] = saved
        rec(i + 1)

    rec(0)
    if best["set"] is None:
        return None
    cert = cycle_forest_bound(g, [cands[i] for i in best["set"]])
    cert.optimal = not clock.exhausted
    cert.extra = {"candidates": k, "nodes": clock.nodes, "pair_sums": pair_sums}
    return cert
