"""Induced-forest search for the forest bound, plus related exact searches.

The forest bound of an induced forest ``F`` without isolated vertices is
``|G| - |F| + l(F) - c(F)``; with strong compatibility an additional set
``Z`` of isolated forest vertices lowers it by ``|Z|``.  Writing a forest as
its components, the amount it removes from ``|G|`` is the *gain*
``sum_T (|T| - l(T) + 1)`` over non-trivial trees, plus ``|Z|`` in strong
mode.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable

from .graph import Graph, GraphError, InducedSubgraph, VertexSet, components, induced, is_forest

WEAK, STRONG = "weak", "strong"


@dataclass(frozen=True)
class SearchBudget:
    node_limit: int = 5_000_000
    time_limit: float = 60.0
    mode: str = "exact"

    def __post_init__(self) -> None:
        if self.node_limit <= 0 or self.time_limit <= 0:
            raise ValueError("budget limits must be positive")
        if self.mode not in ("exact", "heuristic"):
            raise ValueError(f"unknown search mode {self.mode!r}")


class _Clock:
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.nodes = 0
        self.deadline = time.monotonic() + budget.time_limit
        self.exhausted = False

    def tick(self) -> bool:
        self.nodes += 1
        if self.nodes > self.budget.node_limit or (self.nodes & 1023 == 0 and time.monotonic() > self.deadline):
            self.exhausted = True
        return not self.exhausted


@dataclass
class ForestCertificate:
    n: int
    forest: VertexSet
    leaf_selection: VertexSet
    isolated: VertexSet
    weak_bound: int
    strong_bound: int
    mode: str
    optimal: bool = True
    nodes: int = 0

    @property
    def bound(self) -> int:
        return self.strong_bound if self.mode == STRONG else self.weak_bound

    @property
    def core(self) -> VertexSet:
        """The forest without its isolated vertices."""
        iso = set(self.isolated)
        return tuple(v for v in self.forest if v not in iso)

    @property
    def epsilon_numerator(self) -> int:
        """``|F| - l(F) + c(F)`` for the non-isolated part."""
        return self.n - self.weak_bound

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mode": self.mode,
            "forest": list(self.forest),
            "leaf_selection": list(self.leaf_selection),
            "isolated": list(self.isolated),
            "weak_bound": self.weak_bound,
            "strong_bound": self.strong_bound,
            "bound": self.bound,
            "optimal": self.optimal,
        }


def leaf_selection(f: InducedSubgraph) -> VertexSet:
    """All leaves except the smallest-id one, per component with >= 2 vertices."""
    summary = is_forest(f)
    if not summary.is_forest:
        raise GraphError("leaf selection needs a forest")
    leaves = set(summary.leaves)
    out: list[int] = []
    for comp in components(f):
        if len(comp) >= 2:
            out.extend(sorted(leaves.intersection(comp))[1:])
    return tuple(sorted(out))


def certificate(g: Graph, vertices: Iterable[int], mode: str = WEAK, optimal: bool = True) -> ForestCertificate:
    """Build and validate a certificate for a given induced forest."""
    if mode not in (WEAK, STRONG):
        raise ValueError(f"mode must be weak or strong, got {mode!r}")
    f = induced(g, vertices)
    summary = is_forest(f)
    if not summary.is_forest:
        raise GraphError(f"{f.vertices} does not induce a forest")
    if mode == WEAK and summary.isolated:
        raise GraphError(f"weak certificate cannot contain isolated vertices {summary.isolated}")
    iso = set(summary.isolated)
    core = induced(g, [v for v in f.vertices if v not in iso])
    sel = leaf_selection(core)
    weak = g.n - len(core) + len(sel)
    return ForestCertificate(g.n, f.vertices, sel, summary.isolated, weak, weak - len(iso), mode, optimal)


def revalidate(g: Graph, cert: ForestCertificate) -> bool:
    """Recompute a certificate from scratch and compare every field."""
    fresh = certificate(g, cert.forest, cert.mode)
    core = induced(g, cert.core)
    s = is_forest(core)
    explicit = g.n - len(core) + len(s.leaves) - s.n_components if core.vertices else g.n
    return (
        fresh.leaf_selection == cert.leaf_selection
        and fresh.isolated == cert.isolated
        and fresh.weak_bound == cert.weak_bound == explicit
        and fresh.strong_bound == cert.strong_bound
    )


def forest_value(g: Graph, vertices: Iterable[int], mode: str) -> int | None:
    """Bound achieved by ``vertices`` or ``None`` if not admissible in ``mode``."""
    f = induced(g, vertices)
    s = is_forest(f)
    if not s.is_forest or (mode == WEAK and s.isolated):
        return None
    core_n = len(f) - len(s.isolated)
    core_c = s.n_components - len(s.isolated)
    weak = g.n - core_n + len(s.leaves) - core_c
    return weak - len(s.isolated) if mode == STRONG else weak


# --- exact branch and bound -----------------------------------------------


def _gain(g: Graph, members: list[int], comp: list[int], deg_in: list[int], mode: str) -> int | None:
    sizes: dict[int, int] = {}
    leaves: dict[int, int] = {}
    iso = 0
    for v in members:
        if deg_in[v] == 0:
            if mode == WEAK:
                return None
            iso += 1
            continue
        r = comp[v]
        sizes[r] = sizes.get(r, 0) + 1
        if deg_in[v] == 1:
            leaves[r] = leaves.get(r, 0) + 1
    return sum(sizes[r] - leaves[r] + 1 for r in sizes) + iso


def _exact_forest(g: Graph, mode: str, budget: SearchBudget) -> ForestCertificate:
    n = g.n
    adj = [sorted(a) for a in g.adjacency]
    clock = _Clock(budget)
    # best key: (bound, -size); vertex sets visited in lexicographic order
    best: dict = {"key": (n, 0), "set": ()}
    comp = list(range(n))
    deg_in = [0] * n
    members: list[int] = []
    in_set = [False] * n

    def addable(v: int) -> bool:
        roots = [comp[w] for w in adj[v] if in_set[w]]
        return len(roots) == len(set(roots))

    def rec(i: int) -> None:
        if not clock.tick():
            return
        remaining = sum(1 for v in range(i, n) if addable(v))
        size_ub = len(members) + remaining
        gain_ub = size_ub - 1 if (mode == WEAK and size_ub > 0) else size_ub
        if (n - gain_ub, -size_ub) >= best["key"]:
            return
        if i == n:
            gain = _gain(g, members, comp, deg_in, mode)
            if gain is not None:
                key = (n - gain, -len(members))
                if key < best["key"]:
                    best["key"], best["set"] = key, tuple(members)
            return
        if addable(i):
            nbrs = [w for w in adj[i] if in_set[w]]
            merged = {comp[w] for w in nbrs}
            saved = comp[:]
            for v in range(n):
                if comp[v] in merged:
                    comp[v] = i
            comp[i] = i
            for w in nbrs:
                deg_in[w] += 1
            deg_in[i] = len(nbrs)
            in_set[i] = True
            members.append(i)
            rec(i + 1)
            members.pop()
            in_set[i] = False
            deg_in[i] = 0
            for w in nbrs:
                deg_in[w] -= 1
            comp[:] = saved
        rec(i + 1)

    rec(0)
    cert = certificate(g, best["set"], mode, optimal=not clock.exhausted)
    cert.nodes = clock.nodes
    return cert


# --- heuristic ------------------------------------------------------------


def _degeneracy_order(g: Graph) -> list[int]:
    deg = g.degrees()
    alive = set(range(g.n))
    order = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        order.append(v)
        alive.remove(v)
        for w in g.adjacency[v]:
            if w in alive:
                deg[w] -= 1
    return order


def _admissible_value(g: Graph, s: set[int], mode: str) -> tuple[int, tuple[int, ...]]:
    """Value of ``s`` after dropping isolated vertices in weak mode."""
    f = induced(g, s)
    summ = is_forest(f)
    if mode == WEAK and summ.isolated:
        s = set(s) - set(summ.isolated)
    val = forest_value(g, s, mode)
    assert val is not None
    return val, tuple(sorted(s))


def greedy_forest(g: Graph, mode: str) -> tuple[int, ...]:
    chosen: set[int] = set()
    for v in _degeneracy_order(g):
        if is_forest(induced(g, chosen | {v})).is_forest:
            chosen.add(v)
    return _admissible_value(g, chosen, mode)[1]


def greedy_independent_set(g: Graph) -> tuple[int, ...]:
    """Minimum-degree greedy independent set."""
    alive = set(range(g.n))
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (len(g.adjacency[u] & alive), u))
        chosen.append(v)
        alive -= g.adjacency[v] | {v}
    return tuple(sorted(chosen))


def _heuristic_forest(g: Graph, mode: str, budget: SearchBudget) -> ForestCertificate:
    clock = _Clock(budget)
    starts = [set(greedy_forest(g, mode))]
    if mode == STRONG:
        # an independent set is all of Z; strong bound n - |Z|
        starts.append(set(greedy_independent_set(g)))
    best_val, best_set = None, ()
    for start in starts:
        val, cset = _local_search(g, start, mode, clock)
        if best_val is None or (val, -len(cset), cset) < (best_val, -len(best_set), best_set):
            best_val, best_set = val, cset
    cert = certificate(g, best_set, mode, optimal=False)
    cert.nodes = clock.nodes
    return cert


def _local_search(g: Graph, current: set[int], mode: str, clock: _Clock) -> tuple[int, tuple[int, ...]]:
    best_val, best_set = _admissible_value(g, current, mode)
    improved = True
    while improved and not clock.exhausted:
        improved = False
        outside = [v for v in range(g.n) if v not in current]
        moves: list[tuple[set[int], set[int]]] = [(set(), {v}) for v in outside]
        moves += [({u}, {v}) for u in sorted(current) for v in outside]
        moves += [
            ({u}, {v, w})
            for u in sorted(current)
            for i, v in enumerate(outside)
            for w in outside[i + 1 :]
        ]
        for drop, add in moves:
            if not clock.tick():
                break
            cand = (current - drop) | add
            if not is_forest(induced(g, cand)).is_forest:
                continue
            val, cset = _admissible_value(g, cand, mode)
            if (val, -len(cset), cset) < (best_val, -len(best_set), best_set):
                best_val, best_set = val, cset
                current = set(cand)
                improved = True
                break
    return best_val, best_set


def best_forest(g: Graph, mode: str = WEAK, budget: SearchBudget | None = None) -> ForestCertificate:
    """Induced forest minimizing the weak or strong forest bound.

    Exact mode is a branch and bound over include/exclude decisions in vertex
    order.  Ties prefer larger forests, then the lexicographically smallest
    vertex set.  An exhausted budget yields the best certificate found so far
    with ``optimal=False``.
    """
    if mode not in (WEAK, STRONG):
        raise ValueError(f"mode must be weak or strong, got {mode!r}")
    budget = budget or SearchBudget()
    if budget.mode == "exact":
        return _exact_forest(g, mode, budget)
    return _heuristic_forest(g, mode, budget)


# --- induced paths, binary trees, independent sets -------------------------


@dataclass
class SearchResult:
    value: int
    vertices: VertexSet
    optimal: bool = True
    nodes: int = 0
    extra: dict = field(default_factory=dict)


def longest_induced_path(g: Graph, budget: SearchBudget | None = None) -> SearchResult:
    """Longest induced path, length counted in vertices."""
    budget = budget or SearchBudget()
    clock = _Clock(budget)
    adj = g.adjacency
    best: list[int] = []
    path: list[int] = []
    on_path = [False] * g.n
    # number of path vertices adjacent to each vertex
    touch = [0] * g.n

    def push(v: int) -> None:
        path.append(v)
        on_path[v] = True
        for u in adj[v]:
            touch[u] += 1

    def pop() -> None:
        v = path.pop()
        on_path[v] = False
        for u in adj[v]:
            touch[u] -= 1

    def extend() -> None:
        if not clock.tick():
            return
        if len(path) > len(best):
            best[:] = path
        for w in sorted(adj[path[-1]]):
            if on_path[w] or touch[w] != 1:
                continue
            push(w)
            extend()
            pop()

    for s in range(g.n):
        push(s)
        extend()
        pop()
    verts = tuple(best)
    return SearchResult(len(verts), verts, not clock.exhausted, clock.nodes, {"order": verts})


def longest_induced_path_bruteforce(g: Graph) -> int:
    """Reference: the largest vertex subset inducing a path."""
    import itertools

    best = 1
    for k in range(2, g.n + 1):
        found = False
        for s in itertools.combinations(range(g.n), k):
            h = induced(g, s)
            if len(h.edges) == k - 1 and max(h.degree(v) for v in s) <= 2 and len(components(h)) == 1:
                found = True
                break
        if not found:
            break
        best = k
    return best


def largest_induced_complete_binary_tree(g: Graph, budget: SearchBudget | None = None) -> SearchResult:
    """Largest depth ``k`` such that ``T_{2,k}`` is an induced subgraph.

    Builds the tree level by level in heap order; each new vertex must be
    adjacent to its parent and to no other chosen vertex.
    """
    budget = budget or SearchBudget()
    clock = _Clock(budget)
    adj = g.adjacency

    def embed(depth: int) -> tuple[int, ...] | None:
        size = 2**depth - 1
        chosen: list[int] = []
        used = [False] * g.n

        def place(i: int) -> bool:
            if not clock.tick():
                return False
            if i == size:
                return True
            if i == 0:
                pool = range(g.n)
            else:
                parent = chosen[(i - 1) // 2]
                pool = sorted(adj[parent])
            for v in pool:
                if used[v]:
                    continue
                if i > 0 and (i % 2 == 0) and v < chosen[i - 1]:
                    continue  # sibling symmetry
                ok = all((u == chosen[(i - 1) // 2]) == (u in adj[v]) for u in chosen) if i else True
                if not ok:
                    continue
                used[v] = True
                chosen.append(v)
                if place(i + 1):
                    return True
                chosen.pop()
                used[v] = False
            return False

        return tuple(chosen) if place(0) else None

    best_depth, best_set = 1, (0,)
    depth = 2
    while 2**depth - 1 <= g.n:
        found = embed(depth)
        if found is None:
            break
        best_depth, best_set = depth, found
        depth += 1
    return SearchResult(best_depth, tuple(sorted(best_set)), not clock.exhausted, clock.nodes,
                        {"heap_order": best_set})


def max_independent_set(g: Graph, budget: SearchBudget | None = None) -> SearchResult:
    """Maximum independent set by bitmask branch and bound.

    When the node budget runs out the best set found is returned with
    ``optimal=False``; its size is then only a lower bound on alpha.
    """
    budget = budget or SearchBudget()
    clock = _Clock(budget)
    nbr = [0] * g.n
    for u, v in g.edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    # greedy seed so pruning starts tight
    seed_set = 0
    rest = (1 << g.n) - 1
    while rest:
        v = min((u for u in range(g.n) if rest >> u & 1), key=lambda u: (bin(nbr[u] & rest).count("1"), u))
        seed_set |= 1 << v
        rest &= ~(nbr[v] | (1 << v))
    best = [seed_set]

    def popcount(x: int) -> int:
        return bin(x).count("1")

    def rec(chosen: int, cand: int) -> None:
        if not clock.tick():
            return
        if cand == 0:
            if popcount(chosen) > popcount(best[0]):
                best[0] = chosen
            return
        if popcount(chosen) + popcount(cand) <= popcount(best[0]):
            return
        # branch on the candidate with the most candidate neighbors
        v = max((u for u in range(g.n) if cand >> u & 1), key=lambda u: (popcount(nbr[u] & cand), -u))
        if nbr[v] & cand == 0:
            rec(chosen | cand, 0)
            return
        rec(chosen | (1 << v), cand & ~nbr[v] & ~(1 << v))
        rec(chosen, cand & ~(1 << v))

    rec(0, (1 << g.n) - 1)
    verts = tuple(v for v in range(g.n) if best[0] >> v & 1)
    return SearchResult(len(verts), verts, not clock.exhausted, clock.nodes)
