"""Brute-force finite determinacy on explicit finite relation sets.

A :class:`FiniteRelationSet` is a finite ``X`` inside a product of small
finite domains.  ``measure_determinacy(X, A, B)`` returns the exact uniform
bound: over every assignment ``c`` on ``A`` the number of distinct
``B``-projections of points of ``X`` that agree with ``c``.  Assignments not
realized by ``X`` contribute zero, so the maximum runs over realized ones.
"""

from __future__ import annotations

import itertools
import json
import random
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .graph import Graph, GraphError, InducedSubgraph, VertexSet, components, is_forest

MAX_DOMAIN = 8
MAX_INDICES = 16
MAX_POINTS = 100_000


class CapacityError(OverflowError):
    """Instance exceeds the desk-scale caps of the brute-force oracle."""


class HypothesisError(ValueError):
    def __init__(self, message: str, pair: tuple[int, int] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class FiniteRelationSet:
    domains: tuple[tuple[int, ...], ...]
    points: frozenset[tuple[int, ...]]

    def __post_init__(self) -> None:
        k = len(self.domains)
        if k > MAX_INDICES:
            raise CapacityError(f"{k} indices exceeds cap {MAX_INDICES}")
        for i, dom in enumerate(self.domains):
            if len(dom) > MAX_DOMAIN:
                raise CapacityError(f"domain {i} has {len(dom)} values, cap {MAX_DOMAIN}")
            if len(set(dom)) != len(dom):
                raise ValueError(f"domain {i} has repeated values")
        if len(self.points) > MAX_POINTS:
            raise CapacityError(f"{len(self.points)} points exceeds cap {MAX_POINTS}")
        doms = [set(d) for d in self.domains]
        for p in self.points:
            if len(p) != k:
                raise ValueError(f"point {p} has {len(p)} coordinates, expected {k}")
            for i, x in enumerate(p):
                if x not in doms[i]:
                    raise ValueError(f"point {p}: value {x} outside domain {i}")

    @classmethod
    def build(cls, domains: Iterable[Iterable[int]], points: Iterable[Iterable[int]]) -> "FiniteRelationSet":
        return cls(tuple(tuple(d) for d in domains), frozenset(tuple(p) for p in points))

    @classmethod
    def full_product(cls, domains: Iterable[Iterable[int]]) -> "FiniteRelationSet":
        doms = tuple(tuple(d) for d in domains)
        return cls(doms, frozenset(itertools.product(*doms)))

    @property
    def size(self) -> int:
        return len(self.domains)

    def indices(self) -> VertexSet:
        return tuple(range(self.size))

    def to_json(self) -> dict:
        return {"domains": [list(d) for d in self.domains], "points": sorted(list(p) for p in self.points)}

    @classmethod
    def from_json(cls, data: Mapping) -> "FiniteRelationSet":
        return cls.build(data["domains"], data["points"])

    @classmethod
    def loads(cls, text: str) -> "FiniteRelationSet":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class DeterminacyQuery:
    a: VertexSet
    b: VertexSet
    measured_d: int
    witness: tuple[int, ...] | None = None


def _check_subset(x: FiniteRelationSet, s: Iterable[int]) -> VertexSet:
    out = tuple(sorted(set(s)))
    for i in out:
        if not 0 <= i < x.size:
            raise ValueError(f"index {i} outside 0..{x.size - 1}")
    return out


def fibers(x: FiniteRelationSet, a: Sequence[int], b: Sequence[int]) -> dict[tuple, set[tuple]]:
    """Map each realized ``A``-assignment to its set of ``B``-projections."""
    out: dict[tuple, set[tuple]] = defaultdict(set)
    for p in x.points:
        out[tuple(p[i] for i in a)].add(tuple(p[i] for i in b))
    return out


def measure_determinacy(x: FiniteRelationSet, a: Iterable[int], b: Iterable[int]) -> DeterminacyQuery:
    a = _check_subset(x, a)
    b = _check_subset(x, b)
    best, witness = 0, None
    for c, projections in sorted(fibers(x, a, b).items()):
        if len(projections) > best:
            best, witness = len(projections), c
    return DeterminacyQuery(a, b, best, witness)


def degree(x: FiniteRelationSet, a: Iterable[int], b: Iterable[int]) -> int:
    return measure_determinacy(x, a, b).measured_d


# --- compatibility --------------------------------------------------------


@dataclass
class CompatibilityCertificate:
    graph: Graph
    pair_degrees: dict[tuple[int, int], int]
    strong_degrees: dict[int, int]
    d: int
    strong_d: int
    strong: bool = True

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "strong_d": self.strong_d,
            "strong": self.strong,
            "pair_degrees": [[v, w, k] for (v, w), k in sorted(self.pair_degrees.items())],
            "strong_degrees": [[v, k] for v, k in sorted(self.strong_degrees.items())],
        }


def certify_compatibility(x: FiniteRelationSet, g: Graph) -> CompatibilityCertificate:
    """Minimal ``d`` for which ``X`` is (strongly) ``d``-compatible with ``g``.

    A finite ``X`` is always strongly compatible for some ``d``, so the
    strong flag is always set; ``strong_d`` may exceed ``d``.
    """
    if x.size != g.n:
        raise GraphError(f"relation has {x.size} indices but graph has {g.n} vertices")
    pairs: dict[tuple[int, int], int] = {}
    strong: dict[int, int] = {}
    for v in range(g.n):
        nbrs = g.adjacency[v]
        for w in sorted(nbrs):
            pairs[(v, w)] = degree(x, (nbrs - {w}) | {v}, (w,))
        strong[v] = degree(x, nbrs, (v,))
    d = max(pairs.values(), default=0)
    strong_d = max(d, max(strong.values(), default=0))
    return CompatibilityCertificate(g, pairs, strong, d, strong_d)


def relative_restrict(
    x: FiniteRelationSet, assignment: Mapping[int, int]
) -> tuple[FiniteRelationSet, VertexSet]:
    """Section of ``X`` over a fixed partial assignment, projected to the rest.

    Returns the section together with the original ids of its indices.
    """
    fixed = dict(assignment)
    for i, val in fixed.items():
        if not 0 <= i < x.size or val not in x.domains[i]:
            raise ValueError(f"assignment {i}={val} outside the domains")
    keep = tuple(i for i in range(x.size) if i not in fixed)
    pts = {
        tuple(p[i] for i in keep)
        for p in x.points
        if all(p[i] == val for i, val in fixed.items())
    }
    return FiniteRelationSet(tuple(x.domains[i] for i in keep), frozenset(pts)), keep


# --- tree orders and the propagation procedure ----------------------------


@dataclass(frozen=True)
class TreeOrder:
    """Rooted tree on ``carrier``; ``parent[v]`` is the immediate predecessor."""

    carrier: VertexSet
    parent: Mapping[int, int | None]
    root: int

    def __post_init__(self) -> None:
        roots = [v for v in self.carrier if self.parent.get(v) is None]
        if roots != [self.root]:
            raise ValueError(f"tree order needs exactly one minimal element, got {roots}")
        for v in self.carrier:
            seen = set()
            u = v
            while u is not None:
                if u in seen:
                    raise ValueError(f"parent map has a cycle through {u}")
                seen.add(u)
                u = self.parent[u]

    def children(self, v: int) -> VertexSet:
        return tuple(sorted(w for w in self.carrier if self.parent.get(w) == v))

    def above(self, v: int) -> VertexSet:
        """All strict successors of ``v``."""
        out, stack = [], list(self.children(v))
        while stack:
            w = stack.pop()
            out.append(w)
            stack.extend(self.children(w))
        return tuple(sorted(out))

    @property
    def maximal(self) -> VertexSet:
        return tuple(v for v in self.carrier if not self.children(v))

    def height(self, v: int) -> int:
        """Length of the longest successor chain from ``v`` to a maximal element."""
        kids = self.children(v)
        return 0 if not kids else 1 + max(self.height(w) for w in kids)

    @classmethod
    def rooted(cls, g: Graph | InducedSubgraph, carrier: Iterable[int], root: int) -> "TreeOrder":
        """Tree order of a tree-shaped vertex set, rooted at ``root``."""
        carrier = tuple(sorted(carrier))
        members = set(carrier)
        adj = g.adjacency if isinstance(g, Graph) else g.parent.adjacency
        parent: dict[int, int | None] = {root: None}
        queue = [root]
        for v in queue:
            for w in sorted(adj[v] & members):
                if w not in parent:
                    parent[w] = v
                    queue.append(w)
        if len(parent) != len(carrier):
            raise ValueError("carrier is not connected")
        return cls(carrier, parent, root)


@dataclass
class PropagationResult:
    completions: list[tuple[int, ...]]
    order: VertexSet
    free: VertexSet
    d: int
    enumerated: int
    hypothesis_degrees: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def bound(self) -> int:
        return self.d ** len(self.free)


def tree_propagate(
    x: FiniteRelationSet,
    order: TreeOrder,
    fixed: Mapping[int, int],
    d: int | None = None,
) -> PropagationResult:
    """Enumerate completions on ``T \\ M`` by sweeping the tree towards the root.

    Indices outside the carrier are treated as context: they must be fixed
    along with the maximal set ``M``.  The hypothesis
    ``x_{{w} ∪ T_{>w}} ->^d x_v`` (relative to the context) is measured for
    every non-maximal ``v`` and immediate successor ``w``; when ``d`` is given
    any larger degree raises :class:`HypothesisError`.

    Vertices are assigned in order of increasing height, so every successor
    of ``v`` is already assigned when ``v`` is reached.  Each step keeps only
    the at most ``d`` values compatible with the assigned successor subtree,
    then the final candidates are filtered by membership in ``X``.
    """
    carrier = set(order.carrier)
    context = tuple(i for i in range(x.size) if i not in carrier)
    maximal = order.maximal
    need = set(maximal) | set(context)
    if set(fixed) != need:
        raise ValueError(f"fixed assignment must cover exactly {sorted(need)}")
    free = tuple(sorted(v for v in order.carrier if v not in set(maximal)))
    sweep = tuple(sorted(free, key=lambda v: (order.height(v), v)))

    hyp: dict[tuple[int, int], int] = {}
    for v in free:
        for w in order.children(v):
            hyp[(v, w)] = degree(x, (w, *order.above(w), *context), (v,))
    measured = max(hyp.values(), default=0)
    if d is None:
        d = measured
    else:
        bad = [(pair, k) for pair, k in sorted(hyp.items()) if k > d]
        if bad:
            (v, w), k = bad[0]
            raise HypothesisError(f"hypothesis fails at ({v}, {w}): degree {k} > {d}", (v, w))

    partial: list[dict[int, int]] = [dict(fixed)]
    for v in sweep:
        w = order.children(v)[0]
        known = (w, *order.above(w), *context)
        lookup = fibers(x, known, (v,))
        nxt = []
        for assign in partial:
            key = tuple(assign[i] for i in known)
            for (val,) in sorted(lookup.get(key, ())):
                nxt.append({**assign, v: val})
        partial = nxt
    enumerated = len(partial)
    completions = sorted(
        tuple(a[v] for v in free)
        for a in partial
        if tuple(a[i] for i in range(x.size)) in x.points
    )
    return PropagationResult(completions, sweep, free, d, enumerated, hyp)


def brute_force_completions(x: FiniteRelationSet, fixed: Mapping[int, int], free: Sequence[int]) -> list[tuple[int, ...]]:
    return sorted(
        {
            tuple(p[v] for v in free)
            for p in x.points
            if all(p[i] == val for i, val in fixed.items())
        }
    )


# --- forest check ---------------------------------------------------------


class LeafSelectionError(ValueError):
    pass


def validate_leaf_selection(f: InducedSubgraph, l: Iterable[int]) -> VertexSet:
    """Each non-trivial component must contribute all of its leaves but one."""
    l = tuple(sorted(set(l)))
    summary = is_forest(f)
    if not summary.is_forest:
        raise LeafSelectionError("vertex set does not induce a forest")
    leaves = set(summary.leaves)
    chosen = set(l)
    if not chosen <= leaves:
        raise LeafSelectionError(f"{sorted(chosen - leaves)} are not leaves of the forest")
    for comp in components(f):
        if len(comp) < 2:
            continue
        comp_leaves = leaves.intersection(comp)
        picked = chosen.intersection(comp)
        if len(picked) != len(comp_leaves) - 1:
            raise LeafSelectionError(
                f"component {comp}: selected {len(picked)} of {len(comp_leaves)} leaves, need all but one"
            )
    return l


@dataclass
class ForestCheck:
    passed: bool
    measured: int
    bound: int
    d: int
    determined: VertexSet
    given: VertexSet
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "measured": self.measured,
            "bound": self.bound,
            "d": self.d,
            "given": list(self.given),
            "determined": list(self.determined),
            "witness": None if self.witness is None else list(self.witness),
        }


def forest_determinacy_check(
    x: FiniteRelationSet,
    g: Graph,
    f: InducedSubgraph,
    l: Iterable[int],
    strong: bool = False,
    certificate: CompatibilityCertificate | None = None,
) -> ForestCheck:
    """Measure ``x_{L ∪ (G\\F)} -> x_{F\\L}`` against ``d^{|F\\L|}``."""
    l = validate_leaf_selection(f, l)
    if is_forest(f).isolated and not strong:
        raise LeafSelectionError("forest has isolated vertices; pass strong=True to use strong compatibility")
    cert = certificate or certify_compatibility(x, g)
    d = cert.strong_d if strong else cert.d
    in_f = set(f.vertices)
    determined = tuple(v for v in f.vertices if v not in set(l))
    given = tuple(sorted(set(l) | {v for v in range(g.n) if v not in in_f}))
    q = measure_determinacy(x, given, determined)
    bound = d ** len(determined)
    return ForestCheck(q.measured_d <= bound, q.measured_d, bound, d, determined, given,
                       None if q.measured_d <= bound else q.witness)


def all_leaf_selections(f: InducedSubgraph) -> list[VertexSet]:
    """Every way of omitting one leaf per non-trivial component."""
    leaves = set(is_forest(f).leaves)
    per_comp = []
    for comp in components(f):
        if len(comp) < 2:
            continue
        cl = sorted(leaves.intersection(comp))
        per_comp.append([tuple(x for x in cl if x != skip) for skip in cl])
    return [tuple(sorted(itertools.chain.from_iterable(c))) for c in itertools.product(*per_comp)]


# --- algebra suite --------------------------------------------------------


@dataclass
class AlgebraViolation:
    prop: str
    sets: dict[str, VertexSet]
    lhs: int
    rhs: int


@dataclass
class AlgebraReport:
    checks: int = 0
    violations: list[AlgebraViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _random_subset(rng: random.Random, k: int) -> VertexSet:
    return tuple(i for i in range(k) if rng.random() < 0.5)


def algebra_suite(x: FiniteRelationSet, samples: int = 20, seed: int = 0) -> AlgebraReport:
    """Check idempotence, monotonicity, conjunction, transitivity, substitution."""
    rng = random.Random(seed)
    rep = AlgebraReport()
    k = x.size

    def check(name: str, lhs: int, rhs: int, **sets: VertexSet) -> None:
        rep.checks += 1
        if lhs > rhs:
            rep.violations.append(AlgebraViolation(name, sets, lhs, rhs))

    for _ in range(samples):
        a, b, c, d = (_random_subset(rng, k) for _ in range(4))
        a_plus = tuple(sorted(set(a) | set(_random_subset(rng, k))))
        check("idempotence", degree(x, a, a), 1, A=a)
        check("monotonicity", degree(x, a_plus, c), degree(x, a, c), A=a, A_plus=a_plus, C=c)
        check("conjunction", degree(x, a, set(b) | set(c)), degree(x, a, b) * degree(x, a, c), A=a, B=b, C=c)
        check("transitivity", degree(x, a, c), degree(x, a, b) * degree(x, b, c), A=a, B=b, C=c)
        sub = (set(c) - set(b)) | set(a)
        check("substitution", degree(x, sub, d), degree(x, a, b) * degree(x, c, d), A=a, B=b, C=c, D=d)
    return rep


# --- generators -----------------------------------------------------------


def random_relation_set(
    n: int, rng: random.Random, max_domain: int = 4, max_points: int = 200
) -> FiniteRelationSet:
    """Random subset of a random product of small domains."""
    domains = [tuple(range(rng.randint(1, max_domain))) for _ in range(n)]
    total = 1
    for dom in domains:
        total *= len(dom)
    target = rng.randint(0, min(max_points, total))
    if total <= 4 * max_points:
        pts = rng.sample(list(itertools.product(*domains)), target)
    else:
        seen: set[tuple[int, ...]] = set()
        while len(seen) < target:
            seen.add(tuple(rng.choice(dom) for dom in domains))
        pts = list(seen)
    return FiniteRelationSet.build(domains, pts)


def graph_relation_set(g: Graph, rng: random.Random, max_domain: int = 4, max_points: int = 200) -> FiniteRelationSet:
    """Random relation set sized to ``g``'s vertex set."""
    return random_relation_set(g.n, rng, max_domain, max_points)
