"""Independent brute-force references used only by the tests."""

import itertools

import networkx as nx


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


def forest_bound_bruteforce(g, strong=False):
    """Minimum forest bound over every vertex subset, computed with networkx."""
    h = to_nx(g)
    best = g.n
    for k in range(1, g.n + 1):
        for s in itertools.combinations(range(g.n), k):
            sub = h.subgraph(s)
            if not nx.is_forest(sub):
                continue
            iso = [v for v in s if sub.degree(v) == 0]
            if iso and not strong:
                continue
            core = sub.subgraph([v for v in s if sub.degree(v) > 0])
            leaves = sum(1 for v in core if core.degree(v) == 1)
            comps = nx.number_connected_components(core) if len(core) else 0
            val = g.n - len(core) + leaves - comps - len(iso)
            best = min(best, val)
    return best


def alpha_bruteforce(g):
    h = to_nx(g)
    comp = nx.complement(h)
    return max(len(c) for c in nx.find_cliques(comp))


def longest_induced_path_nx(g):
    h = to_nx(g)
    best = 1
    for k in range(2, g.n + 1):
        hit = False
        for s in itertools.combinations(range(g.n), k):
            sub = h.subgraph(s)
            if sub.number_of_edges() == k - 1 and nx.is_connected(sub) and max(d for _, d in sub.degree) <= 2:
                hit = True
                break
        if not hit:
            break
        best = k
    return best


def has_induced_binary_tree(g, depth):
    """Whether the complete binary tree of the given depth is an induced subgraph."""
    tree = nx.balanced_tree(2, depth - 1)
    size = tree.number_of_nodes()
    h = to_nx(g)
    for s in itertools.combinations(range(g.n), size):
        sub = h.subgraph(s)
        if sub.number_of_edges() == size - 1 and nx.is_isomorphic(sub, tree):
            return True
    return False
