"""Text formats for graphs: edge lists, 0/1 adjacency matrices, family specs."""

from __future__ import annotations

import os
import re

from .graph import Graph, GraphError, build_family


def parse_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines; ``#`` starts a comment, ``n=<count>`` declares size.

    Vertex labels need not be integers.  Integer labels keep their value when
    every label is an integer; otherwise labels are numbered in order of first
    appearance.
    """
    declared_n = None
    pairs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"n\s*=\s*(\d+)", line)
        if m:
            declared_n = int(m.group(1))
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        pairs.append((parts[0], parts[1], lineno))

    labels = [p for a, b, _ in pairs for p in (a, b)]
    if all(re.fullmatch(r"\d+", s) for s in labels):
        index = {s: int(s) for s in labels}
        n = max(index.values(), default=-1) + 1
    else:
        index = {}
        for s in labels:
            index.setdefault(s, len(index))
        n = len(index)
    if declared_n is not None:
        if declared_n < n:
            raise GraphError(f"n={declared_n} but edges reference {n} vertices")
        n = declared_n
    if n == 0:
        raise GraphError("empty edge list without an n=<count> header")

    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for a, b, lineno in pairs:
        u, v = index[a], index[b]
        if u == v:
            raise GraphError(f"line {lineno}: self-loop at {a}")
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphError(f"line {lineno}: repeated edge {a} {b}")
        seen.add(e)
        edges.append(e)
    return Graph.from_edges(n, edges)


def parse_adjacency_matrix(text: str) -> Graph:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    n = len(rows)
    if n == 0:
        raise GraphError("empty adjacency matrix")
    for i, row in enumerate(rows, start=1):
        if len(row) != n or set(row) - {"0", "1"}:
            raise GraphError(f"line {i}: expected {n} characters of 0/1")
    edges = []
    for i in range(n):
        if rows[i][i] != "0":
            raise GraphError(f"line {i + 1}: nonzero diagonal")
        for j in range(i + 1, n):
            if rows[i][j] != rows[j][i]:
                raise GraphError(f"asymmetric entry at ({i}, {j})")
            if rows[i][j] == "1":
                edges.append((i, j))
    return Graph(n, tuple(edges))


def looks_like_matrix(text: str) -> bool:
    rows = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    return bool(rows) and all(re.fullmatch(r"[01]+", r) for r in rows)


def parse_graph_text(text: str) -> Graph:
    if looks_like_matrix(text):
        return parse_adjacency_matrix(text)
    return parse_edge_list(text)


def to_edge_list(g: Graph) -> str:
    lines = [f"n={g.n}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


_ALIASES = {
    "bipartite": "complete-bipartite",
    "kbip": "complete-bipartite",
    "cbt": "complete-binary-tree",
    "binary-tree": "complete-binary-tree",
    "er": "erdos-renyi",
    "gnp": "erdos-renyi",
    "k": "complete",
}


def parse_family_spec(spec: str) -> Graph:
    """``star:10``, ``grid:2x4``, ``er:12,0.3,seed=7``, ``petersen``."""
    name, _, rest = spec.strip().partition(":")
    kind = _ALIASES.get(name, name)
    if kind == "petersen":
        return build_family(kind)
    if not rest:
        raise GraphError(f"family spec {spec!r} needs parameters")
    try:
        if kind == "grid":
            r, c = rest.lower().split("x")
            return build_family(kind, int(r), int(c))
        if kind == "erdos-renyi":
            fields = rest.split(",")
            n, p = int(fields[0]), float(fields[1])
            seed = None
            for f in fields[2:]:
                key, _, val = f.partition("=")
                if key.strip() == "seed":
                    seed = int(val)
            if seed is None:
                raise GraphError(f"{spec!r}: erdos-renyi requires seed=<int>")
            return build_family(kind, n, p, seed)
        params = [int(x) for x in rest.split(",")]
    except (ValueError, IndexError) as exc:
        raise GraphError(f"malformed family spec {spec!r}") from exc
    return build_family(kind, *params)


def parse_graph(source: str) -> Graph:
    """Read a graph from a file path, falling back to a family spec."""
    if os.path.isfile(source):
        with open(source, encoding="utf-8") as fh:
            return parse_graph_text(fh.read())
    return parse_family_spec(source)
