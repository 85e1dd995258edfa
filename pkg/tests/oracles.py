"""Independent reference implementations used by the test-suite.

These deliberately avoid the package's counting code: paths are enumerated
one by one and classified from the definitions.
"""

from __future__ import annotations

import math

from hypothesis import strategies as st

from graphent.graph import Edge, FiniteGraph, build_finite


def fibonacci() -> FiniteGraph:
    return build_finite(["a", "b"], [Edge("e1", "a", "a"), Edge("e2", "a", "b"), Edge("e3", "b", "a")])


def two_cycle() -> FiniteGraph:
    return build_finite(["a", "b"], [Edge("e1", "a", "b"), Edge("e2", "b", "a")])


def bouquet(m: int) -> FiniteGraph:
    return build_finite(["v"], [Edge(f"e{i + 1}", "v", "v") for i in range(m)])


def ray(n: int) -> FiniteGraph:
    return build_finite([str(i) for i in range(n + 1)], [Edge(f"e{i + 1}", str(i), str(i + 1)) for i in range(n)])


def edge_paths(g: FiniteGraph, n: int):
    """Every path with ``n`` edges, as a tuple of :class:`Edge`."""
    if n == 0:
        return [()]
    out = []

    def rec(path):
        if len(path) == n:
            out.append(tuple(path))
            return
        for e in g.out_edges(path[-1].dst):
            path.append(e)
            rec(path)
            path.pop()

    for e in g.edges:
        rec([e])
    return out


def in_class(path, v, cls: str, start=None) -> bool:
    """Classify a path (tuple of edges; ``start`` for the empty path)."""
    if not path:
        return start == v
    s, r = path[0].src, path[-1].dst
    verts = [s] + [e.dst for e in path]
    if cls == "through":
        return v in verts
    if cls == "source":
        return s == v
    if cls == "range":
        return r == v
    if cls == "loop":
        return s == v and r == v
    if cls == "source-star":
        return s == v and all(e.dst != v for e in path)
    if cls == "range-star":
        return r == v and all(e.src != v for e in path)
    raise ValueError(cls)


def brute_counts(g: FiniteGraph, v, cls: str, n_max: int) -> list[int]:
    counts = [1]
    for n in range(1, n_max + 1):
        counts.append(sum(1 for p in edge_paths(g, n) if in_class(p, v, cls)))
    return counts


def brute_first_return(g: FiniteGraph, v, n_max: int) -> list[int]:
    """First-return loop counts by depth-first search over edges from ``v``."""
    out = [0] * (n_max + 1)

    def rec(u, depth):
        for e in g.out_edges(u):
            if e.dst == v:
                out[depth + 1] += 1
            elif depth + 1 < n_max:
                rec(e.dst, depth + 1)

    if n_max:
        rec(v, 0)
    return out


def walk_first_return(g: FiniteGraph, v, n_max: int) -> list[int]:
    """First-return counts from vertex sequences weighted by multiplicity."""
    mult: dict = {}
    for e in g.edges:
        mult[(e.src, e.dst)] = mult.get((e.src, e.dst), 0) + 1
    succ: dict = {}
    for a, b in mult:
        succ.setdefault(a, []).append(b)
    out = [0] * (n_max + 1)

    def rec(u, depth, weight):
        for w in succ.get(u, ()):
            m = weight * mult[(u, w)]
            if w == v:
                out[depth + 1] += m
            elif depth + 1 < n_max:
                rec(w, depth + 1, m)

    if n_max:
        rec(v, 0, 1)
    return out


def brute_through_set(g: FiniteGraph, vset, n: int) -> int:
    vset = set(vset)
    if n == 0:
        return len(vset & set(g.vertices))
    return sum(1 for p in edge_paths(g, n) if vset & ({p[0].src} | {e.dst for e in p}))


def vertex_walk_counts(g: FiniteGraph, v, cls: str, n_max: int) -> list[int]:
    """Count by enumerating vertex sequences and multiplying edge multiplicities.

    Supports every class except ``through``.  Handles graphs with many
    parallel edges, where edge-level enumeration would be too slow.
    """
    mult: dict = {}
    for e in g.edges:
        mult[(e.src, e.dst)] = mult.get((e.src, e.dst), 0) + 1
    succ: dict = {}
    for (a, b) in mult:
        succ.setdefault(a, []).append(b)
    pred: dict = {}
    for (a, b) in mult:
        pred.setdefault(b, []).append(a)
    counts = [1] + [0] * n_max

    forward = cls in ("source", "source-star", "loop")

    def rec(seq, weight):
        n = len(seq) - 1
        if n >= 1:
            if cls != "loop" or seq[-1] == v:
                counts[n] += weight
        if n == n_max:
            return
        nbrs = succ.get(seq[-1], ()) if forward else pred.get(seq[-1], ())
        for w in nbrs:
            if cls in ("source-star", "range-star") and w == v:
                continue
            m = mult[(seq[-1], w)] if forward else mult[(w, seq[-1])]
            rec(seq + [w], weight * m)

    rec([v], 1)
    return counts


def e28_range_star_formula(k: int) -> int:
    """``1 + 8^(k-1) + 8^(k-4) + ...`` over nonnegative exponents."""
    return 1 + sum(8 ** (k - 1 - 3 * i) for i in range(k) if k - 1 - 3 * i >= 0)


def golden_log() -> float:
    return math.log((1 + math.sqrt(5)) / 2)


def edge_matrix_oracle(g: FiniteGraph):
    """Dense edge matrix built entry by entry from the definition."""
    return [[1 if e.dst == f.src else 0 for f in g.edges] for e in g.edges]



@st.composite
def finite_graphs(draw, max_vertices=4, max_edges=7):
    n = draw(st.integers(1, max_vertices))
    labels = [f"v{i}" for i in range(n)]
    m = draw(st.integers(0, max_edges))
    pairs = draw(st.lists(st.tuples(st.sampled_from(labels), st.sampled_from(labels)), min_size=m, max_size=m))
    return build_finite(labels, [Edge(f"e{i + 1}", a, b) for i, (a, b) in enumerate(pairs)])
