"""Directed multigraphs: finite graphs, oracle-backed infinite graphs and
finite windows cut out of them.

Vertex and edge identifiers are arbitrary hashable labels (strings in
practice).  Internally a :class:`FiniteGraph` interns them to dense integers
so that the counting code can index plain lists.
"""

from __future__ import annotations

import os
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Hashable, Iterable, NamedTuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    DanglingEndpoint,
    DuplicateEdgeId,
    LocalFinitenessViolation,
    OracleInconsistency,
    ParseError,
    WindowTooSmall,
)

DEFAULT_MAX_DEGREE = 10**6

_DIGITS = re.compile(r"(\d+)")


def natural_key(label) -> tuple:
    """Sort key that orders ``e2`` before ``e10``."""
    parts = _DIGITS.split(str(label))
    return tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p != "")


class Edge(NamedTuple):
    id: Hashable
    src: Hashable
    dst: Hashable


class FiniteGraph:
    """Immutable finite directed multigraph.

    ``vertices`` and ``edges`` keep the order they were given in; equality
    compares both sequences.
    """

    __slots__ = ("vertices", "edges", "index", "src", "dst", "_out", "_in", "_arcs_out", "_arcs_in")

    def __init__(self, vertices: Iterable[Hashable], edges: Iterable[Edge]):
        verts = tuple(dict.fromkeys(vertices))
        index = {v: i for i, v in enumerate(verts)}
        es = tuple(Edge(*e) for e in edges)
        seen = set()
        for e in es:
            if e.id in seen:
                raise DuplicateEdgeId(f"edge id {e.id!r} used twice")
            seen.add(e.id)
            for end in (e.src, e.dst):
                if end not in index:
                    raise DanglingEndpoint(f"edge {e.id!r} references unknown vertex {end!r}")
        self.vertices = verts
        self.edges = es
        self.index = index
        self.src = tuple(index[e.src] for e in es)
        self.dst = tuple(index[e.dst] for e in es)
        out = [[] for _ in verts]
        inn = [[] for _ in verts]
        for k, (s, d) in enumerate(zip(self.src, self.dst)):
            out[s].append(k)
            inn[d].append(k)
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inn)
        self._arcs_out = None
        self._arcs_in = None

    def __len__(self) -> int:
        return len(self.vertices)

    def __eq__(self, other) -> bool:
        # same vertex set and edge set; listing order is ignored
        if not isinstance(other, FiniteGraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and set(self.edges) == set(other.edges)

    def __hash__(self) -> int:
        return hash((frozenset(self.vertices), frozenset(self.edges)))

    def __repr__(self) -> str:
        return f"FiniteGraph({len(self.vertices)} vertices, {len(self.edges)} edges)"

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def out_edges(self, v) -> list[Edge]:
        return [self.edges[k] for k in self._out[self.index[v]]]

    def in_edges(self, v) -> list[Edge]:
        return [self.edges[k] for k in self._in[self.index[v]]]

    def out_indices(self, i: int) -> tuple[int, ...]:
        return self._out[i]

    def in_indices(self, i: int) -> tuple[int, ...]:
        return self._in[i]

    def out_degree(self, v) -> int:
        return len(self._out[self.index[v]])

    def in_degree(self, v) -> int:
        return len(self._in[self.index[v]])

    def arcs_out(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per-vertex ``(target, multiplicity)`` lists with parallel edges merged."""
        if self._arcs_out is None:
            self._arcs_out = _merge_arcs(len(self.vertices), self.src, self.dst)
        return self._arcs_out

    def arcs_in(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        if self._arcs_in is None:
            self._arcs_in = _merge_arcs(len(self.vertices), self.dst, self.src)
        return self._arcs_in

    def adjacency(self) -> sp.csr_matrix:
        """Vertex adjacency matrix with edge multiplicities as entries."""
        n = len(self.vertices)
        data = np.ones(len(self.edges), dtype=np.int64)
        return sp.csr_matrix((data, (self.src, self.dst)), shape=(n, n))

    def subgraph(self, keep: Iterable[Hashable]) -> "FiniteGraph":
        """Induced subgraph on ``keep``; vertex and edge order follow ``self``."""
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        edges = [e for e in self.edges if e.src in keep and e.dst in keep]
        return FiniteGraph(verts, edges)


def _merge_arcs(n, heads, tails):
    rows: list[dict[int, int]] = [dict() for _ in range(n)]
    for a, b in zip(heads, tails):
        rows[a][b] = rows[a].get(b, 0) + 1
    return tuple(tuple(r.items()) for r in rows)


def build_finite(vertices: Iterable[Hashable], edges: Iterable) -> FiniteGraph:
    """Validate and build a finite graph; edge order is preserved."""
    return FiniteGraph(vertices, edges)


def transpose(g: FiniteGraph) -> FiniteGraph:
    """The same graph with every edge reversed (ids are kept)."""
    return FiniteGraph(g.vertices, (Edge(e.id, e.dst, e.src) for e in g.edges))


def strongly_connected_labels(g: FiniteGraph) -> np.ndarray:
    n = len(g.vertices)
    if n == 0:
        return np.zeros(0, dtype=np.int32)
    _, labels = connected_components(g.adjacency(), directed=True, connection="strong")
    return labels


def is_irreducible(g: FiniteGraph) -> bool:
    """True iff ``g`` is strongly connected and carries at least one edge.

    A lone vertex without a self-loop has no loop and is not counted as
    irreducible.
    """
    if len(g.vertices) == 0 or g.n_edges == 0:
        return False
    labels = strongly_connected_labels(g)
    return bool(np.all(labels == labels[0]))


def has_cycle(g: FiniteGraph) -> bool:
    if g.n_edges == 0:
        return False
    if any(s == d for s, d in zip(g.src, g.dst)):
        return True
    labels = strongly_connected_labels(g)
    return len(np.unique(labels)) < len(g.vertices)


def reach(g: FiniteGraph, start, forward: bool = True) -> set:
    """Labels of all vertices reachable from ``start`` (including itself)."""
    arcs = g.arcs_out() if forward else g.arcs_in()
    s = g.index[start]
    seen = {s}
    todo = [s]
    while todo:
        u = todo.pop()
        for w, _ in arcs[u]:
            if w not in seen:
                seen.add(w)
                todo.append(w)
    return {g.vertices[i] for i in seen}


def component_of(g: FiniteGraph, v) -> FiniteGraph:
    """Induced subgraph on the strongly connected component containing ``v``."""
    return g.subgraph(reach(g, v, True) & reach(g, v, False))


def shortest_path_length(g: FiniteGraph, a, b) -> int | None:
    """Edge count of a shortest path from ``a`` to ``b``; 0 if ``a == b``, ``None`` if unreachable."""
    if a == b:
        return 0
    arcs = g.arcs_out()
    dist = {g.index[a]: 0}
    q = deque([g.index[a]])
    target = g.index[b]
    while q:
        u = q.popleft()
        for w, _ in arcs[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                if w == target:
                    return dist[w]
                q.append(w)
    return None


@dataclass(frozen=True)
class EdgeMatrix:
    """0/1 matrix over edges with ``A[e, f] = 1`` iff ``r(e) == s(f)``."""

    edge_ids: tuple
    matrix: sp.csr_matrix

    @property
    def dim(self) -> int:
        return len(self.edge_ids)

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def successors(self, edge_id) -> list:
        i = self.edge_ids.index(edge_id)
        row = self.matrix.getrow(i)
        return [self.edge_ids[j] for j in sorted(row.indices)]


def edge_matrix(g: FiniteGraph) -> EdgeMatrix:
    rows, cols = [], []
    for w in range(len(g.vertices)):
        ins, outs = g.in_indices(w), g.out_indices(w)
        for e in ins:
            for f in outs:
                rows.append(e)
                cols.append(f)
    m = g.n_edges
    mat = sp.csr_matrix(
        (np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(m, m)
    )
    return EdgeMatrix(tuple(e.id for e in g.edges), mat)


# --------------------------------------------------------------------------
# oracles and windows


class GraphOracle:
    """A locally finite, possibly infinite graph given by neighbour queries.

    Subclasses implement :meth:`out_edges` and :meth:`in_edges`.  Both must be
    deterministic.  ``asserted`` holds structural facts known from the
    construction (``"irreducible"``, ``"locally_finite"``); they are never
    verified by computation.
    """

    root: Hashable = None
    asserted: frozenset = frozenset()

    def out_edges(self, v) -> list[Edge]:
        raise NotImplementedError

    def in_edges(self, v) -> list[Edge]:
        raise NotImplementedError


class FiniteGraphOracle(GraphOracle):
    def __init__(self, graph: FiniteGraph, root=None):
        self.graph = graph
        self.root = graph.vertices[0] if root is None and graph.vertices else root
        flags = {"locally_finite"}
        if is_irreducible(graph):
            flags.add("irreducible")
        self.asserted = frozenset(flags)

    def out_edges(self, v):
        return self.graph.out_edges(v)

    def in_edges(self, v):
        return self.graph.in_edges(v)


@dataclass(frozen=True)
class GraphWindow:
    """Finite induced piece of a graph around ``base``.

    ``graph`` contains every vertex within forward or backward distance
    ``radius`` of the base together with all edges between such vertices.
    ``incomplete_in``/``incomplete_out`` list the window vertices whose
    in-/out-edges are not all present; ``closed`` means there are none, in
    which case counts are exact for every length.
    """

    base: frozenset
    radius: int
    graph: FiniteGraph
    boundary: frozenset
    dist_forward: dict = field(repr=False, compare=False)
    dist_backward: dict = field(repr=False, compare=False)
    incomplete_in: frozenset = frozenset()
    incomplete_out: frozenset = frozenset()
    asserted: frozenset = frozenset()

    @property
    def closed(self) -> bool:
        return not self.incomplete_in and not self.incomplete_out

    def covers(self, n: int) -> bool:
        return self.closed or self.radius >= n

    def require(self, n: int, vertices: Iterable = ()) -> None:
        """Raise :class:`WindowTooSmall` unless paths of length ``n`` through
        ``vertices`` are guaranteed to stay inside the window."""
        if not self.covers(n):
            raise WindowTooSmall(f"window radius {self.radius} < required length {n}")
        for v in vertices:
            if v not in self.graph.index:
                raise WindowTooSmall(f"vertex {v!r} is not in the window")
            if not self.closed and v not in self.base:
                raise WindowTooSmall(f"vertex {v!r} is not a base vertex of the window")

    def transposed(self) -> "GraphWindow":
        return GraphWindow(
            base=self.base,
            radius=self.radius,
            graph=transpose(self.graph),
            boundary=self.boundary,
            dist_forward=self.dist_backward,
            dist_backward=self.dist_forward,
            incomplete_in=self.incomplete_out,
            incomplete_out=self.incomplete_in,
            asserted=self.asserted,
        )

    def restrict(self, radius: int) -> FiniteGraph:
        """Induced subgraph on vertices within ``radius`` of the base."""
        keep = {v for v, d in self.dist_forward.items() if d <= radius}
        keep |= {v for v, d in self.dist_backward.items() if d <= radius}
        return self.graph.subgraph(keep)


def max_degree_cap() -> int:
    raw = os.environ.get("GRAPHENT_MAX_DEGREE")
    return int(raw) if raw else DEFAULT_MAX_DEGREE


def _query(oracle, kind, v, cap, cache):
    key = (kind, v)
    if key not in cache:
        fn = oracle.out_edges if kind == "out" else oracle.in_edges
        edges = list(fn(v))
        if len(edges) > cap:
            raise LocalFinitenessViolation(f"{kind}_edges({v!r}) returned {len(edges)} edges (cap {cap})")
        cache[key] = edges
    return cache[key]


def _bfs(oracle, kind, base, radius, cap, cache):
    dist = {v: 0 for v in base}
    order = list(base)
    frontier = list(base)
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for e in _query(oracle, kind, u, cap, cache):
                w = e.dst if kind == "out" else e.src
                if w not in dist:
                    dist[w] = d
                    order.append(w)
                    nxt.append(w)
        if not nxt:
            break
        frontier = nxt
    return dist, order


def materialize(oracle: GraphOracle, base: Iterable[Hashable], radius: int, max_degree: int | None = None) -> GraphWindow:
    """Materialize the radius-``radius`` window of ``oracle`` around ``base``."""
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    base = sorted(set(base), key=natural_key)
    if not base:
        raise ValueError("base must be nonempty")
    cap = max_degree_cap() if max_degree is None else max_degree
    cache: dict = {}
    dist_f, order_f = _bfs(oracle, "out", base, radius, cap, cache)
    dist_b, order_b = _bfs(oracle, "in", base, radius, cap, cache)
    verts = list(dict.fromkeys(order_f + order_b))
    inside = set(verts)

    out_ids, in_ids = {}, {}
    for v in verts:
        outs = _query(oracle, "out", v, cap, cache)
        ins = _query(oracle, "in", v, cap, cache)
        for e in outs:
            if e.src != v:
                raise OracleInconsistency(f"out_edges({v!r}) returned {e!r} with source {e.src!r}")
        for e in ins:
            if e.dst != v:
                raise OracleInconsistency(f"in_edges({v!r}) returned {e!r} with range {e.dst!r}")
        out_ids[v] = {e.id for e in outs}
        in_ids[v] = {e.id for e in ins}
    edges = []
    inc_in, inc_out = set(), set()
    for v in verts:
        for e in _query(oracle, "out", v, cap, cache):
            if e.dst in inside:
                if e.id not in in_ids[e.dst]:
                    raise OracleInconsistency(f"edge {e.id!r} is missing from in_edges({e.dst!r})")
                edges.append(e)
            else:
                inc_out.add(v)
        for e in _query(oracle, "in", v, cap, cache):
            if e.src in inside:
                if e.id not in out_ids[e.src]:
                    raise OracleInconsistency(f"edge {e.id!r} is missing from out_edges({e.src!r})")
            else:
                inc_in.add(v)
    graph = FiniteGraph(verts, edges)
    boundary = frozenset(
        v for v in verts if min(dist_f.get(v, radius + 1), dist_b.get(v, radius + 1)) == radius
    )
    return GraphWindow(
        base=frozenset(base),
        radius=radius,
        graph=graph,
        boundary=boundary,
        dist_forward=dist_f,
        dist_backward=dist_b,
        incomplete_in=frozenset(inc_in),
        incomplete_out=frozenset(inc_out),
        asserted=frozenset(getattr(oracle, "asserted", ())),
    )


def full_window(g: FiniteGraph) -> GraphWindow:
    """Treat a whole finite graph as a (closed) window based at every vertex."""
    n = len(g.vertices)
    return materialize(FiniteGraphOracle(g), g.vertices, n)


# --------------------------------------------------------------------------
# edge-list files


def parse_edge_list(text: str) -> FiniteGraph:
    """Parse ``src dst [multiplicity]`` lines; ``vertex v`` declares a vertex.

    Edges get the ids ``e1, e2, ...`` in order of appearance.
    """
    vertices: list = []
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "vertex":
            if len(parts) != 2:
                raise ParseError(f"line {lineno}: expected 'vertex <label>'")
            vertices.append(parts[1])
            continue
        if len(parts) not in (2, 3):
            raise ParseError(f"line {lineno}: expected 'src dst [multiplicity]'")
        mult = 1
        if len(parts) == 3:
            try:
                mult = int(parts[2])
            except ValueError:
                raise ParseError(f"line {lineno}: bad multiplicity {parts[2]!r}") from None
            if mult < 1:
                raise ParseError(f"line {lineno}: multiplicity must be positive")
        src, dst = parts[0], parts[1]
        vertices.extend((src, dst))
        for _ in range(mult):
            edges.append(Edge(f"e{len(edges) + 1}", src, dst))
    return FiniteGraph(vertices, edges)


def read_edge_list(path) -> FiniteGraph:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"))


def format_edge_list(g: FiniteGraph) -> str:
    """Serialize ``g``; edges are written in natural id order."""
    lines = []
    touched = {e.src for e in g.edges} | {e.dst for e in g.edges}
    for v in sorted((v for v in g.vertices if v not in touched), key=natural_key):
        lines.append(f"vertex {v}")
    for e in sorted(g.edges, key=lambda e: natural_key(e.id)):
        lines.append(f"{e.src} {e.dst}")
    return "\n".join(lines) + "\n"
