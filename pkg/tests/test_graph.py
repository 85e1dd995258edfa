from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings

from graphent.errors import DanglingEndpoint, DuplicateEdgeId, LocalFinitenessViolation, OracleInconsistency, ParseError
from graphent.families import random_strongly_connected, salama_2_8
from graphent.graph import (
    Edge,
    FiniteGraph,
    FiniteGraphOracle,
    GraphOracle,
    build_finite,
    edge_matrix,
    format_edge_list,
    full_window,
    has_cycle,
    is_irreducible,
    materialize,
    natural_key,
    parse_edge_list,
    shortest_path_length,
    transpose,
)

from oracles import bouquet, edge_matrix_oracle, edge_paths, fibonacci, finite_graphs, two_cycle


# construction


def test_fibonacci_construction():
    g = fibonacci()
    assert len(g.vertices) == 2 and g.n_edges == 3
    assert [e.id for e in g.edges] == ["e1", "e2", "e3"]


def test_isolated_vertex_is_valid():
    g = build_finite(["v"], [])
    assert g.vertices == ("v",) and g.n_edges == 0


def test_dangling_endpoint():
    with pytest.raises(DanglingEndpoint):
        build_finite(["a"], [Edge("e", "a", "b")])


def test_duplicate_edge_id():
    with pytest.raises(DuplicateEdgeId):
        build_finite(["a"], [Edge("e", "a", "a"), Edge("e", "a", "a")])


def test_build_finite_accepts_tuples_and_keeps_order():
    g = build_finite(["x", "y"], [("f2", "x", "y"), ("f1", "y", "x")])
    assert [e.id for e in g.edges] == ["f2", "f1"]


def test_natural_key_orders_numbered_labels():
    assert sorted(["e10", "e2", "e1"], key=natural_key) == ["e1", "e2", "e10"]


# transpose


def test_transpose_fibonacci():
    t = transpose(fibonacci())
    assert {(e.id, e.src, e.dst) for e in t.edges} == {("e1", "a", "a"), ("e2", "b", "a"), ("e3", "a", "b")}


def test_transpose_self_loop_fixed():
    g = bouquet(1)
    assert transpose(g) == g


@given(finite_graphs())
def test_transpose_involution_and_degrees(g):
    t = transpose(g)
    assert transpose(t) == g
    assert set(t.vertices) == set(g.vertices)
    assert {e.id for e in t.edges} == {e.id for e in g.edges}
    for v in g.vertices:
        assert t.out_degree(v) == g.in_degree(v)
        assert t.in_degree(v) == g.out_degree(v)


@given(finite_graphs())
def test_irreducibility_transpose_invariant(g):
    assert is_irreducible(g) == is_irreducible(transpose(g))


# irreducibility


def test_is_irreducible_examples():
    assert is_irreducible(fibonacci())
    assert is_irreducible(two_cycle())
    assert not is_irreducible(build_finite(["a", "b"], [Edge("e", "a", "b")]))
    assert not is_irreducible(build_finite(["v"], []))


def test_e28_window_not_irreducible():
    oracle, _ = salama_2_8()
    w = materialize(oracle, ["0"], 4)
    assert not is_irreducible(w.graph)
    assert "irreducible" in w.asserted


def test_has_cycle_and_shortest_path():
    g = build_finite(["0", "1", "2"], [Edge("e1", "0", "1"), Edge("e2", "1", "2")])
    assert not has_cycle(g)
    assert shortest_path_length(g, "0", "2") == 2
    assert shortest_path_length(g, "2", "0") is None
    assert shortest_path_length(g, "1", "1") == 0
    assert has_cycle(fibonacci())


# edge matrix


def test_edge_matrix_fibonacci_rows():
    em = edge_matrix(fibonacci())
    assert em.successors("e1") == ["e1", "e2"]
    assert em.successors("e2") == ["e3"]
    assert em.successors("e3") == ["e1", "e2"]


def test_edge_matrix_small_cases():
    assert edge_matrix(bouquet(1)).toarray().tolist() == [[1]]
    assert edge_matrix(two_cycle()).toarray().tolist() == [[0, 1], [1, 0]]


@settings(max_examples=60)
@given(finite_graphs())
def test_edge_matrix_counts_paths(g):
    A = np.array(edge_matrix_oracle(g), dtype=object).reshape(g.n_edges, g.n_edges)
    assert edge_matrix(g).toarray().tolist() == [list(r) for r in A]
    if g.n_edges == 0:
        return
    P = np.identity(g.n_edges, dtype=object)
    for n in range(1, 7):
        assert P.sum() == len(edge_paths(g, n))
        P = P.dot(A)


# windows


def test_window_radius_zero_keeps_base_loop():
    oracle, _ = salama_2_8()
    w = materialize(oracle, ["0"], 0)
    assert w.graph.vertices == ("0",)
    assert [e.id for e in w.graph.edges] == ["loop"]


def test_window_radius_one_e28():
    oracle, _ = salama_2_8()
    w = materialize(oracle, ["0"], 1)
    assert set(w.graph.vertices) == {"0", "b1", "t1"}
    ids = sorted(e.id for e in w.graph.edges)
    assert ids == sorted(["loop", "c1"] + [f"r1.{j}" for j in range(1, 9)])
    assert w.boundary == frozenset({"b1", "t1"})
    assert not w.closed


def test_window_of_finite_graph_saturates():
    g = fibonacci()
    w = materialize(FiniteGraphOracle(g), ["a"], 2)
    assert w.closed
    assert set(w.graph.vertices) == set(g.vertices)
    assert {e.id for e in w.graph.edges} == {e.id for e in g.edges}


def test_materialize_is_idempotent():
    oracle, _ = salama_2_8()
    a, b = materialize(oracle, ["0"], 7).graph, materialize(oracle, ["0"], 7).graph
    assert a.vertices == b.vertices and a.edges == b.edges


@pytest.mark.parametrize("radius", [0, 1, 3, 6, 9])
def test_window_monotone_restriction(radius):
    oracle, _ = salama_2_8()
    big = materialize(oracle, ["0"], radius + 1)
    small = materialize(oracle, ["0"], radius)
    r = big.restrict(radius)
    assert set(r.vertices) == set(small.graph.vertices)
    assert {e.id for e in r.edges} == {e.id for e in small.graph.edges}


def test_transposed_window_swaps_sides():
    oracle, _ = salama_2_8()
    w = materialize(oracle, ["0"], 3)
    t = w.transposed()
    assert t.incomplete_in == w.incomplete_out
    assert t.graph == transpose(w.graph)


class _BrokenOracle(GraphOracle):
    root = "a"

    def out_edges(self, v):
        return [Edge("e", "a", "b")] if v == "a" else []

    def in_edges(self, v):
        return []


class _FatOracle(GraphOracle):
    root = "a"

    def out_edges(self, v):
        return [Edge(f"e{i}", "a", "a") for i in range(50)] if v == "a" else []

    def in_edges(self, v):
        return self.out_edges(v)


def test_oracle_inconsistency():
    with pytest.raises(OracleInconsistency):
        materialize(_BrokenOracle(), ["a"], 2)


def test_degree_cap(monkeypatch):
    with pytest.raises(LocalFinitenessViolation):
        materialize(_FatOracle(), ["a"], 1, max_degree=10)
    monkeypatch.setenv("GRAPHENT_MAX_DEGREE", "10")
    with pytest.raises(LocalFinitenessViolation):
        materialize(_FatOracle(), ["a"], 1)
    monkeypatch.setenv("GRAPHENT_MAX_DEGREE", "100")
    assert materialize(_FatOracle(), ["a"], 1).graph.n_edges == 50


def test_full_window_is_closed():
    g = random_strongly_connected(5, 0.3, 4)
    w = full_window(g)
    assert w.closed and w.graph == g


# edge-list files


def test_parse_edge_list_multiplicity_and_isolated():
    g = parse_edge_list("# comment\na a\na b 2  # two parallel edges\n\nb a\nvertex z\n")
    assert g.n_edges == 4
    assert [e.id for e in g.edges] == ["e1", "e2", "e3", "e4"]
    assert set(g.vertices) == {"a", "b", "z"}
    assert g.out_degree("z") == 0


@pytest.mark.parametrize("bad", ["a", "a b c d", "a b x", "a b 0", "vertex"])
def test_parse_edge_list_errors(bad):
    with pytest.raises(ParseError):
        parse_edge_list(bad)


@given(finite_graphs())
def test_edge_list_round_trip(g):
    h = parse_edge_list(format_edge_list(g))
    assert sorted((e.src, e.dst) for e in h.edges) == sorted((e.src, e.dst) for e in g.edges)
    assert set(h.vertices) == set(g.vertices)


def test_finite_graph_equality():
    assert fibonacci() == fibonacci()
    assert fibonacci() != two_cycle()
    assert isinstance(fibonacci(), FiniteGraph)
