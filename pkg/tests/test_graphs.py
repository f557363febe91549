import io
import itertools

import networkx as nx
import numpy as np
import pytest

from classical_drg import graphs
from classical_drg.graphs import (
    DRGRefutation,
    Graph,
    GraphError,
    bfs_distances,
    build_bilinear_forms,
    build_gosset,
    build_grassmann,
    build_halved_cube,
    build_hamming,
    build_johnson,
    check_distance_regular,
    spectrum_oracle,
)
from classical_drg.params import ClassicalParams as P, IntersectionArray, intersection_array, recognize_classical


def arrays(inst):
    arr = check_distance_regular(inst.graph)
    assert isinstance(arr, IntersectionArray), arr
    return arr.as_lists()


def complete(n):
    full = (1 << n) - 1
    return Graph(n, [full & ~(1 << v) for v in range(n)])


@pytest.mark.parametrize("builder,args,n,b_seq,c_seq", [
    (build_hamming, (3, 3), 27, [6, 4, 2], [1, 2, 3]),
    (build_johnson, (6, 3), 20, [9, 4, 1], [1, 4, 9]),
    (build_johnson, (4, 2), 6, [4, 1], [1, 4]),
    (build_bilinear_forms, (2, 3, 3), 512, [49, 36, 16], [1, 6, 28]),
    (build_gosset, (), 56, [27, 10, 1], [1, 10, 27]),
])
def test_family_arrays(builder, args, n, b_seq, c_seq):
    inst = builder(*args)
    assert inst.graph.n == n
    assert arrays(inst) == (b_seq, c_seq)


def test_hamming_cube():
    inst = build_hamming(3, 2)
    assert inst.graph.n == 8
    assert graphs.diameter(inst.graph) == 3


@pytest.mark.parametrize("inst", [build_hamming(1, 5).graph, build_johnson(7, 1).graph,
                                  build_grassmann(3, 3, 1).graph, build_bilinear_forms(2, 1, 3).graph])
def test_degenerate_cases_are_complete(inst):
    assert all(inst.degree(v) == inst.n - 1 for v in range(inst.n))


def test_grassmann_sizes():
    small = build_grassmann(2, 4, 2)
    assert small.graph.n == 35 and small.expected_params == P(2, 2, 2, 6)
    assert arrays(small) == intersection_array(small.expected_params).as_lists()


def test_grassmann_j2_63(j2_63):
    b_seq, c_seq = arrays(j2_63)
    assert j2_63.graph.n == 1395 and b_seq[0] == 98 and c_seq[1] == 9


def test_grassmann_adjacency_matches_rank_of_stacked_bases():
    # Independent check of the point-set shortcut: dim(U + W) = D + 1 iff adjacent.
    inst = build_grassmann(3, 4, 2)
    spaces = list(graphs.enumerate_rref(4, 2, 3))
    assert len(spaces) == inst.graph.n == graphs.gaussian_binomial(4, 2, 3)
    for i, j in itertools.combinations(range(len(spaces)), 2):
        stacked = list(spaces[i]) + list(spaces[j])
        assert inst.graph.has_edge(i, j) == (graphs.rank_mod_p(stacked, 3) == 3)


def test_bilinear_adjacency_matches_rank():
    inst = build_bilinear_forms(3, 2, 2)
    mats = list(itertools.product(range(3), repeat=4))
    for i, j in itertools.combinations(range(len(mats)), 2):
        diff = [(a - b) % 3 for a, b in zip(mats[i], mats[j])]
        rank = graphs.rank_mod_p([diff[:2], diff[2:]], 3)
        assert inst.graph.has_edge(i, j) == (rank == 1)
    assert inst.expected_params == P(2, 3, 2, 8)


def test_bilinear_small():
    inst = build_bilinear_forms(2, 2, 2)
    assert inst.graph.n == 16 and inst.expected_params == P(2, 2, 1, 3)
    assert arrays(inst) == intersection_array(inst.expected_params).as_lists()


def test_halved_cubes():
    six = build_halved_cube(6)
    assert six.graph.n == 32 and graphs.diameter(six.graph) == 3
    assert six.expected_params == P(3, 1, 2, 5)
    four = build_halved_cube(4)
    assert graphs.diameter(four.graph) == 2
    assert isinstance(check_distance_regular(four.graph), IntersectionArray)
    with pytest.raises(GraphError):
        build_halved_cube(2)


def test_gosset_antipodal():
    g = build_gosset().graph
    for v in range(g.n):
        dist = bfs_distances(g, v)
        assert dist[v] == 0 and dist.count(3) == 1


def test_hamming_eccentricity():
    g = build_hamming(3, 3).graph
    assert all(max(bfs_distances(g, v)) == 3 for v in range(g.n))


@pytest.mark.parametrize("build", [
    lambda: build_hamming(3, 3), lambda: build_johnson(6, 3), lambda: build_halved_cube(6),
    lambda: build_gosset(), lambda: build_grassmann(2, 4, 2), lambda: build_bilinear_forms(2, 2, 2),
])
def test_family_invariants(build):
    inst = build()
    g, p = inst.graph, inst.expected_params
    arr = check_distance_regular(g)
    assert arr == intersection_array(p)
    assert p in recognize_classical(arr)
    assert arr.n == g.n
    assert sum(g.degree(v) for v in range(g.n)) == g.n * arr.k
    a1 = arr.a(1)
    for v in range(g.n):
        nbrs = g.adj[v]
        assert all((g.adj[w] & nbrs).bit_count() == a1 for w in graphs.iter_bits(nbrs))


def test_constructors_are_deterministic():
    a, b = build_grassmann(2, 4, 2), build_grassmann(2, 4, 2)
    assert a.graph.adj == b.graph.adj and a.graph.labels == b.graph.labels
    assert graphs.dumps_graph(a.graph) == graphs.dumps_graph(b.graph)


def test_size_cap():
    with pytest.raises(GraphError, match="cap"):
        build_hamming(10, 4)
    with pytest.raises(GraphError):
        build_grassmann(4, 4, 2)


def test_complete_graph_array():
    arr = check_distance_regular(complete(5))
    assert arr.as_lists() == ([4], [1])


def test_deleted_edge_refuted():
    g = build_hamming(3, 3).graph
    u, v = g.edges()[0]
    wit = check_distance_regular(g.toggled(u, v))
    assert isinstance(wit, DRGRefutation) and wit.expected != wit.found


def test_disconnected_rejected():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    with pytest.raises(GraphError, match="disconnected"):
        check_distance_regular(g)


def test_graph_invariants_enforced():
    with pytest.raises(GraphError):
        Graph(2, [0b10, 0])
    with pytest.raises(GraphError):
        Graph(1, [0b1])


# ---- spectrum

@pytest.mark.parametrize("p,roots", [
    (P(3, 1, 4, 9), [27, 9, -1, -3]),
])
def test_spectrum_oracle_examples(p, roots):
    assert list(spectrum_oracle(intersection_array(p)).eigenvalues) == roots


def test_spectrum_contains_minus_r():
    assert -7 in spectrum_oracle(intersection_array(P(3, 2, 1, 7))).eigenvalues


def test_spectrum_of_complete_graph():
    sp = spectrum_oracle(IntersectionArray.from_sequences([6], [1]))
    assert sp.eigenvalues == (6, -1) and sp.multiplicities == (1, 6)


def test_spectrum_reports_irrational_residual():
    # the 5-cycle has eigenvalues 2 and (-1 +- sqrt 5)/2
    sp = spectrum_oracle(IntersectionArray.from_sequences([2, 1], [1, 1]))
    assert sp.eigenvalues == (2,)
    assert sp.residual and sp.note


def test_adjacency_spectrum_of_petersen():
    g = nx.petersen_graph()
    ours = Graph.from_edges(10, g.edges())
    assert graphs.adjacency_spectrum(ours) == {3.0: 1, 1.0: 5, -2.0: 4}
    arr = check_distance_regular(ours)
    sp = spectrum_oracle(arr)
    assert sp.eigenvalues == (3, 1, -2) and sp.multiplicities == (1, 5, 4)


def test_catalog_contents():
    rows = dict(graphs.catalog_params())
    assert P(3, 2, 2, 30) in rows.values()
    assert rows["Gosset"] == P(3, 1, 4, 9)
    assert any(p.alpha == 0 and p.beta == 2 and p.b == 4 for p in rows.values())  # e = 1/2 dual polar


# ---- file format

def test_graph_file_round_trip(tmp_path):
    inst = build_johnson(5, 2)
    path = tmp_path / "j52.json"
    graphs.write_graph(str(path), inst.graph, inst.family, inst.args)
    g, meta = graphs.read_graph(str(path))
    assert g.adj == inst.graph.adj and g.labels == inst.graph.labels
    assert meta == {"family": "johnson", "args": [5, 2]}
    text = path.read_text()
    assert text == graphs.dumps_graph(g, "johnson", [5, 2])
    assert '    [0, 1],\n' in text


def test_graph_file_writer_is_byte_stable():
    g = build_hamming(2, 3).graph
    buf1, buf2 = io.StringIO(), io.StringIO()
    graphs.write_graph(buf1, g)
    graphs.write_graph(buf2, Graph.from_edges(g.n, reversed(g.edges()), g.labels))
    assert buf1.getvalue() == buf2.getvalue()


@pytest.mark.parametrize("text", ['{"n": 2}', '{"n": 2, "edges": [[1, 0]]}', '{"n": 2, "edges": [[0, 5]]}',
                                  "not json", '{"n": -1, "edges": []}'])
def test_graph_file_rejects_bad_input(text):
    with pytest.raises(GraphError):
        graphs.loads_graph(text)


def test_distance_matrix_matches_bfs():
    g = build_johnson(6, 3).graph
    mat = graphs.Distances(g).matrix()
    for v in range(g.n):
        assert list(mat[v]) == bfs_distances(g, v)
    assert np.array_equal(mat, mat.T)
