"""Network generators, degree structure, and edge-list files."""

from collections import deque

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from racenet.errors import ParseError, ValidationError
from racenet.networks import (
    DegreeClass,
    Graph,
    Provenance,
    barabasi_albert,
    check_hub_classes,
    complete,
    degree_class,
    degree_classes,
    dms,
    graph_metrics,
    lattice,
    load_edge_list,
    nominal_connectivity,
    rank_by_degree,
    save_edge_list,
)


def is_connected(g: Graph) -> bool:
    seen = np.zeros(g.n, dtype=bool)
    seen[0] = True
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in g.adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(int(v))
    return bool(seen.all())


def check_simple_undirected(g: Graph) -> None:
    for u in range(g.n):
        a = g.adj[u]
        assert np.all(np.diff(a) > 0), f"adjacency of {u} not strictly sorted"
        assert u not in a, f"self-loop at {u}"
        for v in a:
            assert u in g.adj[v], f"edge ({u}, {v}) not symmetric"


class TestComplete:
    def test_shape(self):
        g = complete(7)
        assert g.n == 7
        assert g.edge_count == 21
        assert np.all(g.degrees() == 6)
        check_simple_undirected(g)

    def test_minimum_size(self):
        assert complete(2).edge_count == 1
        with pytest.raises(ValidationError):
            complete(1)

    def test_metrics(self):
        m = graph_metrics(complete(5))
        assert m.mean_degree == 4.0
        assert m.max_degree == 4
        # every neighbour pair is linked
        assert m.mean_local_clustering == 1.0
        assert np.array_equal(m.degree_histogram, [0, 0, 0, 0, 5])


class TestLattice:
    @pytest.mark.parametrize("L,nbh,deg", [(4, 4, 4), (5, 4, 4), (4, 8, 8), (5, 8, 8)])
    def test_regular(self, L, nbh, deg):
        g = lattice(L, nbh)
        assert g.n == L * L
        assert np.all(g.degrees() == deg)
        assert g.edge_count == L * L * deg // 2
        check_simple_undirected(g)
        assert is_connected(g)

    def test_wrapping(self):
        g = lattice(4, 4)
        # corner node 0 = (0,0) wraps to row 3 and column 3
        assert sorted(g.adj[0].tolist()) == [1, 3, 4, 12]

    def test_four_neighbourhood_has_no_triangles(self):
        m = graph_metrics(lattice(4, 4))
        assert m.mean_local_clustering == 0.0

    def test_too_small(self):
        with pytest.raises(ValidationError):
            lattice(2, 4)

    def test_bad_neighbourhood(self):
        with pytest.raises(ValidationError, match="neighborhood"):
            lattice(4, 6)

    def test_provenance_tags(self):
        assert lattice(4, 4).provenance.generator == "lattice4"
        assert lattice(4, 8).provenance.generator == "lattice8"


class TestGrowthModels:
    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_ba_edge_count(self, m):
        Z = 40
        g = barabasi_albert(Z, m, seed=11)
        assert g.edge_count == m * (m + 1) // 2 + m * (Z - m - 1)

    def test_dms_edge_count(self):
        Z = 40
        g = dms(Z, 2, seed=11)
        assert g.edge_count == 3 + 2 * (Z - 3)

    @pytest.mark.parametrize("gen", [barabasi_albert, dms])
    def test_smallest_case(self, gen):
        # K3 seed + one arrival with 2 links
        g = gen(4, 2, seed=0)
        assert g.edge_count == 5
        assert g.degree(3) == 2
        u, v = g.adj[3]
        assert v in g.adj[u]  # the arrival closed a triangle

    def test_both_hit_mean_degree_four_at_m2(self):
        for gen in (barabasi_albert, dms):
            g = gen(500, 2, seed=5)
            assert abs(graph_metrics(g).mean_degree - 4.0) < 0.02

    def test_deterministic_in_seed(self):
        assert barabasi_albert(60, 2, 9) == barabasi_albert(60, 2, 9)
        assert dms(60, 2, 9) == dms(60, 2, 9)
        assert barabasi_albert(60, 2, 1) != barabasi_albert(60, 2, 2)
        assert dms(60, 2, 1) != dms(60, 2, 2)

    def test_size_validation(self):
        with pytest.raises(ValidationError):
            barabasi_albert(3, 2, 0)
        with pytest.raises(ValidationError):
            barabasi_albert(10, 0, 0)
        with pytest.raises(ValidationError):
            dms(3, 2, 0)
        with pytest.raises(ValidationError, match="even"):
            dms(10, 3, 0)
        # a triangle seed cannot supply 4 distinct targets to the first arrival
        with pytest.raises(ValidationError, match="triangle"):
            dms(10, 4, 0)

    @settings(max_examples=30, deadline=None)
    @given(
        Z=st.integers(min_value=6, max_value=40),
        m=st.integers(min_value=1, max_value=3),
        seed=st.integers(min_value=0, max_value=2**64 - 1),
    )
    def test_ba_invariants(self, Z, m, seed):
        g = barabasi_albert(Z, m, seed)
        check_simple_undirected(g)
        assert is_connected(g)
        assert int(g.degrees().min()) >= m
        assert g.edge_count == m * (m + 1) // 2 + m * (Z - m - 1)

    @settings(max_examples=30, deadline=None)
    @given(
        Z=st.integers(min_value=6, max_value=40),
        seed=st.integers(min_value=0, max_value=2**64 - 1),
    )
    def test_dms_invariants(self, Z, seed):
        g = dms(Z, 2, seed)
        check_simple_undirected(g)
        assert is_connected(g)
        assert int(g.degrees().min()) >= 2
        assert g.edge_count == 3 + 2 * (Z - 3)

    def test_hubs_emerge(self):
        # scale-free tail: largest hub far above the mean degree of 4
        for seed in range(1, 6):
            assert barabasi_albert(500, 2, seed).max_degree >= 30
            assert dms(500, 2, seed).max_degree >= 30

    def test_dms_is_clustered_ba_is_not(self):
        for seed in range(1, 6):
            cb = graph_metrics(barabasi_albert(500, 2, seed)).mean_local_clustering
            cd = graph_metrics(dms(500, 2, seed)).mean_local_clustering
            assert cb < 0.15
            assert cd > 0.5
            assert cd > 2 * cb


class TestClustering:
    def test_triangle_with_pendant(self):
        # triangle 0-1-2 plus pendant 3 on node 0: C = (1/3 + 1 + 1 + 0) / 4
        g = Graph.from_edges(
            4, [(0, 1), (0, 2), (1, 2), (0, 3)], Provenance("custom", 0, 0))
        m = graph_metrics(g)
        assert m.mean_local_clustering == pytest.approx(7 / 12, abs=1e-15)

    @pytest.mark.parametrize("make", [
        lambda: dms(30, 2, 3),
        lambda: barabasi_albert(30, 2, 3),
        lambda: lattice(5, 8),
    ])
    def test_matches_dense_matrix_recount(self, make):
        g = make()
        dense = np.zeros((g.n, g.n), dtype=bool)
        for u, v in g.edges():
            dense[u, v] = dense[v, u] = True
        total = 0.0
        for i in range(g.n):
            nbrs = np.flatnonzero(dense[i])
            k = len(nbrs)
            if k < 2:
                continue
            links = dense[np.ix_(nbrs, nbrs)].sum() // 2
            total += 2 * links / (k * (k - 1))
        assert graph_metrics(g).mean_local_clustering == pytest.approx(
            total / g.n, abs=1e-12)


def star_with_tiers() -> Graph:
    """Hub 0 linked to 1..30; 1..5 form a clique; 6 linked to 7..15.

    Degrees: hub 30, nodes 1..5 -> 5, node 6 -> 10, others 1 or 2.
    """
    edges = [(0, i) for i in range(1, 31)]
    edges += [(i, j) for i in range(1, 6) for j in range(i + 1, 6)]
    edges += [(6, j) for j in range(7, 16)]
    return Graph.from_edges(31, edges, Provenance("custom", 0, 0))


class TestDegreeClasses:
    def test_thresholds(self):
        g = star_with_tiers()
        assert g.max_degree == 30
        z = 4.0
        assert degree_class(g, 20, z) is DegreeClass.LOW      # k=1 < z
        assert degree_class(g, 7, z) is DegreeClass.LOW       # k=2 < z
        assert degree_class(g, 1, z) is DegreeClass.MEDIUM    # k=5
        assert degree_class(g, 6, z) is DegreeClass.HIGH      # k=10 = kmax/3
        assert degree_class(g, 0, z) is DegreeClass.HIGH      # the hub

    def test_low_check_wins(self):
        # kmax=4 puts every node above kmax/3, but k < z still files as LOW
        g = lattice(4, 4)
        assert degree_class(g, 0, z=6.0) is DegreeClass.LOW

    def test_vector_matches_scalar(self):
        g = dms(200, 2, 13)
        z = nominal_connectivity(g)
        vec = degree_classes(g, z)
        assert vec.dtype == np.int8
        for node in range(g.n):
            assert vec[node] == degree_class(g, node, z)

    def test_all_three_present_on_heterogeneous_graphs(self):
        g = dms(500, 2, 17)
        counts = np.bincount(degree_classes(g, 4.0), minlength=3)
        assert np.all(counts > 0)

    def test_hub_check(self):
        check_hub_classes(dms(500, 2, 17), 4.0)
        with pytest.raises(ValidationError, match="ill-separated"):
            check_hub_classes(lattice(5, 4), 4.0)


class TestRankByDegree:
    def test_orders_by_degree_then_id(self):
        g = Graph.from_edges(
            5, [(0, 1), (1, 2), (2, 0), (1, 3), (2, 4)], Provenance("custom", 0, 0))
        assert g.degrees().tolist() == [2, 3, 3, 1, 1]
        assert rank_by_degree(g).tolist() == [1, 2, 0, 3, 4]

    def test_all_ties_keep_id_order(self):
        g = lattice(4, 4)
        assert rank_by_degree(g).tolist() == list(range(16))

    def test_degrees_never_increase_along_ranking(self):
        g = barabasi_albert(200, 2, 21)
        ks = g.degrees()[rank_by_degree(g)]
        assert np.all(np.diff(ks) <= 0)


class TestNominalConnectivity:
    def test_by_generator(self):
        assert nominal_connectivity(complete(9)) == 8.0
        assert nominal_connectivity(lattice(4, 4)) == 4.0
        assert nominal_connectivity(lattice(4, 8)) == 8.0
        assert nominal_connectivity(barabasi_albert(20, 2, 0)) == 4.0
        assert nominal_connectivity(dms(20, 2, 0)) == 4.0

    def test_unknown_tag_falls_back_to_measured_mean(self):
        g = Graph.from_edges(3, [(0, 1), (1, 2)], Provenance("custom", 0, 0))
        assert nominal_connectivity(g) == pytest.approx(4 / 3)


class TestEdgeListFiles:
    def test_round_trip(self, tmp_path, small_dms):
        path = tmp_path / "net.edges"
        save_edge_list(small_dms, path)
        loaded = load_edge_list(path)
        assert loaded == small_dms
        assert loaded.provenance == small_dms.provenance

    def test_round_trip_lattice(self, tmp_path):
        g = lattice(5, 8)
        path = tmp_path / "lat.edges"
        save_edge_list(g, path)
        assert load_edge_list(path) == g

    def test_header_format(self, tmp_path, small_dms):
        path = tmp_path / "net.edges"
        save_edge_list(small_dms, path)
        first = path.read_text().splitlines()[0]
        assert first == "# generator=dms seed=7 Z=60 m=2"

    def test_edges_ascending(self, tmp_path, small_dms):
        path = tmp_path / "net.edges"
        save_edge_list(small_dms, path)
        pairs = [tuple(map(int, line.split()))
                 for line in path.read_text().splitlines()[1:]]
        assert pairs == sorted(pairs)
        assert all(u < v for u, v in pairs)

    @pytest.mark.parametrize("text,lineno", [
        ("0 1\n", 1),                                     # missing header
        ("# generator=x seed\n", 1),                      # malformed token
        ("# generator=x seed=1 Z=4\n", 1),                # missing m field
        ("# generator=x seed=q Z=4 m=2\n", 1),            # non-integer field
        ("# generator=x seed=1 Z=4 m=2\n0 1 2\n", 2),     # three columns
        ("# generator=x seed=1 Z=4 m=2\n0 1\na b\n", 3),  # non-integer ids
    ])
    def test_parse_errors_carry_line_numbers(self, tmp_path, text, lineno):
        path = tmp_path / "bad.edges"
        path.write_text(text)
        with pytest.raises(ParseError) as err:
            load_edge_list(path)
        assert err.value.lineno == lineno
        assert str(path) in str(err.value)

    @pytest.mark.parametrize("body,fragment", [
        ("0 9\n", "out of range"),
        ("1 0\n", "u < v"),
        ("1 1\n", "u < v"),
        ("0 1\n0 1\n1 2\n2 3\n", "duplicate"),
        ("0 1\n1 2\n", "isolated"),                       # node 3 untouched
    ])
    def test_structural_errors(self, tmp_path, body, fragment):
        path = tmp_path / "bad.edges"
        path.write_text("# generator=x seed=1 Z=4 m=2\n" + body)
        with pytest.raises(ValidationError, match=fragment):
            load_edge_list(path)

    def test_blank_lines_ignored(self, tmp_path):
        path = tmp_path / "ok.edges"
        path.write_text("# generator=x seed=1 Z=3 m=0\n0 1\n\n0 2\n1 2\n")
        assert load_edge_list(path).edge_count == 3


class TestFromEdges:
    def test_rejects_self_loop(self):
        with pytest.raises(ValidationError, match="self-loop"):
            Graph.from_edges(3, [(0, 0)], Provenance("custom", 0, 0))

    def test_rejects_duplicate_even_when_reversed(self):
        with pytest.raises(ValidationError, match="duplicate"):
            Graph.from_edges(3, [(0, 1), (1, 0)], Provenance("custom", 0, 0))

    def test_rejects_out_of_range(self):
        with pytest.raises(ValidationError, match="out of range"):
            Graph.from_edges(3, [(0, 3)], Provenance("custom", 0, 0))

    def test_csr_view_matches_adjacency(self, small_dms):
        indptr, indices = small_dms.csr()
        assert indptr[-1] == 2 * small_dms.edge_count
        for u in range(small_dms.n):
            assert np.array_equal(indices[indptr[u]:indptr[u + 1]], small_dms.adj[u])
