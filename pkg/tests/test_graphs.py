import numpy as np
import pytest

from clusterdist.exceptions import GraphError, LimitError
from clusterdist.graphs import (REFERENCE_PRESETS, Graph, cluster_state, format_edge_list, grid,
                                line, load_edge_list, parse_edge_list, preset, ring,
                                stabilizer_generators, stabilizes)
from clusterdist.pauli import PauliString, commutes, multiply, to_dense

from conftest import kron_word


def words(gens):
    return [str(g) for g in gens]


class TestGraph:
    def test_line_and_ring_edges(self):
        assert preset("line3").sorted_edges() == [(1, 2), (2, 3)]
        assert preset("ring4").sorted_edges() == [(1, 2), (1, 4), (2, 3), (3, 4)]
        assert line(1).edges == frozenset()

    def test_grid_is_open(self):
        g = grid(2, 3)
        assert g.n == 6
        assert g.sorted_edges() == [(1, 2), (1, 4), (2, 3), (2, 5), (3, 6), (4, 5), (5, 6)]

    @pytest.mark.parametrize("name,n,edges", [("line:6", 6, 5), ("line(7)", 7, 6),
                                              ("ring5", 5, 5), ("grid3x3", 9, 12),
                                              ("grid:2,2", 4, 4)])
    def test_preset_spellings(self, name, n, edges):
        g = preset(name)
        assert (g.n, len(g.edges)) == (n, edges)

    @pytest.mark.parametrize("name", ["square4", "ring2", "line0", ""])
    def test_bad_presets(self, name):
        with pytest.raises(GraphError):
            preset(name)

    @pytest.mark.parametrize("edges", [[(1, 1)], [(1, 2), (2, 1)], [(1, 4)], [(0, 1)]])
    def test_rejects_malformed_edges(self, edges):
        with pytest.raises(GraphError):
            Graph.from_edges(3, edges)

    def test_neighbours(self):
        assert preset("ring4").neighbours(1) == (2, 4)


class TestEdgeList:
    def test_parse_with_comments(self):
        g = parse_edge_list("# triangle\nn 3\n1 2  # first\n\n2 3\n1 3\n")
        assert g.n == 3 and len(g.edges) == 3

    def test_format_round_trip(self):
        g = grid(2, 2)
        assert parse_edge_list(format_edge_list(g)).edges == g.edges

    def test_load_uses_file_stem_as_name(self, tmp_path):
        path = tmp_path / "star.edges"
        path.write_text("n 4\n1 2\n1 3\n1 4\n")
        g = load_edge_list(path)
        assert g.name == "star" and g.neighbours(1) == (2, 3, 4)

    @pytest.mark.parametrize("text", ["", "1 2\n", "n x\n", "n 3\n1\n", "n 3\n1 a\n",
                                      "n 3\n1 2\n1 2\n", "n 2\n1 3\n"])
    def test_errors(self, text):
        with pytest.raises(GraphError):
            parse_edge_list(text)


class TestStabilizers:
    def test_line3(self):
        assert words(stabilizer_generators(line(3))) == ["X1 Z2", "Z1 X2 Z3", "Z2 X3"]

    def test_single_vertex(self):
        assert words(stabilizer_generators(line(1))) == ["X1"]

    def test_ring4(self):
        gens = stabilizer_generators(ring(4))
        expected = ["Z4 X1 Z2", "Z1 X2 Z3", "Z2 X3 Z4", "Z3 X4 Z1"]
        assert gens == [PauliString.from_sparse(w, 4) for w in expected]

    @pytest.mark.parametrize("g", [line(5), ring(5), grid(2, 3)], ids=str)
    def test_generators_commute_and_are_independent(self, g):
        gens = stabilizer_generators(g)
        assert all(commutes(a, b) for a in gens for b in gens)
        for mask in range(1, 1 << g.n):
            acc = PauliString(g.n)
            for i, gen in enumerate(gens):
                if mask >> i & 1:
                    acc = multiply(acc, gen)[1]
            assert not acc.is_identity


class TestClusterState:
    def test_single_vertex_is_plus_state(self):
        np.testing.assert_array_equal(to_dense(cluster_state(line(1))), np.full((2, 2), 0.5))

    def test_line3_expansion_signs(self):
        rho = cluster_state(line(3))
        assert len(rho) == 8
        assert rho.coefficient("Y1 X2 Y3") == -1 / 8
        assert rho.coefficient("Z1 Y2 Y3") == 1 / 8

    def test_line5_expansion_sign(self):
        rho = cluster_state(line(5))
        assert len(rho) == 32
        assert rho.coefficient("Y1 X2 X3 X4 Y5") == -1 / 32

    def test_line3_matches_projector_oracle(self):
        # |C> = CZ_12 CZ_23 |+++>, built with plain numpy
        plus = np.full(8, 1 / np.sqrt(8))
        cz = np.diag([(-1) ** ((b >> 2 & 1) * (b >> 1 & 1) + (b >> 1 & 1) * (b & 1))
                      for b in range(8)])
        psi = cz @ plus
        np.testing.assert_allclose(to_dense(cluster_state(line(3))), np.outer(psi, psi),
                                   atol=1e-15)

    @pytest.mark.parametrize("name", [*REFERENCE_PRESETS, "ring5", "grid2x3", "line6"])
    def test_state_properties(self, name):
        g = preset(name)
        rho = cluster_state(g)
        assert len(rho) == 2 ** g.n
        assert rho.trace() == pytest.approx(1.0, abs=1e-14)
        assert rho.purity() == pytest.approx(1.0, abs=1e-12)
        assert all(stabilizes(gen, rho) for gen in stabilizer_generators(g))
        values = np.linalg.eigvalsh(to_dense(rho))
        np.testing.assert_allclose(values, [0] * (2 ** g.n - 1) + [1], atol=1e-10)

    def test_random_graphs_are_stabilized(self, rng):
        for _ in range(10):
            n = int(rng.integers(2, 7))
            edges = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                     if rng.random() < 0.5]
            g = Graph.from_edges(n, edges)
            rho = cluster_state(g)
            for gen in stabilizer_generators(g):
                m = kron_word(gen.label)
                d = to_dense(rho)
                np.testing.assert_allclose(m @ d, d, atol=1e-12)
                assert stabilizes(gen, rho)

    def test_symbolic_limit(self):
        with pytest.raises(LimitError):
            cluster_state(line(5), symbolic_limit=4)
