import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clusterdist.exceptions import DimensionError, LimitError, NotHermitianError
from clusterdist.graphs import cluster_state, line, ring
from clusterdist.pauli import (Phase, PauliString, PauliSum, commutes, conjugate_by_pauli,
                               from_dense, multiply, overlap, partial_trace, permute_qubits,
                               product, to_dense)

from conftest import (kron_word, oracle_dense, oracle_partial_trace, random_pauli_sum,
                      random_string)


@st.composite
def strings(draw, n=None, max_n=6):
    n = n or draw(st.integers(1, max_n))
    return PauliString(n, draw(st.integers(0, (1 << n) - 1)), draw(st.integers(0, (1 << n) - 1)))


@st.composite
def string_triples(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    return tuple(draw(strings(n=n)) for _ in range(3))


def s(text, n):
    return PauliString.from_sparse(text, n)


class TestPauliString:
    def test_letters_follow_bit_convention(self):
        p = PauliString.from_label("IXYZ")
        assert (p.x, p.z) == (0b0110, 0b1100)
        assert [p.letter(q) for q in range(1, 5)] == ["I", "X", "Y", "Z"]
        assert p.support == (2, 3, 4)
        assert p.weight == 3

    def test_sparse_and_dense_labels_agree(self):
        assert s("Z1 X2 Z3", 3) == PauliString.from_label("ZXZ")
        assert str(PauliString.from_label("XIZ")) == "X1 Z3"
        assert str(PauliString.identity(3)) == "I"

    def test_rejects_bad_input(self):
        with pytest.raises(DimensionError):
            PauliString(2, 4, 0)
        with pytest.raises(DimensionError):
            PauliString(0)
        with pytest.raises(DimensionError):
            PauliString.single(2, "X", 3)


class TestMultiply:
    def test_xy_is_iz(self):
        phase, r = multiply(s("X1", 1), s("Y1", 1))
        assert phase == Phase(1)
        assert r == s("Z1", 1)

    def test_zx_is_iy(self):
        phase, r = multiply(s("Z1", 1), s("X1", 1))
        assert phase.value == 1j and r == s("Y1", 1)

    def test_two_qubit_example_against_matrix_product(self):
        p, q = s("Z1 X2", 2), s("X1 Z2", 2)
        phase, r = multiply(p, q)
        assert r == s("Y1 Y2", 2)
        expected = kron_word("ZX") @ kron_word("XZ")
        np.testing.assert_allclose(phase.value * kron_word("YY"), expected, atol=1e-12)
        # (ZX)(XZ) = (ZX)⊗(XZ) = (iY)⊗(-iY) = +YY
        assert phase == Phase(0)

    @given(strings())
    def test_square_is_identity(self, p):
        phase, r = multiply(p, p)
        assert phase == Phase(0) and r.is_identity

    @given(string_triples())
    def test_associative(self, triple):
        a, b, c = triple
        ph1, ab = multiply(a, b)
        ph2, ab_c = multiply(ab, c)
        ph3, bc = multiply(b, c)
        ph4, a_bc = multiply(a, bc)
        assert ab_c == a_bc
        assert ph1 * ph2 == ph3 * ph4

    @settings(max_examples=60)
    @given(st.data())
    def test_matches_dense_product(self, data):
        n = data.draw(st.integers(1, 3))
        p, q = data.draw(strings(n=n)), data.draw(strings(n=n))
        phase, r = multiply(p, q)
        np.testing.assert_allclose(phase.value * oracle_dense(r),
                                   oracle_dense(p) @ oracle_dense(q), atol=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            multiply(s("X1", 1), s("X1", 2))


class TestCommutes:
    def test_examples(self):
        assert not commutes(s("X1", 1), s("Z1", 1))
        assert commutes(s("X1", 2), s("Z2", 2))
        assert not commutes(s("Z1 X2 Z3", 3), s("Z2", 3))

    def test_three_qubit_example_against_commutator(self):
        a, b = kron_word("ZXZ"), kron_word("IZI")
        assert np.abs(a @ b - b @ a).max() > 1
        assert np.abs(a @ b + b @ a).max() < 1e-12

    @settings(max_examples=60)
    @given(st.data())
    def test_agrees_with_dense_commutator(self, data):
        n = data.draw(st.integers(1, 3))
        p, q = data.draw(strings(n=n)), data.draw(strings(n=n))
        a, b = oracle_dense(p), oracle_dense(q)
        assert commutes(p, q) == np.allclose(a @ b, b @ a)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionError):
            commutes(s("X1", 1), s("X1", 2))


class TestPauliSum:
    def test_prunes_tiny_and_merges(self):
        t = PauliSum.from_terms(2, [("X1", 0.5), ("X1", 0.25), ("Z2", 1e-16), ("I", 0.25)])
        assert len(t) == 2
        assert t.coefficient("X1") == 0.75
        assert t.trace() == 1.0

    def test_arithmetic(self):
        a = PauliSum.from_terms(1, [("I", 0.5), ("X1", 0.5)])
        b = PauliSum.from_terms(1, [("I", 0.5), ("X1", -0.5)])
        assert (a + b) == PauliSum.from_terms(1, [("I", 1.0)])
        assert len(a - a) == 0
        assert (a * 2).coefficient("X1") == 1.0
        assert len(a @ b) == 0  # |+><+| |-><-| = 0

    def test_product_of_noncommuting_terms_raises(self):
        x = PauliSum.from_terms(1, [("X1", 1.0)])
        z = PauliSum.from_terms(1, [("Z1", 1.0)])
        with pytest.raises(NotHermitianError):
            product(x, z)

    def test_symbolic_overlap_and_purity_match_dense(self, rng):
        for n in (1, 2, 3):
            a, b = random_pauli_sum(rng, n), random_pauli_sum(rng, n)
            da, db = oracle_dense(a), oracle_dense(b)
            assert overlap(a, b) == pytest.approx(np.trace(da @ db).real, abs=1e-12)
            assert a.purity() == pytest.approx(np.trace(da @ da).real, abs=1e-12)


class TestPartialTrace:
    def test_line3_pair_marginal(self):
        rho = cluster_state(line(3))
        expected = PauliSum.from_terms(2, [("I", 0.25), ("X1 Z2", 0.25)])
        assert partial_trace(rho, (1, 2)).isclose(expected)

    def test_ring4_diagonal_marginal(self):
        rho = cluster_state(ring(4))
        expected = PauliSum.from_terms(2, [("I", 0.25), ("X1 X2", 0.25)])
        assert partial_trace(rho, (1, 3)).isclose(expected)

    def test_keep_everything_is_identity(self, rng):
        t = random_pauli_sum(rng, 3)
        assert partial_trace(t, (1, 2, 3)) == t

    def test_keep_order_relabels(self):
        t = PauliSum.from_terms(3, [("X1 Z3", 1.0)])
        assert partial_trace(t, (3, 1)) == PauliSum.from_terms(2, [("Z1 X2", 2.0)])

    def test_all_subsets_against_einsum_oracle(self, rng):
        for n in (1, 2, 3, 4):
            t = random_pauli_sum(rng, n, terms=12)
            dense = oracle_dense(t)
            for k in range(1, n + 1):
                for keep in itertools.permutations(range(1, n + 1), k):
                    got = oracle_dense(partial_trace(t, keep))
                    want = oracle_partial_trace(dense, n, keep)
                    np.testing.assert_allclose(got, want, atol=1e-12)

    def test_trace_preserved(self, rng):
        t = random_pauli_sum(rng, 4, terms=20) + PauliSum.from_terms(4, [("I", 0.3)])
        for keep in [(1,), (2, 4), (4, 1, 3)]:
            assert partial_trace(t, keep).trace() == pytest.approx(t.trace(), abs=1e-14)

    @pytest.mark.parametrize("keep", [(), (0,), (4,), (1, 1)])
    def test_invalid_keep(self, keep):
        with pytest.raises(DimensionError):
            partial_trace(PauliSum.maximally_mixed(3), keep)


class TestConjugation:
    def test_x1_on_line3_flips_z1_and_y1_terms(self):
        rho = cluster_state(line(3))
        out = conjugate_by_pauli(rho, s("X1", 3))
        for p, c in rho.items():
            flips = p.letter(1) in "ZY"
            assert out.coefficient(p) == (-c if flips else c)

    def test_identity_is_noop(self, rng):
        t = random_pauli_sum(rng, 3)
        assert conjugate_by_pauli(t, PauliString(3)) == t

    def test_pair_marginal_example(self):
        t = PauliSum.from_terms(2, [("I", 0.25), ("X1 Z2", 0.25)])
        assert conjugate_by_pauli(t, s("Z1", 2)) == PauliSum.from_terms(
            2, [("I", 0.25), ("X1 Z2", -0.25)])

    def test_against_dense_conjugation(self, rng):
        for n in (1, 2, 3, 4):
            t = random_pauli_sum(rng, n, terms=10)
            for _ in range(5):
                e = random_string(rng, n)
                u = oracle_dense(e)
                np.testing.assert_allclose(oracle_dense(conjugate_by_pauli(t, e)),
                                           u @ oracle_dense(t) @ u.conj().T, atol=1e-10)

    def test_preserves_trace_and_purity(self, rng):
        t = random_pauli_sum(rng, 3) + PauliSum.from_terms(3, [("I", 0.125)])
        out = conjugate_by_pauli(t, s("Y2", 3))
        assert out.trace() == t.trace() and out.purity() == t.purity()


class TestDense:
    def test_examples(self):
        np.testing.assert_array_equal(to_dense(PauliSum.from_terms(1, [("I", 1.0)])), np.eye(2))
        plus = PauliSum.from_terms(1, [("I", 0.5), ("X1", 0.5)])
        np.testing.assert_array_equal(to_dense(plus), np.full((2, 2), 0.5))

    def test_line3_is_rank_one_projector(self):
        m = to_dense(cluster_state(line(3)))
        values = np.linalg.eigvalsh(m)
        np.testing.assert_allclose(values, [0] * 7 + [1], atol=1e-12)
        assert np.array_equal(m, m.conj().T)

    def test_matches_kron_oracle(self, rng):
        for n in (1, 2, 3):
            t = random_pauli_sum(rng, n)
            np.testing.assert_allclose(to_dense(t), oracle_dense(t), atol=1e-14)
            p = random_string(rng, n)
            np.testing.assert_allclose(to_dense(p), kron_word(p.label), atol=0)

    def test_round_trip(self, rng):
        t = random_pauli_sum(rng, 3)
        assert from_dense(to_dense(t)).isclose(t, atol=1e-12)

    def test_limit(self):
        with pytest.raises(LimitError):
            to_dense(PauliSum.maximally_mixed(4), dense_limit=3)


def test_permute_qubits_relabels():
    t = PauliSum.from_terms(3, [("X1 Z2", 1.0)])
    out = permute_qubits(t, (3, 1, 2))
    assert out == PauliSum.from_terms(3, [("Z1 X3", 1.0)])
    with pytest.raises(DimensionError):
        permute_qubits(t, (1, 1, 2))
