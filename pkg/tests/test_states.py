import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from mindecomp.states import (
    State,
    apply_local_unitaries,
    basis_state,
    complement,
    flat_index,
    linear_entropy,
    matricize,
    random_haar_state,
    random_unitary,
    read_state,
    reduced_density,
    reshape_bipartition,
    state_from_amplitudes,
    state_from_dict,
    state_to_dict,
    unflatten,
    unreshape_tensor,
    write_state,
    DensityMatrix,
    overlap,
)

X = np.array([[0, 1], [1, 0]], dtype=complex)


def _positional(indices, d):
    # written independently of flat_index: sum of digit * d**place
    return sum(digit * d ** (len(indices) - 1 - place) for place, digit in enumerate(indices))


class TestConstruction:
    def test_basis_vector(self):
        s = state_from_amplitudes(3, 2, np.eye(8)[0])
        assert_allclose(s.amplitudes, np.eye(8)[0])
        assert_allclose(s.norm(), 1.0)

    def test_ghz_from_two_entries(self):
        amps = np.zeros(8)
        amps[[0, 7]] = 1
        s = state_from_amplitudes(3, 2, amps)
        assert_allclose(s.amplitudes[[0, 7]], [1 / math.sqrt(2)] * 2)

    def test_normalizes(self):
        s = state_from_amplitudes(2, 2, [2, 0, 0, 0])
        assert_allclose(s.amplitudes, [1, 0, 0, 0])

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            state_from_amplitudes(3, 2, np.ones(7))

    def test_zero_vector(self):
        with pytest.raises(ValueError):
            state_from_amplitudes(2, 2, np.zeros(4))

    def test_amplitudes_read_only(self, ghz):
        with pytest.raises(ValueError):
            ghz.amplitudes[0] = 0


class TestIndexing:
    @pytest.mark.parametrize("indices,d,expected", [
        ((0, 0, 0), 2, 0),
        ((1, 1, 1), 2, 7),
        ((1, 0, 1, 2), 3, 32),
    ])
    def test_examples(self, indices, d, expected):
        assert flat_index(indices, d) == expected

    @given(st.integers(2, 5).flatmap(
        lambda d: st.tuples(st.just(d), st.lists(st.integers(0, d - 1), min_size=1, max_size=6))))
    def test_positional_oracle_and_inverse(self, args):
        d, digits = args
        x = flat_index(digits, d)
        assert x == _positional(digits, d)
        assert unflatten(x, len(digits), d) == tuple(digits)

    def test_digit_out_of_range(self):
        with pytest.raises(ValueError):
            flat_index((0, 2), 2)

    def test_complement(self):
        assert complement(4, (0, 2)) == (1, 3)


class TestReshape:
    def test_ghz_matricize(self, ghz):
        assert_allclose(matricize(ghz, 1).entries, [[1, 0, 0, 0], [0, 0, 0, 1]], atol=1e-15)

    def test_ame43_is_permutation_matrix(self, ame43):
        m = np.abs(matricize(ame43, 2).entries)
        assert_allclose(m.sum(axis=0), 1.0)
        assert_allclose(m.sum(axis=1), 1.0)
        assert set(np.round(m, 12).ravel()) == {0.0, 1.0}

    def test_round_trip_last_cut(self, rng):
        s = random_haar_state(3, 3, rng)
        a = matricize(s, 2).entries
        assert_allclose(a.reshape(-1), s.amplitudes * math.sqrt(9))

    def test_identity_subset_is_matricize(self, rng):
        s = random_haar_state(4, 2, rng)
        assert_allclose(reshape_bipartition(s, (0, 1)).entries, matricize(s, 2).entries)

    def test_ghz_symmetric(self, ghz):
        assert_allclose(reshape_bipartition(ghz, (1,)).entries, reshape_bipartition(ghz, (0,)).entries)

    def test_product_state_rank_one(self):
        plus = np.array([1, 1]) / math.sqrt(2)
        amps = np.kron(np.kron([1, 0], plus), [1, 0])
        s = state_from_amplitudes(3, 2, amps)
        a = reshape_bipartition(s, (1,)).entries
        assert a.shape == (2, 4)
        assert np.linalg.matrix_rank(a, tol=1e-12) == 1

    def test_direct_expansion(self, rng):
        s = random_haar_state(4, 2, rng)
        a = reshape_bipartition(s, (1, 3)).entries
        for x in range(16):
            i0, i1, i2, i3 = unflatten(x, 4, 2)
            assert_allclose(a[2 * i1 + i3, 2 * i0 + i2], 2 * s.amplitudes[x])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 3), st.integers(2, 4))
    def test_unreshape_inverts(self, seed, d, n):
        rng = np.random.default_rng(seed)
        s = random_haar_state(n, d, rng)
        subset = tuple(sorted(rng.choice(n, size=n // 2, replace=False)))
        a = reshape_bipartition(s, subset).entries / math.sqrt(d ** len(subset))
        assert_allclose(unreshape_tensor(a, subset, n, d), s.tensor, atol=1e-14)


class TestMarginals:
    def test_ghz_marginal(self, ghz):
        assert_allclose(reduced_density(ghz, (0,)).entries, np.eye(2) / 2, atol=1e-15)

    def test_product_marginal(self):
        rho = reduced_density(basis_state((0, 0, 0), 2), (0, 1)).entries
        expected = np.zeros((4, 4))
        expected[0, 0] = 1
        assert_allclose(rho, expected)

    def test_ame43_marginals(self, ame43):
        for subset in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
            assert_allclose(reduced_density(ame43, subset).entries, np.eye(9) / 9, atol=1e-15)

    @pytest.mark.parametrize("rho,expected", [
        (np.diag([1.0, 0, 0, 0]), 0.0),
        (np.eye(2) / 2, 0.5),
        (np.eye(9) / 9, 8 / 9),
    ])
    def test_linear_entropy(self, rho, expected):
        assert_allclose(linear_entropy(DensityMatrix(rho.astype(complex), ())), expected)


class TestLocalUnitaries:
    def test_identity(self, ghz):
        out = apply_local_unitaries(ghz, [np.eye(2)] * 3)
        assert_allclose(out.amplitudes, ghz.amplitudes)

    def test_bit_flip(self, ghz):
        out = apply_local_unitaries(ghz, [X, np.eye(2), np.eye(2)])
        expected = np.zeros(8)
        expected[[4, 3]] = 1 / math.sqrt(2)
        assert_allclose(out.amplitudes, expected, atol=1e-15)

    def test_norm_preserved(self, rng):
        s = random_haar_state(3, 3, rng)
        out = apply_local_unitaries(s, [random_unitary(3, rng) for _ in range(3)])
        assert_allclose(out.norm(), 1.0, atol=1e-13)

    def test_rejects_non_unitary(self, ghz):
        with pytest.raises(ValueError):
            apply_local_unitaries(ghz, [2 * np.eye(2)] + [np.eye(2)] * 2)


class TestRandom:
    def test_d1_phase(self, rng):
        u = random_unitary(1, rng)
        assert u.shape == (1, 1)
        assert_allclose(abs(u[0, 0]), 1.0)

    @pytest.mark.parametrize("d", [2, 3, 5])
    def test_unitary(self, rng, d):
        u = random_unitary(d, rng)
        assert np.max(np.abs(u.conj().T @ u - np.eye(d))) <= 1e-12

    def test_haar_first_moment(self, rng):
        x = np.array([abs(random_unitary(4, rng)[0, 0]) ** 2 for _ in range(10_000)])
        assert abs(x.mean() - 0.25) < 3 * x.std(ddof=1) / math.sqrt(x.size)

    def test_haar_state_norm(self, rng):
        assert_allclose(random_haar_state(3, 3, rng).norm(), 1.0, atol=1e-12)

    def test_haar_state_second_moment(self, rng):
        x = np.array([np.sum(random_haar_state(3, 2, rng).probabilities ** 2) for _ in range(10_000)])
        assert abs(x.mean() - 2 / 9) < 3 * x.std(ddof=1) / math.sqrt(x.size)


class TestOverlap:
    def test_self(self, rng):
        s = random_haar_state(3, 2, rng)
        assert_allclose(overlap(s, s), 1.0)

    def test_ghz_components(self, ghz):
        assert_allclose(overlap(basis_state((0, 0, 0), 2), ghz), 1 / math.sqrt(2))
        assert_allclose(overlap(ghz, basis_state((1, 1, 1), 2)), 1 / math.sqrt(2))


class TestStateFiles:
    def test_round_trip(self, tmp_path, rng):
        s = random_haar_state(3, 3, rng)
        path = tmp_path / "s.json"
        write_state(s, path, note="x")
        back = read_state(path)
        assert (back.n_parties, back.local_dim) == (3, 3)
        assert np.array_equal(back.amplitudes, s.amplitudes)

    def test_renormalizes_and_reports(self):
        data = {"n_parties": 1, "local_dim": 2, "amplitudes": [[3, 0], [0, 4]]}
        s, norm = state_from_dict(data)
        assert_allclose(norm, 5.0)
        assert_allclose(s.amplitudes, [0.6, 0.8j])

    def test_dict_shape(self, ghz):
        d = state_to_dict(ghz)
        assert d["n_parties"] == 3 and len(d["amplitudes"]) == 8
