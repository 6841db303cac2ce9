import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mindecomp.designs import known_state
from mindecomp.entropy import ipr, renyi_entropy
from mindecomp.lppca import fp_objective
from mindecomp.minentropy import (
    MinEntropyConfig,
    entropy_vs_q_sweep,
    minimize_entropy,
    minimize_entropy_once,
    party_matrix,
    random_seed_units,
)
from mindecomp.states import (
    apply_local_unitaries,
    basis_state,
    random_haar_state,
    random_unitary,
)

LN2 = math.log(2)


class TestPartyMatrix:
    def test_product_rank_one(self, rng):
        s = basis_state((0, 1, 0), 2)
        units = [random_unitary(2, rng) for _ in range(3)]
        for i in range(3):
            assert np.linalg.matrix_rank(party_matrix(s, i, units), tol=1e-12) == 1

    def test_ghz(self, ghz):
        m = party_matrix(ghz, 0, [np.eye(2)] * 3)
        r = 1 / math.sqrt(2)
        assert_allclose(m, [[r, 0, 0, 0], [0, 0, 0, r]])

    @pytest.mark.parametrize("q", [1.5, 2.0, 4.0])
    def test_norm_is_ipr(self, rng, q):
        s = random_haar_state(3, 3, rng)
        units = [random_unitary(3, rng) for _ in range(3)]
        for i in range(3):
            with_identity = list(units)
            with_identity[i] = np.eye(3)
            lhs = fp_objective(np.eye(3), party_matrix(s, i, units), 2 * q)
            assert_allclose(lhs, ipr(apply_local_unitaries(s, with_identity), q), rtol=1e-12)


class TestConfig:
    @pytest.mark.parametrize("q", [1.0, 0.5, math.inf])
    def test_rejects_q(self, q):
        with pytest.raises(ValueError):
            MinEntropyConfig(q=q)


class TestMinimize:
    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_ghz(self, ghz, seed):
        res = minimize_entropy(ghz, MinEntropyConfig(restarts=20, rng_seed=seed))
        assert_allclose(res.entropy, LN2, atol=1e-6)

    def test_ame43_identity_seed(self, ame43):
        res = minimize_entropy_once(ame43, 2.0, [np.eye(3)] * 4)
        assert_allclose(res.entropy, math.log(9), atol=1e-12)
        assert_allclose(res.trace[0], math.log(9), atol=1e-12)

    def test_rotated_product(self, rng):
        s = apply_local_unitaries(basis_state((0, 0, 0), 2), [random_unitary(2, rng) for _ in range(3)])
        assert renyi_entropy(s, 2) > 0.1
        res = minimize_entropy(s, MinEntropyConfig(restarts=5))
        assert res.entropy <= 1e-8

    def test_rotated_ame43(self, ame43, rng):
        s = apply_local_unitaries(ame43, [random_unitary(3, rng) for _ in range(4)])
        res = minimize_entropy(s)
        assert_allclose(res.entropy, math.log(9), atol=1e-3)

    def test_traces_monotone(self, rng):
        s = random_haar_state(3, 3, rng)
        res = minimize_entropy(s, MinEntropyConfig(q=3.0, restarts=6))
        assert np.all(np.diff(res.trace) <= 1e-10)

    def test_already_minimal_input(self):
        s = known_state("o16_ref")
        res = minimize_entropy(s, MinEntropyConfig(restarts=2))
        assert res.entropy <= renyi_entropy(s, 2) + 1e-12
        assert len(res.restart_traces) == 3

    def test_feasibility(self, rng):
        s = random_haar_state(3, 2, rng)
        res = minimize_entropy(s, MinEntropyConfig(restarts=4))
        assert res.entropy <= renyi_entropy(s, 2) + 1e-12

    def test_result_is_consistent(self, rng):
        s = random_haar_state(3, 2, rng)
        res = minimize_entropy(s, MinEntropyConfig(restarts=4))
        again = apply_local_unitaries(s, res.units)
        assert_allclose(renyi_entropy(again, 2), res.entropy, rtol=1e-12)
        assert_allclose(again.amplitudes, res.optimized_state.amplitudes)
        assert res.entropy == min(r.entropy for r in res.restart_traces)

    def test_reproducible(self, rng):
        s = random_haar_state(3, 2, rng)
        a = minimize_entropy(s, MinEntropyConfig(restarts=3, rng_seed=7))
        b = minimize_entropy(s, MinEntropyConfig(restarts=3, rng_seed=7))
        assert a.to_dict() == b.to_dict()

    def test_batch_matches_single_runs(self, rng):
        s = random_haar_state(3, 2, rng)
        cfg = MinEntropyConfig(restarts=3, rng_seed=11)
        batch = minimize_entropy(s, cfg)
        seeds = random_seed_units(3, 2, 3, np.random.default_rng(11))
        singles = [minimize_entropy_once(s, 2.0, seeds[b], cfg).entropy for b in range(3)]
        assert_allclose([r.entropy for r in batch.restart_traces[:3]], singles, rtol=1e-10)

    def test_lu_invariant(self, rng):
        s = random_haar_state(3, 2, rng)
        t = apply_local_unitaries(s, [random_unitary(2, rng) for _ in range(3)])
        a = minimize_entropy(s, MinEntropyConfig(restarts=20)).entropy
        b = minimize_entropy(t, MinEntropyConfig(restarts=20)).entropy
        assert_allclose(a, b, atol=1e-6)


class TestBounds:
    def test_ame_lower_bound(self, o16):
        res = minimize_entropy(o16, MinEntropyConfig(restarts=5))
        assert res.entropy >= math.log(16) - 1e-6


class TestSweep:
    def test_ghz_constant(self, ghz):
        rows = entropy_vs_q_sweep(ghz, [1.5, 2, 5, 50], MinEntropyConfig(restarts=10))
        for q, s, smin in rows:
            assert_allclose(s, LN2, atol=1e-12)
            assert_allclose(smin, LN2, atol=1e-6)

    def test_rows(self, rng):
        s = random_haar_state(3, 2, rng)
        rows = entropy_vs_q_sweep(s, [2, 3], MinEntropyConfig(restarts=4))
        assert [r[0] for r in rows] == [2.0, 3.0]
        assert all(m <= e + 1e-12 for _, e, m in rows)
