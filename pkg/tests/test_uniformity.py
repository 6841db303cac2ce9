import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from mindecomp.states import basis_state, random_haar_state, reshape_bipartition
from mindecomp.uniformity import bipartitions, is_ame, isometry_deviation, k_uniformity_deviation


class TestBipartitions:
    def test_all_pairs_of_four(self):
        assert len(bipartitions(4, 2, reduce_complements=False)) == 6

    def test_reduced_pairs_of_four(self):
        assert bipartitions(4, 2) == [(0, 1), (0, 2), (0, 3)]

    def test_five_choose_two(self):
        assert len(bipartitions(5, 2)) == 10

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            bipartitions(4, 3)

    def test_complements_share_spectrum(self, rng):
        # a pure state and the complement of a cut have the same nonzero marginal spectrum,
        # so dropping complements cannot hide a deviation
        s = random_haar_state(4, 2, rng)
        for sub in bipartitions(4, 2):
            comp = tuple(sorted(set(range(4)) - set(sub)))
            a = np.linalg.svd(reshape_bipartition(s, sub).entries, compute_uv=False)
            b = np.linalg.svd(reshape_bipartition(s, comp).entries, compute_uv=False)
            assert_allclose(np.sort(a), np.sort(b), atol=1e-12)


def test_isometry_deviation():
    assert isometry_deviation(np.eye(3)) == 0.0
    assert_allclose(isometry_deviation(np.diag([2.0, 1.0])), 3.0)


def test_ghz_one_uniform(ghz):
    rep = k_uniformity_deviation(ghz, 1)
    assert rep.max_deviation <= 1e-12
    assert rep.is_uniform
    assert rep.bipartitions_checked == [(0,), (1,), (2,)]


def test_ame43(ame43):
    assert k_uniformity_deviation(ame43, 2, tol=1e-10).is_uniform


def test_product_not_uniform():
    rep = k_uniformity_deviation(basis_state((0, 0, 0, 0), 3), 2)
    assert_allclose(rep.max_deviation, 8.0)
    assert not rep.is_uniform


def test_product_marginal_deviation():
    # in marginal terms ||d^k rho - I|| = d^k - 1; the k=1 qubit case gives exactly 1
    rep = k_uniformity_deviation(basis_state((0, 0, 0), 2), 1)
    assert_allclose(rep.max_deviation, 1.0)


def test_o16_ame(o16):
    assert is_ame(o16, tol=1e-8).is_uniform


def test_ghz_ame(ghz):
    assert is_ame(ghz, tol=1e-10).is_uniform


def test_haar_four_qubits_not_ame(rng):
    rep = is_ame(random_haar_state(4, 2, rng))
    assert rep.max_deviation > 1e-2


def test_report_dict(ghz):
    d = k_uniformity_deviation(ghz, 1).to_dict()
    assert d["is_uniform"] and len(d["per_bipartition"]) == 3
