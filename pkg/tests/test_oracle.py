import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from diverse_committees import (ApprovalProfile, QueryOracle, alpha_sequence, aux_estimate, aux_score,
                                build_query_family, cc_score, estimate_coverage_p, estimate_exact_p)
from diverse_committees.oracle import family_size

from conftest import random_profile


class TestPresent:
    def test_exact_all_ones(self):
        p = ApprovalProfile.from_sets([{0, 1, 2}, {1}], m=4)
        oracle = QueryOracle(p)
        assert oracle.present(0, [0, 1, 2]).all()
        assert oracle.queries == 3

    def test_exact_is_deterministic(self, four_voters):
        oracle = QueryOracle(four_voters, seed=1)
        a = oracle.present_many([0, 1, 2, 3], [0, 1, 2])
        b = oracle.present_many([0, 1, 2, 3], [0, 1, 2])
        assert np.array_equal(a, b)
        assert np.array_equal(a, four_voters.matrix)
        assert oracle.queries == 24

    @pytest.mark.parametrize("p", [0.5, -0.1, 0.7])
    def test_bad_flip_probability(self, four_voters, p):
        with pytest.raises(ValueError):
            QueryOracle(four_voters, p=p)

    def test_tiny_noise_behaves_exactly(self):
        prof = random_profile(np.random.default_rng(0), 50, 10, 0.3)
        oracle = QueryOracle(prof, p=1e-12, seed=3)
        assert np.array_equal(oracle.present_many(range(50), range(10)), prof.matrix)

    def test_flip_rate(self):
        prof = ApprovalProfile(np.zeros((100, 100), dtype=bool))
        p = 0.1
        oracle = QueryOracle(prof, p=p, seed=11)
        flips = oracle.present_many(range(100), range(100)).sum()
        sigma = math.sqrt(1e4 * p * (1 - p))
        assert abs(flips - 1e4 * p) < 3 * sigma
        # later calls are fresh draws
        assert not np.array_equal(oracle.present_many(range(100), range(100)),
                                  oracle.present_many(range(100), range(100)))

    def test_tally_counts_every_repeat(self, four_voters):
        oracle = QueryOracle(four_voters, p=0.2, seed=0)
        counts = oracle.tally(range(4), [0, 1, 2], 7)
        assert counts.shape == (4, 3) and counts.max() <= 7
        assert oracle.queries == 4 * 3 * 7

    def test_rejects_bad_queries(self, four_voters):
        oracle = QueryOracle(four_voters)
        with pytest.raises(ValueError):
            oracle.present(0, [])
        with pytest.raises(ValueError):
            oracle.present(9, [0])
        with pytest.raises(ValueError):
            oracle.present(0, [0, 0])

    def test_evaluate_is_free(self, four_voters):
        oracle = QueryOracle(four_voters)
        assert oracle.evaluate([0, 1]) == cc_score(four_voters, [0, 1])
        assert oracle.queries == 0


class TestSampling:
    def test_single_voter(self):
        oracle = QueryOracle(ApprovalProfile.from_sets([{0}], m=1), seed=2)
        assert oracle.sample_voters(10).tolist() == [0] * 10

    def test_reproducible(self, four_voters):
        a = QueryOracle(four_voters, seed=5).sample_voters(20)
        b = QueryOracle(four_voters, seed=5).sample_voters(20)
        assert np.array_equal(a, b)

    def test_census(self, four_voters):
        oracle = QueryOracle(four_voters, census=True)
        assert oracle.sample_voters(4).tolist() == [0, 1, 2, 3]
        with pytest.raises(ValueError, match="census"):
            oracle.sample_voters(3)

    def test_rejects_empty_sample(self, four_voters):
        with pytest.raises(ValueError):
            QueryOracle(four_voters).sample_voters(0)


class TestQueryFamily:
    def test_paper_scale_size(self):
        fam = build_query_family(1000, list(range(8)), 20)
        assert len(fam) == 83 == math.ceil(992 / 12)

    def test_single_set_when_t_equals_m(self):
        fam = build_query_family(6, [4], 6)
        assert len(fam) == 1 and sorted(fam.sets[0]) == list(range(6))

    def test_rejects_small_t(self):
        with pytest.raises(ValueError):
            build_query_family(10, [0, 1, 2], 3)
        with pytest.raises(ValueError):
            family_size(10, 2, 11)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(3, 40), st.data())
    def test_structure(self, m, data):
        k = data.draw(st.integers(0, m - 2))
        t = data.draw(st.integers(k + 1, m))
        w = data.draw(st.lists(st.integers(0, m - 1), unique=True, min_size=k, max_size=k))
        size_for = data.draw(st.one_of(st.none(), st.integers(k, t - 1)))
        fam = build_query_family(m, w, t, size_for=size_for)
        anchor = k if size_for is None else size_for
        assert len(fam) == family_size(m, anchor, t)
        for q in fam.sets:
            assert len(q) == t and len(set(q)) == t
            assert q[:k] == tuple(w)
        covered = set().union(*map(set, fam.sets))
        assert covered == set(range(m))
        assert set(fam.primary) == set(range(m)) - set(w)
        for c, idx in fam.primary.items():
            assert c in fam.sets[idx]


class TestEstimators:
    def test_coverage_examples(self):
        q = [5, 7, 9]
        r = np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0]], dtype=bool)
        assert estimate_coverage_p(r, q, [5, 7]) == 0.75
        assert estimate_coverage_p(r[:2], q, [5, 7]) == 1.0
        assert estimate_coverage_p(r[2:3], q, [5, 7]) == 0.0
        with pytest.raises(ValueError):
            estimate_coverage_p(r, q, [6])

    def test_exact_pattern_examples(self):
        r = np.array([[1, 0], [1, 1]], dtype=bool)
        assert estimate_exact_p(r, [0, 1]) == {frozenset({0}): 0.5, frozenset({0, 1}): 0.5}
        same = np.array([[0, 1], [0, 1], [0, 1]], dtype=bool)
        assert estimate_exact_p(same, [3, 4]) == {frozenset({4}): 1.0}

    def test_aux_estimate_matches_population(self):
        prof = random_profile(np.random.default_rng(1), 40, 6, 0.4)
        q = list(range(6))
        exact = estimate_exact_p(prof.matrix, q)
        a = alpha_sequence(6)
        for s in ([0], [1, 3], [0, 2, 4, 5]):
            assert aux_estimate(exact, s, a) == pytest.approx(aux_score(prof, s, a), abs=1e-12)

    def test_unbiased(self):
        rng = np.random.default_rng(7)
        prof = random_profile(rng, 60, 5, 0.3)
        oracle = QueryOracle(prof, seed=8)
        q, s = [0, 1, 2, 3, 4], [1, 3]
        ell, reps = 20, 1000
        est = np.array([estimate_coverage_p(oracle.present_many(oracle.sample_voters(ell), q), q, s)
                        for _ in range(reps)])
        truth = float(cc_score(prof, s))
        se = math.sqrt(truth * (1 - truth) / (ell * reps))
        assert abs(est.mean() - truth) < 3 * se
