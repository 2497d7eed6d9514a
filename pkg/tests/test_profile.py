from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diverse_committees import (ApprovalProfile, InvalidCommitteeError, approval_counts, cc_score, coverage_vector,
                                marginal_gain)
from diverse_committees.profile import covered_count

from conftest import profile_and_committee, profiles


class TestScores:
    def test_empty_committee_scores_zero(self, four_voters):
        assert cc_score(four_voters, []) == 0

    def test_unanimous_candidate_covers_all(self):
        p = ApprovalProfile.from_sets([{0}, {0, 2}, {0, 1}], m=3)
        assert cc_score(p, [0]) == 1

    def test_four_voter_pair(self, four_voters):
        assert cc_score(four_voters, [0, 1]) == Fraction(3, 4)

    def test_marginal_gain_examples(self, four_voters):
        assert marginal_gain(four_voters, [0], 1) == Fraction(1, 4)
        p = ApprovalProfile.from_sets([{0}, {0}, {0, 1}], m=3)
        assert marginal_gain(p, [], 0) == 1
        assert marginal_gain(p, [0], 2) == 0

    def test_marginal_gain_rejects_member(self, four_voters):
        with pytest.raises(ValueError, match="already"):
            marginal_gain(four_voters, [0, 1], 1)

    def test_coverage_vector(self):
        p = ApprovalProfile.from_sets([{0, 1}, {2}], m=3)
        assert coverage_vector(p, [0, 1]).tolist() == [2, 0]
        assert coverage_vector(p, []).tolist() == [0, 0]

    def test_approval_counts(self, four_voters):
        assert approval_counts(four_voters).tolist() == [2, 2, 1]
        assert approval_counts(ApprovalProfile.from_sets([[], []], m=2)).tolist() == [0, 0]
        p = ApprovalProfile.from_sets([{0}, {0}, {0}], m=4)
        assert approval_counts(p).tolist() == [3, 0, 0, 0]


class TestValidation:
    @pytest.mark.parametrize("w", [[0, 0], [3], [-1]])
    def test_bad_committees(self, four_voters, w):
        with pytest.raises(InvalidCommitteeError):
            cc_score(four_voters, w)

    def test_from_sets_rejects_out_of_range(self):
        with pytest.raises(ValueError, match="outside"):
            ApprovalProfile.from_sets([{5}], m=3)

    def test_matrix_is_frozen(self, four_voters):
        with pytest.raises(ValueError):
            four_voters.matrix[0, 0] = False

    def test_shape_checks(self):
        with pytest.raises(ValueError):
            ApprovalProfile(np.zeros(3, dtype=bool))
        with pytest.raises(ValueError):
            ApprovalProfile(np.zeros((0, 3), dtype=bool))

    def test_equality_and_hash(self, four_voters):
        same = ApprovalProfile(four_voters.matrix.copy())
        assert same == four_voters and hash(same) == hash(four_voters)
        assert four_voters.approvals[1] == frozenset({0, 1})


@given(profile_and_committee(), st.data())
def test_monotone(pw, data):
    prof, w = pw
    c = data.draw(st.integers(0, prof.m - 1))
    assert cc_score(prof, set(w) | {c}) >= cc_score(prof, w)


@given(profiles(min_m=2), st.data())
def test_submodular(prof, data):
    big = data.draw(st.lists(st.integers(0, prof.m - 1), unique=True, max_size=prof.m - 1))
    small = data.draw(st.sampled_from([big[:i] for i in range(len(big) + 1)]))
    outside = [c for c in range(prof.m) if c not in big]
    c = data.draw(st.sampled_from(outside))
    assert marginal_gain(prof, small, c) >= marginal_gain(prof, big, c)


@given(profile_and_committee())
def test_score_matches_coverage_vector(pw):
    prof, w = pw
    h = coverage_vector(prof, w)
    assert cc_score(prof, w) == Fraction(int((h >= 1).sum()), prof.n)
    assert 0 <= cc_score(prof, w) <= 1
    assert covered_count(prof, w) == int((h >= 1).sum())


@given(profile_and_committee(), st.randoms(use_true_random=False))
def test_relabeling_invariance(pw, rnd):
    prof, w = pw
    voters = list(range(prof.n))
    cands = list(range(prof.m))
    rnd.shuffle(voters)
    rnd.shuffle(cands)
    # new candidate j is old candidate cands[j]
    permuted = ApprovalProfile(prof.matrix[voters][:, cands])
    new_label = {old: new for new, old in enumerate(cands)}
    assert cc_score(permuted, [new_label[c] for c in w]) == cc_score(prof, w)
