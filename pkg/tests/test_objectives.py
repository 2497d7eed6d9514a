import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diverse_committees import ApprovalProfile, alpha_sequence, aux_score, aux_swap_delta, cc_score, pav_score
from diverse_committees.objectives import swap_gain_table

from conftest import profile_and_committee, profiles

# frozen from a 250-digit mpmath run of the forward recurrence
ALPHA_REFERENCE = {1: 0.63212055882855768, 2: 0.89636167648567304, 3: 1.0569644706284614, 8: 1.4416214925790073,
                   16: 1.7062668086144745, 32: 1.9665510613475369, 64: 2.2243060501357159}


class TestAlpha:
    def test_reference_values(self):
        a = alpha_sequence(64)
        assert a[0] == 0.0
        for j, v in ALPHA_REFERENCE.items():
            assert a[j] == pytest.approx(v, abs=1e-12)

    def test_closed_form_two(self):
        assert alpha_sequence(2)[2] == pytest.approx(2 - 3 / math.e, abs=1e-15)

    @pytest.mark.parametrize("K", [2, 5, 12])
    def test_satisfies_recurrence(self, K):
        a = alpha_sequence(K)
        for j in range(1, K):
            assert a[j + 1] == pytest.approx((j + 1) * a[j] - j * a[j - 1] - 1 / math.e, abs=1e-12)

    def test_rejects_k0(self):
        with pytest.raises(ValueError):
            alpha_sequence(0)

    @pytest.mark.parametrize("K", [1, 2, 8, 32, 64])
    def test_differences_in_range(self, K):
        d = np.diff(alpha_sequence(K))
        assert (d > 0).all()
        assert (d <= 1 - 1 / math.e + 1e-12).all()

    def test_read_only(self):
        with pytest.raises(ValueError):
            alpha_sequence(3)[1] = 0.0


class TestAux:
    def test_empty_committee(self, four_voters):
        assert aux_score(four_voters, [], alpha_sequence(3)) == 0

    def test_single_cover_gives_alpha1(self):
        p = ApprovalProfile.from_sets([{0}, {1}, {0}], m=2)
        a = alpha_sequence(2)
        assert aux_score(p, [0, 1], a) == pytest.approx(a[1])

    def test_h_two_zero(self):
        p = ApprovalProfile.from_sets([{0, 1}, {2}], m=3)
        assert aux_score(p, [0, 1], alpha_sequence(2)) == pytest.approx(0.448181, abs=1e-6)

    def test_symmetric_swap_is_zero(self):
        p = ApprovalProfile.from_sets([{0}, {1}], m=2)
        assert aux_swap_delta(p, [0], 1, 0, alpha_sequence(2)) == 0.0

    def test_unapproved_swap_is_zero(self):
        p = ApprovalProfile.from_sets([{0}, {0}], m=3)
        assert aux_swap_delta(p, [1], 2, 1, alpha_sequence(2)) == 0.0

    def test_self_swap_rejected(self, four_voters):
        with pytest.raises(ValueError):
            aux_swap_delta(four_voters, [0, 1], 0, 0, alpha_sequence(2))

    def test_coverage_beyond_alphas_rejected(self):
        p = ApprovalProfile.from_sets([{0, 1, 2}], m=3)
        with pytest.raises(ValueError, match="exceeds"):
            aux_score(p, [0, 1, 2], alpha_sequence(2))


class TestPav:
    def test_examples(self, four_voters):
        assert pav_score(four_voters, []) == 0
        assert pav_score(ApprovalProfile.from_sets([{0, 1}], m=2), [0, 1]) == pytest.approx(1.5)
        assert pav_score(four_voters, [0, 1]) == pytest.approx(3.5)


@given(profile_and_committee(max_m=7))
def test_unit_weights_reproduce_cc(pw):
    prof, w = pw
    ones = np.ones(prof.m + 1)
    ones[0] = 0.0
    assert aux_score(prof, w, ones) == pytest.approx(float(cc_score(prof, w)), abs=1e-12)


@given(profile_and_committee(max_m=7), st.data())
def test_aux_monotone(pw, data):
    prof, w = pw
    c = data.draw(st.integers(0, prof.m - 1))
    a = alpha_sequence(prof.m)
    assert aux_score(prof, set(w) | {c}, a) >= aux_score(prof, w, a) - 1e-12


@given(profiles(min_m=2, max_m=7), st.data())
def test_swap_antisymmetry_and_consistency(prof, data):
    w = data.draw(st.lists(st.integers(0, prof.m - 1), unique=True, min_size=1, max_size=prof.m - 1))
    c_out = data.draw(st.sampled_from(w))
    c_in = data.draw(st.sampled_from([c for c in range(prof.m) if c not in w]))
    a = alpha_sequence(prof.m)
    d = aux_swap_delta(prof, w, c_in, c_out, a)
    w2 = sorted((set(w) - {c_out}) | {c_in})
    assert d == pytest.approx(aux_score(prof, w2, a) - aux_score(prof, w, a), abs=1e-12)
    assert aux_swap_delta(prof, w2, c_out, c_in, a) == pytest.approx(-d, abs=1e-12)


@given(profiles(min_m=3, max_m=8), st.data())
def test_gain_table_matches_bruteforce(prof, data):
    w = data.draw(st.lists(st.integers(0, prof.m - 1), unique=True, min_size=1, max_size=prof.m - 1))
    outside = [c for c in range(prof.m) if c not in w]
    a = alpha_sequence(len(w))
    table = swap_gain_table(prof.matrix, w, outside, a) / prof.n
    for i, c_in in enumerate(outside):
        for j, c_out in enumerate(w):
            w2 = (set(w) - {c_out}) | {c_in}
            assert table[i, j] == pytest.approx(aux_score(prof, w2, a) - aux_score(prof, w, a), abs=1e-12)
