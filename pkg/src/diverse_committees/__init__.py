"""Diverse committee selection from approval ballots.

The objective is Chamberlin-Courant coverage: the share of voters who approve
at least one committee member.  Algorithms cover complete ballots, sampled
queries and noisy answers, under cardinality or quota constraints.
"""

from .algorithms import (
    RunResult,
    approval_voting,
    decode_majority,
    exact_opt,
    greedy,
    greedy_eps,
    greedy_inaccurate,
    greedy_incomplete,
    local_search_beta,
    ls_beta,
    ls_incomplete,
    ls_iteration_cap,
    ls_pav,
    m_budget_sample_size,
    query_budget_greedy,
    query_budget_ls,
    required_repeats_inaccurate,
    required_sample_size_greedy,
    required_sample_size_ls,
)
from .datagen import (
    ResampleParams,
    approvalwise_distance,
    approvalwise_vector,
    fit_phi,
    fit_q,
    limit_vector,
    resample_election,
)
from .fileio import parse_quota_config, read_manifest, read_profile, read_quota_config, write_profile
from .matroid import (
    Matroid,
    QuotaGroup,
    QuotaMatroid,
    QuotaSpec,
    UniformMatroid,
    check_matroid_axioms,
    is_independent,
    quota_matroid,
    random_basis,
    uniform_matroid,
    valid_exchanges,
)
from .objectives import alpha_sequence, aux_score, aux_swap_delta, pav_score
from .oracle import QueryOracle, aux_estimate, build_query_family, estimate_coverage_p, estimate_exact_p
from .polis import EmptyProfileError, PreprocessReport, RawVoteMatrix, Vote, VoteParseError, parse_votes, preprocess
from .profile import (
    ApprovalProfile,
    InvalidCommitteeError,
    approval_counts,
    cc_score,
    coverage_vector,
    marginal_gain,
)

__version__ = "0.1.0"
