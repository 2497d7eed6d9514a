"""Incomplete information: voters answer questions about t candidates only.

Each query asks one sampled voter whether they approve anyone in a set of t
candidates.  The sample size per query set follows from (gamma, delta); the
M-budget variant instead fixes the expected number of queries per voter.
"""

import numpy as np

from diverse_committees import (QueryOracle, greedy, greedy_incomplete, m_budget_sample_size, query_budget_greedy,
                                required_sample_size_greedy, resample_election, ResampleParams)

profile = resample_election(ResampleParams(q=0.09, phi=0.7, n=1000, m=100, seed=5))
k, t = 6, 15
full = greedy(profile, k).score
print(f"greedy with full ballots: CC = {full:.4f}")

eps, ell = required_sample_size_greedy(0.85, 0.05, profile.m, k)
print(f"worst-case sample size per query set: l = {ell} (eps = {eps:.3f})")
print(f"worst-case total queries: {query_budget_greedy(0.85, 0.05, profile.m, k, t):,}")

res = greedy_incomplete(QueryOracle(profile, seed=0), k, t)
print(f"theory-sized run: CC = {res.score:.4f}, {res.queries:,} queries")

for M in (1, 2, 5):
    ell = m_budget_sample_size(M, profile.n, profile.m, k, t)
    scores = [greedy_incomplete(QueryOracle(profile, seed=s), k, t, ell=ell).score for s in range(5)]
    print(f"M = {M}: l = {ell:3d}, relative CC {np.mean(scores) / full:.3f}")
