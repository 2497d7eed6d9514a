"""Inaccurate answers: every reply is flipped with probability p < 1/2.

Repeating each question U times and taking the majority recovers the true
ballots with probability 1 - delta; greedy then runs on the decoded profile.
"""

import numpy as np

from diverse_committees import (ApprovalProfile, QueryOracle, decode_majority, greedy, greedy_inaccurate,
                                required_repeats_inaccurate)

rng = np.random.default_rng(11)
n, m, k, p = 50, 20, 4, 0.1
profile = ApprovalProfile(rng.random((n, m)) < 0.3)

U = required_repeats_inaccurate(p, 0.05, n, m)
print(f"p = {p}: ask every question U = {U} times")

once = decode_majority(QueryOracle(profile, p=p, seed=0), 1)
print("wrong entries after a single read:", int((once.matrix != profile.matrix).sum()))
decoded = decode_majority(QueryOracle(profile, p=p, seed=0), U)
print("wrong entries after majority decoding:", int((decoded.matrix != profile.matrix).sum()))

res = greedy_inaccurate(QueryOracle(profile, p=p, seed=1), k)
print(f"greedy on decoded ballots: {res.committee}, CC = {res.score:.3f}, {res.queries} queries")
print(f"greedy on true ballots:    {greedy(profile, k).committee}")
