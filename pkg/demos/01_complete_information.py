"""Complete ballots: greedy, local search and the two baselines.

A small random election where the exact optimum is still cheap to compute,
so every rule can be compared against it.
"""

import numpy as np

from diverse_committees import (ApprovalProfile, approval_voting, exact_opt, greedy, local_search_beta, ls_beta,
                                ls_pav, uniform_matroid)

rng = np.random.default_rng(7)
profile = ApprovalProfile(rng.random((40, 12)) < 0.15)
k = 4
print(f"{profile.n} voters, {profile.m} candidates, committee size {k}")

best, opt = exact_opt(profile, k)
print(f"optimum      {best}  CC = {float(opt):.3f}")

res = greedy(profile, k)
print(f"greedy       {res.committee}  CC = {res.score:.3f}")

# the step threshold shrinks with k; gamma = 0.85 is the usual target
beta = ls_beta(0.85, k)
res = local_search_beta(profile, uniform_matroid(profile.m, k), beta, seed=1)
print(f"local search {res.committee}  CC = {res.score:.3f}  ({res.iterations} swaps, beta = {beta:.4f})")

res = approval_voting(profile, k)
print(f"AV           {res.committee}  CC = {res.score:.3f}")
res = ls_pav(profile, k, seed=1)
print(f"LS-PAV       {res.committee}  CC = {res.score:.3f}")

# greedy is guaranteed 1 - (1 - 1/k)^k of the optimum
print(f"greedy bound {(1 - (1 - 1 / k) ** k) * float(opt):.3f}")
