"""Quota constraints: seats per candidate group, enforced through a matroid."""

import numpy as np

from diverse_committees import ApprovalProfile, QuotaSpec, local_search_beta, ls_beta, quota_matroid

rng = np.random.default_rng(3)
m, k = 10, 4
profile = ApprovalProfile(rng.random((60, m)) < 0.2)

# candidates 0-4 are group "north", 5-7 group "south"; 8 and 9 are unconstrained
spec = QuotaSpec.from_mapping(m, k, {"north": ([0, 1, 2, 3, 4], 1, 2), "south": ([5, 6, 7], 1, 1)})
spec.validate()
matroid = quota_matroid(spec)
print("rank of the quota matroid:", matroid.rank)

res = local_search_beta(profile, matroid, ls_beta(0.85, k), seed=0)
print("committee:", res.committee, "CC =", round(res.score, 3))
print("quotas met:", matroid.satisfies_quotas(res.committee))
north = sum(c <= 4 for c in res.committee)
south = sum(5 <= c <= 7 for c in res.committee)
print(f"north seats {north} (1..2), south seats {south} (exactly 1)")
