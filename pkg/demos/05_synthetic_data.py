"""The resampling model: draw elections and fit (q, phi) back from them."""

import numpy as np

from diverse_committees import (ResampleParams, approvalwise_distance, approvalwise_vector, fit_phi, fit_q,
                                limit_vector, resample_election)

q, phi = 0.0891, 0.693
profile = resample_election(ResampleParams(q, phi, n=2000, m=200, seed=0))
print(f"drawn with q = {q}, phi = {phi}")

q_hat = fit_q(profile)
phi_hat = fit_phi(profile, q_hat)
print(f"fitted q = {q_hat:.4f}, phi = {phi_hat:.2f}")

# sorted approval rates against their large-n limit
emp = approvalwise_vector(profile)
lim = limit_vector(q, phi, profile.m)
print("first approval rates:", np.round(emp[:5], 3), "limit:", np.round(lim[:5], 3))
print(f"approvalwise distance: {approvalwise_distance(emp, lim):.4f}")

# phi = 0 copies the central ballot; phi = 1 is independent coin flips
flat = resample_election(ResampleParams(q, 0.0, n=5, m=20, seed=1))
print("phi = 0 ballots identical:", bool((flat.matrix == flat.matrix[0]).all()))
