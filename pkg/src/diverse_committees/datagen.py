"""Synthetic approval elections from the (q, phi)-resampling model.

Every voter starts from a central ballot approving the first ``floor(q m)``
candidates.  Independently for each (voter, candidate) pair, the central vote
is kept with probability ``1 - phi``; otherwise the vote is redrawn as an
approval with probability ``q``.

The approvalwise vector of an election is its per-candidate approval fractions
sorted in decreasing order.  Fitting ``phi`` to observed data compares that
vector with the expected (large-``n``) vector of the model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .profile import ApprovalProfile, approval_counts

DEFAULT_PHI_GRID = np.round(np.arange(101) / 100, 2)


@dataclass(frozen=True)
class ResampleParams:
    q: float
    phi: float
    n: int
    m: int
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if not 0.0 <= self.phi <= 1.0:
            raise ValueError(f"phi must lie in [0, 1], got {self.phi}")
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")


def central_size(q: float, m: int) -> int:
    # guard against 0.29 * 100 == 28.999...
    return int(math.floor(q * m + 1e-9))


def resample_election(params: ResampleParams, rng=None) -> ApprovalProfile:
    """Draw one election; ``rng`` overrides ``params.seed`` when given."""
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n, m = params.n, params.m
    central = np.zeros(m, dtype=bool)
    central[: central_size(params.q, m)] = True
    redraw = rng.random((n, m)) < params.phi
    fresh = rng.random((n, m)) < params.q
    return ApprovalProfile(np.where(redraw, fresh, central[None, :]))


def approvalwise_vector(profile: ApprovalProfile) -> np.ndarray:
    """Per-candidate approval fractions, sorted non-increasing."""
    return np.sort(approval_counts(profile) / profile.n)[::-1]


def limit_vector(q: float, phi: float, m: int) -> np.ndarray:
    """Expected approvalwise vector of the resampling model."""
    c = central_size(q, m)
    v = np.full(m, phi * q)
    v[:c] = (1.0 - phi) + phi * q
    return np.sort(v)[::-1]


def approvalwise_distance(a, b) -> float:
    """Mean absolute difference of two approvalwise vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"vector lengths differ: {a.shape} vs {b.shape}")
    return float(np.abs(a - b).mean())


def fit_q(profile: ApprovalProfile) -> float:
    """Fraction of all (voter, candidate) pairs that are approvals."""
    return float(profile.matrix.mean())


def fit_phi(profile: ApprovalProfile, q: float, grid=None) -> float:
    """Grid value of ``phi`` whose limit vector is closest to the profile's approvalwise vector.

    Ties go to the smallest ``phi``.
    """
    grid = DEFAULT_PHI_GRID if grid is None else np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError("phi grid is empty")
    if grid.min() < 0 or grid.max() > 1:
        raise ValueError("phi grid must lie within [0, 1]")
    vec = approvalwise_vector(profile)
    dist = np.array([approvalwise_distance(vec, limit_vector(q, phi, profile.m)) for phi in grid])
    best = dist.min()
    return float(grid[dist <= best + 1e-15].min())
