"""Non-oblivious coverage objective and the PAV score.

The auxiliary objective weights a voter covered ``j`` times by ``alpha[j]``,
with ``alpha[0] = 0``, ``alpha[1] = 1 - 1/e`` and
``alpha[j+1] = (j+1) alpha[j] - j alpha[j-1] - 1/e``.  Multiply-covered voters
count a bit more than singly-covered ones, which keeps local search away from
committees whose coverage hangs on a single member.
"""

from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .profile import ApprovalProfile, check_committee, coverage_vector

INV_E = 1.0 / math.e


def _alpha_step(j: int) -> float:
    # alpha[j+1] - alpha[j] = (1/e) * sum_{i > j} j!/i!, summed as a tail series
    total, term, s = 0.0, 1.0, j
    while True:
        s += 1
        term /= s
        total += term
        if term < 1e-17 * total:
            return INV_E * total


def alpha_sequence(K: int) -> np.ndarray:
    """Return ``alpha[0..K]`` as a read-only float array.

    Notes
    -----
    Running the recurrence forward multiplies rounding error by ``j!`` (the
    steps go negative near ``K = 18`` in double precision).  The steps are
    instead summed from their closed form ``(1/e) sum_{i>j} j!/i!``, which
    satisfies the same recurrence.
    """
    if K < 1:
        raise ValueError(f"alpha sequence needs K >= 1, got {K}")
    a = np.zeros(K + 1)
    a[1:] = np.cumsum([_alpha_step(j) for j in range(K)])
    a.setflags(write=False)
    return a


def _check_alphas(h: np.ndarray, alphas: np.ndarray) -> None:
    if h.size and h.max() >= len(alphas):
        raise ValueError(f"coverage {int(h.max())} exceeds alpha sequence length K={len(alphas) - 1}")


def aux_score(profile: ApprovalProfile, w: Iterable[int], alphas: np.ndarray) -> float:
    """Mean of ``alpha[h_i(W)]`` over voters."""
    h = coverage_vector(profile, w)
    _check_alphas(h, alphas)
    return float(np.asarray(alphas)[h].sum() / profile.n)


def aux_swap_delta(profile: ApprovalProfile, w: Iterable[int], c_in: int, c_out: int, alphas: np.ndarray) -> float:
    """Change of :func:`aux_score` when ``c_out`` leaves and ``c_in`` joins ``w``."""
    members = check_committee(w, profile.m)
    check_committee([c_in], profile.m)
    if c_out not in members:
        raise ValueError(f"candidate {c_out} is not in the committee")
    if c_in in members:
        raise ValueError(f"candidate {c_in} is already in the committee")
    table = swap_gain_table(profile.matrix, list(members), [c_in], alphas)
    return float(table[0, members.index(c_out)] / profile.n)


def _level_diffs(alphas: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    # up[j] = alpha[j+1] - alpha[j], down[j] = alpha[j] - alpha[j-1]
    a = np.asarray(alphas, dtype=float)
    if len(a) < k + 1:
        raise ValueError(f"alpha sequence of length K={len(a) - 1} is too short for a committee of size {k}")
    up = np.zeros(k + 1)
    down = np.zeros(k + 1)
    up[:k] = a[1 : k + 1] - a[:k]
    down[1:] = a[1 : k + 1] - a[:k]
    return up, down


def swap_gain_table(responses: np.ndarray, w_cols, in_cols, alphas: np.ndarray) -> np.ndarray:
    """Summed change of ``alpha[h_i]`` for every exchange ``(in_cols[a], w_cols[b])``.

    Parameters
    ----------
    responses : ndarray of bool, shape (l, q)
        Approval bits of ``l`` voters over ``q`` candidates.
    w_cols : sequence of int
        Columns of ``responses`` holding the current committee.
    in_cols : sequence of int
        Columns of the candidates that may enter.
    alphas : ndarray
        Weight sequence, length at least ``len(w_cols) + 1``.

    Returns
    -------
    ndarray, shape (len(in_cols), len(w_cols))
        Entry ``[a, b]`` is ``sum_i alpha[h_i(W')] - alpha[h_i(W)]`` for the swapped
        committee ``W'``.  Divide by the number of rows to get the mean change.

    Notes
    -----
    Voters are bucketed by their coverage level and the buckets are reduced with
    exact 0/1 counts, so identical responses always give bit-identical tables no
    matter which other columns are present.
    """
    r = np.asarray(responses, dtype=bool)
    w_cols = list(w_cols)
    in_cols = list(in_cols)
    k = len(w_cols)
    up, down = _level_diffs(alphas, k)
    h = r[:, w_cols].sum(axis=1)
    gain = np.zeros((len(in_cols), k))
    for j in range(k + 1):
        rows = r[h == j]
        if rows.shape[0] == 0:
            continue
        rin = rows[:, in_cols].astype(float)
        rout = rows[:, w_cols].astype(float)
        both = rin.T @ rout
        n_in = rin.sum(axis=0)[:, None]
        n_out = rout.sum(axis=0)[None, :]
        # entering gains only where the leaving member was not approved, and vice versa
        if up[j]:
            gain += up[j] * (n_in - both)
        if down[j]:
            gain -= down[j] * (n_out - both)
    return gain


def pav_score(profile: ApprovalProfile, w: Iterable[int]) -> float:
    """Proportional Approval Voting score ``sum_i H(h_i(W))``, ``H`` the harmonic number."""
    h = coverage_vector(profile, w)
    if h.size == 0 or h.max() == 0:
        return 0.0
    harmonic = np.concatenate([[0.0], np.cumsum(1.0 / np.arange(1, h.max() + 1))])
    return float(harmonic[h].sum())
