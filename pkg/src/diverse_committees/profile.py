"""Approval profiles and the Chamberlin-Courant objective.

A profile is stored as a read-only boolean matrix of shape ``(n, m)``: row ``i``
is voter ``i``'s ballot, column ``j`` is candidate ``j``.  Scores are computed
from integer coverage counts, so comparisons inside the algorithms never depend
on floating point rounding.  :func:`cc_score` and :func:`marginal_gain` return
exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class InvalidCommitteeError(ValueError):
    """Raised when a committee references unknown or repeated candidates."""


class ApprovalProfile:
    """Approval ballots of ``n`` voters over ``m`` candidates.

    Parameters
    ----------
    matrix : array_like of bool, shape (n, m)
        ``matrix[i, j]`` is true when voter ``i`` approves candidate ``j``.

    Notes
    -----
    The matrix is copied and frozen; profiles are immutable and safe to share.
    """

    __slots__ = ("_matrix", "_approvals")

    def __init__(self, matrix):
        a = np.array(matrix, dtype=bool, copy=True)
        if a.ndim != 2:
            raise ValueError(f"approval matrix must be 2-dimensional, got shape {a.shape}")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got shape {a.shape}")
        a.setflags(write=False)
        self._matrix = a
        self._approvals = None

    @classmethod
    def from_sets(cls, approvals: Sequence[Iterable[int]], m: int) -> "ApprovalProfile":
        """Build a profile from per-voter collections of approved candidate indices."""
        approvals = [list(a) for a in approvals]
        if m < 1 or len(approvals) < 1:
            raise ValueError("need n >= 1 and m >= 1")
        a = np.zeros((len(approvals), m), dtype=bool)
        for i, ballot in enumerate(approvals):
            if len(set(ballot)) != len(ballot):
                raise ValueError(f"voter {i} lists a candidate twice: {ballot}")
            for j in ballot:
                if not 0 <= j < m:
                    raise ValueError(f"voter {i} approves candidate {j}, outside 0..{m - 1}")
                a[i, j] = True
        return cls(a)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def n(self) -> int:
        return self._matrix.shape[0]

    @property
    def m(self) -> int:
        return self._matrix.shape[1]

    @property
    def approvals(self) -> tuple[frozenset, ...]:
        if self._approvals is None:
            self._approvals = tuple(frozenset(np.flatnonzero(row).tolist()) for row in self._matrix)
        return self._approvals

    def approves(self, voter: int, candidate: int) -> bool:
        return bool(self._matrix[voter, candidate])

    def nonempty_ballots(self) -> int:
        return int(self._matrix.any(axis=1).sum())

    def __eq__(self, other):
        if not isinstance(other, ApprovalProfile):
            return NotImplemented
        return self._matrix.shape == other._matrix.shape and bool(np.array_equal(self._matrix, other._matrix))

    def __hash__(self):
        return hash((self._matrix.shape, self._matrix.tobytes()))

    def __repr__(self):
        return f"ApprovalProfile(n={self.n}, m={self.m}, approvals={int(self._matrix.sum())})"


def check_committee(w: Iterable[int], m: int, k: int | None = None) -> tuple[int, ...]:
    """Validate a committee and return it as a tuple of ints (order kept)."""
    members = tuple(int(c) for c in w)
    if len(set(members)) != len(members):
        raise InvalidCommitteeError(f"committee has repeated candidates: {members}")
    for c in members:
        if not 0 <= c < m:
            raise InvalidCommitteeError(f"candidate {c} outside 0..{m - 1}")
    if k is not None and len(members) > k:
        raise InvalidCommitteeError(f"committee of size {len(members)} exceeds capacity k={k}")
    return members


def covered_mask(profile: ApprovalProfile, w: Iterable[int]) -> np.ndarray:
    members = check_committee(w, profile.m)
    if not members:
        return np.zeros(profile.n, dtype=bool)
    return profile.matrix[:, list(members)].any(axis=1)


def covered_count(profile: ApprovalProfile, w: Iterable[int]) -> int:
    """Number of voters approving at least one member of ``w``."""
    return int(covered_mask(profile, w).sum())


def cc_score(profile: ApprovalProfile, w: Iterable[int]) -> Fraction:
    """Chamberlin-Courant score: fraction of voters with a representative in ``w``.

    >>> p = ApprovalProfile.from_sets([{0}, {0, 1}, {1}, {2}], m=3)
    >>> cc_score(p, [0, 1])
    Fraction(3, 4)
    """
    return Fraction(covered_count(profile, w), profile.n)


def marginal_gain(profile: ApprovalProfile, w: Iterable[int], c: int) -> Fraction:
    """Increase in CC score from adding ``c`` to ``w``.

    Raises
    ------
    ValueError
        If ``c`` already belongs to ``w``.
    """
    members = check_committee(w, profile.m)
    check_committee([c], profile.m)
    if c in members:
        raise ValueError(f"candidate {c} is already in the committee")
    fresh = ~covered_mask(profile, members) & profile.matrix[:, c]
    return Fraction(int(fresh.sum()), profile.n)


def coverage_vector(profile: ApprovalProfile, w: Iterable[int]) -> np.ndarray:
    """Per-voter count of approved committee members, ``h_i = |A(i) & W|``."""
    members = check_committee(w, profile.m)
    if not members:
        return np.zeros(profile.n, dtype=np.int64)
    return profile.matrix[:, list(members)].sum(axis=1, dtype=np.int64)


def approval_counts(profile: ApprovalProfile) -> np.ndarray:
    """Number of approvers per candidate."""
    return profile.matrix.sum(axis=0, dtype=np.int64)
