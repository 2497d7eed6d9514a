"""Query access to hidden ballots.

Algorithms for the incomplete and inaccurate settings never touch the profile
matrix directly; they go through a :class:`QueryOracle`, which answers
``(voter, candidate set)`` questions, optionally flips each answer with
probability ``p`` and counts every individual ``(voter, candidate)`` lookup.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .profile import ApprovalProfile, check_committee


class QueryOracle:
    """Gateway to a hidden :class:`ApprovalProfile`.

    Parameters
    ----------
    profile : ApprovalProfile
        The ground truth.
    p : float, default 0
        Flip probability of every answer.  ``0`` gives exact answers; otherwise
        it must lie in ``(0, 1/2)``.
    seed : int or numpy.random.Generator, optional
        Source of voter sampling and answer noise.
    census : bool, default False
        When set, :meth:`sample_voters` returns every voter exactly once, in
        index order, so sample estimates equal population values.

    Notes
    -----
    An oracle carries a counter and a random generator, so give every run its
    own instance.
    """

    def __init__(self, profile: ApprovalProfile, p: float = 0.0, seed=None, census: bool = False):
        if not 0.0 <= p < 0.5:
            raise ValueError(f"flip probability must be 0 or lie in (0, 1/2), got {p}")
        self._profile = profile
        self.p = float(p)
        self.census = bool(census)
        self.rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        self.queries = 0

    @property
    def n(self) -> int:
        return self._profile.n

    @property
    def m(self) -> int:
        return self._profile.m

    @property
    def exact(self) -> bool:
        return self.p == 0.0

    def _check(self, voters: np.ndarray, q: Sequence[int]) -> list[int]:
        q = list(check_committee(q, self.m))
        if not q:
            raise ValueError("query set must be nonempty")
        if voters.size and (voters.min() < 0 or voters.max() >= self.n):
            raise ValueError(f"voter index outside 0..{self.n - 1}")
        return q

    def present_many(self, voters: Iterable[int], q: Sequence[int]) -> np.ndarray:
        """Ask each voter in ``voters`` about every candidate in ``q``.

        Returns a boolean array of shape ``(len(voters), len(q))``; the counter
        grows by ``len(voters) * len(q)``.
        """
        voters = np.asarray(list(voters) if not isinstance(voters, np.ndarray) else voters, dtype=np.int64)
        q = self._check(voters, q)
        bits = self._profile.matrix[np.ix_(voters, q)]
        if self.p > 0.0:
            bits = bits ^ (self.rng.random(bits.shape) < self.p)
        self.queries += bits.size
        return bits

    def present(self, voter: int, q: Sequence[int]) -> np.ndarray:
        return self.present_many([voter], q)[0]

    def tally(self, voters: Iterable[int], q: Sequence[int], repeats: int) -> np.ndarray:
        """Number of "approve" answers when each lookup is repeated ``repeats`` times.

        Equivalent in distribution to calling :meth:`present_many` ``repeats``
        times and summing, but draws one binomial per lookup.
        """
        if repeats < 1:
            raise ValueError(f"repeats must be >= 1, got {repeats}")
        voters = np.asarray(list(voters) if not isinstance(voters, np.ndarray) else voters, dtype=np.int64)
        q = self._check(voters, q)
        truth = self._profile.matrix[np.ix_(voters, q)]
        if self.p == 0.0:
            counts = truth.astype(np.int64) * repeats
        else:
            prob = np.where(truth, 1.0 - self.p, self.p)
            counts = self.rng.binomial(repeats, prob)
        self.queries += truth.size * repeats
        return counts

    def evaluate(self, w: Iterable[int]):
        """True CC score of ``w``.  For reporting only; not counted as queries."""
        from .profile import cc_score

        return cc_score(self._profile, w)

    def sample_voters(self, ell: int) -> np.ndarray:
        """``ell`` voters drawn uniformly with replacement (all voters once in census mode)."""
        if ell < 1:
            raise ValueError(f"sample size must be >= 1, got {ell}")
        if self.census:
            if ell != self.n:
                raise ValueError(f"census mode samples all n={self.n} voters, got l={ell}")
            return np.arange(self.n)
        return self.rng.integers(0, self.n, size=ell)


@dataclass(frozen=True)
class QueryFamily:
    """Query sets that all contain ``anchor`` and together cover every candidate.

    ``primary[c]`` is the index of the set whose responses are used to
    estimate candidate ``c``'s contribution.
    """

    sets: tuple[tuple[int, ...], ...]
    anchor: tuple[int, ...]
    t: int
    primary: dict

    def __len__(self):
        return len(self.sets)


def family_size(m: int, w_size: int, t: int) -> int:
    if not t > w_size:
        raise ValueError(f"query size t={t} must exceed committee size {w_size}")
    if t > m:
        raise ValueError(f"query size t={t} exceeds number of candidates m={m}")
    return max(1, math.ceil((m - w_size) / (t - w_size)))


def build_query_family(m: int, w: Sequence[int], t: int, size_for: int | None = None) -> QueryFamily:
    """Smallest family of size-``t`` query sets containing ``w`` and covering ``0..m-1``.

    Parameters
    ----------
    m : int
        Number of candidates.
    w : sequence of int
        Current committee; it is placed first in every set.
    t : int
        Query size, ``m >= t > len(w)``.
    size_for : int, optional
        Size the family as if the committee already had this many members.
        The family is then ``ceil((m - size_for) / (t - size_for))`` sets long,
        which keeps the per-iteration cost of a ``k``-round algorithm constant.

    Notes
    -----
    Unelected candidates are split in index order into near-equal consecutive
    chunks, one per set.  Sets are topped up to size ``t`` with the
    lowest-index unelected candidates they do not already hold.
    """
    w = check_committee(w, m)
    anchor_size = len(w) if size_for is None else max(len(w), size_for)
    f = family_size(m, anchor_size, t)
    wset = set(w)
    others = [c for c in range(m) if c not in wset]
    chunks = np.array_split(np.array(others, dtype=np.int64), f)
    sets = []
    primary = {}
    for idx, chunk in enumerate(chunks):
        own = [int(c) for c in chunk]
        for c in own:
            primary[c] = idx
        have = wset | set(own)
        pad = []
        for c in others:
            if len(w) + len(own) + len(pad) >= t:
                break
            if c not in have:
                pad.append(c)
        sets.append(tuple(w) + tuple(own) + tuple(pad))
    return QueryFamily(tuple(sets), tuple(w), t, primary)


def _columns(q: Sequence[int], s: Iterable[int]) -> list[int]:
    pos = {c: i for i, c in enumerate(q)}
    cols = []
    for c in s:
        if c not in pos:
            raise ValueError(f"candidate {c} is not part of the query set")
        cols.append(pos[c])
    return cols


def estimate_coverage_p(responses: np.ndarray, q: Sequence[int], s: Iterable[int]) -> float:
    """Fraction of sampled voters approving at least one candidate of ``s``.

    ``responses[r, i]`` is sampled voter ``r``'s answer about candidate ``q[i]``.
    """
    cols = _columns(q, s)
    r = np.asarray(responses, dtype=bool)
    if r.shape[0] == 0:
        raise ValueError("no responses")
    if not cols:
        return 0.0
    return float(r[:, cols].any(axis=1).mean())


def estimate_exact_p(responses: np.ndarray, q: Sequence[int]) -> dict[frozenset, float]:
    """Empirical distribution of the exact approved subset of ``q`` over sampled voters."""
    r = np.asarray(responses, dtype=bool)
    q = list(q)
    tally = Counter(frozenset(q[i] for i in np.flatnonzero(row)) for row in r)
    ell = r.shape[0]
    return {s: cnt / ell for s, cnt in tally.items()}


def aux_estimate(exact_p: dict[frozenset, float], s: Iterable[int], alphas: np.ndarray) -> float:
    """Estimate of the auxiliary objective of ``s`` from an exact-pattern distribution."""
    s = frozenset(s)
    return float(sum(prob * alphas[len(pattern & s)] for pattern, prob in exact_p.items()))
