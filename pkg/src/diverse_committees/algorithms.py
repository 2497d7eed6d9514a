"""Committee selection procedures.

Complete information: :func:`greedy`, :func:`greedy_eps`,
:func:`local_search_beta`, and the baselines :func:`approval_voting` and
:func:`ls_pav`.  Incomplete information (sampled queries):
:func:`greedy_incomplete` and :func:`ls_incomplete`.  Inaccurate information:
:func:`greedy_inaccurate`.  :func:`exact_opt` is a brute-force reference.

Ties are broken towards the lowest candidate index; for exchanges, towards the
lexicographically smallest ``(c_in, c_out)`` pair.  All CC comparisons inside
the complete-information algorithms use integer voter counts.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .matroid import Matroid, UniformMatroid, _exchange_mask, random_basis
from .objectives import alpha_sequence, swap_gain_table
from .oracle import QueryOracle, build_query_family, family_size
from .profile import ApprovalProfile, cc_score

E = math.e
EXACT_OPT_LIMIT = 10**6


@dataclass
class RunResult:
    """Outcome of one algorithm run.

    ``score`` is the true CC score of ``committee`` as a float.  For oracle
    algorithms it is read off the hidden profile after the run and does not
    count towards ``queries``.
    """

    committee: tuple[int, ...]
    score: float
    queries: int = 0
    iterations: int = 0
    seed: Any = None
    info: dict = field(default_factory=dict)


def _rng(seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _check_k(k: int, m: int) -> None:
    if not 1 <= k <= m:
        raise ValueError(f"committee size must satisfy 1 <= k <= m, got k={k}, m={m}")


# --------------------------------------------------------------------------
# closed-form sample sizes and budgets


def required_sample_size_greedy(gamma: float, delta: float, m: int, k: int) -> tuple[float, int]:
    """``(eps, l)`` for the sampled greedy: ``eps = (1-g) e / (g (e-1))``, ``l = ceil(2/eps^2 ln(2mk/delta))``."""
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    _check_k(k, m)
    eps = (1 - gamma) * E / (gamma * (E - 1))
    ell = math.ceil(2 / eps**2 * math.log(2 * m * k / delta))
    return eps, max(1, ell)


def query_budget_greedy(gamma: float, delta: float, m: int, k: int, t: int) -> int:
    """Total lookups of the sampled greedy: ``k * t * ceil((m-k)/(t-k)) * l``."""
    if not m >= t > k:
        raise ValueError(f"need m >= t > k, got m={m}, t={t}, k={k}")
    _, ell = required_sample_size_greedy(gamma, delta, m, k)
    return k * t * family_size(m, k, t) * ell


def ls_beta(gamma: float, k: int, c2: float = 1.0) -> float:
    """Local-search step threshold ``C2 (1-g) / (g k ln k)``."""
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if k < 2:
        raise ValueError(f"threshold needs k >= 2 (ln k > 0), got k={k}")
    if c2 <= 0:
        raise ValueError(f"C2 must be positive, got {c2}")
    return c2 * (1 - gamma) / (gamma * k * math.log(k))


def required_sample_size_ls(beta: float, xi: float, delta: float, m: int, k: int, alpha_k: float) -> tuple[float, int]:
    """``(eps, l)`` for the sampled local search.

    ``eps = (xi-1)/(2 xi) beta`` and
    ``l = ceil((2-2/e)^2 / (2 eps^2) ln(2 (m-k) k xi alpha_k / (delta beta)))``.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if xi <= 1:
        raise ValueError(f"xi must exceed 1 (xi = 1 leaves no estimation margin), got {xi}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if not 1 <= k < m:
        raise ValueError(f"need 1 <= k < m, got k={k}, m={m}")
    eps = (xi - 1) / (2 * xi) * beta
    ell = math.ceil((2 - 2 / E) ** 2 / (2 * eps**2) * math.log(2 * (m - k) * k * xi * alpha_k / (delta * beta)))
    return eps, max(1, ell)


def ls_iteration_cap(beta: float, xi: float, alpha_k: float) -> int:
    """``ceil(xi * alpha_k / beta)``: the iteration allowance of the sampled local search."""
    return math.ceil(xi * alpha_k / beta)


def query_budget_ls(gamma: float, delta: float, m: int, k: int, t: int, xi: float = 2.0, c2: float = 1.0) -> float:
    """Worst-case lookups of the sampled local search.

    ``xi alpha_k / beta`` iterations, each presenting ``ceil((m-k)/(t-k))``
    query sets of size ``t`` to ``l`` voters.  The iteration factor is left
    unrounded, as in the closed-form bound.
    """
    if not m >= t > k:
        raise ValueError(f"need m >= t > k, got m={m}, t={t}, k={k}")
    beta = ls_beta(gamma, k, c2)
    alpha_k = float(alpha_sequence(k)[k])
    _, ell = required_sample_size_ls(beta, xi, delta, m, k, alpha_k)
    return xi * alpha_k / beta * t * family_size(m, k, t) * ell


def required_repeats_inaccurate(p: float, delta: float, n: int, m: int) -> int:
    """Repetitions per lookup so that all ``n*m`` majority votes are right w.p. ``1-delta``.

    ``U = ceil(2 ln(nm/delta) / ln(1/(4p(1-p))))``.
    """
    if not 0 < p < 0.5:
        raise ValueError(f"flip probability must lie in (0, 1/2), got {p}")
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return max(1, math.ceil(2 * math.log(n * m / delta) / math.log(1 / (4 * p * (1 - p)))))


def m_budget_sample_size(M: float, n: int, m: int, k: int, t: int) -> int:
    """Voters per query set so that each voter sees about ``M`` query sets over ``k`` rounds."""
    if M <= 0:
        raise ValueError(f"M must be positive, got {M}")
    return max(1, math.floor(M * n / (k * family_size(m, k, t))))


# --------------------------------------------------------------------------
# complete information


def greedy(profile: ApprovalProfile, k: int) -> RunResult:
    """Add, ``k`` times, the candidate covering the most not-yet-covered voters."""
    _check_k(k, profile.m)
    a = profile.matrix
    covered = np.zeros(profile.n, dtype=bool)
    w: list[int] = []
    for _ in range(k):
        gains = a[~covered].sum(axis=0, dtype=np.int64)
        gains[w] = -1
        c = int(np.argmax(gains))
        w.append(c)
        covered |= a[:, c]
    return RunResult(tuple(w), float(Fraction(int(covered.sum()), profile.n)), iterations=k)


def greedy_eps(profile: ApprovalProfile, k: int, eps: float, seed=None, tie_break: str = "random") -> RunResult:
    """Greedy that may take any candidate whose gain is within ``eps`` of the best.

    ``eps`` is on the CC scale (gains lie in ``[0, 1]``).  ``tie_break`` is
    ``"random"`` (uniform over eligible candidates) or ``"lowest"``.
    """
    _check_k(k, profile.m)
    if eps < 0:
        raise ValueError(f"eps must be >= 0, got {eps}")
    if tie_break not in ("random", "lowest"):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    rng = _rng(seed)
    a = profile.matrix
    slack = eps * profile.n
    covered = np.zeros(profile.n, dtype=bool)
    w: list[int] = []
    for _ in range(k):
        gains = a[~covered].sum(axis=0, dtype=np.int64)
        gains[w] = -1
        best = gains.max()
        eligible = np.flatnonzero(gains >= best - slack - 1e-9)
        eligible = eligible[gains[eligible] >= 0]
        c = int(eligible[0] if tie_break == "lowest" else rng.choice(eligible))
        w.append(c)
        covered |= a[:, c]
    return RunResult(tuple(w), float(Fraction(int(covered.sum()), profile.n)), iterations=k, seed=seed)


def _best_exchange(gains: np.ndarray, mask: np.ndarray) -> tuple[float, int, int]:
    g = np.where(mask, gains, -np.inf)
    best = g.max()
    a, b = np.argwhere(g == best)[0]
    return float(best), int(a), int(b)


def local_search_beta(profile: ApprovalProfile, matroid: Matroid, beta: float, alphas=None, seed=None,
                      max_iter: int | None = None) -> RunResult:
    """Non-oblivious local search over the bases of ``matroid``.

    Starts from a random basis and keeps applying the valid exchange with the
    largest gain in the auxiliary objective while that gain exceeds ``beta``.

    Parameters
    ----------
    profile : ApprovalProfile
    matroid : Matroid
        Feasible committees are its bases.
    beta : float
        Minimum improvement per step.
    alphas : ndarray, optional
        Weight sequence; defaults to :func:`alpha_sequence` of the rank.
    seed : int or Generator, optional
        Drives the random initial basis.
    max_iter : int, optional
        Safety bound; defaults to ``ceil(alpha_k / beta)``, which the search can
        never exceed.
    """
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if matroid.m != profile.m:
        raise ValueError(f"matroid universe {matroid.m} differs from m={profile.m}")
    k = matroid.rank
    if alphas is None:
        alphas = alpha_sequence(max(k, 1))
    if max_iter is None:
        max_iter = math.ceil(alphas[k] / beta)
    rng = _rng(seed)
    w = sorted(random_basis(matroid, rng))
    a = profile.matrix
    it = 0
    trace = []
    while it < max_iter:
        wset = set(w)
        outside = [c for c in range(profile.m) if c not in wset]
        if not outside:
            break
        mask = _exchange_mask(matroid, w, outside)
        if not mask.any():
            break
        gains = swap_gain_table(a, w, outside, alphas) / profile.n
        best, ia, ib = _best_exchange(gains, mask)
        if best <= beta:
            break
        w = sorted((wset - {w[ib]}) | {outside[ia]})
        it += 1
        trace.append(best)
    return RunResult(tuple(w), float(cc_score(profile, w)), iterations=it, seed=seed, info={"gains": trace})


def approval_voting(profile: ApprovalProfile, k: int) -> RunResult:
    """The ``k`` most-approved candidates (lowest index first among equals)."""
    _check_k(k, profile.m)
    counts = profile.matrix.sum(axis=0, dtype=np.int64)
    order = np.argsort(-counts, kind="stable")[:k]
    w = tuple(int(c) for c in order)
    return RunResult(w, float(cc_score(profile, w)))


def pav_swap_gains(profile: ApprovalProfile, w, outside) -> np.ndarray:
    """PAV score change for every swap ``(outside[a] in, w[b] out)``."""
    a = profile.matrix.astype(float)
    aw = a[:, list(w)]
    ao = a[:, list(outside)]
    h = aw.sum(axis=1)
    gain_w = 1.0 / (h + 1.0)
    loss_w = 1.0 / np.maximum(h, 1.0)
    gain = (ao * gain_w[:, None]).sum(axis=0)[:, None] - (ao * gain_w[:, None]).T @ aw
    loss = (aw * loss_w[:, None]).sum(axis=0)[None, :] - ao.T @ (aw * loss_w[:, None])
    return gain - loss


def ls_pav(profile: ApprovalProfile, k: int, alpha_threshold: float = 1.0, seed=None,
           max_iter: int | None = None) -> RunResult:
    """Local-search PAV baseline.

    From a random size-``k`` committee, apply the best single swap while it
    raises the PAV score by at least ``alpha_threshold * n / k**2``.
    """
    _check_k(k, profile.m)
    rng = _rng(seed)
    threshold = alpha_threshold * profile.n / k**2
    if max_iter is None:
        # PAV <= n H(k) and each step gains >= threshold
        harmonic_k = sum(1.0 / j for j in range(1, k + 1))
        max_iter = math.ceil(profile.n * harmonic_k / threshold) + 1 if threshold > 0 else 10 * profile.m * k
    w = sorted(int(c) for c in rng.choice(profile.m, size=k, replace=False))
    it = 0
    while it < max_iter:
        wset = set(w)
        outside = [c for c in range(profile.m) if c not in wset]
        if not outside:
            break
        gains = pav_swap_gains(profile, w, outside)
        best, ia, ib = _best_exchange(gains, np.ones_like(gains, dtype=bool))
        if best < threshold or best <= 0:
            break
        w = sorted((wset - {w[ib]}) | {outside[ia]})
        it += 1
    return RunResult(tuple(w), float(cc_score(profile, w)), iterations=it, seed=seed)


def exact_opt(profile: ApprovalProfile, k: int | None = None, matroid: Matroid | None = None,
              limit: int = EXACT_OPT_LIMIT) -> tuple[tuple[int, ...], Fraction]:
    """Best committee by enumeration: all size-``k`` sets, or all bases of ``matroid``.

    Refuses instances with more than ``limit`` candidate committees.
    """
    if (k is None) == (matroid is None):
        raise ValueError("pass exactly one of k or matroid")
    if matroid is not None:
        k = matroid.rank
    _check_k(k, profile.m)
    total = math.comb(profile.m, k)
    if total > limit:
        raise ValueError(f"C({profile.m}, {k}) = {total} committees exceeds the enumeration limit {limit}")
    # each candidate as a bitset of approving voters
    cover = [int("".join("1" if x else "0" for x in col[::-1]) or "0", 2) for col in profile.matrix.T]
    best_w, best = None, -1
    for w in itertools.combinations(range(profile.m), k):
        if matroid is not None and not matroid.is_basis(w):
            continue
        bits = 0
        for c in w:
            bits |= cover[c]
        cnt = bin(bits).count("1")
        if cnt > best:
            best_w, best = w, cnt
    if best_w is None:
        raise ValueError("matroid has no basis of the requested size")
    return best_w, Fraction(best, profile.n)


# --------------------------------------------------------------------------
# incomplete information


def greedy_incomplete(oracle: QueryOracle, k: int, t: int, gamma: float = 0.85, delta: float = 0.05,
                      ell: int | None = None) -> RunResult:
    """Greedy driven by sampled marginal gains.

    Every round builds ``ceil((m-k)/(t-k))`` query sets of size ``t``, each
    holding the current committee, shows each set to ``l`` freshly sampled
    voters and adds the candidate with the largest estimated gain
    ``p_hat(W + c) - p_hat(W)``.

    Parameters
    ----------
    oracle : QueryOracle
        Source of answers; its generator drives voter sampling.
    k, t : int
        Committee size and query size, ``m >= t > k``.
    gamma, delta : float
        Target ratio factor and failure probability; they set ``l`` unless
        ``ell`` is given.
    ell : int, optional
        Voters per query set.  Defaults to ``n`` for a census oracle.
    """
    m = oracle.m
    _check_k(k, m)
    if not m >= t > k:
        raise ValueError(f"need m >= t > k, got m={m}, t={t}, k={k}")
    if ell is None:
        ell = oracle.n if oracle.census else required_sample_size_greedy(gamma, delta, m, k)[1]
    start = oracle.queries
    w: list[int] = []
    for _ in range(k):
        fam = build_query_family(m, w, t, size_for=k)
        cands, gains = [], []
        for idx, q in enumerate(fam.sets):
            voters = oracle.sample_voters(ell)
            r = oracle.present_many(voters, q)
            base = r[:, : len(w)].any(axis=1)
            pos = [i for i, c in enumerate(q) if fam.primary.get(c) == idx]
            fresh = (r[:, pos] & ~base[:, None]).sum(axis=0)
            cands.extend(q[i] for i in pos)
            gains.extend(int(x) for x in fresh)
        # equal sample sizes per set, so raw counts rank the estimates
        order = np.lexsort((np.array(cands), -np.array(gains)))
        w.append(int(cands[order[0]]))
    return RunResult(tuple(w), float(oracle.evaluate(w)), queries=oracle.queries - start, iterations=k,
                     info={"ell": ell})


def ls_incomplete(oracle: QueryOracle, matroid: Matroid, beta: float, t: int, delta: float = 0.05,
                  xi: float = 2.0, alphas=None, seed=None, ell: int | None = None,
                  max_iter: int | None = None) -> RunResult:
    """Non-oblivious local search driven by sampled exchange gains.

    Each iteration presents ``ceil((m-k)/(t-k))`` query sets (each holding the
    current basis) to ``l`` sampled voters, estimates the auxiliary-objective
    change of every valid exchange from those answers and applies the best
    one.  The search stops once the best estimate drops below ``beta - eps``
    with ``eps = (xi-1)/(2 xi) beta``, or after ``ceil(xi alpha_k / beta)``
    iterations.

    Parameters
    ----------
    oracle : QueryOracle
    matroid : Matroid
        Rank ``k >= 3``.
    beta : float
        Step threshold of the underlying local search.
    t : int
        Query size, ``m >= t > k``.
    delta, xi : float
        Failure probability and iteration allowance factor (``xi >= 1``).
    alphas : ndarray, optional
    seed : int or Generator, optional
        Drives the random initial basis only; sampling uses the oracle.
    ell : int, optional
        Voters per query set.  Defaults to ``n`` for a census oracle,
        otherwise to the closed-form sample size (which needs ``xi > 1``).
    max_iter : int, optional
        Overrides the iteration cap.
    """
    m = oracle.m
    if matroid.m != m:
        raise ValueError(f"matroid universe {matroid.m} differs from m={m}")
    k = matroid.rank
    if k < 3:
        raise ValueError(f"sampled local search needs k >= 3, got k={k}")
    if not m >= t > k:
        raise ValueError(f"need m >= t > k, got m={m}, t={t}, k={k}")
    if beta <= 0:
        raise ValueError(f"beta must be positive, got {beta}")
    if xi < 1:
        raise ValueError(f"xi must be >= 1, got {xi}")
    if alphas is None:
        alphas = alpha_sequence(k)
    alpha_k = float(alphas[k])
    eps = (xi - 1) / (2 * xi) * beta
    if ell is None:
        ell = oracle.n if oracle.census else required_sample_size_ls(beta, xi, delta, m, k, alpha_k)[1]
    if max_iter is None:
        max_iter = ls_iteration_cap(beta, xi, alpha_k)
    rng = _rng(seed)
    w = sorted(random_basis(matroid, rng))
    start = oracle.queries
    it = 0
    trace = []
    while it < max_iter:
        wset = set(w)
        outside = [c for c in range(m) if c not in wset]
        mask = _exchange_mask(matroid, w, outside)
        if not mask.any():
            break
        row = {c: i for i, c in enumerate(outside)}
        gains = np.full((len(outside), k), -np.inf)
        fam = build_query_family(m, w, t)
        for idx, q in enumerate(fam.sets):
            voters = oracle.sample_voters(ell)
            r = oracle.present_many(voters, q)
            pos = [i for i, c in enumerate(q) if fam.primary.get(c) == idx]
            table = swap_gain_table(r, range(k), pos, alphas) / ell
            gains[[row[q[i]] for i in pos]] = table
        best, ia, ib = _best_exchange(gains, mask)
        if best < beta - eps:
            break
        w = sorted((wset - {w[ib]}) | {outside[ia]})
        it += 1
        trace.append(best)
    return RunResult(tuple(w), float(oracle.evaluate(w)), queries=oracle.queries - start, iterations=it,
                     seed=seed, info={"ell": ell, "eps": eps, "gains": trace})


# --------------------------------------------------------------------------
# inaccurate information


def decode_majority(oracle: QueryOracle, repeats: int) -> ApprovalProfile:
    """Ask every ``(voter, candidate)`` pair ``repeats`` times and keep the majority answer.

    Ties (possible for even ``repeats``) decode as disapproval.
    """
    counts = oracle.tally(np.arange(oracle.n), list(range(oracle.m)), repeats)
    return ApprovalProfile(2 * counts > repeats)


def greedy_inaccurate(oracle: QueryOracle, k: int, delta: float = 0.05, repeats: int | None = None) -> RunResult:
    """Majority-decode the full ballot matrix, then run :func:`greedy` on it.

    ``repeats`` defaults to :func:`required_repeats_inaccurate` for the
    oracle's flip probability.
    """
    _check_k(k, oracle.m)
    if repeats is None:
        repeats = required_repeats_inaccurate(oracle.p, delta, oracle.n, oracle.m)
    start = oracle.queries
    decoded = decode_majority(oracle, repeats)
    res = greedy(decoded, k)
    return RunResult(res.committee, float(oracle.evaluate(res.committee)), queries=oracle.queries - start,
                     iterations=k, info={"repeats": repeats, "decoded": decoded})
