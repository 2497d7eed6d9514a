"""Independence systems that constrain which committees are feasible.

Two concrete matroids are provided: :class:`UniformMatroid` (any set of at most
``k`` candidates) and :class:`QuotaMatroid` (committees of size ``k`` with lower
and upper bounds per candidate group, plus all their subsets).  The generic
:class:`Matroid` wraps an arbitrary predicate, which is mostly useful for
feeding :func:`check_matroid_axioms`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

MAX_AXIOM_CHECK_M = 16


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


class Matroid:
    """Matroid over candidates ``0..m-1`` given by an independence predicate.

    Parameters
    ----------
    m : int
        Universe size.
    independent : callable
        Takes a frozenset of candidate indices and returns a bool.
    """

    def __init__(self, m: int, independent: Callable[[frozenset], bool]):
        if m < 1:
            raise ValueError(f"universe size must be >= 1, got {m}")
        self.m = int(m)
        self._independent = independent
        self._rank = None

    def _check_universe(self, s) -> frozenset:
        s = frozenset(int(c) for c in s)
        for c in s:
            if not 0 <= c < self.m:
                raise ValueError(f"candidate {c} outside universe 0..{self.m - 1}")
        return s

    def is_independent(self, s: Iterable[int]) -> bool:
        return bool(self._independent(self._check_universe(s)))

    @property
    def rank(self) -> int:
        if self._rank is None:
            basis: set[int] = set()
            for c in range(self.m):
                if self._independent(frozenset(basis | {c})):
                    basis.add(c)
            self._rank = len(basis)
        return self._rank

    def is_basis(self, s: Iterable[int]) -> bool:
        s = self._check_universe(s)
        return len(s) == self.rank and bool(self._independent(s))

    def __repr__(self):
        return f"{type(self).__name__}(m={self.m}, rank={self.rank})"


class UniformMatroid(Matroid):
    """All candidate sets of size at most ``k``."""

    def __init__(self, m: int, k: int):
        if not 1 <= k <= m:
            raise ValueError(f"uniform matroid needs 1 <= k <= m, got k={k}, m={m}")
        self.k = int(k)
        super().__init__(m, lambda s: len(s) <= self.k)
        self._rank = self.k

    def exchange_mask(self, w: Sequence[int], outside: Sequence[int]) -> np.ndarray:
        return np.ones((len(outside), len(w)), dtype=bool)


def uniform_matroid(m: int, k: int) -> UniformMatroid:
    return UniformMatroid(m, k)


@dataclass(frozen=True)
class QuotaGroup:
    name: str
    members: tuple[int, ...]
    lower: int
    upper: int


@dataclass(frozen=True)
class QuotaSpec:
    """Disjoint candidate groups with lower/upper quotas and a committee size ``k``.

    Candidates not listed in any group are treated as one extra group with
    quotas ``(0, k)``.
    """

    m: int
    k: int
    groups: tuple[QuotaGroup, ...] = field(default_factory=tuple)

    @classmethod
    def from_mapping(cls, m: int, k: int, groups: Mapping[str, tuple[Sequence[int], int, int]]) -> "QuotaSpec":
        """``groups`` maps a name to ``(members, lower, upper)``."""
        return cls(m, k, tuple(QuotaGroup(name, tuple(int(c) for c in mem), int(lo), int(up))
                               for name, (mem, lo, up) in groups.items()))

    def validate(self) -> None:
        if not 1 <= self.k <= self.m:
            raise ValueError(f"quota spec needs 1 <= k <= m, got k={self.k}, m={self.m}")
        seen: dict[int, str] = {}
        for g in self.groups:
            for c in g.members:
                if not 0 <= c < self.m:
                    raise ValueError(f"group {g.name!r}: candidate {c} outside 0..{self.m - 1}")
                if c in seen:
                    raise ValueError(f"groups {seen[c]!r} and {g.name!r} both contain candidate {c}; groups must be disjoint")
                seen[c] = g.name
            if len(set(g.members)) != len(g.members):
                raise ValueError(f"group {g.name!r} lists a candidate twice")
            if g.lower < 0:
                raise ValueError(f"group {g.name!r}: lower quota {g.lower} < 0")
            if g.upper > len(g.members):
                raise ValueError(f"group {g.name!r}: upper quota {g.upper} exceeds group size {len(g.members)}")
            if g.lower > g.upper:
                raise ValueError(f"group {g.name!r}: lower quota {g.lower} > upper quota {g.upper}")
        rest = self.m - len(seen)
        total_lower = sum(g.lower for g in self.groups)
        total_upper = sum(g.upper for g in self.groups) + min(rest, self.k)
        if total_lower > self.k:
            raise ValueError(f"sum of lower quotas {total_lower} exceeds k={self.k}")
        if total_upper < self.k:
            raise ValueError(f"sum of upper quotas {total_upper} (ungrouped candidates included) is below k={self.k}")


class QuotaMatroid(Matroid):
    """Committees of size ``k`` meeting every group quota, and all their subsets."""

    def __init__(self, spec: QuotaSpec):
        spec.validate()
        self.spec = spec
        self.k = spec.k
        s = len(spec.groups)
        gid = np.full(spec.m, s, dtype=np.int64)
        for i, g in enumerate(spec.groups):
            gid[list(g.members)] = i
        rest = int((gid == s).sum())
        self.group_of = gid
        self.lower = np.array([g.lower for g in spec.groups] + [0], dtype=np.int64)
        self.upper = np.array([g.upper for g in spec.groups] + [min(rest, spec.k)], dtype=np.int64)
        super().__init__(spec.m, self._feasible)
        self._rank = spec.k

    def _counts(self, s) -> np.ndarray:
        return np.bincount(self.group_of[list(s)], minlength=len(self.lower)) if s else np.zeros(len(self.lower), dtype=np.int64)

    def _feasible(self, s: frozenset) -> bool:
        cnt = self._counts(s)
        if np.any(cnt > self.upper):
            return False
        return int(np.maximum(self.lower, cnt).sum()) <= self.k

    def satisfies_quotas(self, w: Iterable[int]) -> bool:
        """True when ``w`` has size ``k`` and every group count lies within its quotas."""
        w = self._check_universe(w)
        cnt = self._counts(w)
        return len(w) == self.k and bool(np.all(cnt >= self.lower) and np.all(cnt <= self.upper))

    def exchange_mask(self, w: Sequence[int], outside: Sequence[int]) -> np.ndarray:
        cnt = self._counts(w)
        s = len(cnt)
        # swap validity depends only on (group entering, group leaving)
        table = np.eye(s, dtype=bool)
        for gi in range(s):
            for go in range(s):
                if gi == go or cnt[go] == 0:
                    continue
                c2 = cnt.copy()
                c2[go] -= 1
                c2[gi] += 1
                table[gi, go] = bool(c2[gi] <= self.upper[gi] and np.maximum(self.lower, c2).sum() <= self.k)
        return table[np.ix_(self.group_of[list(outside)], self.group_of[list(w)])]


def quota_matroid(spec: QuotaSpec) -> QuotaMatroid:
    return QuotaMatroid(spec)


def is_independent(mat: Matroid, s: Iterable[int]) -> bool:
    return mat.is_independent(s)


def valid_exchanges(mat: Matroid, w: Iterable[int]) -> list[tuple[int, int]]:
    """All ``(c_in, c_out)`` swaps that keep basis ``w`` independent, sorted lexicographically."""
    w = sorted(mat._check_universe(w))
    if not mat.is_basis(w):
        raise ValueError(f"committee {w} is not a basis of {mat!r}")
    outside = [c for c in range(mat.m) if c not in set(w)]
    mask = _exchange_mask(mat, w, outside)
    return [(outside[a], w[b]) for a, b in zip(*np.nonzero(mask))]


def _exchange_mask(mat: Matroid, w: Sequence[int], outside: Sequence[int]) -> np.ndarray:
    if hasattr(mat, "exchange_mask"):
        return mat.exchange_mask(w, outside)
    base = set(w)
    mask = np.zeros((len(outside), len(w)), dtype=bool)
    for a, ci in enumerate(outside):
        for b, co in enumerate(w):
            mask[a, b] = mat._independent(frozenset((base - {co}) | {ci}))
    return mask


def random_basis(mat: Matroid, seed=None) -> tuple[int, ...]:
    """Scan candidates in random order, keeping each one that preserves independence."""
    rng = _as_rng(seed)
    r = mat.rank
    if r < 1:
        raise ValueError("matroid has rank 0")
    basis: list[int] = []
    for c in rng.permutation(mat.m):
        if mat._independent(frozenset(basis + [int(c)])):
            basis.append(int(c))
            if len(basis) == r:
                break
    return tuple(sorted(basis))


@dataclass
class AxiomReport:
    ok: bool
    axiom: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def _bits(mask: int, m: int) -> tuple[int, ...]:
    return tuple(i for i in range(m) if mask >> i & 1)


def check_matroid_axioms(mat: Matroid) -> AxiomReport:
    """Exhaustively verify the three matroid axioms; universes above 16 are refused."""
    m = mat.m
    if m > MAX_AXIOM_CHECK_M:
        raise ValueError(f"exhaustive axiom check limited to m <= {MAX_AXIOM_CHECK_M}, got m={m}")
    full = 1 << m
    indep = np.array([bool(mat._independent(frozenset(_bits(s, m)))) for s in range(full)])
    if not indep[0]:
        return AxiomReport(False, "empty set independent", ())

    sizes = np.array([bin(s).count("1") for s in range(full)])
    for s in np.flatnonzero(indep):
        for i in range(m):
            if s >> i & 1 and not indep[s & ~(1 << i)]:
                return AxiomReport(False, "downward closure", (_bits(int(s), m), _bits(int(s) & ~(1 << i), m)))

    # with downward closure in place, checking |A| = |B| + 1 suffices for exchange
    masks = np.arange(full, dtype=np.int64)
    ext = np.zeros(full, dtype=np.int64)
    for i in range(m):
        bit = np.int64(1 << i)
        target = masks | bit
        ok = ((masks & bit) == 0) & indep & indep[target]
        ext[ok] |= bit
    for size in range(m):
        bs = masks[indep & (sizes == size)]
        as_ = masks[indep & (sizes == size + 1)]
        if len(bs) == 0 or len(as_) == 0:
            continue
        for start in range(0, len(as_), 512):
            chunk = as_[start:start + 512]
            hit = (chunk[:, None] & ~bs[None, :]) & ext[bs][None, :]
            bad = np.argwhere(hit == 0)
            if len(bad):
                a, b = bad[0]
                return AxiomReport(False, "exchange", (_bits(int(chunk[a]), m), _bits(int(bs[b]), m)))
    return AxiomReport(True)
