"""Polis vote matrices: parsing and cleaning into approval profiles.

Polis open-data exports ship a ``participants-votes.csv`` per conversation:
one row per participant, a few summary columns, then one column per comment
holding ``1`` (agree), ``-1`` (disagree), ``0`` (pass) or nothing (not seen).
:func:`parse_votes` reads that layout (and plain participant-by-statement
matrices); :func:`preprocess` turns it into an :class:`ApprovalProfile`.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from enum import IntEnum
from typing import Mapping

import numpy as np

from .profile import ApprovalProfile


class Vote(IntEnum):
    MISSING = 0
    APPROVE = 1
    DISAPPROVE = 2
    NEUTRAL = 3


DEFAULT_CODES: dict[str, Vote] = {
    "1": Vote.APPROVE,
    "-1": Vote.DISAPPROVE,
    "0": Vote.NEUTRAL,
    "": Vote.MISSING,
}

POLIS_META_COLUMNS = frozenset({"group-id", "n-comments", "n-votes", "n-agree", "n-disagree"})


class VoteParseError(ValueError):
    pass


class EmptyProfileError(ValueError):
    pass


@dataclass
class RawVoteMatrix:
    """Participants by statements, entries from :class:`Vote`."""

    votes: np.ndarray
    participants: list[str]
    statements: list[str]

    def __post_init__(self):
        self.votes = np.asarray(self.votes, dtype=np.int8)
        if self.votes.ndim != 2:
            raise ValueError("vote matrix must be 2-dimensional")
        if self.votes.shape != (len(self.participants), len(self.statements)):
            raise ValueError(f"shape {self.votes.shape} does not match {len(self.participants)} participants "
                             f"x {len(self.statements)} statements")
        if self.votes.size and not np.isin(self.votes, [v.value for v in Vote]).all():
            raise ValueError("vote matrix holds values outside the four vote states")

    @classmethod
    def from_profile(cls, profile: ApprovalProfile) -> "RawVoteMatrix":
        votes = np.where(profile.matrix, Vote.APPROVE, Vote.DISAPPROVE).astype(np.int8)
        return cls(votes, [str(i) for i in range(profile.n)], [str(j) for j in range(profile.m)])

    def __eq__(self, other):
        if not isinstance(other, RawVoteMatrix):
            return NotImplemented
        return (self.participants == other.participants and self.statements == other.statements
                and np.array_equal(self.votes, other.votes))


def _normalise(cell: str) -> str:
    cell = cell.strip()
    try:
        f = float(cell)
    except ValueError:
        return cell
    return str(int(f)) if f == int(f) else cell


def parse_votes(source, codes: Mapping[str, Vote] | None = None, skip_columns=POLIS_META_COLUMNS,
                delimiter: str = ",") -> RawVoteMatrix:
    """Read a participant-by-statement vote table.

    Parameters
    ----------
    source : path or file-like
        Delimited text.  The first row is a header; the first column holds
        participant ids and every other column not in ``skip_columns`` is a
        statement.
    codes : mapping, optional
        Cell text to :class:`Vote`; defaults to :data:`DEFAULT_CODES`.
        Numeric cells are normalised first, so ``"1.0"`` matches ``"1"``.
    skip_columns : collection of str
        Header names of non-vote columns.

    Raises
    ------
    VoteParseError
        On an empty table, ragged rows or unknown vote codes (with location).
    """
    codes = dict(DEFAULT_CODES if codes is None else codes)
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="") as fh:
            rows = list(csv.reader(fh, delimiter=delimiter))
    else:
        rows = list(csv.reader(source, delimiter=delimiter))
    rows = [r for r in rows if r]
    if len(rows) < 2:
        raise VoteParseError("no data rows")
    header = [h.strip() for h in rows[0]]
    cols = [j for j in range(1, len(header)) if header[j] not in skip_columns]
    statements = [header[j] for j in cols]
    participants = []
    votes = np.zeros((len(rows) - 1, len(cols)), dtype=np.int8)
    for r, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise VoteParseError(f"row {r}: expected {len(header)} columns, found {len(row)}")
        participants.append(row[0].strip())
        for out, j in enumerate(cols):
            key = _normalise(row[j])
            if key not in codes:
                raise VoteParseError(f"row {r}, column {j + 1} ({header[j]!r}): unknown vote code {row[j]!r}")
            votes[r - 2, out] = codes[key]
    return RawVoteMatrix(votes, participants, statements)


def format_votes(raw: RawVoteMatrix, codes: Mapping[str, Vote] | None = None) -> str:
    """Inverse of :func:`parse_votes` for a table without summary columns."""
    codes = DEFAULT_CODES if codes is None else codes
    back = {}
    for text, vote in codes.items():
        back.setdefault(Vote(vote), text)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["participant", *raw.statements])
    for pid, row in zip(raw.participants, raw.votes):
        writer.writerow([pid, *(back[Vote(v)] for v in row)])
    return buf.getvalue()


@dataclass
class PreprocessReport:
    n_original: int
    m_original: int
    n_final: int = 0
    m_final: int = 0
    removed_statements: int = 0
    removed_voters_no_votes: int = 0
    removed_voters_no_approvals: int = 0
    filled_neutral: int = 0
    filled_missing: int = 0
    rounds: int = 0
    kept_participants: list = field(default_factory=list)
    kept_statements: list = field(default_factory=list)

    @property
    def removed_voters(self) -> int:
        return self.removed_voters_no_votes + self.removed_voters_no_approvals


def preprocess(raw: RawVoteMatrix, until_stable: bool = True) -> tuple[ApprovalProfile, PreprocessReport]:
    """Clean a vote matrix into an approval profile.

    Steps, in order: drop statements approved by more than half of the
    current voters; drop voters who cast no vote on the remaining statements
    and voters who approve none of them; set neutral and missing entries to
    disapproval.  With ``until_stable`` the two removal steps repeat until
    nothing changes, so the result has no majority-approved statement and
    cleaning it again is a no-op.  With ``until_stable=False`` they run once.

    Raises
    ------
    EmptyProfileError
        If no voter or no statement survives.
    """
    v = raw.votes
    rep = PreprocessReport(n_original=v.shape[0], m_original=v.shape[1])
    rows = np.arange(v.shape[0])
    cols = np.arange(v.shape[1])
    while True:
        rep.rounds += 1
        sub = v[np.ix_(rows, cols)]
        approve = sub == Vote.APPROVE
        majority = approve.sum(axis=0) * 2 > len(rows)
        cols = cols[~majority]
        sub = sub[:, ~majority]
        no_votes = (sub == Vote.MISSING).all(axis=1)
        no_approvals = ~no_votes & ~(sub == Vote.APPROVE).any(axis=1)
        rows = rows[~(no_votes | no_approvals)]
        rep.removed_statements += int(majority.sum())
        rep.removed_voters_no_votes += int(no_votes.sum())
        rep.removed_voters_no_approvals += int(no_approvals.sum())
        changed = majority.any() or no_votes.any() or no_approvals.any()
        if not until_stable or not changed or len(rows) == 0 or len(cols) == 0:
            break
    if len(rows) == 0:
        raise EmptyProfileError("preprocessing removed every voter")
    if len(cols) == 0:
        raise EmptyProfileError("preprocessing removed every statement")
    final = v[np.ix_(rows, cols)]
    rep.filled_neutral = int((final == Vote.NEUTRAL).sum())
    rep.filled_missing = int((final == Vote.MISSING).sum())
    rep.n_final, rep.m_final = final.shape
    rep.kept_participants = [raw.participants[i] for i in rows]
    rep.kept_statements = [raw.statements[j] for j in cols]
    return ApprovalProfile(final == Vote.APPROVE), rep


def vote_statistics(raw: RawVoteMatrix) -> dict[str, float]:
    """Share of seen entries and the approve/disapprove/neutral split of cast votes."""
    v = raw.votes
    cast = v != Vote.MISSING
    total = max(int(cast.sum()), 1)
    return {
        "seen": float(cast.mean()) if v.size else 0.0,
        "approve": float((v == Vote.APPROVE).sum() / total),
        "disapprove": float((v == Vote.DISAPPROVE).sum() / total),
        "neutral": float((v == Vote.NEUTRAL).sum() / total),
    }
