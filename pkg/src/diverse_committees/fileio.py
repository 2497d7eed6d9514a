"""Plain-text file formats.

Profile files::

    n m
    0 3 7        <- voter 0 approves candidates 0, 3 and 7
                 <- voter 1 approves nothing
    2

Quota files, one group per line (``#`` starts a comment)::

    women: 0,1,2,5 : 1 : 3
    north: 3-4 : 0 : 2
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from .matroid import QuotaGroup, QuotaSpec
from .profile import ApprovalProfile


def format_profile(profile: ApprovalProfile) -> str:
    lines = [f"{profile.n} {profile.m}"]
    for row in profile.matrix:
        lines.append(" ".join(str(int(c)) for c in np.flatnonzero(row)))
    return "\n".join(lines) + "\n"


def parse_profile(text: str) -> ApprovalProfile:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("empty profile file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError(f"profile header must be 'n m', got {lines[0]!r}")
    n, m = int(head[0]), int(head[1])
    body = lines[1:]
    if len(body) != n:
        raise ValueError(f"header announces {n} voters but file has {len(body)} ballot lines")
    ballots = []
    for i, line in enumerate(body):
        try:
            ballots.append([int(tok) for tok in line.split()])
        except ValueError:
            raise ValueError(f"ballot line {i + 2}: non-integer entry in {line!r}") from None
    return ApprovalProfile.from_sets(ballots, m)


def write_profile(profile: ApprovalProfile, path: str | os.PathLike) -> None:
    Path(path).write_text(format_profile(profile))


def read_profile(path: str | os.PathLike) -> ApprovalProfile:
    return parse_profile(Path(path).read_text())


def _parse_index_list(text: str) -> list[int]:
    out: list[int] = []
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    return out


def parse_quota_config(text: str, m: int, k: int) -> QuotaSpec:
    """Parse ``name: indices : lower : upper`` lines into a validated :class:`QuotaSpec`."""
    groups = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(":")]
        if len(parts) != 4:
            raise ValueError(f"quota line {lineno}: expected 'name: indices : lower : upper', got {raw!r}")
        name, idx, lo, up = parts
        try:
            groups.append(QuotaGroup(name, tuple(_parse_index_list(idx)), int(lo), int(up)))
        except ValueError:
            raise ValueError(f"quota line {lineno}: bad number in {raw!r}") from None
    spec = QuotaSpec(m, k, tuple(groups))
    spec.validate()
    return spec


def read_quota_config(path: str | os.PathLike, m: int, k: int) -> QuotaSpec:
    return parse_quota_config(Path(path).read_text(), m, k)


def format_quota_config(spec: QuotaSpec) -> str:
    return "".join(f"{g.name}: {','.join(map(str, g.members))} : {g.lower} : {g.upper}\n" for g in spec.groups)


def read_manifest(path: str | os.PathLike) -> list[str]:
    """Dataset names, one per line; blank lines and ``#`` comments are ignored."""
    names = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            names.append(line)
    return names
