"""Cleaning a Polis-style vote matrix into approval ballots.

Cells hold 1 (agree), -1 (disagree), 0 (pass) or are blank.  Cleaning drops
statements that more than half of the voters agree with, then voters with no
votes or no remaining agrees, and repeats until nothing changes.  Every
remaining non-agree cell becomes a disapproval.
"""

import io

from diverse_committees import fit_phi, fit_q, parse_votes, preprocess

# s0 is a consensus statement; p6 only agrees with s0 and p7 never voted
csv_text = """participant,group-id,n-comments,n-votes,n-agree,n-disagree,s0,s1,s2,s3,s4
p0,0,0,4,2,2,1,1,-1,-1,
p1,0,0,4,2,1,1,0,1,-1,
p2,1,0,3,1,2,-1,,-1,1,
p3,1,0,4,2,1,1,-1,0,,1
p4,0,0,3,2,1,1,1,-1,,
p5,1,0,3,1,1,-1,,,1,0
p6,0,0,2,1,1,1,-1,,,
p7,1,0,0,0,0,,,,,
"""

raw = parse_votes(io.StringIO(csv_text))
print("raw matrix:", len(raw.participants), "participants x", len(raw.statements), "statements")

profile, report = preprocess(raw)
print(f"clean profile: n = {profile.n}, m = {profile.m} after {report.rounds} round(s)")
print("dropped statements:", report.removed_statements)
print("dropped voters:", report.removed_voters)
print(profile.matrix.astype(int))

q = fit_q(profile)
print(f"fitted q = {q:.3f}, phi = {fit_phi(profile, q):.2f}")
