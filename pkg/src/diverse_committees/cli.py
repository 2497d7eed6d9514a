"""``diverse-committees`` command line.

Subcommands: ``run``, ``experiment``, ``calc``, ``generate`` and ``ingest``.
Run ``diverse-committees <command> --help`` for the flags of each.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import algorithms as alg
from .datagen import ResampleParams, fit_phi, fit_q, resample_election
from .experiment import ALGORITHMS, ExperimentConfig, plot_absolute, plot_relative, records_to_csv, run_experiment, \
    summarize
from .fileio import read_manifest, read_profile, read_quota_config, write_profile
from .matroid import quota_matroid, uniform_matroid
from .objectives import alpha_sequence
from .oracle import QueryOracle
from .polis import VoteParseError, parse_votes, preprocess

RUN_ALGORITHMS = ("greedy", "greedy-eps", "ls", "av", "ls-pav", "greedy-inc", "ls-inc", "greedy-inacc")


class CliError(Exception):
    pass


def _floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--gamma", type=float, default=0.85, help="target approximation factor in (0, 1)")
    p.add_argument("--delta", type=float, default=0.05, help="failure probability")
    p.add_argument("--xi", type=float, default=2.0, help="local-search iteration allowance factor (> 1)")
    p.add_argument("--c2", type=float, default=1.0, help="constant in the local-search step threshold")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diverse-committees",
                                     description="Select diverse committees from approval ballots.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one algorithm on one profile file")
    p.add_argument("--profile", required=True, help="canonical profile file")
    p.add_argument("--algo", required=True, help=f"one of {', '.join(RUN_ALGORITHMS)}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--t", type=int, help="query size (sampled algorithms)")
    p.add_argument("--beta", type=float, help="local-search step threshold (default from gamma, k, c2)")
    p.add_argument("--eps", type=float, default=0.05, help="slack of greedy-eps on the CC scale")
    p.add_argument("--p", type=float, default=0.0, help="answer flip probability")
    p.add_argument("--M", type=float, help="expected queries per voter; sets the sample size")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--matroid-config", help="quota file for local search")
    p.add_argument("--out", help="append the result as a CSV row to this file")
    _add_common(p)

    p = sub.add_parser("experiment", help="batch experiment, writes CSV (and SVG plots)")
    p.add_argument("--profile", nargs="*", default=[], help="canonical profile files")
    p.add_argument("--synthetic", type=int, default=0, metavar="COUNT", help="add COUNT resampling elections")
    p.add_argument("--q", type=float, default=0.0891)
    p.add_argument("--phi", type=float, default=0.693)
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--m", type=int, default=400)
    p.add_argument("--algo", default="greedy,ls,av,ls-pav",
                   help=f"comma-separated subset of {', '.join(ALGORITHMS)}")
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--t", type=int, default=20)
    p.add_argument("--M", default="1,2,3,4,5", help="comma-separated M levels")
    p.add_argument("--p", default="0", help="comma-separated flip probabilities")
    p.add_argument("--beta", type=float)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--census", action="store_true", help="sample every voter once instead of using M levels")
    p.add_argument("--no-timing", action="store_true", help="write ms=0 so reruns give identical CSV")
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--plot", help="directory for absolute.svg and relative.svg")
    _add_common(p)

    p = sub.add_parser("calc", help="closed-form sample sizes and budgets")
    csub = p.add_subparsers(dest="what", required=True)
    c = csub.add_parser("greedy-budget")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    _add_common(c)
    c = csub.add_parser("ls-budget")
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--t", type=int, required=True)
    c.add_argument("--beta", type=float)
    _add_common(c)
    c = csub.add_parser("inaccurate-repeats")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.add_argument("--p", type=float, required=True)
    c.add_argument("--delta", type=float, default=0.05)

    p = sub.add_parser("generate", help="write resampling-model elections as profile files")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("ingest", help="clean vote matrices into profiles and fit (q, phi)")
    p.add_argument("inputs", nargs="+", help="vote CSV files, directories holding participants-votes.csv, or .txt profiles (fit only)")
    p.add_argument("--manifest", help="only keep datasets named in this file")
    p.add_argument("--codes", help="JSON object mapping cell text to approve/disapprove/neutral/missing")
    p.add_argument("--single-pass", action="store_true", help="run the cleaning steps once, not to a fixpoint")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _result_row(args, res: alg.RunResult) -> dict:
    return {"algorithm": args.algo, "k": args.k, "seed": args.seed, "committee": " ".join(map(str, res.committee)),
            "cc": repr(res.score), "queries": res.queries, "iterations": res.iterations}


def cmd_run(args) -> int:
    profile = read_profile(args.profile)
    if args.algo not in RUN_ALGORITHMS:
        raise CliError(f"unknown algorithm {args.algo!r}; choose from {', '.join(RUN_ALGORITHMS)}")
    if not 1 <= args.k <= profile.m:
        raise CliError(f"--k must satisfy 1 <= k <= m = {profile.m}, got {args.k}")
    if args.matroid_config:
        matroid = quota_matroid(read_quota_config(args.matroid_config, profile.m, args.k))
    else:
        matroid = uniform_matroid(profile.m, args.k)
    beta = args.beta
    if beta is None and args.algo in ("ls", "ls-inc"):
        beta = alg.ls_beta(args.gamma, args.k, args.c2)
    sampled = args.algo in ("greedy-inc", "ls-inc")
    if sampled and args.t is None:
        raise CliError(f"--t is required for {args.algo}")
    oracle = QueryOracle(profile, p=args.p, seed=args.seed)
    ell = alg.m_budget_sample_size(args.M, profile.n, profile.m, args.k, args.t) if sampled and args.M else None

    if args.p and not (sampled or args.algo == "greedy-inacc"):
        raise CliError(f"--p applies to sampled and inaccurate algorithms only, not {args.algo}")
    if args.algo == "greedy":
        res = alg.greedy(profile, args.k)
    elif args.algo == "greedy-eps":
        res = alg.greedy_eps(profile, args.k, args.eps, seed=args.seed)
    elif args.algo == "ls":
        res = alg.local_search_beta(profile, matroid, beta, seed=args.seed)
    elif args.algo == "av":
        res = alg.approval_voting(profile, args.k)
    elif args.algo == "ls-pav":
        res = alg.ls_pav(profile, args.k, seed=args.seed)
    elif args.algo == "greedy-inc":
        res = alg.greedy_incomplete(oracle, args.k, args.t, args.gamma, args.delta, ell=ell)
    elif args.algo == "ls-inc":
        res = alg.ls_incomplete(oracle, matroid, beta, args.t, args.delta, args.xi, seed=args.seed, ell=ell)
    else:
        if args.p <= 0:
            raise CliError("greedy-inacc needs --p in (0, 1/2)")
        res = alg.greedy_inaccurate(oracle, args.k, args.delta)
    row = _result_row(args, res)
    print(f"committee: {row['committee']}")
    print(f"cc: {res.score:.6f}")
    print(f"queries: {res.queries}")
    if args.out:
        path = Path(args.out)
        new = not path.exists() or path.stat().st_size == 0
        with path.open("a", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(row), lineterminator="\n")
            if new:
                writer.writeheader()
            writer.writerow(row)
    return 0


def cmd_experiment(args) -> int:
    config = ExperimentConfig(
        algorithms=[a.strip() for a in args.algo.split(",") if a.strip()],
        k=args.k, t=args.t, M_levels=_floats(args.M), p_levels=_floats(args.p), trials=args.trials,
        base_seed=args.seed, profiles=list(args.profile),
        synthetic=ResampleParams(args.q, args.phi, args.n, args.m, args.seed) if args.synthetic else None,
        synthetic_count=args.synthetic, gamma=args.gamma, delta=args.delta, c2=args.c2, xi=args.xi, beta=args.beta,
        census=args.census, timing=not args.no_timing,
    )
    try:
        config.validate()
    except ValueError as exc:
        raise CliError(str(exc)) from None
    records = run_experiment(config)
    Path(args.out).write_text(records_to_csv(records))
    for s in summarize(records):
        print(f"{s['algorithm']:>10}  M={s['M']:<6} p={s['p']:<4g}  cc={s['cc_mean']:.4f}±{s['cc_std']:.4f}  "
              f"relative={s['relative_mean']:.4f}±{s['relative_std']:.4f}  failed={s['failed']}")
    if args.plot:
        out = Path(args.plot)
        out.mkdir(parents=True, exist_ok=True)
        plot_absolute(records, out / "absolute.svg")
        plot_relative(records, out / "relative.svg")
    return 0


def cmd_calc(args) -> int:
    if args.what == "greedy-budget":
        eps, ell = alg.required_sample_size_greedy(args.gamma, args.delta, args.m, args.k)
        print(f"eps: {eps:.6f}")
        print(f"l: {ell}")
        print(f"queries: {alg.query_budget_greedy(args.gamma, args.delta, args.m, args.k, args.t)}")
    elif args.what == "ls-budget":
        if args.xi <= 1:
            raise CliError(f"--xi must exceed 1 (xi = 1 leaves no estimation margin), got {args.xi}")
        beta = args.beta if args.beta is not None else alg.ls_beta(args.gamma, args.k, args.c2)
        alpha_k = float(alpha_sequence(args.k)[args.k])
        eps, ell = alg.required_sample_size_ls(beta, args.xi, args.delta, args.m, args.k, alpha_k)
        iters = args.xi * alpha_k / beta
        f = alg.family_size(args.m, args.k, args.t)
        print(f"beta: {beta:.6f}")
        print(f"eps: {eps:.6f}")
        print(f"l: {ell}")
        print(f"iterations: {iters:.4f}")
        print(f"queries: {iters * args.t * f * ell:.6e}")
    else:
        print(f"U: {alg.required_repeats_inaccurate(args.p, args.delta, args.n, args.m)}")
    return 0


def cmd_generate(args) -> int:
    params = ResampleParams(args.q, args.phi, args.n, args.m, args.seed)
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create output directory {out}: {exc}") from None
    width = max(3, len(str(args.count - 1)))
    for i in range(args.count):
        prof = resample_election(ResampleParams(params.q, params.phi, params.n, params.m, args.seed + i))
        path = out / f"resample-{i:0{width}d}.txt"
        try:
            write_profile(prof, path)
        except OSError as exc:
            raise CliError(f"cannot write {path}: {exc}") from None
    print(f"wrote {args.count} profile(s) to {out}")
    return 0


def _dataset_name(path: Path) -> str:
    return path.parent.name if path.name == "participants-votes.csv" else path.stem


def cmd_ingest(args) -> int:
    from .polis import Vote

    codes = None
    if args.codes:
        raw = json.loads(Path(args.codes).read_text() if Path(args.codes).exists() else args.codes)
        codes = {str(text): Vote[str(state).upper()] for text, state in raw.items()}
    keep = set(read_manifest(args.manifest)) if args.manifest else None
    files = []
    for item in args.inputs:
        path = Path(item)
        files.append(path / "participants-votes.csv" if path.is_dir() else path)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    qs, phis, failures = [], [], 0
    summary = []
    for path in files:
        name = _dataset_name(path)
        if keep is not None and name not in keep:
            print(f"skip {name}: not in manifest")
            continue
        try:
            if path.suffix == ".txt":
                # already a clean profile: fit only
                prof, rep = read_profile(path), None
            else:
                prof, rep = preprocess(parse_votes(path, codes=codes), until_stable=not args.single_pass)
        except (OSError, VoteParseError, ValueError) as exc:
            print(f"error {name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        q = fit_q(prof)
        phi = fit_phi(prof, q)
        qs.append(q)
        phis.append(phi)
        entry = {"dataset": name, "n": prof.n, "m": prof.m, "q": q, "phi": phi}
        if rep is not None:
            write_profile(prof, out / f"{name}.txt")
            entry.update(n_original=rep.n_original, m_original=rep.m_original,
                         removed_statements=rep.removed_statements,
                         removed_voters_no_votes=rep.removed_voters_no_votes,
                         removed_voters_no_approvals=rep.removed_voters_no_approvals,
                         filled_neutral=rep.filled_neutral, filled_missing=rep.filled_missing)
        summary.append(entry)
        print(f"{name}: n={prof.n} m={prof.m} q={q:.4f} phi={phi:.2f}")
    if qs:
        agg = {"q": float(np.mean(qs)), "phi": float(np.mean(phis)), "datasets": len(qs)}
        print(f"aggregate over {len(qs)} dataset(s): q={agg['q']:.4f} phi={agg['phi']:.3f}")
    else:
        agg = {"q": None, "phi": None, "datasets": 0}
    (out / "ingest-report.json").write_text(json.dumps({"datasets": summary, "aggregate": agg}, indent=2) + "\n")
    return 1 if failures else 0


COMMANDS = {"run": cmd_run, "experiment": cmd_experiment, "calc": cmd_calc, "generate": cmd_generate,
            "ingest": cmd_ingest}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (CliError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
