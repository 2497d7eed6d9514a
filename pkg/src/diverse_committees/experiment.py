"""Batch experiments: every dataset x algorithm x M x p x trial cell.

Complete-information algorithms run once per ``(dataset, p, trial)`` with
``M = "full"``.  At ``p > 0`` they see a single noisy reading of every ballot
entry, as an algorithm that ignores the noise would.  Sampled algorithms run
once per ``M`` level, with the sample size from :func:`m_budget_sample_size`,
or once with ``M = "census"`` when the config asks for census sampling.

The relative score of a record is its CC score divided by the score of the
matching complete-information algorithm at ``p = 0`` on the same dataset and
trial.  Local-search variants share the initial basis of that trial.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import os
import time
import zlib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import algorithms as alg
from .datagen import ResampleParams, resample_election
from .fileio import read_profile
from .matroid import uniform_matroid
from .oracle import QueryOracle
from .profile import ApprovalProfile

log = logging.getLogger(__name__)

CSV_HEADER = ("dataset", "algorithm", "k", "M", "p", "trial", "seed", "cc", "relative", "queries", "ms")

COMPLETE = ("greedy", "ls", "av", "ls-pav")
SAMPLED = ("greedy-inc", "ls-inc")
ALGORITHMS = COMPLETE + SAMPLED
COUNTERPART = {"greedy": "greedy", "ls": "ls", "av": "av", "ls-pav": "ls-pav", "greedy-inc": "greedy", "ls-inc": "ls"}


@dataclass
class ExperimentConfig:
    """Everything an experiment depends on.

    Datasets come from ``profiles`` (canonical profile files) and/or
    ``synthetic`` (``count`` elections drawn from the resampling model with
    seeds ``seed, seed+1, ...``).
    """

    algorithms: Sequence[str] = ("greedy", "ls", "av", "ls-pav")
    k: int = 8
    t: int = 20
    M_levels: Sequence[float] = (1, 2, 3, 4, 5)
    p_levels: Sequence[float] = (0.0,)
    trials: int = 1
    base_seed: int = 0
    profiles: Sequence[str] = ()
    synthetic: ResampleParams | None = None
    synthetic_count: int = 0
    gamma: float = 0.85
    delta: float = 0.05
    c2: float = 1.0
    xi: float = 2.0
    beta: float | None = None
    census: bool = False
    timing: bool = True

    def validate(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        unknown = [a for a in self.algorithms if a not in ALGORITHMS]
        if unknown:
            raise ValueError(f"unknown algorithm id(s) {unknown}; choose from {list(ALGORITHMS)}")
        if any(M <= 0 for M in self.M_levels):
            raise ValueError(f"M levels must be positive, got {list(self.M_levels)}")
        if any(not 0 <= p < 0.5 for p in self.p_levels):
            raise ValueError(f"p levels must lie in [0, 1/2), got {list(self.p_levels)}")
        missing = [p for p in self.profiles if not os.path.exists(p)]
        if missing:
            raise ValueError(f"dataset file(s) not found: {missing}")
        if not self.profiles and (self.synthetic is None or self.synthetic_count < 1):
            raise ValueError("config names no datasets")

    @property
    def step_threshold(self) -> float:
        return self.beta if self.beta is not None else alg.ls_beta(self.gamma, self.k, self.c2)


@dataclass
class ExperimentRecord:
    dataset: str
    algorithm: str
    k: int
    M: str
    p: float
    trial: int
    seed: int
    cc: float
    relative: float
    queries: int
    ms: float
    error: str | None = field(default=None, compare=False)

    def row(self) -> list[str]:
        return [self.dataset, self.algorithm, str(self.k), self.M, repr(float(self.p)), str(self.trial),
                str(self.seed), repr(float(self.cc)), repr(float(self.relative)), str(self.queries),
                f"{self.ms:.3f}"]


def cell_seed(base_seed: int, key: str, trial: int) -> int:
    """``base_seed + crc32(key) + trial``; stable across runs and Python versions."""
    return base_seed + zlib.crc32(key.encode()) + trial


def load_datasets(config: ExperimentConfig) -> list[tuple[str, ApprovalProfile]]:
    out = [(Path(p).stem, read_profile(p)) for p in config.profiles]
    if config.synthetic is not None:
        base = config.synthetic.seed or 0
        for i in range(config.synthetic_count):
            params = ResampleParams(config.synthetic.q, config.synthetic.phi, config.synthetic.n,
                                    config.synthetic.m, base + i)
            out.append((f"synthetic-{i:03d}", resample_election(params)))
    return out


def _format_M(M) -> str:
    if isinstance(M, str):
        return M
    return str(int(M)) if float(M).is_integer() else repr(float(M))


class _Runner:
    def __init__(self, config: ExperimentConfig):
        self.c = config
        self._baseline: dict = {}

    def basis_seed(self, name: str, trial: int) -> int:
        return cell_seed(self.c.base_seed, f"{name}|basis", trial)

    def complete(self, algo: str, prof: ApprovalProfile, name: str, trial: int) -> alg.RunResult:
        c = self.c
        if algo == "greedy":
            return alg.greedy(prof, c.k)
        if algo == "av":
            return alg.approval_voting(prof, c.k)
        if algo == "ls":
            return alg.local_search_beta(prof, uniform_matroid(prof.m, c.k), c.step_threshold,
                                         seed=self.basis_seed(name, trial))
        if algo == "ls-pav":
            return alg.ls_pav(prof, c.k, seed=self.basis_seed(name, trial))
        raise ValueError(f"unknown algorithm id {algo!r}")

    def baseline(self, algo: str, truth: ApprovalProfile, name: str, trial: int) -> float:
        key = (name, algo, trial if algo in ("ls", "ls-pav") else 0)
        if key not in self._baseline:
            self._baseline[key] = self.complete(algo, truth, name, trial).score
        return self._baseline[key]

    def run(self, algo: str, truth: ApprovalProfile, name: str, M, p: float, trial: int, seed: int):
        c = self.c
        if algo in COMPLETE:
            if p == 0:
                return self.complete(algo, truth, name, trial), 0
            oracle = QueryOracle(truth, p=p, seed=seed)
            noisy = alg.decode_majority(oracle, 1)
            res = self.complete(algo, noisy, name, trial)
            return res, oracle.queries
        oracle = QueryOracle(truth, p=p, seed=seed, census=(M == "census"))
        ell = truth.n if M == "census" else alg.m_budget_sample_size(M, truth.n, truth.m, c.k, c.t)
        if algo == "greedy-inc":
            res = alg.greedy_incomplete(oracle, c.k, c.t, c.gamma, c.delta, ell=ell)
        else:
            xi = 1.0 if M == "census" else c.xi
            res = alg.ls_incomplete(oracle, uniform_matroid(truth.m, c.k), c.step_threshold, c.t, c.delta, xi=xi,
                                    seed=self.basis_seed(name, trial), ell=ell)
        return res, oracle.queries


def run_experiment(config: ExperimentConfig, datasets=None) -> list[ExperimentRecord]:
    """Run every cell of ``config`` in a fixed order and return one record per run."""
    config.validate()
    if datasets is None:
        datasets = load_datasets(config)
    runner = _Runner(config)
    levels = ["census"] if config.census else list(config.M_levels)
    records = []
    for name, truth in datasets:
        for algo in config.algorithms:
            Ms = ["full"] if algo in COMPLETE else levels
            for p in config.p_levels:
                for M in Ms:
                    Mtxt = _format_M(M)
                    for trial in range(config.trials):
                        seed = cell_seed(config.base_seed, f"{name}|{algo}|{Mtxt}|{float(p)!r}", trial)
                        t0 = time.perf_counter()
                        try:
                            res, queries = runner.run(algo, truth, name, M, float(p), trial, seed)
                            base = runner.baseline(COUNTERPART[algo], truth, name, trial)
                            cc, err = res.score, None
                            rel = cc / base if base > 0 else math.nan
                        except Exception as exc:  # one bad cell must not stop the batch
                            log.warning("cell %s/%s/M=%s/p=%s/trial=%d failed: %s", name, algo, Mtxt, p, trial, exc)
                            cc = rel = math.nan
                            queries, err = 0, f"{type(exc).__name__}: {exc}"
                        ms = (time.perf_counter() - t0) * 1000 if config.timing else 0.0
                        records.append(ExperimentRecord(name, algo, config.k, Mtxt, float(p), trial, seed, cc, rel,
                                                        queries, ms, err))
    return records


def records_to_csv(records: Sequence[ExperimentRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in records:
        writer.writerow(r.row())
    return buf.getvalue()


def write_csv(records: Sequence[ExperimentRecord], path) -> None:
    Path(path).write_text(records_to_csv(records))


def summarize(records: Sequence[ExperimentRecord], by=("algorithm", "M", "p")) -> list[dict]:
    """Mean and (population) standard deviation of ``cc`` and ``relative`` per group, NaN rows dropped."""
    groups: dict[tuple, list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault(tuple(getattr(r, b) for b in by), []).append(r)
    out = []
    for key, rs in groups.items():
        cc = np.array([r.cc for r in rs], dtype=float)
        rel = np.array([r.relative for r in rs], dtype=float)
        cc, rel = cc[~np.isnan(cc)], rel[~np.isnan(rel)]
        row = dict(zip(by, key))
        row.update(
            runs=len(rs),
            failed=sum(r.error is not None for r in rs),
            cc_mean=float(cc.mean()) if cc.size else math.nan,
            cc_std=float(cc.std()) if cc.size else math.nan,
            relative_mean=float(rel.mean()) if rel.size else math.nan,
            relative_std=float(rel.std()) if rel.size else math.nan,
        )
        out.append(row)
    return out


def plot_absolute(records: Sequence[ExperimentRecord], path) -> None:
    """Mean CC per dataset and complete-information algorithm (p = 0), with std bars."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in records if r.M == "full" and r.p == 0]
    stats = summarize(rows, by=("dataset", "algorithm"))
    names = list(dict.fromkeys(r.dataset for r in rows))
    algos = list(dict.fromkeys(r.algorithm for r in rows))
    width = 0.8 / max(len(algos), 1)
    fig, ax = plt.subplots(figsize=(max(6, 0.5 * len(names) * len(algos)), 4))
    for j, a in enumerate(algos):
        look = {s["dataset"]: s for s in stats if s["algorithm"] == a}
        xs = np.arange(len(names)) + j * width
        ax.bar(xs, [look[d]["cc_mean"] for d in names], width, yerr=[look[d]["cc_std"] for d in names], label=a,
               capsize=2)
    ax.set_xticks(np.arange(len(names)) + 0.4 - width / 2)
    ax.set_xticklabels(names, rotation=60, ha="right", fontsize=7)
    ax.set_ylabel("CC score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)


def plot_relative(records: Sequence[ExperimentRecord], path) -> None:
    """Mean relative score against M for the sampled algorithms, one line per (algorithm, p)."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    stats = summarize([r for r in records if r.algorithm in SAMPLED and r.M not in ("full", "census")])
    fig, ax = plt.subplots(figsize=(6, 4))
    for a, p in dict.fromkeys((s["algorithm"], s["p"]) for s in stats):
        pts = sorted((float(s["M"]), s["relative_mean"], s["relative_std"]) for s in stats
                     if s["algorithm"] == a and s["p"] == p)
        if not pts:
            continue
        xs, ys, es = zip(*pts)
        ax.errorbar(xs, ys, yerr=es, marker="o", capsize=3, label=f"{a}, p={p:g}")
    ax.set_xlabel("M (expected queries per voter)")
    ax.set_ylabel("relative CC score")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
