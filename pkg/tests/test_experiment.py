import csv
import io
import math
from pathlib import Path

import pytest

from diverse_committees import ResampleParams, write_profile, resample_election
from diverse_committees.experiment import (ALGORITHMS, CSV_HEADER, ExperimentConfig, cell_seed, plot_absolute,
                                           plot_relative, records_to_csv, run_experiment, summarize)

GOLDEN = Path(__file__).parent / "data" / "golden_experiment.csv"


def small_config(**kw):
    args = dict(algorithms=ALGORITHMS, k=3, t=6, M_levels=(1, 3), p_levels=(0.0, 0.1), trials=2, base_seed=42,
                synthetic=ResampleParams(0.2, 0.6, 40, 12, 5), synthetic_count=2, timing=False)
    args.update(kw)
    return ExperimentConfig(**args)


def test_golden_csv():
    assert records_to_csv(run_experiment(small_config())) == GOLDEN.read_text()


def test_header():
    text = records_to_csv(run_experiment(small_config(algorithms=["greedy"], p_levels=(0.0,), trials=1)))
    assert next(csv.reader(io.StringIO(text))) == list(CSV_HEADER)
    assert ",".join(CSV_HEADER) == "dataset,algorithm,k,M,p,trial,seed,cc,relative,queries,ms"


def test_rerun_identical():
    cfg = small_config(trials=1, base_seed=9)
    assert records_to_csv(run_experiment(cfg)) == records_to_csv(run_experiment(cfg))


def test_census_relative_is_one():
    recs = run_experiment(small_config(census=True, p_levels=(0.0,)))
    assert {r.M for r in recs if r.algorithm in ("greedy-inc", "ls-inc")} == {"census"}
    assert all(r.relative == 1.0 for r in recs)


def test_adding_algorithm_keeps_cells():
    a = run_experiment(small_config(algorithms=["greedy-inc"], p_levels=(0.0,)))
    b = run_experiment(small_config(algorithms=["ls-pav", "greedy-inc"], p_levels=(0.0,)))
    assert [r for r in b if r.algorithm == "greedy-inc"] == a


def test_seed_rule():
    assert cell_seed(10, "x", 3) == 10 + 3 + cell_seed(0, "x", 0)


def test_queries_follow_budget():
    recs = run_experiment(small_config(algorithms=["greedy-inc"], p_levels=(0.0,), M_levels=(2,)))
    # n=40, m=12, k=3, t=6: f = 3 sets, l = floor(2*40/(3*3)) = 8
    assert {r.queries for r in recs} == {3 * 6 * 3 * 8}


def test_failures_recorded_and_run_continues(monkeypatch):
    from diverse_committees import experiment

    real = experiment.alg.approval_voting

    def flaky(profile, k):
        if profile.n == 40:
            raise RuntimeError("boom")
        return real(profile, k)

    monkeypatch.setattr(experiment.alg, "approval_voting", flaky)
    recs = run_experiment(small_config(algorithms=["av", "greedy"], p_levels=(0.0,)))
    bad = [r for r in recs if r.algorithm == "av"]
    assert bad and all(math.isnan(r.cc) and "boom" in r.error for r in bad)
    assert all(r.cc > 0 for r in recs if r.algorithm == "greedy")
    assert summarize(bad)[0]["failed"] == len(bad)


@pytest.mark.parametrize("kw,msg", [
    (dict(trials=0), "trials"),
    (dict(algorithms=["nope"]), "unknown"),
    (dict(M_levels=(0,)), "M levels"),
    (dict(p_levels=(0.5,)), "p levels"),
    (dict(synthetic=None), "no datasets"),
    (dict(profiles=["/nonexistent/profile.txt"]), "not found"),
])
def test_config_validation(kw, msg):
    with pytest.raises(ValueError, match=msg):
        small_config(**kw).validate()


def test_profile_datasets(tmp_path):
    path = tmp_path / "tiny.txt"
    write_profile(resample_election(ResampleParams(0.3, 0.5, 20, 8, 1)), path)
    recs = run_experiment(ExperimentConfig(algorithms=["greedy"], k=2, profiles=[str(path)], timing=False))
    assert [r.dataset for r in recs] == ["tiny"]


def test_summary_and_plots(tmp_path):
    recs = run_experiment(small_config())
    rows = summarize(recs)
    greedy = [s for s in rows if s["algorithm"] == "greedy" and s["p"] == 0.0][0]
    assert greedy["relative_mean"] == 1.0 and greedy["relative_std"] == 0.0
    plot_absolute(recs, tmp_path / "a.svg")
    plot_relative(recs, tmp_path / "r.svg")
    assert (tmp_path / "a.svg").read_text().lstrip().startswith("<?xml")
    assert "<svg" in (tmp_path / "r.svg").read_text()
