"""A small batch experiment with CSV output and plots.

Complete-information rules on a few synthetic elections, next to the
sampled greedy at several query budgets and noise levels.
"""

import sys
from pathlib import Path

from diverse_committees.datagen import ResampleParams
from diverse_committees.experiment import (ExperimentConfig, plot_absolute, plot_relative, run_experiment,
                                           summarize, write_csv)

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-output")
out.mkdir(parents=True, exist_ok=True)

config = ExperimentConfig(
    algorithms=("greedy", "ls", "av", "ls-pav", "greedy-inc"),
    k=6, t=15, M_levels=(1, 3, 5), p_levels=(0.0, 0.1), trials=2,
    synthetic=ResampleParams(0.0891, 0.693, 300, 80, seed=0), synthetic_count=3,
    timing=False,
)
records = run_experiment(config)
write_csv(records, out / "results.csv")
for s in summarize(records):
    print(f"{s['algorithm']:>10}  M={s['M']:<5} p={s['p']:<4g} cc={s['cc_mean']:.4f}  relative={s['relative_mean']:.3f}")

plot_absolute(records, out / "absolute.svg")
plot_relative(records, out / "relative.svg")
print("wrote", out / "results.csv", "and two SVG plots")
