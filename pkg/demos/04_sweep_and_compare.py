"""A small paired sweep and its statistical comparison.

Runs the baseline and two gamma values on a handful of seeds in two
environments, then compares each treated run with its same-seed baseline
(Wilcoxon signed-rank, Holm-adjusted across gammas). The full study is the
``sailswarm sweep`` command with the default configuration; this keeps to
about a minute.
"""

from sailswarm.harness import SweepPlan, compare_all, run_sweep
from sailswarm.results import table3

plan = SweepPlan(environments=("steady5", "gusty10"), gammas=(0.01, 10.0), seeds=tuple(range(8)))
rows = run_sweep(plan, progress=lambda n, total: print(f"\r{n}/{total} runs", end="", flush=True))
print()

for c in compare_all(rows):
    print(f"{c.env:8s} gamma {c.gamma:5g}")
    for name, m in c.metrics.items():
        print(f"    {name:14s} median delta {m.median_delta:+9.4f}  IQR [{m.iqr[0]:+.3f}, {m.iqr[1]:+.3f}]"
              f"  p_holm {m.p_holm:.3f}  d_z {m.d_z:+.2f}")

print()
print(table3(compare_all(rows), gamma=0.01))
