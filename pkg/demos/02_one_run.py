"""A single 300 s run of the baseline flock, then the same seed with speed weighting.

Both runs share the seed, so they start from the same positions and see the
same wind. The printout shows the flock metrics every 50 s and the
steady-state summary over 100 to 300 s.
"""

from sailswarm.harness import SimConfig, run_sim, steady_summary

base = SimConfig(environment="steady10")
for label, cfg in (("baseline", base), ("speed-weighted, gamma = 0.01", base.with_controller("speed_weighted", 0.01))):
    series = run_sim(cfg, seed=7)
    print(label)
    for s in series.samples[::50]:
        print(f"  t = {s.t:5.0f}  polarization {s.polarization:.3f}  hull {s.hull_area:7.1f} m2  "
              f"unsafe pairs {s.unsafe_pairs}")
    summary = steady_summary(series)
    print(f"  steady state: median polarization {summary.median_polarization:.3f}, "
          f"median hull {summary.median_hull_area:.1f} m2, unsafe pair-ticks {summary.cumulative_unsafe}\n")
