"""CSV schemas for metrics, summaries and comparisons, plus the table and SVG renderings.

Every writer goes through :func:`atomic_write`, so an interrupted command
never leaves a truncated file behind. Floats are written with ``repr`` which
round-trips exactly.
"""

import contextlib
import csv
import io
import math
import os
import tempfile

from .harness import METRICS, SeedSummary, SummaryRow
from .stats import significance_stars

METRICS_HEADER = ["t", "polarization", "hull_area", "unsafe_pairs"]
TRAJECTORY_HEADER = ["t", "robot", "x", "y", "heading", "speed", "trim", "tack"]
SUMMARY_HEADER = ["env", "controller", "gamma", "seed", "median_polarization", "median_hull_area",
                  "cumulative_unsafe"]
COMPARISON_HEADER = ["env", "gamma", "metric", "median_delta", "iqr_lo", "iqr_hi", "p_raw", "p_holm", "d_z",
                     "significant"]


class DataError(ValueError):
    pass


def fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return "" if math.isnan(x) else repr(x)
    return str(x)


@contextlib.contextmanager
def atomic_write(path):
    """Text handle on a temp file in the target directory, renamed over ``path`` on success."""
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            yield fh
        os.replace(tmp, path)
    except BaseException:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(tmp)
        raise


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) for x in row])
    return buf.getvalue()


def metrics_csv(series):
    return _csv_text(METRICS_HEADER, ((s.t, s.polarization, s.hull_area, s.unsafe_pairs) for s in series.samples))


def trajectory_csv(series, dt):
    rows = []
    for k, states in enumerate(series.trajectory):
        for i, s in enumerate(states):
            rows.append((k * dt, i, s.pos[0], s.pos[1], s.heading, s.speed, s.trim, s.tack.name.lower()))
    return _csv_text(TRAJECTORY_HEADER, rows)


def summaries_csv(rows):
    return _csv_text(SUMMARY_HEADER, (
        (r.env, r.controller, r.gamma, r.seed, r.summary.median_polarization, r.summary.median_hull_area,
         r.summary.cumulative_unsafe)
        for r in rows
    ))


def read_summaries(path):
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames != SUMMARY_HEADER:
                raise DataError(f"{path}: expected header {','.join(SUMMARY_HEADER)}")
            rows = []
            for lineno, rec in enumerate(reader, start=2):
                try:
                    gamma = math.nan if rec["gamma"] == "" else float(rec["gamma"])
                    seed = int(rec["seed"])
                    rows.append(SummaryRow(rec["env"], rec["controller"], gamma, SeedSummary(
                        seed, float(rec["median_polarization"]), float(rec["median_hull_area"]),
                        int(rec["cumulative_unsafe"]))))
                except (TypeError, ValueError) as exc:
                    raise DataError(f"{path}:{lineno}: bad row ({exc})") from None
    except OSError as exc:
        raise DataError(f"{path}: cannot read ({exc.strerror})") from None
    return rows


def comparison_csv(comparisons):
    rows = []
    for c in comparisons:
        for m in METRICS:
            r = c.metrics[m]
            rows.append((c.env, c.gamma, m, r.median_delta, r.iqr[0], r.iqr[1], r.p_raw, r.p_holm, r.d_z,
                         r.significant))
    return _csv_text(COMPARISON_HEADER, rows)


def table3(comparisons, gamma=0.01):
    """Plain-text table of median deltas at one gamma, with stars on Holm p and d_z in brackets."""
    lines = [f"{'environment':<12} {'gamma':>6}  {'dA_hull [m2]':>22}  {'dPhi':>22}  {'dC':>22}"]
    for c in comparisons:
        if c.gamma != gamma:
            continue
        cells = []
        for m in METRICS:
            r = c.metrics[m]
            digits = 3 if m == "polarization" else 1
            dz = "nan" if math.isnan(r.d_z) else f"{r.d_z:+.2f}"
            cells.append(f"{r.median_delta:+.{digits}f}{significance_stars(r.p_holm)} [{dz}]")
        lines.append(f"{c.env:<12} {c.gamma:>6g}  " + "  ".join(f"{x:>22}" for x in cells))
    lines.append("* p<0.05  ** p<1e-3  *** p<1e-5 (Holm-adjusted); brackets: Cohen's d_z")
    return "\n".join(lines) + "\n"


def comparison_svg(comparisons):
    """Median delta against gamma with IQR bars, one panel per metric, one line per environment."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, len(METRICS), figsize=(4 * len(METRICS), 3.2))
    envs = list(dict.fromkeys(c.env for c in comparisons))
    for ax, m in zip(axes, METRICS):
        for env in envs:
            cs = sorted((c for c in comparisons if c.env == env), key=lambda c: c.gamma)
            g = [c.gamma for c in cs]
            med = [c.metrics[m].median_delta for c in cs]
            lo = [c.metrics[m].median_delta - c.metrics[m].iqr[0] for c in cs]
            hi = [c.metrics[m].iqr[1] - c.metrics[m].median_delta for c in cs]
            ax.errorbar(g, med, yerr=[lo, hi], marker="o", ms=3, capsize=2, label=env)
        ax.axhline(0, color="k", lw=0.6)
        ax.set_xscale("symlog", linthresh=0.01)
        ax.set_xlabel("gamma")
        ax.set_title(f"delta {m}")
    axes[0].legend(fontsize=7)
    fig.tight_layout()
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()
