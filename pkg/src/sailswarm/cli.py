"""``sailswarm run | sweep | analyze``.

Every config leaf can be overridden with ``--<leaf> VALUE``; values are read
as JSON when they parse (``--gamma 0.5``, ``--luffing false``,
``--environments '["steady5"]'``) and as plain strings otherwise.

Exit codes: 0 success, 2 configuration error, 3 data error.
"""

import argparse
import datetime
import json
import logging
import os
import sys

from . import __version__
from .config import LEAF_PATHS, build_plan, build_sim_config, digest, load_config
from .harness import ConfigError, SweepError, UnpairedSeedsError, compare_all, run_sim, run_sweep
from .results import (
    DataError,
    atomic_write,
    comparison_csv,
    comparison_svg,
    metrics_csv,
    read_summaries,
    summaries_csv,
    table3,
    trajectory_csv,
)

log = logging.getLogger("sailswarm")

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 2, 3


def _parse_value(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _add_overrides(p):
    g = p.add_argument_group("config overrides")
    for key in sorted(LEAF_PATHS):
        g.add_argument(f"--{key}", dest=f"ov_{key}", metavar="VALUE", type=_parse_value, default=None,
                       help=argparse.SUPPRESS)


def _overrides(args):
    return {k[3:]: v for k, v in vars(args).items() if k.startswith("ov_") and v is not None}


def build_parser():
    parser = argparse.ArgumentParser(prog="sailswarm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"sailswarm {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="simulate one seed and write the per-tick metrics CSV")
    run.add_argument("--config", help="JSON config file (defaults apply when omitted)")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", required=True, help="metrics CSV path")
    run.add_argument("--trajectory", help="optional per-robot trajectory CSV path")
    _add_overrides(run)

    sweep = sub.add_parser("sweep", help="run the environment x controller x gamma x seed plan")
    sweep.add_argument("--config")
    sweep.add_argument("--seeds", type=int, help="number of seeds (overrides sweep.n_seeds)")
    sweep.add_argument("--jobs", type=int, default=1, help="worker processes; output does not depend on it")
    sweep.add_argument("--out", required=True, help="output directory")
    _add_overrides(sweep)

    analyze = sub.add_parser("analyze", help="paired comparisons of a summaries CSV against the baseline")
    analyze.add_argument("summaries", help="summaries CSV written by `sweep`")
    analyze.add_argument("--out", required=True, help="comparison CSV path")
    analyze.add_argument("--svg", help="optional delta-vs-gamma figure (needs matplotlib)")
    analyze.add_argument("--table3", action="store_true", help="print the gamma = 0.01 results table")
    analyze.add_argument("--gamma", type=float, default=0.01, help="gamma shown by --table3")
    return parser


def _write(path, text):
    with atomic_write(path) as fh:
        fh.write(text)
    log.info("wrote %s", path)


def cmd_run(args):
    cfg = load_config(args.config, _overrides(args))
    sim = build_sim_config(cfg)
    series = run_sim(sim, args.seed, keep_trajectory=bool(args.trajectory))
    # render both before writing either, so a failure leaves nothing behind
    metrics = metrics_csv(series)
    traj = trajectory_csv(series, sim.dt) if args.trajectory else None
    _write(args.out, metrics)
    if traj is not None:
        _write(args.trajectory, traj)
    return EXIT_OK


def cmd_sweep(args):
    overrides = _overrides(args)
    if args.seeds is not None:
        overrides["n_seeds"] = args.seeds
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be >= 1, got {args.jobs}")
    cfg = load_config(args.config, overrides)
    plan = build_plan(cfg)
    os.makedirs(args.out, exist_ok=True)

    step = max(1, len(list(plan.tasks())) // 20)

    def progress(n, total):
        if n % step == 0 or n == total:
            log.info("sweep %d/%d", n, total)

    rows = run_sweep(plan, jobs=args.jobs, progress=progress)
    summaries = os.path.join(args.out, "summaries.csv")
    config_copy = os.path.join(args.out, "config.json")
    _write(summaries, summaries_csv(rows))
    _write(config_copy, json.dumps(cfg, indent=2, sort_keys=True) + "\n")
    manifest = {
        "digest": digest(cfg),
        "version": __version__,
        "seeds": list(plan.seeds),
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "outputs": [summaries, config_copy],
        "rows": len(rows),
    }
    _write(os.path.join(args.out, "manifest.json"), json.dumps(manifest, indent=2) + "\n")
    return EXIT_OK


def cmd_analyze(args):
    rows = read_summaries(args.summaries)
    if not rows:
        raise DataError(f"{args.summaries}: no rows")
    comparisons = compare_all(rows)
    text = comparison_csv(comparisons)
    svg = comparison_svg(comparisons) if args.svg else None
    _write(args.out, text)
    if svg is not None:
        _write(args.svg, svg)
    if args.table3:
        sys.stdout.write(table3(comparisons, args.gamma))
    return EXIT_OK


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "analyze": cmd_analyze}


def main(argv=None):
    level = os.environ.get("SAILSWARM_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"sailswarm: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DataError, UnpairedSeedsError, SweepError) as exc:
        cause = f" ({exc.__cause__})" if exc.__cause__ else ""
        print(f"sailswarm: data error: {exc}{cause}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"sailswarm: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
