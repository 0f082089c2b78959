"""Seeded runs, steady-state summaries, the gamma x environment x seed sweep and paired comparisons."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from . import stats
from .flocking import ControllerConfig, NeighborView, SpeedWeightParams, controller_tick
from .geometry import wrap_position
from .metrics import flock_metrics, pairwise_min_image
from .vessel import SailingLimits, Tack, VesselState, project_no_go, step_vessel
from .wind import ENVIRONMENTS, GustParams, make_environment, sample_wind_many, upwind_direction

log = logging.getLogger(__name__)

GAMMA_GRID = (
    -2.0, -1.5, -1.0, -0.75, -0.5, -0.3, -0.2, -0.1, -0.05, -0.01,
    0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0, 2.0, 3.0, 4.0, 5.0, 7.5, 10.0,
)
DEFAULT_ENVIRONMENTS = ("steady5", "steady10", "gusty5", "gusty10")
STEADY_WINDOW = (100.0, 300.0)
METRICS = ("hull_area", "polarization", "unsafe_events")

# RNG stream offsets under a run seed
_SWARM_STREAM = 0
_WIND_STREAM = 1


class ConfigError(ValueError):
    pass


class UnpairedSeedsError(ValueError):
    pass


class SweepError(RuntimeError):
    def __init__(self, key):
        super().__init__(f"run failed for {key}")
        self.key = key


@dataclass(frozen=True)
class SimConfig:
    n_robots: int = 10
    arena_half: float = 35.0
    dt: float = 1.0
    horizon: float = 300.0
    init_radius: float = 10.0
    environment: str = "steady5"
    controller: ControllerConfig = field(default_factory=ControllerConfig)
    limits: SailingLimits = field(default_factory=SailingLimits)
    gusts: GustParams = field(default_factory=GustParams)

    def validate(self):
        if self.n_robots < 2:
            raise ConfigError(f"n_robots must be >= 2, got {self.n_robots}")
        if not self.dt > 0:
            raise ConfigError(f"dt must be > 0, got {self.dt}")
        if not self.horizon >= self.dt:
            raise ConfigError(f"horizon must be >= dt, got {self.horizon}")
        if not 0 < self.init_radius < self.arena_half:
            raise ConfigError("init_radius must lie in (0, arena_half)")
        if self.environment not in ENVIRONMENTS:
            raise ConfigError(f"unknown environment {self.environment!r}")
        return self

    @property
    def n_steps(self):
        return int(math.floor(self.horizon / self.dt + 1e-9))

    def with_controller(self, kind, gamma=None):
        ctrl = self.controller
        if gamma is None:
            return replace(self, controller=replace(ctrl, kind=kind))
        sw = SpeedWeightParams(gamma=gamma, epsilon=ctrl.speed_weight.epsilon)
        return replace(self, controller=replace(ctrl, kind=kind, speed_weight=sw))


@dataclass
class TimeSeries:
    seed: int
    samples: list
    trajectory: list = None

    @property
    def t(self):
        return np.array([s.t for s in self.samples])

    @property
    def polarization(self):
        return np.array([s.polarization for s in self.samples])

    @property
    def hull_area(self):
        return np.array([s.hull_area for s in self.samples])

    @property
    def unsafe_pairs(self):
        return np.array([s.unsafe_pairs for s in self.samples])


@dataclass(frozen=True)
class SeedSummary:
    seed: int
    median_polarization: float
    median_hull_area: float
    cumulative_unsafe: int


@dataclass(frozen=True)
class SummaryRow:
    env: str
    controller: str
    gamma: float  # nan for the baseline
    summary: SeedSummary

    @property
    def seed(self):
        return self.summary.seed

    def metric(self, name):
        s = self.summary
        return {"hull_area": s.median_hull_area, "polarization": s.median_polarization,
                "unsafe_events": float(s.cumulative_unsafe)}[name]


def stream_seed(seed, stream):
    """A 64-bit seed for one named stream under a run seed."""
    state = np.random.SeedSequence([int(seed), stream]).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def environment_for(config, seed):
    return make_environment(config.environment, stream_seed(seed, _WIND_STREAM),
                            arena_half=config.arena_half, gust_params=config.gusts)


def initialize_swarm(config, seed, wind=None):
    """Positions uniform over the disk of radius ``init_radius``, headings uniform on [-pi, pi).

    Everyone starts stopped, fully powered, on starboard tack. If ``wind`` is
    given, headings that start inside the no-go cone are moved to the
    close-hauled edge on their side; a boat at rest there could never turn out.
    """
    rng = np.random.default_rng([int(seed), _SWARM_STREAM])
    n = config.n_robots
    r = config.init_radius * np.sqrt(rng.uniform(0.0, 1.0, n))
    phi = rng.uniform(-math.pi, math.pi, n)
    headings = rng.uniform(-math.pi, math.pi, n)
    states = []
    for i in range(n):
        pos = (r[i] * math.cos(phi[i]), r[i] * math.sin(phi[i]))
        heading, tack = float(headings[i]), Tack.STARBOARD
        if wind is not None:
            w = sample_wind_many(wind, [pos], 0.0)[0]
            if w[0] != 0 or w[1] != 0:
                up = upwind_direction(w)
                heading, tack, _ = project_no_go(heading, up, config.limits.no_go_half_angle, tack, 0.0)
        states.append(VesselState(pos=pos, heading=heading, speed=0.0, trim=1.0, tack=tack))
    return states


def _neighbor_views(states, disp, dist, i, r_att):
    return [
        NeighborView((float(disp[i, j, 0]), float(disp[i, j, 1])), states[j].heading, states[j].speed)
        for j in range(len(states))
        if j != i and dist[i, j] < r_att
    ]


def _sample(t, states, config):
    pos = np.array([s.pos for s in states])
    return flock_metrics(t, [s.heading for s in states], pos, config.controller.safety.d_near, config.arena_half)


def run_sim(config, seed, keep_trajectory=False):
    """One seeded run with synchronous updates; returns a sample for every tick including t = 0."""
    config.validate()
    wind = environment_for(config, seed)
    states = initialize_swarm(config, seed, wind)
    half = config.arena_half
    r_att = config.controller.radii.r_att
    samples = [_sample(0.0, states, config)]
    trajectory = [tuple(states)] if keep_trajectory else None
    for k in range(config.n_steps):
        t = k * config.dt
        pos = np.array([s.pos for s in states])
        winds = sample_wind_many(wind, pos, t)
        disp = pairwise_min_image(pos, half)
        dist = np.hypot(disp[..., 0], disp[..., 1])
        new_states = []
        for i, st in enumerate(states):
            cmd = controller_tick(st, _neighbor_views(states, disp, dist, i, r_att), config.controller)
            nxt = step_vessel(st, (winds[i, 0], winds[i, 1]), cmd, config.limits, config.dt)
            new_states.append(replace(nxt, pos=tuple(wrap_position(nxt.pos, half))))
        states = new_states
        t_next = (k + 1) * config.dt
        samples.append(_sample(t_next, states, config))
        if keep_trajectory:
            trajectory.append(tuple(states))
    return TimeSeries(seed=int(seed), samples=samples, trajectory=trajectory)


def steady_summary(series, window=STEADY_WINDOW):
    """Time-medians of polarization and hull area, and the summed unsafe pairs, over ``window`` (inclusive)."""
    t = series.t
    sel = (t >= window[0] - 1e-9) & (t <= window[1] + 1e-9)
    if not sel.any():
        raise ValueError(f"no samples inside window {window}")
    return SeedSummary(
        seed=series.seed,
        median_polarization=float(np.median(series.polarization[sel])),
        median_hull_area=float(np.median(series.hull_area[sel])),
        cumulative_unsafe=int(series.unsafe_pairs[sel].sum()),
    )


def gamma_grid():
    return list(GAMMA_GRID)


@dataclass(frozen=True)
class SweepPlan:
    environments: tuple = DEFAULT_ENVIRONMENTS
    gammas: tuple = GAMMA_GRID
    seeds: tuple = tuple(range(50))
    base_config: SimConfig = field(default_factory=SimConfig)
    window: tuple = STEADY_WINDOW

    def tasks(self):
        """Run keys ``(env, controller, gamma, seed)`` in output order: baseline first, then each gamma."""
        for env in self.environments:
            for gamma in (None, *self.gammas):
                for seed in self.seeds:
                    yield (env, "baseline" if gamma is None else "speed_weighted", gamma, seed)


def _run_task(args):
    plan, key = args
    env, kind, gamma, seed = key
    cfg = replace(plan.base_config, environment=env).with_controller(kind, gamma)
    try:
        summary = steady_summary(run_sim(cfg, seed), plan.window)
    except Exception as exc:
        raise SweepError(key) from exc
    return SummaryRow(env, kind, math.nan if gamma is None else float(gamma), summary)


def run_sweep(plan, jobs=1, progress=None):
    """Summaries for every (environment, controller, gamma, seed) of ``plan``.

    Baseline and treated runs share seeds, and the wind realization depends
    only on the seed, so every treated row has an exactly matched baseline.
    Row order is fixed by the plan, whatever ``jobs`` is.
    """
    if not (plan.environments and plan.seeds):
        raise ConfigError("sweep plan needs at least one environment and one seed")
    plan.base_config.validate()
    work = [(plan, key) for key in plan.tasks()]
    log.info("sweep: %d runs on %d worker(s)", len(work), jobs)
    rows = []
    if jobs <= 1:
        results = map(_run_task, work)
        for n, row in enumerate(results, 1):
            rows.append(row)
            if progress:
                progress(n, len(work))
        return rows
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for n, row in enumerate(pool.map(_run_task, work, chunksize=max(1, len(work) // (4 * jobs))), 1):
            rows.append(row)
            if progress:
                progress(n, len(work))
    return rows


@dataclass(frozen=True)
class MetricComparison:
    median_delta: float
    iqr: tuple
    p_raw: float
    p_holm: float
    d_z: float
    significant: bool
    n_zeros: int


@dataclass(frozen=True)
class ComparisonRow:
    env: str
    gamma: float
    metrics: dict


def _paired(rows, env, gamma):
    base = {r.seed: r for r in rows if r.env == env and r.controller == "baseline"}
    treated = {r.seed: r for r in rows
               if r.env == env and r.controller == "speed_weighted" and r.gamma == gamma}
    if not treated:
        raise UnpairedSeedsError(f"no treated rows for env={env} gamma={gamma}")
    if set(base) != set(treated):
        raise UnpairedSeedsError(
            f"unpaired seeds for env={env} gamma={gamma}: "
            f"baseline-only {sorted(set(base) - set(treated))}, treated-only {sorted(set(treated) - set(base))}"
        )
    return [(base[s], treated[s]) for s in sorted(base)]


def _test(diffs):
    try:
        res = stats.wilcoxon_signed_rank(diffs)
        return res.p_value, res.n_zeros
    except ValueError:
        return 1.0, len(diffs)


def _dz(diffs):
    try:
        return stats.cohens_dz(diffs)
    except ValueError:
        return math.nan


def compare_env(rows, env):
    """Comparison rows for every gamma of one environment; Holm runs across those gammas per metric."""
    gammas = []
    for r in rows:
        if r.env == env and r.controller == "speed_weighted" and r.gamma not in gammas:
            gammas.append(r.gamma)
    diffs = {}
    for g in gammas:
        pairs = _paired(rows, env, g)
        for m in METRICS:
            diffs[g, m] = np.array([t.metric(m) - b.metric(m) for b, t in pairs])
    raw = {(g, m): _test(diffs[g, m]) for g in gammas for m in METRICS}
    holm = {}
    for m in METRICS:
        adj = stats.holm_adjust([raw[g, m][0] for g in gammas])
        holm.update({(g, m): p for g, p in zip(gammas, adj)})
    out = []
    for g in gammas:
        per = {}
        for m in METRICS:
            med, iqr = stats.summarize(diffs[g, m])
            p_raw, zeros = raw[g, m]
            per[m] = MetricComparison(med, iqr, p_raw, holm[g, m], _dz(diffs[g, m]),
                                      stats.is_improvement(holm[g, m], med, m), zeros)
        out.append(ComparisonRow(env, g, per))
    return out


def compare_all(rows):
    envs = []
    for r in rows:
        if r.env not in envs:
            envs.append(r.env)
    return [c for env in envs for c in compare_env(rows, env)]


def compare(rows, env, gamma):
    for c in compare_env(rows, env):
        if c.gamma == gamma:
            return c
    raise UnpairedSeedsError(f"no treated rows for env={env} gamma={gamma}")
