"""JSON run configuration: defaults, validation with line numbers, and conversion to runtime objects.

The document mirrors :class:`~sailswarm.harness.SimConfig`. Angles are given
in degrees (keys ending in ``_deg``). Every leaf key is unique across
sections so the CLI can expose each one as ``--<key>``.
"""

import copy
import hashlib
import json
import math
import re

from .flocking import ControllerConfig, LuffParams, SafetyParams, SpeedWeightParams, ZoneRadii
from .harness import GAMMA_GRID, DEFAULT_ENVIRONMENTS, STEADY_WINDOW, ConfigError, SimConfig, SweepPlan
from .vessel import SailingLimits
from .wind import GustParams

DEFAULTS = {
    "n_robots": 10,
    "arena_half": 35.0,
    "dt": 1.0,
    "horizon": 300.0,
    "init_radius": 10.0,
    "environment": "steady5",
    "controller": {"kind": "baseline", "gamma": 0.0, "epsilon": 0.1, "luffing": True, "safety_filter": True},
    "radii": {"r_rep": 4.0, "r_ori": 10.0, "r_att": 18.0},
    "luff": {"k_p": 0.4, "speed_floor": 0.1},
    "safety": {"d_safe": 1.5, "d_near": 1.0, "lookahead": 2.0, "heading_grid_deg": 10.0},
    "sailing": {
        "no_go_half_angle_deg": 45.0,
        "yaw_gain": 1.0,
        "max_yaw_rate": 0.5,
        "yaw_ref_speed": 1.0,
        "speed_time_const": 3.0,
        "tack_hysteresis_deg": 10.0,
        "avoid_cone_turns": True,
    },
    "gusts": {
        "patch_count": 6,
        "patch_radius": 8.0,
        "amplitude_fraction": 0.5,
        "direction_jitter_deg": 20.0,
        "lifetime": 20.0,
    },
    "sweep": {
        "environments": list(DEFAULT_ENVIRONMENTS),
        "gammas": list(GAMMA_GRID),
        "n_seeds": 50,
        "first_seed": 0,
        "window": list(STEADY_WINDOW),
    },
}


def _leaves(tree, prefix=()):
    for k, v in tree.items():
        if isinstance(v, dict):
            yield from _leaves(v, prefix + (k,))
        else:
            yield prefix + (k,), v


LEAF_PATHS = {path[-1]: path for path, _ in _leaves(DEFAULTS)}
assert len(LEAF_PATHS) == sum(1 for _ in _leaves(DEFAULTS)), "config leaf names must be unique"


def _line_of(text, key):
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def _fail(msg, source, text, key=None):
    line = _line_of(text, key) if key else None
    where = f"{source}:{line}" if line else source
    raise ConfigError(f"{where}: {msg}")


def _check_value(path, value, default, source, text):
    key = path[-1]
    name = ".".join(path)
    if isinstance(default, bool):
        ok = isinstance(value, bool)
    elif isinstance(default, int):
        ok = isinstance(value, int) and not isinstance(value, bool)
    elif isinstance(default, float):
        ok = isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)
    elif isinstance(default, str):
        ok = isinstance(value, str)
    elif isinstance(default, list):
        ok = isinstance(value, list)
    else:
        ok = True
    if not ok:
        _fail(f"{name} has the wrong type (expected {type(default).__name__}, got {value!r})", source, text, key)
    return float(value) if isinstance(default, float) else value


def _merge(base, user, source, text, prefix=()):
    if not isinstance(user, dict):
        _fail(f"section {'.'.join(prefix) or '<root>'} must be an object", source, text, prefix[-1] if prefix else None)
    for key, value in user.items():
        path = prefix + (key,)
        if key not in base:
            _fail(f"unknown key {'.'.join(path)}", source, text, key)
        if isinstance(base[key], dict):
            _merge(base[key], value, source, text, path)
        else:
            base[key] = _check_value(path, value, base[key], source, text)


def load_config(path=None, overrides=None):
    """Defaults, then the JSON file at ``path`` (if any), then ``{leaf_key: value}`` overrides."""
    cfg = copy.deepcopy(DEFAULTS)
    text = None
    source = str(path) if path else "<defaults>"
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"{path}: cannot read config ({exc.strerror})") from None
        try:
            user = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        _merge(cfg, user, source, text)
    for key, value in (overrides or {}).items():
        if key not in LEAF_PATHS:
            raise ConfigError(f"--{key}: unknown config key")
        path_ = LEAF_PATHS[key]
        node = cfg
        for part in path_[:-1]:
            node = node[part]
        node[path_[-1]] = _check_value(path_, value, node[path_[-1]], f"--{key}", None)
    build_sim_config(cfg)  # validate eagerly
    build_plan(cfg)
    return cfg


def build_sim_config(cfg):
    c, r, lf, sf, sl, g = (cfg[k] for k in ("controller", "radii", "luff", "safety", "sailing", "gusts"))
    try:
        controller = ControllerConfig(
            kind=c["kind"],
            speed_weight=SpeedWeightParams(gamma=c["gamma"], epsilon=c["epsilon"]),
            radii=ZoneRadii(r["r_rep"], r["r_ori"], r["r_att"]),
            luff=LuffParams(k_p=lf["k_p"], speed_floor=lf["speed_floor"]),
            safety=SafetyParams(d_safe=sf["d_safe"], d_near=sf["d_near"], lookahead=sf["lookahead"],
                                heading_grid=math.radians(sf["heading_grid_deg"])),
            luffing=c["luffing"],
            safety_filter=c["safety_filter"],
        )
        limits = SailingLimits(
            no_go_half_angle=math.radians(sl["no_go_half_angle_deg"]),
            yaw_gain=sl["yaw_gain"],
            max_yaw_rate=sl["max_yaw_rate"],
            yaw_ref_speed=sl["yaw_ref_speed"],
            speed_time_const=sl["speed_time_const"],
            tack_hysteresis=math.radians(sl["tack_hysteresis_deg"]),
            avoid_cone_turns=sl["avoid_cone_turns"],
        )
        gusts = GustParams(
            patch_count=g["patch_count"],
            patch_radius=g["patch_radius"],
            amplitude_fraction=g["amplitude_fraction"],
            direction_jitter=math.radians(g["direction_jitter_deg"]),
            lifetime=g["lifetime"],
        )
        sim = SimConfig(
            n_robots=cfg["n_robots"],
            arena_half=cfg["arena_half"],
            dt=cfg["dt"],
            horizon=cfg["horizon"],
            init_radius=cfg["init_radius"],
            environment=cfg["environment"],
            controller=controller,
            limits=limits,
            gusts=gusts,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return sim.validate()


def build_plan(cfg):
    sw = cfg["sweep"]
    if sw["n_seeds"] < 1:
        raise ConfigError("sweep.n_seeds must be >= 1")
    if not sw["environments"]:
        raise ConfigError("sweep.environments must not be empty")
    if len(sw["window"]) != 2 or sw["window"][0] > sw["window"][1]:
        raise ConfigError("sweep.window must be [start, end] with start <= end")
    if len(set(sw["gammas"])) != len(sw["gammas"]):
        raise ConfigError("sweep.gammas must not repeat")
    base = build_sim_config(cfg)
    for env in sw["environments"]:
        build_sim_config({**cfg, "environment": env})
    return SweepPlan(
        environments=tuple(sw["environments"]),
        gammas=tuple(float(g) for g in sw["gammas"]),
        seeds=tuple(range(sw["first_seed"], sw["first_seed"] + sw["n_seeds"])),
        base_config=base,
        window=tuple(float(x) for x in sw["window"]),
    )


def digest(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
