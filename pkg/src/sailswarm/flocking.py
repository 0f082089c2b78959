"""Zonal (Couzin-type) flocking, its speed-weighted variant, sail luffing and a safety filter.

Every function here is stateless and reads only a snapshot of the swarm, so
all robots of one tick can be evaluated in any order.
"""

from dataclasses import dataclass, field
import math
from typing import NamedTuple

import numpy as np

from .geometry import wrap_angle
from .vessel import HelmCommand

HOLD_TOL = 1e-9


@dataclass(frozen=True)
class ZoneRadii:
    r_rep: float = 4.0
    r_ori: float = 10.0
    r_att: float = 18.0

    def __post_init__(self):
        if not 0 < self.r_rep < self.r_ori < self.r_att:
            raise ValueError(f"need 0 < r_rep < r_ori < r_att, got {self.r_rep}, {self.r_ori}, {self.r_att}")


@dataclass(frozen=True)
class SpeedWeightParams:
    gamma: float = 0.0
    epsilon: float = 0.1

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")


@dataclass(frozen=True)
class LuffParams:
    k_p: float = 0.4
    speed_floor: float = 0.1

    def __post_init__(self):
        if self.k_p < 0 or not self.speed_floor > 0:
            raise ValueError("need k_p >= 0 and speed_floor > 0")


@dataclass(frozen=True)
class SafetyParams:
    d_safe: float = 1.5
    d_near: float = 1.0
    lookahead: float = 2.0
    heading_grid: float = math.radians(10.0)

    def __post_init__(self):
        if not 0 < self.d_near <= self.d_safe:
            raise ValueError("need 0 < d_near <= d_safe")
        if not (self.lookahead > 0 and self.heading_grid > 0):
            raise ValueError("lookahead and heading_grid must be > 0")


@dataclass(frozen=True)
class ControllerConfig:
    """Which social rule to run and with what constants.

    ``kind`` is ``"baseline"`` (uniform Couzin, never luffs) or
    ``"speed_weighted"``. ``luffing`` only matters for the speed-weighted rule.
    """

    kind: str = "baseline"
    speed_weight: SpeedWeightParams = field(default_factory=SpeedWeightParams)
    radii: ZoneRadii = field(default_factory=ZoneRadii)
    luff: LuffParams = field(default_factory=LuffParams)
    safety: SafetyParams = field(default_factory=SafetyParams)
    luffing: bool = True
    safety_filter: bool = True

    def __post_init__(self):
        if self.kind not in ("baseline", "speed_weighted"):
            raise ValueError(f"unknown controller kind {self.kind!r}")


class NeighborView(NamedTuple):
    """What robot i sees of neighbor j: minimum-image offset ``p_j - p_i``, heading and speed."""

    offset: tuple
    heading: float
    speed: float

    @property
    def distance(self):
        return math.hypot(self.offset[0], self.offset[1])


class Zones(NamedTuple):
    repulsion: list
    orientation: list
    attraction: list


def neighbor_zones(neighbors, radii):
    """Sort neighbors into half-open distance bands ``[0, r_rep)``, ``[r_rep, r_ori)``, ``[r_ori, r_att)``."""
    zones = Zones([], [], [])
    for nb in neighbors:
        d = nb.distance
        if d < radii.r_rep:
            zones.repulsion.append(nb)
        elif d < radii.r_ori:
            zones.orientation.append(nb)
        elif d < radii.r_att:
            zones.attraction.append(nb)
    return zones


def _bearing(nb):
    d = nb.distance
    if d == 0:
        return 0.0, 0.0
    return nb.offset[0] / d, nb.offset[1] / d


def _normalized(x, y):
    n = math.hypot(x, y)
    if n < HOLD_TOL:
        return None
    return np.array([x / n, y / n])


def speed_weight(v, params):
    """Regularized inverse-power weight ``1 / (v + eps)**gamma``."""
    if params.gamma == 0:
        return 1.0
    return 1.0 / (v + params.epsilon) ** params.gamma


def _social(zones, weight):
    if zones.repulsion:
        x = y = 0.0
        for nb in zones.repulsion:
            bx, by = _bearing(nb)
            x -= bx
            y -= by
        return _normalized(x, y)
    x = y = 0.0
    for nb in zones.orientation:
        w = weight(nb.speed)
        x += w * math.cos(nb.heading)
        y += w * math.sin(nb.heading)
    for nb in zones.attraction:
        w = weight(nb.speed)
        bx, by = _bearing(nb)
        x += w * bx
        y += w * by
    return _normalized(x, y)


def couzin_direction(zones):
    """Unit social direction with repulsion taking priority, or ``None`` to hold the current heading."""
    return _social(zones, lambda v: 1.0)


def weighted_direction(zones, params):
    """As :func:`couzin_direction`, with orientation and attraction terms weighted by neighbor speed.

    Repulsion stays unweighted.
    """
    return _social(zones, lambda v: speed_weight(v, params))


def luff_command(self_speed, neighbor_speeds, params):
    """Sail trim that eases a boat running faster than its neighbors' mean speed."""
    if len(neighbor_speeds) == 0:
        return 1.0
    mean = float(np.mean(neighbor_speeds))
    excess = max(0.0, self_speed - mean)
    return min(1.0, max(0.0, 1.0 - params.k_p * excess / max(mean, params.speed_floor)))


def candidate_headings(candidate, spacing):
    """Headings on a grid through ``candidate``, nearest first: c, c+s, c-s, c+2s, ..."""
    n = max(1, int(round(2 * math.pi / spacing)))
    ks = [0]
    for k in range(1, n // 2 + 1):
        ks.append(k)
        if len(ks) < n:
            ks.append(-k)
    return wrap_angle(candidate + spacing * np.array(ks[:n], dtype=float))


def predicted_clearance(headings, speed, neighbors, lookahead):
    """Smallest distance to any neighbor after ``lookahead`` seconds, for each candidate heading.

    Neighbors keep their current velocity; the robot sails the candidate at its current speed.
    """
    headings = np.atleast_1d(headings)
    if not neighbors:
        return np.full(headings.shape, np.inf)
    off = np.array([nb.offset for nb in neighbors], dtype=float)
    hv = np.array([nb.heading for nb in neighbors])
    sv = np.array([nb.speed for nb in neighbors])
    future = off + lookahead * sv[:, None] * np.column_stack((np.cos(hv), np.sin(hv)))
    own = lookahead * speed * np.column_stack((np.cos(headings), np.sin(headings)))
    gap = future[None, :, :] - own[:, None, :]
    return np.sqrt((gap ** 2).sum(axis=2)).min(axis=1)


def safety_filter(candidate, state, neighbors, params):
    """Keep ``candidate`` unless it closes within ``d_safe`` of a neighbor; then take the nearest clear heading.

    If every grid heading is unsafe, the one with the most predicted clearance wins.
    """
    if not neighbors:
        return candidate
    reach = 2 * params.d_safe + (state.speed + max(nb.speed for nb in neighbors)) * params.lookahead
    if min(nb.distance for nb in neighbors) > reach:
        return candidate
    grid = candidate_headings(candidate, params.heading_grid)
    clear = predicted_clearance(grid, state.speed, neighbors, params.lookahead)
    ok = np.flatnonzero(clear >= params.d_safe)
    if ok.size:
        return float(grid[ok[0]])
    return float(grid[int(np.argmax(clear))])


def social_heading(state, neighbors, config):
    """Desired heading from the social rule alone (no safety filter, no luffing)."""
    zones = neighbor_zones(neighbors, config.radii)
    if config.kind == "baseline":
        direction = couzin_direction(zones)
    else:
        direction = weighted_direction(zones, config.speed_weight)
    if direction is None:
        return state.heading
    return math.atan2(direction[1], direction[0])


def controller_tick(state, neighbors, config):
    """Full per-robot controller: social heading, safety filter, then trim.

    ``neighbors`` should already be limited to robots within ``r_att``.
    """
    heading = social_heading(state, neighbors, config)
    if config.safety_filter:
        heading = safety_filter(heading, state, neighbors, config.safety)
    trim = 1.0
    if config.kind == "speed_weighted" and config.luffing:
        trim = luff_command(state.speed, [nb.speed for nb in neighbors], config.luff)
    return HelmCommand(heading, trim)
