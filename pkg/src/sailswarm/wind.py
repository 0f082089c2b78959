"""Seeded planar wind fields: a uniform base wind plus optional Gaussian gust patches.

A :class:`WindVector` is the air velocity, i.e. it points where the air is
going. Sailing code wants the opposite heading (head-to-wind), which is what
:func:`upwind_direction` returns.

Gusts are drawn from a fixed pool of patches. Each patch lives for one
``lifetime``, then respawns somewhere else; the draw for a given
``(seed, patch, epoch)`` comes from its own RNG stream, so a query at time
``t`` never depends on which queries came before it.
"""

from dataclasses import dataclass, field
from functools import lru_cache
import math
from typing import NamedTuple

import numpy as np

from .geometry import wrap_angle

ENVIRONMENTS = {
    "steady5": (5.0, False),
    "steady10": (10.0, False),
    "gusty5": (5.0, True),
    "gusty10": (10.0, True),
    # no wind at all; handy for checking that nothing moves
    "calm": (0.0, False),
}


class WindVector(NamedTuple):
    u: float
    v: float

    @property
    def speed(self):
        return math.hypot(self.u, self.v)


@dataclass(frozen=True)
class GustParams:
    patch_count: int = 6
    patch_radius: float = 8.0
    amplitude_fraction: float = 0.5
    direction_jitter: float = math.radians(20.0)
    lifetime: float = 20.0

    def __post_init__(self):
        if self.patch_count < 1:
            raise ValueError("patch_count must be positive")
        if self.patch_radius <= 0 or self.lifetime <= 0 or self.direction_jitter <= 0:
            raise ValueError("gust radius, lifetime and jitter must be positive")
        if not 0 < self.amplitude_fraction <= 1:
            raise ValueError("amplitude_fraction must lie in (0, 1]")


@dataclass(frozen=True)
class WindField:
    base_speed: float
    base_direction: float = 0.0
    gusts_enabled: bool = False
    gust_params: GustParams = field(default_factory=GustParams)
    seed: int = 0
    arena_half: float = 35.0

    def __post_init__(self):
        if not self.base_speed >= 0:
            raise ValueError(f"base_speed must be >= 0, got {self.base_speed}")
        object.__setattr__(self, "base_direction", wrap_angle(float(self.base_direction)))

    @property
    def base(self):
        return WindVector(
            self.base_speed * math.cos(self.base_direction),
            self.base_speed * math.sin(self.base_direction),
        )


def make_environment(kind, seed, arena_half=35.0, gust_params=None):
    """Build a named environment: ``steady5``, ``steady10``, ``gusty5``, ``gusty10`` (or ``calm``)."""
    try:
        speed, gusts = ENVIRONMENTS[kind]
    except KeyError:
        raise ValueError(f"unknown environment {kind!r}; expected one of {sorted(ENVIRONMENTS)}") from None
    return WindField(
        base_speed=speed,
        base_direction=0.0,
        gusts_enabled=gusts,
        gust_params=gust_params or GustParams(),
        seed=int(seed),
        arena_half=arena_half,
    )


@lru_cache(maxsize=8192)
def _patch_draw(seed, patch_id, epoch, arena_half, jitter):
    rng = np.random.default_rng([seed, patch_id, epoch])
    cx, cy = rng.uniform(-arena_half, arena_half, size=2)
    turn = rng.uniform(-jitter, jitter)
    strength = rng.uniform(0.0, 1.0)
    return float(cx), float(cy), float(turn), float(strength)


def gust_patches(wind, t):
    """Active patches at time ``t`` as an array of rows ``(cx, cy, gu, gv)``.

    ``(gu, gv)`` is the peak gust velocity at the patch center, already scaled
    by the patch's temporal envelope. Patch ``k`` is phase-shifted by
    ``k * lifetime / patch_count`` so the pool does not respawn all at once.
    """
    gp = wind.gust_params
    rows = np.empty((gp.patch_count, 4))
    mask = (1 << 64) - 1
    seed = wind.seed & mask
    for k in range(gp.patch_count):
        local = t / gp.lifetime + k / gp.patch_count
        epoch = math.floor(local)
        phase = local - epoch
        cx, cy, turn, strength = _patch_draw(seed, k, epoch, wind.arena_half, gp.direction_jitter)
        peak = gp.amplitude_fraction * wind.base_speed * strength * math.sin(math.pi * phase) ** 2
        ang = wind.base_direction + turn
        rows[k] = cx, cy, peak * math.cos(ang), peak * math.sin(ang)
    return rows


def sample_wind_many(wind, positions, t):
    """Wind at each row of ``positions`` (shape ``(n, 2)``) at time ``t``; returns ``(n, 2)``."""
    pos = np.atleast_2d(np.asarray(positions, dtype=float))
    out = np.empty_like(pos)
    out[:, 0], out[:, 1] = wind.base
    if not wind.gusts_enabled or wind.base_speed == 0:
        return out
    patches = gust_patches(wind, t)
    d2 = (pos[:, None, 0] - patches[None, :, 0]) ** 2 + (pos[:, None, 1] - patches[None, :, 1]) ** 2
    shape = np.exp(-d2 / (2.0 * wind.gust_params.patch_radius ** 2))
    # explicit per-row sum keeps a point's value independent of how many points are queried
    out += (shape[:, :, None] * patches[None, :, 2:]).sum(axis=1)
    return out


def sample_wind(wind, pos, t):
    u, v = sample_wind_many(wind, [pos], t)[0]
    return WindVector(float(u), float(v))


def upwind_direction(w):
    """Heading pointing straight into the wind, in (-pi, pi]."""
    u, v = w
    if u == 0 and v == 0:
        raise ValueError("no defined upwind direction for a zero wind vector")
    return wrap_angle(math.atan2(-v, -u))
