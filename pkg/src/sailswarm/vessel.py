"""Reduced-order sailing kinematics.

One robot is a point with a heading, a forward speed and a sail trim. Speed
follows a fixed polar (fraction of wind speed as a function of the apparent
wind angle), relaxes toward that target with a first-order lag, and can be
cut by easing the sail. Turning authority shrinks with speed, so a boat that
has stopped cannot turn.

Angles are radians throughout; the apparent-wind angle ``beta`` runs from 0
(dead downwind) to pi (head-to-wind).
"""

from dataclasses import dataclass, replace
import enum
import math
from typing import NamedTuple

import numpy as np

from .geometry import wrap_angle
from .wind import upwind_direction

# (beta in degrees, fraction of true wind speed)
POLAR_TABLE = ((0.0, 0.35), (45.0, 0.50), (90.0, 0.55), (135.0, 0.35), (150.0, 0.0), (180.0, 0.0))
_POLAR_BETA = np.radians([b for b, _ in POLAR_TABLE])
_POLAR_FRAC = np.array([f for _, f in POLAR_TABLE])


class Tack(enum.IntEnum):
    """Which side of the wind the boat sails on; the value is the sign of the heading offset from upwind."""

    PORT = -1
    STARBOARD = 1


@dataclass(frozen=True)
class VesselState:
    pos: tuple
    heading: float
    speed: float = 0.0
    trim: float = 1.0
    tack: Tack = Tack.STARBOARD

    def __post_init__(self):
        object.__setattr__(self, "pos", (float(self.pos[0]), float(self.pos[1])))
        object.__setattr__(self, "heading", wrap_angle(float(self.heading)))
        if self.speed < 0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        if not 0.0 <= self.trim <= 1.0:
            raise ValueError(f"trim must lie in [0, 1], got {self.trim}")

    @property
    def velocity(self):
        return (self.speed * math.cos(self.heading), self.speed * math.sin(self.heading))


class HelmCommand(NamedTuple):
    desired_heading: float
    trim_command: float = 1.0


@dataclass(frozen=True)
class SailingLimits:
    no_go_half_angle: float = math.radians(45.0)
    yaw_gain: float = 1.0
    max_yaw_rate: float = 0.5
    yaw_ref_speed: float = 1.0
    speed_time_const: float = 3.0
    tack_hysteresis: float = math.radians(10.0)
    # Turn the long way round rather than swinging the bow through the no-go cone.
    avoid_cone_turns: bool = True

    def __post_init__(self):
        for name in ("no_go_half_angle", "yaw_gain", "max_yaw_rate", "yaw_ref_speed",
                     "speed_time_const", "tack_hysteresis"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0")
        if not self.no_go_half_angle < math.pi / 2:
            raise ValueError("no_go_half_angle must be below pi/2")


ZERO_DRIFT = (0.0, 0.0)


def apparent_wind_angle(state, w):
    """Unsigned angle between the heading and where the apparent wind blows to, in [0, pi]."""
    vx, vy = state.velocity
    au, av = w[0] - vx, w[1] - vy
    if au == 0 and av == 0:
        raise ValueError("becalmed: apparent wind is zero")
    return abs(wrap_angle(state.heading - math.atan2(av, au)))


def polar_speed(wind_speed, beta):
    """Target boat speed for a true wind speed and apparent-wind angle (piecewise-linear polar)."""
    if wind_speed < 0:
        raise ValueError("wind_speed must be >= 0")
    return wind_speed * float(np.interp(abs(beta), _POLAR_BETA, _POLAR_FRAC))


def apply_depower(target, beta, trim):
    """Scale a target speed by the luffing factor ``1 - (beta/pi)**2 * (1 - trim)``."""
    return target * (1.0 - (beta / math.pi) ** 2 * (1.0 - trim))


def project_no_go(desired, upwind, half_angle, current_tack, hysteresis=math.radians(10.0)):
    """Replace a heading inside the no-go cone by the close-hauled heading on the same side.

    Returns ``(heading, new_tack, was_projected)``. A desired heading exactly
    into the wind keeps the current tack. The tack only flips once the desired
    heading sits more than ``hysteresis`` past head-to-wind on the other side.
    """
    delta = wrap_angle(desired - upwind)
    tack = Tack(current_tack)
    if tack is Tack.STARBOARD and delta < -hysteresis:
        tack = Tack.PORT
    elif tack is Tack.PORT and delta > hysteresis:
        tack = Tack.STARBOARD
    if abs(delta) >= half_angle:
        return wrap_angle(desired), tack, False
    side = math.copysign(1.0, delta) if delta != 0 else float(current_tack)
    return wrap_angle(upwind + side * half_angle), tack, True


def turn_error(heading, target, upwind=None):
    """Signed turn from ``heading`` to ``target``.

    Normally the short way round. When ``upwind`` is given and the short arc
    would sweep through head-to-wind, the long way is returned instead.
    """
    err = wrap_angle(target - heading)
    if upwind is None or err == 0:
        return err
    off = wrap_angle(upwind - heading)
    crosses = (0 < off < err) if err > 0 else (err < off < 0)
    if crosses:
        err -= math.copysign(2.0 * math.pi, err)
    return err


def max_turn_rate(speed, limits):
    return limits.max_yaw_rate * min(1.0, speed / limits.yaw_ref_speed)


def yaw_rate(state, feasible_heading, limits, upwind=None):
    limit = max_turn_rate(state.speed, limits)
    err = turn_error(state.heading, feasible_heading, upwind)
    return min(limit, max(-limit, limits.yaw_gain * err))


def target_speed(state, w, trim):
    """Depowered polar speed for the current heading in wind ``w``."""
    wind_speed = math.hypot(w[0], w[1])
    if wind_speed == 0:
        return 0.0
    try:
        beta = apparent_wind_angle(state, w)
    except ValueError:
        # moving exactly with the air: nothing to drive the sail
        return 0.0
    return apply_depower(polar_speed(wind_speed, beta), beta, trim)


def steer(state, w, cmd, limits):
    """Project the commanded heading out of the no-go cone and pick a yaw rate.

    Returns ``(omega, feasible_heading, new_tack)``. With no wind there is no
    cone, the command passes straight through.
    """
    if w[0] == 0 and w[1] == 0:
        return yaw_rate(state, cmd.desired_heading, limits), wrap_angle(cmd.desired_heading), state.tack
    up = upwind_direction(w)
    feasible, tack, _ = project_no_go(
        cmd.desired_heading, up, limits.no_go_half_angle, state.tack, limits.tack_hysteresis
    )
    omega = yaw_rate(state, feasible, limits, up if limits.avoid_cone_turns else None)
    return omega, feasible, tack


def step_vessel(state, w, cmd, limits, dt, drift=ZERO_DRIFT):
    """Advance one robot by ``dt``.

    Position moves with the speed and heading held at the start of the step
    plus drift; the heading then turns by ``dt * omega`` and the speed relaxes
    toward the depowered polar target with time constant ``speed_time_const``.
    """
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt}")
    omega, _, tack = steer(state, w, cmd, limits)
    trim = min(1.0, max(0.0, cmd.trim_command))
    vx, vy = state.velocity
    x = state.pos[0] + dt * (vx + drift[0])
    y = state.pos[1] + dt * (vy + drift[1])
    target = target_speed(state, w, trim)
    decay = math.exp(-dt / limits.speed_time_const)
    speed = max(0.0, target + (state.speed - target) * decay)
    return replace(state, pos=(x, y), heading=state.heading + dt * omega, speed=speed, trim=trim, tack=tack)
