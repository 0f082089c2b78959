"""Wind, the speed polar and the no-go cone.

Samples a gusty wind field along a line across the arena, prints the polar
speed a boat reaches at a few points of sail, and shows how a desired heading
inside the no-go cone gets replaced by the close-hauled heading. Finally one
boat is stepped from rest on a beam reach so the speed lag is visible.
"""

import math

import numpy as np

from sailswarm.vessel import (
    HelmCommand,
    SailingLimits,
    Tack,
    VesselState,
    apply_depower,
    polar_speed,
    project_no_go,
    step_vessel,
)
from sailswarm.wind import make_environment, sample_wind_many

wind = make_environment("gusty10", seed=3)
xs = np.linspace(-30, 30, 7)
line = np.column_stack([xs, np.zeros_like(xs)])
print("wind along y = 0 at t = 10 s (base 10 m/s toward +x)")
for (x, _), (u, v) in zip(line, sample_wind_many(wind, line, 10.0)):
    print(f"  x = {x:+6.1f}  speed {math.hypot(u, v):5.2f} m/s  toward {math.degrees(math.atan2(v, u)):+6.1f} deg")

print("\npolar speed at 10 m/s true wind (beta = 0 is dead downwind)")
for beta_deg in (0, 45, 90, 120, 135, 150, 180):
    b = math.radians(beta_deg)
    full, eased = polar_speed(10.0, b), apply_depower(polar_speed(10.0, b), b, trim=0.5)
    print(f"  beta {beta_deg:3d} deg  full trim {full:5.2f} m/s  half eased {eased:5.2f} m/s")

print("\nno-go projection with the wind coming from +x (upwind = 0 rad), cone half-angle 45 deg")
for desired in (90, 30, 5, 0, -5, -30):
    h, tack, projected = project_no_go(math.radians(desired), 0.0, math.radians(45), Tack.PORT)
    print(f"  desired {desired:+4d} deg -> {math.degrees(h):+6.1f} deg  tack {tack.name.lower():9s}"
          f"  {'projected' if projected else ''}")

# the true wind blows toward +x, so a beam reach is heading +y
state = VesselState(pos=(0.0, 0.0), heading=math.pi / 2)
limits = SailingLimits()
print("\nbeam reach from rest in 5 m/s")
for t in range(1, 11):
    state = step_vessel(state, (5.0, 0.0), HelmCommand(math.pi / 2), limits, dt=1.0)
    if t in (1, 3, 6, 10):
        print(f"  t = {t:2d} s  speed {state.speed:4.2f} m/s")
