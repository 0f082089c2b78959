"""How the speed weight tilts the social direction toward slow neighbors.

One slow neighbor sits due east and one fast neighbor due north, both in the
attraction band. With gamma = 0 the robot heads between them; positive gamma
pulls it toward the slow one, negative gamma toward the fast one. Neighbors in
the repulsion band are never weighted. The luffing rule is shown last.
"""

import math

from sailswarm.flocking import (
    LuffParams,
    NeighborView,
    SpeedWeightParams,
    ZoneRadii,
    luff_command,
    neighbor_zones,
    speed_weight,
    weighted_direction,
)

slow = NeighborView(offset=(14.0, 0.0), heading=0.0, speed=0.5)
fast = NeighborView(offset=(0.0, 14.0), heading=0.0, speed=4.0)
zones = neighbor_zones([slow, fast], ZoneRadii())

print("gamma   w(slow)  w(fast)  desired heading")
for gamma in (-2.0, -0.5, 0.0, 0.01, 0.5, 2.0, 10.0):
    p = SpeedWeightParams(gamma=gamma)
    d = weighted_direction(zones, p)
    print(f"{gamma:6.2f}  {speed_weight(slow.speed, p):7.3f}  {speed_weight(fast.speed, p):7.3f}  "
          f"{math.degrees(math.atan2(d[1], d[0])):6.1f} deg")

close = NeighborView(offset=(2.0, 0.0), heading=0.0, speed=0.1)
d = weighted_direction(neighbor_zones([close, slow, fast], ZoneRadii()), SpeedWeightParams(gamma=10.0))
print(f"\nwith a neighbor 2 m east the robot turns away regardless of gamma: "
      f"{math.degrees(math.atan2(d[1], d[0])):.1f} deg")

print("\nluffing: trim command for a robot among neighbors doing 2 m/s")
for v in (1.5, 2.0, 2.5, 3.0, 5.0):
    print(f"  own speed {v:3.1f} m/s -> trim {luff_command(v, [2.0, 2.0, 2.0], LuffParams()):.2f}")
