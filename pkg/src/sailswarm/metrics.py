"""Flock metrics on the periodic arena: polarization, convex-hull area, unsafe proximity."""

from dataclasses import dataclass
import math

import numpy as np

from .geometry import min_image


@dataclass(frozen=True)
class MetricsSample:
    t: float
    polarization: float
    hull_area: float
    unsafe_pairs: int


def polarization(headings):
    """Norm of the mean heading unit vector, in [0, 1]."""
    h = np.asarray(headings, dtype=float)
    if h.size == 0:
        raise ValueError("polarization needs at least one heading")
    return float(min(1.0, math.hypot(np.cos(h).mean(), np.sin(h).mean())))


def min_image_distance(p, q, half_size):
    d = min_image(np.subtract(q, p, dtype=float), half_size)
    return float(math.hypot(d[0], d[1]))


def pairwise_min_image(points, half_size):
    """``(n, n, 2)`` minimum-image displacements ``p_j - p_i``."""
    pts = np.asarray(points, dtype=float)
    return min_image(pts[None, :, :] - pts[:, None, :], half_size)


def torus_unwrap(points, half_size):
    """Shift points by whole periods into one connected image around their circular mean.

    Exact for coherent groups (every point within half a period of the mean
    along each axis); for dispersed sets the result is still deterministic.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] == 0:
        raise ValueError("torus_unwrap needs at least one point")
    scale = math.pi / half_size
    ang = pts * scale
    s, c = np.sin(ang).mean(axis=0), np.cos(ang).mean(axis=0)
    center = np.where(np.hypot(s, c) > 1e-12, np.arctan2(s, c) / scale, 0.0)
    return center + min_image(pts - center, half_size)


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points):
    """Hull vertices in counter-clockwise order (Andrew's monotone chain), collinear points dropped."""
    pts = sorted(set(map(tuple, np.asarray(points, dtype=float).reshape(-1, 2))))
    if len(pts) <= 2:
        return pts
    lower, upper = [], []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def hull_area(points):
    hull = convex_hull(points)
    if len(hull) < 3:
        return 0.0
    xs = np.array([p[0] for p in hull])
    ys = np.array([p[1] for p in hull])
    # shoelace
    return float(0.5 * abs(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))


def count_unsafe_pairs(positions, d_near, half_size):
    """Unordered pairs closer than ``d_near`` under the minimum-image convention."""
    if not d_near > 0:
        raise ValueError("d_near must be > 0")
    pts = np.asarray(positions, dtype=float)
    if len(pts) < 2:
        return 0
    dist = np.hypot(*np.moveaxis(pairwise_min_image(pts, half_size), -1, 0))
    iu = np.triu_indices(len(pts), k=1)
    return int(np.count_nonzero(dist[iu] < d_near))


def flock_metrics(t, headings, positions, d_near, half_size):
    return MetricsSample(
        t=float(t),
        polarization=polarization(headings),
        hull_area=hull_area(torus_unwrap(positions, half_size)),
        unsafe_pairs=count_unsafe_pairs(positions, d_near, half_size),
    )
