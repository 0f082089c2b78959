"""Angle and periodic-box helpers shared by the other modules."""

import math

import numpy as np

TWO_PI = 2.0 * math.pi


def wrap_angle(a):
    """Map an angle (scalar or array) into (-pi, pi]."""
    if isinstance(a, np.ndarray):
        return math.pi - np.mod(math.pi - a, TWO_PI)
    return math.pi - math.fmod(math.fmod(math.pi - a, TWO_PI) + TWO_PI, TWO_PI)


def min_image(d, half_size):
    """Minimum-image representative of a displacement on a torus of period 2*half_size."""
    period = 2.0 * half_size
    return d - period * np.round(np.asarray(d, dtype=float) / period)


def wrap_position(p, half_size):
    """Fold coordinates into [-half_size, half_size)."""
    period = 2.0 * half_size
    q = np.mod(np.asarray(p, dtype=float) + half_size, period) - half_size
    # np.mod can round a tiny negative up to exactly one period
    return np.where(q >= half_size, q - period, q)


def unit(angle):
    return np.array([math.cos(angle), math.sin(angle)])
