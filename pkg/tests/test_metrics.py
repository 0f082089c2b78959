import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from sailswarm.metrics import (
    convex_hull,
    count_unsafe_pairs,
    flock_metrics,
    hull_area,
    min_image_distance,
    polarization,
    torus_unwrap,
)


class TestPolarization:
    def test_aligned(self):
        assert polarization([0.7] * 10) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 7, 10])
    def test_uniform_spread(self, n):
        assert polarization(np.linspace(0, 2 * math.pi, n, endpoint=False)) == pytest.approx(0.0, abs=1e-12)

    def test_right_angle(self):
        assert polarization([0.0, math.pi / 2]) == pytest.approx(math.sqrt(2) / 2, abs=1e-12)

    def test_empty(self):
        with pytest.raises(ValueError):
            polarization([])

    @given(st.lists(st.floats(-10, 10), min_size=1, max_size=20), st.floats(-10, 10))
    def test_rotation_invariant(self, hs, rot):
        p = polarization(hs)
        assert 0.0 <= p <= 1.0
        assert polarization(np.array(hs) + rot) == pytest.approx(p, abs=1e-9)


class TestMinImage:
    def test_seam(self):
        assert min_image_distance((34, 0), (-34, 0), 35) == pytest.approx(2.0)

    def test_same_point(self):
        assert min_image_distance((3, -7), (3, -7), 35) == 0.0

    def test_interior(self):
        assert min_image_distance((0, 0), (3, 4), 35) == pytest.approx(5.0)

    def test_both_axes(self):
        assert min_image_distance((34, 34), (-34, -34), 35) == pytest.approx(math.sqrt(8))

    @given(st.floats(-35, 34.999), st.floats(-35, 34.999), st.floats(-35, 34.999), st.floats(-35, 34.999))
    def test_against_image_search(self, a, b, c, d):
        # brute force over the 9 neighboring images
        best = min(math.hypot(c + 70 * i - a, d + 70 * j - b) for i in (-1, 0, 1) for j in (-1, 0, 1))
        assert min_image_distance((a, b), (c, d), 35) == pytest.approx(best, abs=1e-9)


class TestUnwrap:
    def test_cluster_across_seam(self):
        out = torus_unwrap([[33, 0], [34, 0], [-34, 0]], 35)
        assert out[:, 0] == pytest.approx([33, 34, 36])
        assert out[:, 1] == pytest.approx([0, 0, 0])

    def test_central_points_unchanged(self):
        pts = np.array([[1.0, 2.0], [-3.0, 0.5], [2.5, -1.5]])
        assert torus_unwrap(pts, 35) == pytest.approx(pts)

    def test_single_point(self):
        assert torus_unwrap([[12.0, -30.0]], 35) == pytest.approx(np.array([[12.0, -30.0]]))

    def test_gaps_are_min_image(self):
        rng = np.random.default_rng(0)
        for _ in range(50):
            c = rng.uniform(-35, 35, 2)
            pts = (c + rng.uniform(-8, 8, (10, 2)) + 35) % 70 - 35
            out = torus_unwrap(pts, 35)
            for i in range(10):
                for j in range(10):
                    assert np.hypot(*(out[i] - out[j])) == pytest.approx(min_image_distance(pts[i], pts[j], 35))


class TestHull:
    def test_unit_square(self):
        assert hull_area([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5]]) == pytest.approx(1.0)

    def test_collinear(self):
        assert hull_area([[0, 0], [1, 1], [2, 2], [3, 3]]) == 0.0

    def test_triangle(self):
        assert hull_area([[0, 0], [1, 0], [0, 1]]) == pytest.approx(0.5)

    def test_few_points(self):
        assert hull_area([[1, 1]]) == 0.0
        assert hull_area([[1, 1], [2, 3]]) == 0.0
        assert hull_area([[1, 1], [1, 1], [1, 1]]) == 0.0

    def test_against_scipy(self):
        spatial = pytest.importorskip("scipy.spatial")
        rng = np.random.default_rng(1)
        for _ in range(200):
            pts = rng.normal(size=(rng.integers(3, 30), 2)) * rng.uniform(0.1, 20)
            assert hull_area(pts) == pytest.approx(spatial.ConvexHull(pts).volume, rel=1e-12)

    def test_hull_is_ccw(self):
        h = convex_hull([[0, 0], [2, 0], [2, 2], [0, 2], [1, 1]])
        assert h == [(0, 0), (2, 0), (2, 2), (0, 2)]


class TestUnsafe:
    def test_one_close_pair(self):
        assert count_unsafe_pairs([[0, 0], [0.5, 0], [10, 10]], 1.0, 35) == 1

    def test_none(self):
        assert count_unsafe_pairs([[0, 0], [1.0, 0], [5, 5]], 1.0, 35) == 0

    def test_three_mutual(self):
        assert count_unsafe_pairs([[0, 0], [0.3, 0], [0, 0.3]], 1.0, 35) == 3

    def test_across_seam(self):
        assert count_unsafe_pairs([[34.8, 0], [-34.8, 0]], 1.0, 35) == 1

    def test_bounds_and_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            n = rng.integers(2, 12)
            pts = rng.uniform(-35, 35, (n, 2)) * rng.uniform(0.01, 1)
            c = count_unsafe_pairs(pts, 2.0, 35)
            brute = sum(min_image_distance(pts[i], pts[j], 35) < 2.0 for i in range(n) for j in range(i + 1, n))
            assert c == brute
            assert 0 <= c <= n * (n - 1) // 2


def test_flock_metrics_sample():
    s = flock_metrics(3.0, [0.0, 0.0, 0.0], [[0, 0], [0.5, 0], [0, 3]], 1.0, 35)
    assert s.t == 3.0 and s.polarization == pytest.approx(1.0)
    assert s.hull_area == pytest.approx(0.75)
    assert s.unsafe_pairs == 1
