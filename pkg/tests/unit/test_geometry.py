"""
Unit tests for gaze geometry.

Tests angle/vector conversion, angular error, clamping and
screen projection.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from geometry import (
    GazeAngles,
    GazeInterval,
    GazeVector,
    ScreenGeometry,
    angles_to_vector,
    angular_error,
    angular_errors,
    clamp_angles,
    clamp_to_interval,
    pitchyaw_to_vectors,
    project_many,
    project_to_screen,
    vector_to_angles,
    vectors_to_pitchyaw,
)
from utils.exceptions import DataValidationError, DegenerateGeometryError

pytestmark = pytest.mark.unit


class TestConversion:
    """Test cases for pitch/yaw <-> vector conversion."""

    def test_zero_gaze_points_at_camera(self):
        """Test (0, 0) maps to (0, 0, -1)."""
        g = angles_to_vector(GazeAngles(0.0, 0.0))
        np.testing.assert_allclose(g.as_array(), [0.0, 0.0, -1.0], atol=1e-15)

    def test_straight_up(self):
        """Test pitch 90 maps to (0, -1, 0)."""
        g = angles_to_vector(GazeAngles(90.0, 0.0))
        np.testing.assert_allclose(g.as_array(), [0.0, -1.0, 0.0], atol=1e-12)

    def test_roundtrip_in_interval(self):
        """Test 1000 random angles in the default interval survive a roundtrip."""
        rng = np.random.default_rng(0)
        angles = np.column_stack(
            [rng.uniform(-30, 14, 1000), rng.uniform(-26, 26, 1000)]
        )
        back = vectors_to_pitchyaw(pitchyaw_to_vectors(angles))
        assert np.max(np.abs(back - angles)) < 1e-9

    def test_vectors_are_unit(self):
        """Test conversion always yields unit vectors."""
        rng = np.random.default_rng(1)
        v = pitchyaw_to_vectors(rng.uniform(-89, 89, (500, 2)))
        np.testing.assert_allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)

    def test_zero_vector_rejected(self):
        """Test the inverse rejects a zero-length vector."""
        with pytest.raises(DataValidationError):
            vector_to_angles(np.zeros(3))

    def test_non_unit_vector_rejected(self):
        """Test GazeVector enforces unit length."""
        with pytest.raises(DataValidationError):
            GazeVector(0.0, 0.0, -2.0)
        assert GazeVector.from_array([0.0, 0.0, -2.0]).z == pytest.approx(-1.0)

    def test_sign_conventions(self):
        """Test positive pitch looks up and positive yaw looks subject-left."""
        up = angles_to_vector(GazeAngles(10.0, 0.0))
        left = angles_to_vector(GazeAngles(0.0, 10.0))
        assert up.y < 0
        assert left.x < 0


class TestAngularError:
    """Test cases for angular error."""

    def test_identical_and_opposite(self):
        """Test 0 degrees for equal vectors and 180 for opposite ones."""
        g = angles_to_vector(GazeAngles(5.0, -7.0))
        neg = GazeVector(-g.x, -g.y, -g.z)
        assert angular_error(g, g) == pytest.approx(0.0, abs=1e-6)
        assert angular_error(g, neg) == pytest.approx(180.0)

    def test_pure_pitch_offset(self):
        """Test (0, 0) vs (4, 0) is exactly 4 degrees."""
        err = angular_error(
            angles_to_vector(GazeAngles(0.0, 0.0)),
            angles_to_vector(GazeAngles(4.0, 0.0)),
        )
        assert err == pytest.approx(4.0, abs=1e-9)

    def test_symmetric_and_triangle(self):
        """Test symmetry and the triangle inequality on random triples."""
        rng = np.random.default_rng(2)
        a, b, c = (rng.uniform(-30, 30, (200, 2)) for _ in range(3))
        ab, ba = angular_errors(a, b), angular_errors(b, a)
        np.testing.assert_allclose(ab, ba, atol=1e-9)
        assert np.all(angular_errors(a, c) <= ab + angular_errors(b, c) + 1e-9)


class TestClamp:
    """Test cases for interval clamping."""

    def test_inside_unchanged(self):
        """Test an in-interval gaze is unchanged."""
        assert clamp_to_interval(GazeAngles(0, 0), GazeInterval()) == GazeAngles(0, 0)

    def test_upper_pitch(self):
        """Test pitch 20 clamps to 14."""
        assert clamp_to_interval(GazeAngles(20, 0), GazeInterval()) == GazeAngles(14, 0)

    def test_lower_corner(self):
        """Test (-40, -40) clamps to (-30, -26)."""
        out = clamp_to_interval(GazeAngles(-40, -40), GazeInterval())
        assert out == GazeAngles(-30, -26)

    def test_idempotent(self):
        """Test clamping twice equals clamping once."""
        rng = np.random.default_rng(3)
        a = rng.uniform(-60, 60, (100, 2))
        once = clamp_angles(a, GazeInterval())
        np.testing.assert_array_equal(clamp_angles(once, GazeInterval()), once)

    def test_invalid_interval(self):
        """Test min >= max is rejected."""
        with pytest.raises(ValidationError):
            GazeInterval(pitch_min=10, pitch_max=10)
        with pytest.raises(ValidationError):
            GazeInterval(unknown=1)

    def test_contains(self):
        """Test boundary points are contained."""
        interval = GazeInterval()
        assert interval.contains(GazeAngles(14.0, 26.0))
        assert not interval.contains(GazeAngles(14.5, 0.0))


class TestProjection:
    """Test cases for screen projection."""

    def test_zero_gaze_hits_origin(self):
        """Test zero gaze with zero offset lands at (0, 0)."""
        x, y = project_to_screen(GazeAngles(0, 0), ScreenGeometry())
        assert (x, y) == pytest.approx((0.0, 0.0), abs=1e-12)

    def test_yaw_only(self):
        """Test x = -d tan(yaw) for pure yaw."""
        geom = ScreenGeometry(eye_distance_mm=400.0)
        x, y = project_to_screen(GazeAngles(0.0, 10.0), geom)
        assert x == pytest.approx(-400.0 * np.tan(np.deg2rad(10.0)))
        assert y == pytest.approx(0.0, abs=1e-12)

    def test_offset_applied(self):
        """Test the camera offset shifts the result."""
        geom = ScreenGeometry(origin_offset_mm=(120.0, -5.0))
        assert project_to_screen(GazeAngles(0, 0), geom) == pytest.approx((120.0, -5.0))

    def test_parallel_ray(self):
        """Test pitch -90 never reaches the screen."""
        with pytest.raises(DegenerateGeometryError):
            project_to_screen(GazeAngles(-90.0, 0.0), ScreenGeometry())

    def test_slope_matches_derivative(self):
        """Test the finite-difference slope matches d sec^2(yaw)."""
        geom = ScreenGeometry(eye_distance_mm=500.0)
        yaw, h = 12.0, 1e-4
        pts = project_many([(0.0, yaw - h), (0.0, yaw + h)], geom)
        numeric = (pts[1, 0] - pts[0, 0]) / (2 * h)
        analytic = -500.0 / np.cos(np.deg2rad(yaw)) ** 2 * np.pi / 180.0
        assert numeric == pytest.approx(analytic, rel=1e-6)

    def test_mm_to_px(self):
        """Test mm to pixel conversion uses the pixel pitch."""
        geom = ScreenGeometry(pixel_pitch_mm=0.25)
        np.testing.assert_allclose(geom.mm_to_px([10.0, 5.0]), [40.0, 20.0])
