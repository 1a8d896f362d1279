"""
Unit tests for the discretized label grid.
"""

import numpy as np
import pytest

from geometry import GazeAngles, GazeInterval
from gridcodec import (
    Axis,
    GridSpec,
    centroid,
    decode_expectation,
    discretize,
    sharpened_softmax,
)
from utils.exceptions import DataValidationError

pytestmark = pytest.mark.unit


@pytest.fixture
def grid():
    return GridSpec()


class TestGridSpec:
    """Test cases for grid arithmetic."""

    def test_default_grid_has_143_bins(self, grid):
        """Test the default interval and 4 degree bins give 11 x 13 bins."""
        assert grid.n_pitch == 11
        assert grid.n_yaw == 13
        assert grid.n_bins == 143
        assert grid.s_pitch == pytest.approx(4.0)
        assert grid.s_yaw == pytest.approx(4.0)

    def test_lower_boundary(self, grid):
        """Test the lower interval corner lands in bin (0, 0)."""
        assert discretize(GazeAngles(-30.0, -26.0), grid) == (0, 0)

    def test_interior(self, grid):
        """Test (13.9, 25.9) lands in (10, 12)."""
        assert discretize(GazeAngles(13.9, 25.9), grid) == (10, 12)

    def test_upper_boundary_folds(self, grid):
        """Test the upper corner folds into the last bin."""
        assert discretize(GazeAngles(14.0, 26.0), grid) == (10, 12)

    def test_out_of_interval_rejected(self, grid):
        """Test labels outside the interval raise."""
        with pytest.raises(DataValidationError):
            discretize(GazeAngles(20.0, 0.0), grid)

    def test_centroids(self, grid):
        """Test centroid formula on both axes."""
        assert centroid(0, Axis.PITCH, grid) == pytest.approx(-28.0)
        assert centroid(10, "pitch", grid) == pytest.approx(12.0)
        assert centroid(6, Axis.YAW, grid) == pytest.approx(0.0)
        with pytest.raises(IndexError):
            centroid(11, Axis.PITCH, grid)

    def test_centroid_within_half_bin(self, grid):
        """Test every label is within half a bin of its centroid."""
        rng = np.random.default_rng(0)
        a = np.column_stack([rng.uniform(-30, 14, 2000), rng.uniform(-26, 26, 2000)])
        bins = grid.discretize_many(a)
        cp = grid.centroids(Axis.PITCH)[bins[:, 0]]
        cy = grid.centroids(Axis.YAW)[bins[:, 1]]
        assert np.all(np.abs(cp - a[:, 0]) <= grid.s_pitch / 2 + 1e-12)
        assert np.all(np.abs(cy - a[:, 1]) <= grid.s_yaw / 2 + 1e-12)

    def test_joint_index_roundtrip(self, grid):
        """Test flattening of (c_pitch, c_yaw)."""
        assert grid.bin_index(0, 0) == 0
        assert grid.bin_index(10, 12) == 142
        assert grid.bin_of_index(grid.bin_index(3, 7)) == (3, 7)

    def test_custom_interval(self):
        """Test bin counts follow interval width."""
        g = GridSpec(
            interval=GazeInterval(pitch_min=0, pitch_max=8, yaw_min=0, yaw_max=4),
            bin_size_pitch=2.0,
        )
        assert (g.n_pitch, g.n_yaw) == (4, 1)


class TestDecoding:
    """Test cases for expectation decoding."""

    def test_one_hot(self, grid):
        """Test a one-hot vector decodes to its centroid."""
        for k in range(grid.n_pitch):
            assert decode_expectation(
                grid.one_hot(k, Axis.PITCH), Axis.PITCH, grid
            ) == pytest.approx(grid.centroid(k, Axis.PITCH))

    def test_uniform_is_midpoint(self, grid):
        """Test uniform pitch probabilities decode to -8 degrees."""
        p = np.full(11, 1 / 11)
        assert decode_expectation(p, Axis.PITCH, grid) == pytest.approx(-8.0)

    def test_two_bin_mix(self, grid):
        """Test (0.5, 0.5, 0, ...) decodes to -26 degrees."""
        p = np.zeros(11)
        p[:2] = 0.5
        assert decode_expectation(p, Axis.PITCH, grid) == pytest.approx(-26.0)

    def test_unnormalized_rejected(self, grid):
        """Test probabilities off by more than 1e-4 are rejected."""
        with pytest.raises(DataValidationError):
            decode_expectation(np.full(11, 0.1), Axis.PITCH, grid)

    def test_batch_decoding(self, grid):
        """Test an (m, n) batch decodes row-wise."""
        p = np.stack([grid.one_hot(0, "yaw"), grid.one_hot(12, "yaw")])
        np.testing.assert_allclose(decode_expectation(p, "yaw", grid), [-24.0, 24.0])


class TestSharpenedSoftmax:
    """Test cases for the temperature softmax."""

    def test_equal_logits_uniform(self):
        """Test equal logits give a uniform distribution."""
        np.testing.assert_allclose(sharpened_softmax(np.ones(5)), 0.2)

    def test_temperature_identity(self):
        """Test softmax(l, 0.5) equals softmax(2l, 1)."""
        logits = np.random.default_rng(1).normal(size=9)
        np.testing.assert_allclose(
            sharpened_softmax(logits, 0.5), sharpened_softmax(2 * logits, 1.0)
        )

    def test_closed_form(self):
        """Test logits (0, ln 3) give (0.25, 0.75) at tau 1."""
        np.testing.assert_allclose(
            sharpened_softmax([0.0, np.log(3.0)], 1.0), [0.25, 0.75]
        )

    def test_normalized_and_monotone(self):
        """Test rows sum to one and order follows logits."""
        logits = np.random.default_rng(2).normal(size=(20, 13))
        p = sharpened_softmax(logits)
        assert np.all(np.isfinite(sharpened_softmax(logits * 1e4)))
        np.testing.assert_allclose(p.sum(axis=1), 1.0, atol=1e-9)
        assert np.array_equal(np.argsort(p, axis=1), np.argsort(logits, axis=1))

    def test_non_positive_tau(self):
        """Test tau <= 0 raises."""
        with pytest.raises(ValueError):
            sharpened_softmax([1.0, 2.0], 0.0)
