"""
Discretized gaze label grid: binning, centroid decoding and sharpened
softmax.
"""

from .codec import centroid, decode_expectation, discretize, sharpened_softmax
from .grid import Axis, GridSpec

__all__ = [
    "Axis",
    "GridSpec",
    "centroid",
    "decode_expectation",
    "discretize",
    "sharpened_softmax",
]
