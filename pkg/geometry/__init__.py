"""
Gaze geometry: angle/vector conversion, angular error, interval clamping
and screen projection.
"""

from .gaze import (
    GazeAngles,
    GazeInterval,
    GazeVector,
    angles_to_vector,
    angular_error,
    angular_errors,
    clamp_angles,
    clamp_to_interval,
    pitchyaw_to_vectors,
    vector_to_angles,
    vectors_to_pitchyaw,
)
from .screen import ScreenGeometry, project_many, project_to_screen

__all__ = [
    "GazeAngles",
    "GazeInterval",
    "GazeVector",
    "ScreenGeometry",
    "angles_to_vector",
    "angular_error",
    "angular_errors",
    "clamp_angles",
    "clamp_to_interval",
    "pitchyaw_to_vectors",
    "project_many",
    "project_to_screen",
    "vector_to_angles",
    "vectors_to_pitchyaw",
]
