"""
Gaze to screen projection.

The screen is the plane z = 0 of the camera frame (camera in the screen
plane, optical axis along the screen normal). The eye sits on the optical
axis at ``eye_distance_mm``. Screen coordinates are millimetres with x to
the right and y down, measured from the screen origin.
"""

from typing import Tuple

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict, Field

from geometry.gaze import GazeAngles, pitchyaw_to_vectors
from utils.exceptions import DegenerateGeometryError

PARALLEL_EPS = 1e-9


class ScreenGeometry(BaseModel):
    """Fixed-distance viewing geometry for a tablet-on-stand setup."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    origin_offset_mm: Tuple[float, float] = Field(
        default=(0.0, 0.0), description="Camera position in screen coordinates"
    )
    eye_distance_mm: float = Field(default=500.0, gt=0, description="Eye to screen")
    pixel_pitch_mm: float = Field(default=0.1, gt=0, description="mm per pixel")
    screen_size_mm: Tuple[float, float] = Field(
        default=(250.0, 170.0), description="Screen width and height"
    )

    def mm_to_px(self, points_mm: npt.ArrayLike) -> npt.NDArray[np.float64]:
        return np.asarray(points_mm, dtype=np.float64) / self.pixel_pitch_mm

    @property
    def center_mm(self) -> Tuple[float, float]:
        return (self.screen_size_mm[0] / 2.0, self.screen_size_mm[1] / 2.0)


def project_many(
    angles: npt.ArrayLike, geom: ScreenGeometry
) -> npt.NDArray[np.float64]:
    """Project (n, 2) pitch/yaw degrees to (n, 2) screen millimetres."""
    g = pitchyaw_to_vectors(angles)
    gz = g[:, 2]
    bad = gz > -PARALLEL_EPS
    if np.any(bad):
        raise DegenerateGeometryError(
            f"{int(bad.sum())} gaze ray(s) do not reach the screen plane",
            geometry={"rows": np.flatnonzero(bad).tolist()},
        )
    t = -geom.eye_distance_mm / gz
    offset = np.asarray(geom.origin_offset_mm, dtype=np.float64)
    return np.column_stack([t * g[:, 0], t * g[:, 1]]) + offset


def project_to_screen(a: GazeAngles, geom: ScreenGeometry) -> Tuple[float, float]:
    """Intersect the gaze ray with the screen plane."""
    x, y = project_many([a.as_tuple()], geom)[0]
    return (float(x), float(y))
