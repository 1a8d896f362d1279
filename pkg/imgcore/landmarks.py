"""
Canonical face-mesh landmark ID lists.

IDs follow the 478-point face mesh. "Right" and "left" are the subject's
sides, so right-eye points appear on the image's left half of a frontal
face. Every list is editable through the run configuration.
"""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

RIGHT_INNER_EYE = [33, 246, 161, 160, 159, 158, 157, 173, 133, 155, 154, 153, 145, 144, 163, 7]
LEFT_INNER_EYE = [263, 466, 388, 387, 386, 385, 384, 398, 362, 382, 381, 380, 374, 373, 390, 249]

RIGHT_EYE_REGION = [130, 247, 30, 29, 27, 28, 56, 190, 243, 112, 26, 22, 23, 24, 110, 25]
LEFT_EYE_REGION = [359, 467, 260, 259, 257, 258, 286, 414, 463, 341, 256, 252, 253, 254, 339, 255]

# above and below each eye, never on the eyelid contour
GLASSES_ANCHORS = [223, 230, 443, 450]

MASK_POLYGON = [234, 116, 6, 345, 454, 361, 397, 378, 152, 149, 172, 132]

EXTRA_MIRROR_PAIRS = [
    (234, 454),
    (116, 345),
    (132, 361),
    (172, 397),
    (149, 378),
    (223, 443),
    (230, 450),
]


class LandmarkConfig(BaseModel):
    """Landmark ID lists used by synthesis, annotation and flipping."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    right_inner_eye: List[int] = Field(default_factory=lambda: list(RIGHT_INNER_EYE))
    left_inner_eye: List[int] = Field(default_factory=lambda: list(LEFT_INNER_EYE))
    right_eye_region: List[int] = Field(default_factory=lambda: list(RIGHT_EYE_REGION))
    left_eye_region: List[int] = Field(default_factory=lambda: list(LEFT_EYE_REGION))
    glasses_anchors: List[int] = Field(default_factory=lambda: list(GLASSES_ANCHORS))
    mask_polygon: List[int] = Field(default_factory=lambda: list(MASK_POLYGON))
    extra_mirror_pairs: List[Tuple[int, int]] = Field(
        default_factory=lambda: list(EXTRA_MIRROR_PAIRS)
    )

    @model_validator(mode="after")
    def validate_lists(self) -> "LandmarkConfig":
        if len(self.right_inner_eye) != len(self.left_inner_eye):
            raise ValueError("inner eye lists must have equal length")
        if len(self.right_eye_region) != len(self.left_eye_region):
            raise ValueError("eye region lists must have equal length")
        if len(self.glasses_anchors) < 2:
            raise ValueError("glasses fitting needs at least 2 anchors")
        if len(self.mask_polygon) < 3:
            raise ValueError("mask polygon needs at least 3 landmarks")
        return self

    def inner_eye(self, side: str) -> List[int]:
        return self.right_inner_eye if side == "right" else self.left_inner_eye

    def eye_region(self, side: str) -> List[int]:
        return self.right_eye_region if side == "right" else self.left_eye_region

    @property
    def mirror_pairs(self) -> List[Tuple[int, int]]:
        """Left/right ID pairs swapped by a horizontal flip."""
        pairs = list(zip(self.right_inner_eye, self.left_inner_eye))
        pairs += list(zip(self.right_eye_region, self.left_eye_region))
        pairs += [tuple(p) for p in self.extra_mirror_pairs]
        return pairs
