"""
Augmentation protocol and parameter ranges.

The protocol holds one application probability per stochastic method;
the range models bound the parameters drawn once a method is applied.
"""

from typing import Dict, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

# Bernoulli draws happen in this order for every view.
METHODS = (
    "color_jitter",
    "background",
    "illumination",
    "sensor_noise",
    "glasses",
    "mask",
    "blur",
    "desaturation",
)


class _Frozen(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


def _ordered(bounds: Tuple[float, float], name: str) -> None:
    if bounds[0] > bounds[1]:
        raise ValueError(f"{name} range is reversed: {bounds}")


class AugmentProtocol(_Frozen):
    """Per-method application probabilities and views per sample."""

    color_jitter: float = Field(default=1.0, ge=0.0, le=1.0)
    background: float = Field(default=0.95, ge=0.0, le=1.0)
    illumination: float = Field(default=0.5, ge=0.0, le=1.0)
    sensor_noise: float = Field(default=0.5, ge=0.0, le=1.0)
    glasses: float = Field(default=0.5, ge=0.0, le=1.0)
    mask: float = Field(default=0.5, ge=0.0, le=1.0)
    blur: float = Field(default=0.25, ge=0.0, le=1.0)
    desaturation: float = Field(default=0.1, ge=0.0, le=1.0)
    views_per_sample: int = Field(default=4, ge=1)

    def probabilities(self) -> Dict[str, float]:
        return {m: getattr(self, m) for m in METHODS}

    @classmethod
    def disabled(cls, views_per_sample: int = 4) -> "AugmentProtocol":
        """Every stochastic method off; only the forced flips remain."""
        return cls(views_per_sample=views_per_sample, **{m: 0.0 for m in METHODS})


class JitterRange(_Frozen):
    gain: Tuple[float, float] = (0.8, 1.2)
    offset: float = Field(default=0.1, ge=0.0)

    @model_validator(mode="after")
    def validate_gain(self) -> "JitterRange":
        _ordered(self.gain, "gain")
        return self


class NoiseParams(_Frozen):
    """Strengths on the 0-255 scale; the blotch size is a blur sigma in pixels."""

    alpha_y: float = Field(default=11.0, ge=0.0)
    alpha_c: float = Field(default=15.0, ge=0.0)
    blotch: float = Field(default=2.0, ge=0.0)


class IlluminationRange(_Frozen):
    opacity: Tuple[float, float] = (0.2, 0.7)
    tint_floor: float = Field(default=0.5, ge=0.0, le=1.0, description="Lowest tint channel value")

    @model_validator(mode="after")
    def validate_opacity(self) -> "IlluminationRange":
        _ordered(self.opacity, "opacity")
        if not (0.0 <= self.opacity[0] and self.opacity[1] <= 1.0):
            raise ValueError("opacity must lie in [0, 1]")
        return self


class BlurRange(_Frozen):
    sigma: Tuple[float, float] = (0.5, 2.0)

    @model_validator(mode="after")
    def validate_sigma(self) -> "BlurRange":
        _ordered(self.sigma, "sigma")
        if self.sigma[0] < 0:
            raise ValueError("sigma must be non-negative")
        return self


class DesaturationRange(_Frozen):
    amount: Tuple[float, float] = (0.5, 1.0)

    @model_validator(mode="after")
    def validate_amount(self) -> "DesaturationRange":
        _ordered(self.amount, "amount")
        return self


class GlassesRange(_Frozen):
    scale: Tuple[float, float] = (0.9, 1.1)
    opacity: Tuple[float, float] = (0.6, 1.0)
    frame_tint: Tuple[float, float] = (0.0, 1.0)
    reflection_opacity: Tuple[float, float] = (0.0, 0.35)

    @model_validator(mode="after")
    def validate_ranges(self) -> "GlassesRange":
        for name in ("scale", "opacity", "frame_tint", "reflection_opacity"):
            _ordered(getattr(self, name), name)
        if self.scale[0] <= 0:
            raise ValueError("scale must be positive")
        return self


class MaskFillParams(_Frozen):
    solid_probability: float = Field(default=0.5, ge=0.0, le=1.0)
    smooth: bool = True


class AssetPaths(_Frozen):
    """Directories holding synthesis assets; any may be omitted."""

    glasses_templates: Optional[str] = None
    backgrounds: Optional[str] = None
    reflections: Optional[str] = None
    mask_textures: Optional[str] = None


class AugmentSettings(_Frozen):
    """Everything the view builder needs besides the sample and the seed."""

    protocol: AugmentProtocol = Field(default_factory=AugmentProtocol)
    jitter: JitterRange = Field(default_factory=JitterRange)
    noise: NoiseParams = Field(default_factory=NoiseParams)
    illumination: IlluminationRange = Field(default_factory=IlluminationRange)
    blur: BlurRange = Field(default_factory=BlurRange)
    desaturation: DesaturationRange = Field(default_factory=DesaturationRange)
    glasses: GlassesRange = Field(default_factory=GlassesRange)
    mask_fill: MaskFillParams = Field(default_factory=MaskFillParams)
    assets: AssetPaths = Field(default_factory=AssetPaths)
