"""
Loss term weights.
"""

from pydantic import BaseModel, ConfigDict, Field


class LossWeights(BaseModel):
    """Weights of the composite objective and the contrastive temperature.

    Defaults are the convolutional-backbone settings; ``vit()`` halves the
    pitch contrastive weight.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    lambda_clf: float = Field(default=0.1, ge=0)
    lambda_seg: float = Field(default=0.05, ge=0)
    lambda_D: float = Field(default=0.0025, ge=0)
    lambda_phi: float = Field(default=0.005, ge=0)
    lambda_g: float = Field(default=0.0025, ge=0)
    lambda_m: float = Field(default=0.0025, ge=0)
    tau_s: float = Field(default=0.07, gt=0, description="Contrastive temperature")

    @classmethod
    def vit(cls) -> "LossWeights":
        return cls(lambda_phi=0.0025)
