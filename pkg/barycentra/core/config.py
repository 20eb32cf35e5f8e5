"""Library configuration using Pydantic Settings."""
from fractions import Fraction

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from BARYCENTRA_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="BARYCENTRA_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Sampling
    seed: int = Field(default=7, description="Default seed for every seeded sampler")
    sample_size: int = Field(default=1000, gt=0, description="Default n of the sampled strategy")
    weight_max_denominator: int = Field(
        default=1000, ge=2, description="Largest denominator of freshly drawn weights"
    )
    default_weights: list[str] = Field(
        default=["1/2", "1/3", "2/3", "1/5", "4/5"],
        description="Fixed weight sample every law check starts from",
    )
    witness_pool_size: int = Field(
        default=40, gt=1, description="Element pool size for cancellation-witness search"
    )

    # Replicas
    replica_samples: int = Field(default=200, gt=0, description="Homomorphism re-validation samples")
    replica_representatives: int = Field(
        default=3, gt=0, description="Representatives drawn per class pair"
    )

    # Desk-scale bounds
    max_space_size: int = Field(default=10_000, gt=0, description="Largest p^n enumerated")
    exhaustive_wall_limit: int = Field(
        default=12, ge=0, description="Fiber size up to which walls are searched exhaustively"
    )
    parallelogram_samples: int = Field(
        default=200, gt=0, description="Sampled validation of the lifted parallelogram"
    )
    max_assignments: int = Field(
        default=20_000_000, gt=0, description="Guard for exhaustive identity checks"
    )

    # Logging
    log_level: str = Field(default="WARNING", description="Logging level")

    def weight_sample(self) -> list[Fraction]:
        """Parse the fixed weight sample."""
        return [Fraction(w) for w in self.default_weights]


# Global settings instance
settings = Settings()
