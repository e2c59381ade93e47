"""
Tropical Corals - Configuration
"""

from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # API Settings
    app_name: str = "Tropical Corals"
    api_host: str = "0.0.0.0"
    api_port: int = 8000
    api_env: str = "development"

    # CORS
    cors_origins: List[str] = [
        "http://localhost:5173",
        "http://localhost:3000",
    ]

    # Logging
    log_level: str = "INFO"
    log_format: str = "json"

    # Constraint sampling
    default_seed: int = 0
    sampling_attempts: int = 64
    sampling_value_bound: int = 97  # numerators are drawn from [1, bound]
    sampling_denominator: int = 7

    # Enumeration
    max_enumeration_ends: int = 7  # l + m, beyond this the tree count explodes

    # Stable intersection perturbations (vertical slope of the shift vector)
    perturbation_primary: str = "2/7919"
    perturbation_secondary: str = "3/7907"

    # Plotting
    plot_viewport: str = "-6,0,6,8"  # xmin,hmin,xmax,hmax
    plot_scale: float = 40.0

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        env_prefix = "CORALS_"
        case_sensitive = False

    @property
    def perturbations(self) -> Tuple[Fraction, Fraction]:
        return Fraction(self.perturbation_primary), Fraction(self.perturbation_secondary)


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
