"""
Configuration management for the realization toolkit.
Loads settings from environment variables (and an optional .env file).
"""
import os
from functools import lru_cache

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment."""

    # Pydantic v2 configuration
    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore"
    )

    # Worker pool (0 = one worker per CPU)
    realize_threads: int = 0

    # Numerical tolerances
    realness_tol: float = 1e-8
    dedup_tol: float = 1e-6
    infinite_tol: float = 1e-10
    projection_cond_max: float = 1e12
    rank_rel_tol: float = 1e-12
    fonc_tol: float = 1e-6
    conjugate_tol: float = 1e-10

    # Block Macaulay solver
    macaulay_rank_tol: float = 1e-10
    macaulay_gap_ratio: float = 1e3
    macaulay_max_degree: int = 30

    # Candidate refinement
    polish_candidates: bool = True

    # OpenTelemetry
    otel_enabled: bool = False
    otel_exporter_endpoint: str = "http://localhost:4317"
    otel_service_name: str = "fpgor"

    # Application
    debug: bool = False

    @property
    def worker_count(self) -> int:
        """Resolve the worker cap; 0 means one worker per CPU."""
        if self.realize_threads > 0:
            return self.realize_threads
        return os.cpu_count() or 1


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Global settings instance
settings = get_settings()
