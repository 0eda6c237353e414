"""
Configuration management for lurecert
"""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Environment variables are read as SECTOR_CERTIFY_<FIELD>
ENV_PREFIX = "SECTOR_CERTIFY_"


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables"""

    model_config = SettingsConfigDict(
        env_prefix=ENV_PREFIX, env_file=".env", case_sensitive=False, extra="ignore"
    )

    # Concurrency
    threads: int = Field(
        default=1,
        ge=1,
        description="Maximum worker threads for sweeps (SECTOR_CERTIFY_THREADS)",
    )

    # Certification defaults
    default_horizon: int = Field(default=64, ge=0)
    default_grid: int = Field(default=1024, ge=8)
    eig_rtol: float = Field(
        default=1e-9,
        gt=0.0,
        description="Eigenvalue feasibility tolerance, scaled by 1 + ||Q||",
    )
    tau_min: float = Field(default=1e-8, gt=0.0)
    tau_max: float = Field(default=1e8, gt=0.0)
    max_bisection_steps: int = Field(default=200, ge=1)

    # Random suites
    seed: int = Field(default=0)

    # Logging Configuration
    log_level: str = Field(
        default="INFO",
        description="Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )
    log_file: Optional[str] = Field(
        default=None,
        description="Path to log file (optional)",
    )
    enable_console_logs: bool = Field(default=True)
    enable_file_logging: bool = Field(
        default=False,
        description="Write a dated log file under logs/",
    )


# Global settings instance
settings = Settings()
