"""Process-level settings for the PQCNN simulator."""

from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings with environment variable support (prefix ``PQCNN_``)."""

    model_config = SettingsConfigDict(
        env_prefix="PQCNN_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Logging
    log_level: str = Field(default="INFO")
    log_format: str = Field(
        default="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}"
    )
    log_file: Optional[str] = Field(default=None)

    # Simulation
    max_basis_states: int = Field(default=1_000_000, gt=0)
    lift_row_chunk: int = Field(default=512, gt=0)
    num_threads: Optional[int] = Field(default=None, gt=0)

    # Runs
    seed_workers: int = Field(default=1, gt=0)
    runs_dir: str = Field(default="runs")

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v):
        if v:
            valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
            if v.upper() not in valid_levels:
                raise ValueError(f"Invalid log level. Must be one of {valid_levels}")
            return v.upper()
        return "INFO"


# Create settings instance with error handling
try:
    settings = Settings()
except Exception as e:
    print(f"Warning: Error loading settings: {e}")
    print("Using default settings. Check the PQCNN_* environment variables and .env file.")
    settings = Settings(_env_file=None)
