# ---
# File: ctgc/settings.py
# Purpose: Process-level settings read from the environment (CTGC_* variables)
#          or an optional .env file.
# ---

from functools import lru_cache
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="CTGC_", env_file=".env", extra="ignore")

    # CTGC_THREADS caps BLAS / OpenMP parallelism for the whole process
    threads: Optional[int] = Field(default=None, ge=1)
    log_level: str = "INFO"


@lru_cache
def get_settings() -> Settings:
    return Settings()
