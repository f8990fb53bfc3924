"""Process settings loaded from environment variables and a .env file."""

from pathlib import Path

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings. All values can be overridden via environment
    variables prefixed with ``GENFUNC_`` or via a ``.env`` file.

    Numerical parameters live in :class:`genfunc.models.run_config.RunConfig`,
    which is echoed into every report; these settings only shape how a run
    executes, never what it computes.
    """

    model_config = SettingsConfigDict(env_file=".env", env_prefix="GENFUNC_")

    # --- Execution ---
    jobs: int = Field(default=1, ge=1)
    log_level: str = "INFO"

    # --- Storage paths ---
    output_dir: Path = Field(default=Path("runs"))
    config_file: Path | None = None
