from functools import lru_cache
from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict


class ApplicationSettings(BaseSettings):
    """Application configuration settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="EXPSUM_",
        env_file=(".env", "src/.env"),
        env_file_encoding="utf-8",
        extra="ignore",
        case_sensitive=False,
    )

    environment: str = "local"

    cache_dir: Path = Path("census")

    enum_cap: int = 1 << 24
    oracle_full_cap: int = 200_000
    det_enum_cap: int = 1 << 16

    precision_digits: int = 10
    precision_slack: int = 1
    fredholm_max_basis: int = 64

    max_workers: int = 1

    log_level: str = "WARNING"
    log_format: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    def default_precision(self, p: int) -> int:
        """Default precision in pi-digits for the prime p."""
        return self.precision_digits * (p - 1)


_settings_instance: ApplicationSettings | None = None


@lru_cache()
def get_settings() -> ApplicationSettings:
    """Get cached application settings instance."""
    global _settings_instance
    if _settings_instance is None:
        _settings_instance = ApplicationSettings()
    return _settings_instance
