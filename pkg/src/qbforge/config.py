"""Settings for qbforge: oracle budgets, generator limits, CLI output and logging.

Values come from QBFORGE_* environment variables (or a .env file); every
module reads them through ``get_config()``.

Usage:
    from qbforge import get_config
    config = get_config()

    # Access settings
    budget = config.budget
    log_level = config.log_level
"""

from __future__ import annotations

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

DEFAULT_BUDGET = 2**24
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ForgeSettings(BaseSettings):
    """qbforge settings.

    Settings can be configured via environment variables with the
    QBFORGE_ prefix.
    """

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
        populate_by_name=True,
    )

    # ==========================================================================
    # ORACLE SETTINGS
    # ==========================================================================

    budget: int = Field(
        default=DEFAULT_BUDGET,
        description="Maximum number of search evaluations per oracle call",
        validation_alias="QBFORGE_BUDGET",
    )
    enumeration_limit: int = Field(
        default=20,
        description="Largest universal count decided by plain enumeration",
        validation_alias="QBFORGE_ENUMERATION_LIMIT",
    )
    candidate_window: int = Field(
        default=8,
        description="Refuting universal assignments a refinement candidate should also survive",
        validation_alias="QBFORGE_CANDIDATE_WINDOW",
    )

    # ==========================================================================
    # GENERATOR / CLI SETTINGS
    # ==========================================================================

    generator_attempts: int = Field(
        default=2000,
        description="Sampling attempts before the generator gives up",
        validation_alias="QBFORGE_GENERATOR_ATTEMPTS",
    )
    output_format: str = Field(
        default="text",
        description="Default CLI report format: 'text' or 'json'",
        validation_alias="QBFORGE_OUTPUT_FORMAT",
    )

    # ==========================================================================
    # LOGGING SETTINGS
    # ==========================================================================

    log_level: str = Field(
        default="WARNING",
        description="Log level (DEBUG, INFO, WARNING, ERROR)",
        validation_alias="QBFORGE_LOG_LEVEL",
    )
    log_format: str = Field(
        default="",
        description="Log format: 'json' or 'text' (empty means text)",
        validation_alias="QBFORGE_LOG_FORMAT",
    )
    log_file: str | None = Field(
        default=None,
        description="Log file path (optional)",
        validation_alias="QBFORGE_LOG_FILE",
    )

    @field_validator("log_level")
    @classmethod
    def _known_log_level(cls, value: str) -> str:
        level = value.strip().upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"unknown log level {value!r}, expected one of {', '.join(LOG_LEVELS)}")
        return level

    # ==========================================================================
    # COMPUTED PROPERTIES
    # ==========================================================================

    @property
    def budget_limits(self) -> dict[str, int]:
        """Get the oracle limits dict."""
        return {
            "max_evaluations": self.budget,
            "enumeration_limit": self.enumeration_limit,
            "candidate_window": self.candidate_window,
        }

    @property
    def logging_config(self) -> dict[str, str | None]:
        """Get logging configuration for the CLI."""
        return {
            "level": self.log_level.upper(),
            "format": self.log_format.lower() or "text",
            "file": self.log_file,
        }


# ==========================================================================
# GLOBAL CONFIG INSTANCE (lazy loaded)
# ==========================================================================

_config: ForgeSettings | None = None


def get_config() -> ForgeSettings:
    """Get the global configuration instance.

    Returns:
        The singleton ForgeSettings instance.
    """
    global _config
    if _config is None:
        _config = ForgeSettings()
    return _config


def set_config(config: ForgeSettings) -> None:
    """Set the global configuration instance.

    Useful for testing or custom configuration.

    Args:
        config: The ForgeSettings instance to use.
    """
    global _config
    _config = config


def clear_config_cache() -> None:
    """Clear the config cache. Useful for testing."""
    global _config
    _config = None
