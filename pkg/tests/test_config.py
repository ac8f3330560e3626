"""Tests for qbforge.config."""

import os
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from qbforge.config import DEFAULT_BUDGET, ForgeSettings, clear_config_cache, get_config, set_config


class TestForgeSettings:
    def test_default_values(self):
        settings = ForgeSettings()
        assert settings.budget == DEFAULT_BUDGET == 2**24
        assert settings.enumeration_limit == 20
        assert settings.candidate_window == 8
        assert settings.generator_attempts == 2000
        assert settings.output_format == "text"
        assert settings.log_level == "WARNING"
        assert settings.log_format == ""
        assert settings.log_file is None

    def test_env_vars(self):
        env = {
            "QBFORGE_BUDGET": "1000",
            "QBFORGE_ENUMERATION_LIMIT": "4",
            "QBFORGE_CANDIDATE_WINDOW": "2",
            "QBFORGE_GENERATOR_ATTEMPTS": "10",
            "QBFORGE_OUTPUT_FORMAT": "json",
            "QBFORGE_LOG_LEVEL": "DEBUG",
        }
        with patch.dict(os.environ, env, clear=False):
            settings = ForgeSettings()
            assert settings.budget == 1000
            assert settings.enumeration_limit == 4
            assert settings.candidate_window == 2
            assert settings.generator_attempts == 10
            assert settings.output_format == "json"
            assert settings.log_level == "DEBUG"

    def test_budget_limits(self):
        settings = ForgeSettings(budget=50)
        assert settings.budget_limits == {"max_evaluations": 50, "enumeration_limit": 20, "candidate_window": 8}

    def test_logging_config(self):
        settings = ForgeSettings(log_level="debug", log_format="JSON", log_file="/tmp/q.log")
        assert settings.logging_config == {"level": "DEBUG", "format": "json", "file": "/tmp/q.log"}

    def test_logging_config_defaults_to_text(self):
        assert ForgeSettings().logging_config["format"] == "text"

    def test_log_level_normalized(self):
        assert ForgeSettings(log_level=" info ").log_level == "INFO"

    def test_unknown_log_level(self):
        with pytest.raises(ValidationError, match="unknown log level 'FOO'"):
            ForgeSettings(log_level="FOO")


class TestGlobalConfig:
    def test_get_config_returns_singleton(self):
        config1 = get_config()
        config2 = get_config()
        assert config1 is config2

    def test_clear_config_cache(self):
        config1 = get_config()
        clear_config_cache()
        config2 = get_config()
        assert config1 is not config2

    def test_set_config(self):
        custom = ForgeSettings(budget=123)
        set_config(custom)
        assert get_config() is custom
        assert get_config().budget == 123
