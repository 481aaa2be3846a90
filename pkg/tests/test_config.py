"""
Tests for runtime settings and logging setup.
"""

import io
import json
import logging
from pathlib import Path

import pytest

from steiner_ocycles.config import DEFAULT_AF_BUDGET, DEFAULT_DATA_DIR, get_settings
from steiner_ocycles.errors import ConfigurationError
from steiner_ocycles.utils.log import PACKAGE_LOGGER, configure_logging


class TestSettings:
    """Test suite for get_settings."""

    def test_defaults(self):
        """Test values with no environment set."""
        settings = get_settings()
        assert settings.data_dir == DEFAULT_DATA_DIR
        assert settings.af_budget == DEFAULT_AF_BUDGET
        assert settings.exhaustive_limit == 9
        assert settings.log_format == "text"

    def test_environment(self, monkeypatch, tmp_path):
        """Test OCYCLE_* variables are read and coerced."""
        monkeypatch.setenv("OCYCLE_DATA_DIR", str(tmp_path))
        monkeypatch.setenv("OCYCLE_AF_BUDGET", "1000")
        monkeypatch.setenv("OCYCLE_LOG_FORMAT", "json")
        settings = get_settings()
        assert settings.data_dir == Path(tmp_path)
        assert settings.af_budget == 1000
        assert settings.log_format == "json"

    def test_overrides_win(self, monkeypatch):
        """Test explicit values beat the environment and None is ignored."""
        monkeypatch.setenv("OCYCLE_LOG_LEVEL", "DEBUG")
        settings = get_settings(log_level="ERROR", af_budget=None)
        assert settings.log_level == "ERROR"
        assert settings.af_budget == DEFAULT_AF_BUDGET

    def test_log_level_is_case_insensitive(self):
        """Test a lower-case level name is accepted and normalised."""
        assert get_settings(log_level="debug").log_level == "DEBUG"

    def test_unknown_log_level_override(self):
        """Test an unknown level passed as an override is rejected."""
        with pytest.raises(ConfigurationError):
            get_settings(log_level="LOUD")

    @pytest.mark.parametrize(
        "name, value",
        [
            ("OCYCLE_AF_BUDGET", "0"),
            ("OCYCLE_AF_BUDGET", "lots"),
            ("OCYCLE_LOG_FORMAT", "xml"),
            ("OCYCLE_LOG_LEVEL", "LOUD"),
        ],
    )
    def test_invalid_values(self, monkeypatch, name, value):
        """Test values that do not validate."""
        monkeypatch.setenv(name, value)
        with pytest.raises(ConfigurationError):
            get_settings()


class TestLogging:
    """Test suite for configure_logging."""

    def teardown_method(self):
        """Drop handlers added by the test."""
        configure_logging("WARNING", stream=io.StringIO())

    def test_json_lines(self):
        """Test the JSON formatter carries extra fields."""
        stream = io.StringIO()
        configure_logging("INFO", "json", stream)
        logging.getLogger(f"{PACKAGE_LOGGER}.test").info("building", extra={"n": 37, "route": "af"})
        record = json.loads(stream.getvalue().splitlines()[-1])
        assert record["message"] == "building"
        assert record["n"] == 37
        assert record["route"] == "af"

    def test_reconfigure_replaces_handler(self):
        """Test calling twice leaves a single package handler."""
        configure_logging("INFO", stream=io.StringIO())
        logger = configure_logging("DEBUG", stream=io.StringIO())
        ours = [h for h in logger.handlers if getattr(h, "_steiner_ocycles", False)]
        assert len(ours) == 1
        assert logger.level == logging.DEBUG
