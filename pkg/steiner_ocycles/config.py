"""
Runtime configuration.

Settings are read from the process environment, after load_dotenv() has merged a
local .env file, into a pydantic model. CLI flags override individual fields for
one invocation.
"""

import os
from pathlib import Path
from typing import Literal, Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError, field_validator

from .errors import ConfigurationError

DEFAULT_DATA_DIR = Path(__file__).parent / "data" / "base_cases"
DEFAULT_AF_BUDGET = 10**8


class Settings(BaseModel):
    """Tunables for asset lookup, logging and search budgets."""

    data_dir: Path = DEFAULT_DATA_DIR
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "WARNING"
    log_format: Literal["text", "json"] = "text"
    af_budget: int = Field(default=DEFAULT_AF_BUDGET, ge=1)
    exhaustive_limit: int = Field(default=9, ge=3)

    @field_validator("log_level", mode="before")
    @classmethod
    def _upper_level(cls, value: object) -> object:
        return value.upper() if isinstance(value, str) else value


_ENV_FIELDS = {
    "OCYCLE_DATA_DIR": "data_dir",
    "OCYCLE_LOG_LEVEL": "log_level",
    "OCYCLE_LOG_FORMAT": "log_format",
    "OCYCLE_AF_BUDGET": "af_budget",
    "OCYCLE_EXHAUSTIVE_LIMIT": "exhaustive_limit",
}

_dotenv_loaded = False


def get_settings(**overrides: Optional[object]) -> Settings:
    """
    Build Settings from the environment.

    Args:
        **overrides: field values that win over the environment; None values
            are ignored so CLI flags can be passed through unconditionally.

    Returns:
        Validated Settings instance.

    Raises:
        ConfigurationError: if a value does not validate.
    """
    global _dotenv_loaded
    if not _dotenv_loaded:
        load_dotenv()
        _dotenv_loaded = True

    values = {}
    for env_name, field in _ENV_FIELDS.items():
        raw = os.getenv(env_name)
        if raw:
            values[field] = raw
    values.update({k: v for k, v in overrides.items() if v is not None})

    try:
        return Settings(**values)
    except ValidationError as e:
        raise ConfigurationError(f"Invalid configuration: {e}") from e
