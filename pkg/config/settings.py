"""Structured settings management with validation"""
import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv
import logging
from pydantic import SecretStr
from constants.settings_constants import SettingsConstants, LogConfigConstants
# Load environment variables
env_path = Path(__file__).parent.parent / '.env'
load_dotenv(dotenv_path=env_path)

logger = logging.getLogger(__name__)


class Settings:
    """Process-level settings; the only place secrets are read"""

    def __init__(self):
        """Initialize settings from environment variables"""
        # LLM provider
        self.llm_api_key: Optional[SecretStr] = self._get_secret(SettingsConstants.LLM_API_KEY_VAR)
        self.llm_base_url: str = os.getenv(SettingsConstants.LLM_BASE_URL_VAR,
                                           SettingsConstants.LLM_BASE_URL_DEFAULT)

        # Embedding provider, falls back to the LLM provider
        self.embedding_api_key: Optional[SecretStr] = (self._get_secret(SettingsConstants.EMBEDDING_API_KEY_VAR)
                                                       or self.llm_api_key)
        self.embedding_base_url: str = os.getenv(SettingsConstants.EMBEDDING_BASE_URL_VAR, self.llm_base_url)

        # Dataset hub
        self.hub_token: Optional[SecretStr] = self._get_secret(SettingsConstants.HUB_TOKEN_VAR)
        self.hub_base_url: str = os.getenv(SettingsConstants.HUB_BASE_URL_VAR, SettingsConstants.HUB_BASE_URL_DEFAULT)
        self.hub_rows_url: str = os.getenv(SettingsConstants.HUB_ROWS_URL_VAR, SettingsConstants.HUB_ROWS_URL_DEFAULT)

        cache_dir = os.getenv(SettingsConstants.CACHE_DIR_VAR)
        self.cache_dir: Optional[Path] = Path(cache_dir) if cache_dir else None

        # Logging
        self.log_level: str = os.getenv(SettingsConstants.LOG_LVL_VAR,
                                        SettingsConstants.LOG_LVL).upper()
        self.log_file: Optional[str] = os.getenv(SettingsConstants.LOG_FILE_VAR)

        self._validate_settings()
        logger.debug(f"Settings loaded: {self!r}")

    @staticmethod
    def _get_secret(key: str) -> Optional[SecretStr]:
        value = os.getenv(key)
        return SecretStr(value) if value else None

    def _validate_settings(self) -> None:
        """Validate settings"""
        if self.log_level not in LogConfigConstants.get_all_from_type('Log levels'):
            logger.warning(f"Invalid log level '{self.log_level}', defaulting to INFO")
            self.log_level = LogConfigConstants.LVL_INFO

    def __repr__(self) -> str:
        return (f"Settings(log_level={self.log_level}, "
                f"llm_base_url={self.llm_base_url}, llm_api_key={'set' if self.llm_api_key else 'unset'})")


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create global settings instance

    Returns:
        Settings instance
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reset_settings() -> None:
    """Drop the cached instance so the next get_settings() re-reads the environment"""
    global _settings
    _settings = None
