"""
Configuration and settings management
"""

from .settings import (
    ConfigManager,
    AppSettings,
    SuiteSettings,
    SuiteProfile,
    get_config_manager,
    get_settings
)

__all__ = [
    "ConfigManager",
    "AppSettings",
    "SuiteSettings",
    "SuiteProfile",
    "get_config_manager",
    "get_settings"
]
