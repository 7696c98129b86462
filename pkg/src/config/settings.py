"""
Configuration and Settings Management System
"""

import json
import yaml
import logging
import shutil
import time
from typing import Dict, Any, Optional, List
from dataclasses import dataclass, asdict, field
from pathlib import Path
from platformdirs import user_config_dir, user_data_dir
from ..core.limits import ComputeLimits

logger = logging.getLogger(__name__)


@dataclass
class SuiteSettings:
    """Verification suite parameters"""
    seed: int = 7
    count: int = 200                # generated maps per map-based suite
    mccoy_count: int = 500
    coro7_count: int = 150
    rewrite_count: int = 200
    max_ring_order: int = 64        # zoo rings used as map sources and targets
    flatness_max_order: int = 16    # rings whose ideal pairs are checked exhaustively
    classify_max_order: int = 16    # flat-epi targets compared by isomorphism search
    report_dir: Optional[str] = None


@dataclass
class SuiteProfile:
    """Named suite configuration"""
    name: str
    description: str
    suite: SuiteSettings
    created_time: float
    last_used: float = 0.0


@dataclass
class AppSettings:
    """Main application settings container"""
    limits: ComputeLimits = field(default_factory=ComputeLimits)
    suite: SuiteSettings = field(default_factory=SuiteSettings)
    profiles: List[SuiteProfile] = field(default_factory=list)
    log_level: str = "INFO"
    log_to_file: bool = True

    def __post_init__(self):
        """Ensure all nested dataclasses are properly initialized"""
        if not isinstance(self.limits, ComputeLimits):
            if isinstance(self.limits, dict):
                self.limits = ComputeLimits(**self.limits)
            else:
                self.limits = ComputeLimits()

        if not isinstance(self.suite, SuiteSettings):
            if isinstance(self.suite, dict):
                self.suite = SuiteSettings(**self.suite)
            else:
                self.suite = SuiteSettings()

        converted = []
        for profile in self.profiles or []:
            if isinstance(profile, dict):
                if isinstance(profile.get('suite'), dict):
                    profile['suite'] = SuiteSettings(**profile['suite'])
                converted.append(SuiteProfile(**profile))
            else:
                converted.append(profile)
        self.profiles = converted


class ConfigManager:
    """Manages application configuration and settings persistence"""

    def __init__(self, app_name: str = "epilab", config_file: Optional[Path] = None):
        self.app_name = app_name

        self.config_dir = Path(user_config_dir(app_name))
        self.data_dir = Path(user_data_dir(app_name))
        if config_file is not None:
            self.config_dir = Path(config_file).parent

        self.config_dir.mkdir(parents=True, exist_ok=True)
        self.data_dir.mkdir(parents=True, exist_ok=True)

        self.config_file = Path(config_file) if config_file is not None else self.config_dir / "settings.yaml"
        self.backup_dir = self.config_dir / "backups"
        self.backup_dir.mkdir(exist_ok=True)

        self.settings: Optional[AppSettings] = None
        self.load_settings()

    def get_default_settings(self) -> AppSettings:
        """Create default application settings"""
        return AppSettings(
            limits=ComputeLimits(),
            suite=SuiteSettings(),
            profiles=[
                SuiteProfile(
                    name="default",
                    description="Acceptance-sized runs",
                    suite=SuiteSettings(),
                    created_time=0.0
                ),
                SuiteProfile(
                    name="quick",
                    description="Small runs over rings of order at most 16",
                    suite=SuiteSettings(
                        count=25,
                        mccoy_count=60,
                        coro7_count=30,
                        rewrite_count=30,
                        max_ring_order=16,
                        flatness_max_order=8,
                        classify_max_order=8
                    ),
                    created_time=0.0
                ),
                SuiteProfile(
                    name="thorough",
                    description="Twice the acceptance counts",
                    suite=SuiteSettings(
                        count=400,
                        mccoy_count=1000,
                        coro7_count=300,
                        rewrite_count=400
                    ),
                    created_time=0.0
                )
            ]
        )

    def load_settings(self) -> AppSettings:
        """Load settings from configuration file"""
        try:
            if self.config_file.exists():
                with open(self.config_file, 'r', encoding='utf-8') as f:
                    data = yaml.safe_load(f)

                if data:
                    self.settings = AppSettings(**data)
                    logger.info(f"Loaded settings from {self.config_file}")
                else:
                    self.settings = self.get_default_settings()
                    logger.info("Config file empty, using default settings")
            else:
                self.settings = self.get_default_settings()
                logger.info("No config file found, using default settings")

        except Exception as e:
            logger.error(f"Error loading settings: {e}")
            logger.info("Using default settings")
            self.settings = self.get_default_settings()

        return self.settings

    def save_settings(self, backup: bool = True) -> bool:
        """Save current settings to configuration file"""
        try:
            if not self.settings:
                logger.warning("No settings to save")
                return False

            if backup and self.config_file.exists():
                self._create_backup()

            with open(self.config_file, 'w', encoding='utf-8') as f:
                yaml.dump(asdict(self.settings), f, default_flow_style=False, indent=2)

            logger.info(f"Settings saved to {self.config_file}")
            return True

        except Exception as e:
            logger.error(f"Error saving settings: {e}")
            return False

    def _create_backup(self):
        """Create a backup of the current configuration"""
        try:
            timestamp = int(time.time() * 1000)
            backup_file = self.backup_dir / f"settings_backup_{timestamp}.yaml"
            shutil.copy2(self.config_file, backup_file)

            # Keep only the last 10 backups
            backups = sorted(self.backup_dir.glob("settings_backup_*.yaml"))
            while len(backups) > 10:
                backups.pop(0).unlink()

            logger.debug(f"Created backup: {backup_file}")

        except Exception as e:
            logger.error(f"Error creating backup: {e}")

    def update_limits(self, limits: ComputeLimits):
        """Update computation caps and save"""
        if self.settings:
            self.settings.limits = limits
            self.save_settings()

    def update_suite_settings(self, suite: SuiteSettings):
        """Update suite parameters and save"""
        if self.settings:
            self.settings.suite = suite
            self.save_settings()

    def add_profile(self, profile: SuiteProfile) -> bool:
        """Add a new suite profile"""
        if not self.settings:
            return False

        if profile.name in [p.name for p in self.settings.profiles]:
            logger.warning(f"Profile '{profile.name}' already exists")
            return False

        profile.created_time = time.time()
        self.settings.profiles.append(profile)
        self.save_settings()

        logger.info(f"Added profile: {profile.name}")
        return True

    def remove_profile(self, profile_name: str) -> bool:
        """Remove a profile by name"""
        if not self.settings:
            return False

        original_count = len(self.settings.profiles)
        self.settings.profiles = [p for p in self.settings.profiles if p.name != profile_name]

        if len(self.settings.profiles) < original_count:
            self.save_settings()
            logger.info(f"Removed profile: {profile_name}")
            return True
        logger.warning(f"Profile '{profile_name}' not found")
        return False

    def get_profile(self, profile_name: str) -> Optional[SuiteProfile]:
        """Get a profile by name"""
        if not self.settings:
            return None
        return next((p for p in self.settings.profiles if p.name == profile_name), None)

    def apply_profile(self, profile_name: str, persist: bool = True) -> bool:
        """Make a profile's suite parameters current"""
        profile = self.get_profile(profile_name)
        if not profile:
            logger.warning(f"Profile '{profile_name}' not found")
            return False

        profile.last_used = time.time()
        self.settings.suite = SuiteSettings(**asdict(profile.suite))
        if persist:
            self.save_settings()
        logger.info(f"Applied profile: {profile_name}")
        return True

    def export_settings(self, file_path: Path) -> bool:
        """Export settings to a file"""
        try:
            if not self.settings:
                return False

            settings_dict = asdict(self.settings)
            with open(file_path, 'w', encoding='utf-8') as f:
                if Path(file_path).suffix.lower() == '.json':
                    json.dump(settings_dict, f, indent=2)
                else:
                    yaml.dump(settings_dict, f, default_flow_style=False, indent=2)

            logger.info(f"Settings exported to {file_path}")
            return True

        except Exception as e:
            logger.error(f"Error exporting settings: {e}")
            return False

    def import_settings(self, file_path: Path) -> bool:
        """Import settings from a file"""
        file_path = Path(file_path)
        try:
            if not file_path.exists():
                logger.error(f"Import file not found: {file_path}")
                return False

            with open(file_path, 'r', encoding='utf-8') as f:
                if file_path.suffix.lower() == '.json':
                    data = json.load(f)
                else:
                    data = yaml.safe_load(f)

            if not data:
                logger.warning(f"Import file {file_path} is empty")
                return False

            if self.config_file.exists():
                self._create_backup()
            self.settings = AppSettings(**data)
            self.save_settings(backup=False)

            logger.info(f"Settings imported from {file_path}")
            return True

        except Exception as e:
            logger.error(f"Error importing settings: {e}")
            return False

    def reset_to_defaults(self) -> bool:
        """Reset all settings to defaults"""
        try:
            if self.config_file.exists():
                self._create_backup()

            self.settings = self.get_default_settings()
            self.save_settings(backup=False)

            logger.info("Settings reset to defaults")
            return True

        except Exception as e:
            logger.error(f"Error resetting settings: {e}")
            return False

    def get_config_info(self) -> Dict[str, Any]:
        """Get information about configuration directories and files"""
        return {
            'config_dir': str(self.config_dir),
            'data_dir': str(self.data_dir),
            'config_file': str(self.config_file),
            'config_exists': self.config_file.exists(),
            'log_file': str(self.data_dir / "logs" / f"{self.app_name}.log"),
            'backup_dir': str(self.backup_dir),
            'backup_count': len(list(self.backup_dir.glob("settings_backup_*.yaml"))),
            'settings_loaded': self.settings is not None
        }


# Global config manager instance
_config_manager: Optional[ConfigManager] = None


def get_config_manager(config_file: Optional[Path] = None) -> ConfigManager:
    """Get the global configuration manager instance"""
    global _config_manager
    if _config_manager is None or (config_file is not None and Path(config_file) != _config_manager.config_file):
        _config_manager = ConfigManager(config_file=config_file)
    return _config_manager


def get_settings() -> AppSettings:
    """Get current application settings"""
    return get_config_manager().settings
