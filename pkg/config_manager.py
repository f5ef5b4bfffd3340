"""
Configuration management for tolerances, rendering and report export
"""
import copy
import json
import logging
import os
from typing import Any, Dict, List, Optional, Tuple

from config import TorusConfig

DEFAULT_CONFIG_FILE = "torus_config.json"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "numerics": {
        "abs_tol": TorusConfig.ABS_TOL,
        "homology_tol": TorusConfig.HOMOLOGY_TOL,
        "svd_cutoff": TorusConfig.SVD_CUTOFF,
        "stress_space_tol": TorusConfig.STRESS_SPACE_TOL
    },
    "render": {
        "tile": 3,
        "scale": 300.0,
        "labels": False,
        "stroke_width": 1.5
    },
    "export": {
        "include_timestamps": True,
        "report_digits": TorusConfig.REPORT_DIGITS
    },
    "logging": {
        "level": "INFO",
        "file_enabled": False,
        "file_name": "torus_reciprocal.log"
    }
}

# (section, key, kind, low, high); None leaves a side open, bounds are strict for floats
_NUMERIC_RULES: Tuple[Tuple[str, str, type, Optional[float], Optional[float]], ...] = (
    ("numerics", "abs_tol", float, 0.0, 1.0),
    ("numerics", "homology_tol", float, 0.0, 1.0),
    ("numerics", "svd_cutoff", float, 0.0, 1.0),
    ("numerics", "stress_space_tol", float, 0.0, 1.0),
    ("render", "tile", int, 1, None),
    ("render", "scale", float, 0.0, None),
    ("export", "report_digits", int, 1, 17),
)

# Keys a user is most likely to tune
_SAMPLE_KEYS = {
    "numerics": ("abs_tol", "homology_tol"),
    "render": ("tile", "labels"),
    "logging": ("level", "file_enabled"),
}


def _numeric_issue(section: str, key: str, value: Any, kind: type,
                   low: Optional[float], high: Optional[float]) -> Optional[str]:
    allowed = (int,) if kind is int else (int, float)
    if isinstance(value, bool) or not isinstance(value, allowed):
        return f"{section}.{key} must be {'an integer' if kind is int else 'a number'}, got {value!r}"
    if kind is int:
        in_range = (low is None or value >= low) and (high is None or value <= high)
    else:
        in_range = (low is None or value > low) and (high is None or value < high)
    if not in_range:
        return f"{section}.{key}={value!r} is out of range"
    return None


class ConfigManager:
    """JSON settings file layered over the built-in defaults"""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = os.path.abspath(config_file or DEFAULT_CONFIG_FILE)
        self.logger = logging.getLogger(__name__)
        self.config: Dict[str, Any] = copy.deepcopy(_DEFAULTS)
        self._load_config()

    def _load_config(self):
        if not os.path.exists(self.config_file):
            self.logger.debug(f"No configuration at {self.config_file}, using defaults")
            return
        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                overrides = json.load(f)
        except (OSError, ValueError) as e:
            self.logger.warning(f"Ignoring unreadable configuration {self.config_file}: {e}")
            return
        self._merge_config(overrides)
        self.logger.info(f"Configuration loaded from {self.config_file}")

    def _merge_config(self, overrides: Dict[str, Any]):
        """Section-wise update; unknown sections are kept as given"""
        for section, values in overrides.items():
            if isinstance(values, dict):
                self.config.setdefault(section, {}).update(values)
            else:
                self.config[section] = values

    def save_config(self) -> bool:
        return self._write_json(self.config_file, self.config)

    def get(self, section: str, key: str, default: Any = None) -> Any:
        return self.config.get(section, {}).get(key, default)

    def set(self, section: str, key: str, value: Any) -> None:
        self.config.setdefault(section, {})[key] = value

    def get_section(self, section: str) -> Dict[str, Any]:
        """Copy of one section"""
        return dict(self.config.get(section, {}))

    def update_section(self, section: str, values: Dict[str, Any]) -> None:
        self.config.setdefault(section, {}).update(values)

    def reset_to_defaults(self) -> None:
        """Drop every override; the file location is kept"""
        self.config = copy.deepcopy(_DEFAULTS)

    def validate_config(self) -> List[str]:
        """Human-readable problems with the current values; empty when usable"""
        issues = []
        for section, key, kind, low, high in _NUMERIC_RULES:
            issue = _numeric_issue(section, key, self.get(section, key), kind, low, high)
            if issue:
                issues.append(issue)
        if self.get("logging", "level") not in LOG_LEVELS:
            issues.append(f"Invalid logging level, must be one of: {list(LOG_LEVELS)}")
        return issues

    def create_sample_config(self, path: str = "sample_config.json") -> bool:
        """Write the commonly tuned keys with their default values"""
        sample = {section: {key: _DEFAULTS[section][key] for key in keys}
                  for section, keys in _SAMPLE_KEYS.items()}
        sample["render"]["labels"] = True
        return self._write_json(path, sample)

    def _write_json(self, path: str, data: Dict[str, Any]) -> bool:
        try:
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(data, f, indent=2, ensure_ascii=False)
        except OSError as e:
            self.logger.error(f"Could not write configuration {path}: {e}")
            return False
        self.logger.info(f"Configuration written to {path}")
        return True


_config_manager: Optional[ConfigManager] = None


def get_config_manager(config_file: Optional[str] = None) -> ConfigManager:
    """Shared manager; naming a different file replaces it"""
    global _config_manager
    if _config_manager is None or (config_file and os.path.abspath(config_file) != _config_manager.config_file):
        _config_manager = ConfigManager(config_file)
    return _config_manager


def get_config(section: str, key: str, default: Any = None) -> Any:
    return get_config_manager().get(section, key, default)


def set_config(section: str, key: str, value: Any) -> None:
    get_config_manager().set(section, key, value)
