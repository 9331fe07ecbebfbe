"""Numeric settings loaded from data/settings.json"""
import os
import json
from functools import lru_cache
from typing import Dict, Any, Optional

from constants import ENV_TOLERANCE_SCALE, ENV_SETTINGS_FILE, SETTINGS_FILE_NAME


DEFAULTS: Dict[str, Any] = {
    'eps_root': 1e-12,
    'delta_sep': 1e-6,
    'eps_check': 1e-8,
    'rank_threshold': 1e-8,
    'quad_nodes': 64,
    'quad_max_nodes': 8192,
    'newton_polish_steps': 3,
    'box_sweep_factor': 2,
    'gamma_truncation': 12,
    'region_constant': 10.0,
    'sample_min_modulus': 0.5,
    'sample_max_modulus': 2.0,
    'sample_attempts': 200,
    'branch_margin': 1e-3,
    'jet_order': 3,
    'jet_points': 2,
    'e_set_cap_factor': 1,
    'series_tolerance': 1e-6,
    'gamma_max_lattice': 2000000,
}

# Keys multiplied by GKZ_TOLERANCE_SCALE
SCALED_KEYS = ('eps_root', 'eps_check')


class Settings:
    """Tolerances and knobs for the numeric engine"""

    def __init__(self, settings_file: str = None, settings_data: Dict[str, Any] = None,
                 tolerance_scale: Optional[float] = None):
        """
        Initialize settings.

        Args:
            settings_file: Path to JSON settings file (defaults to GKZ_SETTINGS_FILE or data/settings.json)
            settings_data: Settings dict injected directly, takes precedence over any file
            tolerance_scale: Factor applied to every epsilon (defaults to GKZ_TOLERANCE_SCALE or 1)
        """
        self.values: Dict[str, Any] = dict(DEFAULTS)

        current_dir = os.path.dirname(os.path.abspath(__file__))
        default_path = os.path.join(current_dir, '..', 'data', SETTINGS_FILE_NAME)
        settings_path = settings_file or os.getenv(ENV_SETTINGS_FILE) or default_path

        if settings_data is not None:
            self.set_settings_data(settings_data)
        else:
            self.load_settings(settings_path)

        if tolerance_scale is None:
            tolerance_scale = float(os.getenv(ENV_TOLERANCE_SCALE, '1'))
        if tolerance_scale <= 0:
            raise ValueError(f"Tolerance scale must be positive, got {tolerance_scale}")
        self.tolerance_scale = tolerance_scale
        for key in SCALED_KEYS:
            self.values[key] = self.values[key] * tolerance_scale

    def load_settings(self, settings_file: str):
        """
        Load settings from a JSON file.

        Args:
            settings_file: Path to JSON file with a flat {"key": value} structure
        """
        if not os.path.exists(settings_file):
            raise FileNotFoundError(f"Settings file not found: {settings_file}")

        with open(settings_file, 'r') as f:
            self.set_settings_data(json.load(f))

    def set_settings_data(self, data: Dict[str, Any]):
        """Inject settings directly (used for tests)."""
        unknown = sorted(set(data) - set(DEFAULTS))
        if unknown:
            raise ValueError(f"Unknown settings keys: {', '.join(unknown)}")
        self.values.update(data)

    def __getattr__(self, name: str) -> Any:
        values = self.__dict__.get('values')
        if values is not None and name in values:
            return values[name]
        raise AttributeError(name)

    def replace(self, **overrides: Any) -> 'Settings':
        """Copy with some values overridden (no further scaling applied)."""
        unknown = sorted(set(overrides) - set(DEFAULTS))
        if unknown:
            raise ValueError(f"Unknown settings keys: {', '.join(unknown)}")
        clone = object.__new__(Settings)
        clone.values = dict(self.values)
        clone.values.update(overrides)
        clone.tolerance_scale = self.tolerance_scale
        return clone

    def to_dict(self) -> Dict[str, Any]:
        return dict(self.values)


@lru_cache(maxsize=1)
def default_settings() -> Settings:
    """Settings from the default file and environment, loaded once per process."""
    return Settings()
