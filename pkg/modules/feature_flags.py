"""
Feature Flags for anyonlab
Toggles for solver heuristics that are safe to switch per run
"""

import os
from contextlib import contextmanager
from typing import Dict, Any, Iterator

class FeatureFlags:
    """Feature flag management for solver heuristics"""

    def __init__(self):
        """Initialize feature flags with safe defaults"""
        self.flags = {
            # Elimination heuristics
            "use_both_hexagon_signs": self._get_env_bool("USE_BOTH_HEXAGON_SIGNS", True),
            "enable_sign_enumeration": self._get_env_bool("ENABLE_SIGN_ENUMERATION", False),
            "enable_parallel_generation": self._get_env_bool("ENABLE_PARALLEL_GENERATION", True),

            # Diagnostics
            "enable_term_diagnostics": self._get_env_bool("ENABLE_TERM_DIAGNOSTICS", True),
        }

    def _get_env_bool(self, key: str, default: bool) -> bool:
        """Get boolean from environment variable"""
        value = os.getenv(key, str(default)).lower()
        return value in ('true', '1', 'yes', 'on')

    def is_enabled(self, feature: str) -> bool:
        """Check if a feature is enabled"""
        return self.flags.get(feature, False)

    def get_all_flags(self) -> Dict[str, Any]:
        """Get all feature flags for the run summary"""
        return self.flags.copy()

    @contextmanager
    def overrides(self, **values: Any) -> Iterator["FeatureFlags"]:
        """Temporarily set flags, restoring the previous values on exit"""
        saved = self.flags.copy()
        self.flags.update(values)
        try:
            yield self
        finally:
            self.flags = saved

# Global instance
feature_flags = FeatureFlags()

# Convenience functions
def is_sign_enumeration_enabled() -> bool:
    """Check if Step-3 sign pattern enumeration is enabled"""
    return feature_flags.is_enabled("enable_sign_enumeration")

def use_both_hexagon_signs() -> bool:
    """Check if both braiding chiralities feed the hexagon system"""
    return feature_flags.is_enabled("use_both_hexagon_signs")
