"""
Configuration package for the monogamy audit toolkit.

This package handles configuration management, loading settings from
YAML files and providing structured access to configuration data.
"""

from .config_manager import (
    AuditConfig,
    Config,
    ConfigManager,
    LoggingConfig,
    NumericsConfig,
    OutputConfig,
    RoofConfig,
    get_config,
    reset_config,
    set_config,
)

__all__ = [
    'ConfigManager', 'Config', 'get_config', 'set_config', 'reset_config',
    'NumericsConfig', 'RoofConfig', 'AuditConfig', 'LoggingConfig', 'OutputConfig',
]
