"""Configuration manager for the monogamy audit toolkit."""

import os
import logging
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

DEFAULT_CONFIG_PATH = "config.yaml"


@dataclass
class NumericsConfig:
    """Tolerances shared by the state types and measures."""
    norm_tolerance: float = 1e-12
    hermitian_tolerance: float = 1e-12
    trace_tolerance: float = 1e-12
    psd_tolerance: float = 1e-10
    kappa_cross_check_tolerance: float = 1e-6

    def __post_init__(self):
        for name in ('norm_tolerance', 'hermitian_tolerance', 'trace_tolerance',
                     'psd_tolerance', 'kappa_cross_check_tolerance'):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")


@dataclass
class RoofConfig:
    """
    Settings for the convex-roof optimizer.

    `ensemble_size` of None means r squared for a rank-r input.
    """
    ensemble_size: Optional[int] = None
    restarts: int = 16
    max_iterations: int = 2000
    tolerance: float = 1e-8
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError(f"restarts must be >= 1, got {self.restarts}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if self.tolerance <= 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.ensemble_size is not None and self.ensemble_size < 1:
            raise ValueError(f"ensemble_size must be >= 1, got {self.ensemble_size}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def resolved_ensemble_size(self, rank: int) -> int:
        """Ensemble size for a rank-`rank` input."""
        return rank * rank if self.ensemble_size is None else self.ensemble_size


@dataclass
class AuditConfig:
    """Defaults for audits and batch campaigns."""
    nu_min: float = 2.0
    nu_max: float = 10.0
    nu_step: float = 0.25
    relative_tolerance: float = 1e-8
    absolute_tolerance: float = 1e-12
    grid_points: int = 9
    allow_mixed: bool = False
    samples: int = 1000
    workers: int = 1


@dataclass
class LoggingConfig:
    """Logging settings."""
    level: str = "WARNING"
    log_to_file: bool = False
    log_directory: str = "logs"


@dataclass
class OutputConfig:
    """Report output settings."""
    format: str = "json"
    directory: str = "reports"
    float_format: str = ".17g"


@dataclass
class Config:
    """Main configuration container."""
    numerics: NumericsConfig = field(default_factory=NumericsConfig)
    convex_roof: RoofConfig = field(default_factory=RoofConfig)
    audit: AuditConfig = field(default_factory=AuditConfig)
    logging: LoggingConfig = field(default_factory=LoggingConfig)
    output: OutputConfig = field(default_factory=OutputConfig)

    def save(self, filepath: str = DEFAULT_CONFIG_PATH):
        """Save configuration to YAML file."""
        with open(filepath, 'w') as f:
            yaml.dump(asdict(self), f, default_flow_style=False, indent=2, sort_keys=False)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Config':
        """Build a Config from parsed YAML, ignoring unknown sections."""
        data = data or {}
        return cls(
            numerics=NumericsConfig(**data.get('numerics', {})),
            convex_roof=RoofConfig(**data.get('convex_roof', {})),
            audit=AuditConfig(**data.get('audit', {})),
            logging=LoggingConfig(**data.get('logging', {})),
            output=OutputConfig(**data.get('output', {})),
        )


class ConfigManager:
    """Configuration manager for loading and managing config data."""

    ENV_OVERRIDES: List[str] = ['MONOGAMY_SEED', 'MONOGAMY_LOG_LEVEL', 'MONOGAMY_ROOF_RESTARTS']

    def __init__(self, config_path: Optional[str] = None):
        load_dotenv()
        self.config_path = config_path or os.getenv('MONOGAMY_CONFIG', DEFAULT_CONFIG_PATH)
        self.logger = logging.getLogger(f"monogamy_audit.{__name__}")
        self._config: Optional[Config] = None

    def load_config(self) -> Config:
        """Load configuration from YAML file, then apply environment overrides."""
        if not os.path.exists(self.config_path):
            self.logger.warning(f"Config file {self.config_path} not found, using defaults")
            config = Config()
        else:
            try:
                with open(self.config_path, 'r') as file:
                    yaml_data = yaml.safe_load(file)
                config = Config.from_dict(yaml_data)
                self.logger.info(f"Configuration loaded from {self.config_path}")
            except (OSError, yaml.YAMLError, TypeError, ValueError) as e:
                self.logger.error(f"Error loading config: {e}")
                config = Config()

        self._apply_env_overrides(config)
        self._config = config
        return config

    def _apply_env_overrides(self, config: Config) -> None:
        seed = os.getenv('MONOGAMY_SEED')
        if seed:
            config.convex_roof.seed = int(seed)

        level = os.getenv('MONOGAMY_LOG_LEVEL')
        if level:
            config.logging.level = level.upper()

        restarts = os.getenv('MONOGAMY_ROOF_RESTARTS')
        if restarts:
            config.convex_roof.restarts = max(1, int(restarts))

    def get_config(self) -> Config:
        """Get current configuration, loading if necessary."""
        if self._config is None:
            return self.load_config()
        return self._config


_config_manager: Optional[ConfigManager] = None


def get_config() -> Config:
    """Get the global configuration instance."""
    global _config_manager
    if _config_manager is None:
        _config_manager = ConfigManager()
    return _config_manager.get_config()


def set_config(config: Config) -> None:
    """Install an already loaded configuration as the global instance."""
    global _config_manager
    _config_manager = ConfigManager()
    _config_manager._config = config


def reset_config() -> None:
    """Forget the global configuration so the next get_config() reloads it."""
    global _config_manager
    _config_manager = None
