"""
Validated settings of one CLI run.

A RunConfig merges command-line flags over the loaded configuration.
Invalid combinations raise pydantic's ValidationError, which the entry
point maps to the validation exit code.
"""

import dataclasses
from pathlib import Path
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config.config_manager import Config, RoofConfig
from models.measure_value import MeasureKind
from monogamy.bounds import MIN_NU, nu_range


class RunConfig(BaseModel):
    """Settings of one command invocation."""

    model_config = ConfigDict(extra='forbid', frozen=True)

    command: Literal['measure', 'audit', 'figure', 'random-audit', 'counterexamples', 'croof']
    state: Optional[str] = None
    partition: Optional[str] = None
    first_subsystem: int = Field(default=0, ge=0)
    b1: Optional[int] = Field(default=None, ge=0)
    measure: MeasureKind = MeasureKind.CONCURRENCE

    nu_min: float = 2.0
    nu_max: float = 10.0
    nu_step: float = 0.25
    nu_values: Optional[List[float]] = None

    seed: int = Field(default=0, ge=0)
    samples: int = 1000
    dims: List[int] = Field(default_factory=lambda: [2, 2, 2])
    workers: int = Field(default=1, ge=1)

    out: Optional[Path] = None
    format: Literal['csv', 'json'] = 'json'
    float_format: str = '.17g'

    tolerance: float = 1e-8
    absolute_tolerance: float = 1e-12
    grid_points: int = Field(default=9, ge=2)
    allow_mixed: bool = False

    figure: Optional[Literal['fig1', 'fig2']] = None
    quoted_values: bool = False

    keep: Optional[List[int]] = None
    objective: Literal['negativity', 'concurrence'] = 'negativity'
    restarts: Optional[int] = Field(default=None, ge=1)

    @field_validator('nu_min')
    @classmethod
    def _nu_min_in_scope(cls, value: float) -> float:
        if value < MIN_NU:
            raise ValueError(f"nu_min must be >= {MIN_NU}")
        return value

    @field_validator('nu_step')
    @classmethod
    def _positive_step(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("nu_step must be positive")
        return value

    @field_validator('samples')
    @classmethod
    def _at_least_one_sample(cls, value: int) -> int:
        if value < 1:
            raise ValueError("sample count must be >= 1")
        return value

    @field_validator('tolerance', 'absolute_tolerance')
    @classmethod
    def _positive_tolerance(cls, value: float) -> float:
        if value <= 0:
            raise ValueError("tolerances must be positive")
        return value

    @field_validator('nu_values')
    @classmethod
    def _explicit_powers_in_scope(cls, value: Optional[List[float]]) -> Optional[List[float]]:
        if value is not None:
            if not value:
                raise ValueError("nu_values must not be empty")
            if min(value) < MIN_NU:
                raise ValueError(f"every nu must be >= {MIN_NU}")
        return value

    @field_validator('dims')
    @classmethod
    def _valid_dims(cls, value: List[int]) -> List[int]:
        if len(value) < 3 or any(d < 2 for d in value):
            raise ValueError("dims needs at least three subsystems of dimension >= 2")
        return value

    @model_validator(mode='after')
    def _consistent(self) -> 'RunConfig':
        if self.nu_max < self.nu_min:
            raise ValueError("nu_max must not be below nu_min")
        if self.command in ('measure', 'audit', 'croof') and not self.state:
            raise ValueError(f"{self.command} needs a state")
        if self.command == 'figure' and self.figure is None:
            raise ValueError("figure needs fig1 or fig2")
        if self.quoted_values and self.figure != 'fig1':
            raise ValueError("quoted component values exist for fig1 only")
        if self.command == 'croof' and not self.keep:
            raise ValueError("croof needs the subsystems to keep")
        return self

    def nu_grid(self) -> Tuple[float, ...]:
        """Explicit powers if given, else the nu_min..nu_max range."""
        if self.nu_values is not None:
            return tuple(float(nu) for nu in self.nu_values)
        return nu_range(self.nu_min, self.nu_max, self.nu_step)

    def roof_config(self, base: RoofConfig) -> RoofConfig:
        """Optimizer settings with this run's seed and restart count applied."""
        changes = {'seed': self.seed}
        if self.restarts is not None:
            changes['restarts'] = self.restarts
        return dataclasses.replace(base, **changes)

    @classmethod
    def from_sources(cls, command: str, flags: dict, config: Config) -> 'RunConfig':
        """
        Build a RunConfig from parsed flags over configuration defaults.

        Flags that were not given (None) fall back to the configuration.
        """
        audit = config.audit
        values = {
            'nu_min': audit.nu_min,
            'nu_max': audit.nu_max,
            'nu_step': audit.nu_step,
            'tolerance': audit.relative_tolerance,
            'absolute_tolerance': audit.absolute_tolerance,
            'grid_points': audit.grid_points,
            'allow_mixed': audit.allow_mixed,
            'samples': audit.samples,
            'workers': audit.workers,
            'seed': config.convex_roof.seed,
            'format': config.output.format,
            'float_format': config.output.float_format,
        }
        values.update({key: value for key, value in flags.items() if value is not None})
        values['command'] = command
        return cls(**values)
