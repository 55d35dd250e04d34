#!/usr/bin/env python3
# -*- coding: utf-8 -*-
# Copyright (c) 2025, Lewis Guo. All rights reserved.
# Author: Lewis Guo <guolisen@gmail.com>
# Created: May 02, 2025
#
# Description: Configuration module for dagstat.
#
# This source code is licensed under the MIT license found in the
# LICENSE file in the root directory of this source tree.

import os
from pathlib import Path
from typing import Optional, Tuple, Type, Union

import yaml
from pydantic import BaseModel, Field, field_validator
from pydantic_settings import BaseSettings, PydanticBaseSettingsSource, SettingsConfigDict


class EnumerationConfig(BaseModel):
    """Exhaustive enumeration configuration."""

    cap: int = 14  # leaves; C_13 = 742900 trees

    @field_validator("cap")
    @classmethod
    def validate_cap(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Enumeration cap must be at least 1, got {v}")
        return v


class DPConfig(BaseModel):
    """Expectation DP configuration."""

    cap: int = 20000
    entropy_cap: int = 512
    tolerance: float = 1e-9

    @field_validator("cap")
    @classmethod
    def validate_cap(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"DP cap must be at least 1, got {v}")
        return v

    @field_validator("entropy_cap")
    @classmethod
    def validate_entropy_cap(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"Entropy cap must be at least 2, got {v}")
        return v

    @field_validator("tolerance")
    @classmethod
    def validate_tolerance(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"Tolerance must be positive, got {v}")
        return v


class SamplerConfig(BaseModel):
    """Monte Carlo sampler configuration."""

    workers: int = 1
    z: float = 1.96  # normal approximation for CI95
    catalan_levels: int = 2 ** 20

    @field_validator("workers")
    @classmethod
    def validate_workers(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"Workers must be at least 1, got {v}")
        return v

    @field_validator("z")
    @classmethod
    def validate_z(cls, v: float) -> float:
        if v <= 0:
            raise ValueError(f"z-value must be positive, got {v}")
        return v

    @field_validator("catalan_levels")
    @classmethod
    def validate_catalan_levels(cls, v: int) -> int:
        if v < 2:
            raise ValueError(f"Catalan table must cover at least 2 levels, got {v}")
        return v


class LoggingConfig(BaseModel):
    """Logging configuration."""

    level: str = "WARNING"

    @field_validator("level")
    @classmethod
    def validate_level(cls, v: str) -> str:
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR"]
        if v.upper() not in valid_levels:
            raise ValueError(f"Invalid log level: {v}. Must be one of: {', '.join(valid_levels)}")
        return v.upper()


class Config(BaseSettings):
    """Main configuration."""

    enumeration: EnumerationConfig = Field(default_factory=EnumerationConfig)
    dp: DPConfig = Field(default_factory=DPConfig)
    sampler: SamplerConfig = Field(default_factory=SamplerConfig)
    logging: LoggingConfig = Field(default_factory=LoggingConfig)

    model_config = SettingsConfigDict(
        env_prefix="DAGSTAT_",
        env_nested_delimiter="__",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        # Environment beats the YAML file, which arrives as init kwargs
        return env_settings, init_settings, dotenv_settings, file_secret_settings


def find_config_file() -> Optional[Path]:
    """Find the configuration file."""
    # Check environment variable
    env_config = os.environ.get("DAGSTAT_CONFIG")
    if env_config:
        config_path = Path(env_config)
        if config_path.exists():
            return config_path

    common_locations = [
        Path("./dagstat.yaml"),
        Path("./config.yaml"),
        Path("./config/config.yaml"),
        Path.home() / ".config" / "dagstat" / "config.yaml",
    ]

    for location in common_locations:
        if location.exists():
            return location

    return None


def load_config(config_path: Optional[Union[str, Path]] = None) -> Config:
    """Load configuration from file and environment variables.

    Args:
        config_path: Explicit YAML file. If None, the common locations are searched.

    Returns:
        Validated configuration.
    """
    if config_path:
        path: Optional[Path] = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")
    else:
        path = find_config_file()

    file_config = {}
    if path:
        with open(path, "r") as f:
            loaded = yaml.safe_load(f) or {}
        # Unknown sections are ignored
        file_config = {
            section: values
            for section, values in loaded.items()
            if section in Config.model_fields and isinstance(values, dict)
        }

    return Config(**file_config)
