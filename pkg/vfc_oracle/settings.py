"""Application settings module using Pydantic and EnvYAML.

Loads configuration from YAML file with environment variables support.
"""

import os
from functools import cache
from pathlib import Path

from envyaml import EnvYAML
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from vfc_oracle.core.models import OracleConfigTag


class DecompositionConfig(BaseModel):
    """Decomposition builder settings."""

    work_limit: int = Field(default=5_000_000, gt=0, description="Separator-test work units before the builder aborts")
    certify_work_limit: int = Field(
        default=2_000_000, gt=0, description="Separator-test work units for the unbreakability certifier"
    )
    exhaustive_limit: int = Field(
        default=200_000, gt=0, description="Candidate separators above which the seeded witness search takes over"
    )


class OracleConfig(BaseModel):
    """Oracle construction settings."""

    default_config: OracleConfigTag = Field(default=OracleConfigTag.MAIN, description="Time/space tradeoff")
    hop_bound: int = Field(default=2, ge=2, le=2, description="Hop bound of the tree shortcutting")
    sparsify: bool = Field(default=True, description="Sparsify the input graph before decomposing")
    memo_limit: int = Field(default=0, ge=0, description="Maximum memo entries per table (0 = unbounded)")


class HarnessConfig(BaseModel):
    """Randomized differential harness settings."""

    seed: int = Field(default=0, description="Base random seed")
    n_max: int = Field(default=24, gt=0, description="Maximum vertex count of generated graphs")
    k_max: int = Field(default=3, gt=0, description="Maximum failure budget")
    trials: int = Field(default=50, ge=0, description="Number of generated graphs")
    failure_sets_per_graph: int = Field(default=5, gt=0, description="Failure sets tried per graph")
    edge_factor: float = Field(default=2.0, gt=0.0, le=5.0, description="Edge count bound as a multiple of n")
    certify_n_max: int = Field(
        default=40, ge=0, description="Largest generated graph whose decomposition is certified unbreakable"
    )


class LoggingConfig(BaseModel):
    """Logging settings."""

    level: str = Field(default="INFO", description="Root log level")
    format: str = Field(
        default="%(asctime)s - %(name)s - %(lineno)d - %(levelname)s - %(message)s", description="Log record format"
    )
    rich: bool = Field(default=True, description="Route log records through rich")


class AppConfig(BaseModel):
    """Main application configuration."""

    decomposition: DecompositionConfig = Field(default_factory=DecompositionConfig, description="Builder settings")
    oracle: OracleConfig = Field(default_factory=OracleConfig, description="Oracle settings")
    harness: HarnessConfig = Field(default_factory=HarnessConfig, description="Harness settings")
    logging: LoggingConfig = Field(default_factory=LoggingConfig, description="Logging settings")


class OracleSettings(BaseSettings):
    """Environment overrides, e.g. ``VFC_DEFAULT_CONFIG=low-space``."""

    model_config = SettingsConfigDict(env_prefix="VFC_")

    default_config: OracleConfigTag | None = None
    work_limit: int | None = None


@cache
def get_config() -> AppConfig:
    app_config_env: str = os.environ.get("APP_CONFIG", "config.yaml")

    # If path has no directory part, assume it's in current working directory
    if os.path.basename(app_config_env) == app_config_env:
        app_config_path = Path.cwd() / app_config_env
    else:
        app_config_path = Path(app_config_env)

    if app_config_path.exists():
        config = AppConfig.model_validate(dict(EnvYAML(str(app_config_path))))
    else:
        config = AppConfig()

    overrides = OracleSettings()
    if overrides.default_config is not None:
        config.oracle.default_config = overrides.default_config
    if overrides.work_limit is not None:
        config.decomposition.work_limit = overrides.work_limit
    return config
