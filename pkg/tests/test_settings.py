import pytest
from pydantic import ValidationError

from vfc_oracle.core.models import OracleConfigTag
from vfc_oracle.settings import AppConfig, HarnessConfig, OracleConfig, get_config


def test_defaults_without_config_file():
    config = get_config()
    assert config.oracle.default_config is OracleConfigTag.MAIN
    assert config.oracle.hop_bound == 2
    assert config.harness.n_max == 24
    assert config.harness.k_max == 3


def test_yaml_file_with_environment_substitution(monkeypatch, tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text("oracle:\n  default_config: fast-update\nharness:\n  trials: ${VFC_TEST_TRIALS}\n")
    monkeypatch.setenv("VFC_TEST_TRIALS", "7")
    monkeypatch.setenv("APP_CONFIG", str(path))
    get_config.cache_clear()
    config = get_config()
    assert config.oracle.default_config is OracleConfigTag.FAST_UPDATE
    assert config.harness.trials == 7


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("VFC_DEFAULT_CONFIG", "low-space")
    monkeypatch.setenv("VFC_WORK_LIMIT", "1234")
    get_config.cache_clear()
    config = get_config()
    assert config.oracle.default_config is OracleConfigTag.LOW_SPACE
    assert config.decomposition.work_limit == 1234


def test_validation():
    with pytest.raises(ValidationError):
        OracleConfig(hop_bound=3)
    with pytest.raises(ValidationError):
        HarnessConfig(trials=-1)
    assert AppConfig.model_validate({"harness": {"seed": 9}}).harness.seed == 9
