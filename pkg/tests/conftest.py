import pytest

from vfc_oracle.settings import AppConfig, get_config


@pytest.fixture(autouse=True)
def default_config(monkeypatch, tmp_path):
    """Every test sees built-in defaults, whatever config.yaml the working directory holds."""
    monkeypatch.setenv("APP_CONFIG", str(tmp_path / "missing.yaml"))
    for name in ("VFC_DEFAULT_CONFIG", "VFC_WORK_LIMIT"):
        monkeypatch.delenv(name, raising=False)
    get_config.cache_clear()
    yield
    get_config.cache_clear()


@pytest.fixture
def app_config() -> AppConfig:
    return get_config()
