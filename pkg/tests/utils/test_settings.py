import pytest
from pydantic import ValidationError

from ctgc.settings import Settings, get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv("CTGC_THREADS", "2")
    monkeypatch.setenv("CTGC_LOG_LEVEL", "debug")
    settings = get_settings()
    assert settings.threads == 2
    assert settings.log_level == "debug"


def test_unset_threads_means_no_cap(monkeypatch):
    monkeypatch.delenv("CTGC_THREADS", raising=False)
    assert Settings(_env_file=None).threads is None


def test_thread_cap_must_be_positive(monkeypatch):
    monkeypatch.setenv("CTGC_THREADS", "0")
    with pytest.raises(ValidationError):
        Settings(_env_file=None)
