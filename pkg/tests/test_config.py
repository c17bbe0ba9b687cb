import os

import pytest
from pydantic import ValidationError

from sullivan.config import DEFAULT_THREADS, RunSpec, Settings


def test_threads_default_is_the_same_everywhere(monkeypatch):
    monkeypatch.delenv("SULLIVAN_THREADS", raising=False)
    assert Settings().threads == DEFAULT_THREADS
    assert Settings.from_env().threads == DEFAULT_THREADS
    assert DEFAULT_THREADS == (os.cpu_count() or 1)


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("SULLIVAN_THREADS", "3")
    assert Settings.from_env().threads == 3


def test_run_overrides_environment(monkeypatch):
    monkeypatch.setenv("SULLIVAN_THREADS", "3")
    spec = RunSpec(command="homology", threads=1, cache_dir="/tmp/sullivan-cache")
    settings = spec.settings()
    assert settings.threads == 1
    assert settings.cache_dir == "/tmp/sullivan-cache"


def test_threads_must_be_positive():
    with pytest.raises(ValidationError):
        Settings(threads=0)
