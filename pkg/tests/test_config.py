import os

import pytest

import config as config_module
from config import _env_number, _threads, config
from hankel_lab import main
from services.exceptions import ConfigurationError


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("HANKEL_SPECTRA_THREADS", "3")
    assert _threads([]) == 3
    monkeypatch.setenv("HANKEL_SPECTRA_THREADS", "0")
    assert _threads([]) == 1
    monkeypatch.setenv("HANKEL_SPECTRA_THREADS", " ")
    assert _threads([]) == (os.cpu_count() or 1)


def test_malformed_threads_is_recorded(monkeypatch):
    monkeypatch.setenv("HANKEL_SPECTRA_THREADS", "abc")
    errors = []
    assert _threads(errors) == (os.cpu_count() or 1)
    assert errors == ["HANKEL_SPECTRA_THREADS='abc' is not a valid int"]


def test_malformed_float(monkeypatch):
    monkeypatch.setenv("HANKEL_QUAD_TOL", "tight")
    errors = []
    assert _env_number("HANKEL_QUAD_TOL", 1e-12, float, errors) == 1e-12
    assert "HANKEL_QUAD_TOL" in errors[0]


def test_validate(monkeypatch):
    monkeypatch.setattr(config_module, "ENV_ERRORS", [])
    config.validate()
    monkeypatch.setattr(config_module, "ENV_ERRORS", ["HANKEL_SPECTRA_THREADS='abc' is not a valid int"])
    with pytest.raises(ConfigurationError, match="HANKEL_SPECTRA_THREADS"):
        config.validate()


def test_cli_exits_2_on_malformed_environment(monkeypatch, capsys):
    monkeypatch.setattr(config_module, "ENV_ERRORS", ["HANKEL_SPECTRA_THREADS='abc' is not a valid int"])
    assert main(["constants", "--d", "2"]) == 2
    assert capsys.readouterr().out == ""
