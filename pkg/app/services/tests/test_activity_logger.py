import logging

import pytest

from app.actions.configurations import CdConfig
from app.services.activity_logger import activity_logger, log_action_activity


def test_log_action_activity_attaches_context(caplog):
    caplog.set_level(logging.DEBUG, logger="app.services.activity_logger")

    log_action_activity(
        action_id="cd", title="3 undefined point(s)", level="warning", config_data={"mbar": 1}, data={"n": 3}
    )

    record, = caplog.records
    assert record.levelno == logging.WARNING
    assert record.getMessage() == "3 undefined point(s)"
    assert record.action_id == "cd"
    assert record.config_data == {"mbar": 1}
    assert record.data == {"n": 3}


def test_activity_logger_decorator(caplog):
    caplog.set_level(logging.INFO, logger="app.services.activity_logger")
    config = CdConfig(mbar=2, l_f=2)

    @activity_logger()
    def action_cd(action_config):
        return "profile"

    assert action_cd(action_config=config) == "profile"

    started, completed = caplog.records
    assert started.getMessage() == "Command 'cd' started"
    assert started.config_data["mbar"] == 2
    assert completed.getMessage() == "Command 'cd' complete"
    assert completed.data["elapsed_seconds"] >= 0


def test_activity_logger_decorator_with_positional_config(caplog):
    caplog.set_level(logging.INFO, logger="app.services.activity_logger")

    @activity_logger(on_start=False)
    def action_rate_asym(action_config):
        return action_config.l_f

    assert action_rate_asym(CdConfig(mbar=1, l_f=3)) == 3

    record, = caplog.records
    assert record.action_id == "rate_asym"
    assert record.config_data["l_f"] == 3


def test_activity_logger_decorator_on_error(caplog):
    caplog.set_level(logging.INFO, logger="app.services.activity_logger")

    @activity_logger()
    def action_paraxial(action_config):
        raise ValueError("no closed form")

    with pytest.raises(ValueError, match="no closed form"):
        action_paraxial(action_config=None)

    started, failed = caplog.records
    assert failed.levelno == logging.ERROR
    assert failed.exc_info is not None
    assert "Command 'paraxial' failed: no closed form" in failed.getMessage()
    assert failed.config_data == {}


def test_activity_logger_decorator_silenced(caplog):
    caplog.set_level(logging.DEBUG, logger="app.services.activity_logger")

    @activity_logger(on_start=False, on_completion=False, on_error=False)
    def action_verify(action_config):
        raise RuntimeError("boom")

    with pytest.raises(RuntimeError):
        action_verify(action_config=None)

    assert not caplog.records
