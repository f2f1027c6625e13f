import logging

import pytest

from schemata.utils.config import Settings, load_settings, parse_bounds
from schemata.utils.errors import DVViolation, ParseError, SchemataError
from schemata.utils.logging import LogHandler, setup_logging


class Recorder:
  def __init__(self):
    self.messages = []

  def emit(self, msg):
    self.messages.append(msg)


def test_log_handler_forwards_formatted_records():
  sink = Recorder()
  handler = setup_logging(sink)
  try:
    logging.info("suite started")
  finally:
    logging.getLogger().removeHandler(handler)
  assert isinstance(handler, LogHandler)
  assert sink.messages[-1].endswith(" - INFO - suite started")


def test_settings_from_environment(monkeypatch):
  monkeypatch.setenv("SCHEMATA_MAX_DOMAIN", "3")
  monkeypatch.setenv("SCHEMATA_GEN_HEIGHT", "two")
  settings = load_settings()
  assert settings.max_domain == 3
  assert settings.gen_height == 3


def test_bounds():
  assert parse_bounds("height=2, support=1") == {"height": 2, "support": 1}
  assert parse_bounds(None) == {}
  settings = Settings().with_bounds({"height": 2, "max_domain": 3})
  assert (settings.gen_height, settings.max_domain) == (2, 3)
  with pytest.raises(ValueError):
    parse_bounds("height")
  with pytest.raises(ValueError):
    Settings().with_bounds({"width": 1})


def test_error_reports():
  e = DVViolation("x0 and f0 share", location="line 2", witness=("x0", "f0"))
  assert str(e) == "DVViolation at line 2: x0 and f0 share"
  assert e.to_dict()["kind"] == "DVViolation"
  assert isinstance(e, SchemataError)
  assert e.exit_code == 1
  assert ParseError("bad").exit_code == 2
