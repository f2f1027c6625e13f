import logging
import sys

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%H:%M:%S"


class LogHandler(logging.Handler):
  """Forwards formatted records to anything with an ``emit(str)`` method.

  The GUI hands in its ``pyqtSignal(str)``; tests hand in a plain recorder.
  """

  def __init__(self, signal):
    super().__init__()
    self.signal = signal

  def emit(self, record):
    msg = self.format(record)
    self.signal.emit(msg)


def _formatter() -> logging.Formatter:
  return logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)


def setup_logging(log_signal, level: int = logging.INFO) -> LogHandler:
  handler = LogHandler(log_signal)
  handler.setFormatter(_formatter())
  logging.getLogger().addHandler(handler)
  logging.getLogger().setLevel(level)
  return handler


def setup_console_logging(level: str = "INFO") -> logging.Handler:
  """Log to stderr with the same format the GUI console uses."""
  root = logging.getLogger()
  for existing in list(root.handlers):
    if getattr(existing, "_schemata_console", False):
      root.removeHandler(existing)
  handler = logging.StreamHandler(sys.stderr)
  handler.setFormatter(_formatter())
  handler._schemata_console = True
  root.addHandler(handler)
  root.setLevel(getattr(logging, str(level).upper(), logging.INFO))
  return handler
