from .config import Settings, load_settings, parse_bounds
from .logging import LogHandler, setup_logging, setup_console_logging

__all__ = [
  "Settings",
  "load_settings",
  "parse_bounds",
  "LogHandler",
  "setup_logging",
  "setup_console_logging",
]
