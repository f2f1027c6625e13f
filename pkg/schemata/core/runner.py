from typing import Dict, List, Optional

from PyQt6.QtCore import QThread, pyqtSignal

from schemata.core.suite import run_script, run_suite
from schemata.parsing.script import load_script


class SuiteThread(QThread):
  finished = pyqtSignal()
  error = pyqtSignal(str)
  stopped = pyqtSignal()
  result = pyqtSignal(str, bool, str)

  def __init__(
    self,
    only: Optional[List[str]] = None,
    bounds: Optional[Dict[str, int]] = None,
  ):
    super().__init__()
    self.only = only
    self.bounds = bounds
    self.results = []
    self._stop_requested = False

  def stop(self):
    self._stop_requested = True

  def run(self):
    try:
      self.results = run_suite(
        only=self.only,
        bounds=self.bounds,
        stop_event=lambda: self._stop_requested,
      )
      for r in self.results:
        self.result.emit(r.name, r.ok, r.detail)
      if self._stop_requested:
        self.stopped.emit()
      else:
        self.finished.emit()
    except Exception as e:
      self.error.emit(str(e))


class VerifyThread(QThread):
  finished = pyqtSignal()
  error = pyqtSignal(str)
  stopped = pyqtSignal()
  result = pyqtSignal(str, bool, str)

  def __init__(self, path: str):
    super().__init__()
    self.path = path
    self.results = []

  def run(self):
    try:
      self.results = run_script(load_script(self.path))
      for r in self.results:
        self.result.emit(r.name, r.ok, r.detail)
      self.finished.emit()
    except Exception as e:
      self.error.emit(str(e))
