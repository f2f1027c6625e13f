import logging
from pathlib import Path

from PyQt6.QtWidgets import (
  QMainWindow,
  QWidget,
  QVBoxLayout,
  QHBoxLayout,
  QPushButton,
  QLineEdit,
  QLabel,
  QFileDialog,
  QProgressBar,
  QTextEdit,
  QListWidget,
  QListWidgetItem,
  QTabWidget,
  QSizePolicy,
  QSplitter,
)
from PyQt6.QtCore import Qt, pyqtSignal
from PyQt6.QtGui import QColor

from schemata.core.runner import SuiteThread, VerifyThread
from schemata.core.suite import all_checks
from schemata.utils.logging import setup_logging

PASS_COLOR = QColor("#2e7d32")
FAIL_COLOR = QColor("#c62828")


class SchemataGUI(QMainWindow):
  log_signal = pyqtSignal(str)

  def __init__(self):
    super().__init__()
    self.setWindowTitle("Schemata")
    self.setMinimumSize(800, 600)
    self.setSizePolicy(QSizePolicy.Policy.Expanding, QSizePolicy.Policy.Expanding)

    self.suite_thread = None
    self.verify_thread = None
    self.check_items = {}

    main_widget = QWidget()
    self.setCentralWidget(main_widget)
    layout = QVBoxLayout(main_widget)
    layout.setContentsMargins(0, 0, 0, 0)

    self.main_splitter = QSplitter(Qt.Orientation.Vertical)
    self.main_splitter.setChildrenCollapsible(False)
    layout.addWidget(self.main_splitter)

    # Upper section with tabs and progress bar
    upper_widget = QWidget()
    upper_widget.setMinimumHeight(350)
    upper_layout = QVBoxLayout(upper_widget)
    upper_layout.setContentsMargins(4, 4, 4, 4)

    self.tabs = QTabWidget()
    upper_layout.addWidget(self.tabs)
    self.create_suite_tab()
    self.create_verify_tab()

    self.progress_bar = QProgressBar()
    self.progress_bar.setVisible(False)
    upper_layout.addWidget(self.progress_bar)

    self.main_splitter.addWidget(upper_widget)

    # Log output
    log_widget = QWidget()
    log_widget.setMinimumHeight(100)
    log_layout = QVBoxLayout(log_widget)
    log_layout.setContentsMargins(4, 4, 4, 4)

    console_header = QHBoxLayout()
    console_label = QLabel("Console Output:")
    console_label.setSizePolicy(QSizePolicy.Policy.Expanding, QSizePolicy.Policy.Fixed)
    console_header.addWidget(console_label)

    clear_console_button = QPushButton("Clear Console")
    clear_console_button.clicked.connect(lambda: self.log_output.clear())
    console_header.addWidget(clear_console_button)
    log_layout.addLayout(console_header)

    self.log_output = QTextEdit()
    self.log_output.setReadOnly(True)
    self.log_output.setMinimumHeight(50)
    log_layout.addWidget(self.log_output)

    self.main_splitter.addWidget(log_widget)
    self.main_splitter.setSizes([750, 250])

    setup_logging(self.log_signal)
    self.log_signal.connect(self.update_log)

  def create_suite_tab(self):
    suite_tab = QWidget()
    suite_layout = QVBoxLayout(suite_tab)
    suite_layout.setContentsMargins(8, 8, 8, 8)

    self.check_list = QListWidget()
    for check in all_checks():
      item = QListWidgetItem(f"{check.name}  ({check.group})")
      item.setFlags(item.flags() | Qt.ItemFlag.ItemIsUserCheckable)
      item.setCheckState(Qt.CheckState.Checked)
      item.setData(Qt.ItemDataRole.UserRole, check.name)
      self.check_items[check.name] = item
      self.check_list.addItem(item)
    suite_layout.addWidget(self.check_list)

    self.run_stop_button = QPushButton("Run Suite")
    self.run_stop_button.clicked.connect(self.handle_run_stop)
    suite_layout.addWidget(self.run_stop_button)

    self.tabs.addTab(suite_tab, "Suite")

  def create_verify_tab(self):
    verify_tab = QWidget()
    verify_layout = QVBoxLayout(verify_tab)
    verify_layout.setContentsMargins(8, 8, 8, 8)

    path_row = QHBoxLayout()
    self.script_path = QLineEdit()
    self.script_path.setPlaceholderText("Script File (.fol, .cert)")
    browse_button = QPushButton("Browse")
    browse_button.setFixedWidth(100)
    browse_button.clicked.connect(self.select_script_file)
    path_row.addWidget(self.script_path)
    path_row.addWidget(browse_button)
    verify_layout.addLayout(path_row)

    self.verify_button = QPushButton("Verify")
    self.verify_button.clicked.connect(self.start_verify)
    verify_layout.addWidget(self.verify_button)

    self.verify_results = QListWidget()
    verify_layout.addWidget(self.verify_results)

    self.tabs.addTab(verify_tab, "Verify")

  def update_log(self, message):
    self.log_output.append(message)

  def select_script_file(self):
    file_name, _ = QFileDialog.getOpenFileName(
      self, "Open Script", "", "Scripts (*.fol *.cert);;All Files (*.*)"
    )
    if file_name:
      try:
        rel_path = str(Path(file_name).relative_to(Path.cwd()))
        self.script_path.setText(rel_path)
      except ValueError:
        self.script_path.setText(file_name)

  def selected_checks(self):
    return [
      self.check_list.item(i).data(Qt.ItemDataRole.UserRole)
      for i in range(self.check_list.count())
      if self.check_list.item(i).checkState() == Qt.CheckState.Checked
    ]

  def handle_run_stop(self):
    if self.suite_thread and self.suite_thread.isRunning():
      self.suite_thread.stop()
      self.run_stop_button.setEnabled(False)
      self.run_stop_button.setText("Stopping...")
    else:
      self.start_suite()

  def start_suite(self):
    only = self.selected_checks()
    if not only:
      logging.error("Select at least one check")
      return
    for item in self.check_items.values():
      item.setForeground(self.check_list.palette().text().color())

    self.run_stop_button.setText("Stop")
    self.progress_bar.setVisible(True)
    self.progress_bar.setRange(0, 0)

    self.suite_thread = SuiteThread(only=only)
    self.suite_thread.result.connect(self.show_check_result)
    self.suite_thread.finished.connect(self.suite_finished)
    self.suite_thread.stopped.connect(self.suite_stopped)
    self.suite_thread.error.connect(self.suite_error)
    self.suite_thread.start()

  def show_check_result(self, name, ok, detail):
    item = self.check_items.get(name)
    if item is None:
      return
    item.setForeground(PASS_COLOR if ok else FAIL_COLOR)
    item.setToolTip(detail)

  def _suite_done(self):
    self.progress_bar.setVisible(False)
    self.run_stop_button.setEnabled(True)
    self.run_stop_button.setText("Run Suite")

  def suite_stopped(self):
    self._suite_done()
    logging.info("Suite stopped by user")

  def suite_finished(self):
    self._suite_done()
    results = self.suite_thread.results
    passed = sum(r.ok for r in results)
    logging.info(f"Suite completed: {passed}/{len(results)} passed")

  def suite_error(self, error_message):
    self._suite_done()
    logging.error(f"Suite failed: {error_message}")

  def start_verify(self):
    path = self.script_path.text()
    if not path:
      logging.error("Please select a script file")
      return
    if not Path(path).is_file():
      logging.error(f"No such file: {path}")
      return

    self.verify_results.clear()
    self.verify_button.setEnabled(False)
    self.progress_bar.setVisible(True)
    self.progress_bar.setRange(0, 0)

    self.verify_thread = VerifyThread(str(Path(path).absolute()))
    self.verify_thread.result.connect(self.show_verify_result)
    self.verify_thread.finished.connect(self.verify_finished)
    self.verify_thread.error.connect(self.verify_error)
    self.verify_thread.start()

  def show_verify_result(self, name, ok, detail):
    item = QListWidgetItem(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    item.setForeground(PASS_COLOR if ok else FAIL_COLOR)
    self.verify_results.addItem(item)

  def verify_finished(self):
    self.progress_bar.setVisible(False)
    self.verify_button.setEnabled(True)
    logging.info("Verification completed")

  def verify_error(self, error_message):
    self.progress_bar.setVisible(False)
    self.verify_button.setEnabled(True)
    logging.error(f"Verification failed: {error_message}")
