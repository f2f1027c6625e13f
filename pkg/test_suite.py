import pytest

from schemata.core.suite import CheckResult, all_checks, run_script, run_suite, select_checks
from schemata.parsing.script import parse_script
from schemata.utils.config import Settings
from schemata.utils.errors import UsageError

SCRIPT = """
proof allrefl using gen, EQrefl {
  concl: A. x0 x0 = x0
  1: x0 = x0 by EQrefl
  2: A. x0 x0 = x0 by gen ( f0 := x0 = x0 ) from 1
}

cert classical-peirce {
  validate: mp
  falsify: peirce
  model tt { values 2 ; imp [ 1 1 ; 0 1 ] ; neg [ 1 0 ] ; designated { 1 } ; }
}
"""


class TestSelection:
  def test_default_runs_everything(self):
    assert [c.name for c in select_checks()] == [c.name for c in all_checks()]

  def test_names_and_groups(self):
    picked = {c.name for c in select_checks(["search", "axiom-lattice"])}
    assert picked == {"search-minimp-table", "search-none-2", "search-minimp-5", "axiom-lattice"}

  def test_unknown(self):
    with pytest.raises(UsageError):
      select_checks(["nosuch"])

  def test_bundled_files_become_checks(self):
    names = {c.name for c in all_checks()}
    assert {"proof-allrefl", "indep-peirce", "ALLcomm-not-supertrue"} <= names
    assert {"indep-ax-P1", "indep-ax-Q1", "indep-ax-Q2"} <= names


class TestRunning:
  def test_results_in_check_order(self):
    only = ["axiom-lattice", "star-rules", "search-minimp-table"]
    results = run_suite(only=only, bounds={"height": 2}, settings=Settings())
    assert [r.name for r in results] == ["search-minimp-table", "star-rules", "axiom-lattice"]
    assert all(r.ok for r in results), [r.describe() for r in results]

  def test_workers_keep_the_order(self):
    only = ["axiom-lattice", "search-minimp-table", "mm-nat"]
    inline = run_suite(only=only, settings=Settings())
    pooled = run_suite(only=only, jobs=3, settings=Settings())
    assert [r.name for r in pooled] == [r.name for r in inline]
    assert all(r.ok for r in pooled)

  def test_tampering_covers_every_bundled_proof(self):
    (result,) = run_suite(only=["kernel-tamper"], settings=Settings())
    assert result.ok, result.detail
    assert result.detail.endswith("across 4 proofs")

  def test_stop_request(self):
    assert run_suite(only=["axiom-lattice"], settings=Settings(), stop_event=lambda: True) == []

  def test_bad_bound(self):
    with pytest.raises(ValueError):
      run_suite(only=["axiom-lattice"], bounds={"depth": 1}, settings=Settings())


def test_run_script_failure_is_reported():
  results = run_script(parse_script(SCRIPT), Settings())
  assert [r.name for r in results] == ["allrefl", "classical-peirce"]
  assert results[0].ok
  assert not results[1].ok
  assert "TargetNotFalsified" in results[1].detail


def test_check_result_rendering():
  result = CheckResult("axiom-lattice", True, "every edge consistent", {"depth": 6})
  assert result.describe().startswith("PASS axiom-lattice")
  assert result.describe().endswith("[depth=6]")
  assert result.to_dict()["status"] == "ok"


def test_five_valued_search_finds_a_table():
  (result,) = run_suite(only=["search-minimp-5"], settings=Settings())
  assert result.ok, result.detail
  assert result.bounds["evaluations"] <= Settings().search_budget
