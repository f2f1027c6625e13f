import json

import pytest

from schemata.cli import main
from schemata.core.suite import NAT_DB, CERT_DIR

ALLREFL = """
proof allrefl using gen, EQrefl {
  concl: A. x0 x0 = x0
  1: x0 = x0 by EQrefl
  2: A. x0 x0 = x0 by gen ( f0 := x0 = x0 ) from 1
}
"""


def run(capsys, *argv):
  code = main(list(argv))
  return code, capsys.readouterr().out


class TestDecide:
  def test_true_scheme(self, capsys):
    code, out = run(capsys, "decide", "( x0 = x1 -> x1 = x0 )")
    assert code == 0
    assert out.startswith("true")

  def test_json_report(self, capsys):
    code, out = run(capsys, "decide", "-. A. x0 x0 = x1", "--dv", "x0 x1", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["verdict"] is False
    assert data["by_size"] == {"1": False, "2": True}
    assert {"status", "witness", "bounds", "location"} <= set(data)

  def test_not_pure_equality(self, capsys):
    code, _ = run(capsys, "decide", "spec")
    assert code == 2

  def test_bad_bounds(self, capsys):
    code, _ = run(capsys, "decide", "x0 = x0", "--bounds", "depth=2")
    assert code == 2


class TestSchemeCommands:
  def test_instantiate(self, capsys):
    code, out = run(capsys, "instantiate", "vacGen", "--sub", "f0 := x1 = x2")
    assert code == 0
    assert "( x1 = x2 -> A. x0 x1 = x2 )" in out

  def test_illegitimate_instance(self, capsys):
    code, _ = run(capsys, "instantiate", "vacGen", "--sub", "f0 := x0 = x0")
    assert code == 1

  def test_transform(self, capsys):
    code, out = run(capsys, "transform", "0", "1", "A. x0 x1 = x1")
    assert code == 0
    assert "A. x0 x0 = x0" in out

  def test_transform_blocked_by_dv(self, capsys):
    code, _ = run(capsys, "transform", "0", "1", "A. x0 x1 = x1", "--dv", "x0 x1")
    assert code == 1


class TestAxioms:
  def test_show_alias(self, capsys):
    code, out = run(capsys, "axioms", "show", "K")
    assert code == 0
    assert out.strip() == "simp (variant): ( f0 -> ( f1 -> f0 ) )"

  def test_system(self, capsys):
    code, out = run(capsys, "axioms", "system", "minimplcalc")
    assert code == 0
    assert out.strip() == "minimplcalc: mp, minimp"

  def test_unknown_label_as_json(self, capsys):
    code, out = run(capsys, "axioms", "show", "nosuch", "--json")
    assert code == 2
    data = json.loads(out)
    assert data["status"] == "error"
    assert data["kind"] == "UnknownLabel"


class TestVerify:
  def test_ok(self, capsys, tmp_path):
    path = tmp_path / "allrefl.fol"
    path.write_text(ALLREFL)
    code, out = run(capsys, "verify", str(path))
    assert code == 0
    assert "allrefl: OK" in out

  def test_tampered(self, capsys, tmp_path):
    path = tmp_path / "allrefl.fol"
    path.write_text(ALLREFL.replace("2: A. x0 x0 = x0", "2: A. x1 x0 = x0"))
    code, out = run(capsys, "verify", str(path), "--json")
    assert code == 1
    assert json.loads(out)["status"] == "fail"

  def test_against_a_system(self, capsys, tmp_path):
    path = tmp_path / "allrefl.fol"
    path.write_text(ALLREFL)
    code, _ = run(capsys, "verify", str(path), "--system", "propcalc")
    assert code == 2

  def test_missing_file(self, capsys, tmp_path):
    code, _ = run(capsys, "verify", str(tmp_path / "nope.fol"))
    assert code == 2


def test_mm_verify(capsys):
  code, out = run(capsys, "mm-verify", str(NAT_DB))
  assert code == 0
  assert "nn: incomplete" in out


def test_search_table(capsys):
  code, out = run(capsys, "search-table", "--values", "2", "--validate", "mp,K,I", "--falsify", "minimp")
  assert code == 0
  assert out.strip() == "none (exhaustive)"


def test_check_cert(capsys):
  code, out = run(capsys, "check-cert", str(CERT_DIR / "indep-peirce.cert"))
  assert code == 0
  assert "indep-peirce" in out


class TestSuite:
  def test_selected_check(self, capsys):
    code, out = run(capsys, "suite", "--only", "axiom-lattice")
    assert code == 0
    assert "1/1 passed" in out

  def test_unknown_check(self, capsys):
    code, _ = run(capsys, "suite", "--only", "nosuch")
    assert code == 2


@pytest.mark.parametrize("argv, expected", [([], 2), (["decide"], 2), (["--help"], 0), (["frobnicate"], 2)])
def test_argument_errors(capsys, argv, expected):
  assert main(argv) == expected
