import pytest

from schemata.core.proofkernel import verify_proof
from schemata.core.suite import fixture_proofs
from schemata.core.terms import App, Lam, Leaf
from schemata.parsing.script import parse_script
from schemata.utils.errors import TermError


def proof_of(using, concl, term, hyps=""):
  text = f"proof t using {using} {{\n{hyps}  concl: {concl}\n  term: {term}\n}}\n"
  return parse_script(text).proofs[0]


def assert_verifies(block):
  report = verify_proof(block.proof, block.axioms)
  assert report.ok, report.describe()


def test_rule_application():
  block = proof_of("gen, EQrefl", "A. x0 x0 = x0", "gen EQrefl")
  assert [line.justification.label for line in block.proof.lines] == ["EQrefl", "gen"]
  assert_verifies(block)


def test_hypothesis_names_are_terms():
  block = proof_of("gen", "A. x2 f0", "gen h1", hyps="  hyp h1: f0\n")
  assert_verifies(block)


@pytest.mark.parametrize("using", ["mp, simp, frege", "minimplcalc"])
def test_identity_by_abstraction(using):
  block = proof_of(using, "( f0 -> f0 )", "lam a => a")
  assert_verifies(block)


def test_modus_ponens_through_lambda():
  block = proof_of("mp, simp, frege", "( f0 -> ( ( f0 -> f1 ) -> f1 ) )", "lam a => lam b => b a")
  assert_verifies(block)


def test_pins_fix_variables():
  block = proof_of("EQsymm", "( x3 = x1 -> x1 = x3 )", "EQsymm { x0 := x3 }")
  assert_verifies(block)


def test_bundled_fixtures_elaborate_and_verify():
  blocks = fixture_proofs()
  assert {b.name for b in blocks} >= {"allrefl", "allrefl_geneq", "modalD_modk", "allsymm"}
  for block in blocks:
    assert_verifies(block)


class TestErrors:
  def test_abstraction_needs_combinators(self):
    with pytest.raises(TermError):
      proof_of("mp, EQrefl", "( x0 = x0 -> x0 = x0 )", "lam a => a")

  def test_unknown_name(self):
    with pytest.raises(TermError):
      proof_of("EQrefl", "x0 = x0", "EQtrans")

  def test_ill_typed_application(self):
    with pytest.raises(TermError):
      proof_of("mp, EQrefl", "x0 = x0", "EQrefl EQrefl")

  def test_rule_premise_under_lambda(self):
    with pytest.raises(TermError):
      proof_of("mp, simp, frege, gen", "( f0 -> A. x0 f0 )", "lam a => gen a")

  def test_rule_needs_its_premises(self):
    with pytest.raises(TermError):
      proof_of("gen, EQrefl", "A. x0 x0 = x0", "gen")


def test_term_rendering():
  term = App(Lam("a", Leaf("a")), Leaf("EQrefl"))
  assert str(term) == "( lam a => a ) EQrefl"
