import pytest

from schemata.core.proofkernel import (
  ByAxiom,
  TransformedAxiomSet,
  proof_dv,
  render_proof,
  subst_proof,
  transform_proof,
  verify_proof,
)
from schemata.core.schemes import Substitution
from schemata.core.syntax import X, parse_metaformula as pm
from schemata.core.transforms import TransformSpec
from schemata.parsing.script import parse_script
from schemata.utils.errors import (
  DVViolation,
  IllegitimateTransform,
  LineMismatch,
  PremiseOutOfOrder,
  UnknownAxiom,
  WrongConclusion,
)

ALLREFL = """
proof allrefl using gen, EQrefl {
  concl: A. x0 x0 = x0
  1: x0 = x0 by EQrefl
  2: A. x0 x0 = x0 by gen ( f0 := x0 = x0 ) from 1
}
"""

ALLSYMM = """
proof allsymm using gen, EQsymm {
  concl: A. x0 ( x0 = x1 -> x1 = x0 )
  1: ( x0 = x1 -> x1 = x0 ) by EQsymm
  2: A. x0 ( x0 = x1 -> x1 = x0 ) by gen ( f0 := ( x0 = x1 -> x1 = x0 ) ) from 1
}
"""


def block(text):
  script = parse_script(text)
  assert len(script.proofs) == 1
  return script.proofs[0]


def check(text):
  b = block(text)
  return verify_proof(b.proof, b.axioms)


def test_two_line_proof():
  report = check(ALLREFL)
  assert report.ok
  assert report.describe() == "allrefl: OK"


def test_tampered_line():
  report = check(ALLREFL.replace("2: A. x0 x0 = x0", "2: A. x1 x0 = x0"))
  assert not report.ok
  assert report.line == 2
  assert isinstance(report.error, LineMismatch)
  assert report.to_dict()["kind"] == "LineMismatch"


def test_unknown_axiom():
  report = check(ALLREFL.replace("1: x0 = x0 by EQrefl", "1: x0 = x0 by EQsymm"))
  assert isinstance(report.error, UnknownAxiom)
  assert report.error.exit_code == 2


def test_premise_must_be_earlier():
  report = check(ALLREFL.replace("from 1", "from 2"))
  assert isinstance(report.error, PremiseOutOfOrder)


def test_wrong_conclusion():
  text = """
  proof short using EQrefl {
    concl: A. x0 x0 = x0
    1: x0 = x0 by EQrefl
  }
  """
  report = check(text)
  assert isinstance(report.error, WrongConclusion)


def test_illegitimate_axiom_instance():
  text = """
  proof bad using vacGen {
    concl: ( x0 = x0 -> A. x0 x0 = x0 )
    1: ( x0 = x0 -> A. x0 x0 = x0 ) by vacGen ( f0 := x0 = x0 )
  }
  """
  report = check(text)
  assert isinstance(report.error, DVViolation)


class TestDVBookkeeping:
  TEXT = """
  proof vac using vacGen {
    DV
    concl: ( x1 = x1 -> A. x0 x1 = x1 )
    1: ( x1 = x1 -> A. x0 x1 = x1 ) by vacGen ( f0 := x1 = x1 )
  }
  """

  def test_missing_dv_is_reported(self):
    report = check(self.TEXT.replace("DV", ""))
    assert isinstance(report.error, DVViolation)
    assert report.line == 1

  def test_declared_dv_suffices(self):
    assert check(self.TEXT.replace("DV", "dv: x0 x1")).ok

  def test_dummies_are_distinct_from_everything(self):
    b = block(ALLREFL)
    assert b.proof.dummies() == frozenset()
    assert proof_dv(b.proof) == frozenset()


def test_hypotheses():
  text = """
  proof g {
    hyp h1: f0
    concl: A. x3 f0
    1: f0 hyp h1
    2: A. x3 f0 by gen ( x0 := x3 ) from 1
  }
  """
  assert check(text).ok
  report = check(text.replace("1: f0 hyp h1", "1: f0 hyp h2"))
  assert isinstance(report.error, LineMismatch)


def test_search_fills_unjustified_lines():
  text = ALLREFL.replace("by EQrefl", "by ?").replace("by gen ( f0 := x0 = x0 ) from 1", "by ?")
  b = block(text)
  assert all(isinstance(line.justification, ByAxiom) for line in b.proof.lines)
  assert [line.justification.label for line in b.proof.lines] == ["EQrefl", "gen"]
  assert verify_proof(b.proof, b.axioms).ok


def test_substituted_proof_still_verifies():
  b = block(ALLREFL)
  moved = subst_proof(Substitution({X(0): X(4)}), b.proof)
  assert moved.target.conclusion == pm("A. x4 x4 = x4")
  assert verify_proof(moved, b.axioms).ok


DETOUR = """
proof detour using mp, simp, EQrefl {
  concl: x3 = x3
  1: x3 = x3 by EQrefl ( x0 := x3 )
  2: ( x3 = x3 -> ( x5 = x5 -> x3 = x3 ) ) by simp ( f0 := x3 = x3 ; f1 := x5 = x5 )
  3: ( x5 = x5 -> x3 = x3 ) by mp ( f0 := x3 = x3 ; f1 := ( x5 = x5 -> x3 = x3 ) ) from 1, 2
  4: x5 = x5 by EQrefl ( x0 := x5 )
  5: x3 = x3 by mp ( f0 := x5 = x5 ; f1 := x3 = x3 ) from 4, 3
}
"""


@pytest.mark.parametrize(
  "sigma, dummy",
  [
    # N counts the moved variable and its image
    (Substitution({X(3): X(6)}), X(12)),
    # and is raised to the conclusion's largest index
    (Substitution({X(0): X(1)}), X(9)),
  ],
)
def test_dummies_are_renamed_past_n(sigma, dummy):
  b = block(DETOUR)
  assert verify_proof(b.proof, b.axioms).ok
  assert b.proof.dummies() == frozenset({X(5)})
  moved = subst_proof(sigma, b.proof)
  assert moved.dummies() == frozenset({dummy})
  assert verify_proof(moved, b.axioms).ok


def test_transformed_proof_verifies_against_transformed_axioms():
  b = block(ALLSYMM)
  moved = transform_proof(0, 1, b.proof)
  assert moved.target.conclusion == pm("A. x0 ( x0 = x0 -> x0 = x0 )")
  assert verify_proof(moved, TransformedAxiomSet(b.axioms, TransformSpec(0, 1))).ok


def test_transform_refuses_dv_pairs():
  b = block(TestDVBookkeeping.TEXT.replace("DV", "dv: x0 x1"))
  with pytest.raises(IllegitimateTransform):
    transform_proof(0, 1, b.proof)


def test_render_proof_reparses():
  b = block(ALLREFL)
  again = block(render_proof(b.proof, b.using))
  assert again.proof.lines == b.proof.lines
  assert verify_proof(again.proof, again.axioms).ok
