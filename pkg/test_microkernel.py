import pytest

from schemata.core.microkernel import derivable, mm_load, mm_parse, mm_verify, variable_free_heads
from schemata.core.suite import NAT_DB
from schemata.utils.errors import (
  DisjointViolation,
  DuplicateLabel,
  FinalStackNotSingleton,
  LexError,
  MMError,
  MMWrongConclusion,
  ScopeError,
  StackUnderflow,
)

HEADER = """
$c T |- $.
$v a b $.
ta $f T a $.
tb $f T b $.
"""


def verify(body: str):
  reports = mm_verify(mm_parse(HEADER + body))
  assert len(reports) == 1
  return reports[0]


class TestNaturalNumbers:
  def test_statuses(self):
    reports = mm_verify(mm_load(NAT_DB))
    assert {r.label: r.status for r in reports} == {"n1": "proved", "n2": "proved", "nn": "incomplete"}
    assert all(r.ok for r in reports)

  def test_no_variable_reaches_nat(self):
    db = mm_load(NAT_DB)
    assert ("Nat", "0", "'", "'") in derivable(db, 4)
    assert variable_free_heads(db, "Nat", 6) == []
    assert ("Term", "n", "'") in derivable(db, 1)


class TestProofChecking:
  def test_proved(self):
    report = verify("$d a b $.\nax $a |- a b $.\nth $p |- a b $= ta tb ax $.\n")
    assert report.status == "proved"
    assert report.describe() == "th: proved (|- a b)"

  def test_same_variable_for_a_dv_pair(self):
    report = verify("${ $d a b $. ax $a |- a b $. $}\nth $p |- a a $= ta ta ax $.\n")
    assert isinstance(report.error, DisjointViolation)
    assert report.to_dict()["status"] == "error"

  def test_dv_must_be_active_in_the_proof(self):
    report = verify("${ $d a b $. ax $a |- a b $. $}\nth $p |- a b $= ta tb ax $.\n")
    assert isinstance(report.error, DisjointViolation)

  @pytest.mark.parametrize(
    "proof, error",
    [
      ("th $p |- a b $= ta ax $.", StackUnderflow),
      ("th $p |- a b $= ta tb $.", FinalStackNotSingleton),
      ("th $p |- b a $= ta tb ax $.", MMWrongConclusion),
      ("th $p |- a b $= ta tb th $.", MMError),
    ],
  )
  def test_stack_errors(self, proof, error):
    report = verify("ax $a |- a b $.\n" + proof + "\n")
    assert isinstance(report.error, error)
    assert not report.ok


class TestParsing:
  @pytest.mark.parametrize(
    "body, error",
    [
      ("ta $f T a $.", DuplicateLabel),
      ("x $a |- a $. x $a |- b $.", DuplicateLabel),
      ("$[ foo.mm $]", LexError),
      ("$}", ScopeError),
      ("${ ax $a |- a $.", ScopeError),
      ("ax $a |- c $.", ScopeError),
      ("ax $a a $.", ScopeError),
    ],
  )
  def test_rejected(self, body, error):
    with pytest.raises(error) as info:
      mm_parse(HEADER + body)
    assert info.value.exit_code == 2

  def test_compressed_proofs(self):
    with pytest.raises(MMError):
      mm_parse(HEADER + "ax $a |- a $.\nth $p |- a $= ( ax ) A $.")

  def test_comments_are_kept(self):
    db = mm_parse(HEADER + "$( a note $)")
    assert db.comments == ["a note"]
