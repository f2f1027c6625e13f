import pytest

from schemata.core.proofkernel import verify_proof
from schemata.core.syntax import F, Language, Pred, V, X, parse_metaformula as pm
from schemata.parsing.script import load_script, parse_script
from schemata.utils.errors import ParseError, UnknownLabel, UsageError

FILE_AXIOM = """
axiom refl2 {
  concl: x1 = x1
}

proof p using refl2, gen {
  concl: A. x0 x1 = x1
  1: x1 = x1 by refl2
  2: A. x0 x1 = x1 by gen ( f0 := x1 = x1 ) from 1
}
"""


def test_file_axioms_are_usable_after_declaration():
  script = parse_script(FILE_AXIOM)
  assert script.axioms["refl2"].conclusion == pm("x1 = x1")
  block = script.proofs[0]
  assert block.using == ["refl2", "gen"]
  assert verify_proof(block.proof, block.axioms).ok


def test_forward_references_are_rejected():
  text = """
  proof p using refl2 {
    concl: x1 = x1
    1: x1 = x1 by refl2
  }
  axiom refl2 { concl: x1 = x1 }
  """
  with pytest.raises(ParseError) as info:
    parse_script(text, "fwd.fol")
  assert info.value.location.startswith("fwd.fol:2:")


def test_names_are_declared_once():
  with pytest.raises(ParseError):
    parse_script("scheme a { concl: f0 }\naxiom a { concl: f1 }")


def test_syntax_errors_carry_line_and_column():
  with pytest.raises(ParseError) as info:
    parse_script("scheme s {\n  concl: ( x0 = x1 -> )\n}", "bad.fol")
  assert info.value.location.startswith("bad.fol:2:")
  assert info.value.exit_code == 2


def test_language_comes_first():
  script = parse_script("language { P 1 ; Q 2 }\nscheme s { concl: ( P x0 -> Q x0 x1 ) }")
  assert script.language == Language((("P", 1), ("Q", 2)))
  with pytest.raises(ParseError):
    parse_script("scheme s { concl: f0 }\nlanguage { P 1 }")


def test_unknown_labels():
  with pytest.raises(UnknownLabel) as info:
    parse_script("proof p using nosuch { concl: f0 }")
  assert info.value.location is not None


def test_scheme_entries():
  script = parse_script("scheme s {\n  dv: x0 f0\n  hyp h1: f0\n  concl: A. x0 f0\n}")
  s = script.schemes["s"]
  assert s.hypotheses == (pm("f0"),)
  assert len(s.dv) == 1


def test_two_conclusions():
  with pytest.raises(ParseError):
    parse_script("scheme s { concl: f0\n concl: f1 }")


def test_line_numbers_must_count_up():
  with pytest.raises(ParseError):
    parse_script(FILE_AXIOM.replace("2: A. x0", "3: A. x0"))


def test_lines_and_term_do_not_mix():
  text = FILE_AXIOM.replace("from 1\n", "from 1\n  term: refl2\n")
  with pytest.raises(ParseError):
    parse_script(text)


def test_missing_file(tmp_path):
  with pytest.raises(UsageError):
    load_script(tmp_path / "missing.fol")


def test_cert_needs_a_model():
  with pytest.raises(ParseError):
    parse_script("cert c {\n  validate: mp\n  falsify: peirce\n}")


def test_witness_entries_end_at_the_semicolon():
  text = """
  language { P 1 }
  cert c {
    validate: mp
    falsify: gen
    model gen { }
    witness {
      f0 := P v0 ;
      x0 := v0 ;
    }
  }
  """
  witness = parse_script(text).certs[0].witness
  assert witness.fm[F(0).var] == Pred("P", (V(0),))
  assert witness.vr == {X(0): V(0)}
  with pytest.raises(ParseError):
    parse_script(text.replace("P v0 ;", "P v0"))
