import pytest

from schemata.core.axiomdb import get_axiom
from schemata.core.objectlevel import FirstOrderModel
from schemata.core.suite import CERT_DIR, MINIMP_TABLE
from schemata.core.syntax import Language, X, parse_metaformula as pm, parse_object_formula as po
from schemata.models import (
  CLASSICAL,
  EqRule,
  KripkeModel,
  NeighborhoodModel,
  StarTruthModel,
  TruthTableModel,
  check_certificate,
  gen_counterexample,
  gen_eval,
  gen_validates,
  height_certificate,
  kripke_validates,
  mp_preservation,
  neighborhood_validates,
  star_true,
  tt_eval,
  tt_validates,
)
from schemata.models.modal import brute_force_validates
from schemata.parsing.script import load_script, parse_script
from schemata.utils.config import Settings
from schemata.utils.errors import AxiomNotValidated, MalformedModel, TargetNotFalsified

ax = lambda label: get_axiom(label).scheme
P1 = Language((("P", 1),))


class TestTruthTables:
  def test_classical_validates_propositional_axioms(self):
    for label in ("mp", "minimp", "peirce", "contrap", "notelim", "frege"):
      assert tt_validates(CLASSICAL, ax(label)).ok, label

  def test_classical_equality(self):
    assert tt_eval(CLASSICAL, pm("x0 = x1")) == 0
    assert tt_eval(CLASSICAL, pm("x0 = x1"), {X(0): 0, X(1): 0}) == 1
    assert tt_validates(CLASSICAL, ax("EQsymm")).ok

  def test_separating_table(self):
    for label in ("mp", "notnotintro", "K", "I"):
      assert tt_validates(MINIMP_TABLE, ax(label)).ok, label
    verdict = tt_validates(MINIMP_TABLE, ax("minimp"))
    assert not verdict.ok
    assert "gives" in verdict.witness

  def test_monk_rule(self):
    monk = TruthTableModel(2, ((1, 1), (0, 1)), (1, 0), frozenset([1]), EqRule("identity", 1, 0), quant="monk")
    assert tt_eval(monk, pm("A. x0 ( x0 = x1 -> -. x0 = x0 )")) == 1
    assert tt_eval(monk, pm("A. x0 -. x0 = x0")) == 0

  @pytest.mark.parametrize(
    "kwargs",
    [
      dict(values=2, imp=((1, 1),), neg=(1, 0), designated=frozenset([1])),
      dict(values=2, imp=((1, 1), (0, 1)), neg=(1,), designated=frozenset([1])),
      dict(values=2, imp=((1, 2), (0, 1)), neg=(1, 0), designated=frozenset([1])),
      dict(values=2, imp=((1, 1), (0, 1)), neg=(1, 0), designated=frozenset()),
      dict(values=2, imp=((1, 1), (0, 1)), neg=(1, 0), designated=frozenset([1]), quant="weird"),
    ],
  )
  def test_malformed_tables(self, kwargs):
    with pytest.raises(MalformedModel):
      TruthTableModel(**kwargs)


class TestGenValuation:
  def test_quantifier_over_present_variable(self):
    assert gen_eval(po("v0 = v0")) == 1
    assert gen_eval(po("A. v0 v0 = v0")) == 1
    assert gen_eval(po("A. v1 v0 = v0")) == 1
    assert gen_eval(po("( v0 = v0 -> v1 = v1 )")) == 1

  def test_refutes_gen_but_keeps_other_axioms(self):
    assert not gen_validates(ax("gen"), max_height=2).ok
    for label in ("mp", "spec", "EQrefl", "vacGen"):
      assert gen_validates(ax(label), max_height=2).ok, label


class TestHeightArgument:
  def test_target_has_no_proof_without_mp(self):
    theorem = pm("( x0 = x1 -> x0 = x1 )")
    axioms = [(label, ax(label)) for label in ("minimp", "peirce", "EQrefl", "EQsymm", "spec", "gen")]
    report = height_certificate(theorem, axioms)
    assert report.ok
    assert {row.label for row in report.rows} == {label for label, _ in axioms}

  def test_offender_is_named(self):
    report = height_certificate(pm("( x0 = x1 -> x1 = x0 )"), [("EQsymm", ax("EQsymm"))])
    assert not report.ok
    assert report.offender == "EQsymm"


class TestModalModels:
  def reflexive(self):
    return KripkeModel(("A", "B"), frozenset({("A", "A"), ("B", "B"), ("A", "B")}))

  def test_reflexive_frame(self):
    model = self.reflexive()
    for label in ("gen", "ALLdistr", "spec", "modal4", "modalD"):
      assert kripke_validates(model, ax(label)).ok, label
    verdict = kripke_validates(model, ax("modal5"))
    assert not verdict.ok
    assert "fails at" in verdict.witness

  def test_agrees_with_pointwise_semantics(self):
    model = self.reflexive()
    for label in ("gen", "ALLdistr", "spec", "modal5", "modalB", "modal4"):
      assert kripke_validates(model, ax(label)).ok == brute_force_validates(model, ax(label)), label

  def test_neighborhoods(self):
    model = NeighborhoodModel(("w1", "w2"), {"w1": [frozenset({"w1", "w2"})], "w2": [frozenset({"w1", "w2"})]})
    assert neighborhood_validates(model, ax("gen")).ok
    assert neighborhood_validates(model, ax("ALLdistr")).ok

  def test_malformed(self):
    with pytest.raises(MalformedModel):
      KripkeModel(("A",), frozenset({("A", "B")}))
    with pytest.raises(MalformedModel):
      NeighborhoodModel(("w1",), {"w9": []})


class TestStarTruth:
  def model(self):
    return StarTruthModel(FirstOrderModel.identity(2, {"P": frozenset({(0,)})}), 0)

  def test_anchor(self):
    model = self.model()
    assert star_true(model, po("P v0", P1))
    assert not star_true(model, po("A. v0 P v0", P1))
    assert not star_true(model, po("P v1", P1))

  def test_rules(self):
    model = self.model()
    assert not gen_counterexample(model).preserved
    assert mp_preservation(model, max_height=2).preserved

  def test_anchor_in_domain(self):
    with pytest.raises(MalformedModel):
      StarTruthModel(FirstOrderModel.identity(2), 5)


CERT_FILES = sorted(CERT_DIR.glob("*.cert"))


@pytest.mark.parametrize("path", CERT_FILES, ids=lambda p: p.stem)
def test_bundled_certificates(path):
  script = load_script(path)
  for cert in script.certs:
    report = check_certificate(cert, script.axiom_set(), Settings())
    assert report.ok, report.describe()


class TestCertificateFailures:
  def test_axiom_not_validated(self):
    script = parse_script(
      """
      cert too-strong {
        validate: mp, notnotintro
        falsify: notelim
        model tt { values 2 ; imp [ 1 1 ; 0 1 ] ; neg [ 0 0 ] ; designated { 1 } ; }
      }
      """
    )
    report = check_certificate(script.certs[0], script.axiom_set(), Settings())
    assert not report.ok
    assert isinstance(report.error, AxiomNotValidated)
    assert report.error.exit_code == 1

  def test_target_not_falsified(self):
    script = parse_script(
      """
      cert too-weak {
        validate: mp
        falsify: peirce
        model tt { values 2 ; imp [ 1 1 ; 0 1 ] ; neg [ 1 0 ] ; designated { 1 } ; }
      }
      """
    )
    report = check_certificate(script.certs[0], script.axiom_set(), Settings())
    assert not report.ok
    assert isinstance(report.error, TargetNotFalsified)
    assert report.to_dict()["status"] == "fail"
