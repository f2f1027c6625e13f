import pytest

from schemata.core.axiomdb import get_axiom
from schemata.core.objectlevel import (
  FirstOrderModel,
  FormulaWithHypotheses,
  ObjectSubstitution,
  decide_eq_truth,
  embed_object_like,
  eq_truth_by_size,
  fo_eval,
  fo_valid,
  fo_validates_scheme,
  identification_patterns,
  object_instantiate,
  set_partitions,
)
from schemata.core.schemes import Scheme, dv_from_groups
from schemata.core.suite import EQ_REGRESSION, oracle_truth, regression_scheme
from schemata.core.syntax import Language, V, Variable, X, parse_metaformula as pm, parse_object_formula as po
from schemata.utils.errors import (
  IllegitimateSubstitution,
  MalformedModel,
  UnassignedVariable,
  UnsupportedScheme,
)

f0 = Variable("f", 0)
P1 = Language((("P", 1),))


class TestObjectInstances:
  def test_instantiate_vacgen(self):
    tau = ObjectSubstitution({X(0): V(0)}, {f0: po("v1 = v2")})
    inst = object_instantiate(tau, get_axiom("vacGen").scheme)
    assert inst == FormulaWithHypotheses((), po("( v1 = v2 -> A. v0 v1 = v2 )"))

  def test_dv_respected(self):
    tau = ObjectSubstitution({X(0): V(0)}, {f0: po("v0 = v0")})
    with pytest.raises(IllegitimateSubstitution):
      object_instantiate(tau, get_axiom("vacGen").scheme)

  def test_every_metavariable_needs_an_image(self):
    tau = ObjectSubstitution({X(0): V(0)}, {})
    with pytest.raises(UnassignedVariable):
      object_instantiate(tau, get_axiom("spec").scheme)

  def test_images_must_be_object_level(self):
    with pytest.raises(TypeError):
      ObjectSubstitution({X(0): X(1)}, {})
    with pytest.raises(TypeError):
      ObjectSubstitution({}, {f0: pm("x0 = x0")})

  def test_embedding_makes_everything_distinct(self):
    s = embed_object_like(po("A. v0 v0 = v1"))
    assert s == Scheme((), pm("A. x0 x0 = x1"), dv_from_groups([[X(0), X(1)]]))


class TestModels:
  def test_malformed(self):
    with pytest.raises(MalformedModel):
      FirstOrderModel(0, frozenset())
    with pytest.raises(MalformedModel):
      FirstOrderModel(2, frozenset({(0, 2)}))
    with pytest.raises(MalformedModel):
      FirstOrderModel(2, frozenset(), quant_domain=frozenset())

  def test_quantifier_domain(self):
    m = FirstOrderModel(2, frozenset({(0, 0), (1, 1)}), {"P": frozenset({(0,)})}, frozenset({0}))
    assert fo_eval(m, po("A. v0 P v0", P1), {})
    assert not fo_eval(m, po("P v0", P1), {V(0): 1})

  def test_fo_valid_returns_first_counterexample(self):
    assert fo_valid(FirstOrderModel.identity(2), po("v0 = v1")) == {V(0): 0, V(1): 1}
    assert fo_valid(FirstOrderModel.identity(3), po("( v0 = v1 -> v1 = v0 )")) is None

  def test_unassigned(self):
    with pytest.raises(UnassignedVariable):
      fo_eval(FirstOrderModel.identity(1), po("v0 = v1"), {V(0): 0})


def test_set_partitions_are_bell_numbers():
  assert [len(list(set_partitions(range(n)))) for n in range(5)] == [1, 1, 2, 5, 15]


def test_identification_patterns_skip_dv_pairs():
  xs = [X(0), X(1), X(2)]
  assert len(identification_patterns(xs, frozenset())) == 5
  patterns = identification_patterns(xs, dv_from_groups([[X(0), X(1)]]))
  assert len(patterns) == 3
  assert all(p[X(0)] != p[X(1)] for p in patterns)
  assert patterns[0] == {X(0): 0, X(1): 1, X(2): 0}


class TestEqualityDecision:
  @pytest.mark.parametrize("text, groups, expected, from_two", EQ_REGRESSION)
  def test_regression(self, text, groups, expected, from_two):
    scheme = regression_scheme(text, groups)
    assert decide_eq_truth(scheme) == expected
    assert eq_truth_by_size(scheme, min_size=2).verdict == from_two

  @pytest.mark.parametrize("text, groups", [(t, g) for t, g, _, _ in EQ_REGRESSION])
  def test_agrees_with_direct_evaluation(self, text, groups):
    scheme = regression_scheme(text, groups)
    report = eq_truth_by_size(scheme)
    for size in range(1, 4):
      assert report.by_size.get(size, report.by_size[report.bound]) == oracle_truth(scheme, size)

  def test_size_one_is_special(self):
    scheme = regression_scheme("-. A. x0 x0 = x1", (("x0", "x1"),))
    report = eq_truth_by_size(scheme)
    assert report.by_size == {1: False, 2: True}
    assert not report.verdict
    assert "size 1" in report.witness

  def test_rejects_non_equality_schemes(self):
    with pytest.raises(UnsupportedScheme):
      decide_eq_truth(get_axiom("spec").scheme)
    with pytest.raises(UnsupportedScheme):
      decide_eq_truth(get_axiom("mp").scheme)


class TestSchemeValidation:
  def test_identity_models_validate_the_equality_axioms(self):
    m = FirstOrderModel.identity(2)
    for label in ("EQrefl", "EQsymm", "EQtrans", "spec", "vacGen"):
      assert fo_validates_scheme(m, get_axiom(label).scheme).ok, label

  def test_non_symmetric_equality(self):
    m = FirstOrderModel(2, frozenset({(0, 0), (0, 1), (1, 1)}))
    verdict = fo_validates_scheme(m, get_axiom("EQsymm").scheme)
    assert not verdict.ok
    assert verdict.exact
    assert "v0=0, v1=1" in verdict.witness
