import pytest

from schemata.core.axiomdb import get_axiom
from schemata.core.schemes import Scheme, Substitution, dv_from_groups, is_instance
from schemata.core.suite import CERT_DIR, FIXTURE_DIR
from schemata.core.syntax import X, parse_metaformula as pm
from schemata.core.transforms import (
  SupertruthCertificate,
  TransformSpec,
  binder_substitution_agrees,
  hull_closure,
  is_trivial,
  legitimate_transforms,
  refute_without_dv,
  sample_instances,
  supertrue_quantifier_free,
  sym_transform,
  transform,
  transform_scheme,
  verify_not_supertrue,
)
from schemata.parsing.script import load_script
from schemata.utils.errors import (
  IllegitimateStep,
  IllegitimateSubstitution,
  IllegitimateTransform,
  RefutationFailed,
  UnsupportedScheme,
)

ax = lambda label: get_axiom(label).scheme


class TestTransform:
  @pytest.mark.parametrize(
    "before, after",
    [
      ("A. x0 x1 = x2", "A. x0 x0 = x2"),
      ("( x1 = x2 -> A. x0 x1 = x2 )", "( x1 = x2 -> A. x0 x0 = x2 )"),
      ("A. x0 A. x1 x1 = x0", "A. x0 A. x0 x0 = x0"),
      ("A. x1 x1 = x0", "A. x1 x1 = x0"),
    ],
  )
  def test_only_inside_the_quantifier(self, before, after):
    assert transform(TransformSpec(0, 1), pm(before)) == pm(after)

  def test_symmetric(self):
    spec = TransformSpec(0, 1, symmetric=True)
    assert transform(spec, pm("A. x0 x0 = x1")) == pm("A. x0 x0 = x0")
    assert transform(spec, pm("A. x1 x0 = x1")) == pm("A. x1 x1 = x1")
    assert str(spec) == "{0,1}"

  def test_dv_pair_blocks_the_transform(self):
    scheme = Scheme((), pm("A. x0 x1 = x1"), dv_from_groups([[X(0), X(1)]]))
    with pytest.raises(IllegitimateTransform):
      transform_scheme(TransformSpec(0, 1), scheme)
    with pytest.raises(IllegitimateTransform):
      sym_transform(1, 0, scheme)

  def test_trivial_when_a_variable_is_missing(self):
    assert is_trivial(TransformSpec(0, 1), ax("spec"))
    assert not is_trivial(TransformSpec(0, 1), Scheme((), pm("A. x0 x1 = x1")))

  def test_enumeration(self):
    scheme = Scheme((), pm("A. x0 x1 = x1"))
    specs = [spec for spec, _ in legitimate_transforms(scheme)]
    assert specs == [TransformSpec(0, 1), TransformSpec(1, 0)]
    assert len(legitimate_transforms(scheme, symmetric=True)) == 1

  def test_agrees_with_substitution_under_the_binder(self):
    assert binder_substitution_agrees(Scheme((), pm("A. x0 ( x1 = x0 -> x1 = x1 )")), 0, 1)


class TestQuantifierFree:
  def test_true_and_false(self):
    assert supertrue_quantifier_free(ax("EQsymm"))
    assert supertrue_quantifier_free(ax("EQtrans"))
    assert not supertrue_quantifier_free(Scheme((), pm("x0 = x1")))

  def test_dv_pairs_stay_apart(self):
    distinct = dv_from_groups([[X(0), X(1)]])
    assert supertrue_quantifier_free(Scheme((), pm("-. x0 = x1"), distinct))
    assert not supertrue_quantifier_free(Scheme((), pm("-. x0 = x1")))
    assert not supertrue_quantifier_free(Scheme((), pm("-. x0 = x2"), distinct))

  def test_rejects_quantifiers(self):
    with pytest.raises(UnsupportedScheme):
      supertrue_quantifier_free(Scheme((), pm("A. x0 x0 = x0")))


SUPERCERTS = load_script(CERT_DIR / "not-supertrue.cert").supercerts


@pytest.mark.parametrize("block", SUPERCERTS, ids=lambda b: b.cert.name)
def test_bundled_supercertificates(block):
  report = verify_not_supertrue(block.cert, block.mode)
  assert report.ok, report.detail


class TestSupercertFailures:
  def test_true_result_is_not_a_refutation(self):
    cert = SupertruthCertificate("symm", ax("EQsymm"), Substitution(), TransformSpec(0, 1))
    report = verify_not_supertrue(cert)
    assert not report.ok
    assert isinstance(report.error, RefutationFailed)
    assert report.to_dict()["kind"] == "RefutationFailed"

  def test_semisupertruth_needs_a_symmetric_transform(self):
    cert = SupertruthCertificate("symm", ax("EQsymm"), Substitution(), TransformSpec(0, 1))
    report = verify_not_supertrue(cert, "semisupertruth")
    assert isinstance(report.error, IllegitimateStep)

  def test_semisupertruth_needs_a_formula_free_instance(self):
    cert = SupertruthCertificate("spec", ax("spec"), Substitution(), TransformSpec(0, 1, True))
    report = verify_not_supertrue(cert, "semisupertruth")
    assert isinstance(report.error, IllegitimateStep)


class TestDVNecessity:
  def scheme(self):
    return load_script(FIXTURE_DIR / "dv_necessity.fol").schemes["exists-all-or"]

  def test_dropping_the_condition_gives_a_false_instance(self):
    same = pm("x0 = x1")
    inst, truth = refute_without_dv(self.scheme(), Substitution({}, {0: same, 1: same}))
    assert not truth.verdict
    assert inst.dv == frozenset()

  def test_kept_condition_blocks_the_instance(self):
    same = pm("x0 = x1")
    scheme = self.scheme()
    with pytest.raises(IllegitimateSubstitution):
      refute_without_dv(scheme, Substitution({}, {0: same, 1: same}), pairs=[])


class TestSampling:
  def test_seeded(self):
    first = sample_instances(ax("vacGen"), 10, seed=7)
    assert first == sample_instances(ax("vacGen"), 10, seed=7)
    assert len(first) == 10
    assert all(is_instance(s, ax("vacGen")) is not None for s in first)

  def test_hull_is_bounded(self):
    hull = hull_closure([ax("vacGen")], depth=3, size_bound=10)
    assert hull.truncated
    assert len(hull.schemes) == 10
