import pytest

from schemata.core.axiomdb import get_axiom
from schemata.core.schemes import (
  Scheme,
  Substitution,
  apply_subst,
  check_legitimate,
  compose,
  dv_from_groups,
  dv_pair,
  instantiate,
  is_instance,
  match,
  render_scheme,
)
from schemata.core.syntax import F, Variable, X, parse_metaformula as pm, parse_object_formula as po
from schemata.utils.errors import IllegitimateSubstitution

f0 = Variable("f", 0)
f1 = Variable("f", 1)


def vacgen():
  return get_axiom("vacGen").scheme


class TestScheme:
  def test_dv_over_absent_variables_is_dropped(self):
    s = Scheme((), pm("x0 = x0"), dv_from_groups([[X(0), X(5)]]))
    assert s.dv == frozenset()

  def test_hypotheses_compare_as_multiset(self):
    a = Scheme((pm("f0"), pm("f1")), pm("f1"))
    b = Scheme((pm("f1"), pm("f0")), pm("f1"))
    assert a != b
    assert a.same_as(b)

  def test_render(self):
    assert render_scheme(vacgen()) == "( f0 -> A. x0 f0 )  [dv f0 x0]"

  def test_dv_pair_needs_two_variables(self):
    with pytest.raises(ValueError):
      dv_pair(X(0), X(0))


class TestSubstitution:
  def test_identity_entries_are_dropped(self):
    assert Substitution({X(0): X(0)}, {f0: F(0)}).is_identity()
    assert Substitution({X(0): X(1)}) == Substitution({X(0): X(1)}, {f1: F(1)})

  def test_type_preservation(self):
    with pytest.raises(TypeError):
      Substitution({X(0): f0})
    with pytest.raises(TypeError):
      Substitution({}, {X(0): pm("x0 = x0")})

  def test_binders_are_replaced_too(self):
    sigma = Substitution({X(0): X(1)}, {f0: pm("x0 = x1")})
    assert apply_subst(sigma, pm("A. x0 f0")) == pm("A. x1 x0 = x1")

  def test_compose(self):
    inner = Substitution({}, {f0: pm("( f1 -> x0 = x0 )")})
    outer = Substitution({X(0): X(2)}, {f1: pm("x3 = x3")})
    m = pm("( f0 -> x0 = x0 )")
    assert apply_subst(compose(outer, inner), m) == apply_subst(outer, apply_subst(inner, m))


class TestInstantiate:
  def test_dv_propagates_to_images(self):
    sigma = Substitution({X(0): X(2)}, {f0: pm("x3 = x4")})
    inst = instantiate(sigma, vacgen())
    assert inst.conclusion == pm("( x3 = x4 -> A. x2 x3 = x4 )")
    assert inst.dv == dv_from_groups([[X(2), X(3)], [X(2), X(4)]])

  def test_illegitimate_substitution(self):
    sigma = Substitution({}, {f0: pm("x0 = x1")})
    ok, witness = check_legitimate(sigma, vacgen())
    assert not ok
    assert witness[1] == X(0)
    with pytest.raises(IllegitimateSubstitution):
      instantiate(sigma, vacgen())

  def test_extra_dv(self):
    inst = instantiate(Substitution(), Scheme((), pm("x0 = x1")), dv_from_groups([[X(0), X(1)]]))
    assert inst.dv == dv_from_groups([[X(0), X(1)]])


class TestInstanceRelation:
  def test_match_is_one_way(self):
    assert match(pm("( f0 -> f0 )"), pm("( x0 = x0 -> x0 = x0 )")) == {f0: pm("x0 = x0")}
    assert match(pm("( f0 -> f0 )"), pm("( x0 = x0 -> x1 = x1 )")) is None
    assert match(pm("x0 = x0"), pm("f0")) is None

  def test_object_variables_never_match(self):
    assert match(pm("x0 = x0"), po("v0 = v0")) is None
    assert match(pm("A. x0 f0"), po("A. v0 v0 = v0")) is None
    assert is_instance(Scheme((), po("v0 = v0")), get_axiom("EQrefl").scheme) is None

  def test_instance_needs_dv_to_carry_over(self):
    target = Scheme((), pm("( x1 = x2 -> A. x0 x1 = x2 )"))
    assert is_instance(target, vacgen()) is None
    with_dv = target.with_dv(dv_from_groups([[X(0), X(1)], [X(0), X(2)]]))
    sigma = is_instance(with_dv, vacgen())
    assert sigma is not None
    assert sigma.image(f0) == pm("x1 = x2")

  def test_hypotheses_under_any_order(self):
    mp = get_axiom("mp").scheme
    psi = Scheme((pm("( x0 = x0 -> x1 = x1 )"), pm("x0 = x0")), pm("x1 = x1"))
    assert is_instance(psi, mp) is not None
    assert is_instance(Scheme((), pm("x1 = x1")), mp) is None
