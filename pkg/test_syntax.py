import pytest

from schemata.core.syntax import (
  EMPTY_LANGUAGE,
  Equals,
  F,
  Forall,
  Implies,
  Language,
  Not,
  Pred,
  V,
  Variable,
  X,
  atoms_over,
  formulas_up_to,
  free_vars,
  height,
  occurring,
  parse_metaformula,
  parse_object_formula,
  quantifier_depth,
  render,
)
from schemata.utils.errors import ArityMismatch, ParseError, UnknownPredicate

PQ = Language((("P", 1), ("Q", 2)))


def test_parse_and_render_agree():
  text = "( A. x0 ( x0 = x1 -> f0 ) -> -. A. x1 -. f1 )"
  f = parse_metaformula(text)
  assert render(f) == text
  assert f == Implies(
    Forall(X(0), Implies(Equals(X(0), X(1)), F(0))),
    Not(Forall(X(1), Not(F(1)))),
  )


def test_predicates_need_declaration():
  assert parse_metaformula("Q x0 x1", PQ) == Pred("Q", (X(0), X(1)))
  with pytest.raises(UnknownPredicate):
    parse_metaformula("R x0")
  with pytest.raises(ArityMismatch):
    parse_metaformula("P x0 x1", PQ)


def test_object_and_meta_modes_do_not_mix():
  assert parse_object_formula("A. v0 v0 = v1") == Forall(V(0), Equals(V(0), V(1)))
  with pytest.raises(ParseError):
    parse_object_formula("x0 = v1")
  with pytest.raises(ParseError):
    parse_object_formula("f0")
  with pytest.raises(ParseError):
    parse_metaformula("v0 = v0")


def test_parse_error_reports_position():
  with pytest.raises(ParseError) as info:
    parse_metaformula("( x0 = x1 -> )")
  assert info.value.location.startswith("1:")


def test_occurring_includes_binders_and_formula_metavariables():
  f = parse_metaformula("A. x2 ( f0 -> x0 = x0 )")
  assert occurring(f) == {X(2), X(0), Variable("f", 0)}
  assert free_vars(f) == {X(0), Variable("f", 0)}


def test_height_and_quantifier_depth():
  f = parse_metaformula("( A. x0 A. x1 x0 = x1 -> -. f0 )")
  assert height(f) == 4
  assert quantifier_depth(f) == 2
  assert height(F(3)) == 1


def test_language_rejects_clashing_names():
  with pytest.raises(ValueError):
    Language((("x1", 1),))
  with pytest.raises(ValueError):
    Language((("P", 1), ("P", 2)))
  assert PQ.union(Language((("R", 0),))).names == ["P", "Q", "R"]
  with pytest.raises(ValueError):
    PQ.union(Language((("P", 2),)))


def test_formulas_up_to_counts():
  atoms = atoms_over([X(0)], EMPTY_LANGUAGE)
  assert atoms == [Equals(X(0), X(0))]
  # height 2: one negation, one quantification, one implication
  assert len(formulas_up_to(2, atoms, [X(0)])) == 4
  assert formulas_up_to(0, atoms, []) == []


def test_variable_validation():
  with pytest.raises(ValueError):
    Variable("y", 0)
  with pytest.raises(ValueError):
    X(-1)
  assert str(X(3)) == "x3"
