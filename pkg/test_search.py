import pytest

from schemata.core.axiomdb import get_axiom
from schemata.models import render_table, search_truth_table, tt_validates
from schemata.utils.errors import BudgetExhausted, UnsupportedScheme

ax = lambda label: get_axiom(label).scheme


def test_no_two_valued_separation():
  result = search_truth_table(2, [ax("mp"), ax("K"), ax("I")], ax("minimp"))
  assert result.model is None
  assert result.exhaustive
  assert result.evaluations > 0
  assert "exhausted" in result.describe()


def test_three_valued_table_refutes_peirce():
  validate = [ax("mp"), ax("K")]
  result = search_truth_table(3, validate, ax("peirce"))
  assert result.model is not None
  assert not result.exhaustive
  for scheme in validate:
    assert tt_validates(result.model, scheme).ok
  assert not tt_validates(result.model, ax("peirce")).ok


def test_found_table_renders_as_certificate_model():
  result = search_truth_table(3, [ax("mp"), ax("K")], ax("peirce"))
  text = render_table(result.model)
  assert text.startswith("model tt { values 3 ;")
  assert "eq const 0" in text


def test_only_propositional_schemes():
  with pytest.raises(UnsupportedScheme):
    search_truth_table(2, [ax("EQrefl")], ax("minimp"))
  with pytest.raises(UnsupportedScheme):
    search_truth_table(2, [ax("mp")], ax("spec"))


def test_value_count_is_bounded():
  with pytest.raises(UnsupportedScheme):
    search_truth_table(6, [ax("mp")], ax("minimp"))
  with pytest.raises(UnsupportedScheme):
    search_truth_table(4, [ax("mp")], ax("minimp"), max_values=3)


def test_budget():
  with pytest.raises(BudgetExhausted):
    search_truth_table(3, [ax("mp"), ax("K")], ax("peirce"), budget=1)
