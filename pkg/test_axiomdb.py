import pytest

from schemata.core.axiomdb import (
  ALIASES,
  catalog,
  check_lattice,
  expand_labels,
  export_catalog,
  full_axiom_set,
  gen_p,
  get_axiom,
  get_system,
  system_names,
)
from schemata.core.schemes import dv_from_groups
from schemata.core.syntax import Language, Variable, X, parse_metaformula as pm
from schemata.parsing.script import parse_script
from schemata.utils.errors import UnknownAxiom, UnknownLabel, UnknownSystem

PROPCALC = {"mp", "minimp", "peirce", "contrap", "notelim"}
TMM_EXTRA = {"gen", "ALLdistr", "spec", "modal5", "ALLcomm", "vacGen", "EQrefl", "EQsymm", "EQtrans", "denot", "subst", "ALLEq", "genEq"}


class TestLookup:
  @pytest.mark.parametrize("name, label", [("K", "simp"), ("modalT", "spec"), ("ax-5", "vacGen"), ("equid", "EQrefl")])
  def test_aliases_and_set_mm_names(self, name, label):
    assert get_axiom(name).label == label

  def test_unknown(self):
    with pytest.raises(UnknownLabel) as info:
      get_axiom("ax-nope")
    assert info.value.exit_code == 2

  def test_labels_are_unique(self):
    labels = [entry.label for entry in catalog()]
    assert len(labels) == len(set(labels))
    assert set(ALIASES.values()) <= set(labels)

  def test_vacgen_carries_its_dv(self):
    assert get_axiom("vacGen").scheme.dv == dv_from_groups([[X(0), Variable("f", 0)]])


class TestSystems:
  def test_minimal_implicational_calculus(self):
    assert get_system("minimplcalc") == ["mp", "minimp"]

  def test_propcalc(self):
    assert set(get_system("propcalc")) == PROPCALC

  def test_two_routes_to_the_full_system(self):
    assert set(get_system("TMM")) == PROPCALC | TMM_EXTRA
    assert check_lattice() == []

  def test_predicate_axioms_join_systems_with_equality(self):
    lang = Language((("P", 2),))
    labels = get_system("TMM", lang)
    assert labels[-2:] == ["ax-P1", "ax-P2"]
    assert "ax-P1" not in get_system("modK", lang)
    assert get_axiom("ax-P2", lang).scheme.conclusion == pm("( x0 = x1 -> ( P x2 x0 -> P x2 x1 ) )", lang)

  def test_gen_p(self):
    lang = Language((("P", 1),))
    assert gen_p("P", 1) == pm("( -. A. x0 x0 = x1 -> ( P x1 -> A. x0 P x1 ) )", lang)

  def test_unknown_system(self):
    with pytest.raises(UnknownSystem):
      get_system("nosuch")
    assert "TMM" in system_names()
    assert "EQ" in system_names()

  def test_expand_labels(self):
    labels = expand_labels(["minimplcalc", "K", "I", "simp"], exclude=["minimp"])
    assert labels == ["mp", "simp", "id"]


def test_full_axiom_set_resolves_aliases():
  axioms = full_axiom_set()
  assert axioms.get("K") == axioms.get("simp")
  with pytest.raises(UnknownAxiom):
    axioms.get("ax-P1")


def test_exported_catalog_reads_back():
  lang = Language((("P", 1),))
  script = parse_script(export_catalog(lang))
  assert script.language == lang
  for entry in catalog():
    assert script.axioms[entry.label] == entry.scheme
  assert "ax-P1" in script.axioms
  assert "gen_P" in script.axioms
