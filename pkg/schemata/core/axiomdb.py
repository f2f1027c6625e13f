"""Built-in axiom catalog, named subsystems and predicate axioms."""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from schemata.core.proofkernel import AxiomSet
from schemata.core.schemes import Scheme, dv_from_groups, scheme_block
from schemata.core.syntax import (
  EMPTY_LANGUAGE,
  Equals,
  Forall,
  Formula,
  Implies,
  Language,
  Not,
  Pred,
  Variable,
  X,
  parse_metaformula,
)
from schemata.utils.errors import UnknownLabel, UnknownSystem

BLOCS = ("propcalc", "modal", "vacgen", "equality", "denot", "subst", "alleq", "geneq", "variant", "predicate")


@dataclass(frozen=True)
class AxiomEntry:
  label: str
  scheme: Scheme
  bloc: str
  set_mm_label: Optional[str] = None


# label, bloc, set.mm label, hypotheses, conclusion, DV groups
_CATALOG: Sequence[Tuple[str, str, Optional[str], Tuple[str, ...], str, Tuple[Tuple[str, ...], ...]]] = (
  ("mp", "propcalc", "ax-mp", ("f0", "( f0 -> f1 )"), "f1", ()),
  ("minimp", "propcalc", "minimp", (), "( f0 -> ( ( f1 -> f2 ) -> ( ( ( f3 -> f1 ) -> ( f2 -> f4 ) ) -> ( f1 -> f4 ) ) ) )", ()),
  ("peirce", "propcalc", "peirce", (), "( ( ( f0 -> f1 ) -> f0 ) -> f0 )", ()),
  ("contrap", "propcalc", "con2", (), "( ( f0 -> -. f1 ) -> ( f1 -> -. f0 ) )", ()),
  ("notelim", "propcalc", "pm2.21", (), "( -. f0 -> ( f0 -> f1 ) )", ()),
  ("gen", "modal", "ax-gen", ("f0",), "A. x0 f0", ()),
  ("ALLdistr", "modal", "ax-4", (), "( A. x0 ( f0 -> f1 ) -> ( A. x0 f0 -> A. x0 f1 ) )", ()),
  ("spec", "modal", "sp", (), "( A. x0 f0 -> f0 )", ()),
  ("modal5", "modal", "ax-10", (), "( -. A. x0 f0 -> A. x0 -. A. x0 f0 )", ()),
  ("vacGen", "vacgen", "ax-5", (), "( f0 -> A. x0 f0 )", (("x0", "f0"),)),
  ("ALLcomm", "vacgen", "ax-11", (), "( A. x0 A. x1 f0 -> A. x1 A. x0 f0 )", ()),
  ("EQrefl", "equality", "equid", (), "x0 = x0", ()),
  ("EQsymm", "equality", "equcomi", (), "( x0 = x1 -> x1 = x0 )", ()),
  ("EQtrans", "equality", "equtr", (), "( x0 = x1 -> ( x1 = x2 -> x0 = x2 ) )", ()),
  ("denot", "denot", "bj-denot", (), "( x0 = x0 -> -. A. x1 -. x1 = x0 )", (("x0", "x1"),)),
  (
    "subst",
    "subst",
    "bj-ax12",
    (),
    "A. x0 ( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )",
    (("x0", "x1"), ("x1", "f0")),
  ),
  ("ALLEq", "alleq", "ax-c11", (), "( A. x0 x0 = x1 -> ( A. x0 f0 -> A. x1 f0 ) )", ()),
  ("genEq", "geneq", "ax-c9", (), "( -. A. x0 x0 = x1 -> ( -. A. x0 x0 = x2 -> ( x1 = x2 -> A. x0 x1 = x2 ) ) )", ()),
  # variants
  ("modalD", "variant", "bj-modald", (), "( A. x0 -. f0 -> -. A. x0 f0 )", ()),
  ("modalB", "variant", "bj-modalb", (), "( -. f0 -> A. x0 -. A. x0 f0 )", ()),
  ("modal4", "variant", "hba1", (), "( A. x0 f0 -> A. x0 A. x0 f0 )", ()),
  ("syl", "variant", "imim1", (), "( ( f0 -> f1 ) -> ( ( f1 -> f2 ) -> ( f0 -> f2 ) ) )", ()),
  ("syl*", "variant", "imim2", (), "( ( f0 -> f1 ) -> ( ( f2 -> f0 ) -> ( f2 -> f1 ) ) )", ()),
  ("comm", "variant", "pm2.04", (), "( ( f0 -> ( f1 -> f2 ) ) -> ( f1 -> ( f0 -> f2 ) ) )", ()),
  ("simp", "variant", "ax-1", (), "( f0 -> ( f1 -> f0 ) )", ()),
  ("id", "variant", "id", (), "( f0 -> f0 )", ()),
  ("hilbert", "variant", "pm2.43", (), "( ( f0 -> ( f0 -> f1 ) ) -> ( f0 -> f1 ) )", ()),
  ("frege", "variant", "ax-2", (), "( ( f0 -> ( f1 -> f2 ) ) -> ( ( f0 -> f1 ) -> ( f0 -> f2 ) ) )", ()),
  ("ax-3", "variant", "ax-3", (), "( ( -. f0 -> -. f1 ) -> ( f1 -> f0 ) )", ()),
  ("excontra", "variant", "pm2.24", (), "( f0 -> ( -. f0 -> f1 ) )", ()),
  ("clavius", "variant", "pm2.18", (), "( ( -. f0 -> f0 ) -> f0 )", ()),
  ("notnotintro", "variant", "notnot", (), "( f0 -> -. -. f0 )", ()),
  ("notnotelim", "variant", "notnotr", (), "( -. -. f0 -> f0 )", ()),
  ("ax5ea", "variant", "ax5ea", (), "( -. A. x0 -. f0 -> A. x0 f0 )", (("x0", "f0"),)),
  ("EQeucl", "variant", "ax-7", (), "( x0 = x1 -> ( x0 = x2 -> x1 = x2 ) )", ()),
  ("ax-eq2", "variant", "equeucl", (), "( x0 = x1 -> ( x2 = x0 -> x2 = x1 ) )", ()),
  ("ax-6", "variant", "ax-6", (), "-. A. x0 -. x0 = x1", ()),
  ("denot'", "variant", "ax6v", (), "-. A. x0 -. x0 = x1", (("x0", "x1"),)),
  ("ax-12", "variant", "ax-12", (), "( x0 = x1 -> ( A. x1 f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", ()),
  ("ax12v", "variant", "ax12v", (), "( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )", (("x0", "x1"),)),
  (
    "ax12v2",
    "variant",
    "ax12v2",
    (),
    "( x0 = x1 -> ( f0 -> A. x0 ( x0 = x1 -> f0 ) ) )",
    (("x0", "x1"), ("x1", "f0")),
  ),
  ("ax-c11n", "variant", "ax-c11n", (), "( A. x0 x0 = x1 -> A. x1 x1 = x0 )", ()),
  ("oneObj", "variant", "ax-c16", (), "( A. x0 x0 = x1 -> ( f0 -> A. x0 f0 ) )", (("x0", "x1"),)),
  ("ax-13", "variant", "ax-13", (), "( -. x0 = x1 -> ( x1 = x2 -> A. x0 x1 = x2 ) )", ()),
)

ALIASES: Dict[str, str] = {
  "K": "simp",
  "I": "id",
  "S": "frege",
  "B": "syl*",
  "B'": "syl",
  "C": "comm",
  "W": "hilbert",
  "P": "peirce",
  "modalK": "ALLdistr",
  "kripke": "ALLdistr",
  "modalT": "spec",
  "ALLeq": "ALLEq",
  "gen_eq": "genEq",
  "ax-eq1": "EQeucl",
}

# parent, child, labels added along the edge
LATTICE: Sequence[Tuple[Optional[str], str, Tuple[str, ...]]] = (
  (None, "minimplcalc", ("mp", "minimp")),
  ("minimplcalc", "mincalc", ("contrap",)),
  ("minimplcalc", "implcalc", ("peirce",)),
  ("mincalc", "intuitcalc", ("notelim",)),
  ("mincalc", "paraccalc", ("peirce",)),
  ("implcalc", "paraccalc", ("contrap",)),
  ("intuitcalc", "propcalc", ("peirce",)),
  ("paraccalc", "propcalc", ("notelim",)),
  ("propcalc", "modK", ("gen", "ALLdistr")),
  ("modK", "modT", ("spec",)),
  ("modT", "modS5", ("modal5",)),
  ("modS5", "pure", ("ALLcomm",)),
  ("modS5", "monadic", ("vacGen",)),
  ("pure", "pure_eq", ("EQ",)),
  ("pure", "pure'", ("vacGen",)),
  ("monadic", "pure'", ("ALLcomm",)),
  ("pure_eq", "pure_eq'", ("vacGen",)),
  ("pure'", "pure_eq'", ("EQ",)),
  ("pure_eq'", "T'", ("denot",)),
  ("modK", "T", ("vacGen", "EQ", "denot")),
  ("T", "T'", ("spec", "modal5", "ALLcomm")),
  ("T'", "TM", ("subst",)),
  ("TM", "TMM", ("ALLEq", "genEq")),
)

BLOC_SYSTEMS: Dict[str, Tuple[str, ...]] = {
  "EQ": ("EQrefl", "EQsymm", "EQtrans"),
}

# rows of the label correspondence table: labels used here, set.mm label
LABEL_TABLE: Sequence[Tuple[Tuple[str, ...], str]] = (
  (("mp",), "ax-mp"),
  (("minimp",), "minimp"),
  (("syl", "B'"), "imim1"),
  (("syl*", "B"), "imim2"),
  (("comm", "C"), "pm2.04"),
  (("simp", "K"), "ax-1"),
  (("id", "I"), "id"),
  (("hilbert", "W"), "pm2.43"),
  (("frege", "S"), "ax-2"),
  (("peirce", "P"), "peirce"),
  (("contrap",), "con2"),
  ((), "ax-3"),
  (("notelim",), "pm2.21"),
  (("excontra",), "pm2.24"),
  (("clavius",), "pm2.18"),
  (("notnotintro",), "notnot"),
  (("notnotelim",), "notnotr"),
  (("gen",), "ax-gen"),
  (("ALLdistr", "modalK"), "ax-4"),
  (("spec", "modalT"), "sp"),
  (("modal5",), "ax-10"),
  (("modalD",), "bj-modald"),
  (("modalB",), "bj-modalb"),
  (("modal4",), "hba1"),
  (("ALLcomm",), "ax-11"),
  (("vacGen",), "ax-5"),
  ((), "ax5ea"),
  (("EQrefl",), "equid"),
  (("EQsymm",), "equcomi"),
  (("EQtrans",), "equtr"),
  (("EQeucl", "ax-eq1"), "ax-7"),
  (("ax-eq2",), "equeucl"),
  ((), "ax-6"),
  (("denot'",), "ax6v"),
  (("denot",), "bj-denot"),
  ((), "ax-12"),
  (("subst",), "bj-ax12"),
  ((), "ax-c11n"),
  (("ALLEq",), "ax-c11"),
  (("oneObj",), "ax-c16"),
  ((), "ax-13"),
  (("genEq", "gen_eq"), "ax-c9"),
  (("gen_P",), "~ax-c14"),
  (("ax-e1",), "ax-8"),
  (("ax-e2",), "ax-9"),
  (("ax-P_i_j",), ""),
)


def _parse_scheme(hyps: Iterable[str], concl: str, groups, lang: Language = EMPTY_LANGUAGE) -> Scheme:
  hypotheses = tuple(parse_metaformula(h, lang) for h in hyps)
  conclusion = parse_metaformula(concl, lang)
  dv = dv_from_groups([[Variable(name[0], int(name[1:])) for name in group] for group in groups])
  return Scheme(hypotheses, conclusion, dv)


@lru_cache(maxsize=1)
def catalog() -> Tuple[AxiomEntry, ...]:
  """Every built-in scheme, the TMM ones first."""
  entries = []
  for label, bloc, setmm, hyps, concl, groups in _CATALOG:
    entries.append(AxiomEntry(label, _parse_scheme(hyps, concl, groups), bloc, setmm))
  logging.debug(f"Loaded {len(entries)} catalog schemes")
  return tuple(entries)


def _by_label() -> Dict[str, AxiomEntry]:
  return {entry.label: entry for entry in catalog()}


def canonical_label(label: str) -> str:
  return ALIASES.get(label, label)


def predicate_axioms(lang: Language, with_gen: bool = False) -> List[AxiomEntry]:
  """ax-Pj for every predicate P and argument position j (and gen_P when asked).

  ``x0 = x1 -> ( P .. x0 .. -> P .. x1 .. )`` with the other positions
  filled by x2, x3, ... in order.
  """
  entries = []
  for name, arity in lang.predicates:
    for j in range(arity):
      others = iter(range(2, arity + 1))
      before = [X(0) if k == j else X(next(others)) for k in range(arity)]
      after = [X(1) if k == j else v for k, v in enumerate(before)]
      concl = Implies(Equals(X(0), X(1)), Implies(Pred(name, tuple(before)), Pred(name, tuple(after))))
      entries.append(AxiomEntry(f"ax-{name}{j + 1}", Scheme((), concl), "predicate"))
    if with_gen:
      entries.append(AxiomEntry(f"gen_{name}", Scheme((), gen_p(name, arity)), "predicate"))
  return entries


def gen_p(name: str, arity: int) -> Formula:
  """-. A. x0 x0 = x1 -> ( ... -> ( -. A. x0 x0 = xn -> ( P x1 .. xn -> A. x0 P x1 .. xn ) ) )"""
  atom = Pred(name, tuple(X(k) for k in range(1, arity + 1)))
  body: Formula = Implies(atom, Forall(X(0), atom))
  for k in range(arity, 0, -1):
    body = Implies(Not(Forall(X(0), Equals(X(0), X(k)))), body)
  return body


def get_axiom(label: str, lang: Language = EMPTY_LANGUAGE) -> AxiomEntry:
  """Look a label up by name, alias or set.mm name; predicate labels need lang."""
  table = _by_label()
  key = canonical_label(label)
  if key in table:
    return table[key]
  for entry in predicate_axioms(lang, with_gen=True):
    if entry.label == label:
      return entry
  for entry in catalog():
    if entry.set_mm_label == label:
      return entry
  raise UnknownLabel(f"no scheme labeled '{label}'", witness=label)


def system_names() -> List[str]:
  names = list(BLOC_SYSTEMS)
  for _, child, _ in LATTICE:
    if child not in names:
      names.append(child)
  return names


def _edge_labels(labels: Iterable[str]) -> List[str]:
  out = []
  for label in labels:
    out.extend(BLOC_SYSTEMS.get(label, (label,)))
  return out


@lru_cache(maxsize=None)
def _system_labels(name: str) -> Tuple[str, ...]:
  if name in BLOC_SYSTEMS:
    return BLOC_SYSTEMS[name]
  for parent, child, added in LATTICE:
    if child == name:
      base = [] if parent is None else list(_system_labels(parent))
      for label in _edge_labels(added):
        if label not in base:
          base.append(label)
      return tuple(base)
  raise UnknownSystem(f"no system named '{name}'", witness=name)


def get_system(name: str, lang: Language = EMPTY_LANGUAGE) -> List[str]:
  """Labels of a named system, in catalog order.

  Systems containing the equality bloc also get the predicate axioms of lang.
  """
  labels = set(_system_labels(name))
  ordered = [entry.label for entry in catalog() if entry.label in labels]
  if set(BLOC_SYSTEMS["EQ"]) <= labels:
    ordered += [entry.label for entry in predicate_axioms(lang)]
  return ordered


def check_lattice() -> List[str]:
  """Edges whose two routes to the same system disagree (empty when consistent)."""
  problems = []
  for parent, child, added in LATTICE:
    if parent is None:
      continue
    expected = set(_system_labels(parent)) | set(_edge_labels(added))
    if expected != set(_system_labels(child)):
      problems.append(f"{parent} -> {child}")
  return problems


def is_system(name: str) -> bool:
  return name in system_names()


def expand_labels(names: Iterable[str], lang: Language = EMPTY_LANGUAGE, exclude: Iterable[str] = ()) -> List[str]:
  """System names become their labels; aliases become canonical labels."""
  dropped = {canonical_label(n) for n in exclude}
  out = []
  for name in names:
    labels = get_system(name, lang) if is_system(name) else [get_axiom(name, lang).label]
    for label in labels:
      if label not in out and label not in dropped:
        out.append(label)
  return out


def axiom_set(labels: Iterable[str], lang: Language = EMPTY_LANGUAGE, extra: Optional[Dict[str, Scheme]] = None) -> AxiomSet:
  """An AxiomSet keyed by the given labels; aliases resolve to the same scheme."""
  axioms = {}
  for label in labels:
    if extra and label in extra:
      axioms[label] = extra[label]
    else:
      axioms[label] = get_axiom(label, lang).scheme
  return AxiomSet(axioms)


def full_axiom_set(lang: Language = EMPTY_LANGUAGE, extra: Optional[Dict[str, Scheme]] = None) -> AxiomSet:
  """Every catalog scheme, every alias and every predicate axiom of lang."""
  axioms = {entry.label: entry.scheme for entry in catalog()}
  for alias, target in ALIASES.items():
    axioms[alias] = axioms[target]
  for entry in predicate_axioms(lang, with_gen=True):
    axioms[entry.label] = entry.scheme
  axioms.update(extra or {})
  return AxiomSet(axioms)


def label_map() -> List[Tuple[Tuple[str, ...], str]]:
  return list(LABEL_TABLE)


def export_catalog(lang: Language = EMPTY_LANGUAGE) -> str:
  """The catalog (plus predicate axioms of lang) as a script file."""
  parts = ["# built-in schemes"]
  if lang.predicates:
    parts.append(lang.render())
  for entry in catalog():
    parts.append(scheme_block(entry.label, entry.scheme, keyword="axiom"))
  for entry in predicate_axioms(lang, with_gen=True):
    parts.append(scheme_block(entry.label, entry.scheme, keyword="axiom"))
  return "\n\n".join(parts) + "\n"