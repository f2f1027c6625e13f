"""Backtracking search for separating truth tables.

Implication cells are filled row by row with ascending values, then the
negation cells. A partial table is abandoned as soon as some instance of a
scheme to validate is already decided against it, or once no assignment can
falsify the target any more. Quantifiers are ignored and equality is constant
0, so only propositional schemes are searched.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

from schemata.core.schemes import Scheme
from schemata.core.syntax import FORMULA_MV, Formula, FormulaMV, Implies, Not, occurring, subformulas
from schemata.models.tables import EqRule, QUANT_IGNORE, TruthTableModel
from schemata.utils.errors import BudgetExhausted, UnsupportedScheme

Grid = List[Optional[int]]


@dataclass
class SearchResult:
  model: Optional[TruthTableModel]
  exhaustive: bool
  evaluations: int
  tables: int = 0

  def describe(self) -> str:
    if self.model is not None:
      return f"found after {self.evaluations} evaluations ({self.tables} complete tables)"
    return f"no table exists ({self.evaluations} evaluations, search space exhausted)"


def _require_propositional(scheme: Scheme) -> None:
  for top in scheme.formulas():
    for sub in subformulas(top):
      if not isinstance(sub, (FormulaMV, Not, Implies)):
        raise UnsupportedScheme(f"table search only handles propositional schemes: {scheme}")


def _partial(f: Formula, values: Dict, n: int, imp: Grid, neg: Grid) -> Optional[int]:
  if isinstance(f, FormulaMV):
    return values[f.var]
  if isinstance(f, Not):
    a = _partial(f.body, values, n, imp, neg)
    return None if a is None else neg[a]
  a = _partial(f.left, values, n, imp, neg)
  if a is None:
    return None
  b = _partial(f.right, values, n, imp, neg)
  return None if b is None else imp[a * n + b]


@dataclass
class _Search:
  n: int
  validate: Sequence[Scheme]
  target: Scheme
  budget: int
  uses_neg: bool
  evaluations: int = 0
  tables: int = 0
  assignments: Dict[int, List[Dict]] = field(default_factory=dict)

  def _spend(self) -> None:
    self.evaluations += 1
    if self.evaluations > self.budget:
      raise BudgetExhausted(f"gave up after {self.budget} evaluations", witness=self.budget)

  def _instances(self, scheme: Scheme) -> List[Dict]:
    key = id(scheme)
    if key not in self.assignments:
      fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
      self.assignments[key] = [dict(zip(fms, c)) for c in itertools.product(range(self.n), repeat=len(fms))]
    return self.assignments[key]

  def _violated(self, designated, imp: Grid, neg: Grid) -> bool:
    """Some validate instance is already known to fail."""
    for scheme in self.validate:
      for values in self._instances(scheme):
        self._spend()
        hyps = [_partial(h, values, self.n, imp, neg) for h in scheme.hypotheses]
        if any(h is None or h not in designated for h in hyps):
          continue
        value = _partial(scheme.conclusion, values, self.n, imp, neg)
        if value is not None and value not in designated:
          return True
    return False

  def _falsifier(self, designated, imp: Grid, neg: Grid, final: bool) -> Optional[Dict]:
    """An assignment refuting the target; when not final, one that still might."""
    for values in self._instances(self.target):
      self._spend()
      hyps = [_partial(h, values, self.n, imp, neg) for h in self.target.hypotheses]
      if any(h is not None and h not in designated for h in hyps):
        continue
      value = _partial(self.target.conclusion, values, self.n, imp, neg)
      if value is not None and value in designated:
        continue
      if final and (value is None or any(h is None for h in hyps)):
        continue
      return values
    return None

  def run(self) -> Optional[TruthTableModel]:
    n = self.n
    cells = n * n + (n if self.uses_neg else 0)
    for d in range(1, n):
      designated = frozenset(range(d))
      imp: Grid = [None] * (n * n)
      neg: Grid = [None] * n if self.uses_neg else [0] * n
      found = self._fill(0, cells, designated, imp, neg)
      if found is not None:
        return found
    return None

  def _fill(self, k: int, cells: int, designated, imp: Grid, neg: Grid) -> Optional[TruthTableModel]:
    if self._violated(designated, imp, neg):
      return None
    if self._falsifier(designated, imp, neg, final=False) is None:
      return None
    if k == cells:
      self.tables += 1
      if self._falsifier(designated, imp, neg, final=True) is None:
        return None
      rows = tuple(tuple(imp[r * self.n : (r + 1) * self.n]) for r in range(self.n))
      return TruthTableModel(self.n, rows, tuple(neg), designated, EqRule("const", 0, 0), {}, QUANT_IGNORE)
    grid, pos = (imp, k) if k < self.n * self.n else (neg, k - self.n * self.n)
    for value in range(self.n):
      grid[pos] = value
      found = self._fill(k + 1, cells, designated, imp, neg)
      if found is not None:
        return found
    grid[pos] = None
    return None


def search_truth_table(
  n: int, validate: Sequence[Scheme], falsify: Scheme, budget: int = 10**8, max_values: int = 5
) -> SearchResult:
  """Find an n-valued table validating every scheme in validate and refuting falsify.

  Designated sets are the proper prefixes {0..d-1}; any other designated set
  is one of these after renaming values.

  Raises:
    UnsupportedScheme: A scheme uses equality, predicates or quantifiers
    BudgetExhausted: The evaluation budget ran out before the space was covered
  """
  if n < 1 or n > max_values:
    raise UnsupportedScheme(f"value count {n} outside 1..{max_values}")
  schemes = list(validate) + [falsify]
  for scheme in schemes:
    _require_propositional(scheme)
  uses_neg = any(isinstance(sub, Not) for s in schemes for top in s.formulas() for sub in subformulas(top))
  search = _Search(n, list(validate), falsify, budget, uses_neg)
  logging.info(f"Searching {n}-valued tables ({'with' if uses_neg else 'without'} negation)")
  model = search.run()
  result = SearchResult(model, model is None, search.evaluations, search.tables)
  logging.info(f"Table search: {result.describe()}")
  return result


def render_table(model: TruthTableModel) -> str:
  """The table as it would appear in a certificate model block."""
  imp = " ; ".join(" ".join(str(v) for v in row) for row in model.imp)
  neg = " ".join(str(v) for v in model.neg)
  designated = " ".join(str(v) for v in sorted(model.designated))
  return (
    f"model tt {{ values {model.values} ; imp [ {imp} ] ; neg [ {neg} ] ; "
    f"designated {{ {designated} }} ; eq {model.eq_rule} ; quant {model.quant} }}"
  )
