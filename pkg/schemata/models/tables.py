"""Many-valued truth-table models.

Quantifiers are either ignored or follow the rule where a universal
quantification of an implication is always true. Equality atoms get a constant
value or one value for identified variables and another for distinct ones.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Mapping, Optional, Tuple

from schemata.core.objectlevel import Verdict, identification_patterns, pattern_text
from schemata.core.schemes import Scheme
from schemata.core.syntax import (
  Equals,
  FORMULA_MV,
  Forall,
  Formula,
  FormulaMV,
  Implies,
  Not,
  Pred,
  VARIABLE_MV,
  Variable,
  occurring,
  subformulas,
)
from schemata.utils.errors import MalformedModel

QUANT_IGNORE = "ignore"
QUANT_MONK = "monk"


@dataclass(frozen=True)
class EqRule:
  """Value of an equality atom: ``const`` ignores its variables."""

  kind: str = "const"
  same: int = 0
  diff: int = 0

  def value(self, identified: bool) -> int:
    if self.kind == "const":
      return self.same
    return self.same if identified else self.diff

  def __str__(self):
    if self.kind == "const":
      return f"const {self.same}"
    return f"identity {self.same} {self.diff}"


@dataclass(frozen=True)
class TruthTableModel:
  values: int
  imp: Tuple[Tuple[int, ...], ...]
  neg: Tuple[int, ...]
  designated: FrozenSet[int]
  eq_rule: EqRule = EqRule()
  pred_values: Mapping[str, int] = field(default_factory=dict)
  quant: str = QUANT_IGNORE

  __hash__ = None

  def __post_init__(self):
    n = self.values
    if n < 1:
      raise MalformedModel("a table needs at least one value")
    imp = tuple(tuple(row) for row in self.imp)
    if len(imp) != n or any(len(row) != n for row in imp):
      raise MalformedModel(f"implication table must be {n}x{n}")
    neg = tuple(self.neg)
    if len(neg) != n:
      raise MalformedModel(f"negation table must have {n} entries")
    entries = [v for row in imp for v in row] + list(neg)
    entries += [self.eq_rule.same, self.eq_rule.diff] + list(self.pred_values.values())
    if any(not 0 <= v < n for v in entries):
      raise MalformedModel(f"table entries must lie in 0..{n - 1}")
    designated = frozenset(self.designated)
    if not designated:
      raise MalformedModel("designated set is empty")
    if not designated <= set(range(n)):
      raise MalformedModel(f"designated values must lie in 0..{n - 1}")
    if self.eq_rule.kind not in ("const", "identity"):
      raise MalformedModel(f"unknown equality rule '{self.eq_rule.kind}'")
    if self.quant not in (QUANT_IGNORE, QUANT_MONK):
      raise MalformedModel(f"unknown quantifier rule '{self.quant}'")
    object.__setattr__(self, "imp", imp)
    object.__setattr__(self, "neg", neg)
    object.__setattr__(self, "designated", designated)
    object.__setattr__(self, "pred_values", dict(self.pred_values))

  def designated_top(self) -> int:
    return max(self.designated)

  def implication_values(self) -> FrozenSet[int]:
    return frozenset(v for row in self.imp for v in row)


CLASSICAL = TruthTableModel(2, ((1, 1), (0, 1)), (1, 0), frozenset([1]), EqRule("identity", 1, 0))

# value of a formula metavariable, plus whether its image is an implication
FmValue = Tuple[int, bool]


def tt_eval(
  model: TruthTableModel,
  f: Formula,
  ids: Optional[Mapping[Variable, int]] = None,
  fm_values: Optional[Mapping[Variable, FmValue]] = None,
  atom_values: Optional[Mapping[Formula, int]] = None,
) -> int:
  """Value of f in the table.

  Args:
    model: The table model
    f: Formula; object variables are distinct unless ids identifies them
    ids: Block number per variable (defaults to the variable itself)
    fm_values: (value, is implication) per formula metavariable
    atom_values: Values of predicate atoms when the model has no constant for them
  """
  return _eval(model, f, ids or {}, fm_values or {}, atom_values or {})[0]


def _eval(model, f, ids, fm_values, atom_values) -> Tuple[int, bool]:
  if isinstance(f, FormulaMV):
    return fm_values[f.var]
  if isinstance(f, Equals):
    same = ids.get(f.left, f.left) == ids.get(f.right, f.right)
    return model.eq_rule.value(same), False
  if isinstance(f, Pred):
    if f.name in model.pred_values:
      return model.pred_values[f.name], False
    key = Pred(f.name, tuple(_block(ids, a) for a in f.args))
    return atom_values[key], False
  if isinstance(f, Not):
    return model.neg[_eval(model, f.body, ids, fm_values, atom_values)[0]], False
  if isinstance(f, Implies):
    a = _eval(model, f.left, ids, fm_values, atom_values)[0]
    b = _eval(model, f.right, ids, fm_values, atom_values)[0]
    return model.imp[a][b], True
  if isinstance(f, Forall):
    value, is_imp = _eval(model, f.body, ids, fm_values, atom_values)
    if model.quant == QUANT_MONK and is_imp:
      return model.designated_top(), False
    return value, False
  raise TypeError(f"not a formula: {f!r}")


def _block(ids, var: Variable):
  return Variable(VARIABLE_MV, ids[var]) if var in ids else var


def predicate_atoms(
  scheme: Scheme, ids: Mapping[Variable, int], model: TruthTableModel
) -> List[Pred]:
  """Distinct predicate atoms (after identification) that need a value."""
  seen: Dict[Pred, None] = {}
  for top in scheme.formulas():
    for sub in subformulas(top):
      if isinstance(sub, Pred) and sub.name not in model.pred_values:
        seen[Pred(sub.name, tuple(_block(ids, a) for a in sub.args))] = None
  return list(seen)


def fm_choices(model: TruthTableModel) -> List[FmValue]:
  choices = [(v, False) for v in range(model.values)]
  if model.quant == QUANT_MONK:
    choices += [(v, True) for v in sorted(model.implication_values())]
  return choices


def tt_validates(model: TruthTableModel, scheme: Scheme) -> Verdict:
  """Exact check that every instance of scheme takes designated values.

  Formula metavariables range over all values (flagged as implications or not
  under the quantifier-of-implication rule), variable metavariables over every
  identification pattern allowed by the DV conditions.
  """
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  choices = fm_choices(model)
  bounds = {"values": model.values}
  for pattern in identification_patterns(xs, scheme.dv):
    atoms = predicate_atoms(scheme, pattern, model)
    for fm_combo in itertools.product(choices, repeat=len(fms)):
      fm_values = dict(zip(fms, fm_combo))
      for atom_combo in itertools.product(range(model.values), repeat=len(atoms)):
        atom_values = dict(zip(atoms, atom_combo))
        hyps = [tt_eval(model, h, pattern, fm_values, atom_values) for h in scheme.hypotheses]
        if all(v in model.designated for v in hyps):
          value = tt_eval(model, scheme.conclusion, pattern, fm_values, atom_values)
          if value not in model.designated:
            shown = " ".join(f"{k}={v}{'*' if imp else ''}" for k, (v, imp) in fm_values.items())
            witness = f"{pattern_text(pattern)} {shown} gives {value}".strip()
            logging.debug(f"{scheme} falsified: {witness}")
            return Verdict(False, bounds, witness)
  return Verdict(True, bounds)
