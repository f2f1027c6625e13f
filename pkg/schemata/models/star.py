"""Truth "as soon as v0 denotes the anchor".

A formula is *-true in a first-order model when it holds under every
assignment that sends v0 to a fixed anchor element. Every true formula is
*-true, modus ponens preserves *-truth and generalization does not:
P(v0) is *-true when P holds at the anchor, while A. v0 P(v0) is not once P
fails somewhere.
"""

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple, Union

from schemata.core.objectlevel import (
  FirstOrderModel,
  Verdict,
  fo_eval,
  fo_validates_scheme,
  model_language,
)
from schemata.core.schemes import Scheme
from schemata.core.syntax import (
  Forall,
  Formula,
  Implies,
  Pred,
  V,
  Variable,
  atoms_over,
  formulas_up_to,
  free_vars,
  render,
)
from schemata.utils.errors import MalformedModel


@dataclass(frozen=True)
class StarTruthModel:
  base: FirstOrderModel
  anchor: int
  anchored: Variable = V(0)

  __hash__ = None

  def __post_init__(self):
    if self.anchor not in self.base.domain:
      raise MalformedModel(f"anchor {self.anchor} is outside the domain")

  def assignments(self, vars_) -> List[Dict[Variable, int]]:
    rest = sorted(v for v in set(vars_) if v != self.anchored)
    out = []
    for values in itertools.product(self.base.domain, repeat=len(rest)):
      asg = dict(zip(rest, values))
      asg[self.anchored] = self.anchor
      out.append(asg)
    return out


def star_true(model: StarTruthModel, f: Formula) -> bool:
  return all(fo_eval(model.base, f, asg) for asg in model.assignments(free_vars(f)))


def _star_placements(model: StarTruthModel):
  def place(pattern):
    blocks = sorted(set(pattern.values()))
    options = [{x: V(k + 1 + model.anchored.index) for x, k in pattern.items()}]
    for chosen in blocks:
      options.append(
        {x: model.anchored if k == chosen else V(k + 1 + model.anchored.index) for x, k in pattern.items()}
      )
    return options

  return place


def star_validates(model: StarTruthModel, scheme: Scheme, support: int = 0, lang=None) -> Verdict:
  """Every object-instance of scheme is *-true (rules: *-true premises give a *-true conclusion).

  A block of identified variable metavariables may or may not land on the
  anchored variable, and formula metavariables may depend on it.
  """
  return fo_validates_scheme(
    model.base,
    scheme,
    surrogate_support=support,
    lang=lang,
    fixed={model.anchored: model.anchor},
    placements=_star_placements(model),
  )


def star_truth_check(model: StarTruthModel, item: Union[Formula, Scheme], support: int = 0, lang=None) -> Verdict:
  if isinstance(item, Scheme):
    return star_validates(model, item, support, lang)
  ok = star_true(model, item)
  return Verdict(ok, {"size": model.base.size}, None if ok else f"{render(item)} is not *-true")


@dataclass
class RuleCheck:
  rule: str
  preserved: bool
  checked: int
  counterexample: Optional[Tuple[Formula, Formula]] = None

  def describe(self) -> str:
    if self.preserved:
      return f"{self.rule} preserves *-truth ({self.checked} cases)"
    hyp, concl = self.counterexample
    return f"{self.rule} does not preserve *-truth: {render(hyp)} is, {render(concl)} is not"


def _masks(model: StarTruthModel, formulas: List[Formula], vars_: List[Variable]):
  points = list(itertools.product(model.base.domain, repeat=len(vars_)))
  masks = {}
  for f in formulas:
    key = tuple(fo_eval(model.base, f, dict(zip(vars_, p))) for p in points)
    masks.setdefault(key, f)
  starred = [k for k, p in enumerate(points) if dict(zip(vars_, p))[model.anchored] == model.anchor]
  return masks, starred


def mp_preservation(model: StarTruthModel, max_height: int = 3, extra_vars: int = 1) -> RuleCheck:
  """Check modus ponens over every formula of bounded height.

  Formulas over the anchored variable and extra_vars others are grouped by
  their truth table on those variables, so each pair of distinct tables is
  tested once.
  """
  first = model.anchored.index
  vars_ = [model.anchored] + [V(first + 1 + k) for k in range(extra_vars)]
  lang = model_language(model.base)
  formulas = formulas_up_to(max_height, atoms_over(vars_, lang), vars_)
  masks, starred = _masks(model, formulas, vars_)
  star = lambda mask: all(mask[k] for k in starred)
  checked = 0
  for a, b in itertools.product(masks, repeat=2):
    checked += 1
    implied = tuple((not x) or y for x, y in zip(a, b))
    if star(a) and star(implied) and not star(b):
      return RuleCheck("mp", False, checked, (masks[a], Implies(masks[a], masks[b])))
  logging.info(f"mp preserves *-truth over {len(formulas)} formulas ({len(masks)} truth tables)")
  return RuleCheck("mp", True, checked)


def gen_counterexample(model: StarTruthModel, predicate: str = "P") -> RuleCheck:
  """P(v0) against A. v0 P(v0)."""
  hyp = Pred(predicate, (model.anchored,))
  concl = Forall(model.anchored, hyp)
  if star_true(model, hyp) and not star_true(model, concl):
    return RuleCheck("gen", False, 1, (hyp, concl))
  return RuleCheck("gen", True, 1)
