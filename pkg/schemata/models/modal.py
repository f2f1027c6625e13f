"""Kripke and neighborhood models.

Every quantifier "A. xN" is read as the same box, equality atoms are true
everywhere and a predicate atom is true on a fixed set of worlds whatever its
arguments. Formula metavariables range over all sets of worlds.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import FrozenSet, List, Mapping, Optional, Tuple

from schemata.core.objectlevel import Verdict
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
  Variable,
  occurring,
)
from schemata.utils.errors import MalformedModel

Worlds = FrozenSet[str]


@dataclass(frozen=True)
class KripkeModel:
  worlds: Tuple[str, ...]
  access: FrozenSet[Tuple[str, str]]
  truth: Mapping[str, Worlds] = field(default_factory=dict)

  __hash__ = None

  def __post_init__(self):
    worlds = tuple(self.worlds)
    if not worlds or len(set(worlds)) != len(worlds):
      raise MalformedModel("worlds must be a nonempty list of distinct names")
    access = frozenset(tuple(p) for p in self.access)
    for pair in access:
      if len(pair) != 2 or not set(pair) <= set(worlds):
        raise MalformedModel(f"accessibility pair {pair} mentions unknown worlds")
    truth = {name: frozenset(ws) for name, ws in dict(self.truth).items()}
    for name, ws in truth.items():
      if not ws <= set(worlds):
        raise MalformedModel(f"truth set of {name} mentions unknown worlds")
    object.__setattr__(self, "worlds", worlds)
    object.__setattr__(self, "access", access)
    object.__setattr__(self, "truth", truth)

  def successors(self, w: str) -> Worlds:
    return frozenset(b for a, b in self.access if a == w)

  def box(self, s: Worlds) -> Worlds:
    return frozenset(w for w in self.worlds if self.successors(w) <= s)

  def box_at(self, w: str, holds) -> bool:
    return all(holds(u) for u in self.successors(w))


@dataclass(frozen=True)
class NeighborhoodModel:
  worlds: Tuple[str, ...]
  neighborhoods: Mapping[str, FrozenSet[Worlds]]
  truth: Mapping[str, Worlds] = field(default_factory=dict)

  __hash__ = None

  def __post_init__(self):
    worlds = tuple(self.worlds)
    if not worlds or len(set(worlds)) != len(worlds):
      raise MalformedModel("worlds must be a nonempty list of distinct names")
    nbhd = {}
    for w in worlds:
      sets = frozenset(frozenset(s) for s in dict(self.neighborhoods).get(w, ()))
      if any(not s <= set(worlds) for s in sets):
        raise MalformedModel(f"a neighborhood of {w} mentions unknown worlds")
      nbhd[w] = sets
    unknown = set(dict(self.neighborhoods)) - set(worlds)
    if unknown:
      raise MalformedModel(f"neighborhoods given for unknown worlds {sorted(unknown)}")
    truth = {name: frozenset(ws) for name, ws in dict(self.truth).items()}
    object.__setattr__(self, "worlds", worlds)
    object.__setattr__(self, "neighborhoods", nbhd)
    object.__setattr__(self, "truth", truth)

  def box(self, s: Worlds) -> Worlds:
    return frozenset(w for w in self.worlds if s in self.neighborhoods[w])

  def box_at(self, w: str, holds) -> bool:
    return frozenset(u for u in self.worlds if holds(u)) in self.neighborhoods[w]


def truth_set(model, f: Formula, fm_sets: Optional[Mapping[Variable, Worlds]] = None) -> Worlds:
  """Worlds where f holds."""
  everywhere = frozenset(model.worlds)
  if isinstance(f, Equals):
    return everywhere
  if isinstance(f, Pred):
    return model.truth.get(f.name, frozenset())
  if isinstance(f, FormulaMV):
    return fm_sets[f.var]
  if isinstance(f, Not):
    return everywhere - truth_set(model, f.body, fm_sets)
  if isinstance(f, Implies):
    return (everywhere - truth_set(model, f.left, fm_sets)) | truth_set(model, f.right, fm_sets)
  if isinstance(f, Forall):
    return model.box(truth_set(model, f.body, fm_sets))
  raise TypeError(f"not a formula: {f!r}")


def subsets(worlds: Tuple[str, ...]) -> List[Worlds]:
  return [frozenset(c) for r in range(len(worlds) + 1) for c in itertools.combinations(worlds, r)]


def _show(s: Worlds, order: Tuple[str, ...]) -> str:
  return "{" + " ".join(w for w in order if w in s) + "}"


def modal_validates(model, scheme: Scheme) -> Verdict:
  """Frame-style validity: every assignment of world sets to formula metavariables.

  A rule holds when hypotheses true at every world force the conclusion true
  at every world.
  """
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  everywhere = frozenset(model.worlds)
  bounds = {"worlds": len(model.worlds)}
  for combo in itertools.product(subsets(model.worlds), repeat=len(fms)):
    fm_sets = dict(zip(fms, combo))
    if all(truth_set(model, h, fm_sets) == everywhere for h in scheme.hypotheses):
      holds = truth_set(model, scheme.conclusion, fm_sets)
      if holds != everywhere:
        world = next(w for w in model.worlds if w not in holds)
        shown = " ".join(f"{k}={_show(s, model.worlds)}" for k, s in fm_sets.items())
        witness = f"{shown} fails at {world}".strip()
        logging.debug(f"{scheme}: {witness}")
        return Verdict(False, bounds, witness)
  return Verdict(True, bounds)


def kripke_validates(model: KripkeModel, scheme: Scheme) -> Verdict:
  return modal_validates(model, scheme)


def neighborhood_validates(model: NeighborhoodModel, scheme: Scheme) -> Verdict:
  return modal_validates(model, scheme)


def satisfies(model, w: str, f: Formula, fm_sets: Mapping[Variable, Worlds]) -> bool:
  """Pointwise satisfaction, written independently of truth_set."""
  if isinstance(f, Equals):
    return True
  if isinstance(f, Pred):
    return w in model.truth.get(f.name, ())
  if isinstance(f, FormulaMV):
    return w in fm_sets[f.var]
  if isinstance(f, Not):
    return not satisfies(model, w, f.body, fm_sets)
  if isinstance(f, Implies):
    return not satisfies(model, w, f.left, fm_sets) or satisfies(model, w, f.right, fm_sets)
  if isinstance(f, Forall):
    return model.box_at(w, lambda u: satisfies(model, u, f.body, fm_sets))
  raise TypeError(f"not a formula: {f!r}")


def brute_force_validates(model, scheme: Scheme) -> bool:
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  for combo in itertools.product(subsets(model.worlds), repeat=len(fms)):
    fm_sets = dict(zip(fms, combo))
    premises = all(all(satisfies(model, w, h, fm_sets) for w in model.worlds) for h in scheme.hypotheses)
    if premises and not all(satisfies(model, w, scheme.conclusion, fm_sets) for w in model.worlds):
      return False
  return True
