"""The two-valued valuation that refutes the generalization rule.

``gen_eval`` is a classical valuation with equality read as identity of
indices, except that a universal quantification over v_i multiplies by
``gen_eval_i(i, ...)``, an auxiliary implicational valuation that reports
whether v_i is "absent" from its argument. Predicate atoms are always true,
and false for ``gen_eval_i`` when they mention v_i.

Schemes are validated through profiles: the triple (val, val_i for each
tracked index, val_i of the negation for each tracked index) is all that the
valuation needs to know about the image of a formula metavariable, so the
achievable profiles of formulas up to a height bound stand in for the
formulas themselves.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from schemata.core.objectlevel import Verdict, identification_patterns, pattern_text
from schemata.core.schemes import Scheme
from schemata.core.syntax import (
  EMPTY_LANGUAGE,
  Equals,
  FORMULA_MV,
  Forall,
  Formula,
  FormulaMV,
  Implies,
  Language,
  Not,
  Pred,
  V,
  VARIABLE_MV,
  Variable,
  occurring,
)


def gen_eval(f: Formula) -> int:
  if isinstance(f, Equals):
    return int(f.left == f.right)
  if isinstance(f, Pred):
    return 1
  if isinstance(f, Not):
    return 1 - gen_eval(f.body)
  if isinstance(f, Implies):
    return max(1 - gen_eval(f.left), gen_eval(f.right))
  if isinstance(f, Forall):
    return gen_eval(f.body) * gen_eval_i(f.var.index, f.body)
  raise TypeError(f"gen valuation needs an object formula, got {f!r}")


def gen_eval_i(i: int, f: Formula) -> int:
  if isinstance(f, Equals):
    j, k = f.left.index, f.right.index
    return int(j == k or i not in (j, k))
  if isinstance(f, Pred):
    return int(all(a.index != i for a in f.args))
  if isinstance(f, Implies):
    return max(1 - gen_eval_i(i, f.left), gen_eval_i(i, f.right))
  if isinstance(f, Forall):
    return 1 if f.var.index == i else gen_eval_i(i, f.body)
  if isinstance(f, Not):
    body = f.body
    if isinstance(body, Forall):
      return 1
    # negations not followed by a quantifier are transparent
    return gen_eval_i(i, body)
  raise TypeError(f"gen valuation needs an object formula, got {f!r}")


Profile = Tuple[int, Tuple[int, ...], Tuple[int, ...]]


def profile_of(f: Formula, tracked: Tuple[int, ...]) -> Profile:
  """Profile of a concrete object formula."""
  return (
    gen_eval(f),
    tuple(gen_eval_i(i, f) for i in tracked),
    tuple(gen_eval_i(i, Not(f)) for i in tracked),
  )


def neg_profile(p: Profile) -> Profile:
  val, _, ni = p
  return (1 - val, ni, ni)


def imp_profile(p: Profile, q: Profile) -> Profile:
  vi = tuple(max(1 - a, b) for a, b in zip(p[1], q[1]))
  return (max(1 - p[0], q[0]), vi, vi)


def forall_profile(pos: int, p: Profile) -> Profile:
  val, vi, _ = p
  moved = tuple(1 if k == pos else v for k, v in enumerate(vi))
  return (val * vi[pos], moved, tuple(1 for _ in vi))


def _atom_formulas(indices: Iterable[int], lang: Language) -> List[Formula]:
  vars_ = [V(k) for k in indices]
  atoms: List[Formula] = [Equals(a, b) for a in vars_ for b in vars_]
  for name, arity in lang.predicates:
    for args in itertools.product(vars_, repeat=arity):
      atoms.append(Pred(name, tuple(args)))
  return atoms


@lru_cache(maxsize=256)
def achievable_profiles(
  tracked: Tuple[int, ...], allowed: FrozenSet[int], lang: Language, max_height: int
) -> FrozenSet[Profile]:
  """Profiles of formulas of height <= max_height.

  Atoms may use the allowed tracked indices and two untracked fresh ones;
  binders range over the allowed tracked indices.
  """
  top = max(tracked, default=-1)
  untracked = [top + 1, top + 2]
  usable = sorted(allowed) + untracked
  level = {profile_of(a, tracked) for a in _atom_formulas(usable, lang)}
  binders = [tracked.index(k) for k in sorted(allowed)]
  for _ in range(max_height - 1):
    grown = set(level)
    for p in level:
      grown.add(neg_profile(p))
      for pos in binders:
        grown.add(forall_profile(pos, p))
    for p, q in itertools.product(level, repeat=2):
      grown.add(imp_profile(p, q))
    if grown == level:
      break
    level = grown
  return frozenset(level)


def scheme_profile(
  m: Formula,
  placement: Dict[Variable, Variable],
  tracked: Tuple[int, ...],
  fm_profiles: Dict[Variable, Profile],
) -> Profile:
  if isinstance(m, FormulaMV):
    return fm_profiles[m.var]
  if isinstance(m, Equals):
    return profile_of(Equals(placement[m.left], placement[m.right]), tracked)
  if isinstance(m, Pred):
    return profile_of(Pred(m.name, tuple(placement[a] for a in m.args)), tracked)
  if isinstance(m, Not):
    return neg_profile(scheme_profile(m.body, placement, tracked, fm_profiles))
  if isinstance(m, Implies):
    return imp_profile(
      scheme_profile(m.left, placement, tracked, fm_profiles),
      scheme_profile(m.right, placement, tracked, fm_profiles),
    )
  if isinstance(m, Forall):
    pos = tracked.index(placement[m.var].index)
    return forall_profile(pos, scheme_profile(m.body, placement, tracked, fm_profiles))
  raise TypeError(f"not a formula: {m!r}")


def gen_validates(
  scheme: Scheme, max_height: int = 3, support: int = 0, lang: Language = EMPTY_LANGUAGE
) -> Verdict:
  """Bounded check that every instance of scheme gets value 1.

  Formula metavariables range over the profiles of all formulas of height at
  most max_height; DV conditions keep the blocked variables out of them.
  """
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  bounds = {"height": max_height, "support": support}
  for pattern in identification_patterns(xs, scheme.dv):
    blocks = len(set(pattern.values()))
    tracked = tuple(range(blocks + support))
    placement = {x: V(k) for x, k in pattern.items()}
    options = []
    for fm in fms:
      blocked = {pattern[other] for pair in scheme.dv if fm in pair for other in pair - {fm} if other.kind == VARIABLE_MV}
      allowed = frozenset(k for k in tracked if k not in blocked)
      options.append(sorted(achievable_profiles(tracked, allowed, lang, max_height)))
    for combo in itertools.product(*options):
      fm_profiles = dict(zip(fms, combo))
      hyps = [scheme_profile(h, placement, tracked, fm_profiles)[0] for h in scheme.hypotheses]
      if all(hyps):
        if scheme_profile(scheme.conclusion, placement, tracked, fm_profiles)[0] != 1:
          shown = " ".join(f"{k}~{p}" for k, p in fm_profiles.items())
          witness = f"{pattern_text(pattern)} {shown}".strip()
          logging.debug(f"{scheme} fails the gen valuation at {witness}")
          return Verdict(False, bounds, witness, exact=False)
  return Verdict(True, bounds, exact=False)
