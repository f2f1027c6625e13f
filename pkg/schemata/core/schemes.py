"""Schemes, DV conditions, substitutions and the instance relation."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

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
  VARIABLE_MV,
  Variable,
  max_index,
  occurring,
  render,
)
from schemata.utils.errors import IllegitimateSubstitution

DVPair = FrozenSet[Variable]
DVSet = FrozenSet[DVPair]


def dv_pair(a: Variable, b: Variable) -> DVPair:
  if a == b:
    raise ValueError(f"a DV pair needs two distinct metavariables, got {a} twice")
  return frozenset((a, b))


def dv_from_groups(groups: Iterable[Iterable[Variable]]) -> DVSet:
  """Every pair inside each group is disjoint (the $d convention)."""
  pairs = set()
  for group in groups:
    members = sorted(set(group))
    for a, b in itertools.combinations(members, 2):
      pairs.add(dv_pair(a, b))
  return frozenset(pairs)


def restrict_dv(dv: Iterable[DVPair], allowed: FrozenSet[Variable]) -> DVSet:
  return frozenset(p for p in dv if len(p) == 2 and p <= allowed)


def sorted_pairs(dv: Iterable[DVPair]) -> List[Tuple[Variable, Variable]]:
  return sorted(tuple(sorted(p)) for p in dv)


def render_dv(dv: Iterable[DVPair]) -> str:
  return " , ".join(f"{a} {b}" for a, b in sorted_pairs(dv))


@dataclass(frozen=True)
class Scheme:
  """Hypotheses, conclusion and DV conditions.

  DV pairs over metavariables that do not occur are dropped on construction.
  """

  hypotheses: Tuple[Formula, ...]
  conclusion: Formula
  dv: DVSet = frozenset()

  def __post_init__(self):
    object.__setattr__(self, "hypotheses", tuple(self.hypotheses))
    pairs = set()
    for pair in self.dv:
      pair = frozenset(pair)
      if len(pair) != 2:
        raise ValueError(f"malformed DV pair {sorted(map(str, pair))}")
      pairs.add(pair)
    object.__setattr__(self, "dv", restrict_dv(pairs, occurring(self)))

  @property
  def is_rule(self) -> bool:
    return bool(self.hypotheses)

  def formulas(self) -> Tuple[Formula, ...]:
    return self.hypotheses + (self.conclusion,)

  def with_dv(self, dv: Iterable[DVPair]) -> "Scheme":
    return Scheme(self.hypotheses, self.conclusion, frozenset(dv))

  def has_formula_mv(self) -> bool:
    return any(v.kind == FORMULA_MV for v in occurring(self))

  def same_as(self, other: "Scheme") -> bool:
    """Equality with hypotheses compared as a multiset."""
    if self.conclusion != other.conclusion or self.dv != other.dv:
      return False
    key = lambda f: render(f)
    return sorted(self.hypotheses, key=key) == sorted(other.hypotheses, key=key)

  def __str__(self):
    return render_scheme(self)


def render_scheme(s: Scheme) -> str:
  text = render(s.conclusion)
  if s.hypotheses:
    text = " & ".join(render(h) for h in s.hypotheses) + " => " + text
  if s.dv:
    text += f"  [dv {render_dv(s.dv)}]"
  return text


def scheme_block(name: str, s: Scheme, keyword: str = "scheme") -> str:
  """Script-file text for a scheme."""
  lines = [f"{keyword} {name} {{"]
  for a, b in sorted_pairs(s.dv):
    lines.append(f"  dv: {a} {b} ;")
  for k, h in enumerate(s.hypotheses, start=1):
    lines.append(f"  hyp h{k}: {render(h)} ;")
  lines.append(f"  concl: {render(s.conclusion)} ;")
  lines.append("}")
  return "\n".join(lines)


Image = Union[Variable, Formula]


@dataclass(frozen=True)
class Substitution:
  """Type-preserving, finite-support map on metavariables.

  Identity entries are dropped so two substitutions compare equal iff they
  act the same way.
  """

  vr_map: Mapping[Variable, Variable] = field(default_factory=dict)
  fm_map: Mapping[Variable, Formula] = field(default_factory=dict)

  __hash__ = None

  def __post_init__(self):
    vr = {}
    for key, value in dict(self.vr_map).items():
      if key.kind != VARIABLE_MV or not isinstance(value, Variable) or value.kind != VARIABLE_MV:
        raise TypeError(f"variable metavariable map must send x to x, got {key} := {value}")
      if key != value:
        vr[key] = value
    fm = {}
    for key, value in dict(self.fm_map).items():
      if isinstance(key, int):
        key = Variable(FORMULA_MV, key)
      if key.kind != FORMULA_MV:
        raise TypeError(f"formula map key {key} is not a formula metavariable")
      if not isinstance(value, (FormulaMV, Equals, Pred, Not, Implies, Forall)):
        raise TypeError(f"formula map value for {key} is not a formula")
      if value != FormulaMV(key.index):
        fm[key] = value
    object.__setattr__(self, "vr_map", vr)
    object.__setattr__(self, "fm_map", fm)

  @classmethod
  def identity(cls) -> "Substitution":
    return cls({}, {})

  @classmethod
  def from_pairs(cls, pairs: Iterable[Tuple[Variable, Image]]) -> "Substitution":
    vr, fm = {}, {}
    for key, value in pairs:
      if key.kind == FORMULA_MV:
        fm[key] = value
      else:
        vr[key] = value
    return cls(vr, fm)

  def is_identity(self) -> bool:
    return not self.vr_map and not self.fm_map

  def image(self, var: Variable) -> Image:
    if var.kind == FORMULA_MV:
      return self.fm_map.get(var, FormulaMV(var.index))
    return self.vr_map.get(var, var)

  def image_oc(self, var: Variable) -> FrozenSet[Variable]:
    return occurring(self.image(var))

  def support(self) -> FrozenSet[Variable]:
    return frozenset(self.vr_map) | frozenset(self.fm_map)

  def restrict(self, keep: Iterable[Variable]) -> "Substitution":
    keep = set(keep)
    return Substitution(
      {k: v for k, v in self.vr_map.items() if k in keep},
      {k: v for k, v in self.fm_map.items() if k in keep},
    )

  def items(self) -> List[Tuple[Variable, Image]]:
    return sorted(list(self.fm_map.items()) + list(self.vr_map.items()), key=lambda kv: (kv[0].kind, kv[0].index))

  def __str__(self):
    inner = " ; ".join(f"{k} := {_render_image(v)}" for k, v in self.items())
    return f"( {inner} )" if inner else "( )"


def _render_image(value: Image) -> str:
  return str(value) if isinstance(value, Variable) else render(value)


def apply_subst(sigma: Substitution, m: Formula) -> Formula:
  """Plain replacement; bound variable capture is allowed."""
  if isinstance(m, FormulaMV):
    return sigma.fm_map.get(m.var, m)
  if isinstance(m, Equals):
    return Equals(sigma.image(m.left), sigma.image(m.right))
  if isinstance(m, Pred):
    return Pred(m.name, tuple(sigma.image(a) for a in m.args))
  if isinstance(m, Not):
    return Not(apply_subst(sigma, m.body))
  if isinstance(m, Implies):
    return Implies(apply_subst(sigma, m.left), apply_subst(sigma, m.right))
  if isinstance(m, Forall):
    return Forall(sigma.image(m.var), apply_subst(sigma, m.body))
  raise TypeError(f"not a formula: {m!r}")


def compose(outer: Substitution, inner: Substitution) -> Substitution:
  """The substitution m -> outer(inner(m))."""
  vr, fm = {}, {}
  for var in inner.support() | outer.support():
    if var.kind == FORMULA_MV:
      fm[var] = apply_subst(outer, inner.image(var))
    else:
      vr[var] = outer.image(inner.image(var))
  return Substitution(vr, fm)


def propagate_dv(dv: Iterable[DVPair], sigma: Substitution) -> DVSet:
  result = set()
  for pair in dv:
    a, b = tuple(pair)
    for m in sigma.image_oc(a):
      for n in sigma.image_oc(b):
        if m != n:
          result.add(frozenset((m, n)))
  return frozenset(result)


LegitimacyWitness = Tuple[Tuple[Variable, Variable], Variable]


def check_legitimate(
  sigma: Substitution, scheme: Union[Scheme, Iterable[DVPair]]
) -> Tuple[bool, Optional[LegitimacyWitness]]:
  """Whether every DV pair is sent to metavariable-disjoint images.

  Returns:
    (True, None) or (False, ((m, n), shared)) for the first violated pair
  """
  dv = scheme.dv if isinstance(scheme, Scheme) else scheme
  for a, b in sorted_pairs(dv):
    shared = sigma.image_oc(a) & sigma.image_oc(b)
    if shared:
      return False, ((a, b), min(shared))
  return True, None


def instantiate(
  sigma: Substitution, scheme: Scheme, extra_dv: Iterable[DVPair] = frozenset()
) -> Scheme:
  ok, witness = check_legitimate(sigma, scheme)
  if not ok:
    (a, b), shared = witness
    raise IllegitimateSubstitution(
      f"DV pair {{{a},{b}}} would share {shared}", witness=witness
    )
  return Scheme(
    tuple(apply_subst(sigma, h) for h in scheme.hypotheses),
    apply_subst(sigma, scheme.conclusion),
    propagate_dv(scheme.dv, sigma) | frozenset(extra_dv),
  )


Binding = Dict[Variable, Image]


def match(pattern: Formula, target: Formula, binding: Optional[Binding] = None) -> Optional[Binding]:
  """One-way matching: bind metavariables of pattern so it becomes target.

  Returns an extended copy of binding, or None.
  """
  binding = dict(binding) if binding else {}
  if _match(pattern, target, binding):
    return binding
  return None


def _bind(binding: Binding, var: Variable, value: Image) -> bool:
  if var in binding:
    return binding[var] == value
  binding[var] = value
  return True


def _bind_var(binding: Binding, var: Variable, value: Variable) -> bool:
  if var.kind != VARIABLE_MV or value.kind != VARIABLE_MV:
    return False
  return _bind(binding, var, value)


def _match(p: Formula, t: Formula, b: Binding) -> bool:
  if isinstance(p, FormulaMV):
    return _bind(b, p.var, t)
  if type(p) is not type(t):
    return False
  if isinstance(p, Equals):
    return _bind_var(b, p.left, t.left) and _bind_var(b, p.right, t.right)
  if isinstance(p, Pred):
    if p.name != t.name or len(p.args) != len(t.args):
      return False
    return all(_bind_var(b, x, y) for x, y in zip(p.args, t.args))
  if isinstance(p, Not):
    return _match(p.body, t.body, b)
  if isinstance(p, Implies):
    return _match(p.left, t.left, b) and _match(p.right, t.right, b)
  if isinstance(p, Forall):
    return _bind_var(b, p.var, t.var) and _match(p.body, t.body, b)
  return False


def binding_to_subst(binding: Binding) -> Substitution:
  return Substitution.from_pairs(binding.items())


def is_instance(psi: Scheme, phi: Scheme) -> Optional[Substitution]:
  """A substitution witnessing psi in Inst(phi), or None.

  Hypotheses are tried under every bijection, in lexicographic order.
  """
  if len(psi.hypotheses) != len(phi.hypotheses):
    return None
  base = match(phi.conclusion, psi.conclusion)
  if base is None:
    return None
  for order in itertools.permutations(range(len(psi.hypotheses))):
    binding = base
    for k, idx in enumerate(order):
      binding = match(phi.hypotheses[k], psi.hypotheses[idx], binding)
      if binding is None:
        break
    if binding is None:
      continue
    sigma = binding_to_subst(binding)
    ok, _ = check_legitimate(sigma, phi)
    if ok and propagate_dv(phi.dv, sigma) <= psi.dv:
      return sigma
  logging.debug(f"No instance witness for {psi} against {phi}")
  return None


def fresh_index(used: Iterable[Variable], kind: str) -> int:
  return max_index(used, kind) + 1
