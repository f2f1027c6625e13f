"""Metavariables, languages and metaformulas.

Formulas are immutable trees of frozen dataclasses. The same node types carry
object formulas; the only difference is the kind of the variables at the
leaves ("x" for variable metavariables, "v" for object variables).
"""

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Set, Tuple, Union

VARIABLE_MV = "x"
FORMULA_MV = "f"
OBJECT_VAR = "v"


@dataclass(frozen=True, order=True)
class Variable:
  """A metavariable (kind "x" or "f") or an object variable (kind "v")."""

  kind: str
  index: int

  def __post_init__(self):
    if self.kind not in (VARIABLE_MV, FORMULA_MV, OBJECT_VAR):
      raise ValueError(f"unknown variable kind '{self.kind}'")
    if self.index < 0:
      raise ValueError(f"negative index {self.index}")

  def __str__(self):
    return f"{self.kind}{self.index}"

  @property
  def is_formula(self) -> bool:
    return self.kind == FORMULA_MV


Metavariable = Variable


def X(index: int) -> Variable:
  return Variable(VARIABLE_MV, index)


def V(index: int) -> Variable:
  return Variable(OBJECT_VAR, index)


def F(index: int) -> "FormulaMV":
  return FormulaMV(index)


@dataclass(frozen=True)
class FormulaMV:
  index: int

  @property
  def var(self) -> Variable:
    return Variable(FORMULA_MV, self.index)

  def __str__(self):
    return render(self)


@dataclass(frozen=True)
class Equals:
  left: Variable
  right: Variable

  def __str__(self):
    return render(self)


@dataclass(frozen=True)
class Pred:
  name: str
  args: Tuple[Variable, ...] = ()

  def __str__(self):
    return render(self)


@dataclass(frozen=True)
class Not:
  body: "Formula"

  def __str__(self):
    return render(self)


@dataclass(frozen=True)
class Implies:
  left: "Formula"
  right: "Formula"

  def __str__(self):
    return render(self)


@dataclass(frozen=True)
class Forall:
  var: Variable
  body: "Formula"

  def __str__(self):
    return render(self)


Formula = Union[FormulaMV, Equals, Pred, Not, Implies, Forall]
Metaformula = Formula
ObjectFormula = Formula

ATOMS = (FormulaMV, Equals, Pred)


@dataclass(frozen=True)
class Language:
  """Ordered nonlogical predicates with their arities."""

  predicates: Tuple[Tuple[str, int], ...] = ()

  def __post_init__(self):
    seen = set()
    for name, arity in self.predicates:
      if name in seen:
        raise ValueError(f"predicate '{name}' declared twice")
      if _looks_like_variable(name) or name in ("A", "A."):
        raise ValueError(f"predicate name '{name}' clashes with variable tokens")
      if arity < 0:
        raise ValueError(f"negative arity for '{name}'")
      seen.add(name)

  def arity(self, name: str) -> Optional[int]:
    for pname, arity in self.predicates:
      if pname == name:
        return arity
    return None

  @property
  def names(self) -> List[str]:
    return [name for name, _ in self.predicates]

  def union(self, other: "Language") -> "Language":
    merged = list(self.predicates)
    for name, arity in other.predicates:
      known = self.arity(name)
      if known is None:
        merged.append((name, arity))
      elif known != arity:
        raise ValueError(f"predicate '{name}' has arity {known} and {arity}")
    return Language(tuple(merged))

  def render(self) -> str:
    return "language { " + " ; ".join(f"{n} {a}" for n, a in self.predicates) + " }"


EMPTY_LANGUAGE = Language()


def _looks_like_variable(name: str) -> bool:
  return len(name) > 1 and name[0] in "xfv" and name[1:].isdigit()


def render(f: Formula) -> str:
  """Render a formula in the ASCII token syntax."""
  if isinstance(f, FormulaMV):
    return f"f{f.index}"
  if isinstance(f, Equals):
    return f"{f.left} = {f.right}"
  if isinstance(f, Pred):
    return " ".join([f.name] + [str(a) for a in f.args])
  if isinstance(f, Not):
    return f"-. {render(f.body)}"
  if isinstance(f, Forall):
    return f"A. {f.var} {render(f.body)}"
  if isinstance(f, Implies):
    return f"( {render(f.left)} -> {render(f.right)} )"
  raise TypeError(f"not a formula: {f!r}")


def parse_metaformula(text: str, lang: Optional[Language] = None) -> Formula:
  """Parse a metaformula (x/f metavariables only).

  Args:
    text: Whitespace separated tokens
    lang: Declared predicates; defaults to the empty language

  Returns:
    The formula tree
  """
  from schemata.parsing.grammar import parse_formula

  return parse_formula(text, lang or EMPTY_LANGUAGE, mode="meta")


def parse_object_formula(text: str, lang: Optional[Language] = None) -> Formula:
  from schemata.parsing.grammar import parse_formula

  return parse_formula(text, lang or EMPTY_LANGUAGE, mode="object")


def variables(f: Formula) -> Iterator[Variable]:
  """Every variable occurrence, binders included, in prefix order."""
  if isinstance(f, FormulaMV):
    yield f.var
  elif isinstance(f, Equals):
    yield f.left
    yield f.right
  elif isinstance(f, Pred):
    yield from f.args
  elif isinstance(f, Not):
    yield from variables(f.body)
  elif isinstance(f, Implies):
    yield from variables(f.left)
    yield from variables(f.right)
  elif isinstance(f, Forall):
    yield f.var
    yield from variables(f.body)
  else:
    raise TypeError(f"not a formula: {f!r}")


def occurring(t) -> FrozenSet[Variable]:
  """OC of a formula, a variable, a scheme or an iterable of formulas."""
  if isinstance(t, Variable):
    return frozenset([t])
  if isinstance(t, ATOMS + (Not, Implies, Forall)):
    return frozenset(variables(t))
  if hasattr(t, "hypotheses") and hasattr(t, "conclusion"):
    found: Set[Variable] = set(variables(t.conclusion))
    for h in t.hypotheses:
      found.update(variables(h))
    return frozenset(found)
  found = set()
  for item in t:
    found.update(occurring(item))
  return frozenset(found)


def height(f: Formula) -> int:
  if isinstance(f, ATOMS):
    return 1
  if isinstance(f, (Not, Forall)):
    return 1 + height(f.body)
  if isinstance(f, Implies):
    return 1 + max(height(f.left), height(f.right))
  raise TypeError(f"not a formula: {f!r}")


def quantifier_depth(f: Formula) -> int:
  if isinstance(f, ATOMS):
    return 0
  if isinstance(f, Not):
    return quantifier_depth(f.body)
  if isinstance(f, Forall):
    return 1 + quantifier_depth(f.body)
  return max(quantifier_depth(f.left), quantifier_depth(f.right))


def free_vars(f: Formula) -> FrozenSet[Variable]:
  """Variables with a free occurrence (binding only matters for x and v)."""
  if isinstance(f, FormulaMV):
    return frozenset([f.var])
  if isinstance(f, Equals):
    return frozenset([f.left, f.right])
  if isinstance(f, Pred):
    return frozenset(f.args)
  if isinstance(f, Not):
    return free_vars(f.body)
  if isinstance(f, Implies):
    return free_vars(f.left) | free_vars(f.right)
  if isinstance(f, Forall):
    return free_vars(f.body) - {f.var}
  raise TypeError(f"not a formula: {f!r}")


def max_index(items: Iterable[Variable], kind: Optional[str] = None) -> int:
  """Largest index among the variables (of the given kind), or -1."""
  best = -1
  for var in items:
    if kind is None or var.kind == kind:
      best = max(best, var.index)
  return best


def predicates_in(f: Formula) -> FrozenSet[str]:
  if isinstance(f, Pred):
    return frozenset([f.name])
  if isinstance(f, (FormulaMV, Equals)):
    return frozenset()
  if isinstance(f, (Not, Forall)):
    return predicates_in(f.body)
  return predicates_in(f.left) | predicates_in(f.right)


def has_quantifier(f: Formula) -> bool:
  return quantifier_depth(f) > 0


def map_variables(f: Formula, fn) -> Formula:
  """Rebuild f with every variable (binders included) passed through fn."""
  if isinstance(f, FormulaMV):
    return f
  if isinstance(f, Equals):
    return Equals(fn(f.left), fn(f.right))
  if isinstance(f, Pred):
    return Pred(f.name, tuple(fn(a) for a in f.args))
  if isinstance(f, Not):
    return Not(map_variables(f.body, fn))
  if isinstance(f, Implies):
    return Implies(map_variables(f.left, fn), map_variables(f.right, fn))
  if isinstance(f, Forall):
    return Forall(fn(f.var), map_variables(f.body, fn))
  raise TypeError(f"not a formula: {f!r}")


def subformulas(f: Formula) -> Iterator[Formula]:
  yield f
  if isinstance(f, (Not, Forall)):
    yield from subformulas(f.body)
  elif isinstance(f, Implies):
    yield from subformulas(f.left)
    yield from subformulas(f.right)


def atoms_over(
  vars_: List[Variable], lang: Language = EMPTY_LANGUAGE, fm_count: int = 0
) -> List[Formula]:
  """All atomic formulas over the given variables."""
  atoms: List[Formula] = [FormulaMV(i) for i in range(fm_count)]
  for a in vars_:
    for b in vars_:
      atoms.append(Equals(a, b))
  for name, arity in lang.predicates:
    for args in itertools.product(vars_, repeat=arity):
      atoms.append(Pred(name, tuple(args)))
  return atoms


def formulas_up_to(
  max_height: int, atoms: List[Formula], binders: List[Variable]
) -> List[Formula]:
  """Every formula of height at most max_height over atoms and binders.

  Deterministic order: by height, then construction order.
  """
  if max_height < 1:
    return []
  by_height: List[List[Formula]] = [[], list(atoms)]
  for h in range(2, max_height + 1):
    lower = [f for level in by_height[: h - 1] for f in level]
    top = by_height[h - 1]
    layer: List[Formula] = []
    for f in top:
      layer.append(Not(f))
      for var in binders:
        layer.append(Forall(var, f))
    for left in lower + top:
      for right in top:
        layer.append(Implies(left, right))
    for left in top:
      for right in lower:
        layer.append(Implies(left, right))
    by_height.append(layer)
  return [f for level in by_height for f in level]


def rename(f: Formula, mapping: Dict[Variable, Variable]) -> Formula:
  return map_variables(f, lambda v: mapping.get(v, v))


def random_formula(rng, max_height: int, atoms: List[Formula], binders: List[Variable]) -> Formula:
  """Draw a formula of height at most max_height (seeded callers stay reproducible)."""
  if max_height <= 1 or rng.random() < 0.2:
    return rng.choice(atoms)
  choice = rng.randrange(3) if binders else rng.randrange(2)
  if choice == 0:
    return Not(random_formula(rng, max_height - 1, atoms, binders))
  if choice == 1:
    return Implies(
      random_formula(rng, max_height - 1, atoms, binders),
      random_formula(rng, max_height - 1, atoms, binders),
    )
  return Forall(rng.choice(binders), random_formula(rng, max_height - 1, atoms, binders))
