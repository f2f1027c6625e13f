"""Object variables, object-instances and finite first-order models."""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from schemata.core.schemes import DVSet, Scheme, sorted_pairs
from schemata.core.syntax import (
  Equals,
  FORMULA_MV,
  Forall,
  Formula,
  FormulaMV,
  Implies,
  Not,
  OBJECT_VAR,
  Pred,
  V,
  VARIABLE_MV,
  Variable,
  X,
  atoms_over,
  free_vars,
  occurring,
  predicates_in,
  quantifier_depth,
  render,
)
from schemata.utils.errors import (
  IllegitimateSubstitution,
  MalformedModel,
  UnassignedVariable,
  UnsupportedScheme,
)


@dataclass(frozen=True)
class ObjectSubstitution:
  """Sends variable metavariables to object variables and formula ones to formulas."""

  vr_map: Mapping[Variable, Variable] = field(default_factory=dict)
  fm_map: Mapping[Variable, Formula] = field(default_factory=dict)

  __hash__ = None

  def __post_init__(self):
    vr, fm = {}, {}
    for key, value in dict(self.vr_map).items():
      if key.kind != VARIABLE_MV or value.kind != OBJECT_VAR:
        raise TypeError(f"object substitution must send x to v, got {key} := {value}")
      vr[key] = value
    for key, value in dict(self.fm_map).items():
      if isinstance(key, int):
        key = Variable(FORMULA_MV, key)
      bad = [v for v in occurring(value) if v.kind != OBJECT_VAR]
      if key.kind != FORMULA_MV or bad:
        raise TypeError(f"object substitution must send {key} to an object formula")
      fm[key] = value
    object.__setattr__(self, "vr_map", vr)
    object.__setattr__(self, "fm_map", fm)

  def image(self, var: Variable):
    if var.kind == FORMULA_MV:
      if var not in self.fm_map:
        raise UnassignedVariable(f"no object formula for {var}", witness=str(var))
      return self.fm_map[var]
    if var not in self.vr_map:
      raise UnassignedVariable(f"no object variable for {var}", witness=str(var))
    return self.vr_map[var]

  def __str__(self):
    parts = [f"{k} := {render(v)}" for k, v in sorted(self.fm_map.items())]
    parts += [f"{k} := {v}" for k, v in sorted(self.vr_map.items())]
    return "( " + " ; ".join(parts) + " )"


@dataclass(frozen=True)
class FormulaWithHypotheses:
  hypotheses: Tuple[Formula, ...]
  conclusion: Formula

  def __str__(self):
    text = render(self.conclusion)
    if self.hypotheses:
      text = " & ".join(render(h) for h in self.hypotheses) + " => " + text
    return text


def apply_object(tau: ObjectSubstitution, m: Formula) -> Formula:
  if isinstance(m, FormulaMV):
    return tau.image(m.var)
  if isinstance(m, Equals):
    return Equals(tau.image(m.left), tau.image(m.right))
  if isinstance(m, Pred):
    return Pred(m.name, tuple(tau.image(a) for a in m.args))
  if isinstance(m, Not):
    return Not(apply_object(tau, m.body))
  if isinstance(m, Implies):
    return Implies(apply_object(tau, m.left), apply_object(tau, m.right))
  if isinstance(m, Forall):
    return Forall(tau.image(m.var), apply_object(tau, m.body))
  raise TypeError(f"not a formula: {m!r}")


def object_legitimate(tau: ObjectSubstitution, scheme: Scheme):
  for a, b in sorted_pairs(scheme.dv):
    shared = occurring(tau.image(a)) & occurring(tau.image(b))
    if shared:
      return False, ((a, b), min(shared))
  return True, None


def object_instantiate(tau: ObjectSubstitution, scheme: Scheme) -> FormulaWithHypotheses:
  """Object-instance of a scheme; DV data does not survive."""
  ok, witness = object_legitimate(tau, scheme)
  if not ok:
    (a, b), shared = witness
    raise IllegitimateSubstitution(f"images of {a} and {b} share {shared}", witness=witness)
  return FormulaWithHypotheses(
    tuple(apply_object(tau, h) for h in scheme.hypotheses),
    apply_object(tau, scheme.conclusion),
  )


def embed_object_like(item) -> Scheme:
  """v_j becomes x_j and every pair of occurring metavariables becomes DV."""
  if isinstance(item, FormulaWithHypotheses):
    hyps, concl = item.hypotheses, item.conclusion
  else:
    hyps, concl = (), item
  mapping = lambda f: _rename_kind(f, OBJECT_VAR, VARIABLE_MV)
  hyps = tuple(mapping(h) for h in hyps)
  concl = mapping(concl)
  oc = sorted(occurring(hyps) | occurring(concl))
  dv = frozenset(frozenset(p) for p in itertools.combinations(oc, 2))
  return Scheme(hyps, concl, dv)


def _rename_kind(f: Formula, old: str, new: str) -> Formula:
  from schemata.core.syntax import map_variables

  return map_variables(f, lambda v: Variable(new, v.index) if v.kind == old else v)


@dataclass(frozen=True)
class FirstOrderModel:
  """A finite structure; equality is any binary relation, quantifiers may range over a subset."""

  size: int
  eq_graph: FrozenSet[Tuple[int, int]]
  predicates: Mapping[str, FrozenSet[Tuple[int, ...]]] = field(default_factory=dict)
  quant_domain: Optional[FrozenSet[int]] = None

  __hash__ = None

  def __post_init__(self):
    if self.size < 1:
      raise MalformedModel("domain must be nonempty")
    domain = set(range(self.size))
    eq = frozenset(tuple(p) for p in self.eq_graph)
    for pair in eq:
      if len(pair) != 2 or not set(pair) <= domain:
        raise MalformedModel(f"equality pair {pair} outside the domain")
    preds = {}
    for name, rows in dict(self.predicates).items():
      rows = frozenset(tuple(r) for r in rows)
      widths = {len(r) for r in rows}
      if len(widths) > 1:
        raise MalformedModel(f"predicate {name} has tuples of different widths")
      for row in rows:
        if not set(row) <= domain:
          raise MalformedModel(f"predicate {name} tuple {row} outside the domain")
      preds[name] = rows
    quant = frozenset(domain if self.quant_domain is None else self.quant_domain)
    if not quant or not quant <= domain:
      raise MalformedModel("quantification domain must be a nonempty subset of the domain")
    object.__setattr__(self, "eq_graph", eq)
    object.__setattr__(self, "predicates", preds)
    object.__setattr__(self, "quant_domain", quant)

  @classmethod
  def identity(cls, size: int, predicates=None) -> "FirstOrderModel":
    return cls(size, frozenset((d, d) for d in range(size)), predicates or {})

  @property
  def domain(self) -> range:
    return range(self.size)

  def check_arities(self, lang) -> None:
    for name, arity in lang.predicates:
      rows = self.predicates.get(name, frozenset())
      if any(len(r) != arity for r in rows):
        raise MalformedModel(f"predicate {name} needs {arity}-tuples")


Assignment = Mapping[Variable, int]
FormulaInterp = Mapping[Variable, Callable[[Assignment], bool]]


def fo_eval(
  model: FirstOrderModel,
  f: Formula,
  asg: Assignment,
  fm_interp: Optional[FormulaInterp] = None,
) -> bool:
  """Classical evaluation with equality read from eq_graph.

  Formula metavariables are only allowed when fm_interp gives them a meaning.
  """
  if isinstance(f, Equals):
    return (_lookup(asg, f.left), _lookup(asg, f.right)) in model.eq_graph
  if isinstance(f, Pred):
    row = tuple(_lookup(asg, a) for a in f.args)
    return row in model.predicates.get(f.name, frozenset())
  if isinstance(f, Not):
    return not fo_eval(model, f.body, asg, fm_interp)
  if isinstance(f, Implies):
    return (not fo_eval(model, f.left, asg, fm_interp)) or fo_eval(model, f.right, asg, fm_interp)
  if isinstance(f, Forall):
    local = dict(asg)
    for d in sorted(model.quant_domain):
      local[f.var] = d
      if not fo_eval(model, f.body, local, fm_interp):
        return False
    return True
  if isinstance(f, FormulaMV):
    if not fm_interp or f.var not in fm_interp:
      raise UnassignedVariable(f"no interpretation for {f.var}", witness=str(f.var))
    return fm_interp[f.var](asg)
  raise TypeError(f"not a formula: {f!r}")


def _lookup(asg: Assignment, var: Variable) -> int:
  if var not in asg:
    raise UnassignedVariable(f"{var} is not assigned", witness=str(var))
  return asg[var]


def fo_valid(model: FirstOrderModel, f: Formula, over: Sequence[Variable] = None) -> Optional[Dict[Variable, int]]:
  """None if f holds under every assignment, else a falsifying assignment."""
  vars_ = sorted(set(over) if over is not None else free_vars(f))
  for values in itertools.product(model.domain, repeat=len(vars_)):
    asg = dict(zip(vars_, values))
    if not fo_eval(model, f, asg):
      return asg
  return None


def set_partitions(items: Sequence) -> Iterator[List[List]]:
  """All set partitions, blocks in first-appearance order."""
  items = list(items)
  if not items:
    yield []
    return
  first, rest = items[0], items[1:]
  for sub in set_partitions(rest):
    yield [[first]] + sub
    for k in range(len(sub)):
      yield sub[:k] + [[first] + sub[k]] + sub[k + 1 :]


def identification_patterns(xs: Sequence[Variable], dv: DVSet) -> List[Dict[Variable, int]]:
  """Ways to send variable metavariables to object variables up to renaming.

  DV-paired metavariables never share a block. Blocks are numbered in order of
  their smallest member, so the output is deterministic.
  """
  xs = sorted(xs)
  patterns = []
  for partition in set_partitions(xs):
    if any(frozenset((a, b)) in dv for block in partition for a, b in itertools.combinations(block, 2)):
      continue
    blocks = sorted((sorted(block) for block in partition), key=lambda b: b[0])
    patterns.append({x: k for k, block in enumerate(blocks) for x in block})
  patterns.sort(key=lambda p: [p[x] for x in xs])
  return patterns


def pattern_substitution(pattern: Dict[Variable, int]) -> ObjectSubstitution:
  return ObjectSubstitution({x: V(k) for x, k in pattern.items()}, {})


def require_pure_equality(scheme: Scheme, allow_fm: bool = False) -> None:
  if scheme.hypotheses:
    raise UnsupportedScheme("scheme has hypotheses", witness=str(scheme))
  if not allow_fm and scheme.has_formula_mv():
    raise UnsupportedScheme("scheme has formula metavariables", witness=str(scheme))
  if predicates_in(scheme.conclusion):
    raise UnsupportedScheme("scheme uses nonlogical predicates", witness=str(scheme))


@dataclass
class EqTruthReport:
  verdict: bool
  by_size: Dict[int, bool]
  bound: int
  exact: bool
  witness: Optional[str] = None


def eq_truth_by_size(scheme: Scheme, max_domain: int = 4, min_size: int = 1) -> EqTruthReport:
  """Truth of a pure-equality scheme per domain size.

  Sizes run up to quantifier depth plus free variables (capped by max_domain);
  beyond that bound pure-identity structures are indistinguishable, so a
  pattern keeps the verdict of its own bound at every larger size.
  """
  require_pure_equality(scheme)
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  cases = []
  exact = True
  for pattern in identification_patterns(xs, scheme.dv):
    formula = apply_object(pattern_substitution(pattern), scheme.conclusion)
    free = sorted(free_vars(formula))
    bound = max(1, quantifier_depth(formula) + len(free))
    if bound > max_domain:
      exact = False
      logging.debug(f"Size bound {bound} for {render(formula)} capped at {max_domain}")
    cases.append((formula, free, min(bound, max_domain)))
  top = max([limit for _, _, limit in cases] + [min_size])
  by_size: Dict[int, bool] = {n: True for n in range(min_size, top + 1)}
  witness = None
  for formula, free, limit in cases:
    for n in range(min_size, top + 1):
      bad = fo_valid(FirstOrderModel.identity(min(n, limit)), formula, free)
      if bad is None:
        continue
      by_size[n] = False
      if witness is None:
        shown = ", ".join(f"{k}={v}" for k, v in sorted(bad.items()))
        witness = f"{render(formula)} fails in size {min(n, limit)} at [{shown}]"
  return EqTruthReport(all(by_size.values()), by_size, top, exact, witness)


def decide_eq_truth(scheme: Scheme, max_domain: int = 4) -> bool:
  return eq_truth_by_size(scheme, max_domain).verdict


@dataclass
class Verdict:
  """Outcome of checking one scheme in one model."""

  ok: bool
  bounds: Dict[str, int] = field(default_factory=dict)
  witness: Optional[str] = None
  exact: bool = True

  def describe(self) -> str:
    state = "validated" if self.ok else "falsified"
    extra = f" by {self.witness}" if self.witness else ""
    return f"{state}{extra}"


Placement = Dict[Variable, Variable]


def plain_placements(pattern: Dict[Variable, int]) -> List[Placement]:
  return [{x: V(k) for x, k in pattern.items()}]


def _blocked_for(scheme: Scheme, placement: Placement, fm: Variable) -> FrozenSet[Variable]:
  blocked = set()
  for pair in scheme.dv:
    if fm in pair:
      (other,) = pair - {fm}
      if other.kind == VARIABLE_MV:
        blocked.add(placement[other])
  return frozenset(blocked)


def _truth_functions(model: FirstOrderModel, args: List[Variable]):
  points = list(itertools.product(model.domain, repeat=len(args)))
  for bits in itertools.product((False, True), repeat=len(points)):
    yield dict(zip(points, bits))


def _concrete_candidates(lang, args: List[Variable], spare: Variable) -> List[Formula]:
  if args:
    atoms = atoms_over(args, lang)
  else:
    atoms = [Forall(spare, Equals(spare, spare))]
  return atoms + [Not(a) for a in atoms]


def model_language(model: FirstOrderModel):
  from schemata.core.syntax import Language

  return Language(
    tuple((name, len(next(iter(rows))) if rows else 0) for name, rows in sorted(model.predicates.items()))
  )


def fo_validates_scheme(
  model: FirstOrderModel,
  scheme: Scheme,
  surrogate_support: int = 0,
  lang=None,
  fixed: Optional[Mapping[Variable, int]] = None,
  placements: Optional[Callable[[Dict[Variable, int]], List[Placement]]] = None,
) -> Verdict:
  """Check that every object-instance of scheme holds in model.

  Concrete instances with atomic images are tried first so that failures come
  with a formula witness; then formula metavariables range over all
  truth-functions of their admissible variables (plus surrogate_support fresh
  ones).

  Args:
    model: The structure
    scheme: Scheme to validate; rules need true hypotheses to force the conclusion
    surrogate_support: Fresh variables a formula metavariable may also depend on
    lang: Predicates usable in concrete images (defaults to the model's)
    fixed: Object variables pinned to a domain element in every assignment
    placements: Maps an identification pattern to the object variables its
      blocks may be sent to (default: block k goes to v_k)

  Returns:
    Verdict; a falsified verdict is exact when it names a concrete instance
  """
  lang = model_language(model) if lang is None else lang
  fixed = dict(fixed or {})
  place = placements or plain_placements
  bounds = {"support": surrogate_support, "size": model.size}
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  for pattern in identification_patterns(xs, scheme.dv):
    for placement in place(pattern):
      failure = _check_placement(model, scheme, placement, fms, surrogate_support, lang, fixed)
      if failure is not None:
        return Verdict(False, bounds, failure[0], exact=failure[1])
  return Verdict(True, bounds)


def _check_placement(model, scheme, placement, fms, support, lang, fixed):
  used = sorted(set(placement.values()) | set(fixed))
  fresh_start = max((v.index for v in used), default=-1) + 1
  fresh = [V(fresh_start + s) for s in range(support)]
  arg_vars = {fm: [v for v in used if v not in _blocked_for(scheme, placement, fm)] + fresh for fm in fms}
  free = [v for v in used + fresh if v not in fixed]
  spare = V(fresh_start + support)

  candidates = [_concrete_candidates(lang, arg_vars[fm], spare) for fm in fms]
  for images in itertools.product(*candidates):
    tau = ObjectSubstitution(placement, dict(zip(fms, images)))
    try:
      inst = object_instantiate(tau, scheme)
    except IllegitimateSubstitution:
      continue
    bad = _instance_failure(model, inst, free, fixed)
    if bad is not None:
      shown = ", ".join(f"{k}={v}" for k, v in sorted(bad.items()))
      return f"{tau} gives {inst} false at [{shown}]", True

  hyps = [_surrogate(h, placement) for h in scheme.hypotheses]
  concl = _surrogate(scheme.conclusion, placement)
  tables = [list(_truth_functions(model, arg_vars[fm])) for fm in fms]
  for choice in itertools.product(*tables):
    interp = {fm: _table_reader(arg_vars[fm], table) for fm, table in zip(fms, choice)}
    if all(_valid_with(model, h, free, interp, fixed) is None for h in hyps):
      if _valid_with(model, concl, free, interp, fixed) is not None:
        shown = " ".join(f"{x}->{v}" for x, v in sorted(placement.items()))
        return f"surrogate counterexample with {{{shown}}}", False
  return None


def pattern_text(pattern: Dict[Variable, int]) -> str:
  return "{" + " ".join(f"{x}->v{k}" for x, k in sorted(pattern.items())) + "}"


def _table_reader(args: List[Variable], table):
  def read(asg):
    return table[tuple(asg[a] for a in args)]

  return read


def _surrogate(m: Formula, placement: Placement) -> Formula:
  from schemata.core.syntax import map_variables

  return map_variables(m, lambda v: placement.get(v, v))


def _assignments(model: FirstOrderModel, vars_: Sequence[Variable], fixed: Mapping[Variable, int]):
  vars_ = [v for v in vars_ if v not in fixed]
  for values in itertools.product(model.domain, repeat=len(vars_)):
    asg = dict(fixed)
    asg.update(zip(vars_, values))
    yield asg


def _valid_with(model, f, vars_, interp, fixed) -> Optional[Dict[Variable, int]]:
  for asg in _assignments(model, vars_, fixed):
    if not fo_eval(model, f, asg, interp):
      return asg
  return None


def _instance_failure(model, inst: FormulaWithHypotheses, vars_, fixed) -> Optional[Dict[Variable, int]]:
  vars_ = sorted(set(vars_) | occurring(inst.hypotheses) | occurring(inst.conclusion))
  for h in inst.hypotheses:
    if _valid_with(model, h, vars_, None, fixed) is not None:
      return None
  return _valid_with(model, inst.conclusion, vars_, None, fixed)
