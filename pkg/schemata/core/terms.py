"""Proof terms: typing by unification and elaboration into proof lines.

A term is built from axiom labels, hypothesis names and lambda-bound names.
Application of a non-rule term is modus ponens; a label whose axiom has
hypotheses consumes its first arguments as premises. Lambdas are removed by
bracket abstraction before typing, using combinators assembled from the
available propositional axioms.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

from schemata.core.proofkernel import AxiomSet, ByAxiom, Hyp, ProofLine, ProofScript
from schemata.core.schemes import Scheme, Substitution
from schemata.core.syntax import (
  Equals,
  FORMULA_MV,
  Forall,
  FormulaMV,
  Implies,
  Not,
  Pred,
  VARIABLE_MV,
  Variable,
  max_index,
  occurring,
  render,
)
from schemata.utils.errors import TermError


@dataclass(frozen=True)
class Leaf:
  name: str
  pins: Substitution = field(default_factory=Substitution.identity)
  location: Optional[str] = field(default=None, compare=False)

  def __str__(self):
    return self.name if self.pins.is_identity() else f"{self.name} {{ {str(self.pins)[2:-2]} }}"


@dataclass(frozen=True)
class App:
  fn: "Term"
  arg: "Term"

  def __str__(self):
    arg = f"( {self.arg} )" if isinstance(self.arg, (App, Lam)) else str(self.arg)
    fn = f"( {self.fn} )" if isinstance(self.fn, Lam) else str(self.fn)
    return f"{fn} {arg}"


@dataclass(frozen=True)
class Lam:
  var: str
  body: "Term"

  def __str__(self):
    return f"lam {self.var} => {self.body}"


Term = Union[Leaf, App, Lam]


# Resolved nodes. Names are split into axiom uses, hypotheses and bound names,
# and rule applications carry their premises explicitly.


@dataclass(frozen=True)
class _Use:
  label: str
  pins: Substitution
  location: Optional[str] = None


@dataclass(frozen=True)
class _HypRef:
  name: str


@dataclass(frozen=True)
class _Bound:
  name: str


@dataclass(frozen=True)
class _App:
  fn: "_Node"
  arg: "_Node"


@dataclass(frozen=True)
class _Rule:
  label: str
  pins: Substitution
  premises: Tuple["_Node", ...]
  location: Optional[str] = None


@dataclass(frozen=True)
class _Lam:
  var: str
  body: "_Node"


_Node = Union[_Use, _HypRef, _Bound, _App, _Rule, _Lam]


@dataclass(frozen=True)
class _FmHole:
  id: int


@dataclass(frozen=True)
class _VarHole:
  id: int


class _Basis:
  """K, I, S-style and B-style combinators as closed terms."""

  def __init__(self, axioms: AxiomSet):
    self.native = "simp" in axioms and "frege" in axioms
    self.has_id = "id" in axioms
    if not self.native and "minimp" not in axioms:
      raise TermError("lambda abstraction needs minimp (or simp and frege) in the axiom set")

  @staticmethod
  def _leaf(label: str) -> _Node:
    return _Use(label, Substitution.identity())

  def _mer(self) -> _Node:
    return self._leaf("minimp")

  def _z(self) -> _Node:
    # Z f g x = g (K x) (f x)
    return _App(self._mer(), self._mer())

  def _r(self) -> _Node:
    # R x y z = x (K z) y
    return _App(_App(self._z(), self._mer()), self._z())

  def _ki(self) -> _Node:
    return _App(self._r(), _App(_App(self._z(), self._mer()), self._r()))

  def _t(self) -> _Node:
    # T x y = y x
    return _App(self._r(), _App(self._z(), self.i()))

  def k(self) -> _Node:
    if self.native:
      return self._leaf("simp")
    return _App(_App(self._z(), self._ki()), self._t())

  def i(self) -> _Node:
    if self.has_id:
      return self._leaf("id")
    if self.native:
      return _App(_App(self._leaf("frege"), self._leaf("simp")), self._leaf("simp"))
    return _App(self._ki(), self._mer())

  def s(self, x: _Node, y: _Node) -> _Node:
    """A term behaving as z => x z (y z)."""
    if self.native:
      return _App(_App(self._leaf("frege"), x), y)
    inner = _App(_App(self._z(), _App(self._t(), self._mer())), _App(self.k(), x))
    return _App(_App(self._z(), y), inner)

  def b(self, x: _Node, y: _Node) -> _Node:
    """A term behaving as z => x (y z)."""
    if self.native:
      return self.s(_App(self.k(), x), y)
    return _App(_App(self._z(), y), _App(self.k(), x))


def _free_in(name: str, node: _Node) -> bool:
  if isinstance(node, _Bound):
    return node.name == name
  if isinstance(node, _App):
    return _free_in(name, node.fn) or _free_in(name, node.arg)
  if isinstance(node, _Rule):
    return any(_free_in(name, p) for p in node.premises)
  if isinstance(node, _Lam):
    return node.var != name and _free_in(name, node.body)
  return False


class _Elaborator:
  def __init__(self, target: Scheme, axioms: AxiomSet, hyp_names: Sequence[str]):
    self.target = target
    self.axioms = axioms
    self.hyps = dict(zip(hyp_names, target.hypotheses))
    self._basis: Optional[_Basis] = None
    self.fm: Dict[int, object] = {}
    self.vr: Dict[int, object] = {}
    self.counter = 0

  @property
  def basis(self) -> _Basis:
    if self._basis is None:
      self._basis = _Basis(self.axioms)
    return self._basis

  # name resolution

  def resolve(self, term: Term, bound: frozenset = frozenset()) -> _Node:
    if isinstance(term, Lam):
      return _Lam(term.var, self.resolve(term.body, bound | {term.var}))
    head, args = term, []
    while isinstance(head, App):
      args.append(head.arg)
      head = head.fn
    args.reverse()
    node = self._resolve_leaf(head, bound) if isinstance(head, Leaf) else self.resolve(head, bound)
    if isinstance(node, _Use):
      arity = len(self.axioms.get(node.label).hypotheses)
      if arity:
        if len(args) < arity:
          raise TermError(
            f"rule '{node.label}' needs {arity} premises, got {len(args)}",
            location=node.location,
          )
        premises = tuple(self.resolve(a, bound) for a in args[:arity])
        node = _Rule(node.label, node.pins, premises, node.location)
        args = args[arity:]
    for a in args:
      node = _App(node, self.resolve(a, bound))
    return node

  def _resolve_leaf(self, leaf: Leaf, bound: frozenset) -> _Node:
    if leaf.name in bound or leaf.name in self.hyps:
      if not leaf.pins.is_identity():
        raise TermError(f"'{leaf.name}' is not an axiom and takes no substitution", location=leaf.location)
      return _Bound(leaf.name) if leaf.name in bound else _HypRef(leaf.name)
    if leaf.name in self.axioms:
      return _Use(leaf.name, leaf.pins, leaf.location)
    raise TermError(f"unknown name '{leaf.name}' in proof term", location=leaf.location)

  # bracket abstraction

  def eliminate(self, node: _Node) -> _Node:
    if isinstance(node, _Lam):
      return self.abstract(node.var, self.eliminate(node.body))
    if isinstance(node, _App):
      return _App(self.eliminate(node.fn), self.eliminate(node.arg))
    if isinstance(node, _Rule):
      return _Rule(node.label, node.pins, tuple(self.eliminate(p) for p in node.premises), node.location)
    return node

  def abstract(self, name: str, node: _Node) -> _Node:
    if not _free_in(name, node):
      return _App(self.basis.k(), node)
    if isinstance(node, _Bound):
      return self.basis.i()
    if isinstance(node, _Rule):
      raise TermError(
        f"'{name}' occurs in a premise of rule '{node.label}' under its lambda",
        location=node.location,
      )
    fn_free, arg_free = _free_in(name, node.fn), _free_in(name, node.arg)
    if not fn_free:
      if isinstance(node.arg, _Bound):
        return node.fn
      return self.basis.b(node.fn, self.abstract(name, node.arg))
    if not arg_free:
      return self.basis.s(self.abstract(name, node.fn), _App(self.basis.k(), node.arg))
    return self.basis.s(self.abstract(name, node.fn), self.abstract(name, node.arg))

  # unification

  def _fresh_fm(self) -> _FmHole:
    self.counter += 1
    return _FmHole(self.counter)

  def _fresh_var(self) -> _VarHole:
    self.counter += 1
    return _VarHole(self.counter)

  def _walk(self, f):
    while isinstance(f, _FmHole) and f.id in self.fm:
      f = self.fm[f.id]
    return f

  def _walk_var(self, v):
    while isinstance(v, _VarHole) and v.id in self.vr:
      v = self.vr[v.id]
    return v

  def zonk(self, f):
    f = self._walk(f)
    if isinstance(f, (_FmHole, FormulaMV)):
      return f
    if isinstance(f, Equals):
      return Equals(self._walk_var(f.left), self._walk_var(f.right))
    if isinstance(f, Pred):
      return Pred(f.name, tuple(self._walk_var(a) for a in f.args))
    if isinstance(f, Not):
      return Not(self.zonk(f.body))
    if isinstance(f, Implies):
      return Implies(self.zonk(f.left), self.zonk(f.right))
    return Forall(self._walk_var(f.var), self.zonk(f.body))

  def show(self, f) -> str:
    f = self.zonk(f)
    if isinstance(f, _FmHole):
      return f"?{f.id}"
    if isinstance(f, FormulaMV):
      return render(f)
    if isinstance(f, Equals):
      return f"{_show_var(f.left)} = {_show_var(f.right)}"
    if isinstance(f, Pred):
      return " ".join([f.name] + [_show_var(a) for a in f.args])
    if isinstance(f, Not):
      return f"-. {self.show(f.body)}"
    if isinstance(f, Implies):
      return f"( {self.show(f.left)} -> {self.show(f.right)} )"
    return f"A. {_show_var(f.var)} {self.show(f.body)}"

  def _occurs(self, hole: _FmHole, f) -> bool:
    f = self._walk(f)
    if f == hole:
      return True
    if isinstance(f, (Not, Forall)):
      return self._occurs(hole, f.body)
    if isinstance(f, Implies):
      return self._occurs(hole, f.left) or self._occurs(hole, f.right)
    return False

  def _bind(self, hole: _FmHole, f) -> None:
    if self._occurs(hole, f):
      raise TermError(f"cannot solve ?{hole.id} = {self.show(f)} (cyclic)")
    self.fm[hole.id] = f

  def unify(self, a, b, where: str) -> None:
    a, b = self._walk(a), self._walk(b)
    if a == b:
      return
    if isinstance(a, _FmHole):
      self._bind(a, b)
      return
    if isinstance(b, _FmHole):
      self._bind(b, a)
      return
    mismatch = TermError(f"{where}: cannot unify '{self.show(a)}' with '{self.show(b)}'")
    if type(a) is not type(b) or isinstance(a, FormulaMV):
      raise mismatch
    if isinstance(a, Equals):
      self.unify_var(a.left, b.left, mismatch)
      self.unify_var(a.right, b.right, mismatch)
    elif isinstance(a, Pred):
      if a.name != b.name or len(a.args) != len(b.args):
        raise mismatch
      for x, y in zip(a.args, b.args):
        self.unify_var(x, y, mismatch)
    elif isinstance(a, Not):
      self.unify(a.body, b.body, where)
    elif isinstance(a, Implies):
      self.unify(a.left, b.left, where)
      self.unify(a.right, b.right, where)
    else:
      self.unify_var(a.var, b.var, mismatch)
      self.unify(a.body, b.body, where)

  def unify_var(self, a, b, mismatch: TermError) -> None:
    a, b = self._walk_var(a), self._walk_var(b)
    if a == b:
      return
    if isinstance(a, _VarHole):
      self.vr[a.id] = b
    elif isinstance(b, _VarHole):
      self.vr[b.id] = a
    else:
      raise mismatch

  # typing

  def _instance(self, label: str, pins: Substitution):
    """Hypotheses, conclusion and environment of a fresh instance."""
    axiom = self.axioms.get(label)
    env = {}
    for var in sorted(occurring(axiom)):
      if var in pins.support():
        env[var] = pins.image(var)
      else:
        env[var] = self._fresh_fm() if var.kind == FORMULA_MV else self._fresh_var()
    stray = pins.support() - set(env)
    if stray:
      names = ", ".join(str(v) for v in sorted(stray))
      raise TermError(f"'{label}' has no metavariable {names} to pin")
    return [_plug(h, env) for h in axiom.hypotheses], _plug(axiom.conclusion, env), env

  def infer(self, node: _Node) -> "_Typed":
    if isinstance(node, _HypRef):
      return _Typed(self.hyps[node.name], hyp=node.name)
    if isinstance(node, _Bound):
      raise TermError(f"'{node.name}' is not bound here")
    if isinstance(node, _Use):
      hyps, concl, env = self._instance(node.label, node.pins)
      return _Typed(concl, label=node.label, env=env)
    if isinstance(node, _Rule):
      label, pins, args, where = node.label, node.pins, node.premises, node.label
    else:
      if "mp" not in self.axioms:
        raise TermError("application needs mp in the axiom set")
      label, pins, args, where = "mp", Substitution.identity(), (node.arg, node.fn), "application"
    hyps, concl, env = self._instance(label, pins)
    premises = []
    for hyp, arg in zip(hyps, args):
      typed = self.infer(arg)
      self.unify(hyp, typed.formula, where)
      premises.append(typed)
    return _Typed(concl, label=label, env=env, premises=premises)


@dataclass
class _Typed:
  formula: object
  hyp: Optional[str] = None
  label: Optional[str] = None
  env: Dict[Variable, object] = field(default_factory=dict)
  premises: List["_Typed"] = field(default_factory=list)


def _show_var(v) -> str:
  return f"?x{v.id}" if isinstance(v, _VarHole) else str(v)


def _plug(f, env):
  if isinstance(f, FormulaMV):
    return env[f.var]
  if isinstance(f, Equals):
    return Equals(env[f.left], env[f.right])
  if isinstance(f, Pred):
    return Pred(f.name, tuple(env[a] for a in f.args))
  if isinstance(f, Not):
    return Not(_plug(f.body, env))
  if isinstance(f, Implies):
    return Implies(_plug(f.left, env), _plug(f.right, env))
  return Forall(env[f.var], _plug(f.body, env))


class _Emitter:
  """Grounds leftover holes to dummies and writes the lines."""

  def __init__(self, elab: _Elaborator, floor: Dict[str, int]):
    self.elab = elab
    self.next = dict(floor)
    self.dummies: Dict[object, object] = {}
    self.lines: List[ProofLine] = []
    self.seen: Dict[object, int] = {}

  def _dummy(self, hole):
    if hole not in self.dummies:
      kind = FORMULA_MV if isinstance(hole, _FmHole) else VARIABLE_MV
      self.next[kind] += 1
      index = self.next[kind]
      self.dummies[hole] = FormulaMV(index) if kind == FORMULA_MV else Variable(VARIABLE_MV, index)
    return self.dummies[hole]

  def var(self, v) -> Variable:
    v = self.elab._walk_var(v)
    return self._dummy(v) if isinstance(v, _VarHole) else v

  def ground(self, f):
    f = self.elab._walk(f)
    if isinstance(f, _FmHole):
      return self._dummy(f)
    if isinstance(f, FormulaMV):
      return f
    if isinstance(f, Equals):
      return Equals(self.var(f.left), self.var(f.right))
    if isinstance(f, Pred):
      return Pred(f.name, tuple(self.var(a) for a in f.args))
    if isinstance(f, Not):
      return Not(self.ground(f.body))
    if isinstance(f, Implies):
      return Implies(self.ground(f.left), self.ground(f.right))
    return Forall(self.var(f.var), self.ground(f.body))

  def emit(self, typed: _Typed) -> int:
    statement = self.ground(typed.formula)
    if statement in self.seen:
      return self.seen[statement]
    if typed.hyp is not None:
      just = Hyp(typed.hyp)
    else:
      premises = tuple(self.emit(p) for p in typed.premises)
      pairs = [(var, self.var(img) if var.kind == VARIABLE_MV else self.ground(img)) for var, img in typed.env.items()]
      just = ByAxiom(typed.label, Substitution.from_pairs(pairs), premises)
    self.lines.append(ProofLine(statement, just))
    self.seen[statement] = len(self.lines)
    return len(self.lines)


def elaborate_term(
  term: Term,
  target: Scheme,
  axioms: AxiomSet,
  hyp_names: Sequence[str] = (),
  name: str = "proof",
) -> ProofScript:
  """Turn a proof term into an explicit proof of target.

  Args:
    term: The proof term
    target: Scheme the term must prove; its hypotheses are usable by name
    axioms: Labels the term may mention
    hyp_names: Names of the target hypotheses (h1, h2, ... by default)
    name: Name of the resulting proof

  Returns:
    A ProofScript whose lines the kernel can check

  Raises:
    TermError: The term is ill-typed or cannot be abstracted
  """
  names = tuple(hyp_names) or tuple(f"h{k}" for k in range(1, len(target.hypotheses) + 1))
  elab = _Elaborator(target, axioms, names)
  node = elab.eliminate(elab.resolve(term))
  typed = elab.infer(node)
  elab.unify(typed.formula, target.conclusion, "conclusion")

  used = set(occurring(target))
  for leaf_pins in _all_pins(term):
    for var, img in leaf_pins.items():
      used |= {var} | occurring(img)
  floor = {FORMULA_MV: max_index(used, FORMULA_MV), VARIABLE_MV: max_index(used, VARIABLE_MV)}
  emitter = _Emitter(elab, floor)
  last = emitter.emit(typed)
  if last != len(emitter.lines):
    # the conclusion was already derived earlier; repeat that line at the end
    emitter.lines.append(emitter.lines[last - 1])
  proof = ProofScript(target, tuple(emitter.lines), names, name)
  logging.debug(f"{name}: term elaborated to {len(proof.lines)} lines, {len(emitter.dummies)} dummies")
  return proof


def _all_pins(term: Term):
  if isinstance(term, Leaf):
    yield term.pins
  elif isinstance(term, App):
    yield from _all_pins(term.fn)
    yield from _all_pins(term.arg)
  else:
    yield from _all_pins(term.body)
