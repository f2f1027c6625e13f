"""A small verifier for a subset of the Metamath language.

Supported: $c $v $f $e $a $p $d, ${ $} scopes, $( $) comments and
uncompressed proofs (``?`` marks a missing step). Everything else is
rejected at parse time.
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterator, List, Optional, Set, Tuple, Union

from schemata.utils.errors import (
  DisjointViolation,
  DuplicateLabel,
  FinalStackNotSingleton,
  LexError,
  MMError,
  MMWrongConclusion,
  ScopeError,
  StackUnderflow,
  SubstitutionMismatch,
)

KEYWORDS = {"$c", "$v", "$f", "$e", "$a", "$p", "$=", "$.", "${", "$}", "$d", "$(", "$)"}

Expr = Tuple[str, ...]


@dataclass
class Hypothesis:
  label: str
  kind: str  # "f" or "e"
  expr: Expr

  @property
  def variable(self) -> str:
    return self.expr[1]


@dataclass
class Assertion:
  label: str
  kind: str  # "a" or "p"
  expr: Expr
  hyps: List[Hypothesis]
  dv: FrozenSet[FrozenSet[str]]
  proof: Optional[List[str]] = None
  # every $d and hypothesis active where a $p was stated, for its own proof
  active_dv: FrozenSet[FrozenSet[str]] = frozenset()
  active_hyps: Dict[str, Hypothesis] = field(default_factory=dict)
  line: int = 0


@dataclass
class _Scope:
  variables: Set[str] = field(default_factory=set)
  floating: List[Hypothesis] = field(default_factory=list)
  essential: List[Hypothesis] = field(default_factory=list)
  hyps_in_order: List[Hypothesis] = field(default_factory=list)
  dv: Set[FrozenSet[str]] = field(default_factory=set)


@dataclass
class MMDatabase:
  constants: List[str] = field(default_factory=list)
  variables: List[str] = field(default_factory=list)
  hypotheses: Dict[str, Hypothesis] = field(default_factory=dict)
  assertions: Dict[str, Assertion] = field(default_factory=dict)
  labels: List[str] = field(default_factory=list)
  comments: List[str] = field(default_factory=list)

  def statement(self, label: str) -> Union[Hypothesis, Assertion]:
    if label in self.assertions:
      return self.assertions[label]
    return self.hypotheses[label]

  def render(self, expr: Expr) -> str:
    return " ".join(expr)


def _tokens(text: str) -> Iterator[Tuple[str, int]]:
  for lineno, line in enumerate(text.splitlines(), start=1):
    for tok in line.split():
      yield tok, lineno


class _Parser:
  def __init__(self, text: str):
    self.toks = list(_tokens(text))
    self.pos = 0
    self.db = MMDatabase()
    self.scopes: List[_Scope] = [_Scope()]
    self.constants: Set[str] = set()

  def _next(self) -> Tuple[str, int]:
    if self.pos >= len(self.toks):
      raise LexError("unexpected end of file")
    tok = self.toks[self.pos]
    self.pos += 1
    return tok

  def _until(self, end: str) -> List[str]:
    out = []
    while True:
      tok, line = self._next()
      if tok == end:
        return out
      if tok.startswith("$"):
        self._check_keyword(tok, line)
        raise LexError(f"'{tok}' inside a statement", location=f"line {line}")
      out.append(tok)

  @staticmethod
  def _check_keyword(tok: str, line: int) -> None:
    if tok not in KEYWORDS:
      raise LexError(f"unsupported token '{tok}'", location=f"line {line}")

  # scope helpers

  def _active_vars(self) -> Set[str]:
    return set().union(*(s.variables for s in self.scopes))

  def _active_hyps(self) -> List[Hypothesis]:
    return [h for s in self.scopes for h in s.hyps_in_order]

  def _active_dv(self) -> Set[FrozenSet[str]]:
    return set().union(*(s.dv for s in self.scopes))

  def _floating_for(self, var: str) -> Optional[Hypothesis]:
    for scope in reversed(self.scopes):
      for h in scope.floating:
        if h.variable == var:
          return h
    return None

  def _check_symbols(self, expr: List[str], line: int) -> None:
    active = self._active_vars()
    if not expr or expr[0] not in self.constants:
      raise ScopeError("statement must start with a declared constant", location=f"line {line}")
    for sym in expr:
      if sym not in self.constants and sym not in active:
        raise ScopeError(f"symbol '{sym}' is not declared", location=f"line {line}")
      if sym in active and self._floating_for(sym) is None:
        raise ScopeError(f"variable '{sym}' has no active $f", location=f"line {line}")

  def _new_label(self, label: str, line: int) -> None:
    if label in self.db.hypotheses or label in self.db.assertions:
      raise DuplicateLabel(f"label '{label}' used twice", location=f"line {line}")
    if label in self.constants or label in self._active_vars():
      raise DuplicateLabel(f"label '{label}' clashes with a math symbol", location=f"line {line}")
    self.db.labels.append(label)

  def _frame(self, expr: Expr) -> Tuple[List[Hypothesis], FrozenSet[FrozenSet[str]]]:
    essential = [h for s in self.scopes for h in s.essential]
    mand_vars = {sym for sym in expr if sym in self._active_vars()}
    for h in essential:
      mand_vars |= {sym for sym in h.expr if sym in self._active_vars()}
    hyps = [h for h in self._active_hyps() if h.kind == "e" or h.variable in mand_vars]
    dv = frozenset(p for p in self._active_dv() if p <= mand_vars)
    return hyps, dv

  def parse(self) -> MMDatabase:
    while self.pos < len(self.toks):
      tok, line = self._next()
      if tok == "$(":
        self._comment()
      elif tok == "${":
        self.scopes.append(_Scope())
      elif tok == "$}":
        if len(self.scopes) == 1:
          raise ScopeError("'$}' without matching '${'", location=f"line {line}")
        self.scopes.pop()
      elif tok == "$c":
        self._declare_constants(line)
      elif tok == "$v":
        self._declare_variables(line)
      elif tok == "$d":
        symbols = self._until("$.")
        unknown = [s for s in symbols if s not in self._active_vars()]
        if unknown:
          raise ScopeError(f"$d on undeclared variables {unknown}", location=f"line {line}")
        for a, b in itertools.combinations(symbols, 2):
          if a == b:
            raise ScopeError(f"$d repeats '{a}'", location=f"line {line}")
          self.scopes[-1].dv.add(frozenset((a, b)))
      elif tok.startswith("$"):
        self._check_keyword(tok, line)
        raise LexError(f"unexpected '{tok}'", location=f"line {line}")
      else:
        self._labeled(tok, line)
    if len(self.scopes) != 1:
      raise ScopeError("unclosed '${' at end of file")
    logging.debug(f"Parsed {len(self.db.labels)} labeled statements")
    return self.db

  def _comment(self) -> None:
    words = []
    while True:
      tok, line = self._next()
      if tok == "$)":
        self.db.comments.append(" ".join(words))
        return
      if tok == "$(":
        raise LexError("nested comment", location=f"line {line}")
      words.append(tok)

  def _declare_constants(self, line: int) -> None:
    if len(self.scopes) != 1:
      raise ScopeError("$c only allowed in the outermost scope", location=f"line {line}")
    symbols = self._until("$.")
    for sym in symbols:
      if sym in self.constants or sym in self.db.variables:
        raise ScopeError(f"symbol '{sym}' declared twice", location=f"line {line}")
      self.constants.add(sym)
      self.db.constants.append(sym)

  def _declare_variables(self, line: int) -> None:
    symbols = self._until("$.")
    for sym in symbols:
      if sym in self.constants or sym in self._active_vars():
        raise ScopeError(f"symbol '{sym}' declared twice", location=f"line {line}")
      self.scopes[-1].variables.add(sym)
      if sym not in self.db.variables:
        self.db.variables.append(sym)

  def _labeled(self, label: str, line: int) -> None:
    kw, _ = self._next()
    if kw not in ("$f", "$e", "$a", "$p"):
      self._check_keyword(kw, line)
      raise LexError(f"label '{label}' followed by '{kw}'", location=f"line {line}")
    self._new_label(label, line)
    if kw == "$p":
      expr = self._until("$=")
      proof = self._until("$.")
      if proof and proof[0] == "(":
        raise MMError("compressed proofs are not supported", location=f"line {line}")
    else:
      expr = self._until("$.")
    if kw == "$f":
      if len(expr) != 2 or expr[0] not in self.constants or expr[1] not in self._active_vars():
        raise ScopeError(f"$f {label} must be a constant and an active variable", location=f"line {line}")
      if self._floating_for(expr[1]) is not None:
        raise ScopeError(f"variable '{expr[1]}' already has an active $f", location=f"line {line}")
      hyp = Hypothesis(label, "f", tuple(expr))
      self.scopes[-1].floating.append(hyp)
      self.scopes[-1].hyps_in_order.append(hyp)
      self.db.hypotheses[label] = hyp
      return
    self._check_symbols(expr, line)
    if kw == "$e":
      hyp = Hypothesis(label, "e", tuple(expr))
      self.scopes[-1].essential.append(hyp)
      self.scopes[-1].hyps_in_order.append(hyp)
      self.db.hypotheses[label] = hyp
      return
    hyps, dv = self._frame(tuple(expr))
    assertion = Assertion(label, kw[1], tuple(expr), hyps, dv, line=line)
    if kw == "$p":
      assertion.proof = proof
      assertion.active_dv = frozenset(self._active_dv())
      assertion.active_hyps = {h.label: h for h in self._active_hyps()}
    self.db.assertions[label] = assertion


def mm_parse(text: str) -> MMDatabase:
  """Parse Metamath source into a database, checking scoping and labels."""
  return _Parser(text).parse()


def mm_load(path: Union[str, Path]) -> MMDatabase:
  return mm_parse(Path(path).read_text(encoding="ascii"))


@dataclass
class MMReport:
  label: str
  status: str  # "proved", "incomplete" or "error"
  statement: str
  error: Optional[MMError] = None

  @property
  def ok(self) -> bool:
    return self.status != "error"

  def describe(self) -> str:
    text = f"{self.label}: {self.status} ({self.statement})"
    if self.error is not None:
      text += f" {self.error}"
    return text

  def to_dict(self) -> Dict:
    return {
      "label": self.label,
      "status": self.status,
      "statement": self.statement,
      "error": None if self.error is None else self.error.to_dict(),
    }


def _substitute(expr: Expr, sigma: Dict[str, Expr]) -> Expr:
  out: List[str] = []
  for sym in expr:
    out.extend(sigma.get(sym, (sym,)))
  return tuple(out)


def _apply(db: MMDatabase, assertion: Assertion, stack: List[Expr], variables: Set[str], dv_ok) -> Expr:
  n = len(assertion.hyps)
  if len(stack) < n:
    raise StackUnderflow(f"{assertion.label} needs {n} entries, stack has {len(stack)}")
  args = stack[len(stack) - n :]
  del stack[len(stack) - n :]
  sigma: Dict[str, Expr] = {}
  for hyp, arg in zip(assertion.hyps, args):
    if hyp.kind == "f":
      if not arg or arg[0] != hyp.expr[0]:
        raise SubstitutionMismatch(f"{hyp.label} expects typecode {hyp.expr[0]}, got '{' '.join(arg)}'")
      sigma[hyp.variable] = arg[1:]
  for hyp, arg in zip(assertion.hyps, args):
    if hyp.kind == "e":
      expected = _substitute(hyp.expr, sigma)
      if expected != arg:
        raise SubstitutionMismatch(f"{hyp.label} expects '{' '.join(expected)}', got '{' '.join(arg)}'")
  for pair in assertion.dv:
    a, b = sorted(pair)
    for va in (s for s in sigma.get(a, ()) if s in variables):
      for vb in (s for s in sigma.get(b, ()) if s in variables):
        if va == vb or not dv_ok(va, vb):
          raise DisjointViolation(f"{assertion.label} needs $d {va} {vb}", witness=(va, vb))
  return _substitute(assertion.expr, sigma)


def verify_assertion(db: MMDatabase, assertion: Assertion) -> MMReport:
  shown = db.render(assertion.expr)
  proof = assertion.proof or []
  variables = set(db.variables)

  def dv_ok(a: str, b: str) -> bool:
    return frozenset((a, b)) in assertion.active_dv

  stack: List[Expr] = []
  incomplete = False
  try:
    for step in proof:
      if step == "?":
        incomplete = True
        stack.append(assertion.expr)
      elif step in assertion.active_hyps:
        stack.append(assertion.active_hyps[step].expr)
      elif step in db.assertions and db.labels.index(step) < db.labels.index(assertion.label):
        stack.append(_apply(db, db.assertions[step], stack, variables, dv_ok))
      else:
        raise MMError(f"label '{step}' is not available in the proof of {assertion.label}")
    if not proof:
      raise FinalStackNotSingleton("empty proof")
    if len(stack) != 1:
      raise FinalStackNotSingleton(f"{len(stack)} entries left on the stack")
    if stack[0] != assertion.expr:
      raise MMWrongConclusion(f"proof ends with '{db.render(stack[0])}'")
  except MMError as e:
    e.location = e.location or f"line {assertion.line}"
    logging.error(f"{assertion.label}: {str(e)}")
    return MMReport(assertion.label, "error", shown, e)
  status = "incomplete" if incomplete else "proved"
  logging.info(f"{assertion.label}: {status}")
  return MMReport(assertion.label, status, shown)


def mm_verify(db: MMDatabase) -> List[MMReport]:
  """Verify every $p statement in declaration order."""
  return [verify_assertion(db, a) for a in db.assertions.values() if a.kind == "p"]


def derivable(db: MMDatabase, depth: int, max_len: int = 12) -> Set[Expr]:
  """Statements reachable in at most depth rounds of rule application.

  Round zero holds the floating hypotheses, so variables may appear the way
  they would inside a proof of a scheme. $p statements are not used.
  """
  known: Set[Expr] = {h.expr for h in db.hypotheses.values() if h.kind == "f"}
  rules = [a for a in db.assertions.values() if a.kind == "a"]
  for _ in range(depth):
    new = set(known)
    for rule in rules:
      floating = [h for h in rule.hyps if h.kind == "f"]
      choices = [[e for e in known if e[0] == h.expr[0]] for h in floating]
      for combo in itertools.product(*choices):
        sigma = {h.variable: e[1:] for h, e in zip(floating, combo)}
        if any(_substitute(h.expr, sigma) not in known for h in rule.hyps if h.kind == "e"):
          continue
        result = _substitute(rule.expr, sigma)
        if len(result) <= max_len:
          new.add(result)
    if new == known:
      break
    known = new
  return known


def variable_free_heads(db: MMDatabase, head: str, depth: int) -> List[Expr]:
  """Derivable statements with typecode head whose body mentions a variable."""
  variables = set(db.variables)
  return sorted(e for e in derivable(db, depth) if e[0] == head and any(s in variables for s in e[1:]))
