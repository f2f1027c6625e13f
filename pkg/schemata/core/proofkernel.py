"""Scheme-level proof checking.

A proof is a target scheme plus justified lines. Each non-hypothesis line
names an axiom, the substitution instantiating it and the earlier lines that
serve as its hypotheses. The kernel recomputes the instance and compares.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from schemata.core.schemes import (
  DVSet,
  Scheme,
  Substitution,
  apply_subst,
  check_legitimate,
  compose,
  instantiate,
  match,
  binding_to_subst,
  propagate_dv,
  sorted_pairs,
)
from schemata.core.syntax import Formula, FormulaMV, Variable, X, max_index, occurring, render
from schemata.utils.errors import (
  DVViolation,
  IllegitimateSubstitution,
  IllegitimateTransform,
  LineMismatch,
  PremiseOutOfOrder,
  SchemataError,
  UnknownAxiom,
  WrongConclusion,
)


@dataclass(frozen=True)
class Hyp:
  name: str


@dataclass(frozen=True)
class ByAxiom:
  label: str
  subst: Substitution
  premises: Tuple[int, ...] = ()
  note: str = ""

  __hash__ = None


@dataclass(frozen=True)
class Unjustified:
  """A `by ?` line waiting for elaboration."""


Justification = Union[Hyp, ByAxiom, Unjustified]


@dataclass(frozen=True)
class ProofLine:
  statement: Formula
  justification: Justification
  location: Optional[str] = field(default=None, compare=False)

  __hash__ = None


@dataclass(frozen=True)
class ProofScript:
  target: Scheme
  lines: Tuple[ProofLine, ...]
  hyp_names: Tuple[str, ...] = ()
  name: str = "proof"

  __hash__ = None

  def __post_init__(self):
    object.__setattr__(self, "lines", tuple(self.lines))
    names = tuple(self.hyp_names) or tuple(f"h{k}" for k in range(1, len(self.target.hypotheses) + 1))
    if len(names) != len(self.target.hypotheses):
      raise ValueError("one name per hypothesis is required")
    object.__setattr__(self, "hyp_names", names)

  def occurring(self) -> FrozenSet[Variable]:
    return occurring(self.target) | occurring(line.statement for line in self.lines)

  def dummies(self) -> FrozenSet[Variable]:
    return self.occurring() - occurring(self.target)


class AxiomSet:
  """Axioms keyed by label."""

  def __init__(self, axioms: Mapping[str, Scheme]):
    self._axioms = dict(axioms)

  def labels(self) -> List[str]:
    return list(self._axioms)

  def __contains__(self, label: str) -> bool:
    return label in self._axioms

  def get(self, label: str) -> Scheme:
    if label not in self._axioms:
      raise UnknownAxiom(f"axiom '{label}' is not available")
    return self._axioms[label]

  def instance(self, label: str, sigma: Substitution) -> Scheme:
    return instantiate(sigma, self.get(label))

  def items(self):
    return list(self._axioms.items())


class TransformedAxiomSet(AxiomSet):
  """The (i,j)-transforms of the instances of a base axiom set."""

  def __init__(self, base: AxiomSet, spec):
    super().__init__(dict(base.items()))
    self.base = base
    self.spec = spec

  def instance(self, label: str, sigma: Substitution) -> Scheme:
    from schemata.core.transforms import transform_scheme

    return transform_scheme(self.spec, self.base.instance(label, sigma))


@dataclass
class ProofReport:
  ok: bool
  name: str = "proof"
  line: Optional[int] = None
  error: Optional[SchemataError] = None

  def describe(self) -> str:
    if self.ok:
      return f"{self.name}: OK"
    where = f" (proof line {self.line})" if self.line else ""
    return f"{self.name}: FAIL{where}: {self.error}"

  def to_dict(self) -> Dict:
    data = {"status": "ok" if self.ok else "fail", "proof": self.name, "line": self.line}
    if self.error is not None:
      data.update(kind=self.error.kind, message=self.error.message, location=self.error.location)
      data["witness"] = None if self.error.witness is None else str(self.error.witness)
    return data


def proof_dv(proof: ProofScript) -> DVSet:
  """DV(target) plus every dummy paired with every other metavariable."""
  everything = proof.occurring()
  pairs = set(proof.target.dv)
  for dummy in proof.dummies():
    for other in everything:
      if other != dummy:
        pairs.add(frozenset((dummy, other)))
  return frozenset(pairs)


def _fail(proof: ProofScript, k: Optional[int], error: SchemataError) -> ProofReport:
  if error.location is None and k is not None:
    line = proof.lines[k - 1]
    error.location = line.location or f"line {k}"
  logging.debug(f"{proof.name}: {error}")
  return ProofReport(False, proof.name, k, error)


def verify_proof(proof: ProofScript, axioms: AxiomSet) -> ProofReport:
  allowed = proof_dv(proof)
  hyps = dict(zip(proof.hyp_names, proof.target.hypotheses))
  for k, line in enumerate(proof.lines, start=1):
    just = line.justification
    if isinstance(just, Hyp):
      if just.name not in hyps:
        return _fail(proof, k, LineMismatch(f"unknown hypothesis '{just.name}'"))
      if hyps[just.name] != line.statement:
        return _fail(proof, k, LineMismatch(f"statement is not hypothesis '{just.name}'"))
      continue
    if isinstance(just, Unjustified):
      return _fail(proof, k, LineMismatch("line has no justification (run elaborate)"))
    if just.label not in axioms:
      return _fail(proof, k, UnknownAxiom(f"axiom '{just.label}' is not available"))
    for p in just.premises:
      if not 1 <= p < k:
        return _fail(proof, k, PremiseOutOfOrder(f"premise {p} is not an earlier line", witness=p))
    axiom = axioms.get(just.label)
    if len(just.premises) != len(axiom.hypotheses):
      return _fail(
        proof,
        k,
        LineMismatch(f"{just.label} takes {len(axiom.hypotheses)} premises, {len(just.premises)} given"),
      )
    ok, witness = check_legitimate(just.subst, axiom)
    if not ok:
      return _fail(proof, k, DVViolation(f"substitution is not legitimate on {just.label}", witness=witness))
    try:
      inst = axioms.instance(just.label, just.subst)
    except (IllegitimateSubstitution, IllegitimateTransform) as e:
      return _fail(proof, k, DVViolation(e.message, witness=e.witness))
    for hyp, p in zip(inst.hypotheses, just.premises):
      if proof.lines[p - 1].statement != hyp:
        return _fail(
          proof,
          k,
          LineMismatch(f"premise {p} is not '{render(hyp)}'", witness=render(proof.lines[p - 1].statement)),
        )
    if inst.conclusion != line.statement:
      return _fail(
        proof,
        k,
        LineMismatch(f"{just.label} {just.subst} yields '{render(inst.conclusion)}'", witness=render(line.statement)),
      )
    missing = inst.dv - allowed
    if missing:
      a, b = sorted(next(iter(sorted(missing, key=lambda p: sorted(p)))))
      return _fail(proof, k, DVViolation(f"needs DV pair {{{a},{b}}} not implied by the proof", witness=(a, b)))
  if not proof.lines:
    return _fail(proof, None, WrongConclusion("proof has no lines"))
  if proof.lines[-1].statement != proof.target.conclusion:
    return _fail(
      proof,
      len(proof.lines),
      WrongConclusion(f"last line is not '{render(proof.target.conclusion)}'"),
    )
  return ProofReport(True, proof.name)


def _dummy_shift(sigma: Substitution, proof: ProofScript) -> int:
  """The N of the dummy renaming rule, raised past the target's indices."""
  moved = sigma.support()
  n = max_index(moved)
  for var in moved:
    n = max(n, max_index(sigma.image_oc(var)))
  return max(n, max_index(occurring(proof.target)))


def subst_proof(sigma: Substitution, proof: ProofScript) -> ProofScript:
  """Apply sigma to a proof, renaming dummies m_i to m_(i+N+1) first."""
  target = instantiate(sigma, proof.target)
  if sigma.is_identity():
    return proof
  shift = _dummy_shift(sigma, proof) + 1
  renaming = {}
  for dummy in proof.dummies():
    renaming[dummy] = Variable(dummy.kind, dummy.index + shift)
  vr = dict(sigma.vr_map)
  fm = dict(sigma.fm_map)
  for old, new in renaming.items():
    if old.kind == "f":
      fm[old] = FormulaMV(new.index)
    else:
      vr[old] = new
  full = Substitution(vr, fm)
  lines = []
  for line in proof.lines:
    just = line.justification
    if isinstance(just, ByAxiom):
      just = ByAxiom(just.label, compose(full, just.subst), just.premises, just.note)
    lines.append(ProofLine(apply_subst(full, line.statement), just, line.location))
  logging.debug(f"Renamed dummies of {proof.name} by +{shift}: {sorted(map(str, renaming))}")
  return ProofScript(target, tuple(lines), proof.hyp_names, proof.name)


def transform_proof(i: int, j: int, proof: ProofScript, symmetric: bool = False) -> ProofScript:
  """Transform every line and the target; justifications are kept."""
  from schemata.core.transforms import TransformSpec, transform, transform_scheme

  pair = frozenset((X(i), X(j)))
  if i != j and pair in proof_dv(proof):
    raise IllegitimateTransform(f"{{x{i},x{j}}} is a DV pair of the proof", witness=(f"x{i}", f"x{j}"))
  spec = TransformSpec(i, j, symmetric)
  target = transform_scheme(spec, proof.target)
  lines = tuple(
    ProofLine(transform(spec, line.statement), line.justification, line.location) for line in proof.lines
  )
  return ProofScript(target, lines, proof.hyp_names, proof.name)


def find_justification(
  statement: Formula,
  earlier: Sequence[Formula],
  axioms: AxiomSet,
  allowed_dv: DVSet,
) -> Optional[ByAxiom]:
  """Single-step search for an axiom instance concluding statement."""
  for label, axiom in axioms.items():
    base = match(axiom.conclusion, statement)
    if base is None:
      continue
    found = _match_premises(axiom, 0, base, earlier, ())
    for binding, premises in found:
      sigma = binding_to_subst(binding)
      ok, _ = check_legitimate(sigma, axiom)
      if not ok:
        continue
      try:
        inst = axioms.instance(label, sigma)
      except (IllegitimateSubstitution, IllegitimateTransform):
        continue
      if inst.conclusion == statement and inst.dv <= allowed_dv:
        return ByAxiom(label, sigma, premises)
  return None


def _match_premises(axiom: Scheme, k: int, binding, earlier, chosen):
  if k == len(axiom.hypotheses):
    yield binding, chosen
    return
  for idx, stmt in enumerate(earlier, start=1):
    extended = match(axiom.hypotheses[k], stmt, binding)
    if extended is not None:
      yield from _match_premises(axiom, k + 1, extended, earlier, chosen + (idx,))


def elaborate_lines(proof: ProofScript, axioms: AxiomSet) -> ProofScript:
  """Fill `by ?` lines by single-step search; other lines are untouched."""
  allowed = proof_dv(proof)
  lines = list(proof.lines)
  for k, line in enumerate(lines):
    if not isinstance(line.justification, Unjustified):
      continue
    just = find_justification(line.statement, [l.statement for l in lines[:k]], axioms, allowed)
    if just is None:
      logging.warning(f"{proof.name}: no single-step justification for line {k + 1}")
      continue
    lines[k] = ProofLine(line.statement, just, line.location)
  return ProofScript(proof.target, tuple(lines), proof.hyp_names, proof.name)


def render_proof(proof: ProofScript, using: Iterable[str] = ()) -> str:
  """Script-file text for a proof block."""
  using = list(using)
  head = f"proof {proof.name}"
  if using:
    head += " using " + ", ".join(using)
  out = [head + " {"]
  for a, b in sorted_pairs(proof.target.dv):
    out.append(f"  dv: {a} {b} ;")
  for name, h in zip(proof.hyp_names, proof.target.hypotheses):
    out.append(f"  hyp {name}: {render(h)} ;")
  out.append(f"  concl: {render(proof.target.conclusion)} ;")
  for k, line in enumerate(proof.lines, start=1):
    just = line.justification
    if isinstance(just, Hyp):
      tail = f"hyp {just.name}"
    elif isinstance(just, Unjustified):
      tail = "by ?"
    else:
      tail = f"by {just.label} {just.subst}"
      if just.premises:
        tail += " from " + " , ".join(str(p) for p in just.premises)
    out.append(f"  {k}: {render(line.statement)} {tail} ;")
  out.append("}")
  return "\n".join(out)
