"""(i,j)- and {i,j}-transforms, supertruth certificates and hull exploration.

An (i,j)-transform replaces every x_j inside the scope of a quantifier over
x_i by x_i. It is the one operation of this system that captures variables on
purpose, which is why it is used to separate axioms that ordinary models
cannot separate.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from schemata.core.objectlevel import (
  FirstOrderModel,
  eq_truth_by_size,
  fo_validates_scheme,
  identification_patterns,
  require_pure_equality,
)
from schemata.core.schemes import (
  Scheme,
  Substitution,
  instantiate,
  is_instance,
  restrict_dv,
)
from schemata.core.syntax import (
  FORMULA_MV,
  VARIABLE_MV,
  Equals,
  Forall,
  Formula,
  FormulaMV,
  Implies,
  Not,
  Pred,
  Variable,
  X,
  has_quantifier,
  max_index,
  occurring,
  random_formula,
  render,
)
from schemata.utils.errors import (
  HypothesisNotEstablished,
  IllegitimateStep,
  IllegitimateSubstitution,
  IllegitimateTransform,
  RefutationFailed,
  SchemataError,
  UnsupportedScheme,
)


@dataclass(frozen=True)
class TransformSpec:
  i: int
  j: int
  symmetric: bool = False

  def __str__(self):
    if self.symmetric:
      return f"{{{self.i},{self.j}}}"
    return f"({self.i},{self.j})"


def _transform(m: Formula, xi: Variable, xj: Variable, inside: bool) -> Formula:
  if isinstance(m, FormulaMV):
    return m
  if isinstance(m, Equals):
    if not inside:
      return m
    return Equals(xi if m.left == xj else m.left, xi if m.right == xj else m.right)
  if isinstance(m, Pred):
    if not inside:
      return m
    return Pred(m.name, tuple(xi if a == xj else a for a in m.args))
  if isinstance(m, Not):
    return Not(_transform(m.body, xi, xj, inside))
  if isinstance(m, Implies):
    return Implies(_transform(m.left, xi, xj, inside), _transform(m.right, xi, xj, inside))
  if isinstance(m, Forall):
    binder = xi if inside and m.var == xj else m.var
    return Forall(binder, _transform(m.body, xi, xj, inside or m.var == xi))
  raise TypeError(f"not a formula: {m!r}")


def transform(spec: TransformSpec, m: Formula) -> Formula:
  if spec.i == spec.j:
    return m
  if spec.symmetric:
    lo, hi = sorted((spec.i, spec.j))
    return _transform(_transform(m, X(lo), X(hi), False), X(hi), X(lo), False)
  return _transform(m, X(spec.i), X(spec.j), False)


def is_legitimate(spec: TransformSpec, scheme: Scheme) -> bool:
  return spec.i == spec.j or frozenset((X(spec.i), X(spec.j))) not in scheme.dv


def is_trivial(spec: TransformSpec, scheme: Scheme) -> bool:
  return spec.i == spec.j or not {X(spec.i), X(spec.j)} <= occurring(scheme)


def transform_scheme(spec: TransformSpec, scheme: Scheme) -> Scheme:
  """Transform hypotheses and conclusion; DV is kept, then restricted."""
  if not is_legitimate(spec, scheme):
    raise IllegitimateTransform(
      f"{{x{spec.i},x{spec.j}}} is a DV pair of the scheme", witness=(f"x{spec.i}", f"x{spec.j}")
    )
  return Scheme(
    tuple(transform(spec, h) for h in scheme.hypotheses),
    transform(spec, scheme.conclusion),
    scheme.dv,
  )


def sym_transform(i: int, j: int, scheme: Scheme) -> Scheme:
  return transform_scheme(TransformSpec(i, j, True), scheme)


def candidate_indices(scheme: Scheme, fresh: int = 1) -> List[int]:
  indices = sorted({v.index for v in occurring(scheme) if v.kind == VARIABLE_MV})
  top = max(indices, default=-1)
  return indices + [top + 1 + k for k in range(fresh)]


def legitimate_transforms(
  scheme: Scheme, symmetric: bool = False, nontrivial: bool = True, fresh: int = 1
) -> List[Tuple[TransformSpec, Scheme]]:
  """Every legitimate transform over occurring indices (plus fresh ones)."""
  out = []
  indices = candidate_indices(scheme, fresh)
  for i, j in itertools.product(indices, repeat=2):
    if i == j or (symmetric and i > j):
      continue
    spec = TransformSpec(i, j, symmetric)
    if nontrivial and is_trivial(spec, scheme):
      continue
    if is_legitimate(spec, scheme):
      out.append((spec, transform_scheme(spec, scheme)))
  return out


def supertrue_quantifier_free(scheme: Scheme) -> bool:
  """Truth, hence supertruth, of a quantifier-free pure-equality scheme."""
  require_pure_equality(scheme, allow_fm=True)
  if has_quantifier(scheme.conclusion):
    raise UnsupportedScheme("scheme has quantifiers", witness=str(scheme))
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  for block in identification_patterns(xs, scheme.dv):
    for values in itertools.product((False, True), repeat=len(fms)):
      if not _qf_eval(scheme.conclusion, block, dict(zip(fms, values))):
        logging.debug(f"{scheme} fails at blocks {block} values {values}")
        return False
  return True


def _qf_eval(m: Formula, block: Dict[Variable, int], values: Dict[Variable, bool]) -> bool:
  if isinstance(m, FormulaMV):
    return values[m.var]
  if isinstance(m, Equals):
    return block[m.left] == block[m.right]
  if isinstance(m, Not):
    return not _qf_eval(m.body, block, values)
  if isinstance(m, Implies):
    return (not _qf_eval(m.left, block, values)) or _qf_eval(m.right, block, values)
  raise UnsupportedScheme(f"unexpected node in quantifier-free check: {render(m)}")


@dataclass
class SupertruthCertificate:
  """Packaged argument that a target scheme is not (semi)supertrue."""

  name: str
  target: Scheme
  instance: Substitution
  transform: TransformSpec
  then: Optional[Substitution] = None
  refute: str = "eq-decide"
  model: Optional[FirstOrderModel] = None
  target_label: Optional[str] = None

  __hash__ = None


@dataclass
class CertReport:
  name: str
  ok: bool
  detail: str = ""
  bounds: Dict[str, int] = field(default_factory=dict)
  error: Optional[SchemataError] = None

  def to_dict(self) -> Dict:
    data = {"status": "ok" if self.ok else "fail", "name": self.name, "detail": self.detail, "bounds": self.bounds}
    if self.error is not None:
      data.update(kind=self.error.kind, witness=None if self.error.witness is None else str(self.error.witness))
    return data


def verify_not_supertrue(cert: SupertruthCertificate, mode: str = "supertruth", max_domain: int = 4) -> CertReport:
  try:
    final, detail, bounds = _run_supercert(cert, mode, max_domain)
  except SchemataError as e:
    logging.info(f"{cert.name}: {e}")
    return CertReport(cert.name, False, str(e), error=e)
  logging.info(f"{cert.name}: not {mode}, {detail}")
  return CertReport(cert.name, True, detail, bounds)


def _run_supercert(cert: SupertruthCertificate, mode: str, max_domain: int):
  try:
    inst = instantiate(cert.instance, cert.target)
  except IllegitimateSubstitution as e:
    raise IllegitimateStep(f"instance step: {e.message}", witness=e.witness)
  if mode == "semisupertruth":
    if inst.has_formula_mv():
      raise IllegitimateStep("semisupertruth needs a formula-metavariable-free instance")
    if not cert.transform.symmetric:
      raise IllegitimateStep("semisupertruth needs a symmetric transform")
  for hyp in inst.hypotheses:
    claim = Scheme((), hyp, inst.dv)
    try:
      established = supertrue_quantifier_free(claim)
    except UnsupportedScheme:
      established = False
    if not established:
      raise HypothesisNotEstablished(f"hypothesis '{render(hyp)}' is not shown supertrue")
  try:
    moved = transform_scheme(cert.transform, inst)
  except IllegitimateTransform as e:
    raise IllegitimateStep(f"transform step: {e.message}", witness=e.witness)
  final = moved
  if cert.then is not None:
    try:
      final = instantiate(cert.then, moved)
    except IllegitimateSubstitution as e:
      raise IllegitimateStep(f"second instance step: {e.message}", witness=e.witness)
  if cert.refute == "eq-decide":
    report = eq_truth_by_size(Scheme(final.hypotheses, final.conclusion, final.dv), max_domain)
    if report.verdict:
      raise RefutationFailed(f"'{final}' is true", witness=str(final))
    return final, f"'{final}' is false: {report.witness}", {"max_domain": report.bound}
  if cert.refute == "fo":
    if cert.model is None:
      raise RefutationFailed("fo refutation needs a model")
    verdict = fo_validates_scheme(cert.model, final)
    if verdict.ok or not verdict.exact:
      raise RefutationFailed(f"model does not refute '{final}'", witness=str(final))
    return final, f"'{final}' fails: {verdict.witness}", verdict.bounds
  raise RefutationFailed(f"unknown refutation method '{cert.refute}'")


def refute_without_dv(
  scheme: Scheme, sigma: Substitution, pairs: Optional[Iterable] = None, max_domain: int = 4
):
  """Drop DV conditions (all, or the given pairs), instantiate, decide.

  Returns the instance and its truth report; a False verdict shows the dropped
  conditions were needed for truth.
  """
  dropped = frozenset() if pairs is None else scheme.dv - frozenset(frozenset(p) for p in pairs)
  weakened = scheme.with_dv(dropped)
  inst = instantiate(sigma, weakened)
  return inst, eq_truth_by_size(inst, max_domain)


@dataclass
class HullResult:
  schemes: List[Scheme]
  rounds: int
  truncated: bool


def _instantiation_steps(scheme: Scheme, fresh: int = 1) -> Iterable[Scheme]:
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  top_x = max_index(occurring(scheme), VARIABLE_MV)
  top_f = max_index(occurring(scheme), FORMULA_MV)
  pool = xs + [X(top_x + 1 + k) for k in range(fresh)]
  sigmas = []
  for x in xs:
    for y in pool:
      if y != x:
        sigmas.append(Substitution({x: y}, {}))
  for fm in fms:
    for a, b in itertools.product(pool, repeat=2):
      sigmas.append(Substitution({}, {fm: Equals(a, b)}))
    g, h = FormulaMV(top_f + 1), FormulaMV(top_f + 2)
    sigmas.append(Substitution({}, {fm: Not(g)}))
    sigmas.append(Substitution({}, {fm: Implies(g, h)}))
    for a in pool:
      sigmas.append(Substitution({}, {fm: Forall(a, g)}))
  for sigma in sigmas:
    try:
      yield instantiate(sigma, scheme)
    except IllegitimateSubstitution:
      continue


def hull_closure(schemes: Sequence[Scheme], depth: int, size_bound: int = 500) -> HullResult:
  """Bounded closure under instantiation steps and legitimate transforms."""
  seen: Dict[Scheme, None] = dict.fromkeys(schemes)
  frontier = list(seen)
  truncated = False
  rounds = 0
  for _ in range(depth):
    if not frontier:
      break
    rounds += 1
    new = []
    for scheme in frontier:
      produced = [s for _, s in legitimate_transforms(scheme)]
      produced += list(_instantiation_steps(scheme))
      for item in produced:
        if item in seen:
          continue
        if len(seen) >= size_bound:
          truncated = True
          break
        seen[item] = None
        new.append(item)
      if truncated:
        break
    frontier = new
    if truncated:
      break
  logging.debug(f"Hull of {len(schemes)} schemes: {len(seen)} after {rounds} rounds")
  return HullResult(list(seen), rounds, truncated)


def sample_instances(
  scheme: Scheme,
  count: int,
  seed: int = 0,
  max_height: int = 3,
  fm_free: bool = False,
  pool_size: int = 4,
) -> List[Scheme]:
  """Seeded random legitimate instances of a scheme.

  Formula metavariables get random formulas over x0..x(pool_size-1); when
  fm_free is set the images are pure-equality formulas.
  """
  rng = random.Random(seed)
  pool = [X(k) for k in range(pool_size)]
  atoms: List[Formula] = [Equals(a, b) for a in pool for b in pool]
  if not fm_free:
    atoms += [FormulaMV(0), FormulaMV(1)]
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  fms = sorted(v for v in occurring(scheme) if v.kind == FORMULA_MV)
  out: List[Scheme] = []
  attempts = 0
  while len(out) < count and attempts < count * 50:
    attempts += 1
    vr = {x: rng.choice(pool) for x in xs}
    fm = {f: random_formula(rng, max_height, atoms, pool) for f in fms}
    try:
      out.append(instantiate(Substitution(vr, fm), scheme))
    except IllegitimateSubstitution:
      continue
  return out


@dataclass
class ClosureReport:
  label: str
  ok: bool
  checked: int
  counterexample: Optional[str] = None


def closure_check(label: str, axiom: Scheme, instances: Sequence[Scheme], max_domain: int = 4) -> ClosureReport:
  """Every legitimate nontrivial transform of an instance stays harmless.

  For most axioms "harmless" means the result is again an instance of the
  axiom; for genEq it means one antecedent becomes refutable.
  """
  checked = 0
  for inst in instances:
    for spec, moved in legitimate_transforms(inst):
      checked += 1
      if moved == inst:
        continue
      if label == "genEq":
        if not _some_antecedent_refutable(moved, max_domain):
          return ClosureReport(label, False, checked, f"{spec} of {inst} gives {moved}")
        continue
      if is_instance(moved, axiom) is None:
        return ClosureReport(label, False, checked, f"{spec} of {inst} gives {moved}")
  return ClosureReport(label, True, checked)


def _some_antecedent_refutable(scheme: Scheme, max_domain: int) -> bool:
  body = scheme.conclusion
  for _ in range(2):
    if not isinstance(body, Implies):
      return False
    try:
      if eq_truth_by_size(Scheme((), Not(body.left), scheme.dv), max_domain).verdict:
        return True
    except UnsupportedScheme:
      return False
    body = body.right
  return False


def binder_substitution_agrees(scheme: Scheme, i: int, j: int) -> bool:
  """(i,j)-transform equals substituting x_i for x_j when every x_j sits under x_i."""
  moved = transform_scheme(TransformSpec(i, j), scheme)
  substituted = Scheme(
    tuple(_subst_inside(h, i, j) for h in scheme.hypotheses), _subst_inside(scheme.conclusion, i, j), scheme.dv
  )
  return moved == substituted


def _subst_inside(m: Formula, i: int, j: int) -> Formula:
  if isinstance(m, Forall) and m.var == X(i):
    from schemata.core.schemes import apply_subst

    return Forall(m.var, apply_subst(Substitution({X(j): X(i)}, {}), m.body))
  if isinstance(m, Not):
    return Not(_subst_inside(m.body, i, j))
  if isinstance(m, Implies):
    return Implies(_subst_inside(m.left, i, j), _subst_inside(m.right, i, j))
  if isinstance(m, Forall):
    return Forall(m.var, _subst_inside(m.body, i, j))
  return m
