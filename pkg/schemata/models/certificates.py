"""Independence certificates.

A certificate names a model, the axioms it must validate and a target it must
falsify, usually with an explicit witness instance. Checking one re-runs every
validation and re-evaluates the witness; nothing is taken on trust.
"""

import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from schemata.core.objectlevel import (
  FirstOrderModel,
  FormulaWithHypotheses,
  ObjectSubstitution,
  Verdict,
  eq_truth_by_size,
  fo_eval,
  fo_valid,
  fo_validates_scheme,
  object_instantiate,
)
from schemata.core.schemes import Scheme
from schemata.core.syntax import (
  EMPTY_LANGUAGE,
  FORMULA_MV,
  Formula,
  Language,
  Pred,
  Variable,
  free_vars,
  occurring,
  render,
  subformulas,
)
from schemata.models.genval import gen_eval, gen_validates
from schemata.models.heightbound import height_certificate
from schemata.models.modal import KripkeModel, NeighborhoodModel, modal_validates, truth_set
from schemata.models.star import StarTruthModel, star_true, star_validates
from schemata.models.tables import EqRule, TruthTableModel, tt_eval, tt_validates
from schemata.utils.config import Settings
from schemata.utils.errors import (
  AxiomNotValidated,
  MalformedModel,
  SchemataError,
  TargetNotFalsified,
  UnassignedVariable,
  IllegitimateSubstitution,
)

MODEL_KINDS = ("tt", "fo", "kripke", "nbhd", "gen", "star", "height")


@dataclass(frozen=True)
class Group:
  """A braced set or bracketed matrix from a model block."""

  kind: str
  rows: Tuple[Tuple[Any, ...], ...]


Value = Union[int, str, Group]


@dataclass
class ModelSpec:
  kind: str
  entries: List[Tuple[str, List[Value]]] = field(default_factory=list)

  def get(self, key: str) -> Optional[List[Value]]:
    for name, values in self.entries:
      if name == key:
        return values
    return None

  def all(self, key: str) -> List[List[Value]]:
    return [values for name, values in self.entries if name == key]


@dataclass
class Witness:
  fm: Dict[Variable, Union[Formula, frozenset]] = field(default_factory=dict)
  vr: Dict[Variable, Variable] = field(default_factory=dict)
  assign: Dict[Variable, int] = field(default_factory=dict)
  world: Optional[str] = None
  theorem: Optional[Formula] = None


@dataclass
class Certificate:
  name: str
  validate: List[str]
  target: Scheme
  model: ModelSpec
  target_label: Optional[str] = None
  witness: Optional[Witness] = None
  bounds: Dict[str, int] = field(default_factory=dict)
  language: Language = EMPTY_LANGUAGE
  location: Optional[str] = None


@dataclass
class CertificateReport:
  name: str
  ok: bool
  validated: List[Tuple[str, Verdict]] = field(default_factory=list)
  falsified: str = ""
  bounds: Dict[str, int] = field(default_factory=dict)
  error: Optional[SchemataError] = None

  def describe(self) -> str:
    if self.ok:
      return f"{self.name}: OK ({len(self.validated)} validated; {self.falsified})"
    return f"{self.name}: FAIL {self.error}"

  def to_dict(self) -> Dict:
    data = {
      "status": "ok" if self.ok else "fail",
      "name": self.name,
      "validated": [label for label, _ in self.validated],
      "witness": self.falsified or None,
      "bounds": self.bounds,
      "location": None,
    }
    if self.error is not None:
      data.update(kind=self.error.kind, message=self.error.message, location=self.error.location)
    return data


# model construction


def _ints(values: Sequence[Value], what: str) -> List[int]:
  if not all(isinstance(v, int) for v in values):
    raise MalformedModel(f"{what} expects integers")
  return list(values)


def _one_int(spec: ModelSpec, key: str, default: Optional[int] = None) -> int:
  values = spec.get(key)
  if values is None:
    if default is None:
      raise MalformedModel(f"model {spec.kind} needs '{key}'")
    return default
  ints = _ints(values, key)
  if len(ints) != 1:
    raise MalformedModel(f"'{key}' takes one integer")
  return ints[0]


def _group(values: Optional[List[Value]], key: str) -> Group:
  if not values or len(values) != 1 or not isinstance(values[0], Group):
    raise MalformedModel(f"'{key}' expects a braced or bracketed group")
  return values[0]


def _flat(group: Group) -> List[Any]:
  return [item for row in group.rows for item in row]


def _tt_model(spec: ModelSpec) -> TruthTableModel:
  n = _one_int(spec, "values")
  imp = _group(spec.get("imp"), "imp")
  neg = _group(spec.get("neg"), "neg")
  designated = _group(spec.get("designated"), "designated")
  eq = spec.get("eq") or ["const", 0]
  if eq[0] == "const" and len(eq) == 2:
    rule = EqRule("const", int(eq[1]), int(eq[1]))
  elif eq[0] == "identity" and len(eq) == 3:
    rule = EqRule("identity", int(eq[1]), int(eq[2]))
  else:
    raise MalformedModel(f"bad equality rule {eq}")
  preds = {}
  for values in spec.all("pred"):
    if len(values) != 2 or not isinstance(values[1], int):
      raise MalformedModel("'pred' takes a name and a value")
    preds[str(values[0])] = values[1]
  quant = spec.get("quant") or ["ignore"]
  return TruthTableModel(
    n,
    tuple(tuple(_ints(row, "imp")) for row in imp.rows),
    tuple(_ints(_flat(neg), "neg")),
    frozenset(_ints(_flat(designated), "designated")),
    rule,
    preds,
    str(quant[0]),
  )


def _fo_model(spec: ModelSpec, lang: Language) -> FirstOrderModel:
  size = _one_int(spec, "size")
  eq = spec.get("eq")
  if eq is None or eq == ["identity"]:
    graph = frozenset((d, d) for d in range(size))
  elif eq == ["total"]:
    graph = frozenset((a, b) for a in range(size) for b in range(size))
  else:
    graph = frozenset(tuple(_ints(row, "eq")) for row in _group(eq, "eq").rows)
  preds = {}
  for values in spec.all("pred"):
    if len(values) != 2 or not isinstance(values[1], Group):
      raise MalformedModel("'pred' takes a name and a set of tuples")
    preds[str(values[0])] = frozenset(tuple(_ints(row, "pred")) for row in values[1].rows)
  for name, _ in lang.predicates:
    preds.setdefault(name, frozenset())
  quant = spec.get("quant")
  quant_domain = None if quant is None else frozenset(_ints(_flat(_group(quant, "quant")), "quant"))
  model = FirstOrderModel(size, graph, preds, quant_domain)
  model.check_arities(lang)
  return model


def _worlds(spec: ModelSpec) -> Tuple[str, ...]:
  worlds = spec.get("worlds")
  if not worlds:
    raise MalformedModel(f"model {spec.kind} needs 'worlds'")
  return tuple(str(w) for w in worlds)


def _truth_sets(spec: ModelSpec) -> Dict[str, frozenset]:
  truth = {}
  for values in spec.all("true"):
    if len(values) != 2 or not isinstance(values[1], Group):
      raise MalformedModel("'true' takes a predicate name and a set of worlds")
    truth[str(values[0])] = frozenset(str(w) for w in _flat(values[1]))
  return truth


def _kripke_model(spec: ModelSpec) -> KripkeModel:
  access = frozenset(tuple(str(w) for w in row) for row in _group(spec.get("access"), "access").rows)
  return KripkeModel(_worlds(spec), access, _truth_sets(spec))


def _nbhd_model(spec: ModelSpec) -> NeighborhoodModel:
  nbhd = {}
  for values in spec.all("nbhd"):
    if len(values) != 2 or not isinstance(values[1], Group):
      raise MalformedModel("'nbhd' takes a world and a set of world sets")
    nbhd[str(values[0])] = frozenset(frozenset(str(w) for w in row) for row in values[1].rows)
  return NeighborhoodModel(_worlds(spec), nbhd, _truth_sets(spec))


def build_model(spec: ModelSpec, lang: Language = EMPTY_LANGUAGE):
  """Turn a parsed model block into a model object (None for gen and height)."""
  if spec.kind not in MODEL_KINDS:
    raise MalformedModel(f"unknown model kind '{spec.kind}'")
  if spec.kind == "tt":
    return _tt_model(spec)
  if spec.kind == "fo":
    return _fo_model(spec, lang)
  if spec.kind == "kripke":
    return _kripke_model(spec)
  if spec.kind == "nbhd":
    return _nbhd_model(spec)
  if spec.kind == "star":
    return StarTruthModel(_fo_model(spec, lang), _one_int(spec, "anchor", 0))
  return None


# validation and falsification


def validate_with(kind: str, model, scheme: Scheme, settings: Settings, lang: Language) -> Verdict:
  if kind == "tt":
    return tt_validates(model, scheme)
  if kind == "fo":
    return fo_validates_scheme(model, scheme, settings.support, lang)
  if kind in ("kripke", "nbhd"):
    return modal_validates(model, scheme)
  if kind == "gen":
    return gen_validates(scheme, settings.gen_height, settings.support, lang)
  if kind == "star":
    return star_validates(model, scheme, settings.support, lang)
  raise MalformedModel(f"model kind '{kind}' does not validate schemes")


def _object_instance(witness: Witness, target: Scheme) -> FormulaWithHypotheses:
  formulas = {k: v for k, v in witness.fm.items() if not isinstance(v, frozenset)}
  tau = ObjectSubstitution(witness.vr, formulas)
  try:
    return object_instantiate(tau, target)
  except IllegitimateSubstitution as e:
    raise TargetNotFalsified(f"witness substitution is not legitimate: {e.message}", witness=e.witness)
  except UnassignedVariable as e:
    raise TargetNotFalsified(f"witness leaves {e.witness} unassigned", witness=e.witness)


def _tt_falsifies(model: TruthTableModel, inst: FormulaWithHypotheses) -> str:
  atoms = sorted(
    {
      sub
      for top in inst.hypotheses + (inst.conclusion,)
      for sub in subformulas(top)
      if isinstance(sub, Pred) and sub.name not in model.pred_values
    },
    key=render,
  )
  for combo in itertools.product(range(model.values), repeat=len(atoms)):
    atom_values = dict(zip(atoms, combo))
    hyps = [tt_eval(model, h, atom_values=atom_values) for h in inst.hypotheses]
    value = tt_eval(model, inst.conclusion, atom_values=atom_values)
    if all(v in model.designated for v in hyps) and value not in model.designated:
      return f"{inst} takes value {value}"
  raise TargetNotFalsified(f"{inst} always takes a designated value", witness=str(inst))


def _fo_falsifies(model: FirstOrderModel, inst: FormulaWithHypotheses, assign: Dict[Variable, int]) -> str:
  vars_ = sorted(occurring(inst.hypotheses) | occurring(inst.conclusion))
  for h in inst.hypotheses:
    if fo_valid(model, h, vars_) is not None:
      raise TargetNotFalsified(f"hypothesis {render(h)} does not hold in the model")
  missing = sorted(v for v in free_vars(inst.conclusion) if v not in assign)
  for asg in _extend(model, assign, missing):
    if not fo_eval(model, inst.conclusion, asg):
      shown = ", ".join(f"{k}={v}" for k, v in sorted(asg.items()))
      return f"{inst} false at [{shown}]"
  raise TargetNotFalsified(f"{inst} holds at the given assignment", witness=str(inst))


def _extend(model: FirstOrderModel, assign: Dict[Variable, int], missing: List[Variable]):
  for values in itertools.product(model.domain, repeat=len(missing)):
    asg = dict(assign)
    asg.update(zip(missing, values))
    yield asg


def _modal_falsifies(model, witness: Witness, target: Scheme) -> str:
  fm_sets = {}
  for var in sorted(v for v in occurring(target) if v.kind == FORMULA_MV):
    if var not in witness.fm:
      raise TargetNotFalsified(f"witness leaves {var} unassigned", witness=str(var))
    image = witness.fm[var]
    fm_sets[var] = image if isinstance(image, frozenset) else truth_set(model, image)
  unknown = [s for s in fm_sets.values() if not s <= set(model.worlds)]
  if unknown:
    raise MalformedModel("witness mentions unknown worlds")
  everywhere = frozenset(model.worlds)
  if any(truth_set(model, h, fm_sets) != everywhere for h in target.hypotheses):
    raise TargetNotFalsified("a hypothesis fails somewhere in the model")
  holds = truth_set(model, target.conclusion, fm_sets)
  if witness.world is None:
    if holds == everywhere:
      raise TargetNotFalsified("conclusion holds at every world")
    world = next(w for w in model.worlds if w not in holds)
  else:
    world = witness.world
    if world not in model.worlds:
      raise MalformedModel(f"unknown world '{world}'")
    if world in holds:
      raise TargetNotFalsified(f"conclusion holds at {world}", witness=world)
  return f"conclusion fails at {world}"


def falsify_target(cert: Certificate, model, settings: Settings) -> str:
  """Re-evaluate the witness (or search for one) and describe the refutation."""
  kind = cert.model.kind
  witness = cert.witness
  if kind == "height":
    if witness is None or witness.theorem is None:
      raise TargetNotFalsified("height certificate needs a theorem")
    truth = eq_truth_by_size(Scheme((), witness.theorem), settings.max_domain)
    if not truth.verdict:
      raise TargetNotFalsified(f"'{render(witness.theorem)}' is not a true scheme")
    return f"'{render(witness.theorem)}' is true but needs {cert.target_label or 'the target'}"
  if kind in ("kripke", "nbhd"):
    if witness is None:
      verdict = modal_validates(model, cert.target)
      if verdict.ok:
        raise TargetNotFalsified("model validates the target")
      return verdict.witness
    return _modal_falsifies(model, witness, cert.target)
  if witness is None:
    verdict = validate_with(kind, model, cert.target, settings, cert.language)
    if verdict.ok or not verdict.exact:
      raise TargetNotFalsified("no exact refutation of the target was found")
    return verdict.witness
  inst = _object_instance(witness, cert.target)
  if kind == "tt":
    return _tt_falsifies(model, inst)
  if kind == "fo":
    return _fo_falsifies(model, inst, witness.assign)
  if kind == "gen":
    if all(gen_eval(h) == 1 for h in inst.hypotheses) and gen_eval(inst.conclusion) == 0:
      return f"{inst}: hypotheses get 1, conclusion gets 0"
    raise TargetNotFalsified(f"gen valuation does not separate {inst}")
  if kind == "star":
    if all(star_true(model, h) for h in inst.hypotheses) and not star_true(model, inst.conclusion):
      return f"{inst}: hypotheses *-true, conclusion not"
    raise TargetNotFalsified(f"{inst} is not a *-truth counterexample")
  raise MalformedModel(f"unknown model kind '{kind}'")


def check_certificate(cert: Certificate, axioms, settings: Optional[Settings] = None) -> CertificateReport:
  """Validate every listed axiom in the model and refute the target.

  Args:
    cert: The certificate
    axioms: Anything with ``get(label) -> Scheme`` (an AxiomSet)
    settings: Bounds; the certificate's own bounds take precedence

  Returns:
    A report; failures carry AxiomNotValidated, TargetNotFalsified or MalformedModel
  """
  report = CertificateReport(cert.name, False)
  try:
    try:
      settings = (settings or Settings()).with_bounds(cert.bounds)
    except ValueError as e:
      raise MalformedModel(str(e))
    model = build_model(cert.model, cert.language)
    if cert.model.kind == "height":
      theorem = cert.witness.theorem if cert.witness else None
      if theorem is None:
        raise TargetNotFalsified("height certificate needs a theorem")
      schemes = [(label, axioms.get(label)) for label in cert.validate]
      outcome = height_certificate(theorem, schemes)
      if not outcome.ok:
        raise AxiomNotValidated(outcome.describe(), witness=outcome.offender)
      report.validated = [(row.label, Verdict(True, {"height": row.height}, row.reason)) for row in outcome.rows]
    else:
      for label in cert.validate:
        verdict = validate_with(cert.model.kind, model, axioms.get(label), settings, cert.language)
        if not verdict.ok:
          raise AxiomNotValidated(f"{label} is not validated: {verdict.witness}", witness=label)
        logging.debug(f"{cert.name}: {label} validated {verdict.bounds}")
        report.validated.append((label, verdict))
    report.falsified = falsify_target(cert, model, settings)
  except SchemataError as e:
    if e.location is None:
      e.location = cert.location
    logging.info(f"{cert.name}: {e}")
    report.error = e
    return report
  report.ok = True
  for _, verdict in report.validated:
    report.bounds.update(verdict.bounds)
  logging.info(f"{cert.name}: OK, {len(report.validated)} axioms validated, {report.falsified}")
  return report
