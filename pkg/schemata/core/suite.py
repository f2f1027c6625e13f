"""The bundled reproduction suite.

Every check is a named function of the current Settings returning a
CheckResult. Certificate and fixture files under ``schemata/data`` become one
check per block; the remaining checks are property sweeps and regressions
over the library itself.
"""

import itertools
import logging
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from schemata.core.axiomdb import check_lattice, get_axiom, get_system
from schemata.core.microkernel import mm_load, mm_verify, variable_free_heads
from schemata.core.objectlevel import FirstOrderModel, apply_object, ObjectSubstitution, eq_truth_by_size
from schemata.core.proofkernel import TransformedAxiomSet, subst_proof, transform_proof, verify_proof
from schemata.core.schemes import Scheme, Substitution, dv_from_groups, instantiate, is_instance
from schemata.core.syntax import (
  Equals,
  Formula,
  FormulaMV,
  Implies,
  Language,
  Not,
  FORMULA_MV,
  VARIABLE_MV,
  V,
  X,
  free_vars,
  occurring,
  parse_metaformula,
  predicates_in,
  random_formula,
  render,
)
from schemata.core.transforms import (
  TransformSpec,
  closure_check,
  hull_closure,
  legitimate_transforms,
  refute_without_dv,
  sample_instances,
  supertrue_quantifier_free,
  verify_not_supertrue,
)
from schemata.models.certificates import check_certificate
from schemata.models.search import search_truth_table
from schemata.models.star import StarTruthModel, gen_counterexample, mp_preservation
from schemata.models.tables import EqRule, TruthTableModel, tt_validates
from schemata.parsing.script import ProofBlock, Script, load_script
from schemata.utils.config import Settings, load_settings
from schemata.utils.errors import IllegitimateSubstitution, IllegitimateTransform, SchemataError, UsageError

DATA_DIR = Path(__file__).resolve().parent.parent / "data"
CERT_DIR = DATA_DIR / "certs"
FIXTURE_DIR = DATA_DIR / "fixtures"
NAT_DB = DATA_DIR / "nat.mm"

SWEEP_CASES = 200
SWEEP_SEED = 20240101


@dataclass
class CheckResult:
  name: str
  ok: bool
  detail: str = ""
  bounds: Dict[str, int] = field(default_factory=dict)

  def describe(self) -> str:
    status = "PASS" if self.ok else "FAIL"
    bounds = " ".join(f"{k}={v}" for k, v in sorted(self.bounds.items()))
    return f"{status:4} {self.name:32} {self.detail}" + (f" [{bounds}]" if bounds else "")

  def to_dict(self) -> Dict:
    return {"status": "ok" if self.ok else "fail", "name": self.name, "detail": self.detail, "bounds": self.bounds}


@dataclass
class Check:
  name: str
  group: str
  run: Callable[[Settings], CheckResult]


# bundled files


@lru_cache(maxsize=None)
def _load(path: str) -> Script:
  return load_script(path)


def _files(directory: Path, pattern: str) -> List[Path]:
  return sorted(directory.glob(pattern))


def fixture_proofs() -> List[ProofBlock]:
  """Every proof block of every bundled fixture, in file order."""
  blocks = []
  for path in _files(FIXTURE_DIR, "*.fol"):
    blocks.extend(_load(str(path)).proofs)
  return blocks


def _pure_equality(scheme: Scheme) -> bool:
  return not scheme.hypotheses and not scheme.has_formula_mv() and not predicates_in(scheme.conclusion)


def _proof_check(path: Path, name: str) -> Callable[[Settings], CheckResult]:
  def run(settings: Settings) -> CheckResult:
    block = next(b for b in _load(str(path)).proofs if b.name == name)
    report = verify_proof(block.proof, block.axioms)
    if not report.ok:
      return CheckResult(f"proof-{name}", False, report.describe())
    detail = f"{len(block.proof.lines)} lines verified"
    if _pure_equality(block.proof.target):
      truth = eq_truth_by_size(block.proof.target, settings.max_domain)
      if not truth.verdict:
        return CheckResult(f"proof-{name}", False, f"conclusion is provable but false: {truth.witness}")
      detail += ", conclusion true"
    return CheckResult(f"proof-{name}", True, detail)

  return run


def _cert_check(path: Path, name: str) -> Callable[[Settings], CheckResult]:
  def run(settings: Settings) -> CheckResult:
    script = _load(str(path))
    cert = next(c for c in script.certs if c.name == name)
    report = check_certificate(cert, script.axiom_set(), settings)
    if not report.ok:
      return CheckResult(name, False, str(report.error), report.bounds)
    return CheckResult(name, True, f"{len(report.validated)} validated; {report.falsified}", report.bounds)

  return run


def _supercert_check(path: Path, name: str) -> Callable[[Settings], CheckResult]:
  def run(settings: Settings) -> CheckResult:
    block = next(b for b in _load(str(path)).supercerts if b.cert.name == name)
    report = verify_not_supertrue(block.cert, block.mode, settings.max_domain)
    return CheckResult(name, report.ok, f"not {block.mode}: {report.detail}" if report.ok else report.detail, report.bounds)

  return run


def _file_checks() -> List[Check]:
  checks = []
  for path in _files(FIXTURE_DIR, "*.fol"):
    for block in _load(str(path)).proofs:
      checks.append(Check(f"proof-{block.name}", "kernel", _proof_check(path, block.name)))
  for path in _files(CERT_DIR, "*.cert"):
    script = _load(str(path))
    for cert in script.certs:
      checks.append(Check(cert.name, "certificates", _cert_check(path, cert.name)))
    for block in script.supercerts:
      checks.append(Check(block.cert.name, "supertruth", _supercert_check(path, block.cert.name)))
  return checks


# kernel properties


def _tamperings(text: str) -> Iterable[str]:
  for k, ch in enumerate(text):
    if ch.isdigit():
      yield text[:k] + str((int(ch) + 1) % 10) + text[k + 1 :]
  for k in range(len(text)):
    if text[k] == "=":
      yield text[:k] + "-" + text[k + 1 :]


def check_tampering(settings: Settings) -> CheckResult:
  """Changing one character of any line of a bundled proof breaks it."""
  tried = 0
  blocks = 0
  for path in _files(FIXTURE_DIR, "*.fol"):
    script = _load(str(path))
    for block in script.proofs:
      blocks += 1
      count, failure = _tamper_block(block, script.language)
      if failure is not None:
        return CheckResult("kernel-tamper", False, failure)
      tried += count
  return CheckResult("kernel-tamper", True, f"{tried} tampered proofs rejected across {blocks} proofs")


def _tamper_block(block: ProofBlock, lang: Language) -> Tuple[int, Optional[str]]:
  proof = block.proof
  tried = 0
  for k, line in enumerate(proof.lines):
    for text in _tamperings(render(line.statement)):
      try:
        statement = parse_metaformula(text, lang)
      except SchemataError:
        continue
      if statement == line.statement:
        continue
      tried += 1
      lines = list(proof.lines)
      lines[k] = replace(line, statement=statement)
      if verify_proof(replace(proof, lines=tuple(lines)), block.axioms).ok:
        return tried, f"{block.name} line {k + 1} accepted as '{text}'"
  return tried, None


POOL = [X(k) for k in range(4)]


def random_substitution(rng: random.Random, scheme: Scheme, max_height: int = 2) -> Substitution:
  atoms: List[Formula] = [Equals(a, b) for a in POOL for b in POOL] + [FormulaMV(0), FormulaMV(1)]
  vr = {x: rng.choice(POOL) for x in sorted(occurring(scheme)) if x.kind == VARIABLE_MV}
  fm = {f: random_formula(rng, max_height, atoms, POOL) for f in sorted(occurring(scheme)) if f.kind == FORMULA_MV}
  return Substitution(vr, fm)


def check_proof_instances(settings: Settings) -> CheckResult:
  """Substituted proofs verify and prove the substituted target."""
  rng = random.Random(SWEEP_SEED)
  blocks = fixture_proofs()
  done = skipped = 0
  for k in range(SWEEP_CASES):
    block = blocks[k % len(blocks)]
    sigma = random_substitution(rng, block.proof.target)
    try:
      target = instantiate(sigma, block.proof.target)
    except IllegitimateSubstitution:
      skipped += 1
      continue
    moved = subst_proof(sigma, block.proof)
    report = verify_proof(moved, block.axioms)
    if not report.ok or moved.target != target:
      return CheckResult("proof-instance-sweep", False, f"{block.name} under {sigma}: {report.describe()}")
    done += 1
  return CheckResult("proof-instance-sweep", True, f"{done} substituted proofs verified, {skipped} illegitimate")


def check_proof_transforms(settings: Settings) -> CheckResult:
  """(i,j)-transformed proofs verify against the transformed axioms."""
  rng = random.Random(SWEEP_SEED + 1)
  blocks = fixture_proofs()
  done = skipped = 0
  for k in range(SWEEP_CASES):
    block = blocks[k % len(blocks)]
    i, j = rng.randrange(4), rng.randrange(4)
    try:
      moved = transform_proof(i, j, block.proof)
    except IllegitimateTransform:
      skipped += 1
      continue
    report = verify_proof(moved, TransformedAxiomSet(block.axioms, TransformSpec(i, j)))
    if not report.ok:
      return CheckResult("proof-transform-sweep", False, f"{block.name} ({i},{j}): {report.describe()}")
    done += 1
  return CheckResult("proof-transform-sweep", True, f"{done} transformed proofs verified, {skipped} illegitimate")


# supertruth properties

CLOSURE_LABELS = ("ALLdistr", "modalD", "modal4", "modal5", "vacGen", "denot", "subst", "genEq")


def check_closure(settings: Settings) -> CheckResult:
  """Legitimate transforms of instances of the supertrue axioms stay harmless."""
  checked = 0
  for n, label in enumerate(CLOSURE_LABELS):
    axiom = get_axiom(label).scheme
    instances = sample_instances(axiom, 25, seed=SWEEP_SEED + n, max_height=settings.gen_height)
    report = closure_check(label, axiom, instances, settings.max_domain)
    if not report.ok:
      return CheckResult("supertrue-closure", False, f"{label}: {report.counterexample}")
    checked += report.checked
  return CheckResult("supertrue-closure", True, f"{checked} transforms over {len(CLOSURE_LABELS)} axioms")


def _transforms_true(name: str, scheme: Scheme, symmetric: bool, settings: Settings) -> CheckResult:
  instances = sample_instances(scheme, 20, seed=SWEEP_SEED, max_height=1, fm_free=True, pool_size=3)
  checked = 0
  for inst in instances:
    for spec, moved in legitimate_transforms(inst, symmetric=symmetric):
      checked += 1
      truth = eq_truth_by_size(moved, settings.max_domain)
      if not truth.verdict:
        return CheckResult(name, False, f"{spec} of {inst} is false: {truth.witness}")
  return CheckResult(name, True, f"{checked} transforms of {len(instances)} instances are true")


def check_weak_allcomm(settings: Settings) -> CheckResult:
  """ALLcomm with DV(x0,x1): every legitimate transform of an instance is true."""
  weak = get_axiom("ALLcomm").scheme.with_dv(dv_from_groups([[X(0), X(1)]]))
  return _transforms_true("allcomm-dv-supertrue", weak, False, settings)


def check_allcomm_semisuper(settings: Settings) -> CheckResult:
  """Symmetric transforms of equality instances of ALLcomm are true."""
  return _transforms_true("allcomm-semisupertrue", get_axiom("ALLcomm").scheme, True, settings)


def check_quantifier_free(settings: Settings) -> CheckResult:
  labels = [label for label in get_system("propcalc") + get_system("EQ") if not get_axiom(label).scheme.hypotheses]
  for label in labels:
    if not supertrue_quantifier_free(get_axiom(label).scheme):
      return CheckResult("quantifier-free-supertrue", False, f"{label} rejected")
  return CheckResult("quantifier-free-supertrue", True, f"{', '.join(labels)} accepted")


def check_hull_denot(settings: Settings) -> CheckResult:
  """denot has no nontrivial legitimate transform, so its hull is instances only."""
  denot = get_axiom("denot").scheme
  hull = hull_closure([denot], depth=2, size_bound=300)
  strays = [s for s in hull.schemes if is_instance(s, denot) is None]
  if strays:
    return CheckResult("hull-denot", False, f"{strays[0]} is not an instance of denot")
  return CheckResult("hull-denot", True, f"{len(hull.schemes)} schemes after {hull.rounds} rounds")


def check_dv_necessity(settings: Settings) -> CheckResult:
  script = _load(str(FIXTURE_DIR / "dv_necessity.fol"))
  scheme = script.schemes["exists-all-or"]
  same = Equals(X(0), X(1))
  inst, truth = refute_without_dv(scheme, Substitution({}, {0: same, 1: same}), None, settings.max_domain)
  if truth.verdict:
    return CheckResult("dv-necessity", False, f"'{inst}' is true without the DV condition")
  return CheckResult("dv-necessity", True, f"without DV: {truth.witness}", {"max_domain": truth.bound})


# pure-equality decision

# scheme, DV groups, expected verdict, expected verdict from size 2 on
EQ_REGRESSION = (
  ("A. x0 x0 = x0", (), True, True),
  ("( A. x0 x0 = x0 -> x0 = x0 )", (), True, True),
  ("x0 = x1", (), False, False),
  ("-. A. x0 -. x0 = x1", (("x0", "x1"),), True, True),
  ("-. A. x0 x0 = x1", (("x0", "x1"),), False, True),
  ("( x0 = x1 -> x1 = x0 )", (), True, True),
  ("( x0 = x1 -> ( x1 = x2 -> x0 = x2 ) )", (), True, True),
  ("( A. x0 A. x1 x2 = x3 -> A. x1 A. x0 x2 = x3 )", (), True, True),
  ("( A. x0 A. x0 x2 = x3 -> A. x1 A. x0 x2 = x3 )", (), False, False),
  ("A. x0 x0 = x1", (), False, False),
  ("( A. x0 x0 = x1 -> A. x1 x1 = x0 )", (), True, True),
  ("( x0 = x1 -> A. x2 x0 = x1 )", (("x0", "x2"), ("x1", "x2")), True, True),
)


def regression_scheme(text: str, groups) -> Scheme:
  dv = dv_from_groups([[X(int(name[1:])) for name in group] for group in groups])
  return Scheme((), parse_metaformula(text), dv)


def _holds(f: Formula, size: int, asg: Dict) -> bool:
  if isinstance(f, Equals):
    return asg[f.left] == asg[f.right]
  if isinstance(f, Not):
    return not _holds(f.body, size, asg)
  if isinstance(f, Implies):
    return not _holds(f.left, size, asg) or _holds(f.right, size, asg)
  return all(_holds(f.body, size, {**asg, f.var: d}) for d in range(size))


def oracle_truth(scheme: Scheme, size: int) -> bool:
  """Every object-instance holds at every assignment in the size-element identity model."""
  xs = sorted(v for v in occurring(scheme) if v.kind == VARIABLE_MV)
  for images in itertools.product(range(len(xs)), repeat=len(xs)):
    mapping = dict(zip(xs, images))
    if any(mapping[a] == mapping[b] for a, b in (sorted(p) for p in scheme.dv)):
      continue
    formula = apply_object(ObjectSubstitution({x: V(k) for x, k in mapping.items()}, {}), scheme.conclusion)
    free = sorted(free_vars(formula))
    for values in itertools.product(range(size), repeat=len(free)):
      if not _holds(formula, size, dict(zip(free, values))):
        return False
  return True


def check_eq_regression(settings: Settings) -> CheckResult:
  for text, groups, expected, from_two in EQ_REGRESSION:
    scheme = regression_scheme(text, groups)
    report = eq_truth_by_size(scheme, settings.max_domain)
    if report.verdict != expected:
      return CheckResult("eq-decide-regression", False, f"{text}: expected {expected}")
    if eq_truth_by_size(scheme, settings.max_domain, min_size=2).verdict != from_two:
      return CheckResult("eq-decide-regression", False, f"{text}: expected {from_two} from size 2")
    for size in range(1, min(settings.max_domain, 4) + 1):
      claimed = report.by_size.get(size, report.by_size[report.bound])
      if claimed != oracle_truth(scheme, size):
        return CheckResult("eq-decide-regression", False, f"{text}: oracle disagrees at size {size}")
  return CheckResult("eq-decide-regression", True, f"{len(EQ_REGRESSION)} schemes match", {"max_domain": settings.max_domain})


# tables and search

# the five-valued table separating minimp from mp, notnotintro, K and I
MINIMP_TABLE = TruthTableModel(
  5,
  ((0, 1, 1, 1, 1), (0, 0, 0, 0, 0), (0, 0, 0, 0, 0), (0, 0, 4, 0, 4), (0, 0, 3, 3, 0)),
  (2, 0, 0, 1, 1),
  frozenset({0}),
  EqRule("const", 0, 0),
)
SEARCH_VALIDATE = ("mp", "notnotintro", "K", "I")


def check_minimp_table(settings: Settings) -> CheckResult:
  for label in SEARCH_VALIDATE:
    verdict = tt_validates(MINIMP_TABLE, get_axiom(label).scheme)
    if not verdict.ok:
      return CheckResult("search-minimp-table", False, f"{label} not validated: {verdict.witness}")
  verdict = tt_validates(MINIMP_TABLE, get_axiom("minimp").scheme)
  if verdict.ok:
    return CheckResult("search-minimp-table", False, "minimp validated")
  return CheckResult("search-minimp-table", True, f"minimp falsified by {verdict.witness}")


def check_search_two(settings: Settings) -> CheckResult:
  """No two-valued table validates mp, K and I yet refutes minimp."""
  validate = [get_axiom(label).scheme for label in ("mp", "K", "I")]
  result = search_truth_table(2, validate, get_axiom("minimp").scheme, settings.search_budget, settings.max_values)
  ok = result.model is None and result.exhaustive
  return CheckResult("search-none-2", ok, result.describe(), {"evaluations": result.evaluations})


def check_search_five(settings: Settings) -> CheckResult:
  validate = [get_axiom(label).scheme for label in SEARCH_VALIDATE]
  result = search_truth_table(5, validate, get_axiom("minimp").scheme, settings.search_budget, settings.max_values)
  return CheckResult("search-minimp-5", result.model is not None, result.describe(), {"evaluations": result.evaluations})


# metamath subset and *-truth


def check_nat_db(settings: Settings) -> CheckResult:
  db = mm_load(NAT_DB)
  statuses = {r.label: r.status for r in mm_verify(db)}
  expected = {"n1": "proved", "n2": "proved", "nn": "incomplete"}
  if statuses != expected:
    return CheckResult("mm-nat", False, f"got {statuses}")
  strays = variable_free_heads(db, "Nat", 6)
  if strays:
    return CheckResult("mm-nat", False, f"derivable with a variable: {db.render(strays[0])}")
  return CheckResult("mm-nat", True, "n1 n2 proved, nn incomplete, no Nat statement with a variable", {"depth": 6})


def check_star(settings: Settings) -> CheckResult:
  model = StarTruthModel(FirstOrderModel.identity(2, {"P": frozenset({(0,)})}), 0)
  gen = gen_counterexample(model)
  if gen.preserved:
    return CheckResult("star-rules", False, "gen preserves *-truth")
  mp = mp_preservation(model, settings.gen_height)
  if not mp.preserved:
    return CheckResult("star-rules", False, mp.describe())
  return CheckResult("star-rules", True, f"{mp.describe()}; {gen.describe()}", {"height": settings.gen_height})


def check_lattice_edges(settings: Settings) -> CheckResult:
  problems = check_lattice()
  return CheckResult("axiom-lattice", not problems, ", ".join(problems) or "every edge consistent")


BUILTIN_CHECKS: Sequence[Check] = (
  Check("kernel-tamper", "kernel", check_tampering),
  Check("proof-instance-sweep", "kernel", check_proof_instances),
  Check("proof-transform-sweep", "kernel", check_proof_transforms),
  Check("supertrue-closure", "supertruth", check_closure),
  Check("allcomm-dv-supertrue", "supertruth", check_weak_allcomm),
  Check("allcomm-semisupertrue", "supertruth", check_allcomm_semisuper),
  Check("quantifier-free-supertrue", "supertruth", check_quantifier_free),
  Check("hull-denot", "supertruth", check_hull_denot),
  Check("dv-necessity", "supertruth", check_dv_necessity),
  Check("eq-decide-regression", "objectlevel", check_eq_regression),
  Check("search-minimp-table", "search", check_minimp_table),
  Check("search-none-2", "search", check_search_two),
  Check("search-minimp-5", "search", check_search_five),
  Check("mm-nat", "microkernel", check_nat_db),
  Check("star-rules", "models", check_star),
  Check("axiom-lattice", "axiomdb", check_lattice_edges),
)


def all_checks() -> List[Check]:
  return _file_checks() + list(BUILTIN_CHECKS)


def select_checks(only: Optional[Iterable[str]] = None) -> List[Check]:
  """Checks named in only (by name or group), else every check."""
  checks = all_checks()
  if not only:
    return checks
  wanted = set(only)
  picked = [c for c in checks if c.name in wanted or c.group in wanted]
  unknown = wanted - {c.name for c in picked} - {c.group for c in picked}
  if unknown:
    raise UsageError(f"no check named {', '.join(sorted(unknown))}")
  return picked


def _run_one(check: Check, settings: Settings) -> CheckResult:
  try:
    result = check.run(settings)
  except SchemataError as e:
    logging.error(f"Check {check.name} failed: {str(e)}")
    return CheckResult(check.name, False, str(e))
  level = logging.INFO if result.ok else logging.WARNING
  logging.log(level, f"{'PASS' if result.ok else 'FAIL'} {result.name}: {result.detail}")
  return result


def run_suite(
  only: Optional[Iterable[str]] = None,
  bounds: Optional[Dict[str, int]] = None,
  jobs: int = 1,
  settings: Optional[Settings] = None,
  stop_event: Optional[Callable[[], bool]] = None,
) -> List[CheckResult]:
  """Run the selected checks; results come back in check order.

  Args:
    only: Check names or group names; every check when empty
    bounds: Overrides such as {"height": 2}
    jobs: Worker threads (1 runs inline)
    settings: Base settings, read from the environment when omitted
    stop_event: Polled between checks; remaining checks are skipped once it returns True

  Returns:
    One CheckResult per selected check that ran
  """
  settings = (settings or load_settings()).with_bounds(bounds)
  checks = select_checks(only)
  stopped = stop_event or (lambda: False)
  logging.info(f"Running {len(checks)} checks with {max(1, jobs)} worker(s)")
  results: List[CheckResult] = []
  if jobs <= 1:
    for check in checks:
      if stopped():
        break
      results.append(_run_one(check, settings))
  else:
    with ThreadPoolExecutor(max_workers=jobs) as pool:
      futures = [pool.submit(lambda c=c: None if stopped() else _run_one(c, settings)) for c in checks]
      for future in futures:
        result = future.result()
        if result is not None:
          results.append(result)
  passed = sum(r.ok for r in results)
  logging.info(f"Suite finished: {passed}/{len(results)} passed")
  return results


def run_script(script: Script, settings: Optional[Settings] = None, proofs: bool = True, certs: bool = True) -> List[CheckResult]:
  """Verify the proofs and check the certificates of a loaded script, in file order."""
  settings = settings or load_settings()
  results = []
  if proofs:
    for block in script.proofs:
      report = verify_proof(block.proof, block.axioms)
      detail = f"{len(block.proof.lines)} lines" if report.ok else report.describe()
      results.append(CheckResult(block.name, report.ok, detail))
  if certs:
    axioms = script.axiom_set()
    for cert in script.certs:
      report = check_certificate(cert, axioms, settings)
      detail = report.falsified if report.ok else str(report.error)
      results.append(CheckResult(cert.name, report.ok, detail, report.bounds))
    for block in script.supercerts:
      report = verify_not_supertrue(block.cert, block.mode, settings.max_domain)
      results.append(CheckResult(block.cert.name, report.ok, report.detail, report.bounds))
  return results
