"""Command-line front end.

Exit codes: 0 success, 1 semantic failure, 2 usage or resolution error.
Every command accepts ``--json``; its reports share the keys status,
witness, bounds and location.
"""

import argparse
import json
import logging
import re
import sys
from typing import Dict, List, Optional, Sequence

from schemata.core.axiomdb import (
  BLOCS,
  axiom_set,
  catalog,
  expand_labels,
  export_catalog,
  get_axiom,
  get_system,
  system_names,
)
from schemata.core.microkernel import mm_load, mm_verify
from schemata.core.objectlevel import eq_truth_by_size
from schemata.core.proofkernel import verify_proof
from schemata.core.schemes import Scheme, Substitution, dv_from_groups, instantiate, render_scheme
from schemata.core.suite import run_script, run_suite
from schemata.core.syntax import EMPTY_LANGUAGE, Language, Variable, parse_metaformula
from schemata.core.transforms import TransformSpec, transform_scheme
from schemata.models.search import render_table, search_truth_table
from schemata.parsing.script import load_script
from schemata.utils.config import Settings, load_settings, parse_bounds
from schemata.utils.errors import SchemataError, UsageError
from schemata.utils.logging import setup_console_logging

_MV = re.compile(r"^[xf]\d+$")


# argument helpers


def _language(text: Optional[str]) -> Language:
  """``"P 1, Q 2"`` -> Language."""
  if not text:
    return EMPTY_LANGUAGE
  preds = []
  for item in text.split(","):
    parts = item.split()
    if len(parts) != 2 or not parts[1].isdigit():
      raise UsageError(f"bad predicate declaration '{item.strip()}' (expected NAME ARITY)")
    preds.append((parts[0], int(parts[1])))
  try:
    return Language(tuple(preds))
  except ValueError as e:
    raise UsageError(str(e))


def _variable(token: str) -> Variable:
  token = token.strip()
  if not _MV.match(token):
    raise UsageError(f"'{token}' is not a metavariable")
  return Variable(token[0], int(token[1:]))


def _dv_groups(groups: Optional[Sequence[str]]):
  return dv_from_groups([_variable(t) for t in group.split()] for group in groups or ())


def _scheme(args: argparse.Namespace) -> Scheme:
  """A catalog label, or formula text plus --hyp and --dv options."""
  lang = _language(args.language)
  text = args.scheme.strip()
  if " " not in text and not _MV.match(text):
    scheme = get_axiom(text, lang).scheme
  else:
    hyps = tuple(parse_metaformula(h, lang) for h in args.hyp or ())
    scheme = Scheme(hyps, parse_metaformula(text, lang))
  extra = _dv_groups(args.dv)
  if extra:
    scheme = scheme.with_dv(scheme.dv | extra)
  subs = getattr(args, "sub", None)
  if subs:
    scheme = instantiate(_substitution(subs, lang), scheme)
  return scheme


def _substitution(entries: Sequence[str], lang: Language) -> Substitution:
  """Entries like ``f0 := x2 = x3`` or ``x0 := x1``."""
  pairs = []
  for entry in entries:
    key, sep, value = entry.partition(":=")
    if not sep:
      raise UsageError(f"substitution entry '{entry}' needs ':='")
    var = _variable(key)
    pairs.append((var, parse_metaformula(value, lang) if var.kind == "f" else _variable(value)))
  try:
    return Substitution.from_pairs(pairs)
  except TypeError as e:
    raise UsageError(str(e))


def _settings(args: argparse.Namespace) -> Settings:
  settings = load_settings()
  try:
    bounds = parse_bounds(args.bounds)
    if args.budget is not None:
      bounds["search_budget"] = args.budget
    return settings.with_bounds(bounds)
  except ValueError as e:
    raise UsageError(str(e))


def _emit(args: argparse.Namespace, data: Dict, text: str) -> None:
  if args.json:
    print(json.dumps(data, indent=2, sort_keys=True))
  else:
    print(text)


# commands


def _verify_command(args: argparse.Namespace) -> int:
  script = load_script(args.path)
  if not script.proofs:
    raise UsageError(f"{args.path} has no proof blocks")
  reports = []
  code = 0
  for block in script.proofs:
    axioms = block.axioms
    if args.system:
      labels = expand_labels([args.system], script.language)
      axioms = axiom_set(labels, script.language, extra=script.axioms)
    report = verify_proof(block.proof, axioms)
    reports.append(report)
    if not report.ok:
      code = report.error.exit_code
      break
  data = {
    "status": "ok" if code == 0 else "fail",
    "proofs": [r.to_dict() for r in reports],
    "witness": None if code == 0 else reports[-1].to_dict().get("witness"),
    "location": None if code == 0 else reports[-1].error.location,
    "bounds": {},
  }
  _emit(args, data, "\n".join(r.describe() for r in reports))
  return code


def _mm_verify_command(args: argparse.Namespace) -> int:
  try:
    db = mm_load(args.path)
  except OSError as e:
    raise UsageError(f"cannot read {args.path}: {e.strerror}")
  reports = mm_verify(db)
  failed = [r for r in reports if not r.ok]
  data = {
    "status": "ok" if not failed else "fail",
    "assertions": [r.to_dict() for r in reports],
    "witness": failed[0].label if failed else None,
    "location": failed[0].error.location if failed else None,
    "bounds": {},
  }
  _emit(args, data, "\n".join(r.describe() for r in reports))
  if not failed:
    return 0
  return max(r.error.exit_code for r in failed)


def _decide_command(args: argparse.Namespace) -> int:
  settings = _settings(args)
  scheme = _scheme(args)
  report = eq_truth_by_size(scheme, settings.max_domain)
  sizes = " ".join(f"{n}:{'T' if v else 'F'}" for n, v in sorted(report.by_size.items()))
  text = f"{'true' if report.verdict else 'false'}  (sizes {sizes}{'' if report.exact else ', capped'})"
  if report.witness:
    text += f"\n  {report.witness}"
  data = {
    "status": "ok",
    "verdict": report.verdict,
    "by_size": {str(n): v for n, v in report.by_size.items()},
    "exact": report.exact,
    "witness": report.witness,
    "bounds": {"max_domain": settings.max_domain, "size_bound": report.bound},
    "location": None,
  }
  _emit(args, data, text)
  return 0


def _transform_command(args: argparse.Namespace) -> int:
  scheme = _scheme(args)
  out = transform_scheme(TransformSpec(args.i, args.j, args.sym), scheme)
  data = {
    "status": "ok",
    "scheme": render_scheme(scheme),
    "result": render_scheme(out),
    "witness": None,
    "bounds": {},
    "location": None,
  }
  _emit(args, data, render_scheme(out))
  return 0


def _instantiate_command(args: argparse.Namespace) -> int:
  out = _scheme(args)
  data = {"status": "ok", "result": render_scheme(out), "witness": None, "bounds": {}, "location": None}
  _emit(args, data, render_scheme(out))
  return 0


def _axioms_command(args: argparse.Namespace) -> int:
  lang = _language(args.language)
  if args.action == "list":
    entries = [e for e in catalog() if not args.bloc or e.bloc == args.bloc]
    lines = [f"{e.label:12} {e.bloc:10} {e.set_mm_label or '':10} {render_scheme(e.scheme)}" for e in entries]
    data = {"status": "ok", "axioms": [e.label for e in entries], "witness": None, "bounds": {}, "location": None}
    _emit(args, data, "\n".join(lines))
  elif args.action == "show":
    if not args.name:
      raise UsageError("axioms show needs a label")
    entry = get_axiom(args.name, lang)
    data = {
      "status": "ok",
      "label": entry.label,
      "bloc": entry.bloc,
      "set_mm": entry.set_mm_label,
      "scheme": render_scheme(entry.scheme),
      "witness": None,
      "bounds": {},
      "location": None,
    }
    _emit(args, data, f"{entry.label} ({entry.bloc}): {render_scheme(entry.scheme)}")
  elif args.action == "system":
    if not args.name:
      _emit(args, {"status": "ok", "systems": system_names(), "witness": None, "bounds": {}, "location": None}, "\n".join(system_names()))
      return 0
    labels = get_system(args.name, lang)
    data = {"status": "ok", "system": args.name, "axioms": labels, "witness": None, "bounds": {}, "location": None}
    _emit(args, data, f"{args.name}: {', '.join(labels)}")
  else:
    print(export_catalog(lang), end="")
  return 0


def _check_cert_command(args: argparse.Namespace) -> int:
  settings = _settings(args)
  script = load_script(args.path)
  results = run_script(script, settings, proofs=False)
  if args.only:
    results = [r for r in results if r.name in args.only]
  if not results:
    raise UsageError(f"{args.path} has no matching cert or supercert blocks")
  ok = all(r.ok for r in results)
  first_bad = next((r for r in results if not r.ok), None)
  data = {
    "status": "ok" if ok else "fail",
    "results": [r.to_dict() for r in results],
    "witness": None if first_bad is None else first_bad.detail,
    "bounds": {},
    "location": None,
  }
  _emit(args, data, "\n".join(r.describe() for r in results))
  return 0 if ok else 1


def _search_table_command(args: argparse.Namespace) -> int:
  settings = _settings(args)
  lang = EMPTY_LANGUAGE
  validate = [get_axiom(label.strip(), lang).scheme for label in args.validate.split(",") if label.strip()]
  falsify = get_axiom(args.falsify, lang).scheme
  result = search_truth_table(
    args.values, validate, falsify, budget=settings.search_budget, max_values=settings.max_values
  )
  if result.model is None:
    text = "none (exhaustive)"
  else:
    text = render_table(result.model)
  data = {
    "status": "ok",
    "found": result.model is not None,
    "table": None if result.model is None else render_table(result.model),
    "exhaustive": result.exhaustive,
    "evaluations": result.evaluations,
    "witness": None,
    "bounds": {"values": args.values, "search_budget": settings.search_budget},
    "location": None,
  }
  _emit(args, data, text)
  return 0


def _suite_command(args: argparse.Namespace) -> int:
  settings = _settings(args)
  results = run_suite(only=args.only, jobs=args.jobs, settings=settings)
  passed = sum(r.ok for r in results)
  lines = [r.describe() for r in results]
  lines.append(f"{passed}/{len(results)} passed")
  data = {
    "status": "ok" if passed == len(results) else "fail",
    "results": [r.to_dict() for r in results],
    "witness": None,
    "bounds": {"max_domain": settings.max_domain, "height": settings.gen_height, "support": settings.support},
    "location": None,
  }
  _emit(args, data, "\n".join(lines))
  return 0 if passed == len(results) else 1


def _gui_command(args: argparse.Namespace) -> int:
  from PyQt6.QtWidgets import QApplication

  from schemata.gui.main_window import SchemataGUI

  app = QApplication(sys.argv[:1])
  window = SchemataGUI()
  window.show()
  return app.exec()


# parser


def _scheme_options(p: argparse.ArgumentParser, substitutions: bool = False) -> None:
  p.add_argument("scheme", help="Catalog label or metaformula text")
  p.add_argument("--hyp", action="append", help="Hypothesis (repeatable)")
  p.add_argument("--dv", action="append", help="DV group, e.g. 'x0 x1 f0' (repeatable)")
  p.add_argument("--language", help="Predicates, e.g. 'P 1, Q 2'")
  if substitutions:
    p.add_argument("--sub", action="append", help="Substitution entry 'f0 := x0 = x1' (repeatable)")


def build_parser() -> argparse.ArgumentParser:
  common = argparse.ArgumentParser(add_help=False)
  common.add_argument("--json", action="store_true", help="Machine-readable output")
  common.add_argument("--verbose", action="store_true", help="Debug logging")
  common.add_argument("--bounds", help="Bound overrides, e.g. height=2,support=1")
  common.add_argument("--budget", type=int, help="Truth-table search budget")

  ap = argparse.ArgumentParser(
    prog="schemata",
    description=__doc__,
    formatter_class=argparse.RawDescriptionHelpFormatter,
  )
  sub = ap.add_subparsers(dest="command", required=True)

  p = sub.add_parser("verify", parents=[common], help="Verify the proof blocks of a script")
  p.add_argument("path")
  p.add_argument("--system", help="Verify against this named system instead of each block's axioms")
  p.set_defaults(handler=_verify_command)

  p = sub.add_parser("mm-verify", parents=[common], help="Verify a Metamath-style database")
  p.add_argument("path")
  p.set_defaults(handler=_mm_verify_command)

  p = sub.add_parser("decide", parents=[common], help="Decide truth of a pure-equality scheme")
  _scheme_options(p, substitutions=True)
  p.set_defaults(handler=_decide_command)

  p = sub.add_parser("transform", parents=[common], help="Apply the (i,j)-transform to a scheme")
  p.add_argument("i", type=int)
  p.add_argument("j", type=int)
  _scheme_options(p, substitutions=True)
  p.add_argument("--sym", action="store_true", help="Symmetric transform")
  p.set_defaults(handler=_transform_command)

  p = sub.add_parser("instantiate", parents=[common], help="Substitute into a scheme")
  _scheme_options(p, substitutions=True)
  p.set_defaults(handler=_instantiate_command)

  p = sub.add_parser("axioms", parents=[common], help="Query the built-in catalog")
  p.add_argument("action", choices=["list", "show", "system", "export"])
  p.add_argument("name", nargs="?")
  p.add_argument("--bloc", choices=list(BLOCS))
  p.add_argument("--language", help="Predicates, e.g. 'P 1, Q 2'")
  p.set_defaults(handler=_axioms_command)

  p = sub.add_parser("check-cert", parents=[common], help="Check cert and supercert blocks")
  p.add_argument("path")
  p.add_argument("--only", action="append", help="Block name (repeatable)")
  p.set_defaults(handler=_check_cert_command)

  p = sub.add_parser("search-table", parents=[common], help="Search a finite truth table")
  p.add_argument("--values", type=int, required=True)
  p.add_argument("--validate", required=True, help="Comma separated labels")
  p.add_argument("--falsify", required=True)
  p.set_defaults(handler=_search_table_command)

  p = sub.add_parser("suite", parents=[common], help="Run the bundled reproduction suite")
  p.add_argument("--only", action="append", help="Check or group name (repeatable)")
  p.add_argument("--jobs", type=int, default=1)
  p.set_defaults(handler=_suite_command)

  p = sub.add_parser("gui", parents=[common], help="Open the desktop window")
  p.set_defaults(handler=_gui_command)
  return ap


def main(argv: Optional[List[str]] = None) -> int:
  ap = build_parser()
  try:
    args = ap.parse_args(argv)
  except SystemExit as e:
    return 2 if e.code else 0
  level = "DEBUG" if args.verbose else load_settings().log_level
  setup_console_logging(level)
  try:
    return args.handler(args)
  except SchemataError as e:
    logging.error(f"{args.command} failed: {str(e)}")
    if args.json:
      print(json.dumps(dict(e.to_dict(), bounds={}), indent=2, sort_keys=True))
    else:
      print(str(e), file=sys.stderr)
    return e.exit_code
