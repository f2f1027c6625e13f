"""Script files: language, scheme, axiom, proof, cert and supercert blocks.

Blocks are read top to bottom in one pass. A name may only be used after the
block that declares it; catalog labels and system names are always visible.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import lark as L

from schemata.core.axiomdb import axiom_set, expand_labels, full_axiom_set, get_axiom, is_system
from schemata.core.proofkernel import AxiomSet, ByAxiom, Hyp, ProofLine, ProofScript, Unjustified, elaborate_lines
from schemata.core.schemes import Scheme, Substitution, dv_from_groups
from schemata.core.syntax import EMPTY_LANGUAGE, Language, Variable
from schemata.core.terms import App, Lam, Leaf, Term, elaborate_term
from schemata.core.transforms import SupertruthCertificate, TransformSpec
from schemata.models.certificates import Certificate, Group, ModelSpec, Witness, build_model
from schemata.parsing.grammar import parse_tree, position, token_variable, tree_to_formula
from schemata.utils.errors import ParseError, SchemataError, UnknownLabel, UsageError

DECLARING = {
  "scheme_block": "scheme",
  "axiom_block": "axiom",
  "proof_block": "proof",
  "cert_block": "cert",
  "supercert_block": "supercert",
}


@dataclass
class ProofBlock:
  name: str
  proof: ProofScript
  axioms: AxiomSet
  using: List[str] = field(default_factory=list)
  location: Optional[str] = None
  term: Optional[Term] = None


@dataclass
class SupercertBlock:
  cert: SupertruthCertificate
  mode: str
  location: Optional[str] = None


@dataclass
class Script:
  source: str = "<string>"
  language: Language = EMPTY_LANGUAGE
  schemes: Dict[str, Scheme] = field(default_factory=dict)
  axioms: Dict[str, Scheme] = field(default_factory=dict)
  proofs: List[ProofBlock] = field(default_factory=list)
  certs: List[Certificate] = field(default_factory=list)
  supercerts: List[SupercertBlock] = field(default_factory=list)

  def axiom_set(self) -> AxiomSet:
    """The catalog, the language's predicate axioms and the file's own axioms."""
    return full_axiom_set(self.language, self.axioms)

  def is_empty(self) -> bool:
    return not (self.schemes or self.axioms or self.proofs or self.certs or self.supercerts)


class _Builder:
  def __init__(self, source: str):
    self.script = Script(source)
    self.later: Dict[str, int] = {}
    self.index = 0

  def where(self, item) -> Optional[str]:
    pos = position(item)
    if pos is None:
      return self.script.source
    return f"{self.script.source}:{pos}"

  @property
  def lang(self) -> Language:
    return self.script.language

  # names

  def _known(self, name: str) -> bool:
    s = self.script
    return name in s.schemes or name in s.axioms or any(b.name == name for b in s.proofs)

  def _forward(self, name: str, item) -> None:
    if self.later.get(name, -1) > self.index:
      raise ParseError(f"'{name}' is used before the block that declares it", location=self.where(item))

  def lookup_scheme(self, tok) -> Scheme:
    name = str(tok)
    s = self.script
    if name in s.axioms:
      return s.axioms[name]
    if name in s.schemes:
      return s.schemes[name]
    self._forward(name, tok)
    try:
      return get_axiom(name, self.lang).scheme
    except UnknownLabel as e:
      e.location = self.where(tok)
      raise

  def expand(self, toks, exclude=()) -> List[str]:
    """Labels named by axiom, alias or system names (file axioms included)."""
    excluded = {str(t) for t in exclude}
    out: List[str] = []
    for tok in toks:
      name = str(tok)
      if name in self.script.axioms:
        labels = [name]
      else:
        self._forward(name, tok)
        try:
          labels = expand_labels([name], self.lang, excluded)
        except SchemataError as e:
          e.location = self.where(tok)
          raise
      out.extend(label for label in labels if label not in out and label not in excluded)
    return out

  def _declare(self, name_tok) -> str:
    name = str(name_tok)
    if self._known(name) or any(c.name == name for c in self.script.certs) or any(
      b.cert.name == name for b in self.script.supercerts
    ):
      raise ParseError(f"'{name}' is declared twice", location=self.where(name_tok))
    return name

  # pieces

  def formula(self, tree, mode: str = "meta"):
    return tree_to_formula(tree, self.lang, mode)

  def subst(self, tree) -> Substitution:
    pairs = []
    for entry in tree.children:
      key, value = entry.children
      if entry.data == "fm_entry":
        pairs.append((Variable("f", int(str(key)[1:])), self.formula(value)))
      else:
        pairs.append((token_variable(key), token_variable(value)))
    try:
      return Substitution.from_pairs(pairs)
    except TypeError as e:
      raise ParseError(str(e), location=self.where(tree))

  def scheme_entries(self, entries, what: str, item) -> Tuple[Scheme, Tuple[str, ...], list]:
    """Split scheme entries off; returns the scheme, hypothesis names and the rest."""
    groups, hyps, names, concl, rest = [], [], [], None, []
    for entry in entries:
      if entry.data == "dv_entry":
        groups.append([token_variable(t) for t in entry.children])
      elif entry.data == "hyp_entry":
        names.append(str(entry.children[0]))
        hyps.append(self.formula(entry.children[1]))
      elif entry.data == "concl_entry":
        if concl is not None:
          raise ParseError(f"{what} has two conclusions", location=self.where(entry))
        concl = self.formula(entry.children[0])
      else:
        rest.append(entry)
    if concl is None:
      raise ParseError(f"{what} has no conclusion", location=self.where(item))
    if len(set(names)) != len(names):
      raise ParseError(f"{what} repeats a hypothesis name", location=self.where(item))
    return Scheme(tuple(hyps), concl, dv_from_groups(groups)), tuple(names), rest

  def value(self, item):
    if isinstance(item, L.Token):
      return int(item) if item.type == "INT" else str(item)
    rows = tuple(tuple(self.value(v) for v in row.children) for row in item.children)
    return Group(item.data, rows)

  def model_spec(self, tree) -> ModelSpec:
    kind = str(tree.children[0])
    entries = []
    for entry in tree.children[1:]:
      key, *values = entry.children
      entries.append((str(key), [self.value(v) for v in values]))
    return ModelSpec(kind, entries)

  def witness(self, tree) -> Witness:
    w = Witness()
    for entry in tree.children:
      kids = entry.children
      if entry.data == "w_fm":
        w.fm[token_variable(kids[0])] = self.formula(kids[1], "object")
      elif entry.data == "w_fm_set":
        w.fm[token_variable(kids[0])] = frozenset(str(v) for row in kids[1].children for v in row.children)
      elif entry.data == "w_var":
        w.vr[token_variable(kids[0])] = token_variable(kids[1], "object")
      elif entry.data == "w_assign":
        w.assign[token_variable(kids[0], "object")] = int(kids[1])
      elif entry.data == "w_world":
        w.world = str(kids[0])
      else:
        w.theorem = self.formula(kids[0])
    return w

  def term(self, tree) -> Term:
    kind = tree.data
    if kind == "lam":
      return Lam(str(tree.children[0]), self.term(tree.children[1]))
    if kind == "apply":
      return App(self.term(tree.children[0]), self.term(tree.children[1]))
    name = tree.children[0]
    pins = self.subst(tree.children[1]) if len(tree.children) > 1 else Substitution.identity()
    return Leaf(str(name), pins, self.where(name))

  # blocks

  def language(self, tree) -> None:
    if not self.script.is_empty() or self.lang.predicates:
      raise ParseError("the language block must come first and only once", location=self.where(tree))
    decls = [(str(d.children[0]), int(d.children[1])) for d in tree.children]
    try:
      self.script.language = Language(tuple(decls))
    except ValueError as e:
      raise ParseError(str(e), location=self.where(tree))
    logging.debug(f"{self.script.source}: language {self.lang.render()}")

  def scheme_block(self, tree) -> None:
    name = self._declare(tree.children[0])
    scheme, _, rest = self.scheme_entries(tree.children[1:], f"scheme {name}", tree)
    self._no_extra(rest, name)
    self.script.schemes[name] = scheme

  def axiom_block(self, tree) -> None:
    name = self._declare(tree.children[0])
    scheme, _, rest = self.scheme_entries(tree.children[1:], f"axiom {name}", tree)
    self._no_extra(rest, name)
    self.script.axioms[name] = scheme

  def _no_extra(self, rest, name: str) -> None:
    if rest:
      raise ParseError(f"unexpected entry in '{name}'", location=self.where(rest[0]))

  def proof_block(self, tree) -> None:
    name = self._declare(tree.children[0])
    kids = tree.children[1:]
    using: List[str] = []
    if kids and isinstance(kids[0], L.Tree) and kids[0].data == "using":
      using = [str(t) for t in kids[0].children]
      labels = self.expand(kids[0].children)
      axioms = axiom_set(labels, self.lang, self.script.axioms)
      kids = kids[1:]
    else:
      axioms = self.script.axiom_set()
    target, hyp_names, rest = self.scheme_entries(kids, f"proof {name}", tree)
    lines, term = [], None
    for entry in rest:
      if entry.data == "term_entry":
        if term is not None or lines:
          raise ParseError("a proof has either lines or one term", location=self.where(entry))
        term = self.term(entry.children[0])
        continue
      if term is not None:
        raise ParseError("a proof has either lines or one term", location=self.where(entry))
      number, fmla, just = entry.children
      if int(number) != len(lines) + 1:
        raise ParseError(f"expected line {len(lines) + 1}, found {number}", location=self.where(number))
      lines.append(ProofLine(self.formula(fmla), self.justification(just), self.where(number)))
    location = self.where(tree)
    if term is not None:
      try:
        proof = elaborate_term(term, target, axioms, hyp_names, name)
      except SchemataError as e:
        e.location = e.location or location
        raise
    else:
      proof = ProofScript(target, tuple(lines), hyp_names, name)
      if any(isinstance(line.justification, Unjustified) for line in lines):
        proof = elaborate_lines(proof, axioms)
    self.script.proofs.append(ProofBlock(name, proof, axioms, using, location, term))

  def justification(self, tree):
    if tree.data == "just_hyp":
      return Hyp(str(tree.children[0]))
    if tree.data == "just_search":
      return Unjustified()
    label = str(tree.children[0])
    sigma, premises = Substitution.identity(), ()
    for part in tree.children[1:]:
      if part.data == "subst":
        sigma = self.subst(part)
      else:
        premises = tuple(int(t) for t in part.children)
    return ByAxiom(label, sigma, premises)

  def cert_block(self, tree) -> None:
    name = self._declare(tree.children[0])
    validate, target, label, model, witness, bounds = [], None, None, None, None, {}
    for entry in tree.children[1:]:
      kind = entry.data
      if kind == "validate":
        exclude = entry.children[1].children if len(entry.children) > 1 else ()
        validate = self.expand(entry.children[0].children, exclude)
      elif kind == "falsify":
        label = str(entry.children[0])
        target = self.lookup_scheme(entry.children[0])
      elif kind == "falsify_inline":
        target, _, _ = self.scheme_entries(entry.children, f"cert {name} target", entry)
      elif kind == "model":
        model = self.model_spec(entry)
      elif kind == "witness":
        witness = self.witness(entry)
      else:
        for b in entry.children:
          bounds[str(b.children[0])] = int(b.children[1])
    if target is None or model is None:
      raise ParseError(f"cert {name} needs a falsify target and a model", location=self.where(tree))
    self.script.certs.append(
      Certificate(name, validate, target, model, label, witness, bounds, self.lang, self.where(tree))
    )

  def supercert_block(self, tree) -> None:
    name = self._declare(tree.children[0])
    target, label, instance, spec, then, refute, model = None, None, Substitution.identity(), None, None, "eq-decide", None
    for entry in tree.children[1:]:
      kind = entry.data
      if kind == "sc_target":
        label = str(entry.children[0])
        target = self.lookup_scheme(entry.children[0])
      elif kind == "sc_target_inline":
        target, _, _ = self.scheme_entries(entry.children, f"supercert {name} target", entry)
      elif kind == "sc_instance":
        instance = self.subst(entry.children[0])
      elif kind in ("sc_sym", "sc_transform"):
        spec = TransformSpec(int(entry.children[0]), int(entry.children[1]), kind == "sc_sym")
      elif kind == "sc_then":
        then = self.subst(entry.children[0])
      elif kind == "sc_refute":
        refute = str(entry.children[0])
      else:
        model = build_model(self.model_spec(entry), self.lang)
    if target is None or spec is None:
      raise ParseError(f"supercert {name} needs a target and a transform", location=self.where(tree))
    cert = SupertruthCertificate(name, target, instance, spec, then, refute, model, label)
    mode = "semisupertruth" if spec.symmetric else "supertruth"
    self.script.supercerts.append(SupercertBlock(cert, mode, self.where(tree)))

  def build(self, tree) -> Script:
    items = tree.children
    for k, item in enumerate(items):
      if item.data in DECLARING:
        self.later.setdefault(str(item.children[0]), k)
    for k, item in enumerate(items):
      self.index = k
      getattr(self, item.data)(item)
    return self.script


def parse_script(text: str, source: str = "<string>") -> Script:
  """Parse and elaborate a script; proofs are built but not yet verified."""
  tree = parse_tree(text, "script", source)
  script = _Builder(source).build(tree)
  logging.debug(
    f"{source}: {len(script.proofs)} proofs, {len(script.certs)} certs, {len(script.supercerts)} supercerts"
  )
  return script


def load_script(path) -> Script:
  path = Path(path)
  try:
    text = path.read_text(encoding="utf-8")
  except OSError as e:
    raise UsageError(f"cannot read {path}: {e.strerror}", location=str(path))
  return parse_script(text, str(path))
