import logging
from functools import lru_cache
from typing import Optional

import lark as L

from schemata.core.syntax import (
  Equals,
  Forall,
  Formula,
  FormulaMV,
  Implies,
  Language,
  Not,
  OBJECT_VAR,
  Pred,
  VARIABLE_MV,
  Variable,
)
from schemata.utils.errors import ArityMismatch, ParseError, UnknownPredicate

GRAMMAR = r"""
formula_only: fmla
term_only: term
script: item*

?fmla: FMMV                      -> fmmv
     | VAR "=" VAR               -> equals
     | NAME VAR*                 -> pred
     | "-." fmla                 -> neg
     | _FORALL VAR fmla          -> forall
     | "(" fmla "->" fmla ")"    -> implies

?item: language
     | "scheme" NAME "{" scheme_entry* "}"       -> scheme_block
     | "axiom" NAME "{" scheme_entry* "}"        -> axiom_block
     | "proof" NAME using? "{" proof_entry* "}"  -> proof_block
     | "cert" NAME "{" cert_entry* "}"           -> cert_block
     | "supercert" NAME "{" super_entry* "}"     -> supercert_block

language: "language" "{" [pred_decl (";" pred_decl)* ";"?] "}"
pred_decl: NAME INT

?scheme_entry: "dv" ":" mvar+ ";"?               -> dv_entry
             | "hyp" NAME ":" fmla ";"?          -> hyp_entry
             | "concl" ":" fmla ";"?             -> concl_entry
?mvar: VAR | FMMV

using: "using" NAME ("," NAME)*

?proof_entry: scheme_entry
            | INT ":" fmla justification ";"?   -> proof_line
            | "term" ":" term ";"?              -> term_entry

justification: "hyp" NAME                       -> just_hyp
             | "by" "?"                         -> just_search
             | "by" NAME subst? premises?       -> just_axiom

subst: "(" [subst_entry (";" subst_entry)*] ")"
?subst_entry: FMMV ":=" fmla   -> fm_entry
            | VAR ":=" VAR     -> vr_entry
premises: "from" INT ("," INT)*

?term: "lam" NAME "=>" term    -> lam
     | app
?app: app atom_term            -> apply
    | atom_term
?atom_term: NAME pins?         -> leaf
          | "(" term ")"
pins: "{" subst_entry (";" subst_entry)* "}"

?cert_entry: "validate" ":" names except_names? ";"?     -> validate
           | "falsify" ":" NAME ";"?                     -> falsify
           | "falsify" ":" "{" scheme_entry* "}" ";"?    -> falsify_inline
           | "model" NAME "{" model_entry* "}" ";"?      -> model
           | "witness" "{" witness_entry* "}" ";"?       -> witness
           | "bounds" "{" bound_entry* "}" ";"?          -> bounds

model_entry: NAME value* ";"
?value: INT | NAME | VAR | group
?group: "{" [tuple (";" tuple)* ";"?] "}"    -> set
      | "[" [tuple (";" tuple)* ";"?] "]"    -> matrix
tuple: value+

// ";" ends every entry, so "P v0" cannot absorb the next entry's leading x0
?witness_entry: FMMV ":=" fmla ";"           -> w_fm
              | FMMV ":=" group ";"          -> w_fm_set
              | VAR ":=" VAR ";"             -> w_var
              | "assign" VAR "=" INT ";"     -> w_assign
              | "world" NAME ";"             -> w_world
              | "theorem" ":" fmla ";"       -> w_theorem

bound_entry: NAME INT ";"?

names: NAME ("," NAME)*
except_names: "except" NAME ("," NAME)*

?super_entry: "target" ":" NAME ";"?                     -> sc_target
            | "target" ":" "{" scheme_entry* "}" ";"?    -> sc_target_inline
            | "instance" subst ";"?                      -> sc_instance
            | "transform" "sym" INT INT ";"?             -> sc_sym
            | "transform" INT INT ";"?                   -> sc_transform
            | "then" subst ";"?                          -> sc_then
            | "refute" NAME ";"?                         -> sc_refute
            | "model" NAME "{" model_entry* "}" ";"?     -> model

_FORALL.3: "A."
FMMV.2: /f\d+(?![A-Za-z0-9_'*\-])/
VAR.2: /[xv]\d+(?![A-Za-z0-9_'*\-])/
NAME: /[A-Za-z_][A-Za-z0-9_'*\-]*/
COMMENT: /#[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""


@lru_cache(maxsize=1)
def get_parser() -> L.Lark:
  return L.Lark(
    GRAMMAR,
    parser="lalr",
    start=["formula_only", "term_only", "script"],
    propagate_positions=True,
    maybe_placeholders=False,
  )


def parse_tree(text: str, start: str, source: Optional[str] = None) -> L.Tree:
  """Run the lark parser and turn its errors into ParseError."""
  try:
    return get_parser().parse(text, start=start)
  except L.exceptions.UnexpectedInput as e:
    where = f"{e.line}:{e.column}"
    if source:
      where = f"{source}:{where}"
    context = ""
    try:
      context = e.get_context(text).strip().splitlines()[0]
    except Exception:
      pass
    logging.debug(f"Parse failure at {where}: {str(e)}")
    raise ParseError(f"unexpected input near '{context}'", location=where) from None


def token_variable(tok: L.Token, mode: str = "meta") -> Variable:
  """Turn an xN / vN / fN token into a Variable, enforcing the mode."""
  text = str(tok)
  var = Variable(text[0], int(text[1:]))
  if mode == "meta" and var.kind == OBJECT_VAR:
    raise ParseError(f"object variable {text} in a metaformula", location=position(tok))
  if mode == "object" and var.kind == VARIABLE_MV:
    raise ParseError(f"metavariable {text} in an object formula", location=position(tok))
  return var


def position(item) -> Optional[str]:
  line = getattr(item, "line", None)
  if line is None:
    meta = getattr(item, "meta", None)
    if meta is None or getattr(meta, "empty", True):
      return None
    return f"{meta.line}:{meta.column}"
  return f"{line}:{item.column}"


def tree_to_formula(tree, lang: Language, mode: str = "meta") -> Formula:
  """Convert a parsed fmla subtree, checking predicates against lang."""
  kind = tree.data
  kids = tree.children
  if kind == "fmmv":
    if mode == "object":
      raise ParseError(f"formula metavariable {kids[0]} in an object formula", location=position(kids[0]))
    return FormulaMV(int(str(kids[0])[1:]))
  if kind == "equals":
    return Equals(token_variable(kids[0], mode), token_variable(kids[1], mode))
  if kind == "pred":
    name = str(kids[0])
    arity = lang.arity(name)
    if arity is None:
      raise UnknownPredicate(f"predicate '{name}' is not declared", location=position(kids[0]))
    args = tuple(token_variable(t, mode) for t in kids[1:])
    if len(args) != arity:
      raise ArityMismatch(
        f"predicate '{name}' expects {arity} arguments, got {len(args)}",
        location=position(kids[0]),
      )
    return Pred(name, args)
  if kind == "neg":
    return Not(tree_to_formula(kids[0], lang, mode))
  if kind == "forall":
    return Forall(token_variable(kids[0], mode), tree_to_formula(kids[1], lang, mode))
  if kind == "implies":
    return Implies(tree_to_formula(kids[0], lang, mode), tree_to_formula(kids[1], lang, mode))
  raise ParseError(f"unexpected node '{kind}'", location=position(tree))


def parse_formula(text: str, lang: Language, mode: str = "meta") -> Formula:
  tree = parse_tree(text, "formula_only")
  return tree_to_formula(tree.children[0], lang, mode)
