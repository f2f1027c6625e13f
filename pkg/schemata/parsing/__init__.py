from .grammar import parse_formula, parse_tree
from .script import Script, load_script, parse_script

__all__ = [
  "parse_formula",
  "parse_tree",
  "Script",
  "load_script",
  "parse_script",
]
