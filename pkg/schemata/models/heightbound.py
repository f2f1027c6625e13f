"""Height argument against proofs that avoid modus ponens.

Substitution never lowers the height of a metaformula. Without mp, the last
line of a proof is an instance of the conclusion of some axiom (gen only adds
a quantifier on top), so a theorem whose shape matches no axiom conclusion
of at most its own height has no proof that avoids mp.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, List, Tuple

from schemata.core.schemes import Scheme, match
from schemata.core.syntax import Formula, height, render


@dataclass
class HeightRow:
  label: str
  height: int
  reason: str


@dataclass
class HeightReport:
  theorem: Formula
  ok: bool
  rows: List[HeightRow] = field(default_factory=list)
  offender: str = ""

  def describe(self) -> str:
    if self.ok:
      return f"no axiom conclusion yields '{render(self.theorem)}' (height {height(self.theorem)})"
    return f"'{render(self.theorem)}' is an instance of the conclusion of {self.offender}"


def height_certificate(theorem: Formula, axioms: Iterable[Tuple[str, Scheme]]) -> HeightReport:
  """Check each axiom conclusion is too tall for theorem or does not match it."""
  limit = height(theorem)
  rows = []
  for label, scheme in axioms:
    h = height(scheme.conclusion)
    if h > limit:
      rows.append(HeightRow(label, h, f"height {h} > {limit}"))
      continue
    if match(scheme.conclusion, theorem) is None:
      rows.append(HeightRow(label, h, "shape does not match"))
      continue
    logging.info(f"Height argument fails: {label} concludes {render(scheme.conclusion)}")
    return HeightReport(theorem, False, rows, label)
  return HeightReport(theorem, True, rows)
