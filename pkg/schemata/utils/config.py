import os
import logging
from dataclasses import dataclass, replace
from typing import Dict, Optional

ENV_PREFIX = "SCHEMATA_"


@dataclass(frozen=True)
class Settings:
  """Tunable bounds for the brute-force checkers.

  Args:
    max_domain: Largest domain size tried when deciding pure-equality truth
    max_values: Largest value count accepted by the truth-table search
    gen_height: Formula height bound for bounded validations
    support: Extra fresh variables given to surrogate formulas
    search_budget: Evaluation budget for the truth-table search
    log_level: Root logger level name
  """

  max_domain: int = 4
  max_values: int = 5
  gen_height: int = 3
  support: int = 0
  search_budget: int = 10**8
  log_level: str = "INFO"

  def with_bounds(self, bounds: Optional[Dict[str, int]]) -> "Settings":
    if not bounds:
      return self
    changes = {}
    for key, value in bounds.items():
      if key == "height":
        changes["gen_height"] = value
      elif key in ("support", "max_domain", "max_values", "search_budget"):
        changes[key] = value
      else:
        raise ValueError(f"unknown bound '{key}'")
    return replace(self, **changes)


def _env_int(name: str, default: int) -> int:
  raw = os.environ.get(ENV_PREFIX + name)
  if raw is None or raw.strip() == "":
    return default
  try:
    value = int(raw)
    if value < 0:
      raise ValueError(raw)
    return value
  except ValueError:
    logging.warning(f"Ignoring {ENV_PREFIX}{name}={raw!r}, using {default}")
    return default


def load_settings() -> Settings:
  return Settings(
    max_domain=_env_int("MAX_DOMAIN", 4),
    max_values=_env_int("MAX_VALUES", 5),
    gen_height=_env_int("GEN_HEIGHT", 3),
    support=_env_int("SUPPORT", 0),
    search_budget=_env_int("SEARCH_BUDGET", 10**8),
    log_level=os.environ.get(ENV_PREFIX + "LOG_LEVEL", "INFO"),
  )


def parse_bounds(text: Optional[str]) -> Dict[str, int]:
  """Parse ``height=2,support=1`` into a dict."""
  if not text:
    return {}
  bounds = {}
  for item in text.split(","):
    item = item.strip()
    if not item:
      continue
    key, _, value = item.partition("=")
    if not value:
      raise ValueError(f"bound '{item}' needs a value")
    bounds[key.strip()] = int(value)
  return bounds
