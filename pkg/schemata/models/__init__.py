from .certificates import Certificate, CertificateReport, Group, ModelSpec, Witness, build_model, check_certificate
from .genval import gen_eval, gen_eval_i, gen_validates
from .heightbound import HeightReport, height_certificate
from .modal import KripkeModel, NeighborhoodModel, kripke_validates, neighborhood_validates
from .search import SearchResult, render_table, search_truth_table
from .star import StarTruthModel, gen_counterexample, mp_preservation, star_true, star_truth_check
from .tables import CLASSICAL, EqRule, TruthTableModel, tt_eval, tt_validates

__all__ = [
  "Certificate",
  "CertificateReport",
  "Group",
  "ModelSpec",
  "Witness",
  "build_model",
  "check_certificate",
  "gen_eval",
  "gen_eval_i",
  "gen_validates",
  "HeightReport",
  "height_certificate",
  "KripkeModel",
  "NeighborhoodModel",
  "kripke_validates",
  "neighborhood_validates",
  "SearchResult",
  "render_table",
  "search_truth_table",
  "StarTruthModel",
  "gen_counterexample",
  "mp_preservation",
  "star_true",
  "star_truth_check",
  "CLASSICAL",
  "EqRule",
  "TruthTableModel",
  "tt_eval",
  "tt_validates",
]
