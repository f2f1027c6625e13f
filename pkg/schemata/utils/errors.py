from typing import Any, Optional


class SchemataError(Exception):
  """Base class for every error raised by the library.

  Args:
    message: Human readable description
    location: Where it happened ("12:4" in a file, "line 3" in a proof)
    witness: Optional structured evidence (violated pair, bad line, ...)
  """

  kind = "Error"
  exit_code = 1

  def __init__(
    self, message: str, location: Optional[str] = None, witness: Any = None
  ):
    super().__init__(message)
    self.message = message
    self.location = location
    self.witness = witness

  def __str__(self):
    if self.location:
      return f"{self.kind} at {self.location}: {self.message}"
    return f"{self.kind}: {self.message}"

  def to_dict(self):
    return {
      "status": "error",
      "kind": self.kind,
      "message": self.message,
      "location": self.location,
      "witness": None if self.witness is None else str(self.witness),
    }


class UsageError(SchemataError):
  kind = "UsageError"
  exit_code = 2


# syntax


class ParseError(UsageError):
  kind = "ParseError"


class UnknownPredicate(ParseError):
  kind = "UnknownPredicate"


class ArityMismatch(ParseError):
  kind = "ArityMismatch"


class TermError(SchemataError):
  kind = "TermError"


# schemes and transforms


class IllegitimateSubstitution(SchemataError):
  kind = "IllegitimateSubstitution"


class IllegitimateTransform(SchemataError):
  kind = "IllegitimateTransform"


# proof kernel


class ProofError(SchemataError):
  kind = "ProofError"


class UnknownAxiom(ProofError):
  kind = "UnknownAxiom"
  exit_code = 2


class LineMismatch(ProofError):
  kind = "LineMismatch"


class DVViolation(ProofError):
  kind = "DVViolation"


class WrongConclusion(ProofError):
  kind = "WrongConclusion"


class PremiseOutOfOrder(ProofError):
  kind = "PremiseOutOfOrder"


# object level and models


class UnassignedVariable(SchemataError):
  kind = "UnassignedVariable"


class UnsupportedScheme(SchemataError):
  kind = "UnsupportedScheme"
  exit_code = 2


class UnknownLabel(UsageError):
  kind = "UnknownLabel"


class UnknownSystem(UsageError):
  kind = "UnknownSystem"


class CertificateError(SchemataError):
  kind = "CertificateError"


class AxiomNotValidated(CertificateError):
  kind = "AxiomNotValidated"


class TargetNotFalsified(CertificateError):
  kind = "TargetNotFalsified"


class MalformedModel(CertificateError):
  kind = "MalformedModel"
  exit_code = 2


class BudgetExhausted(SchemataError):
  kind = "BudgetExhausted"


class IllegitimateStep(CertificateError):
  kind = "IllegitimateStep"


class RefutationFailed(CertificateError):
  kind = "RefutationFailed"


class HypothesisNotEstablished(CertificateError):
  kind = "HypothesisNotEstablished"


# metamath subset


class MMError(SchemataError):
  kind = "MMError"


class LexError(MMError):
  kind = "LexError"
  exit_code = 2


class ScopeError(MMError):
  kind = "ScopeError"
  exit_code = 2


class DuplicateLabel(MMError):
  kind = "DuplicateLabel"
  exit_code = 2


class StackUnderflow(MMError):
  kind = "StackUnderflow"


class SubstitutionMismatch(MMError):
  kind = "SubstitutionMismatch"


class DisjointViolation(MMError):
  kind = "DisjointViolation"


class FinalStackNotSingleton(MMError):
  kind = "FinalStackNotSingleton"


class MMWrongConclusion(MMError):
  kind = "WrongConclusion"
