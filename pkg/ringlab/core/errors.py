"""Domain errors for ringlab.

Every error carries a stable ``code`` that reports use to name the failure.
"""

from __future__ import annotations


class RingLabError(Exception):
    """Base class for all ringlab errors."""

    code = "ringlab_error"

    def __init__(self, message: str = "") -> None:
        super().__init__(message or self.code)
        self.message = message or self.code


class NonPrimeModulus(RingLabError):
    code = "non_prime_modulus"


class DimensionMismatch(RingLabError):
    code = "dimension_mismatch"


class AmbientMismatch(RingLabError):
    code = "ambient_mismatch"


class AssociativityViolation(RingLabError):
    """Structure constants fail (b_i b_j) b_k = b_i (b_j b_k)."""

    code = "associativity_violation"

    def __init__(self, triple: tuple[int, int, int]) -> None:
        i, j, k = triple
        super().__init__(f"(b{i}*b{j})*b{k} != b{i}*(b{j}*b{k})")
        self.triple = triple


class UnitViolation(RingLabError):
    code = "unit_violation"


class AlgebraMismatch(RingLabError):
    code = "algebra_mismatch"


class NotIdempotent(RingLabError):
    code = "not_idempotent"


class UnknownPreset(RingLabError):
    code = "unknown_preset"


class PresetOutOfRange(RingLabError):
    code = "preset_out_of_range"


class CapExceeded(RingLabError):
    code = "cap_exceeded"


class NotASubmodule(RingLabError):
    code = "not_a_submodule"


class SumNotWhole(RingLabError):
    code = "sum_not_whole"


class NotASummand(RingLabError):
    code = "not_a_summand"


class PreconditionViolated(RingLabError):
    code = "precondition_violated"


class NotRegular(RingLabError):
    code = "not_regular"


class PowersNotRegular(RingLabError):
    """Some power a^n of the element has no inner inverse."""

    code = "powers_not_regular"

    def __init__(self, exponent: int) -> None:
        super().__init__(f"a^{exponent} is not regular")
        self.exponent = exponent


class NotNilpotentAtThisLevel(RingLabError):
    code = "not_nilpotent_at_this_level"


class VerificationFailure(RingLabError):
    code = "verification_failure"


class RingSpecSyntaxError(RingLabError):
    """Malformed ring-spec text; line and column are 1-based."""

    code = "ring_spec_syntax"

    def __init__(self, message: str, line: int = 1, column: int = 1) -> None:
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ElementSyntaxError(RingLabError):
    code = "element_syntax"


class ReportFormatError(RingLabError):
    """A saved report that cannot be read back."""

    code = "report_format"
