####################################################################################################
#                                            errors.py                                             #
####################################################################################################
#                                                                                                  #
# Purpose: Exception hierarchy shared by every shiftdiag package. Each error carries a stable,     #
#          machine-readable ``code`` so the CLI and the JSON report can surface it verbatim.       #
#                                                                                                  #
####################################################################################################

from __future__ import annotations

from typing import Any


class ShiftDiagError(ValueError):
    """Base class for all malformed-input errors raised by shiftdiag."""

    code: str = "ERROR"

    def __init__(self, message: str, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code

    def details(self) -> list[str]:
        """Human-readable lines for the CLI error stream."""
        return [f"{self.code}: {self}"]


class DiagramValidationError(ShiftDiagError):
    """Raised by ``build_diagram`` when the validation report has errors."""

    code = "INVALID_DIAGRAM"

    def __init__(self, report: Any):
        self.report = report
        codes = ", ".join(sorted({issue.code for issue in report.errors}))
        super().__init__(f"diagram rejected ({codes})")

    def details(self) -> list[str]:
        return [f"{issue.code}: {issue.message}" for issue in self.report.errors]


class UnknownNodeError(ShiftDiagError):
    code = "UNKNOWN_NODE"


class OverlappingSetsError(ShiftDiagError):
    code = "OVERLAPPING_SETS"


class MissingRoleError(ShiftDiagError):
    code = "MISSING_ROLE"


class DslParseError(ShiftDiagError):
    """Raised by ``parse_dsl``; ``errors`` holds every ParseError found."""

    code = "PARSE_ERROR"

    def __init__(self, errors: list, source: str | None = None):
        self.errors = list(errors)
        self.source = source
        first = self.errors[0] if self.errors else None
        super().__init__(str(first) if first is not None else "parse failed")

    def details(self) -> list[str]:
        prefix = f"{self.source}:" if self.source else ""
        return [f"{prefix}{err}" for err in self.errors]


class ModelSpecError(ShiftDiagError):
    """Raised while attaching a CPT spec to a diagram."""

    code = "MODEL_SPEC"

    def __init__(self, message: str, code: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message, code)


class InferenceError(ShiftDiagError):
    code = "INFERENCE"


class VerificationError(ShiftDiagError):
    code = "MODEL_DIAGRAM_MISMATCH"
