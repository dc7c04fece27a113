"""
Error taxonomy for curvefrob. Every error carries a machine-readable ``code`` that
the CLI emits verbatim; validation errors map to exit code 3.
"""

from __future__ import annotations

from typing import Any


class CurveFrobError(Exception):
    """Base class: ``code`` is stable and machine-readable, ``message`` is for humans."""

    code = "CurveFrobError"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"code": self.code, "message": self.message}
        out.update({k: v for k, v in self.details.items() if v is not None})
        return out


# ---- polycore ----
class ParseError(CurveFrobError):
    code = "ParseError"

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at byte {offset})", offset=offset)
        self.offset = offset


class ZeroPolynomialError(CurveFrobError):
    code = "ZeroPolynomial"


class NegativePowerError(CurveFrobError):
    code = "NegativePower"


# ---- idealkit ----
class EmptyIdealError(CurveFrobError):
    code = "EmptyIdeal"


class InfiniteDimensional(CurveFrobError):
    code = "InfiniteDimensional"


# ---- curvesing validation ----
class NotQuasiHomogeneous(CurveFrobError):
    code = "NotQuasiHomogeneous"

    def __init__(self, which: str) -> None:
        super().__init__(f"{which} is not quasi-homogeneous for the given weights", which=which)
        self.which = which


class SmoothCurve(CurveFrobError):
    code = "SmoothCurve"


class NonIsolated(CurveFrobError):
    code = "NonIsolated"

    def __init__(self, check: str, message: str) -> None:
        super().__init__(message, check=check)
        self.check = check


class DegenerateF(CurveFrobError):
    code = "DegenerateF"


class InconsistentResult(CurveFrobError):
    """An internal cross-check failed. Never expected on validated input."""

    code = "InconsistentResult"


# ---- cli ----
class ProblemSpecError(CurveFrobError):
    def __init__(self, code: str, message: str) -> None:
        super().__init__(message)
        self.code = code
