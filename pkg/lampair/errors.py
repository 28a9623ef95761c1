"""Exceptions raised by lampair and their CLI exit codes"""

from typing import Any, Optional


class LampairError(Exception):
    """Base class for every error lampair raises on purpose."""

    exit_code = 1


class UnsupportedConstructError(LampairError):
    """The input is valid mathematics the exact engine does not cover."""

    exit_code = 3


class DegreeUnsupportedError(UnsupportedConstructError):
    def __init__(self, detail: str = "") -> None:
        message = "degree unsupported"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class CantorInteractionError(UnsupportedConstructError):
    def __init__(self, detail: str = "") -> None:
        message = "Cantor–jump interaction unsupported"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class NotInSupportError(LampairError, ValueError):
    def __init__(self, point: Any) -> None:
        super().__init__(f"not in support: {point}")
        self.point = point


class NotSummableError(LampairError, ValueError):
    def __init__(self, detail: str = "") -> None:
        message = "not in BV_A"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class UndefinedDensityError(LampairError, ValueError):
    def __init__(self, point: Any) -> None:
        super().__init__(f"undefined density at {point}")
        self.point = point


class SupportOverflowError(LampairError, ValueError):
    def __init__(self, epsilon: Any, limit: Any) -> None:
        super().__init__(
            f"support overflow: epsilon {epsilon} exceeds admissible {limit}"
        )


class ShiftRequestedError(LampairError, ValueError):
    def __init__(self, point: Any, reason: str) -> None:
        super().__init__(
            f"shift requested: endpoint {point} lies on {reason}"
        )
        self.point = point


class NonLipschitzError(LampairError, ValueError):
    """The scalar map of a chain-rule check is not Lipschitz on the range."""


class NonStrictSequenceError(LampairError):
    def __init__(self, certificate: Any) -> None:
        super().__init__(
            "sequence is not strictly convergent: "
            f"{certificate.describe()}"
        )
        self.certificate = certificate


class ScenarioParseError(LampairError):
    exit_code = 2

    def __init__(self, message: str, location: Optional[str] = None) -> None:
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location
