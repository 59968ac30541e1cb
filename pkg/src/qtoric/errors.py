"""Exception types shared by the engines and the CLI."""
from __future__ import annotations


class QToricError(Exception):
    pass


class ParseError(QToricError):
    """Malformed input document."""

    def __init__(self, message: str, location: str | None = None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class UnsupportedRegime(QToricError):
    """Valid input outside the implemented regime.

    ``assumption`` names the standing hypothesis that failed, one of
    ``euler_class``, ``collapse``, ``unimodularity``, ``vertex_set``,
    ``dieudonne_rationality``, ``k_theory_differentials``.
    """

    def __init__(self, assumption: str, message: str, details=None):
        self.assumption = assumption
        self.details = details
        super().__init__(f"unsupported ({assumption}): {message}")
