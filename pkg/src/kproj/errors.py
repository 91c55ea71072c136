"""Exception hierarchy; the CLI maps these onto exit codes."""

from __future__ import annotations


class KprojError(Exception):
    """Base class for package errors."""


class SpecError(KprojError, ValueError):
    """A specification is malformed or refers to undefined data (exit code 2)."""


class TruncationError(KprojError, ValueError):
    """Not enough coefficients were supplied for the requested certificate (exit code 2)."""


class HypothesisError(KprojError, ArithmeticError):
    """A mathematical hypothesis or verification failed (exit code 1)."""
