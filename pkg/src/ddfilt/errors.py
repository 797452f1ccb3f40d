"""Exception and warning types shared across the package."""

from __future__ import annotations


class QuadratureError(RuntimeError):
    """Adaptive integration failed to converge within the panel budget."""


class NoCrossingError(RuntimeError):
    """A scanned curve never reached the requested threshold."""


class NonUnimodalError(RuntimeError):
    """The measured error landscape contradicts the unimodality assumption.

    Carries the sampled profile so the caller can inspect what was measured.
    """

    def __init__(self, message: str, profile=None):
        super().__init__(message)
        self.profile = list(profile) if profile is not None else []


class ProbeError(RuntimeError):
    """A measurement probe failed: spawn error, timeout, or protocol violation."""


class CoverageError(ValueError):
    """A requested duration lies outside the range a sequence set covers."""


class BranchJumpWarning(UserWarning):
    """A continuation sweep produced a discontinuous jump in pulse positions."""
