"""Exact computation and verification of van der Waerden-type numbers."""

__version__ = "0.1.0"

from .problems import Certificate, Claim, Family, Interval, ProblemSpec, SpecError  # noqa: E402

__all__ = ["Certificate", "Claim", "Family", "Interval", "ProblemSpec", "SpecError", "__version__"]
