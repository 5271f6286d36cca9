"""Bayes estimator of a regression curve.

The heavy lifting lives in the compiled `_core` extension; this package
re-exports its public surface.
"""

from ._core import (
    DomainError,
    Example,
    ExperimentError,
    NumericError,
    UsageError,
    __version__,
    bayes_risk,
    compare_estimators,
    consistency_paths,
    derive_seed,
    example1,
    example2,
    example3,
    nadaraya_watson,
)

__all__ = [
    "DomainError",
    "Example",
    "ExperimentError",
    "NumericError",
    "UsageError",
    "__version__",
    "bayes_risk",
    "compare_estimators",
    "consistency_paths",
    "derive_seed",
    "example1",
    "example2",
    "example3",
    "nadaraya_watson",
]
