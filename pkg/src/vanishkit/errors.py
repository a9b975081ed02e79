"""Exception types shared across the package."""

from __future__ import annotations


class VanishkitError(Exception):
    """Base class for all vanishkit-specific failures."""


class InvalidArgument(VanishkitError, ValueError):
    """A caller-supplied value violates a documented precondition."""


class QuadratureError(VanishkitError):
    """Quadrature refinement failed to reach the requested tolerance.

    The residual attribute holds the last refinement delta actually observed.
    """

    def __init__(self, message: str, residual: float) -> None:
        super().__init__(f"{message} (residual {residual:.3e})")
        self.residual = residual


class TruncationTailError(VanishkitError):
    """A truncated series carries a tail bound too large for the request."""

    def __init__(self, message: str, tail_bound: float) -> None:
        super().__init__(f"{message} (tail bound {tail_bound:.3e})")
        self.tail_bound = tail_bound


class UnknownExample(VanishkitError, KeyError):
    """The example catalog has no entry under the requested name."""


class HypothesesNotSatisfied(VanishkitError):
    """A translated-block input failed validation; the report explains why."""

    def __init__(self, report) -> None:  # noqa: ANN001 - report typed in constructions
        super().__init__(f"block-sum hypotheses not satisfied: {report.summary()}")
        self.report = report
