"""Exception types.

Every domain error carries a stable string ``code`` so scripted callers
(and the CLI's exit line) can branch on it.
"""

from __future__ import annotations


class HolorectError(Exception):
    code = "E_DOMAIN"


class InvalidGeometry(HolorectError, ValueError):
    code = "E_INVALID_GEOMETRY"


class ParseError(HolorectError, ValueError):
    code = "E_SYNTAX"

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class EvaluationAtSingularity(HolorectError):
    code = "E_EVAL_AT_SINGULARITY"


class RangeError(HolorectError, ArithmeticError):
    code = "E_RANGE"


class SingularityOnContour(HolorectError):
    code = "E_SINGULARITY_ON_CONTOUR"


class NoConvergence(HolorectError):
    code = "E_NO_CONVERGENCE"

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class PointTooCloseToBoundary(HolorectError):
    code = "E_POINT_TOO_CLOSE_TO_BOUNDARY"


class PointNotOnBoundary(HolorectError):
    code = "E_POINT_NOT_ON_BOUNDARY"


class LoopHitsPoint(HolorectError):
    code = "E_LOOP_HITS_POINT"


class NoStabilization(HolorectError):
    code = "E_NO_STABILIZATION"


class StepTooCoarse(HolorectError):
    code = "E_STEP_TOO_COARSE"


class EndpointMismatch(HolorectError):
    code = "E_ENDPOINT_MISMATCH"


class DepthExhausted(HolorectError):
    """Raised when a cover search reaches ``max_depth`` with squares left to expand.

    ``witness`` is the chain of nested offending cells from the root down to
    the deepest one; it is the finite shadow of an infinite tree branch.
    """

    code = "E_DEPTH_EXHAUSTED"

    def __init__(self, message: str, witness=()):
        super().__init__(message)
        self.witness = list(witness)


class BoundaryHitsValue(HolorectError):
    code = "E_BOUNDARY_HITS_VALUE"


class DerivativeTooSmall(HolorectError):
    code = "E_DERIVATIVE_TOO_SMALL"
