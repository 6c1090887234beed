"""Contour integrals built from right-endpoint Cauchy sums.

``segment_integral`` refines equipartitions by doubling ``k``.  Successive
sums ``C_k`` satisfy ``C_k = I + c_1 h + c_2 h^2 + c_4 h^4 + ...`` for smooth
integrands (the right-endpoint sum is the trapezoid sum plus
``h (f(b) - f(a)) / 2``), so by default the sequence is Richardson
extrapolated; the extrapolated table still only consumes Cauchy sums.
Set ``RefinementConfig(extrapolate=False)`` to return the raw ``C_2k``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import SingularityOnContour
from .geometry import Partition, Rectangle, Segment, quarters

log = logging.getLogger(__name__)

CONTOUR_TOL = 1e-12
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class RefinementConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    k_min: int = 16
    k_max: int = 2**22
    extrapolate: bool = True

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if not (1 <= self.k_min <= self.k_max):
            raise ValueError("need 1 <= k_min <= k_max")


DEFAULT_CONFIG = RefinementConfig()


@dataclass(frozen=True)
class IntegralResult:
    value: complex
    partitions_used: int
    est_error: float
    converged: bool = True

    def __add__(self, other: "IntegralResult") -> "IntegralResult":
        return IntegralResult(
            self.value + other.value,
            max(self.partitions_used, other.partitions_used),
            self.est_error + other.est_error,
            self.converged and other.converged,
        )


def singularities_of(f) -> tuple[complex, ...]:
    return tuple(getattr(f, "singularities", ()))


def _check_segment(f, seg: Segment) -> None:
    for s in singularities_of(f):
        if seg.distance_to(s) < CONTOUR_TOL:
            raise SingularityOnContour(f"singularity {s!r} lies on the segment {seg.a!r} -> {seg.b!r}")


def cauchy_sum(f, seg: Segment, part: Partition) -> complex:
    """``sum f(a_i) (a_i - a_{i-1})`` with sample points at the right ends."""
    ts = part.as_array()
    pts = seg.a + ts * (seg.b - seg.a)
    for s in singularities_of(f):
        if np.any(np.abs(pts[1:] - s) <= CONTOUR_TOL):
            raise SingularityOnContour(f"singularity {s!r} is a sample point of the segment")
    values = np.asarray(f(pts[1:]), dtype=complex)
    return complex(np.sum(values * np.diff(pts)))


def _richardson_row(prev_row: list[complex], c_new: complex) -> list[complex]:
    row = [c_new]
    for m in range(1, len(prev_row) + 1):
        # first column removes the O(h) term, later ones the even powers
        factor = 2.0 if m == 1 else 4.0 ** (m - 1)
        row.append((factor * row[m - 1] - prev_row[m - 1]) / (factor - 1.0))
    return row


def segment_integral(f, seg: Segment, cfg: RefinementConfig = DEFAULT_CONFIG) -> IntegralResult:
    _check_segment(f, seg)
    a, d = seg.a, seg.b - seg.a
    k = cfg.k_min
    h = d / k
    # running sum of f over a_1..a_k; doubling only evaluates the new midpoints
    fsum = complex(np.sum(f(a + np.arange(1, k + 1) * h)))
    estimate = fsum * h
    row = [estimate]
    calm = 0
    delta = math.inf
    while True:
        if 2 * k > cfg.k_max:
            break
        mids = a + (np.arange(k) + 0.5) * h
        fmid = np.asarray(f(mids), dtype=complex)
        fsum += complex(np.sum(fmid))
        k *= 2
        h = d / k
        c_k = fsum * h
        if cfg.extrapolate:
            row = _richardson_row(row, c_k)
            new = row[-1]
        else:
            new = c_k
        delta = abs(new - estimate)
        estimate = new
        if delta <= cfg.abs_tol + cfg.rel_tol * abs(estimate):
            calm += 1
            if calm >= 2 or not cfg.extrapolate:
                break
        else:
            calm = 0
    scale = abs(h) * k * max(1.0, abs(fsum) / k)
    est_error = float(delta + 64 * _EPS * scale)
    converged = delta <= cfg.abs_tol + cfg.rel_tol * abs(estimate)
    if not converged:
        log.warning("segment %r -> %r: no convergence at k=%d (delta %.3g)", seg.a, seg.b, k, delta)
    return IntegralResult(complex(estimate), k, est_error, converged)


def rectangle_integral(f, rect: Rectangle, cfg: RefinementConfig = DEFAULT_CONFIG) -> IntegralResult:
    """Sum of the four side integrals along the counter-clockwise boundary."""
    for s in singularities_of(f):
        if not rect.contains(s, closed=True):
            continue
        if rect.boundary_distance(s) < CONTOUR_TOL:
            raise SingularityOnContour(f"singularity {s!r} lies on the rectangle boundary")
    parts = [segment_integral(f, side, cfg) for side in rect.sides]
    total = parts[0]
    for p in parts[1:]:
        total = total + p
    return total


def side_integrals(f, rect: Rectangle, cfg: RefinementConfig = DEFAULT_CONFIG) -> list[IntegralResult]:
    return [segment_integral(f, side, cfg) for side in rect.sides]


RHO_SQUARE = Rectangle(-1.0, 1.0, -1.0, 1.0)


def _reciprocal(z):
    return 1.0 / z


_reciprocal.singularities = (0j,)


@lru_cache(maxsize=16)
def _rho(cfg: RefinementConfig) -> IntegralResult:
    res = rectangle_integral(_reciprocal, RHO_SQUARE, cfg)
    if res.value.imag < 4:
        raise AssertionError(f"im(rho) = {res.value.imag} < 4")
    return res


def rho(cfg: RefinementConfig = DEFAULT_CONFIG) -> complex:
    """Boundary integral of ``1/z`` around the square with corners ``+-1 +-i``."""
    return _rho(cfg).value


def rho_result(cfg: RefinementConfig = DEFAULT_CONFIG) -> IntegralResult:
    return _rho(cfg)


def enclosing_rectangle(points, margin: float = 1.0) -> Rectangle:
    """Bounding box of ``points`` inflated by ``margin``; the unit square if empty."""
    points = list(points)
    if not points:
        return Rectangle(0.0, 1.0, 0.0, 1.0)
    re = [complex(p).real for p in points]
    im = [complex(p).imag for p in points]
    return Rectangle(min(re) - margin, max(re) + margin, min(im) - margin, max(im) + margin)


def functional_integral(f, cfg: RefinementConfig = DEFAULT_CONFIG) -> IntegralResult:
    """``∫ f`` over any rectangle whose interior holds all declared singularities."""
    return rectangle_integral(f, enclosing_rectangle(singularities_of(f)), cfg)


@dataclass(frozen=True)
class GoursatStep:
    rect: Rectangle
    value: complex
    est_error: float


def goursat_trace(f, rect: Rectangle, depth: int, cfg: RefinementConfig = DEFAULT_CONFIG) -> list[GoursatStep]:
    """Quartering descent: keep the quarter with the largest boundary integral."""
    if depth < 1:
        raise ValueError("depth must be positive")
    res = rectangle_integral(f, rect, cfg)
    trace = [GoursatStep(rect, res.value, res.est_error)]
    for _ in range(depth):
        best = None
        for q in quarters(trace[-1].rect):
            r = rectangle_integral(f, q, cfg)
            if best is None or abs(r.value) > abs(best.value):
                best = GoursatStep(q, r.value, r.est_error)
        trace.append(best)
    return trace


def sampled_max_abs(f, seg: Segment, n: int = 10_001) -> float:
    """Max of ``|f|`` over ``n`` equally spaced points of the closed segment."""
    return float(np.max(np.abs(f(seg.point(np.linspace(0.0, 1.0, n))))))
