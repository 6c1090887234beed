"""Recovering values, derivatives and Taylor coefficients from boundary data.

All three formulas divide a boundary integral by the numerically computed
``rho`` for the same refinement settings, never by a hard-coded ``2*pi*i``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidGeometry, PointTooCloseToBoundary
from .geometry import Rectangle
from .integrate import DEFAULT_CONFIG, RefinementConfig, rectangle_integral, rho, singularities_of

MIN_BOUNDARY_DISTANCE = 1e-6


class _Kernel:
    """``f(z) / (z - a)**order`` as a vectorised integrand."""

    def __init__(self, f, a: complex, order: int):
        self.f = f
        self.a = a
        self.order = order
        self.singularities = singularities_of(f) + (a,)

    def __call__(self, z):
        return self.f(z) / (z - self.a) ** self.order


def _check_interior(f, a: complex, rect: Rectangle) -> None:
    if not rect.contains(a, closed=False) or rect.boundary_distance(a) < MIN_BOUNDARY_DISTANCE:
        raise PointTooCloseToBoundary(
            f"{a!r} must lie inside the rectangle at distance >= {MIN_BOUNDARY_DISTANCE} from its boundary"
        )
    for s in singularities_of(f):
        if rect.contains(s):
            raise InvalidGeometry(f"declared singularity {s!r} lies in the rectangle")


def cauchy_value(f, a, rect: Rectangle, cfg: RefinementConfig = DEFAULT_CONFIG) -> complex:
    """``f(a)`` from samples of ``f`` on the boundary of ``rect`` alone."""
    a = complex(a)
    _check_interior(f, a, rect)
    return rectangle_integral(_Kernel(f, a, 1), rect, cfg).value / rho(cfg)


def cauchy_derivative(f, a, rect: Rectangle, cfg: RefinementConfig = DEFAULT_CONFIG) -> complex:
    a = complex(a)
    _check_interior(f, a, rect)
    return rectangle_integral(_Kernel(f, a, 2), rect, cfg).value / rho(cfg)


@dataclass(frozen=True)
class SeriesResult:
    coeffs: tuple[complex, ...]
    radius_hint: float

    def partial_sum(self, z, n_terms: int | None = None):
        coeffs = self.coeffs if n_terms is None else self.coeffs[:n_terms]
        return sum(c * z**n for n, c in enumerate(coeffs))


def series_coefficients(
    f, order: int, rect: Rectangle | None = None, cfg: RefinementConfig = DEFAULT_CONFIG
) -> SeriesResult:
    """Taylor coefficients ``a_0 .. a_order`` at the origin."""
    if order < 0:
        raise ValueError("order must be non-negative")
    rect = rect or Rectangle(-1.0, 1.0, -1.0, 1.0)
    _check_interior(f, 0j, rect)
    r = rho(cfg)
    coeffs = tuple(
        rectangle_integral(_Kernel(f, 0j, n + 1), rect, cfg).value / r for n in range(order + 1)
    )
    return SeriesResult(coeffs, rect.boundary_distance(0j))


def _sample_pairs(inner: Rectangle, delta: float, samples: int, rng: np.random.Generator):
    """Pairs ``z, x`` in ``inner`` with ``0 < |z - x| < delta``."""
    pairs = []
    while len(pairs) < samples:
        z = complex(rng.uniform(inner.re_lo, inner.re_hi), rng.uniform(inner.im_lo, inner.im_hi))
        r = delta * rng.uniform(0.05, 0.999)
        theta = rng.uniform(0.0, 2 * np.pi)
        x = z + r * complex(np.cos(theta), np.sin(theta))
        if inner.contains(x):
            pairs.append((z, x))
    return pairs


def derivative_continuity_modulus(
    f,
    inner: Rectangle,
    rect: Rectangle,
    delta: float,
    samples: int = 64,
    cfg: RefinementConfig = DEFAULT_CONFIG,
    seed: int = 0,
) -> float:
    """Largest ``|f'(z) - (f(z) - f(x)) / (z - x)|`` over random close pairs in ``inner``.

    ``f'`` comes from :func:`cauchy_derivative` on ``rect``.  A fixed ``seed``
    draws the same directions for every ``delta``, so moduli for shrinking
    ``delta`` are directly comparable.
    """
    if delta <= 0 or samples < 1:
        raise ValueError("delta and samples must be positive")
    if not (rect.contains_rect(inner) and rect.boundary_distance(inner.center) > 0):
        raise InvalidGeometry("inner rectangle must sit inside the enclosing rectangle")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for z, x in _sample_pairs(inner, delta, samples, rng):
        quotient = (f(z) - f(x)) / (z - x)
        worst = max(worst, abs(cauchy_derivative(f, z, rect, cfg) - quotient))
    return worst
