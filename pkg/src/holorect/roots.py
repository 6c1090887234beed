"""Counting and isolating preimages with the winding number of ``f`` along rectangle boundaries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryHitsValue, DerivativeTooSmall, HolorectError, NoStabilization
from .funcspec import FunctionSpec, differentiate
from .geometry import Rectangle, boundary_circuit
from .integrate import DEFAULT_CONFIG, RefinementConfig
from .winding import composed_loop, winding_number

VALUE_TOL = 1e-9
DERIVATIVE_TOL = 1e-9
GUARD_SAMPLES = 4096
# Cut positions (fraction of width/height) tried in turn when the
# midpoint cut runs too close to a preimage.
CUT_FRACTIONS = (0.5, 0.5 + 0.0917, 0.5 - 0.1339, 0.5 + 0.1871, 0.5 - 0.2213, 0.5 + 0.0421)
CELL_K_MAX = 2**16


def _guard(f, rect: Rectangle, p: complex) -> None:
    z = boundary_circuit(rect)(np.linspace(0.0, 1.0, GUARD_SAMPLES + 1))
    gap = float(np.min(np.abs(f(z) - p)))
    if gap <= VALUE_TOL:
        raise BoundaryHitsValue(f"|f - p| = {gap:.3g} on the boundary of {rect}")


def count_preimages(f, rect: Rectangle, p, cfg: RefinementConfig = DEFAULT_CONFIG) -> int:
    """Winding number of ``f`` along the boundary circuit of ``rect`` about ``p``.

    For holomorphic ``f`` this is the number of solutions of ``f(z) = p`` in
    the interior, counted with multiplicity.
    """
    p = complex(p)
    _guard(f, rect, p)
    return winding_number(composed_loop(f, rect), p, cfg).value


@dataclass
class PreimageReport:
    total_winding: int
    boxes: list[tuple[Rectangle, int]] = field(default_factory=list)
    residual: list[tuple[Rectangle, int]] = field(default_factory=list)

    def audit(self) -> bool:
        found = sum(w for _, w in self.boxes) + sum(w for _, w in self.residual)
        return found == self.total_winding


def _cell_count(f, cell: Rectangle, p: complex, cfg: RefinementConfig) -> int:
    # a cell edge through a preimage either trips the guard or keeps the
    # projected steps from ever shrinking; both mean "re-cut"
    try:
        return count_preimages(f, cell, p, cfg)
    except NoStabilization as exc:
        raise BoundaryHitsValue(str(exc)) from exc


def _split_counts(f, cell: Rectangle, p: complex, cfg: RefinementConfig):
    for fx in CUT_FRACTIONS:
        for fy in CUT_FRACTIONS:
            if fx != fy and 0.5 not in (fx, fy):
                continue
            children = cell.split(cell.re_lo + fx * cell.width, cell.im_lo + fy * cell.height)
            try:
                return [(c, _cell_count(f, c, p, cfg)) for c in children]
            except BoundaryHitsValue:
                continue
    return None


def locate_preimages(
    f, rect: Rectangle, p, min_size: float = 1e-3, cfg: RefinementConfig = DEFAULT_CONFIG
) -> PreimageReport:
    """Subdivide ``rect`` until each cell with nonzero winding has diameter <= ``min_size``.

    Cells are cut through their midpoints; when a cut line passes (almost)
    through a preimage, the cut is moved to another position so the four
    children still tile the parent and their windings add up to its own.
    A cell that cannot be cut cleanly is reported as residual.
    """
    p = complex(p)
    if min_size <= 0:
        raise ValueError("min_size must be positive")
    total = count_preimages(f, rect, p, cfg)
    report = PreimageReport(total)
    if total == 0:
        return report
    cell_cfg = RefinementConfig(cfg.abs_tol, cfg.rel_tol, cfg.k_min, min(cfg.k_max, CELL_K_MAX))
    stack = [(rect, total)]
    while stack:
        cell, w = stack.pop()
        if cell.diameter <= min_size:
            report.boxes.append((cell, w))
            continue
        children = _split_counts(f, cell, p, cell_cfg)
        if children is None or sum(cw for _, cw in children) != w:
            report.residual.append((cell, w))
            continue
        # reversed so that the SW child is processed first
        stack.extend((c, cw) for c, cw in reversed(children) if cw != 0)
    key = lambda item: (item[0].im_lo, item[0].re_lo)
    report.boxes.sort(key=key)
    report.residual.sort(key=key)
    return report


def local_degree(
    f: FunctionSpec, z0, cfg: RefinementConfig = DEFAULT_CONFIG, start_half_side: float = 0.5
) -> int:
    """Winding of ``f`` about ``f(z0)`` along shrinking squares centred at ``z0``.

    Requires ``|f'(z0)| > 1e-9``; the result is then 1.
    """
    z0 = complex(z0)
    slope = abs(differentiate(f)(z0))
    if slope <= DERIVATIVE_TOL:
        raise DerivativeTooSmall(f"|f'({z0!r})| = {slope:.3g} is too small")
    target = f(z0)
    half = start_half_side
    for s in f.singularities:
        if abs(s - z0) > 0:
            half = min(half, abs(s - z0) / 4)
    previous = None
    for _ in range(60):
        square = Rectangle.square(z0, half)
        try:
            value = count_preimages(f, square, target, cfg)
        except HolorectError:
            value = None
        if value is not None and value == previous:
            return value
        previous = value
        half /= 2
    raise NoStabilization(f"local degree at {z0!r} did not stabilise")
