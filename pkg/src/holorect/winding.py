"""Discrete winding numbers without angles or logarithms.

Loop samples are projected radially onto the perimeter-1 square centred at
the query point ``p``; consecutive projections contribute the signed length
of the shorter boundary arc between them.  Summed over a closed partition
this is an integer, and it stabilises once the partition is fine enough.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EndpointMismatch, LoopHitsPoint, NoStabilization, PointNotOnBoundary, StepTooCoarse
from .funcspec import parse
from .geometry import LoopPath, Partition, Rectangle, boundary_circuit
from .integrate import DEFAULT_CONFIG, RefinementConfig

HALF_SIDE = 0.125
HIT_TOL = 1e-12
ON_BOUNDARY_TOL = 1e-12
MAX_ACCEPTED_STEP = 0.25


@dataclass(frozen=True)
class WindingResult:
    value: int
    partition_size: int
    max_arc_step: float

    def __int__(self) -> int:
        return self.value


def project_to_square(q, p):
    """Where the ray from ``p`` through ``q`` meets the boundary of the square around ``p``."""
    d = np.asarray(q, dtype=complex) - complex(p)
    s = np.maximum(np.abs(d.real), np.abs(d.imag))
    if np.any(s == 0):
        raise LoopHitsPoint(f"cannot project {p!r} onto its own square")
    out = complex(p) + d * (HALF_SIDE / s)
    return out if out.ndim else complex(out)


def _arc_of_direction(d):
    """Counter-clockwise arc length from the lower-left corner for directions ``d``."""
    dx, dy = d.real, d.imag
    adx, ady = np.abs(dx), np.abs(dy)
    s = np.maximum(adx, ady)
    u, v = dx / s, dy / s
    bottom = (ady >= adx) & (dy < 0)
    right = ~bottom & (adx >= ady) & (dx > 0)
    top = ~bottom & ~right & (ady >= adx) & (dy > 0)
    l = np.where(
        bottom,
        (u + 1) / 8,
        np.where(right, 0.25 + (v + 1) / 8, np.where(top, 0.5 + (1 - u) / 8, 0.75 + (1 - v) / 8)),
    )
    return np.mod(l, 1.0)


def arc_coordinate(r, p):
    """Arc length in ``[0, 1)`` from the lower-left corner ``p - 1/8 - i/8`` to ``r``."""
    d = np.asarray(r, dtype=complex) - complex(p)
    off = np.abs(np.maximum(np.abs(d.real), np.abs(d.imag)) - HALF_SIDE)
    if np.any(off > ON_BOUNDARY_TOL):
        raise PointNotOnBoundary(f"point is not on the boundary of the square around {p!r}")
    out = _arc_of_direction(d)
    return out if out.ndim else float(out)


def _signed(diff):
    d = np.mod(diff, 1.0)
    return np.where(d <= 0.5, d, d - 1.0)


def signed_arc(r, s, p):
    """Signed shorter arc from ``r`` to ``s``; the antipodal tie counts as ``+1/2``."""
    out = _signed(np.asarray(arc_coordinate(s, p)) - np.asarray(arc_coordinate(r, p)))
    return out if out.ndim else float(out)


def _loop_arcs(z: np.ndarray, p: complex) -> np.ndarray:
    d = z - p
    if np.any(np.abs(d) <= HIT_TOL):
        raise LoopHitsPoint(f"the loop passes through {p!r}")
    return _signed(np.diff(_arc_of_direction(d)))


def winding_sum(f: LoopPath, p, part: Partition) -> float:
    return float(np.sum(_loop_arcs(f(part.as_array()), complex(p))))


def winding_number(f: LoopPath, p, cfg: RefinementConfig = DEFAULT_CONFIG) -> WindingResult:
    """Stabilised winding number over doubling equipartitions.

    Accepts once every projected step is shorter than 1/4 and the rounded
    sum has agreed over two consecutive doublings.
    """
    p = complex(p)
    k = max(cfg.k_min, 4)
    history: list[int] = []
    while k <= cfg.k_max:
        arcs = _loop_arcs(f(np.linspace(0.0, 1.0, k + 1)), p)
        step = float(np.max(np.abs(arcs)))
        value = int(round(float(np.sum(arcs))))
        history.append(value)
        if step < MAX_ACCEPTED_STEP and len(history) >= 3 and history[-1] == history[-2] == history[-3]:
            guard = f(np.linspace(0.0, 1.0, 4 * k + 1))
            if np.any(np.abs(guard - p) <= HIT_TOL):
                raise LoopHitsPoint(f"the loop passes through {p!r}")
            return WindingResult(value, k, step)
        k *= 2
    raise NoStabilization(f"winding number about {p!r} did not stabilise by k={cfg.k_max}")


def winding_number_lifted(f: LoopPath, p, steps: int = 4096) -> int:
    """Winding number as ``g(1) - g(0)`` for a continuous lift ``g`` of the arc coordinate.

    Each new value is the representative of ``Z + l(f(t_j))`` nearest the
    previous lift; kept deliberately separate from :func:`winding_number`.
    """
    p = complex(p)
    ts = np.linspace(0.0, 1.0, steps + 1)
    z = f(ts)
    if np.any(np.abs(z - p) <= HIT_TOL):
        raise LoopHitsPoint(f"the loop passes through {p!r}")
    coords = arc_coordinate(project_to_square(z, p), p)
    g0 = g = float(coords[0])
    for c in coords[1:]:
        nxt = float(c) + math.floor(g - float(c) + 0.5)
        if abs(nxt - g) >= MAX_ACCEPTED_STEP:
            raise StepTooCoarse(f"lift increment {nxt - g:.3f} is too large; use more steps")
        g = nxt
    return int(round(g - g0))


# --- loop combinators ---------------------------------------------------


def loop_product(f: LoopPath, g: LoopPath) -> LoopPath:
    """``f`` on ``[0, 1/2]`` then ``g`` on ``[1/2, 1]``, both at double speed."""
    end, start = f(1.0), g(0.0)
    if abs(end - start) > 1e-12 * max(1.0, abs(end)):
        raise EndpointMismatch(f"f ends at {end!r} but g starts at {start!r}")

    def h(t):
        t = np.asarray(t, dtype=float)
        first = t <= 0.5
        return np.where(first, f(np.clip(2 * t, 0.0, 1.0)), g(np.clip(2 * t - 1, 0.0, 1.0)))

    return LoopPath(h, check=False, label=f"{f.label}*{g.label}")


def loop_reverse(f: LoopPath) -> LoopPath:
    return LoopPath(lambda t: f(1.0 - np.asarray(t, dtype=float)), check=False, label=f"rev({f.label})")


def loop_shift(f: LoopPath, s: float) -> LoopPath:
    return LoopPath(
        lambda t: f(np.mod(s + np.asarray(t, dtype=float), 1.0)), check=False, label=f"shift({f.label},{s})"
    )


def constant_loop(c) -> LoopPath:
    c = complex(c)
    return LoopPath(lambda t: np.full(np.shape(t), c, dtype=complex), check=False, label=f"const({c})")


def expression_loop(src: str) -> LoopPath:
    """Loop given by an expression in the real parameter ``t``."""
    spec = parse(src, var="t")
    return LoopPath(lambda t: spec(np.asarray(t, dtype=float) + 0j), label=src)


def circle_loop(n: int) -> LoopPath:
    """``cos(2 pi n t) + i sin(2 pi n t)``, built from the expression builtins."""
    return expression_loop(f"cos(2*pi*{n}*t) + i*sin(2*pi*{n}*t)")


def composed_loop(f, rect: Rectangle) -> LoopPath:
    """``f`` composed with the boundary circuit of ``rect``."""
    phi = boundary_circuit(rect)
    return LoopPath(lambda t: f(phi(t)), check=False, label=f"f∘{phi.label}")
