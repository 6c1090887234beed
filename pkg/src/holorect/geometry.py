"""Rectangles, segments, partitions and the loops built from them.

Complex scalars are plain Python ``complex`` values; :func:`as_complex`
is the single gate that rejects NaN and infinities.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import EndpointMismatch, InvalidGeometry

LOOP_CLOSURE_TOL = 1e-12


def as_complex(value) -> complex:
    """Coerce ``value`` to a finite complex number.

    Accepts numbers, ``(re, im)`` pairs and strings such as ``"1.5,-2"``.
    """
    if isinstance(value, str):
        parts = [p for p in value.replace(",", " ").split()]
        if len(parts) == 1:
            z = complex(parts[0].replace("i", "j"))
        elif len(parts) == 2:
            z = complex(float(parts[0]), float(parts[1]))
        else:
            raise InvalidGeometry(f"cannot read a complex number from {value!r}")
    elif isinstance(value, (tuple, list)):
        if len(value) != 2:
            raise InvalidGeometry("a complex pair needs exactly two coordinates")
        z = complex(float(value[0]), float(value[1]))
    else:
        z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidGeometry(f"non-finite complex value {z!r}")
    return z


@dataclass(frozen=True)
class Rectangle:
    """Closed axis-parallel rectangle ``[re_lo, re_hi] x [im_lo, im_hi]``."""

    re_lo: float
    re_hi: float
    im_lo: float
    im_hi: float

    def __post_init__(self):
        coords = (self.re_lo, self.re_hi, self.im_lo, self.im_hi)
        if not all(math.isfinite(c) for c in coords):
            raise InvalidGeometry(f"rectangle coordinates must be finite: {coords}")
        if not (self.re_lo < self.re_hi and self.im_lo < self.im_hi):
            raise InvalidGeometry(f"degenerate rectangle: {coords}")
        for name, c in zip(("re_lo", "re_hi", "im_lo", "im_hi"), coords):
            object.__setattr__(self, name, float(c))

    @classmethod
    def square(cls, center, half_side: float) -> "Rectangle":
        c = as_complex(center)
        return cls(c.real - half_side, c.real + half_side, c.imag - half_side, c.imag + half_side)

    @classmethod
    def parse(cls, text: str) -> "Rectangle":
        """Read ``"re_lo re_hi im_lo im_hi"`` (commas allowed) or a JSON object."""
        text = text.strip()
        if text.startswith("{"):
            obj = json.loads(text)
            try:
                return cls(*(float(obj[k]) for k in ("re_lo", "re_hi", "im_lo", "im_hi")))
            except KeyError as exc:
                raise InvalidGeometry(f"rectangle JSON lacks key {exc}") from None
        parts = text.replace(",", " ").split()
        if len(parts) != 4:
            raise InvalidGeometry(f"a rectangle needs four numbers, got {text!r}")
        return cls(*(float(p) for p in parts))

    def to_dict(self) -> dict:
        return {"re_lo": self.re_lo, "re_hi": self.re_hi, "im_lo": self.im_lo, "im_hi": self.im_hi}

    @property
    def width(self) -> float:
        return self.re_hi - self.re_lo

    @property
    def height(self) -> float:
        return self.im_hi - self.im_lo

    @property
    def center(self) -> complex:
        return complex((self.re_lo + self.re_hi) / 2, (self.im_lo + self.im_hi) / 2)

    @property
    def vertices(self) -> tuple[complex, complex, complex, complex]:
        """Corners ``a, b, c, d`` counter-clockwise from the lower left."""
        return (
            complex(self.re_lo, self.im_lo),
            complex(self.re_hi, self.im_lo),
            complex(self.re_hi, self.im_hi),
            complex(self.re_lo, self.im_hi),
        )

    @property
    def sides(self) -> tuple["Segment", ...]:
        a, b, c, d = self.vertices
        return (Segment(a, b), Segment(b, c), Segment(c, d), Segment(d, a))

    @property
    def perimeter(self) -> float:
        return 2 * (self.width + self.height)

    @property
    def diameter(self) -> float:
        return math.hypot(self.width, self.height)

    @property
    def is_square(self) -> bool:
        return math.isclose(self.width, self.height, rel_tol=1e-12)

    def contains(self, z, *, closed: bool = True) -> bool:
        z = complex(z)
        if closed:
            return self.re_lo <= z.real <= self.re_hi and self.im_lo <= z.imag <= self.im_hi
        return self.re_lo < z.real < self.re_hi and self.im_lo < z.imag < self.im_hi

    def contains_rect(self, other: "Rectangle") -> bool:
        return (
            self.re_lo <= other.re_lo
            and other.re_hi <= self.re_hi
            and self.im_lo <= other.im_lo
            and other.im_hi <= self.im_hi
        )

    def boundary_distance(self, z) -> float:
        """Distance from ``z`` to the boundary of the rectangle."""
        z = complex(z)
        if self.contains(z):
            return min(
                z.real - self.re_lo, self.re_hi - z.real, z.imag - self.im_lo, self.im_hi - z.imag
            )
        dx = max(self.re_lo - z.real, 0.0, z.real - self.re_hi)
        dy = max(self.im_lo - z.imag, 0.0, z.imag - self.im_hi)
        return math.hypot(dx, dy)

    def interiors_overlap(self, other: "Rectangle") -> bool:
        return (
            min(self.re_hi, other.re_hi) > max(self.re_lo, other.re_lo)
            and min(self.im_hi, other.im_hi) > max(self.im_lo, other.im_lo)
        )

    def intersection(self, other: "Rectangle") -> "Rectangle | None":
        lo_re, hi_re = max(self.re_lo, other.re_lo), min(self.re_hi, other.re_hi)
        lo_im, hi_im = max(self.im_lo, other.im_lo), min(self.im_hi, other.im_hi)
        if lo_re < hi_re and lo_im < hi_im:
            return Rectangle(lo_re, hi_re, lo_im, hi_im)
        return None

    def scaled(self, factor: float) -> "Rectangle":
        """The rectangle scaled by ``factor`` about its center."""
        c = self.center
        hw, hh = self.width * factor / 2, self.height * factor / 2
        return Rectangle(c.real - hw, c.real + hw, c.imag - hh, c.imag + hh)

    def split(self, re_cut: float, im_cut: float) -> tuple["Rectangle", ...]:
        """Four cells cut at the given coordinates, in SW, SE, NW, NE order."""
        if not (self.re_lo < re_cut < self.re_hi and self.im_lo < im_cut < self.im_hi):
            raise InvalidGeometry("cut lines must pass through the interior")
        return (
            Rectangle(self.re_lo, re_cut, self.im_lo, im_cut),
            Rectangle(re_cut, self.re_hi, self.im_lo, im_cut),
            Rectangle(self.re_lo, re_cut, im_cut, self.im_hi),
            Rectangle(re_cut, self.re_hi, im_cut, self.im_hi),
        )


def area(rect: Rectangle) -> float:
    return (rect.re_hi - rect.re_lo) * (rect.im_hi - rect.im_lo)


def quarters(rect: Rectangle) -> tuple[Rectangle, Rectangle, Rectangle, Rectangle]:
    """Cut ``rect`` through the midpoints of opposite sides (SW, SE, NW, NE)."""
    c = rect.center
    return rect.split(c.real, c.imag)


@dataclass(frozen=True)
class Segment:
    a: complex
    b: complex

    def __post_init__(self):
        a, b = as_complex(self.a), as_complex(self.b)
        if a == b:
            raise InvalidGeometry("segment endpoints must differ")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def length(self) -> float:
        return abs(self.b - self.a)

    @property
    def midpoint(self) -> complex:
        return (self.a + self.b) / 2

    def point(self, t):
        return self.a + t * (self.b - self.a)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)

    def halves(self) -> tuple["Segment", "Segment"]:
        m = self.midpoint
        return Segment(self.a, m), Segment(m, self.b)

    def distance_to(self, z) -> float:
        """Exact Euclidean distance from ``z`` to the closed segment."""
        z = complex(z)
        d = self.b - self.a
        t = ((z - self.a) * d.conjugate()).real / abs(d) ** 2
        t = min(1.0, max(0.0, t))
        return abs(z - (self.a + t * d))


@dataclass(frozen=True)
class Partition:
    """Parameter values ``0 = t_0 < t_1 < ... < t_k = 1``."""

    ts: tuple[float, ...]

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        if len(ts) < 2 or ts[0] != 0.0 or ts[-1] != 1.0:
            raise InvalidGeometry("a partition must start at 0 and end at 1")
        if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
            raise InvalidGeometry("partition values must be strictly increasing")
        object.__setattr__(self, "ts", ts)

    @classmethod
    def equi(cls, k: int) -> "Partition":
        if k < 1:
            raise InvalidGeometry("an equipartition needs k >= 1")
        return cls(tuple(i / k for i in range(k + 1)))

    @property
    def k(self) -> int:
        return len(self.ts) - 1

    @property
    def mesh(self) -> float:
        return max(t1 - t0 for t0, t1 in zip(self.ts, self.ts[1:]))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.ts)


@dataclass(frozen=True)
class GridPartition:
    parent: Rectangle
    re_cuts: tuple[float, ...]
    im_cuts: tuple[float, ...]

    def __post_init__(self):
        for cuts, lo, hi in (
            (self.re_cuts, self.parent.re_lo, self.parent.re_hi),
            (self.im_cuts, self.parent.im_lo, self.parent.im_hi),
        ):
            if len(cuts) < 2 or cuts[0] != lo or cuts[-1] != hi:
                raise InvalidGeometry("grid cuts must span the parent rectangle")
            if any(c1 <= c0 for c0, c1 in zip(cuts, cuts[1:])):
                raise InvalidGeometry("grid cuts must be strictly increasing")
        object.__setattr__(self, "re_cuts", tuple(self.re_cuts))
        object.__setattr__(self, "im_cuts", tuple(self.im_cuts))

    @classmethod
    def from_rectangles(cls, parent: Rectangle, rects: Sequence[Rectangle]) -> "GridPartition":
        """Grid of ``parent`` cut by the lines extending the sides of ``rects``."""
        re = {parent.re_lo, parent.re_hi}
        im = {parent.im_lo, parent.im_hi}
        for r in rects:
            re.update(x for x in (r.re_lo, r.re_hi) if parent.re_lo <= x <= parent.re_hi)
            im.update(y for y in (r.im_lo, r.im_hi) if parent.im_lo <= y <= parent.im_hi)
        return cls(parent, tuple(sorted(re)), tuple(sorted(im)))

    def cells(self) -> Iterator[Rectangle]:
        for y0, y1 in zip(self.im_cuts, self.im_cuts[1:]):
            for x0, x1 in zip(self.re_cuts, self.re_cuts[1:]):
                yield Rectangle(x0, x1, y0, y1)

    def __len__(self) -> int:
        return (len(self.re_cuts) - 1) * (len(self.im_cuts) - 1)


class LoopPath:
    """A loop ``[0, 1] -> C``; ``curve`` must accept numpy arrays of parameters."""

    def __init__(self, curve: Callable, *, check: bool = True, label: str = "loop"):
        self.curve = curve
        self.label = label
        if check:
            ends = self(np.array([0.0, 1.0]))
            if abs(ends[0] - ends[1]) > LOOP_CLOSURE_TOL * max(1.0, abs(ends[0])):
                raise EndpointMismatch(
                    f"{label}: curve(0) = {ends[0]!r} differs from curve(1) = {ends[1]!r}"
                )

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.asarray(self.curve(t_arr), dtype=complex)
        if out.shape != t_arr.shape:
            out = np.broadcast_to(out, t_arr.shape).copy()
        return out if t_arr.ndim else complex(out)

    def __repr__(self) -> str:
        return f"LoopPath({self.label})"


def boundary_circuit(rect: Rectangle) -> LoopPath:
    """Counter-clockwise traversal of ``rect``'s boundary, corners at t = 0, 1/4, 1/2, 3/4."""
    verts = np.array(rect.vertices + (rect.vertices[0],))

    def phi(t):
        t = np.asarray(t, dtype=float)
        side = np.clip(np.floor(4 * t).astype(int), 0, 3)
        s = 4 * t - side
        # convex form so that corners, and in particular phi(1) = phi(0), are exact
        return (1 - s) * verts[side] + s * verts[side + 1]

    return LoopPath(phi, check=False, label=f"circuit{rect.re_lo, rect.re_hi, rect.im_lo, rect.im_hi}")
