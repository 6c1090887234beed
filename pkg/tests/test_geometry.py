import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from holorect.errors import EndpointMismatch, InvalidGeometry
from holorect.geometry import (
    GridPartition,
    LoopPath,
    Partition,
    Rectangle,
    Segment,
    area,
    as_complex,
    boundary_circuit,
    quarters,
)

coord = st.floats(-10, 10, allow_nan=False)
extent = st.floats(0.01, 5)


@st.composite
def rectangles(draw):
    x, y = draw(coord), draw(coord)
    return Rectangle(x, x + draw(extent), y, y + draw(extent))


def test_area_examples():
    assert area(Rectangle(0, 1, 0, 1)) == 1.0
    assert area(Rectangle(-1, 1, -1, 1)) == 4.0


def test_degenerate_rectangles_rejected():
    with pytest.raises(InvalidGeometry):
        Rectangle(0, 0, 0, 1)
    with pytest.raises(InvalidGeometry):
        Rectangle(1, 0, 0, 1)
    with pytest.raises(InvalidGeometry):
        Rectangle(0, math.inf, 0, 1)


def test_rectangle_parse_forms():
    r = Rectangle(-1, 1, -2, 2)
    assert Rectangle.parse("-1,1,-2,2") == r
    assert Rectangle.parse("-1 1 -2 2") == r
    assert Rectangle.parse('{"re_lo": -1, "re_hi": 1, "im_lo": -2, "im_hi": 2}') == r
    with pytest.raises(InvalidGeometry):
        Rectangle.parse("1,2,3")


def test_as_complex():
    assert as_complex("1.5,-2") == 1.5 - 2j
    assert as_complex((0, 1)) == 1j
    assert as_complex(3) == 3 + 0j
    with pytest.raises(InvalidGeometry):
        as_complex(complex(math.nan, 0))


def test_vertices_counter_clockwise():
    a, b, c, d = Rectangle(-1, 1, -1, 1).vertices
    assert (a, b, c, d) == (-1 - 1j, 1 - 1j, 1 + 1j, -1 + 1j)


def test_boundary_circuit_examples():
    phi = boundary_circuit(Rectangle(-1, 1, -1, 1))
    assert phi(0.0) == -1 - 1j
    assert phi(0.25) == 1 - 1j
    assert abs(phi(0.125) - (-1j)) < 1e-15
    assert phi(1.0) == phi(0.0)


@given(rectangles())
@settings(max_examples=60)
def test_boundary_circuit_injective_and_on_boundary(r):
    phi = boundary_circuit(r)
    ts = np.linspace(0, 1, 401)[:-1]
    z = phi(ts)
    assert all(r.boundary_distance(w) < 1e-9 * max(1, abs(w)) for w in z)
    gaps = np.abs(z[:, None] - z[None, :])
    np.fill_diagonal(gaps, np.inf)
    assert gaps.min() > 0
    assert abs(phi(1.0) - phi(0.0)) == 0


def test_quarters_example():
    q = quarters(Rectangle(0, 2, 0, 2))
    assert q == (
        Rectangle(0, 1, 0, 1),
        Rectangle(1, 2, 0, 1),
        Rectangle(0, 1, 1, 2),
        Rectangle(1, 2, 1, 2),
    )


@given(rectangles())
def test_quarters_tile_parent(r):
    qs = quarters(r)
    assert sum(area(q) for q in qs) == pytest.approx(area(r), rel=1e-12)
    for q in qs:
        assert area(q) == pytest.approx(area(r) / 4, rel=1e-12)
        assert q.perimeter == pytest.approx(r.perimeter / 2, rel=1e-12)
        assert r.contains_rect(q)
    for i in range(4):
        for j in range(i + 1, 4):
            assert not qs[i].interiors_overlap(qs[j])


def test_nested_quartering_diameter():
    r = Rectangle(-1, 3, 0, 1)
    s = r
    for n in range(1, 9):
        s = quarters(s)[n % 4]
        assert s.diameter == pytest.approx(r.diameter / 2**n, rel=1e-12)


@given(rectangles(), st.integers(1, 9), st.integers(1, 9), st.randoms(use_true_random=False))
def test_grid_partition_area_exact(r, k, l, rnd):
    xs = sorted({r.re_lo, r.re_hi, *(rnd.uniform(r.re_lo, r.re_hi) for _ in range(k - 1))})
    ys = sorted({r.im_lo, r.im_hi, *(rnd.uniform(r.im_lo, r.im_hi) for _ in range(l - 1))})
    grid = GridPartition(r, tuple(xs), tuple(ys))
    cells = list(grid.cells())
    assert len(cells) == len(grid)
    total = math.fsum(area(c) for c in cells)
    assert abs(total - area(r)) <= len(cells) * 4 * np.finfo(float).eps * area(r)


@given(rectangles(), st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1)), max_size=6))
def test_area_packing_and_covering(r, raw):
    # rectangles inside r, then the grid they induce: cells have disjoint interiors
    rects = []
    for a, b, c, d in raw:
        x0, x1 = sorted((a, b))
        y0, y1 = sorted((c, d))
        if x1 - x0 < 1e-3 or y1 - y0 < 1e-3:
            continue
        rects.append(
            Rectangle(
                r.re_lo + x0 * r.width, r.re_lo + x1 * r.width, r.im_lo + y0 * r.height, r.im_lo + y1 * r.height
            )
        )
    cells = list(GridPartition.from_rectangles(r, rects).cells())
    packed = [c for c in cells if any(q.contains_rect(c) for q in rects)]
    assert sum(area(c) for c in packed) <= area(r) * (1 + 1e-12)
    # the cells themselves plus any of the rects still cover r
    assert sum(area(c) for c in cells + rects) >= area(r) * (1 - 1e-12)


def test_segment_basics():
    s = Segment(0, 2 + 2j)
    assert s.length == pytest.approx(2 * math.sqrt(2))
    assert s.midpoint == 1 + 1j
    assert s.reversed() == Segment(2 + 2j, 0)
    h1, h2 = s.halves()
    assert h1.b == h2.a == s.midpoint
    assert s.distance_to(2) == pytest.approx(math.sqrt(2))
    assert s.distance_to(-1) == pytest.approx(1.0)
    with pytest.raises(InvalidGeometry):
        Segment(1, 1)


def test_partition_validation():
    p = Partition.equi(4)
    assert p.k == 4 and p.mesh == 0.25
    with pytest.raises(InvalidGeometry):
        Partition((0.0, 0.6, 0.5, 1.0))
    with pytest.raises(InvalidGeometry):
        Partition((0.1, 1.0))


def test_loop_path_closure_checked():
    LoopPath(lambda t: np.exp(2j * np.pi * t))
    with pytest.raises(EndpointMismatch):
        LoopPath(lambda t: t + 0j)


def test_split_and_intersection():
    r = Rectangle(0, 4, 0, 2)
    parts = r.split(1.0, 0.5)
    assert sum(area(p) for p in parts) == pytest.approx(area(r))
    assert r.intersection(Rectangle(3, 5, 1, 3)) == Rectangle(3, 4, 1, 2)
    assert r.intersection(Rectangle(5, 6, 0, 1)) is None
    with pytest.raises(InvalidGeometry):
        r.split(4.0, 1.0)
