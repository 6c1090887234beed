"""Finite and countable covers drawn from the quadtree of a square.

Nodes are addressed by their path of child indices (0=SW, 1=SE, 2=NW,
3=NE); sorting by path is the canonical output order.  Predicates are
supplied by the caller, this module never evaluates functions itself.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Optional

from .errors import DepthExhausted, InvalidGeometry
from .geometry import Rectangle, Segment, quarters

DEFAULT_MAX_DEPTH = 40


@dataclass(frozen=True)
class QuadNode:
    square: Rectangle
    path: tuple[int, ...] = ()

    @property
    def depth(self) -> int:
        return len(self.path)

    def children(self) -> list["QuadNode"]:
        return [QuadNode(q, self.path + (i,)) for i, q in enumerate(quarters(self.square))]

    def parent_path(self) -> tuple[int, ...]:
        return self.path[:-1]


@dataclass(frozen=True)
class SquarePredicate:
    """``in_family(S)``: is ``S`` in the admissible family F.

    ``meets(S)``: does ``S`` meet the target set A -- ``True``, ``False`` or
    ``None`` for unknown, which is treated as ``True``.
    """

    in_family: Callable[[Rectangle], bool]
    meets: Callable[[Rectangle], Optional[bool]]

    def hits(self, cell) -> bool:
        return self.meets(cell) is not False


def _require_square(rect: Rectangle) -> None:
    if not rect.is_square:
        raise InvalidGeometry("the quadtree root must be a square")


def _chain(node_path: tuple[int, ...], root: Rectangle) -> list[Rectangle]:
    chain = [root]
    cur = QuadNode(root)
    for i in node_path:
        cur = cur.children()[i]
        chain.append(cur.square)
    return chain


def konig_finite_cover(
    rect: Rectangle, pred: SquarePredicate, max_depth: int = DEFAULT_MAX_DEPTH
) -> list[Rectangle]:
    """Finite disjoint-interior cover of A by members of F.

    Grows the subtree U of squares that meet A but are not in F, level by
    level; the cover is every child of a U-node that meets A and lies
    outside U.  If U still has nodes at ``max_depth`` the search stops with
    :class:`DepthExhausted` carrying the nested chain down to one of them.
    """
    _require_square(rect)
    root = QuadNode(rect)
    if not pred.hits(rect):
        return []
    if pred.in_family(rect):
        return [rect]
    cover: list[QuadNode] = []
    frontier = [root]
    while frontier:
        if frontier[0].depth >= max_depth:
            deepest = frontier[0]
            raise DepthExhausted(
                f"{len(frontier)} squares at depth {max_depth} still meet A outside F",
                _chain(deepest.path, rect),
            )
        nxt = []
        for node in frontier:
            for child in node.children():
                if not pred.hits(child.square):
                    continue
                if pred.in_family(child.square):
                    cover.append(child)
                else:
                    nxt.append(child)
        frontier = nxt
    cover.sort(key=lambda n: n.path)
    return [n.square for n in cover]


@dataclass(frozen=True)
class CountableCover:
    squares: list[Rectangle]
    truncated: bool


def countable_cover(
    rect: Rectangle, pred: SquarePredicate, max_depth: int = DEFAULT_MAX_DEPTH
) -> CountableCover:
    """Maximal quadtree squares (down to ``max_depth``) that are in F and meet A."""
    _require_square(rect)
    found: list[QuadNode] = []
    truncated = False
    queue = deque([QuadNode(rect)])
    while queue:
        node = queue.popleft()
        if not pred.hits(node.square):
            continue
        if pred.in_family(node.square):
            found.append(node)
        elif node.depth < max_depth:
            queue.extend(node.children())
        else:
            truncated = True
    found.sort(key=lambda n: n.path)
    return CountableCover([n.square for n in found], truncated)


def segment_cover(
    seg: Segment,
    in_family: Callable[[Segment], bool],
    meets: Callable[[Segment], Optional[bool]] = lambda s: True,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> list[Segment]:
    """Binary-halving analogue of :func:`konig_finite_cover`; output runs from ``seg.a`` to ``seg.b``."""
    if meets(seg) is False:
        return []
    if in_family(seg):
        return [seg]
    cover: list[tuple[tuple[int, ...], Segment]] = []
    frontier: list[tuple[tuple[int, ...], Segment]] = [((), seg)]
    while frontier:
        if len(frontier[0][0]) >= max_depth:
            path = frontier[0][0]
            chain = [seg]
            for i in path:
                chain.append(chain[-1].halves()[i])
            raise DepthExhausted(f"segments at depth {max_depth} still meet A outside F", chain)
        nxt = []
        for path, s in frontier:
            for i, half in enumerate(s.halves()):
                if meets(half) is False:
                    continue
                if in_family(half):
                    cover.append((path + (i,), half))
                else:
                    nxt.append((path + (i,), half))
        frontier = nxt
    cover.sort(key=lambda item: item[0])
    return [s for _, s in cover]


# --- common target sets ---------------------------------------------------


def meets_point(z) -> Callable[[Rectangle], bool]:
    z = complex(z)
    return lambda cell: cell.contains(z)


def meets_horizontal_segment(y: float, x0: float, x1: float) -> Callable[[Rectangle], bool]:
    """Closed-cell test against the segment ``[x0, x1] + i*y``."""
    return lambda c: c.im_lo <= y <= c.im_hi and c.re_lo <= x1 and x0 <= c.re_hi


def max_diameter(d: float) -> Callable[[Rectangle], bool]:
    return lambda cell: cell.diameter < d
