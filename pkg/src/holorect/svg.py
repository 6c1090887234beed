"""Static SVG drawings of square decompositions and located cells."""

from __future__ import annotations

from typing import Iterable, Sequence

from .geometry import Rectangle

_SIZE = 512
_PALETTE = ("#cfe8ff", "#8cc4f5", "#4a9ae0", "#1f6fb8", "#0b4a85")


def _frame(rect: Rectangle):
    scale = _SIZE / max(rect.width, rect.height)

    def box(r: Rectangle) -> tuple[float, float, float, float]:
        x = (r.re_lo - rect.re_lo) * scale
        y = (rect.im_hi - r.im_hi) * scale  # SVG y axis points down
        return x, y, r.width * scale, r.height * scale

    def point(z: complex) -> tuple[float, float]:
        return (z.real - rect.re_lo) * scale, (rect.im_hi - z.imag) * scale

    return box, point, rect.width * scale, rect.height * scale


def cells_svg(
    root: Rectangle,
    cells: Sequence[Rectangle],
    weights: Iterable[int] | None = None,
    marks: Iterable[complex] = (),
) -> str:
    box, point, w, h = _frame(root)
    weights = list(weights) if weights is not None else [1] * len(cells)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1f}" height="{h:.1f}" '
        f'viewBox="-2 -2 {w + 4:.1f} {h + 4:.1f}">',
        f'<rect x="0" y="0" width="{w:.2f}" height="{h:.2f}" fill="white" stroke="black"/>',
    ]
    for cell, weight in zip(cells, weights):
        x, y, cw, ch = box(cell)
        color = _PALETTE[min(abs(weight), len(_PALETTE)) - 1] if weight else "#eeeeee"
        out.append(
            f'<rect x="{x:.3f}" y="{y:.3f}" width="{cw:.3f}" height="{ch:.3f}" '
            f'fill="{color}" stroke="#333" stroke-width="0.5"><title>{weight}</title></rect>'
        )
    for z in marks:
        x, y = point(complex(z))
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="3" fill="crimson"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
