"""Command-line front end.

Exit status: 0 on success, 2 on usage errors, 1 on domain errors.  A domain
error prints one line ``error: <CODE>: <message>`` to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import acceptance, cover, formulas, integrate, roots, winding
from .errors import HolorectError, InvalidGeometry, NoConvergence
from .funcspec import parse
from .geometry import Rectangle, Segment, as_complex, boundary_circuit
from .svg import cells_svg

TOL_ENV = "HOLORECT_TOL"
SIG_DIGITS = 12
_ENV_TOL = os.environ.get(TOL_ENV)

# flags whose values may legitimately start with '-' (e.g. "--rect -1,1,-1,1")
_VALUE_FLAGS = {"--rect", "--segment", "--at", "--point", "--value", "--singularity", "--fn", "--loop"}


def _round(x: float):
    return float(f"{x:.{SIG_DIGITS}g}")


def _canonical(obj):
    if isinstance(obj, dict):
        return {k: _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return {"im": _round(obj.imag), "re": _round(obj.real)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(obj)
    return obj


def to_json(obj) -> str:
    """Canonical JSON: sorted keys, compact separators, 12 significant digits."""
    return json.dumps(_canonical(obj), sort_keys=True, separators=(",", ":"))


def _fmt(z) -> str:
    if isinstance(z, complex):
        return f"{z.real:.{SIG_DIGITS}g}{z.imag:+.{SIG_DIGITS}g}i"
    return f"{z:.{SIG_DIGITS}g}"


def _config(args) -> integrate.RefinementConfig:
    tol = args.tol if getattr(args, "tol", None) is not None else (float(_ENV_TOL) if _ENV_TOL else None)
    if tol is None:
        return integrate.DEFAULT_CONFIG
    return integrate.RefinementConfig(abs_tol=tol, rel_tol=tol)


def _function(args):
    extra = [as_complex(s) for s in args.singularity or ()]
    return parse(args.fn, singularities=extra)


def _rect(text: str) -> Rectangle:
    return Rectangle.parse(text)


def _emit(args, payload: dict, plain: str) -> None:
    print(to_json(payload) if args.json else plain)


def _checked(res: integrate.IntegralResult) -> integrate.IntegralResult:
    if not res.converged:
        raise NoConvergence(f"refinement stopped at k={res.partitions_used}, est_error={res.est_error:.3g}", res)
    return res


# --- subcommands -------------------------------------------------------------


def cmd_integrate(args) -> None:
    f = _function(args)
    cfg = _config(args)
    if args.segment:
        c = [float(v) for v in args.segment.replace(",", " ").split()]
        if len(c) != 4:
            raise InvalidGeometry("--segment needs a_re,a_im,b_re,b_im")
        res = integrate.segment_integral(f, Segment(complex(c[0], c[1]), complex(c[2], c[3])), cfg)
    elif args.rect:
        res = integrate.rectangle_integral(f, _rect(args.rect), cfg)
    else:
        res = integrate.functional_integral(f, cfg)
    _checked(res)
    _emit(
        args,
        {"value": res.value, "k": res.partitions_used, "est_error": res.est_error},
        f"{_fmt(res.value)}  (k={res.partitions_used}, est_error={res.est_error:.3g})",
    )


def _default_rect(at: complex, rect: str | None) -> Rectangle:
    return _rect(rect) if rect else Rectangle.square(at, 1.0)


def cmd_eval(args) -> None:
    f = _function(args)
    a = as_complex(args.at)
    rect = _default_rect(a, args.rect)
    value = formulas.cauchy_value(f, a, rect, _config(args))
    direct = f(a)
    _emit(args, {"value": value, "direct": direct}, f"{_fmt(value)}  (direct {_fmt(direct)})")


def cmd_derivative(args) -> None:
    f = _function(args)
    a = as_complex(args.at)
    rect = _default_rect(a, args.rect)
    value = formulas.cauchy_derivative(f, a, rect, _config(args))
    symbolic = f.derivative()(a)
    _emit(args, {"value": value, "symbolic": symbolic}, f"{_fmt(value)}  (symbolic {_fmt(symbolic)})")


def cmd_series(args) -> None:
    f = _function(args)
    rect = _rect(args.rect) if args.rect else None
    res = formulas.series_coefficients(f, args.order, rect, _config(args))
    _emit(
        args,
        {"coeffs": list(res.coeffs), "radius_hint": res.radius_hint},
        "\n".join(f"a_{n} = {_fmt(c)}" for n, c in enumerate(res.coeffs)),
    )


def cmd_winding(args) -> None:
    if args.rect:
        loop = boundary_circuit(_rect(args.rect))
    elif args.loop:
        text = args.loop.strip()
        if text.startswith("rect"):
            loop = boundary_circuit(_rect(text[4:]))
        else:
            loop = winding.expression_loop(text)
    else:
        raise InvalidGeometry("give --loop or --rect")
    p = as_complex(args.point)
    res = winding.winding_number(loop, p, _config(args))
    payload = {"winding": res.value, "k": res.partition_size, "max_arc_step": res.max_arc_step}
    plain = str(res.value)
    if args.oracle:
        lifted = winding.winding_number_lifted(loop, p, steps=max(4 * res.partition_size, 4096))
        payload["lifted"] = lifted
        plain += f"  (lifting oracle {lifted})"
    _emit(args, payload, plain)


def cmd_cover(args) -> None:
    root = _rect(args.rect)
    y = root.center.imag
    pred = cover.SquarePredicate(
        cover.max_diameter(args.max_diameter), cover.meets_horizontal_segment(y, root.re_lo, root.re_hi)
    )
    squares = cover.konig_finite_cover(root, pred, max_depth=args.max_depth)
    if args.svg:
        Path(args.svg).write_text(cells_svg(root, squares))
    _emit(
        args,
        {"squares": [s.to_dict() for s in squares], "count": len(squares)},
        "\n".join(f"{s.re_lo:.12g} {s.re_hi:.12g} {s.im_lo:.12g} {s.im_hi:.12g}" for s in squares),
    )


def cmd_roots(args) -> None:
    f = _function(args)
    rect = _rect(args.rect)
    p = as_complex(args.value)
    rep = roots.locate_preimages(f, rect, p, args.min_size, _config(args))
    if args.svg:
        cells = [b for b, _ in rep.boxes] + [r for r, _ in rep.residual]
        weights = [w for _, w in rep.boxes] + [w for _, w in rep.residual]
        Path(args.svg).write_text(cells_svg(rect, cells, weights, marks=[b.center for b, _ in rep.boxes]))
    payload = {
        "total_winding": rep.total_winding,
        "boxes": [{"rect": b.to_dict(), "winding": w, "center": b.center} for b, w in rep.boxes],
        "residual": [{"rect": b.to_dict(), "winding": w} for b, w in rep.residual],
    }
    plain = [f"total winding {rep.total_winding}"]
    plain += [f"box around {_fmt(b.center)} (diameter {b.diameter:.3g}): winding {w}" for b, w in rep.boxes]
    plain += [f"residual cell {b}: winding {w}" for b, w in rep.residual]
    _emit(args, payload, "\n".join(plain))


def cmd_verify(args) -> None:
    results = acceptance.run_all(args.seed)
    if args.json:
        print(to_json([{"criterion": c.number, "name": c.name, "passed": c.passed, "detail": c.detail} for c in results]))
    else:
        sys.stdout.write(acceptance.report(results))
    if not all(c.passed for c in results):
        raise SystemExit(1)


# --- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="holorect", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, fn=True):
        if fn:
            p.add_argument("--fn", required=True, help='expression in z, e.g. "exp(z)/(z-1)"')
            p.add_argument("--singularity", action="append", metavar="RE,IM", help="extra declared singularity")
        p.add_argument("--tol", type=float, help="absolute and relative refinement tolerance")
        p.add_argument("--json", action="store_true", help="emit canonical JSON")

    p = sub.add_parser("integrate", help="integral over a segment, a rectangle boundary, or an enclosing rectangle")
    common(p)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--segment", metavar="A_RE,A_IM,B_RE,B_IM")
    g.add_argument("--rect", metavar="RE_LO,RE_HI,IM_LO,IM_HI")
    p.set_defaults(func=cmd_integrate)

    p = sub.add_parser("eval", help="f(a) from boundary values")
    common(p)
    p.add_argument("--at", required=True, metavar="RE,IM")
    p.add_argument("--rect", help="enclosing rectangle (default: side-2 square around --at)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("derivative", help="f'(a) from boundary values")
    common(p)
    p.add_argument("--at", required=True, metavar="RE,IM")
    p.add_argument("--rect")
    p.set_defaults(func=cmd_derivative)

    p = sub.add_parser("series", help="Taylor coefficients at 0")
    common(p)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--rect", help="rectangle around 0 (default [-1,1]^2)")
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("winding", help="discrete winding number of a loop about a point")
    common(p, fn=False)
    p.add_argument("--loop", help='expression in t on [0,1], or "rect RE_LO,RE_HI,IM_LO,IM_HI"')
    p.add_argument("--rect", help="use the boundary circuit of this rectangle")
    p.add_argument("--point", required=True, metavar="RE,IM")
    p.add_argument("--oracle", action="store_true", help="also run the lifting construction")
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("cover", help="finite quadtree cover of the horizontal midline of a square")
    common(p, fn=False)
    p.add_argument("--rect", required=True)
    p.add_argument("--max-diameter", type=float, required=True)
    p.add_argument("--max-depth", type=int, default=cover.DEFAULT_MAX_DEPTH)
    p.add_argument("--svg", help="write the decomposition to this SVG file")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("roots", help="count and isolate solutions of f(z) = value in a rectangle")
    common(p)
    p.add_argument("--rect", required=True)
    p.add_argument("--value", default="0,0", metavar="RE,IM")
    p.add_argument("--min-size", type=float, default=1e-3)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return ap


def _normalize(argv: list[str]) -> list[str]:
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_normalize(argv))
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    try:
        args.func(args)
    except HolorectError as exc:
        print(f"error: {exc.code}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
