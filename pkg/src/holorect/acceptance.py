"""The acceptance checks behind ``holorect verify``.

Each check is a function ``(seed) -> Check``; randomised checks draw from
``numpy.random.default_rng((seed, number))`` so a seed fixes every sample.
Report lines never include timings, so reports are byte-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cover, formulas, integrate, roots, winding
from .errors import DepthExhausted
from .funcspec import Const, FunctionSpec, Var, differentiate, div, parse, sub
from .geometry import GridPartition, Rectangle, area, boundary_circuit, quarters

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class Check:
    number: int
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.number:>2}. {self.name}: {self.detail}"


def _rng(seed: int, number: int) -> np.random.Generator:
    return np.random.default_rng([seed, number])


def _random_rect(rng, lo=-2.0, hi=2.0, min_side=0.05) -> Rectangle:
    while True:
        x = np.sort(rng.uniform(lo, hi, 2))
        y = np.sort(rng.uniform(lo, hi, 2))
        if x[1] - x[0] >= min_side and y[1] - y[0] >= min_side:
            return Rectangle(float(x[0]), float(x[1]), float(y[0]), float(y[1]))


def _unit_disc(rng, n) -> np.ndarray:
    r = np.sqrt(rng.uniform(0, 1, n))
    theta = rng.uniform(0, 2 * np.pi, n)
    return r * np.exp(1j * theta)


def _inside(rng, rect: Rectangle, margin: float) -> complex:
    return complex(
        rng.uniform(rect.re_lo + margin, rect.re_hi - margin),
        rng.uniform(rect.im_lo + margin, rect.im_hi - margin),
    )


def _pole(a: complex) -> FunctionSpec:
    return FunctionSpec(div(Const(1 + 0j), sub(Var(), Const(a))), (a,))


# --- 1 ----------------------------------------------------------------------


def check_rho(seed: int = 0) -> Check:
    res = integrate.rho_result()
    sides = integrate.side_integrals(_pole(0j), integrate.RHO_SQUARE)
    err = abs(res.value - TWO_PI_I)
    side_err = max(abs(s.value - res.value / 4) for s in sides)
    ok = res.value.imag >= 4 and err <= 1e-8 and side_err <= 1e-8 and sides[0].value.imag >= 1
    return Check(
        1,
        "rho reproduction",
        ok,
        f"im(rho)={res.value.imag:.12f} |rho-2pi i|={err:.2e} max|side-rho/4|={side_err:.2e} "
        f"im(bottom)={sides[0].value.imag:.6f}",
    )


# --- 2 ----------------------------------------------------------------------

ENTIRE_SAMPLES = ("exp(z)", "sin(z)", "cos(z)", "exp(z)*sin(z)", "sin(z)*cos(z)", "exp(z)*cos(z)*sin(z)")


def check_cauchy_theorem(seed: int = 0) -> Check:
    rng = _rng(seed, 2)
    worst = 0.0
    for _ in range(200):
        deg = int(rng.integers(0, 7))
        coeffs = _unit_disc(rng, deg + 1)
        rect = _random_rect(rng)
        value = integrate.rectangle_integral(lambda z, c=coeffs: np.polyval(c, z), rect).value
        worst = max(worst, abs(value))
    worst_named = 0.0
    for src in ENTIRE_SAMPLES:
        f = parse(src)
        for _ in range(5):
            worst_named = max(worst_named, abs(integrate.rectangle_integral(f, _random_rect(rng)).value))
    ok = worst <= 1e-8 and worst_named <= 1e-8
    return Check(
        2, "Cauchy's theorem", ok, f"200 polynomials max|int|={worst:.2e}; exp/sin/cos products max|int|={worst_named:.2e}"
    )


# --- 3 ----------------------------------------------------------------------


def check_rectangle_independence(seed: int = 0) -> Check:
    rng = _rng(seed, 3)
    r = integrate.rho()
    worst_pair = worst_rho = 0.0
    for _ in range(20):
        a = complex(*rng.uniform(-3, 3, 2))
        f = _pole(a)
        values = []
        for _ in range(2):
            lo = rng.uniform(0.2, 2.0, 4)
            rect = Rectangle(a.real - lo[0], a.real + lo[1], a.imag - lo[2], a.imag + lo[3])
            values.append(integrate.rectangle_integral(f, rect).value)
        worst_pair = max(worst_pair, abs(values[0] - values[1]))
        worst_rho = max(worst_rho, *(abs(v - r) for v in values))
    ok = worst_pair <= 1e-8 and worst_rho <= 1e-8
    return Check(3, "rectangle independence", ok, f"max|R1-R2|={worst_pair:.2e} max|int-rho|={worst_rho:.2e}")


# --- 4 ----------------------------------------------------------------------

FORMULA_SAMPLES = ("exp(z)", "z^3 - 2*z + 1", "sin(z)*cos(z)", "z^2*exp(z)", "cos(2*z) + i*z")


def check_cauchy_formulas(seed: int = 0) -> Check:
    rng = _rng(seed, 4)
    rect = Rectangle(-1.5, 1.5, -1.5, 1.5)
    worst_v = worst_d = 0.0
    for src in FORMULA_SAMPLES:
        f = parse(src)
        df = differentiate(f)
        for _ in range(100):
            a = _inside(rng, rect, 0.01)
            worst_v = max(worst_v, abs(formulas.cauchy_value(f, a, rect) - f(a)))
            worst_d = max(worst_d, abs(formulas.cauchy_derivative(f, a, rect) - df(a)))
    series = formulas.series_coefficients(parse("exp(z)"), 8)
    worst_s = max(abs(c - 1 / math.factorial(n)) for n, c in enumerate(series.coeffs))
    ok = worst_v <= 1e-6 and worst_d <= 1e-6 and worst_s <= 1e-6
    return Check(
        4,
        "Cauchy formulas",
        ok,
        f"value max|err|={worst_v:.2e} derivative max|err|={worst_d:.2e} exp series max|err|={worst_s:.2e}",
    )


# --- 5 ----------------------------------------------------------------------


def check_winding_suite(seed: int = 0) -> Check:
    rect = Rectangle(-1.0, 2.0, -0.5, 1.5)
    circ = boundary_circuit(rect)
    center = rect.center
    failures = []

    def expect(label, loop, p, value):
        w = winding.winding_number(loop, p).value
        lifted = winding.winding_number_lifted(loop, p, steps=8192)
        if w != value or lifted != value:
            failures.append(f"{label}: w={w} lifted={lifted} expected {value}")

    expect("circuit", circ, center, 1)
    expect("constant", winding.constant_loop(3 + 1j), center, 0)
    for n in range(-3, 4):
        expect(f"circle n={n}", winding.circle_loop(n), 0j, n)
    loops = [(n, winding.circle_loop(n)) for n in (-2, 1, 3)]
    for n, f in loops:
        for m, g in loops:
            expect(f"product {n}*{m}", winding.loop_product(f, g), 0j, n + m)
    for n in (-3, 1, 2):
        expect(f"reverse n={n}", winding.loop_reverse(winding.circle_loop(n)), 0j, -n)
    expect("reverse circuit", winding.loop_reverse(circ), center, -1)
    for s in (0.1, 0.37, 0.5, 0.9):
        expect(f"shift s={s}", winding.loop_shift(circ, s), center, 1)
        expect(f"shift n=3 s={s}", winding.loop_shift(winding.circle_loop(3), s), 0j, 3)
    ok = not failures
    return Check(5, "winding-number suite", ok, "all cases agree with the lifting oracle" if ok else "; ".join(failures))


# --- 6 ----------------------------------------------------------------------


def check_component_constancy(seed: int = 0) -> Check:
    rng = _rng(seed, 6)
    rect = Rectangle(-1.0, 2.0, -0.5, 1.5)
    circ = boundary_circuit(rect)
    inside = [winding.winding_number(circ, _inside(rng, rect, 1e-3)).value for _ in range(50)]
    outside = []
    while len(outside) < 50:
        q = complex(*rng.uniform(-4, 5, 2))
        if rect.boundary_distance(q) > 1e-3 and not rect.contains(q):
            outside.append(winding.winding_number(circ, q).value)
    ok = set(inside) == {1} and set(outside) == {0}
    return Check(6, "component constancy", ok, f"interior windings {sorted(set(inside))}, exterior {sorted(set(outside))}")


# --- 7 ----------------------------------------------------------------------


def check_argument_principle(seed: int = 0) -> Check:
    big = Rectangle(-2.0, 2.0, -2.0, 2.0)
    f = parse("z^2 - 1")
    n_quad = roots.count_preimages(f, big, 0)
    n_cube = roots.count_preimages(parse("z^3"), Rectangle(-1.0, 1.0, -1.0, 1.0), 0)
    report = roots.locate_preimages(f, big, 0, min_size=1e-3)
    isolated = sorted(
        (r for r in (1, -1) if any(w == 1 and b.contains(r) and b.diameter <= 1e-3 for b, w in report.boxes))
    )
    cube_report = roots.locate_preimages(parse("z^3"), Rectangle(-1.0, 1.0, -1.0, 1.0), 0, min_size=1e-2)
    audits = report.audit() and cube_report.audit()
    ok = n_quad == 2 and n_cube == 3 and isolated == [-1, 1] and len(report.boxes) == 2 and audits
    return Check(
        7,
        "argument principle",
        ok,
        f"count(z^2-1)={n_quad} count(z^3)={n_cube} isolated roots {isolated} "
        f"boxes={len(report.boxes)} additivity audit {'holds' if audits else 'FAILS'}",
    )


# --- 8 ----------------------------------------------------------------------


def _random_entire(rng) -> tuple[str, Callable]:
    kind = int(rng.integers(0, 4))
    a, b = _unit_disc(rng, 2) * 1.5
    if kind == 0:
        c = _unit_disc(rng, int(rng.integers(1, 7)) + 1)
        return "poly", lambda z: np.polyval(c, z)
    if kind == 1:
        return "exp", lambda z: np.exp(a * z + b)
    if kind == 2:
        return "sin", lambda z: np.sin(a * z + b)
    return "exp*cos", lambda z: np.exp(a * z) * np.cos(b * z + 1)


def check_maximum_modulus(seed: int = 0) -> Check:
    rng = _rng(seed, 8)
    worst = -math.inf
    for _ in range(50):
        _, f = _random_entire(rng)
        rect = _random_rect(rng)
        xs = np.linspace(rect.re_lo, rect.re_hi, 101)[1:-1]
        ys = np.linspace(rect.im_lo, rect.im_hi, 101)[1:-1]
        grid = xs[None, :] + 1j * ys[:, None]
        inner = float(np.max(np.abs(f(grid))))
        edge = float(np.max(np.abs(f(boundary_circuit(rect)(np.arange(1000) / 1000)))))
        worst = max(worst, (inner - edge) / max(edge, 1.0))
    ok = worst <= 1e-6
    return Check(8, "maximum modulus (sampled)", ok, f"max (interior - boundary)/scale = {worst:.3e}")


# --- 9 ----------------------------------------------------------------------

DELTAS = (0.1, 0.05, 0.025, 0.0125)
QUADRATURE_NOISE = 1e-9


def check_derivative_continuity(seed: int = 0) -> Check:
    f = parse("exp(z)")
    f2 = differentiate(differentiate(f))
    inner = Rectangle(-0.5, 0.5, -0.5, 0.5)
    rect = Rectangle(-2.0, 2.0, -2.0, 2.0)
    xs = np.linspace(-0.5, 0.5, 201)
    max_f2 = float(np.max(np.abs(f2(xs[None, :] + 1j * xs[:, None]))))
    moduli = [
        formulas.derivative_continuity_modulus(f, inner, rect, d, samples=64, seed=seed) for d in DELTAS
    ]
    bounded = all(m <= max_f2 * d + 1e-6 for m, d in zip(moduli, DELTAS))
    monotone = all(b <= a + 2 * QUADRATURE_NOISE for a, b in zip(moduli, moduli[1:]))
    return Check(
        9,
        "derivative continuity",
        bounded and monotone,
        "moduli " + ", ".join(f"{m:.3e}" for m in moduli) + f" (bound slope max|f''|={max_f2:.4f})",
    )


# --- 10 ---------------------------------------------------------------------


def _packs(parent: Rectangle, family) -> bool:
    return sum(area(r) for r in family) <= area(parent) * (1 + 1e-12)


def _covers(parent: Rectangle, family) -> bool:
    return sum(area(r) for r in family) >= area(parent) * (1 - 1e-12)


def _disjoint(family) -> bool:
    return not any(a.interiors_overlap(b) for i, a in enumerate(family) for b in family[i + 1 :])


def check_covering(seed: int = 0) -> Check:
    rng = _rng(seed, 10)
    unit = Rectangle(0.0, 1.0, 0.0, 1.0)
    pred = cover.SquarePredicate(cover.max_diameter(0.3), cover.meets_horizontal_segment(0.5, 0.0, 1.0))
    fin = cover.konig_finite_cover(unit, pred)
    xs = np.linspace(0, 1, 1001)
    covered = all(any(s.contains(complex(x, 0.5)) for s in fin) for x in xs)
    finite_ok = bool(fin) and _disjoint(fin) and covered and all(s.diameter < 0.3 for s in fin)

    witness_ok = False
    center = unit.center
    try:
        cover.konig_finite_cover(
            unit, cover.SquarePredicate(lambda s: not s.contains(center), cover.meets_point(center)), max_depth=20
        )
    except DepthExhausted as exc:
        chain = exc.witness
        witness_ok = (
            len(chain) == 21
            and all(outer.contains_rect(inner) for outer, inner in zip(chain, chain[1:]))
            and all(s.contains(center) for s in chain)
        )

    families_ok = _packs(unit, fin)
    for _ in range(20):
        root = Rectangle.square(complex(*rng.uniform(-1, 1, 2)), float(rng.uniform(0.5, 2)))
        d = float(rng.uniform(0.05, 0.6)) * root.diameter
        y = float(rng.uniform(root.im_lo, root.im_hi))
        p = cover.SquarePredicate(cover.max_diameter(d), cover.meets_horizontal_segment(y, root.re_lo, root.re_hi))
        sq = cover.konig_finite_cover(root, p)
        cnt = cover.countable_cover(root, p, max_depth=8).squares
        full = cover.konig_finite_cover(root, cover.SquarePredicate(cover.max_diameter(d), lambda s: True))
        cuts = GridPartition(
            root,
            (root.re_lo, *sorted(rng.uniform(root.re_lo, root.re_hi, 3)), root.re_hi),
            (root.im_lo, *sorted(rng.uniform(root.im_lo, root.im_hi, 2)), root.im_hi),
        )
        grid = list(cuts.cells())
        extra = [_random_rect(rng, -3, 3) for _ in range(4)]
        families_ok &= _packs(root, sq) and _packs(root, cnt) and _packs(root, grid) and _disjoint(sq)
        families_ok &= _covers(root, full) and _covers(root, grid) and _covers(root, list(quarters(root)) + extra)
        families_ok &= math.isclose(sum(area(c) for c in grid), area(root), rel_tol=1e-12)
    ok = finite_ok and witness_ok and families_ok
    return Check(
        10,
        "covering lemma",
        ok,
        f"midline cover {len(fin)} squares ok={finite_ok}; depth-exhausted witness ok={witness_ok}; "
        f"area inequalities ok={families_ok}",
    )


CHECKS: tuple[Callable[[int], Check], ...] = (
    check_rho,
    check_cauchy_theorem,
    check_rectangle_independence,
    check_cauchy_formulas,
    check_winding_suite,
    check_component_constancy,
    check_argument_principle,
    check_maximum_modulus,
    check_derivative_continuity,
    check_covering,
)


def run_all(seed: int = 42, determinism: bool = True) -> list[Check]:
    results = [check(seed) for check in CHECKS]
    if determinism:
        again = [check(seed) for check in CHECKS]
        same = [a.line() for a in results] == [b.line() for b in again]
        results.append(
            Check(11, "determinism", same, f"second run with seed {seed} {'identical' if same else 'DIFFERS'}")
        )
    return results


def report(results: list[Check]) -> str:
    lines = [c.line() for c in results]
    passed = sum(c.passed for c in results)
    lines.append(f"{passed}/{len(results)} criteria passed")
    return "\n".join(lines) + "\n"
