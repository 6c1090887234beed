"""Expression trees for complex functions: parsing, evaluation, differentiation.

Grammar (``^`` binds tighter than unary minus, which binds tighter than
``*``/``/``)::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' nonneg_int)*
    atom  := number | 'i' | 'pi' | VAR | ident '(' expr ')' | '(' expr ')'

Exponents are non-negative integer literals only, so no branch cut is ever
needed.  Evaluation is vectorised over numpy arrays.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Iterable, Union

import numpy as np

from .errors import EvaluationAtSingularity, ParseError, RangeError
from .geometry import as_complex

SINGULARITY_TOL = 1e-12
FD_STEP = 1e-5
BUILTINS = ("exp", "sin", "cos")


# --- tree ---------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class Var:
    name: str = "z"


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * /
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"


Node = Union[Const, Var, Neg, BinOp, Pow, Call]


# Smart constructors: fold constants and drop neutral elements locally.


def const(value) -> Const:
    return Const(complex(value))


def _is_const(node, value=None) -> bool:
    return isinstance(node, Const) and (value is None or node.value == value)


def add(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return BinOp("+", a, b)


def sub(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Node, b: Node) -> Node:
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a, 0) or _is_const(b, 0):
        return Const(0j)
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return BinOp("*", a, b)


def div(a: Node, b: Node) -> Node:
    if _is_const(b, 1):
        return a
    if _is_const(a, 0) and not _is_const(b, 0):
        return Const(0j)
    if _is_const(a) and _is_const(b) and b.value != 0:
        return Const(a.value / b.value)
    return BinOp("/", a, b)


def neg(a: Node) -> Node:
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(base: Node, n: int) -> Node:
    if n < 0:
        raise ValueError("exponent must be a non-negative integer")
    if n == 0:
        return Const(1 + 0j)
    if n == 1:
        return base
    if _is_const(base):
        return Const(base.value**n)
    return Pow(base, n)


# --- lexer / parser -----------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<ident>[A-Za-z_]\w*)|(?P<op>[-+*/^(),]))"
)


def _tokenize(src: str):
    pos = 0
    tokens = []
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {src[pos:].lstrip()[:1]!r}", pos)
        start = m.start(m.lastindex)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str, var: str):
        self.tokens = _tokenize(src)
        self.i = 0
        self.var = var

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text):
        tok = self.take()
        if tok[1] != text:
            raise ParseError(f"expected {text!r}, found {tok[1] or 'end of input'!r}", tok[2])
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        exponents = []
        while self.peek()[1] == "^":
            self.take()
            kind, text, pos = self.take()
            if text == "-":
                raise ParseError("negative exponents are not allowed", pos)
            if kind != "num":
                raise ParseError("exponent must be a non-negative integer literal", pos)
            if not text.isdigit():
                raise ParseError(f"non-integer exponent {text!r}", pos)
            exponents.append(int(text))
        # a^b^c == a^(b^c)
        n = None
        for e in reversed(exponents):
            n = e if n is None else e**n
        return base if n is None else Pow(base, n)

    def atom(self):
        kind, text, pos = self.take()
        if kind == "num":
            return Const(complex(float(text)))
        if kind == "ident":
            if text == self.var:
                return Var(self.var)
            if text == "i":
                return Const(1j)
            if text == "pi":
                return Const(complex(math.pi))
            if text in BUILTINS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(text, arg)
            raise ParseError(f"unknown identifier {text!r}", pos)
        if text == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)


def parse_expr(src: str, var: str = "z") -> Node:
    return _Parser(src, var).parse()


# --- printing -----------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _fmt_real(x: float) -> str:
    return repr(float(x))


def _fmt_const(c: complex) -> tuple[str, int]:
    """Source text for a constant and its binding strength."""
    if c.imag == 0:
        s = _fmt_real(c.real)
        return (s, 5) if c.real >= 0 and not s.startswith("-") else (s, 0)
    if c.real == 0:
        if c.imag == 1:
            return "i", 5
        return f"{_fmt_real(c.imag)}*i", (2 if c.imag >= 0 else 0)
    sign = "+" if c.imag >= 0 else "-"
    return f"{_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}*i", 0


def to_source(node: Node) -> str:
    """Render ``node`` as text that :func:`parse_expr` reads back."""
    return _src(node)[0]


def _wrap(text_prec, need):
    text, prec = text_prec
    return f"({text})" if prec < need else text


def _src(node) -> tuple[str, int]:
    if isinstance(node, Const):
        return _fmt_const(node.value)
    if isinstance(node, Var):
        return node.name, 5
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})", 5
    if isinstance(node, Pow):
        return f"{_wrap(_src(node.base), 5)}^{node.exponent}", 4
    if isinstance(node, Neg):
        return f"-{_wrap(_src(node.arg), 3)}", 3
    p = _PREC[node.op]
    left = _wrap(_src(node.left), p)
    # right operand of - and / must bind strictly tighter
    right = _wrap(_src(node.right), p + (1 if node.op in "-/" else 0))
    return f"{left} {node.op} {right}", p


# --- evaluation ---------------------------------------------------------


def _exp(w):
    x, y = w.real, w.imag
    r = np.exp(x)
    return r * np.cos(y) + 1j * (r * np.sin(y))


def _sin(w):
    x, y = w.real, w.imag
    return np.sin(x) * np.cosh(y) + 1j * (np.cos(x) * np.sinh(y))


def _cos(w):
    x, y = w.real, w.imag
    return np.cos(x) * np.cosh(y) - 1j * (np.sin(x) * np.sinh(y))


_CALLS = {"exp": _exp, "sin": _sin, "cos": _cos}


def _ipow(w, n: int):
    result = np.ones_like(w)
    base = w
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


def evaluate_node(node: Node, z):
    """Evaluate the tree at ``z`` (array of complex); no singularity checks."""
    if isinstance(node, Const):
        return np.full_like(z, node.value)
    if isinstance(node, Var):
        return z
    if isinstance(node, Neg):
        return -evaluate_node(node.arg, z)
    if isinstance(node, Pow):
        return _ipow(evaluate_node(node.base, z), node.exponent)
    if isinstance(node, Call):
        return _CALLS[node.func](evaluate_node(node.arg, z))
    a = evaluate_node(node.left, z)
    b = evaluate_node(node.right, z)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a / b


# --- differentiation ----------------------------------------------------


def diff_node(node: Node) -> Node:
    if isinstance(node, Const):
        return Const(0j)
    if isinstance(node, Var):
        return Const(1 + 0j)
    if isinstance(node, Neg):
        return neg(diff_node(node.arg))
    if isinstance(node, Pow):
        n = node.exponent
        if n == 0:
            return Const(0j)
        return mul(mul(const(n), power(node.base, n - 1)), diff_node(node.base))
    if isinstance(node, Call):
        inner = diff_node(node.arg)
        if node.func == "exp":
            outer = node
        elif node.func == "sin":
            outer = Call("cos", node.arg)
        else:
            outer = neg(Call("sin", node.arg))
        return mul(outer, inner)
    u, v = node.left, node.right
    du, dv = diff_node(u), diff_node(v)
    if node.op == "+":
        return add(du, dv)
    if node.op == "-":
        return sub(du, dv)
    if node.op == "*":
        return add(mul(du, v), mul(u, dv))
    return div(sub(mul(du, v), mul(u, dv)), power(v, 2))


# --- singularity detection ----------------------------------------------


def _constant_value(node: Node) -> complex | None:
    if isinstance(node, Var):
        return None
    if isinstance(node, Const):
        return node.value
    try:
        with np.errstate(all="ignore"):
            value = complex(evaluate_node(node, np.zeros(1, dtype=complex))[0])
    except Exception:
        return None
    if _mentions_var(node) or not np.isfinite(value):
        return None
    return value


def _mentions_var(node: Node) -> bool:
    if isinstance(node, Var):
        return True
    if isinstance(node, Const):
        return False
    if isinstance(node, (Neg, Call)):
        return _mentions_var(node.arg)
    if isinstance(node, Pow):
        return _mentions_var(node.base)
    return _mentions_var(node.left) or _mentions_var(node.right)


def _sum_terms(node: Node, sign: int = 1) -> list[tuple[int, Node]]:
    if isinstance(node, BinOp) and node.op in "+-":
        right_sign = sign if node.op == "+" else -sign
        return _sum_terms(node.left, sign) + _sum_terms(node.right, right_sign)
    if isinstance(node, Neg):
        return _sum_terms(node.arg, -sign)
    return [(sign, node)]


def _denominator_roots(node: Node) -> list[complex]:
    """Roots of a denominator shaped like ``z - c`` (and products/powers of such)."""
    if isinstance(node, Pow) and node.exponent > 0:
        return _denominator_roots(node.base)
    if isinstance(node, BinOp) and node.op == "*":
        return _denominator_roots(node.left) + _denominator_roots(node.right)
    var_signs = []
    shift = 0j
    for sign, term in _sum_terms(node):
        if isinstance(term, Var):
            var_signs.append(sign)
            continue
        c = _constant_value(term)
        if c is None:
            return []
        shift += sign * c
    if len(var_signs) != 1:
        return []
    # sign*z + shift == 0
    return [-shift / var_signs[0]]


def find_poles(node: Node) -> list[complex]:
    """Poles of every explicit ``.../(z - c)``-shaped division inside ``node``."""
    out: list[complex] = []
    stack = [node]
    while stack:
        n = stack.pop()
        if isinstance(n, BinOp):
            if n.op == "/":
                out.extend(_denominator_roots(n.right))
            stack.extend((n.right, n.left))
        elif isinstance(n, (Neg, Call)):
            stack.append(n.arg)
        elif isinstance(n, Pow):
            stack.append(n.base)
    return out


def _dedupe(points: Iterable[complex]) -> tuple[complex, ...]:
    seen: list[complex] = []
    for p in points:
        p = as_complex(p) + 0j  # drops negative zeros
        if all(abs(p - q) > SINGULARITY_TOL for q in seen):
            seen.append(p)
    return tuple(seen)


# --- FunctionSpec -------------------------------------------------------


@dataclass(frozen=True)
class FunctionSpec:
    """A complex function given by an expression tree plus its singular set.

    ``singularities`` is the finite set off which the function is taken to be
    holomorphic.  Calling the spec evaluates it (scalars or numpy arrays).
    """

    body: Node
    singularities: tuple[complex, ...] = field(default=())
    var: str = "z"

    def __post_init__(self):
        object.__setattr__(self, "singularities", _dedupe(self.singularities))

    def __call__(self, z):
        arr = np.asarray(z, dtype=complex)
        if self.singularities:
            sing = np.asarray(self.singularities)
            hit = np.abs(arr[..., None] - sing).min(axis=-1) <= SINGULARITY_TOL
            if np.any(hit):
                bad = complex(arr[hit].flat[0]) if arr.ndim else complex(arr)
                raise EvaluationAtSingularity(f"{self.source} is singular at {bad!r}")
        with np.errstate(all="ignore"):
            value = evaluate_node(self.body, np.atleast_1d(arr))
        if not np.all(np.isfinite(value)):
            raise RangeError(f"{self.source} is not finite at some sample point")
        return value.reshape(arr.shape) if arr.ndim else complex(value[0])

    @property
    def source(self) -> str:
        return to_source(self.body)

    def __str__(self) -> str:
        return self.source

    def derivative(self) -> "FunctionSpec":
        return differentiate(self)

    def with_singularities(self, extra: Iterable) -> "FunctionSpec":
        return FunctionSpec(self.body, self.singularities + tuple(extra), self.var)


def parse(src: str, singularities: Iterable = (), var: str = "z") -> FunctionSpec:
    """Parse ``src`` into a :class:`FunctionSpec`.

    Poles of explicit constant-shifted denominators such as ``1/(z-2)`` are
    detected; anything else must be passed in ``singularities``.
    """
    body = parse_expr(src, var=var)
    return FunctionSpec(body, tuple(find_poles(body)) + tuple(singularities), var)


def evaluate(f: FunctionSpec, z):
    return f(z)


def differentiate(f: FunctionSpec) -> FunctionSpec:
    return FunctionSpec(diff_node(f.body), f.singularities, f.var)


def central_difference(f, z, h: float = FD_STEP):
    """``(f(z+h) - f(z-h)) / 2h`` -- the finite-difference oracle for derivatives."""
    return (f(z + h) - f(z - h)) / (2 * h)
