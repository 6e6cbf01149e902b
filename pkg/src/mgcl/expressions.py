"""Scalar fields on the plane with exact second-order jet evaluation.

A field is an expression tree over the variables x and y. Jets (value,
gradient, Hessian) are computed by truncated Taylor arithmetic propagated
through the tree, so derivatives are exact up to floating point rounding;
finite differences appear only in tests as an independent oracle.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from .errors import EvaluationError, ParseError

_UNARY_OPS = {
    "sin": K.OP_SIN,
    "cos": K.OP_COS,
    "exp": K.OP_EXP,
    "log": K.OP_LOG,
    "atan": K.OP_ATAN,
}

_OP_NAMES = {
    K.OP_SIN: "sin",
    K.OP_COS: "cos",
    K.OP_EXP: "exp",
    K.OP_LOG: "log",
    K.OP_ATAN: "atan",
}


@dataclass(frozen=True)
class Expr:
    """One node of an expression tree; `value` holds constants/exponents."""

    op: int
    args: tuple = ()
    value: float = 0.0


def const(v: float) -> Expr:
    return Expr(K.OP_CONST, (), float(v))


VAR_X = Expr(K.OP_X)
VAR_Y = Expr(K.OP_Y)


def add(a: Expr, b: Expr) -> Expr:
    return Expr(K.OP_ADD, (a, b))


def sub(a: Expr, b: Expr) -> Expr:
    return Expr(K.OP_SUB, (a, b))


def mul(a: Expr, b: Expr) -> Expr:
    return Expr(K.OP_MUL, (a, b))


def div(a: Expr, b: Expr) -> Expr:
    return Expr(K.OP_DIV, (a, b))


def neg(a: Expr) -> Expr:
    return Expr(K.OP_NEG, (a,))


def powi(a: Expr, n: int) -> Expr:
    if n != int(n):
        raise ParseError(f"exponent must be an integer, got {n!r}")
    n = int(n)
    if n == 0:
        return const(1.0)
    if n == 1:
        return a
    return Expr(K.OP_POW, (a,), float(n))


def unary(name: str, a: Expr) -> Expr:
    return Expr(_UNARY_OPS[name], (a,))


def substitute(expr: Expr, x_repl: Expr, y_repl: Expr) -> Expr:
    """Replace the variables by subtrees (e.g. for domain rotations)."""
    memo: dict[int, Expr] = {}

    def go(e: Expr) -> Expr:
        got = memo.get(id(e))
        if got is not None:
            return got
        if e.op == K.OP_X:
            out = x_repl
        elif e.op == K.OP_Y:
            out = y_repl
        elif not e.args:
            out = e
        else:
            out = Expr(e.op, tuple(go(a) for a in e.args), e.value)
        memo[id(e)] = out
        return out

    return go(expr)


def expr_to_text(e: Expr) -> str:
    """Infix rendering that re-parses to an equivalent tree."""
    if e.op == K.OP_CONST:
        return repr(e.value)
    if e.op == K.OP_X:
        return "x"
    if e.op == K.OP_Y:
        return "y"
    if e.op == K.OP_NEG:
        return f"(-{expr_to_text(e.args[0])})"
    if e.op == K.OP_POW:
        return f"({expr_to_text(e.args[0])})^{int(e.value)}"
    if e.op in _OP_NAMES:
        return f"{_OP_NAMES[e.op]}({expr_to_text(e.args[0])})"
    sym = {K.OP_ADD: "+", K.OP_SUB: "-", K.OP_MUL: "*", K.OP_DIV: "/"}[e.op]
    return f"({expr_to_text(e.args[0])} {sym} {expr_to_text(e.args[1])})"


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?"
    r"|\d+(?:[eE][+-]?\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at position {pos}: {text[pos:]!r}")
        if m.group("num") is not None:
            out.append(("num", m.group("num")))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
        pos = m.end()
    out.append(("end", ""))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, symbol: str):
        kind, val = self.next()
        if kind != "op" or val != symbol:
            raise ParseError(f"expected {symbol!r} in {self.text!r}, got {val!r}")

    def parse(self) -> Expr:
        e = self.expr()
        kind, val = self.peek()
        if kind != "end":
            raise ParseError(f"trailing input {val!r} in {self.text!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.next()
            rhs = self.term()
            e = add(e, rhs) if op == "+" else sub(e, rhs)
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.next()
            rhs = self.unary()
            e = mul(e, rhs) if op == "*" else div(e, rhs)
        return e

    def unary(self) -> Expr:
        if self.peek() == ("op", "-"):
            self.next()
            return neg(self.unary())
        if self.peek() == ("op", "+"):
            self.next()
            return self.unary()
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.next()
            sign = 1
            if self.peek() == ("op", "-"):
                self.next()
                sign = -1
            kind, val = self.next()
            if kind != "num" or not re.fullmatch(r"\d+", val):
                raise ParseError(f"exponent must be an integer literal, got {val!r}")
            return powi(base, sign * int(val))
        return base

    def atom(self) -> Expr:
        kind, val = self.next()
        if kind == "num":
            return const(float(val))
        if kind == "name":
            if val == "x":
                return VAR_X
            if val == "y":
                return VAR_Y
            if val in _UNARY_OPS:
                self.expect_op("(")
                inner = self.expr()
                self.expect_op(")")
                return unary(val, inner)
            raise ParseError(f"unknown name {val!r} (variables are x, y)")
        if kind == "op" and val == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_expression(text: str) -> Expr:
    """Parse infix text (operators + - * / ^, functions sin cos exp log atan)."""
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty expression")
    return _Parser(text).parse()


def _compile_tape(root: Expr):
    """Flatten the tree into post-order arrays; shared subtrees emit once."""
    codes: list[int] = []
    arg1: list[int] = []
    arg2: list[int] = []
    consts: list[float] = []
    slot_of: dict[int, int] = {}

    def emit(e: Expr) -> int:
        got = slot_of.get(id(e))
        if got is not None:
            return got
        slots = [emit(a) for a in e.args]
        codes.append(e.op)
        arg1.append(slots[0] if len(slots) > 0 else -1)
        arg2.append(slots[1] if len(slots) > 1 else -1)
        consts.append(e.value)
        slot = len(codes) - 1
        slot_of[id(e)] = slot
        return slot

    emit(root)
    return (
        np.asarray(codes, dtype=np.int64),
        np.asarray(arg1, dtype=np.int64),
        np.asarray(arg2, dtype=np.int64),
        np.asarray(consts, dtype=np.float64),
    )


@dataclass(frozen=True)
class ScalarField2D:
    """A twice differentiable height field phi(x, y) with exact jets."""

    expression: Expr
    name: str = ""
    _tape: tuple = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_tape", _compile_tape(self.expression))

    @classmethod
    def parse(cls, text: str, name: str = "") -> "ScalarField2D":
        return cls(parse_expression(text), name or text.strip())

    def jet_batch(self, xs, ys, check: bool = True) -> np.ndarray:
        """Jets at many points; rows are (f, fx, fy, fxx, fxy, fyy)."""
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        ys = np.ascontiguousarray(ys, dtype=np.float64)
        if xs.shape != ys.shape or xs.ndim != 1:
            raise ValueError("xs and ys must be equal-length 1-d arrays")
        out = K.tape_jets(*self._tape, xs, ys)
        if check and not np.isfinite(out).all():
            bad = np.nonzero(~np.isfinite(out).all(axis=1))[0][0]
            raise EvaluationError(
                f"non-finite jet of {self.name or 'field'} at "
                f"({xs[bad]:.6g}, {ys[bad]:.6g})"
            )
        return out

    def jet(self, x: float, y: float) -> np.ndarray:
        return self.jet_batch(np.array([x]), np.array([y]))[0]

    def __call__(self, x: float, y: float) -> float:
        return float(self.jet(x, y)[0])

    def to_text(self) -> str:
        return expr_to_text(self.expression)
