"""Small arithmetic expression language for metric components.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = unary { ("*" | "/") unary } ;
    unary   = "-" unary | power ;
    power   = primary [ "^" unary ] ;
    primary = number | call | identifier | "(" expr ")" ;
    call    = funcname "(" expr { "," expr } ")" ;
    number  = digits [ "." [digits] ] [ exponent ] | "." digits [ exponent ] ;
    exponent = ("e" | "E") [ "+" | "-" ] digits ;

so ``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``) and is
right-associative.  Function names: exp, ln, sqrt, sin, cos, tan, sinh,
cosh, abs (one argument) and pow (two).  There is no implicit
multiplication.  All diagnostics carry 0-based byte offsets into the UTF-8
encoded source.

Evaluation is generic over a *ring*: any object providing the methods of
:class:`RealRing`.  :data:`REAL` evaluates with IEEE doubles; the jet ring in
:mod:`pseudocurv.jets` evaluates value, gradient and Hessian together.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

__all__ = [
    "Span", "Num", "Var", "Neg", "BinOp", "Call", "Expr",
    "ParseError", "EvalError", "DomainError", "BindError",
    "parse", "evaluate", "pretty", "free_names", "check_bindings",
    "RealRing", "REAL", "FUNCTIONS",
]

FUNCTIONS = {
    "exp": 1, "ln": 1, "sqrt": 1, "sin": 1, "cos": 1, "tan": 1,
    "sinh": 1, "cosh": 1, "abs": 1, "pow": 2,
}

MAX_DEPTH = 200
MAX_INT_POWER = 64


@dataclass(frozen=True)
class Span:
    start: int
    end: int


@dataclass(frozen=True)
class Num:
    value: float
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: tuple
    span: Span | None = field(default=None, compare=False, repr=False)


Expr = Num | Var | Neg | BinOp | Call


class ParseError(ValueError):
    """Syntax error at a byte offset."""

    def __init__(self, message: str, offset: int, source: str = ""):
        self.message = message
        self.offset = offset
        self.source = source
        super().__init__(f"{message} at byte {offset}")

    def caret(self) -> str:
        """Source line with a caret under the offending byte."""
        raw = self.source.encode("utf-8")
        head = raw[: self.offset].decode("utf-8", errors="replace")
        return f"{self.source}\n{' ' * len(head)}^"


class DomainError(ArithmeticError):
    """Raised by ring operations outside their domain (no position yet)."""


class EvalError(ArithmeticError):
    """Domain error tied to the sub-expression that caused it."""

    def __init__(self, message: str, span: Span | None):
        self.message = message
        self.span = span
        where = f" at bytes {span.start}..{span.end}" if span else ""
        super().__init__(f"{message}{where}")


class BindError(KeyError):
    def __init__(self, message: str):
        self.message = message
        super().__init__(message)

    def __str__(self) -> str:
        return self.message


# --------------------------------------------------------------------------
# lexer

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # num, ident, op, end
    text: str
    start: int  # byte offsets
    end: int


def _tokenize(source: str) -> list[_Tok]:
    toks = []
    pos = 0
    bpos = 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", bpos, source)
        text = m.group(0)
        blen = len(text.encode("utf-8"))
        if m.lastgroup != "ws":
            toks.append(_Tok(m.lastgroup, text, bpos, bpos + blen))
        pos = m.end()
        bpos += blen
    toks.append(_Tok("end", "", bpos, bpos))
    return toks


# --------------------------------------------------------------------------
# parser

class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.toks = _tokenize(source)
        self.i = 0
        self.depth = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def error(self, message: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        raise ParseError(message, tok.start, self.source)

    def expect(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.kind == "op" and tok.text == text:
            return self.take()
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        self.error(f"expected {text!r}, found {found}")

    def is_op(self, *texts: str) -> bool:
        tok = self.peek()
        return tok.kind == "op" and tok.text in texts

    def enter(self):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            self.error("expression nested too deeply")

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            self.error("empty expression")
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            if tok.kind in ("num", "ident") or tok.text == "(":
                self.error("missing operator (no implicit multiplication)")
            self.error(f"unexpected {tok.text!r}")
        return node

    def expr(self) -> Expr:
        self.enter()
        node = self.term()
        while self.is_op("+", "-"):
            op = self.take().text
            rhs = self.term()
            node = BinOp(op, node, rhs, Span(node.span.start, rhs.span.end))
        self.depth -= 1
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.is_op("*", "/"):
            op = self.take().text
            rhs = self.unary()
            node = BinOp(op, node, rhs, Span(node.span.start, rhs.span.end))
        return node

    def unary(self) -> Expr:
        if self.is_op("-"):
            tok = self.take()
            self.enter()
            operand = self.unary()
            self.depth -= 1
            return Neg(operand, Span(tok.start, operand.span.end))
        return self.power()

    def power(self) -> Expr:
        base = self.primary()
        if self.is_op("^"):
            self.take()
            self.enter()
            expo = self.unary()
            self.depth -= 1
            return BinOp("^", base, expo, Span(base.span.start, expo.span.end))
        return base

    def primary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "num":
            self.take()
            return Num(float(tok.text), Span(tok.start, tok.end))
        if tok.kind == "ident":
            self.take()
            if self.is_op("("):
                if tok.text not in FUNCTIONS:
                    self.error(f"unknown function {tok.text!r}", tok)
                return self.call(tok)
            return Var(tok.text, Span(tok.start, tok.end))
        if self.is_op("("):
            open_tok = self.take()
            inner = self.expr()
            if not self.is_op(")"):
                if self.peek().kind == "end":
                    self.error("unbalanced parenthesis", open_tok)
                self.expect(")")
            self.take()
            return inner
        if tok.kind == "end":
            self.error("unexpected end of input (dangling operator?)")
        self.error(f"unexpected {tok.text!r}")

    def call(self, name: _Tok) -> Expr:
        self.expect("(")
        args = [self.expr()]
        while self.is_op(","):
            self.take()
            args.append(self.expr())
        close = self.expect(")")
        arity = FUNCTIONS[name.text]
        if len(args) != arity:
            raise ParseError(
                f"{name.text} takes {arity} argument(s), got {len(args)}",
                name.start, self.source)
        return Call(name.text, tuple(args), Span(name.start, close.end))


def parse(source: str) -> Expr:
    """Parse ``source`` into an AST or raise :class:`ParseError`."""
    if not isinstance(source, str):
        raise TypeError("source must be str")
    return _Parser(source).parse()


# --------------------------------------------------------------------------
# pretty printer

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "neg": 3, "^": 4}


def _prec(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return _PREC["neg"]
    return 5


def _fmt_num(x: float) -> str:
    if not math.isfinite(x) or x < 0 or (x == 0 and math.copysign(1, x) < 0):
        raise ValueError(f"literal {x!r} cannot be written in the grammar")
    return repr(float(x))


def pretty(node: Expr) -> str:
    """Render with the minimum parentheses needed to re-parse identically."""
    if isinstance(node, Num):
        return _fmt_num(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({', '.join(pretty(a) for a in node.args)})"
    if isinstance(node, Neg):
        inner = pretty(node.operand)
        if _prec(node.operand) < _PREC["neg"]:
            inner = f"({inner})"
        return f"-{inner}"
    op = node.op
    left, right = pretty(node.left), pretty(node.right)
    p = _PREC[op]
    if op == "^":
        if _prec(node.left) < 5:
            left = f"({left})"
        if _prec(node.right) < _PREC["neg"]:
            right = f"({right})"
        return f"{left}^{right}"
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p and not isinstance(node.right, Neg):
        right = f"({right})"
    return f"{left} {op} {right}"


# --------------------------------------------------------------------------
# binding

def free_names(node: Expr) -> set[str]:
    if isinstance(node, Var):
        return {node.name}
    if isinstance(node, Num):
        return set()
    if isinstance(node, Neg):
        return free_names(node.operand)
    if isinstance(node, BinOp):
        return free_names(node.left) | free_names(node.right)
    out: set[str] = set()
    for a in node.args:
        out |= free_names(a)
    return out


def check_bindings(nodes: Iterable[Expr], coordinates: Iterable[str],
                   parameters: Iterable[str]) -> None:
    """Bind-time check: names resolve, and coordinates/parameters are disjoint."""
    coords, params = list(coordinates), list(parameters)
    clash = set(coords) & set(params)
    if clash:
        raise BindError(f"names used both as coordinate and parameter: {sorted(clash)}")
    if len(set(coords)) != len(coords):
        raise BindError(f"duplicate coordinate names in {coords}")
    known = set(coords) | set(params)
    for node in nodes:
        unknown = free_names(node) - known
        if unknown:
            raise BindError(f"unbound identifier(s): {sorted(unknown)}")


# --------------------------------------------------------------------------
# evaluation

class RealRing:
    """IEEE double ring; also the template other rings follow."""

    def const(self, x: float):
        return float(x)

    def value(self, a) -> float:
        return float(a)

    def is_constant(self, a) -> bool:
        return True

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise DomainError("division by zero")
        return a / b

    def neg(self, a):
        return -a

    def exp(self, a):
        try:
            return math.exp(a)
        except OverflowError:
            raise DomainError("exp overflow") from None

    def ln(self, a):
        if a <= 0:
            raise DomainError(f"ln of non-positive value {a!r}")
        return math.log(a)

    def sqrt(self, a):
        if a < 0:
            raise DomainError(f"sqrt of negative value {a!r}")
        return math.sqrt(a)

    def sin(self, a):
        return math.sin(a)

    def cos(self, a):
        return math.cos(a)

    def tan(self, a):
        return math.tan(a)

    def sinh(self, a):
        try:
            return math.sinh(a)
        except OverflowError:
            raise DomainError("sinh overflow") from None

    def cosh(self, a):
        try:
            return math.cosh(a)
        except OverflowError:
            raise DomainError("cosh overflow") from None

    def abs(self, a):
        return abs(a)


REAL = RealRing()


def _int_power(ring, base, k: int):
    # square-and-multiply; the same sequence of products in every ring
    neg = k < 0
    k = abs(k)
    result = None
    acc = base
    while k:
        if k & 1:
            result = acc if result is None else ring.mul(result, acc)
        k >>= 1
        if k:
            acc = ring.mul(acc, acc)
    if result is None:
        result = ring.const(1.0)
    if neg:
        result = ring.div(ring.const(1.0), result)
    return result


def _power(ring, a, b):
    bv = ring.value(b)
    if ring.is_constant(b) and float(bv).is_integer() and abs(bv) <= MAX_INT_POWER:
        return _int_power(ring, a, int(bv))
    if ring.value(a) <= 0:
        raise DomainError("non-integer power of a non-positive base")
    return ring.exp(ring.mul(b, ring.ln(a)))


def evaluate(node: Expr, bindings: Mapping[str, Any], ring=REAL):
    """Evaluate ``node`` with identifiers taken from ``bindings``.

    Ring errors are re-raised as :class:`EvalError` carrying the span of the
    innermost failing sub-expression.
    """
    def ev(nd):
        try:
            if isinstance(nd, Num):
                return ring.const(nd.value)
            if isinstance(nd, Var):
                try:
                    return bindings[nd.name]
                except KeyError:
                    raise EvalError(f"unbound identifier {nd.name!r}", nd.span) from None
            if isinstance(nd, Neg):
                return ring.neg(ev(nd.operand))
            if isinstance(nd, BinOp):
                a, b = ev(nd.left), ev(nd.right)
                if nd.op == "+":
                    return ring.add(a, b)
                if nd.op == "-":
                    return ring.sub(a, b)
                if nd.op == "*":
                    return ring.mul(a, b)
                if nd.op == "/":
                    return ring.div(a, b)
                return _power(ring, a, b)
            args = [ev(a) for a in nd.args]
            if nd.func == "pow":
                return _power(ring, *args)
            return getattr(ring, nd.func)(args[0])
        except DomainError as exc:
            raise EvalError(str(exc), nd.span) from None
        except (ZeroDivisionError, OverflowError, ValueError) as exc:
            raise EvalError(str(exc) or type(exc).__name__, nd.span) from None

    return ev(node)
