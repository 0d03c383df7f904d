"""Parser and jet evaluator for fundamental-equation expressions.

Grammar (precedence-climbing): ``^`` binds tightest and is
right-associative, then unary minus, then ``* /``, then ``+ -``.
Identifiers are ``[A-Za-z][A-Za-z0-9_]*``; numbers are decimal with an
optional exponent.  ``log`` is accepted as an alias of ``ln``.  There is
no implicit multiplication.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np

from . import jets
from .errors import ExprSyntaxError, UnknownIdentifierError
from .jets import Jet


@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: "Ast"


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "Ast"
    right: "Ast"


@dataclass(frozen=True)
class Call:
    fn: str  # ln, exp, sqrt
    arg: "Ast"


Ast = Union[Num, Name, Neg, BinOp, Call]

_FUNCTIONS = {"ln", "exp", "sqrt"}
_ALIASES = {"log": "ln"}

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            # skip pure whitespace tail
            rest = text[pos:]
            if rest.strip() == "":
                break
            bad = pos + len(rest) - len(rest.lstrip())
            raise ExprSyntaxError(f"unexpected character {text[bad]!r}", bad)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("eof", "", len(text)))
    return tokens


_BINARY_BP = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 30}
_UNARY_BP = 25


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op):
        kind, text, offset = self.peek()
        if kind != "op" or text != op:
            raise ExprSyntaxError(f"expected {op!r}", offset)
        self.advance()

    def parse(self):
        ast = self.expression(0)
        kind, text, offset = self.peek()
        if kind != "eof":
            raise ExprSyntaxError(f"unexpected token {text!r}", offset)
        return ast

    def expression(self, min_bp):
        left = self.atom()
        while True:
            kind, text, _ = self.peek()
            if kind != "op" or text not in _BINARY_BP:
                break
            bp = _BINARY_BP[text]
            if bp < min_bp:
                break
            self.advance()
            # ^ is right-associative: recurse at the same binding power
            right = self.expression(bp if text == "^" else bp + 1)
            left = BinOp(text, left, right)
        return left

    def atom(self):
        kind, text, offset = self.advance()
        if kind == "number":
            return Num(float(text))
        if kind == "ident":
            nxt_kind, nxt_text, _ = self.peek()
            if nxt_kind == "op" and nxt_text == "(":
                fn = _ALIASES.get(text, text)
                if fn not in _FUNCTIONS:
                    raise ExprSyntaxError(f"unknown function {text!r}", offset)
                self.advance()
                arg = self.expression(0)
                self.expect_op(")")
                return Call(fn, arg)
            return Name(text)
        if kind == "op" and text == "-":
            return Neg(self.expression(_UNARY_BP))
        if kind == "op" and text == "(":
            inner = self.expression(0)
            self.expect_op(")")
            return inner
        raise ExprSyntaxError(f"unexpected token {text or 'end of input'!r}", offset)


def parse(text: str) -> Ast:
    """Parse expression text into an AST."""
    if not text or text.strip() == "":
        raise ExprSyntaxError("empty expression", 0)
    return _Parser(text).parse()


def pretty(ast: Ast) -> str:
    """Fully parenthesized text form; re-parses to an identical AST."""
    if isinstance(ast, Num):
        return repr(ast.value)
    if isinstance(ast, Name):
        return ast.name
    if isinstance(ast, Neg):
        return f"(-{pretty(ast.operand)})"
    if isinstance(ast, BinOp):
        return f"({pretty(ast.left)}{ast.op}{pretty(ast.right)})"
    if isinstance(ast, Call):
        return f"{ast.fn}({pretty(ast.arg)})"
    raise TypeError(f"not an AST node: {ast!r}")


def names_in(ast: Ast):
    """All identifiers appearing in the expression."""
    if isinstance(ast, Name):
        yield ast.name
    elif isinstance(ast, Neg):
        yield from names_in(ast.operand)
    elif isinstance(ast, BinOp):
        yield from names_in(ast.left)
        yield from names_in(ast.right)
    elif isinstance(ast, Call):
        yield from names_in(ast.arg)


def validate(ast: Ast, variables: Sequence[str], parameters: Sequence[str]) -> None:
    """Check that every identifier is a declared variable or parameter.

    Raises :class:`UnknownIdentifierError` listing the offenders.
    """
    known = set(variables) | set(parameters)
    unknown = {n for n in names_in(ast) if n not in known}
    if unknown:
        raise UnknownIdentifierError(unknown)


def eval_on(ast: Ast, env: Mapping[str, Jet]):
    """Evaluate an AST over an environment of jets (one per identifier)."""
    if isinstance(ast, Num):
        sample = next(iter(env.values()))
        return Jet.constant(ast.value, sample.dim, sample.order)
    if isinstance(ast, Name):
        return env[ast.name]
    if isinstance(ast, Neg):
        return -eval_on(ast.operand, env)
    if isinstance(ast, BinOp):
        left = eval_on(ast.left, env)
        right = eval_on(ast.right, env)
        if ast.op == "+":
            return left + right
        if ast.op == "-":
            return left - right
        if ast.op == "*":
            return left * right
        if ast.op == "/":
            return left / right
        # power: constant exponents use the direct power rule
        if not np.any(right.coeffs[1:]):
            return jets.pow_const(left, right.value)
        return left ** right
    if isinstance(ast, Call):
        arg = eval_on(ast.arg, env)
        return {"ln": jets.ln, "exp": jets.exp, "sqrt": jets.sqrt}[ast.fn](arg)
    raise TypeError(f"not an AST node: {ast!r}")


def eval_jet(ast: Ast, variables: Sequence[str], point, params: Mapping[str, float],
             order: int) -> Jet:
    """Jet of the expression at ``point``, with all derivatives through
    ``order`` taken with respect to ``variables`` in the given order."""
    point = np.atleast_1d(np.asarray(point, dtype=float))
    if point.shape[0] != len(variables):
        raise ValueError(f"point has {point.shape[0]} components for "
                         f"{len(variables)} variables")
    if order == 0:
        env = {name: Jet.constant(point[i], len(variables), 0)
               for i, name in enumerate(variables)}
    else:
        env = {name: Jet.seed(point, i, order) for i, name in enumerate(variables)}
    for name, value in params.items():
        env[name] = Jet.constant(float(value), len(variables), order)
    return eval_on(ast, env)
