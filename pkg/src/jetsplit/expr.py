"""Polynomial expression parsing and the canonical jet text form.

Grammar (whitespace insensitive)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := literal | variable | '(' expr ')' | factor '^' nat

Coefficient literals follow the field: ``p/q`` over the rationals, plain
integers over GF(p), and polynomials in ``t`` over GF(2^k), where the bare
name ``t`` denotes the field generator.  A jet may carry its precision as a
trailing ``+ O(deg N)``; serialization always emits it, parsing accepts it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .field import BinaryField, Field, FieldError, RationalField
from .jet import Jet, grlex_key


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            stripped = text[i:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", len(text) - len(stripped))
        if m.group("number"):
            tokens.append(_Token("number", m.group("number"), m.start("number")))
        elif m.group("name"):
            tokens.append(_Token("name", m.group("name"), m.start("name")))
        else:
            tokens.append(_Token(m.group("op"), m.group("op"), m.start("op")))
        i = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


# -- AST ----------------------------------------------------------------------


@dataclass
class Num:
    text: str
    pos: int


@dataclass
class Var:
    name: str
    pos: int


@dataclass
class Neg:
    arg: object


@dataclass
class Add:
    left: object
    right: object


@dataclass
class Mul:
    left: object
    right: object


@dataclass
class Pow:
    base: object
    exponent: int


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok.kind != kind:
            raise ParseError(f"expected {kind!r}, found {tok.text!r}", tok.pos)
        self.i += 1
        return tok

    def parse_expr(self):
        sign = None
        if self.peek().kind in ("+", "-"):
            sign = self.take().kind
        node = self.parse_term()
        if sign == "-":
            node = Neg(node)
        while self.peek().kind in ("+", "-"):
            op = self.take().kind
            rhs = self.parse_term()
            node = Add(node, Neg(rhs) if op == "-" else rhs)
        return node

    def parse_term(self):
        node = self.parse_factor()
        while self.peek().kind == "*":
            self.take()
            node = Mul(node, self.parse_factor())
        return node

    def parse_factor(self):
        tok = self.peek()
        if tok.kind == "number":
            node = Num(self.take().text, tok.pos)
        elif tok.kind == "name":
            node = Var(self.take().text, tok.pos)
        elif tok.kind == "(":
            self.take()
            node = self.parse_expr()
            self.take(")")
        else:
            raise ParseError(f"expected a literal, variable or '(', found {tok.text!r}", tok.pos)
        while self.peek().kind == "^":
            self.take()
            exp = self.take("number")
            if "/" in exp.text:
                raise ParseError("exponent must be a natural number", exp.pos)
            node = Pow(node, int(exp.text))
        return node


# -- evaluation ----------------------------------------------------------------

_PRECISION_SUFFIX = re.compile(r"\+\s*O\s*\(\s*deg\s+(\d+)\s*\)\s*$")


def parse_jet(text: str, field: Field, varnames, precision: int) -> Jet:
    """Parse an expression to a jet over ``field`` at the given precision.

    A trailing ``+ O(deg N)`` overrides the precision argument.
    """
    varnames = list(varnames)
    m = _PRECISION_SUFFIX.search(text)
    if m:
        precision = int(m.group(1))
        text = text[: m.start()]
    if text.strip() == "":
        raise ParseError("empty expression", 0)
    tokens = _tokenize(text)
    parser = _Parser(tokens)
    ast = parser.parse_expr()
    parser.take("end")
    index = {name: i for i, name in enumerate(varnames)}
    if isinstance(field, BinaryField) and "t" in index:
        raise FieldError("variable name 't' is reserved over binary fields")
    return _eval(ast, field, index, len(varnames), precision)


def _eval(node, field, index, nvars, prec) -> Jet:
    if isinstance(node, Num):
        if "/" in node.text and not isinstance(field, RationalField):
            raise ParseError(f"literal {node.text!r} is not in {field}", node.pos)
        if isinstance(field, BinaryField) and node.text not in ("0", "1"):
            raise ParseError(f"literal {node.text!r} is not in {field}", node.pos)
        try:
            value = field.parse_scalar(node.text)
        except FieldError as exc:
            raise ParseError(str(exc), node.pos) from None
        return Jet.constant(field, nvars, prec, value)
    if isinstance(node, Var):
        if isinstance(field, BinaryField) and node.name == "t":
            from .field import gf2_poly_mod

            return Jet.constant(field, nvars, prec, gf2_poly_mod(0b10, field.modulus))
        if node.name not in index:
            raise ParseError(f"unknown variable {node.name!r}", node.pos)
        return Jet.variable(field, nvars, index[node.name], prec)
    if isinstance(node, Neg):
        return -_eval(node.arg, field, index, nvars, prec)
    if isinstance(node, Add):
        return _eval(node.left, field, index, nvars, prec) + _eval(node.right, field, index, nvars, prec)
    if isinstance(node, Mul):
        return _eval(node.left, field, index, nvars, prec) * _eval(node.right, field, index, nvars, prec)
    if isinstance(node, Pow):
        return _eval(node.base, field, index, nvars, prec).power(node.exponent)
    raise TypeError(f"unexpected AST node {node!r}")


# -- serialization ---------------------------------------------------------------


def default_varnames(n: int):
    return [f"x{i + 1}" for i in range(n)]


def serialize_jet(f: Jet, varnames=None, with_precision: bool = True) -> str:
    """Canonical text form: graded-lex terms, then ``+ O(deg N)``."""
    names = list(varnames) if varnames is not None else default_varnames(f.nvars)
    if len(names) != f.nvars:
        raise ValueError(f"need {f.nvars} variable names, got {len(names)}")
    field = f.field
    rational = isinstance(field, RationalField)
    pieces = []
    for alpha, c in sorted(f.coeffs.items(), key=lambda kv: grlex_key(kv[0])):
        mono = "*".join(
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, alpha)
            if e
        )
        negative = rational and c < 0
        mag = -c if negative else c
        lit = field.format_scalar(mag)
        if not mono:
            body = lit
        elif mag == field.one:
            body = mono
        else:
            if "+" in lit:
                lit = f"({lit})"
            body = f"{lit}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if negative else body)
        else:
            pieces.append(f"- {body}" if negative else f"+ {body}")
    text = " ".join(pieces) if pieces else "0"
    if with_precision:
        text += f" + O(deg {f.prec})"
    return text
