"""A minimal expression language for coefficient functions of named invariants.

Grammar (precedence low to high):

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          (right-associative, integer exponent)
    atom   := NUMBER | IDENT | IDENT '(' expr ')' | '(' expr ')'

Functions: exp, log, sqrt.  Evaluation never lets NaN or Inf escape:
division by zero, log/sqrt of non-positive values and non-finite
intermediates all raise DomainError.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

FUNCTIONS = ("exp", "log", "sqrt")


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalError(ValueError):
    pass


class DomainError(EvalError):
    pass


class Expr:
    pass


@dataclass(frozen=True)
class Lit(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # '+', '-', '*', '/'
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int  # non-negative integer


@dataclass(frozen=True)
class Call(Expr):
    fn: str
    arg: Expr


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.pos)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self) -> Expr:
        e = self.expr()
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error(f"unexpected {self.text[self.pos]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while True:
            c = self.peek()
            if c and c in "+-":
                self.pos += 1
                e = BinOp(c, e, self.term())
            else:
                return e

    def term(self) -> Expr:
        e = self.unary()
        while True:
            c = self.peek()
            if c and c in "*/":
                self.pos += 1
                e = BinOp(c, e, self.unary())
            else:
                return e

    def unary(self) -> Expr:
        if self.take("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.take("^"):
            exp = self.unary()
            if isinstance(exp, Lit) and float(exp.value).is_integer() and exp.value >= 0:
                return Pow(base, int(exp.value))
            raise self.error("exponent must be a non-negative integer literal")
        return base

    def atom(self) -> Expr:
        c = self.peek()
        if c == "(":
            self.pos += 1
            e = self.expr()
            if not self.take(")"):
                raise self.error("expected ')'")
            return e
        if c.isdigit() or c == ".":
            return self.number()
        if c.isalpha():
            return self.ident()
        raise self.error("expected a number, identifier or '('")

    def number(self) -> Lit:
        start = self.pos
        text = self.text
        while self.pos < len(text) and (text[self.pos].isdigit() or text[self.pos] == "."):
            self.pos += 1
        if self.pos < len(text) and text[self.pos] in "eE":
            mark = self.pos
            self.pos += 1
            if self.pos < len(text) and text[self.pos] in "+-":
                self.pos += 1
            if self.pos < len(text) and text[self.pos].isdigit():
                while self.pos < len(text) and text[self.pos].isdigit():
                    self.pos += 1
            else:
                self.pos = mark
        try:
            return Lit(float(text[start:self.pos]))
        except ValueError:
            self.pos = start
            raise self.error("malformed number") from None

    def ident(self) -> Expr:
        start = self.pos
        text = self.text
        while self.pos < len(text) and (text[self.pos].isalnum() or text[self.pos] == "_"):
            self.pos += 1
        name = text[start:self.pos]
        if self.peek() == "(":
            if name not in FUNCTIONS:
                self.pos = start
                raise self.error(f"unknown function {name!r}")
            self.pos += 1
            arg = self.expr()
            if not self.take(")"):
                raise self.error("expected ')'")
            return Call(name, arg)
        return Var(name)


def parse(text: str) -> Expr:
    if not text.strip():
        raise ParseError("empty expression", 0)
    return _Parser(text).parse()


def _finite(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError("non-finite intermediate value")
    return x


def evaluate(e: Expr, bindings: dict) -> float:
    if isinstance(e, Lit):
        return _finite(e.value)
    if isinstance(e, Var):
        try:
            return _finite(float(bindings[e.name]))
        except KeyError:
            raise EvalError(f"unbound variable {e.name!r}") from None
    if isinstance(e, Neg):
        return -evaluate(e.arg, bindings)
    if isinstance(e, BinOp):
        a = evaluate(e.left, bindings)
        b = evaluate(e.right, bindings)
        if e.op == "+":
            return _finite(a + b)
        if e.op == "-":
            return _finite(a - b)
        if e.op == "*":
            return _finite(a * b)
        if b == 0.0:
            raise DomainError("division by zero")
        return _finite(a / b)
    if isinstance(e, Pow):
        return _finite(evaluate(e.base, bindings) ** e.exponent)
    if isinstance(e, Call):
        x = evaluate(e.arg, bindings)
        if e.fn == "exp":
            if x > 700.0:
                raise DomainError("exp overflow")
            return _finite(math.exp(x))
        if e.fn == "log":
            if x <= 0.0:
                raise DomainError("log of a non-positive value")
            return _finite(math.log(x))
        if x < 0.0:
            raise DomainError("sqrt of a negative value")
        return _finite(math.sqrt(x))
    raise TypeError(f"not an expression node: {e!r}")


def _add(a: Expr, b: Expr) -> Expr:
    if a == Lit(0.0):
        return b
    if b == Lit(0.0):
        return a
    return BinOp("+", a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    if a == Lit(0.0) or b == Lit(0.0):
        return Lit(0.0)
    if a == Lit(1.0):
        return b
    if b == Lit(1.0):
        return a
    return BinOp("*", a, b)


def differentiate(e: Expr, var: str) -> Expr:
    """Symbolic derivative with the basic simplifications 0*x -> 0,
    x+0 -> x, x^1 -> x applied on the fly."""
    if isinstance(e, Lit):
        return Lit(0.0)
    if isinstance(e, Var):
        return Lit(1.0) if e.name == var else Lit(0.0)
    if isinstance(e, Neg):
        d = differentiate(e.arg, var)
        return Lit(0.0) if d == Lit(0.0) else Neg(d)
    if isinstance(e, BinOp):
        da = differentiate(e.left, var)
        db = differentiate(e.right, var)
        if e.op == "+":
            return _add(da, db)
        if e.op == "-":
            if db == Lit(0.0):
                return da
            return BinOp("-", da, db)
        if e.op == "*":
            return _add(_mul(da, e.right), _mul(e.left, db))
        # (a/b)' = a'/b - a*b'/b^2
        term1 = BinOp("/", da, e.right) if da != Lit(0.0) else Lit(0.0)
        if db == Lit(0.0):
            return term1
        term2 = BinOp("/", _mul(e.left, db), Pow(e.right, 2))
        if term1 == Lit(0.0):
            return Neg(term2)
        return BinOp("-", term1, term2)
    if isinstance(e, Pow):
        if e.exponent == 0:
            return Lit(0.0)
        db = differentiate(e.base, var)
        inner = e.base if e.exponent == 2 else Pow(e.base, e.exponent - 1)
        if e.exponent == 1:
            return db
        return _mul(_mul(Lit(float(e.exponent)), inner), db)
    if isinstance(e, Call):
        da = differentiate(e.arg, var)
        if e.fn == "exp":
            return _mul(e, da)
        if e.fn == "log":
            return BinOp("/", da, e.arg) if da != Lit(0.0) else Lit(0.0)
        if da == Lit(0.0):
            return Lit(0.0)
        return BinOp("/", da, _mul(Lit(2.0), e))
    raise TypeError(f"not an expression node: {e!r}")


def substitute(e: Expr, mapping: dict) -> Expr:
    """Replace variables by expressions (used for slot permutations)."""
    if isinstance(e, Lit):
        return e
    if isinstance(e, Var):
        return mapping.get(e.name, e)
    if isinstance(e, Neg):
        return Neg(substitute(e.arg, mapping))
    if isinstance(e, BinOp):
        return BinOp(e.op, substitute(e.left, mapping), substitute(e.right, mapping))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, mapping), e.exponent)
    if isinstance(e, Call):
        return Call(e.fn, substitute(e.arg, mapping))
    raise TypeError(f"not an expression node: {e!r}")


def variables(e: Expr) -> set:
    if isinstance(e, Lit):
        return set()
    if isinstance(e, Var):
        return {e.name}
    if isinstance(e, Neg):
        return variables(e.arg)
    if isinstance(e, BinOp):
        return variables(e.left) | variables(e.right)
    if isinstance(e, Pow):
        return variables(e.base)
    if isinstance(e, Call):
        return variables(e.arg)
    raise TypeError(f"not an expression node: {e!r}")


def to_text(e: Expr) -> str:
    """Fully parenthesized canonical form; parse(to_text(e)) evaluates like e."""
    if isinstance(e, Lit):
        if e.value < 0:
            return f"(-{format(-e.value, '.17g')})"
        return format(e.value, ".17g")
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Neg):
        return f"(-{to_text(e.arg)})"
    if isinstance(e, BinOp):
        return f"({to_text(e.left)} {e.op} {to_text(e.right)})"
    if isinstance(e, Pow):
        return f"({to_text(e.base)}^{e.exponent})"
    if isinstance(e, Call):
        return f"{e.fn}({to_text(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")
