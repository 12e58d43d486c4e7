"""Constraint language: named invariants over numeric/boolean expressions.

The language is the flat subset used on design cards: identifiers bound to
numeric parameters, arithmetic, comparisons, boolean connectives, and a
small set of functions (SIN COS TAN SQRT ABS MIN MAX). A constraint
definition has the shape ``context NAME inv : expression`` and its body
must be boolean.

Degree-mode trigonometry is evaluated through extended precision
(mpmath, 40 significant digits) and rounded back to a double, so that
representable angles like 30 or 90 degrees produce correctly rounded
results (sin 30 degrees is exactly 0.5). Radian mode uses libm directly.
All other arithmetic is plain IEEE double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Optional, Union

import mpmath

KEYWORDS = frozenset({"context", "inv", "and", "or", "not", "true", "false"})
FUNCTIONS = {"SIN": 1, "COS": 1, "TAN": 1, "SQRT": 1, "ABS": 1, "MIN": 2, "MAX": 2}

COMPARISON_OPS = frozenset({"=", "<>", "<", "<=", ">", ">="})
ADDITIVE_OPS = frozenset({"+", "-"})
MULTIPLICATIVE_OPS = frozenset({"*", "/"})

DEFAULT_REL_TOL = 1e-9
DEFAULT_ABS_TOL = 1e-12

_TRIG_DPS = 40


class OclError(Exception):
    """Base for all constraint-language errors; carries a machine code."""

    def __init__(self, code: str, message: str, offset: Optional[int] = None):
        super().__init__(message)
        self.code = code
        self.offset = offset


class LexError(OclError):
    def __init__(self, message: str, offset: int):
        super().__init__("LEX_ERROR", message, offset)


class ParseError(OclError):
    def __init__(self, message: str, offset: int, expected: frozenset[str] = frozenset()):
        super().__init__("PARSE_ERROR", message, offset)
        self.expected = expected


class TypeCheckError(OclError):
    """Static typing failure (NON_BOOLEAN_BODY or TYPE_MISMATCH)."""


class EvalError(OclError):
    """Runtime failure: UNBOUND_IDENT, DIV_BY_ZERO, TYPE_MISMATCH, DOMAIN_ERROR."""


class BindingsError(OclError):
    def __init__(self, message: str, line_no: int):
        super().__init__("BAD_BINDINGS", message)
        self.line_no = line_no


class TokenKind(Enum):
    IDENT = "IDENT"
    NUMBER = "NUMBER"
    OP = "OP"
    LPAREN = "LPAREN"
    RPAREN = "RPAREN"
    COMMA = "COMMA"
    KEYWORD = "KEYWORD"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    lexeme: str
    offset: int

    @property
    def end(self) -> int:
        return self.offset + len(self.lexeme)


# --- AST ------------------------------------------------------------------
#
# Spans are (start, end) character offsets into the source the node was
# parsed from; they are diagnostics only and excluded from equality.

Span = tuple[int, int]
_NO_SPAN: Span = (0, 0)


@dataclass(frozen=True)
class NumberLit:
    value: float
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class BoolLit:
    value: bool
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class Ident:
    name: str
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class Unary:
    op: str  # "neg" | "not"
    operand: "Expr"
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class Binary:
    op: str  # + - * / = <> < <= > >= and or
    left: "Expr"
    right: "Expr"
    span: Span = field(default=_NO_SPAN, compare=False)


@dataclass(frozen=True)
class Call:
    func: str  # canonical upper-case function name
    args: tuple["Expr", ...]
    span: Span = field(default=_NO_SPAN, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


Expr = Union[NumberLit, BoolLit, Ident, Unary, Binary, Call]


@dataclass(frozen=True)
class ConstraintDef:
    context_name: str
    body: Expr
    source_text: str = field(default="", compare=False)


@dataclass(frozen=True)
class Env:
    """Evaluation environment: numeric bindings plus the angle unit."""

    bindings: Mapping[str, float]
    angle_unit: str = "degrees"

    def __post_init__(self):
        if self.angle_unit not in ("degrees", "radians"):
            raise ValueError(f"angle_unit must be degrees or radians, got {self.angle_unit!r}")
        clean: dict[str, float] = {}
        for name, value in dict(self.bindings).items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ValueError(f"binding {name} must be numeric, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise ValueError(f"binding {name} must be finite, got {value!r}")
            clean[name] = value
        object.__setattr__(self, "bindings", clean)


@dataclass(frozen=True)
class CheckReport:
    holds: bool
    lhs_value: Optional[float] = None
    rhs_value: Optional[float] = None
    residual: Optional[float] = None
    violated_subterms: tuple[Span, ...] = ()


# --- Lexer ----------------------------------------------------------------

_IDENT_START = frozenset("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz_")
_IDENT_CONT = _IDENT_START | frozenset("0123456789")
_DIGITS = frozenset("0123456789")


def tokenize(source: str) -> list[Token]:
    """Lex source text into tokens; raises LexError with the bad offset."""

    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        start = i
        if ch in _IDENT_START:
            i += 1
            while i < n and source[i] in _IDENT_CONT:
                i += 1
            lexeme = source[start:i]
            kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENT
            tokens.append(Token(kind, lexeme, start))
        elif ch in _DIGITS:
            i += 1
            while i < n and source[i] in _DIGITS:
                i += 1
            if i < n and source[i] == ".":
                i += 1
                if i >= n or source[i] not in _DIGITS:
                    raise LexError("digit expected after decimal point", i)
                while i < n and source[i] in _DIGITS:
                    i += 1
            if i < n and source[i] in "eE":
                i += 1
                if i < n and source[i] in "+-":
                    i += 1
                if i >= n or source[i] not in _DIGITS:
                    raise LexError("digit expected in exponent", i)
                while i < n and source[i] in _DIGITS:
                    i += 1
            tokens.append(Token(TokenKind.NUMBER, source[start:i], start))
        elif ch == "(":
            tokens.append(Token(TokenKind.LPAREN, ch, start))
            i += 1
        elif ch == ")":
            tokens.append(Token(TokenKind.RPAREN, ch, start))
            i += 1
        elif ch == ",":
            tokens.append(Token(TokenKind.COMMA, ch, start))
            i += 1
        elif ch == "<":
            if i + 1 < n and source[i + 1] in ">=":
                tokens.append(Token(TokenKind.OP, source[i : i + 2], start))
                i += 2
            else:
                tokens.append(Token(TokenKind.OP, ch, start))
                i += 1
        elif ch == ">":
            if i + 1 < n and source[i + 1] == "=":
                tokens.append(Token(TokenKind.OP, ">=", start))
                i += 2
            else:
                tokens.append(Token(TokenKind.OP, ch, start))
                i += 1
        elif ch in "+-*/=:":
            tokens.append(Token(TokenKind.OP, ch, start))
            i += 1
        else:
            raise LexError(f"illegal character {ch!r}", start)
    return tokens


# --- Parser ---------------------------------------------------------------


class _Parser:
    def __init__(self, tokens: list[Token], source_len: int):
        self.tokens = tokens
        self.pos = 0
        self.source_len = source_len

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self.source_len)
        self.pos += 1
        return tok

    def error(self, expected: frozenset[str]) -> ParseError:
        tok = self.peek()
        if tok is None:
            return ParseError(
                f"unexpected end of input, expected one of {sorted(expected)}",
                self.source_len,
                expected,
            )
        return ParseError(
            f"unexpected {tok.lexeme!r}, expected one of {sorted(expected)}",
            tok.offset,
            expected,
        )

    def at_op(self, ops) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is TokenKind.OP and tok.lexeme in ops

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind is TokenKind.KEYWORD and tok.lexeme == word

    def expr(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        node = self.and_expr()
        while self.at_keyword("or"):
            self.advance()
            right = self.and_expr()
            node = Binary("or", node, right, (node.span[0], right.span[1]))
        return node

    def and_expr(self) -> Expr:
        node = self.not_expr()
        while self.at_keyword("and"):
            self.advance()
            right = self.not_expr()
            node = Binary("and", node, right, (node.span[0], right.span[1]))
        return node

    def not_expr(self) -> Expr:
        if self.at_keyword("not"):
            tok = self.advance()
            operand = self.not_expr()
            return Unary("not", operand, (tok.offset, operand.span[1]))
        return self.comparison()

    def comparison(self) -> Expr:
        node = self.additive()
        if self.at_op(COMPARISON_OPS):
            op = self.advance().lexeme
            right = self.additive()
            node = Binary(op, node, right, (node.span[0], right.span[1]))
            if self.at_op(COMPARISON_OPS):
                raise ParseError(
                    "comparison is non-associative; parenthesize",
                    self.peek().offset,
                    COMPARISON_OPS,
                )
        return node

    def additive(self) -> Expr:
        node = self.multiplicative()
        while self.at_op(ADDITIVE_OPS):
            op = self.advance().lexeme
            right = self.multiplicative()
            node = Binary(op, node, right, (node.span[0], right.span[1]))
        return node

    def multiplicative(self) -> Expr:
        node = self.unary()
        while self.at_op(MULTIPLICATIVE_OPS):
            op = self.advance().lexeme
            right = self.unary()
            node = Binary(op, node, right, (node.span[0], right.span[1]))
        return node

    def unary(self) -> Expr:
        if self.at_op({"-"}):
            tok = self.advance()
            operand = self.unary()
            return Unary("neg", operand, (tok.offset, operand.span[1]))
        return self.primary()

    def primary(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise self.error(frozenset({"number", "identifier", "("}))
        if tok.kind is TokenKind.NUMBER:
            self.advance()
            return NumberLit(float(tok.lexeme), (tok.offset, tok.end))
        if tok.kind is TokenKind.KEYWORD and tok.lexeme in ("true", "false"):
            self.advance()
            return BoolLit(tok.lexeme == "true", (tok.offset, tok.end))
        if tok.kind is TokenKind.IDENT:
            self.advance()
            nxt = self.peek()
            if nxt is not None and nxt.kind is TokenKind.LPAREN:
                return self.call(tok)
            return Ident(tok.lexeme, (tok.offset, tok.end))
        if tok.kind is TokenKind.LPAREN:
            self.advance()
            node = self.expr()
            close = self.peek()
            if close is None or close.kind is not TokenKind.RPAREN:
                raise self.error(frozenset({")"}))
            self.advance()
            return node
        raise self.error(frozenset({"number", "identifier", "("}))

    def call(self, name_tok: Token) -> Expr:
        func = name_tok.lexeme.upper()
        if func not in FUNCTIONS:
            raise ParseError(
                f"unknown function {name_tok.lexeme!r}",
                name_tok.offset,
                frozenset(FUNCTIONS),
            )
        self.advance()  # consume "("
        args = [self.expr()]
        while self.peek() is not None and self.peek().kind is TokenKind.COMMA:
            self.advance()
            args.append(self.expr())
        close = self.peek()
        if close is None or close.kind is not TokenKind.RPAREN:
            raise self.error(frozenset({")", ","}))
        self.advance()
        if len(args) != FUNCTIONS[func]:
            raise ParseError(
                f"{func} takes {FUNCTIONS[func]} argument(s), got {len(args)}",
                name_tok.offset,
            )
        return Call(func, tuple(args), (name_tok.offset, close.end))


def parse_expression(tokens: list[Token], source_len: Optional[int] = None) -> Expr:
    """Parse a token stream into an expression; trailing input is an error."""

    if source_len is None:
        source_len = tokens[-1].end if tokens else 0
    parser = _Parser(tokens, source_len)
    node = parser.expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing.lexeme!r}", trailing.offset)
    return node


def parse_expression_text(source: str) -> Expr:
    return parse_expression(tokenize(source), len(source))


def parse_constraint(source: str) -> ConstraintDef:
    """Parse ``context NAME inv : expr`` and type-check the body as boolean."""

    tokens = tokenize(source)
    parser = _Parser(tokens, len(source))
    if not parser.at_keyword("context"):
        raise parser.error(frozenset({"context"}))
    parser.advance()
    name_tok = parser.peek()
    if name_tok is None or name_tok.kind is not TokenKind.IDENT:
        raise parser.error(frozenset({"identifier"}))
    parser.advance()
    if not parser.at_keyword("inv"):
        raise parser.error(frozenset({"inv"}))
    parser.advance()
    if not parser.at_op({":"}):
        raise parser.error(frozenset({":"}))
    parser.advance()
    body = parser.expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(f"trailing input {trailing.lexeme!r}", trailing.offset)
    if static_type(body) is not bool:
        raise TypeCheckError(
            "NON_BOOLEAN_BODY",
            "constraint body must be a boolean expression",
            body.span[0],
        )
    return ConstraintDef(name_tok.lexeme, body, source)


# --- Static typing --------------------------------------------------------


def static_type(expr: Expr) -> type:
    """Static type of an expression: float or bool. Identifiers are numeric."""

    if isinstance(expr, NumberLit):
        return float
    if isinstance(expr, BoolLit):
        return bool
    if isinstance(expr, Ident):
        return float
    if isinstance(expr, Unary):
        want = float if expr.op == "neg" else bool
        _require(expr.operand, want)
        return want
    if isinstance(expr, Binary):
        op = expr.op
        if op in ADDITIVE_OPS or op in MULTIPLICATIVE_OPS:
            _require(expr.left, float)
            _require(expr.right, float)
            return float
        if op in ("and", "or"):
            _require(expr.left, bool)
            _require(expr.right, bool)
            return bool
        if op in ("<", "<=", ">", ">="):
            _require(expr.left, float)
            _require(expr.right, float)
            return bool
        # = and <> compare two values of the same type
        left = static_type(expr.left)
        right = static_type(expr.right)
        if left is not right:
            raise TypeCheckError(
                "TYPE_MISMATCH",
                f"cannot compare {left.__name__} with {right.__name__}",
                expr.span[0],
            )
        return bool
    if isinstance(expr, Call):
        for arg in expr.args:
            _require(arg, float)
        return float
    raise TypeCheckError("TYPE_MISMATCH", f"unknown node {expr!r}", None)


def _require(expr: Expr, want: type) -> None:
    got = static_type(expr)
    if got is not want:
        raise TypeCheckError(
            "TYPE_MISMATCH",
            f"expected {want.__name__} expression, got {got.__name__}",
            expr.span[0],
        )


# --- Evaluation -----------------------------------------------------------


def _sin_deg(x: float) -> float:
    with mpmath.workdps(_TRIG_DPS):
        return float(mpmath.sin(mpmath.mpf(x) * mpmath.pi / 180))


def _cos_deg(x: float) -> float:
    with mpmath.workdps(_TRIG_DPS):
        return float(mpmath.cos(mpmath.mpf(x) * mpmath.pi / 180))


def _tan_deg(x: float) -> float:
    with mpmath.workdps(_TRIG_DPS):
        return float(mpmath.tan(mpmath.mpf(x) * mpmath.pi / 180))


_TRIG = {
    ("SIN", "degrees"): _sin_deg,
    ("COS", "degrees"): _cos_deg,
    ("TAN", "degrees"): _tan_deg,
    ("SIN", "radians"): math.sin,
    ("COS", "radians"): math.cos,
    ("TAN", "radians"): math.tan,
}


def numeric_equal(a: float, b: float, rel_tol: float, abs_tol: float) -> bool:
    """Tolerant equality: |a-b| <= max(abs_tol, rel_tol*max(|a|,|b|))."""

    return abs(a - b) <= max(abs_tol, rel_tol * max(abs(a), abs(b)))


def _as_number(value, node: Expr) -> float:
    if isinstance(value, bool):
        raise EvalError("TYPE_MISMATCH", "expected a number, got a boolean", node.span[0])
    return value


def _as_bool(value, node: Expr) -> bool:
    if not isinstance(value, bool):
        raise EvalError("TYPE_MISMATCH", "expected a boolean, got a number", node.span[0])
    return value


def _check_finite(value: float, node: Expr) -> float:
    if not math.isfinite(value):
        raise EvalError("DOMAIN_ERROR", "result is not finite", node.span[0])
    return value


def evaluate(
    expr: Expr,
    env: Env,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
):
    """Evaluate an expression to a float or bool under the given environment.

    Numeric equality and inequality use the tolerant comparison shared with
    check_invariant; and/or short-circuit; numbers and booleans never mix.
    """

    if isinstance(expr, NumberLit):
        return expr.value
    if isinstance(expr, BoolLit):
        return expr.value
    if isinstance(expr, Ident):
        try:
            return env.bindings[expr.name]
        except KeyError:
            raise EvalError(
                "UNBOUND_IDENT", f"unbound identifier {expr.name!r}", expr.span[0]
            ) from None
    if isinstance(expr, Unary):
        if expr.op == "neg":
            return -_as_number(evaluate(expr.operand, env, rel_tol, abs_tol), expr.operand)
        return not _as_bool(evaluate(expr.operand, env, rel_tol, abs_tol), expr.operand)
    if isinstance(expr, Binary):
        return _eval_binary(expr, env, rel_tol, abs_tol)
    if isinstance(expr, Call):
        return _eval_call(expr, env, rel_tol, abs_tol)
    raise EvalError("TYPE_MISMATCH", f"cannot evaluate {expr!r}", None)


def _eval_binary(expr: Binary, env: Env, rel_tol: float, abs_tol: float):
    op = expr.op
    if op in ("and", "or"):
        left = _as_bool(evaluate(expr.left, env, rel_tol, abs_tol), expr.left)
        if op == "and" and not left:
            return False
        if op == "or" and left:
            return True
        return _as_bool(evaluate(expr.right, env, rel_tol, abs_tol), expr.right)

    left = evaluate(expr.left, env, rel_tol, abs_tol)
    right = evaluate(expr.right, env, rel_tol, abs_tol)

    if op in ("=", "<>"):
        if isinstance(left, bool) != isinstance(right, bool):
            raise EvalError(
                "TYPE_MISMATCH", "cannot compare a number with a boolean", expr.span[0]
            )
        if isinstance(left, bool):
            same = left == right
        else:
            same = numeric_equal(left, right, rel_tol, abs_tol)
        return same if op == "=" else not same

    a = _as_number(left, expr.left)
    b = _as_number(right, expr.right)
    if op == "+":
        return _check_finite(a + b, expr)
    if op == "-":
        return _check_finite(a - b, expr)
    if op == "*":
        return _check_finite(a * b, expr)
    if op == "/":
        if b == 0.0:
            raise EvalError("DIV_BY_ZERO", "division by zero", expr.span[0])
        return _check_finite(a / b, expr)
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    if op == ">=":
        return a >= b
    raise EvalError("TYPE_MISMATCH", f"unknown operator {op!r}", expr.span[0])


def _eval_call(expr: Call, env: Env, rel_tol: float, abs_tol: float) -> float:
    args = [
        _as_number(evaluate(a, env, rel_tol, abs_tol), a) for a in expr.args
    ]
    func = expr.func
    if func in ("SIN", "COS", "TAN"):
        return _check_finite(_TRIG[(func, env.angle_unit)](args[0]), expr)
    if func == "SQRT":
        if args[0] < 0:
            raise EvalError("DOMAIN_ERROR", "SQRT of a negative number", expr.span[0])
        return math.sqrt(args[0])
    if func == "ABS":
        return abs(args[0])
    if func == "MIN":
        return min(args)
    if func == "MAX":
        return max(args)
    raise EvalError("TYPE_MISMATCH", f"unknown function {func!r}", expr.span[0])


def check_invariant(
    constraint: ConstraintDef,
    env: Env,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> CheckReport:
    """Evaluate a constraint and report whether it holds.

    For a top-level equality the report carries both side values and the
    residual |lhs-rhs|; when the constraint fails, the spans of every false
    comparison subterm are collected for diagnostics.
    """

    if rel_tol < 0 or abs_tol < 0:
        raise ValueError("tolerances must be non-negative")
    body = constraint.body
    holds = evaluate(body, env, rel_tol, abs_tol)
    if not isinstance(holds, bool):
        raise EvalError("TYPE_MISMATCH", "constraint body must be boolean", body.span[0])

    lhs_value = rhs_value = residual = None
    if isinstance(body, Binary) and body.op == "=":
        lhs = evaluate(body.left, env, rel_tol, abs_tol)
        rhs = evaluate(body.right, env, rel_tol, abs_tol)
        if not isinstance(lhs, bool) and not isinstance(rhs, bool):
            lhs_value, rhs_value = lhs, rhs
            residual = abs(lhs - rhs)

    violated: list[Span] = []
    if not holds:
        _collect_violations(body, env, rel_tol, abs_tol, violated)
    return CheckReport(holds, lhs_value, rhs_value, residual, tuple(violated))


def _collect_violations(
    expr: Expr, env: Env, rel_tol: float, abs_tol: float, out: list[Span]
) -> None:
    if isinstance(expr, Binary):
        if expr.op in COMPARISON_OPS:
            try:
                if evaluate(expr, env, rel_tol, abs_tol) is False:
                    out.append(expr.span)
            except EvalError:
                pass
            return
        if expr.op in ("and", "or"):
            _collect_violations(expr.left, env, rel_tol, abs_tol, out)
            _collect_violations(expr.right, env, rel_tol, abs_tol, out)
            return
    if isinstance(expr, Unary) and expr.op == "not":
        # inside a negation the polarity flips; report the negation itself
        try:
            if evaluate(expr, env, rel_tol, abs_tol) is False:
                out.append(expr.span)
        except EvalError:
            pass


# --- Pretty printing ------------------------------------------------------

_LEVEL_OR = 1
_LEVEL_AND = 2
_LEVEL_NOT = 3
_LEVEL_CMP = 4
_LEVEL_ADD = 5
_LEVEL_MUL = 6
_LEVEL_NEG = 7
_LEVEL_ATOM = 8

_BINARY_LEVEL = {
    "or": _LEVEL_OR,
    "and": _LEVEL_AND,
    "=": _LEVEL_CMP,
    "<>": _LEVEL_CMP,
    "<": _LEVEL_CMP,
    "<=": _LEVEL_CMP,
    ">": _LEVEL_CMP,
    ">=": _LEVEL_CMP,
    "+": _LEVEL_ADD,
    "-": _LEVEL_ADD,
    "*": _LEVEL_MUL,
    "/": _LEVEL_MUL,
}


def _level(expr: Expr) -> int:
    if isinstance(expr, Binary):
        return _BINARY_LEVEL[expr.op]
    if isinstance(expr, Unary):
        return _LEVEL_NOT if expr.op == "not" else _LEVEL_NEG
    return _LEVEL_ATOM


def pretty_print(expr: Expr) -> str:
    """Render an expression with minimal parentheses; reparses to the same AST."""

    if isinstance(expr, NumberLit):
        text = repr(expr.value)
        return text[:-2] if text.endswith(".0") else text
    if isinstance(expr, BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, Ident):
        return expr.name
    if isinstance(expr, Unary):
        level = _level(expr)
        inner = _wrap(expr.operand, level)
        return f"not {inner}" if expr.op == "not" else f"-{inner}"
    if isinstance(expr, Binary):
        level = _level(expr)
        if expr.op in COMPARISON_OPS:
            # non-associative: parenthesize any comparison-or-looser child
            left = _wrap(expr.left, level + 1)
            right = _wrap(expr.right, level + 1)
        else:
            left = _wrap(expr.left, level)
            right = _wrap(expr.right, level + 1)
        return f"{left} {expr.op} {right}"
    if isinstance(expr, Call):
        return f"{expr.func}({', '.join(pretty_print(a) for a in expr.args)})"
    raise ValueError(f"cannot print {expr!r}")


def _wrap(expr: Expr, min_level: int) -> str:
    text = pretty_print(expr)
    if _level(expr) < min_level:
        return f"({text})"
    return text


# --- Bindings files -------------------------------------------------------


def parse_bindings(text: str) -> Env:
    """Parse a bindings file: ``name = value`` lines, # comments, and an
    optional ``angle_unit = degrees|radians`` line."""

    bindings: dict[str, float] = {}
    angle_unit = "degrees"
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise BindingsError(f"expected 'name = value': {raw!r}", line_no)
        name, _, value = line.partition("=")
        name = name.strip()
        value = value.strip()
        if name == "angle_unit":
            if value not in ("degrees", "radians"):
                raise BindingsError(f"angle_unit must be degrees or radians: {value!r}", line_no)
            angle_unit = value
            continue
        if not name or any(c not in _IDENT_CONT for c in name) or name[0] not in _IDENT_START:
            raise BindingsError(f"bad identifier {name!r}", line_no)
        try:
            number = float(value)
        except ValueError:
            raise BindingsError(f"bad numeric value {value!r}", line_no) from None
        if not math.isfinite(number):
            raise BindingsError(f"value must be finite: {value!r}", line_no)
        bindings[name] = number
    return Env(bindings, angle_unit)
