"""
Expression Parser

This module implements a recursive-descent parser for the expression language
documented in docs/dsl_grammar.md. Errors carry the line, the 0-based column
and the set of tokens that would have been accepted.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from vp_calculus.core.algebra.coeff import PiCoeff
from vp_calculus.core.errors import ParseError, SpecError
from vp_calculus.core.expr.affine import AffineExpr
from vp_calculus.core.expr.expr import DeferredIntegral, DistExpr, DistTerm, normalize
from vp_calculus.core.expr.factors import DeltaDeriv, Factor, HeavisideGuard, LogAbs, Smooth, VPPole
from vp_calculus.core.expr.testfn import BUILTIN_FUNCTIONS, NamedTestFn, PolynomialTestFn, TestFn, parse_polynomial

KEYWORDS = {"VP", "log", "delta", "theta", "int", "pi"}

_TOKEN_RE = re.compile(
    r"(?P<space>[ \t\r]+)|(?P<newline>\n)|(?P<number>\d+(?:\.\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<range>\.\.)|(?P<punct>[-+*/^()\[\]|,=])"
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(source: str) -> List[Token]:
    """
    Split source text into tokens, ending with an "end of input" token.

    Raises:
        ParseError: On a character that starts no token
    """
    tokens: List[Token] = []
    line, line_start, position = 1, 0, 0
    while position < len(source):
        match = _TOKEN_RE.match(source, position)
        if match is None:
            raise ParseError(
                f"Unexpected character {source[position]!r}", line, position - line_start, ()
            )
        kind = match.lastgroup
        if kind == "newline":
            line += 1
            line_start = match.end()
        elif kind != "space":
            text = match.group()
            if kind == "punct" or kind == "range":
                kind = text
            tokens.append(Token(kind, text, line, position - line_start))
        position = match.end()
    tokens.append(Token("end", "", line, position - line_start))
    return tokens


class Parser:
    """
    Recursive-descent parser producing DistExpr values.
    """

    def __init__(self, source: str, functions: Optional[Mapping[str, TestFn]] = None):
        self.source = source
        self.functions: Dict[str, TestFn] = {**BUILTIN_FUNCTIONS, **(functions or {})}
        self.tokens = tokenize(source)
        self.index = 0

    # token helpers

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _error(self, message: str, expected: Sequence[str]) -> ParseError:
        token = self.current
        found = "end of input" if token.kind == "end" else repr(token.text)
        return ParseError(f"{message}, found {found}", token.line, token.column, expected)

    def _check(self, kind: str, text: Optional[str] = None) -> bool:
        token = self.current
        return token.kind == kind and (text is None or token.text == text)

    def _accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        if self._check(kind, text):
            token = self.current
            self.index += 1
            return token
        return None

    def _expect(self, kind: str, text: Optional[str] = None) -> Token:
        token = self._accept(kind, text)
        if token is None:
            label = text or kind
            raise self._error(f"Expected {label!r}", [label])
        return token

    def _leading_sign(self) -> int:
        if self._accept("-"):
            return -1
        self._accept("+")
        return 1

    def _infix_sign(self) -> int:
        if self._accept("+"):
            return 1
        self._expect("-")
        return -1

    def _integer(self) -> int:
        token = self._expect("number")
        if "." in token.text:
            raise ParseError("Expected an integer", token.line, token.column, ["integer"])
        return int(token.text)

    def _rational(self) -> Fraction:
        value = Fraction(self._expect("number").text)
        if self._check("/") and self.tokens[self.index + 1].kind == "number":
            self._accept("/")
            denominator = Fraction(self._expect("number").text)
            if denominator == 0:
                raise self._error("Division by zero", ["nonzero number"])
            value /= denominator
        return value

    # grammar

    def parse(self) -> DistExpr:
        expr = self.expression()
        if not self._check("end"):
            raise self._error("Unexpected trailing input", ["+", "-", "*", "end of input"])
        return expr

    def expression(self) -> DistExpr:
        terms: List[DistTerm] = []
        sign = self._leading_sign()
        terms.append(self.term(sign))
        while self._check("+") or self._check("-"):
            sign = self._infix_sign()
            terms.append(self.term(sign))
        return DistExpr(tuple(terms))

    def term(self, sign: int) -> DistTerm:
        coeff = PiCoeff.rational(sign)
        factors: List[Factor] = []
        while True:
            item = self.item()
            if isinstance(item, PiCoeff):
                coeff = coeff * item
            else:
                factors.append(item)
            if not self._accept("*"):
                break
        return DistTerm(coeff, tuple(factors))

    def item(self):
        token = self.current
        if token.kind == "number":
            return PiCoeff.rational(self._rational())
        if token.kind == "(":
            return self.coeff_group()
        if token.kind == "ident":
            if token.text == "pi":
                return self.pi_power()
            if token.text == "VP":
                return self.pole()
            if token.text == "log":
                return self.log()
            if token.text == "delta":
                return self.delta()
            if token.text == "theta":
                return self.theta()
            if token.text == "int":
                return self.deferred()
            return self.smooth()
        raise self._error(
            "Expected a coefficient or factor",
            ["number", "pi", "(", "VP", "log", "delta", "theta", "int", "function name"],
        )

    def pi_power(self) -> PiCoeff:
        self._expect("ident", "pi")
        self._expect("^")
        token = self.current
        exponent = self._integer()
        if exponent % 2:
            raise ParseError("Only even powers of pi are allowed", token.line, token.column, ["even integer"])
        return PiCoeff.pi2(1, exponent // 2)

    def coeff_group(self) -> PiCoeff:
        self._expect("(")
        sign = self._leading_sign()
        total = self.coeff_atom() * PiCoeff.rational(sign)
        while self._check("+") or self._check("-"):
            sign = self._infix_sign()
            total = total + self.coeff_atom() * PiCoeff.rational(sign)
        self._expect(")")
        return total

    def coeff_atom(self) -> PiCoeff:
        if self._check("ident", "pi"):
            return self.pi_power()
        if not self._check("number"):
            raise self._error("Expected a coefficient", ["number", "pi"])
        value = PiCoeff.rational(self._rational())
        if self._check("*") and self.tokens[self.index + 1].text == "pi":
            self._accept("*")
            value = value * self.pi_power()
        return value

    def pole(self) -> VPPole:
        self._expect("ident", "VP")
        self._expect("[")
        one = self._expect("number")
        if one.text != "1":
            raise ParseError("Expected '1'", one.line, one.column, ["1"])
        self._expect("/")
        self._expect("(")
        arg = self.affine()
        self._expect(")")
        degree = 1
        if self._accept("^"):
            degree = self._integer()
            if degree < 1:
                raise self._error("Pole degree must be positive", ["positive integer"])
        self._expect("]")
        return VPPole(arg, degree)

    def _order_suffix(self) -> int:
        if not self._accept("^"):
            return 0
        self._expect("(")
        order = self._integer()
        self._expect(")")
        return order

    def log(self) -> LogAbs:
        self._expect("ident", "log")
        order = self._order_suffix()
        self._expect("|")
        arg = self.affine()
        self._expect("|")
        return LogAbs(arg, order)

    def delta(self) -> DeltaDeriv:
        self._expect("ident", "delta")
        order = self._order_suffix()
        self._expect("(")
        arg = self.affine()
        self._expect(")")
        return DeltaDeriv(arg, order)

    def theta(self) -> HeavisideGuard:
        self._expect("ident", "theta")
        self._expect("(")
        arg = self.affine()
        self._expect(")")
        return HeavisideGuard(arg)

    def deferred(self) -> DeferredIntegral:
        self._expect("ident", "int")
        self._expect("[")
        var = self._expect("ident").text
        self._expect("=")
        lower = self.affine()
        self._expect("..")
        upper = self.affine()
        self._expect("]")
        self._expect("(")
        body = self.expression()
        self._expect(")")
        return DeferredIntegral(var, lower, upper, body)

    def smooth(self) -> Smooth:
        name_token = self._expect("ident")
        name = name_token.text
        if name in KEYWORDS:
            raise ParseError(f"Reserved name {name!r}", name_token.line, name_token.column, ["function name"])
        orders: Tuple[int, ...] = ()
        if self._accept("^"):
            self._expect("(")
            values = [self._integer()]
            while self._accept(","):
                values.append(self._integer())
            self._expect(")")
            orders = tuple(values)
        self._expect("(")
        args = [self.affine()]
        while self._accept(","):
            args.append(self.affine())
        self._expect(")")

        fn = self.functions.get(name)
        if fn is None:
            fn = NamedTestFn(name, len(args))
        if fn.arity != len(args):
            raise ParseError(
                f"{name} takes {fn.arity} arguments, got {len(args)}",
                name_token.line,
                name_token.column,
                (),
            )
        if orders and len(orders) != len(args):
            raise ParseError("Derivative orders do not match the arguments", name_token.line,
                             name_token.column, ())
        return Smooth(fn, tuple(args), orders)

    def affine(self) -> AffineExpr:
        sign = self._leading_sign()
        total = self.affine_term().scale(sign)
        while self._check("+") or self._check("-"):
            sign = self._infix_sign()
            total = total + self.affine_term().scale(sign)
        return total

    def affine_term(self) -> AffineExpr:
        if self._check("number"):
            value = self._rational()
            if self._accept("*"):
                name = self._variable()
                return AffineExpr.build(0, {name: value})
            return AffineExpr.const(value)
        if self._check("ident"):
            name = self._variable()
            if self._accept("/"):
                divisor = Fraction(self._expect("number").text)
                if divisor == 0:
                    raise self._error("Division by zero", ["nonzero number"])
                return AffineExpr.build(0, {name: 1 / divisor})
            return AffineExpr.var(name)
        raise self._error("Expected a number or variable", ["number", "variable"])

    def _variable(self) -> str:
        token = self._expect("ident")
        if token.text in KEYWORDS:
            raise ParseError(f"Reserved name {token.text!r}", token.line, token.column, ["variable"])
        return token.text


def parse_expr(src: str, functions: Optional[Mapping[str, TestFn]] = None, normalized: bool = True) -> DistExpr:
    """
    Parse expression-language text into a DistExpr.

    Args:
        src (str): Source text
        functions (Mapping[str, TestFn], optional): Test functions by name;
            unknown names become unbound placeholders
        normalized (bool): Return the normalized expression

    Returns:
        DistExpr: The parsed expression

    Raises:
        ParseError: On a syntax error
    """
    if not src or not src.strip():
        raise ParseError("Empty expression", 1, 0, ["expression"])
    expr = Parser(src, functions).parse()
    return normalize(expr) if normalized else expr


def parse_affine(src: str) -> AffineExpr:
    """
    Parse a single affine expression such as ``2 + z - x``.

    Raises:
        ParseError: On a syntax error
    """
    parser = Parser(src)
    result = parser.affine()
    if not parser._check("end"):
        raise parser._error("Unexpected trailing input", ["+", "-", "end of input"])
    return result


_DEFINITION_RE = re.compile(r"^\s*(?P<name>[A-Za-z_]\w*)\s*\((?P<args>[^)]*)\)\s*=\s*(?P<body>.+)$")


def parse_function_definition(text: str) -> Tuple[str, PolynomialTestFn]:
    """
    Parse a polynomial test-function definition such as ``u(x, z) = 1 + x*z^2``.

    Args:
        text (str): The definition

    Returns:
        tuple: (name, polynomial with the listed arguments in order)

    Raises:
        SpecError: If the definition is malformed
    """
    match = _DEFINITION_RE.match(text)
    if not match:
        raise SpecError(f"Expected NAME(ARGS)=POLYNOMIAL, got {text!r}")
    name = match.group("name")
    if name in KEYWORDS:
        raise SpecError(f"Reserved name {name!r}")
    args = [arg.strip() for arg in match.group("args").split(",") if arg.strip()]
    if not args:
        raise SpecError(f"Function {name} needs at least one argument")
    try:
        return name, parse_polynomial(match.group("body"), args, name=name)
    except ValueError as exc:
        raise SpecError(str(exc)) from exc
