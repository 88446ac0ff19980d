"""Parser for polynomial germ and family expressions.

Grammar (whitespace is ignored):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-') factor | base ('^' uint)?
    base   := number | symbol | '(' expr ')'

Numbers are integer or decimal literals and stay exact. Symbols are the
variables k1..k9 and the parameters l1..l9. Divisors must be constant and
juxtaposition ("2k1") is rejected.
"""

import argparse
import re
from dataclasses import dataclass
from fractions import Fraction

import sympy

from germlab.models.errors import ExpressionSyntaxError, UnknownSymbol

SYMBOL_PATTERN = re.compile(r"[kl][1-9]")
_TOKEN = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d*)?|\.\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>\*\*|[-+*/^()]))"
)


@dataclass(frozen=True)
class Number:
    value: Fraction


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


def _decimal_text(value):
    """Exact decimal spelling of a terminating fraction."""
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        # not produced by the parser, only by hand-built trees
        return f"({value.numerator}/{value.denominator})"
    places = max(twos, fives)
    digits = str(value.numerator * 10**places // value.denominator).rjust(places + 1, "0")
    return f"{digits[:-places]}.{digits[-places:]}"


def _text(node, context=0):
    if isinstance(node, Number):
        return _decimal_text(node.value)
    if isinstance(node, Symbol):
        return node.name
    if isinstance(node, Pow):
        base = node.base
        inner = _text(base) if isinstance(base, (Number, Symbol)) else f"({_text(base)})"
        if isinstance(base, Number) and base.value.denominator != 1:
            inner = f"({_text(base)})"
        return f"{inner}^{node.exponent}"
    if isinstance(node, Neg):
        text = "-" + _text(node.operand, 3)
        return f"({text})" if context > 3 else text
    precedence = _PRECEDENCE[node.op]
    left = _text(node.left, precedence)
    right = _text(node.right, precedence + 1)
    text = f"{left} {node.op} {right}" if precedence == 1 else f"{left}*{right}"
    if node.op == "/":
        text = f"{left}/{right}"
    return f"({text})" if context > precedence else text


def _symbols(node, prefix):
    if isinstance(node, Symbol):
        return {node.name} if node.name.startswith(prefix) else set()
    if isinstance(node, Number):
        return set()
    if isinstance(node, (Neg,)):
        return _symbols(node.operand, prefix)
    if isinstance(node, Pow):
        return _symbols(node.base, prefix)
    return _symbols(node.left, prefix) | _symbols(node.right, prefix)


def _sympy(node):
    if isinstance(node, Number):
        return sympy.Rational(node.value.numerator, node.value.denominator)
    if isinstance(node, Symbol):
        return sympy.Symbol(node.name)
    if isinstance(node, Neg):
        return -_sympy(node.operand)
    if isinstance(node, Pow):
        return _sympy(node.base) ** node.exponent
    left, right = _sympy(node.left), _sympy(node.right)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


@dataclass(frozen=True)
class ExprAst:
    """Parsed expression tree."""

    root: object
    source: str = ""

    def __eq__(self, other):
        return isinstance(other, ExprAst) and self.root == other.root

    def __hash__(self):
        return hash(self.root)

    def to_text(self):
        """Canonical text; parsing it again gives the same tree."""
        return _text(self.root)

    def to_sympy(self):
        return _sympy(self.root)

    @property
    def variables(self):
        return sorted(_symbols(self.root, "k"))

    @property
    def parameters(self):
        return sorted(_symbols(self.root, "l"))

    @property
    def nu(self):
        """Largest variable index used (k3 alone means ν = 3)."""
        names = self.variables
        return max((int(n[1:]) for n in names), default=0)

    @property
    def nparams(self):
        names = self.parameters
        return max((int(n[1:]) for n in names), default=0)

    def __str__(self):
        return self.to_text()


class _Parser:
    def __init__(self, text) -> None:
        self.text = text
        self.tokens = self._tokenize(text)
        self.position = 0

    def _offset(self, index):
        return len(self.text[:index].encode("utf-8"))

    def _tokenize(self, text):
        tokens = []
        index = 0
        while index < len(text):
            if text[index].isspace():
                index += 1
                continue
            match = _TOKEN.match(text, index)
            if match is None or match.end() == index:
                raise ExpressionSyntaxError(
                    f"unexpected character {text[index]!r}", self._offset(index)
                )
            kind = match.lastgroup
            value = match.group(kind)
            start = match.start(kind)
            if kind == "op" and value == "**":
                value = "^"
            tokens.append((kind, value, start))
            index = match.end()
        tokens.append(("end", "", len(text)))
        return tokens

    def peek(self):
        return self.tokens[self.position]

    def advance(self):
        token = self.tokens[self.position]
        self.position += 1
        return token

    def error(self, message, token=None):
        token = token or self.peek()
        return ExpressionSyntaxError(message, self._offset(token[2]))

    def expect(self, value):
        token = self.peek()
        if token[0] != "op" or token[1] != value:
            found = "end of input" if token[0] == "end" else repr(token[1])
            raise self.error(f"expected {value!r}, found {found}")
        return self.advance()

    def parse(self):
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        node = self.expr()
        token = self.peek()
        if token[0] != "end":
            if token[0] in ("number", "name") or token[1] == "(":
                raise self.error("implicit multiplication is not allowed; use '*'")
            raise self.error(f"unexpected {token[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.advance()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in ("*", "/"):
            op_token = self.advance()
            right = self.factor()
            if op_token[1] == "/":
                if _symbols(right, "k") or _symbols(right, "l"):
                    raise self.error("division by a non-constant expression", op_token)
                if _sympy(right) == 0:
                    raise self.error("division by zero", op_token)
            node = BinOp(op_token[1], node, right)
        return node

    def factor(self):
        token = self.peek()
        if token[0] == "op" and token[1] in "+-":
            self.advance()
            operand = self.factor()
            return Neg(operand) if token[1] == "-" else operand
        node = self.base()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            exponent = self.peek()
            if exponent[0] != "number" or not exponent[1].isdigit():
                raise self.error("exponents must be non-negative integer literals")
            self.advance()
            node = Pow(node, int(exponent[1]))
            if self.peek()[0] == "op" and self.peek()[1] == "^":
                raise self.error("chained exponents need parentheses")
        return node

    def base(self):
        token = self.advance()
        kind, value, _ = token
        if kind == "number":
            return Number(Fraction(value))
        if kind == "name":
            if not SYMBOL_PATTERN.fullmatch(value):
                raise UnknownSymbol(
                    f"unknown symbol {value!r} (use k1..k9 and l1..l9)",
                    self._offset(token[2]),
                )
            return Symbol(value)
        if kind == "op" and value == "(":
            node = self.expr()
            self.expect(")")
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise self.error(f"expected a number, symbol or '(', found {found}", token)


def parse_expression(text):
    """Parse expression text into an ExprAst."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return ExprAst(_Parser(text).parse(), text)


def expression_arg(text):
    """argparse type for --expr."""
    try:
        return parse_expression(text)
    except ExpressionSyntaxError as e:
        raise argparse.ArgumentTypeError(str(e)) from None
