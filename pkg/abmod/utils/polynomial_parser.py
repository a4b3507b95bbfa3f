"""Polynomial text to ring elements.

Grammar (no implicit multiplication):

    expr   := ("+" | "-")? term (("+" | "-") term)*
    term   := power ("*" power)*
    power  := atom ("^" INTEGER)?
    atom   := INTEGER | IDENTIFIER | "(" expr ")"

The parameter identifier maps to the generator of K = Q(parameter).
"""

import re
from dataclasses import dataclass

from abmod.core.errors import FamilyParseError
from abmod.core.exact_algebra import parameter_generator, parameter_name

TOKEN_PATTERN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text, line=1, column_offset=0):
    """
    Split an expression into tokens.

    Args:
        text (str): The expression
        line (int): Line number reported in errors
        column_offset (int): Column of the first character minus one

    Returns:
        list: Token objects, terminated by an "end" token
    """
    tokens = []
    position = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        if match is None or match.end() == position:
            break
        number, name, symbol = match.groups()
        column = match.start(match.lastindex) + 1 + column_offset
        if number is not None:
            tokens.append(Token("int", number, line, column))
        elif name is not None:
            tokens.append(Token("name", name, line, column))
        elif symbol in "+-*^()":
            tokens.append(Token(symbol, symbol, line, column))
        else:
            raise FamilyParseError(f"unexpected character '{symbol}'", line, column)
        position = match.end()
    tokens.append(Token("end", "", line, len(text.rstrip()) + 1 + column_offset))
    return tokens


class PolynomialParser:
    """Recursive descent over the token list, evaluating directly in the ring."""

    def __init__(self, poly_ring, line=1, column_offset=0):
        self.ring = poly_ring
        self.line = line
        self.column_offset = column_offset
        self.names = {str(symbol): gen for symbol, gen in zip(poly_ring.symbols, poly_ring.gens)}
        self.names[parameter_name(poly_ring)] = poly_ring.ground_new(parameter_generator(poly_ring))
        self.tokens = []
        self.index = 0

    def parse(self, text):
        self.tokens = tokenize(text, self.line, self.column_offset)
        self.index = 0
        if self._peek().kind == "end":
            self._fail("empty expression", self._peek())
        value = self._expr()
        token = self._peek()
        if token.kind != "end":
            self._fail(f"unexpected '{token.text}'", token)
        return value

    def _peek(self):
        return self.tokens[self.index]

    def _advance(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _fail(self, message, token):
        raise FamilyParseError(message, token.line, token.column)

    def _expr(self):
        sign = None
        if self._peek().kind in ("+", "-"):
            sign = self._advance().kind
        value = self._term()
        if sign == "-":
            value = -value
        while self._peek().kind in ("+", "-"):
            op = self._advance().kind
            rhs = self._term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def _term(self):
        value = self._power()
        while self._peek().kind == "*":
            self._advance()
            value = value * self._power()
        return value

    def _power(self):
        value = self._atom()
        if self._peek().kind == "^":
            self._advance()
            exponent = self._peek()
            if exponent.kind != "int":
                self._fail("exponent must be a non-negative integer literal", exponent)
            self._advance()
            value = value ** int(exponent.text)
        return value

    def _atom(self):
        token = self._advance()
        if token.kind == "int":
            return self.ring(int(token.text))
        if token.kind == "name":
            if token.text not in self.names:
                self._fail(f"unknown identifier '{token.text}'", token)
            return self.names[token.text]
        if token.kind == "(":
            value = self._expr()
            closing = self._advance()
            if closing.kind != ")":
                self._fail("expected ')'", closing)
            return value
        if token.kind == "end":
            self._fail("unexpected end of expression", token)
        self._fail(f"unexpected '{token.text}'", token)


def parse_polynomial(text, poly_ring, line=1, column_offset=0):
    """
    Parse ``text`` into an element of ``poly_ring``.

    Raises:
        FamilyParseError: with the line and column of the offending token
    """
    return PolynomialParser(poly_ring, line, column_offset).parse(text)
