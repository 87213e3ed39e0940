"""Surface syntax for MPLang expressions.

Grammar (whitespace-insensitive)::

    bexpr  := bterm ('|' bterm)*
    bterm  := bunary ('&' bunary)*
    bunary := '!' bunary | cmp
    cmp    := expr (('>'|'<'|'>='|'<='|'='|'!=') expr)?
    expr   := '-'? term (('+'|'-') term)*
    term   := rational ('*')? factor | rational | factor
    factor := '1' | 'P' int | colour | 'D' factor | act '(' bexpr ')' | '(' bexpr ')'

``- t`` folds into the explicit coefficient of ``t`` when it has one
(``- 3/2 P2`` is ``Scale(-3/2, P2)``) and is ``Scale(-1, t)`` otherwise.
The Boolean layer produces sugar nodes; plain arithmetic never does.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import activation as _act
from .errors import ParseError
from .expr import (
    ONE, Add, And, Apply, Compare, Diamond, Expr, Feature, Not, One, Or, Scale, Sugar,
)
from .scalar import format_scalar

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<float>\d+\.\d+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>>=|<=|!=|[-+*/()|&!<>=,·])
""", re.VERBOSE)

_FEATURE_RE = re.compile(r"^P(\d+)$")


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            chunk = m.group()
            if "\n" in chunk:
                line += chunk.count("\n")
                line_start = pos + chunk.rfind("\n") + 1
        else:
            tok = m.group()
            if tok == "·":
                tok = "*"
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def peek(self) -> Token:
        return self.tokens[self.i]

    def peek_at(self, k: int) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def at(self, *texts: str) -> bool:
        tok = self.peek
        return tok.kind in ("op", "ident") and tok.text in texts

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text or tok.kind not in ("op", "ident"):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}", tok)
        return tok

    def error(self, message: str, tok: Optional[Token] = None):
        tok = tok or self.peek
        raise ParseError(message, tok.line, tok.col)

    def rational(self):
        """Parse ``int ('/' int)?`` or a decimal; the current token must be a number."""
        tok = self.next()
        if tok.kind == "float":
            return float(tok.text)
        value = int(tok.text)
        if self.at("/"):
            self.next()
            den = self.next()
            if den.kind != "int":
                self.error("malformed rational literal: expected a denominator", den)
            if int(den.text) == 0:
                self.error("malformed rational literal: zero denominator", den)
            return Fraction(value, int(den.text))
        return Fraction(value)

    def signed_rational(self):
        neg = False
        if self.at("-"):
            self.next()
            neg = True
        if self.peek.kind not in ("int", "float"):
            self.error("expected a number")
        q = self.rational()
        return -q if neg else q


class _ExprParser:
    def __init__(self, text, colours, catalogue):
        self.ts = TokenStream(text)
        if colours is None:
            self.colours = {}
        elif isinstance(colours, Mapping):
            self.colours = dict(colours)
        else:
            self.colours = {name: i + 1 for i, name in enumerate(colours)}
        self.catalogue = catalogue

    def parse(self) -> Expr:
        e = self.bexpr()
        if self.ts.peek.kind != "eof":
            self.ts.error(f"unexpected {self.ts.peek.text!r}")
        return e

    def bexpr(self):
        e = self.bterm()
        while self.ts.at("|"):
            self.ts.next()
            e = Or(e, self.bterm())
        return e

    def bterm(self):
        e = self.bunary()
        while self.ts.at("&"):
            self.ts.next()
            e = And(e, self.bunary())
        return e

    def bunary(self):
        if self.ts.at("!"):
            self.ts.next()
            return Not(self.bunary())
        left = self.expr()
        if self.ts.at(">", "<", ">=", "<=", "=", "!="):
            op = self.ts.next().text
            return Compare(op, left, self.expr())
        return left

    def expr(self):
        if self.ts.at("-"):
            self.ts.next()
            e = self.term(negate=True)
        else:
            e = self.term()
        while self.ts.at("+", "-"):
            negate = self.ts.next().text == "-"
            e = Add(e, self.term(negate=negate))
        return e

    def _starts_factor(self) -> bool:
        tok = self.ts.peek
        if tok.kind == "int":
            return tok.text == "1"
        return tok.kind == "ident" or (tok.kind == "op" and tok.text == "(")

    def term(self, negate: bool = False):
        tok = self.ts.peek
        if tok.kind in ("int", "float"):
            explicit_fraction = self.ts.peek_at(1).text == "/" or tok.kind == "float"
            if tok.kind == "int" and tok.text == "1" and not explicit_fraction \
                    and not self.ts.peek_at(1).text == "*" and not self._factor_after_one():
                self.ts.next()
                return Scale(Fraction(-1), ONE) if negate else ONE
            q = self.ts.rational()
            if self.ts.at("*"):
                self.ts.next()
                body = self.factor()
            elif self._starts_factor():
                body = self.factor()
            else:
                body = ONE
            return Scale(-q if negate else q, body)
        body = self.factor()
        return Scale(Fraction(-1), body) if negate else body

    def _factor_after_one(self) -> bool:
        nxt = self.ts.peek_at(1)
        if nxt.kind == "int":
            return nxt.text == "1"
        return nxt.kind == "ident" or (nxt.kind == "op" and nxt.text == "(")

    def factor(self):
        tok = self.ts.peek
        if tok.kind == "int":
            if tok.text != "1":
                self.ts.error(f"unexpected number {tok.text!r}; only 1 is an atom")
            self.ts.next()
            return ONE
        if tok.kind == "op" and tok.text == "(":
            self.ts.next()
            e = self.bexpr()
            self.ts.expect(")")
            return e
        if tok.kind != "ident":
            self.ts.error(f"unexpected {tok.text or 'end of input'!r}")
        self.ts.next()
        name = tok.text
        if name == "D":
            return Diamond(self.factor())
        m = _FEATURE_RE.match(name)
        if m:
            if int(m.group(1)) < 1:
                self.ts.error("feature indices start at 1", tok)
            return Feature(int(m.group(1)))
        if self.ts.at("("):
            act = _act.lookup(name, self.catalogue)
            self.ts.next()
            body = self.bexpr()
            self.ts.expect(")")
            return Apply(act, body)
        if name in self.colours:
            return Feature(self.colours[name])
        self.ts.error(f"unknown identifier {name!r}", tok)


def parse(text: str, colours=None, catalogue: Optional[Mapping[str, _act.Activation]] = None) -> Expr:
    """Parse an expression; ``colours`` maps names (or a name list, 1-based) to feature indices."""
    return _ExprParser(text, colours, catalogue).parse()


# printing -----------------------------------------------------------------

def to_text(e: Expr, colours: Optional[Sequence[str]] = None) -> str:
    """Canonical text; ``parse(to_text(e)) == e`` for every sugar-free or sugared AST."""
    names = {i + 1: n for i, n in enumerate(colours)} if colours else {}
    return _Printer(names).bexpr(e)


class _Printer:
    def __init__(self, names):
        self.names = names

    def bexpr(self, e):
        if isinstance(e, Or):
            right = self.bterm(e.right) if not isinstance(e.right, Or) else f"({self.bexpr(e.right)})"
            return f"{self.bexpr(e.left)} | {right}"
        return self.bterm(e)

    def bterm(self, e):
        if isinstance(e, And):
            left = self.bterm(e.left) if not isinstance(e.left, Or) else f"({self.bexpr(e.left)})"
            right = self.bunary(e.right)
            return f"{left} & {right}"
        if isinstance(e, Or):
            return f"({self.bexpr(e)})"
        return self.bunary(e)

    def bunary(self, e):
        if isinstance(e, Not):
            if isinstance(e.body, (And, Or)):
                return f"!({self.bexpr(e.body)})"
            return "!" + self.bunary(e.body)
        if isinstance(e, (And, Or)):
            return f"({self.bexpr(e)})"
        if isinstance(e, Compare):
            return f"{self.operand(e.left)} {e.op} {self.operand(e.right)}"
        return self.expr(e)

    def operand(self, e):
        return f"({self.bexpr(e)})" if isinstance(e, Sugar) else self.expr(e)

    def expr(self, e):
        spine = []
        while isinstance(e, Add):
            spine.append(e.right)
            e = e.left
        spine.append(e)
        spine.reverse()
        parts = []
        for k, t in enumerate(spine):
            neg, body = self.term(t)
            if k == 0:
                parts.append(("-" + body) if neg else body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def term(self, e):
        """Return (negative?, text without sign)."""
        if isinstance(e, Scale):
            c = e.coeff
            if isinstance(c, float):
                neg = c < 0
                return neg, f"{abs(c)!r}*{self.factor(e.body)}"
            neg = c < 0
            a = -c if neg else c
            if neg and a == 1:
                return True, self.factor(e.body)
            if isinstance(e.body, One) and a not in (0, 1):
                return neg, format_scalar(a)
            return neg, f"{format_scalar(a)}*{self.factor(e.body)}"
        if isinstance(e, Sugar):
            return False, f"({self.bexpr(e)})"
        return False, self.factor(e)

    def factor(self, e):
        if isinstance(e, One):
            return "1"
        if isinstance(e, Feature):
            return self.names.get(e.index, f"P{e.index}")
        if isinstance(e, Diamond):
            return "D " + self.factor(e.body)
        if isinstance(e, Apply):
            return f"{e.act.name}({self.bexpr(e.body)})"
        return f"({self.bexpr(e)})"
