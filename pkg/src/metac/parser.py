"""Reader and printer for ground metric logic programs (``.mlp`` files).

Every rule is implicitly under an always operator. Grammar::

    program := rule*
    rule    := head ":-" body "." | head "." | ":-" body "."
    head    := hlit (";" hlit)* | "next" "(" "(" nat "," (nat | "w") ")" "," atom ")"
    hlit    := atom | "not" atom
    body    := blit ("," blit)*
    blit    := ["not"] (atom | "initially" | "finally")
    atom    := ident ["(" term ("," term)* ")"]     term := ident | nat

``%`` starts a comment running to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .core import (
    FINAL,
    INITIAL,
    AtomName,
    Disjunction,
    Interval,
    Literal,
    MetricNext,
    MetricProgram,
    MetricRule,
)

KEYWORDS = {"not", "next", "initially", "finally"}
RESERVED_PREDICATES = {"o", "t"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>%[^\n]*)
  | (?P<if>:-)
  | (?P<nat>[0-9]+)
  | (?P<ident>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<punct>[(),.;|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    severity: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity}: {self.message}"


class ParseError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(map(str, self.diagnostics)))


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    line: int
    column: int


def _tokenize(source: str) -> list[_Token]:
    tokens = []
    line, line_start, offset = 1, 0, 0
    while offset < len(source):
        m = _TOKEN_RE.match(source, offset)
        column = offset - line_start + 1
        if m is None:
            raise ParseError([ParseDiagnostic(line, column, "error", f"unexpected character {source[offset]!r}")])
        kind = m.lastgroup
        text = m.group()
        if kind == "var":
            raise ParseError(
                [ParseDiagnostic(line, column, "error", f"variable {text!r} not allowed: input must be ground")]
            )
        if kind == "punct" and text == "|":
            raise ParseError(
                [ParseDiagnostic(line, column, "error", "'|' is not a disjunction separator, use ';'")]
            )
        if kind not in ("ws", "comment"):
            tokens.append(_Token(text if kind == "punct" else kind, text, line, column))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = offset + text.rindex("\n") + 1
        offset = m.end()
    tokens.append(_Token("eof", "", line, offset - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.pos = 0
        self.warnings: list[ParseDiagnostic] = []

    @property
    def tok(self) -> _Token:
        return self.tokens[self.pos]

    def error(self, message: str, tok: Optional[_Token] = None):
        tok = tok or self.tok
        raise ParseError([ParseDiagnostic(tok.line, tok.column, "error", message)])

    def expect(self, kind: str) -> _Token:
        tok = self.tok
        if tok.kind != kind:
            found = tok.text or "end of input"
            self.error(f"expected {kind!r}, found {found!r}")
        self.pos += 1
        return tok

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[_Token]:
        tok = self.tok
        if tok.kind == kind and (text is None or tok.text == text):
            self.pos += 1
            return tok
        return None

    def at_keyword(self, word: str) -> bool:
        return self.tok.kind == "ident" and self.tok.text == word

    def program(self) -> MetricProgram:
        rules = []
        while self.tok.kind != "eof":
            rules.append(self.rule())
        return MetricProgram(tuple(rules))

    def rule(self) -> MetricRule:
        if self.accept("if"):
            body = self.body()
            self.expect(".")
            return MetricRule(Disjunction(()), body)
        head = self.head()
        body = ()
        if self.accept("if"):
            body = self.body()
        self.expect(".")
        return MetricRule(head, body)

    def head(self):
        if self.at_keyword("next") and self.tokens[self.pos + 1].kind == "(":
            return self.next_head()
        literals = [self.head_literal()]
        while self.accept(";"):
            literals.append(self.head_literal())
        return Disjunction(tuple(literals))

    def next_head(self) -> MetricNext:
        start = self.expect("ident")
        self.expect("(")
        self.expect("(")
        lower = int(self.expect("nat").text)
        self.expect(",")
        if self.accept("ident", "w"):
            upper = None
        else:
            upper = int(self.expect("nat").text)
        self.expect(")")
        self.expect(",")
        head_atom = self.atom()
        self.expect(")")
        interval = Interval(lower, upper)
        if interval.is_empty():
            self.warnings.append(
                ParseDiagnostic(start.line, start.column, "warning", f"empty interval {interval}: rule body can never fire")
            )
        return MetricNext(interval, head_atom)

    def head_literal(self) -> Literal:
        negated = self.accept("ident", "not") is not None
        return Literal(self.atom(), negated)

    def body(self) -> tuple:
        literals = [self.body_literal()]
        while self.accept(","):
            literals.append(self.body_literal())
        return tuple(literals)

    def body_literal(self) -> Literal:
        negated = self.accept("ident", "not") is not None
        if self.accept("ident", "initially"):
            return Literal(INITIAL, negated)
        if self.accept("ident", "finally"):
            return Literal(FINAL, negated)
        return Literal(self.atom(), negated)

    def atom(self) -> AtomName:
        tok = self.tok
        if tok.kind != "ident":
            self.error(f"expected atom, found {tok.text or 'end of input'!r}")
        if tok.text in KEYWORDS:
            self.error(f"keyword {tok.text!r} cannot be used as a predicate")
        if tok.text in RESERVED_PREDICATES:
            self.error(f"predicate name {tok.text!r} is reserved for emitted programs")
        self.pos += 1
        args = []
        if self.accept("("):
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
            self.expect(")")
        return AtomName(tok.text, tuple(args))

    def term(self) -> str:
        tok = self.tok
        if tok.kind in ("ident", "nat"):
            self.pos += 1
            return tok.text
        self.error(f"expected term, found {tok.text or 'end of input'!r}")


def parse_program(source: str, diagnostics: Optional[list] = None) -> MetricProgram:
    """Parse ``source``; raises :class:`ParseError` on the first error.

    Warnings are appended to ``diagnostics`` when a list is supplied.
    """
    parser = _Parser(source)
    program = parser.program()
    if diagnostics is not None:
        diagnostics.extend(parser.warnings)
    return program


def parse_file(path, diagnostics: Optional[list] = None) -> MetricProgram:
    with open(path, encoding="utf-8", newline="") as fh:
        return parse_program(fh.read(), diagnostics)


def format_literal(lit: Literal) -> str:
    text = str(lit.atom)
    return f"not {text}" if lit.negated else text


def format_rule(rule: MetricRule) -> str:
    if isinstance(rule.head, MetricNext):
        i = rule.head.interval
        upper = "w" if i.upper is None else str(i.upper)
        head = f"next(({i.lower},{upper}),{rule.head.atom})"
    else:
        head = "; ".join(format_literal(l) for l in rule.head.literals)
    body = ", ".join(format_literal(l) for l in rule.body)
    if not head and not body:
        raise ValueError("a rule with empty head and empty body has no surface syntax")
    if not body:
        return f"{head}."
    if not head:
        return f":- {body}."
    return f"{head} :- {body}."


def format_program(p: MetricProgram) -> str:
    return "".join(format_rule(r) + "\n" for r in p.rules)


pretty_print = format_program
