"""Lexer and recursive-descent parser for L4 source text.

Layout is brace-free: the four block keywords (``class``, ``decl``, ``rule``,
``lexicon``) are reserved and each opens a new top-level block, so entries
may be laid out across continuation lines freely, matching the indented
style of hand-written files. ``#`` starts a line comment. ``→`` and ``->``
are interchangeable.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Optional, Union

from . import ast_nodes as ast
from .source import Diagnostic, L4SyntaxError, Span


class Tok(enum.Enum):
    IDENT = "identifier"
    STRING = "string"
    RULENAME = "rule name"
    COLON = "':'"
    ARROW = "'→'"
    LBRACE = "'{'"
    RBRACE = "'}'"
    LPAREN = "'('"
    RPAREN = "')'"
    COMMA = "','"
    AND = "'&&'"
    DOT = "'.'"
    AT = "'@'"
    CLASS = "'class'"
    DECL = "'decl'"
    RULE = "'rule'"
    LEXICON = "'lexicon'"
    FOR = "'for'"
    IF = "'if'"
    THEN = "'then'"
    EXISTS = "'exists'"
    EOF = "end of input"


KEYWORDS = {
    "class": Tok.CLASS,
    "decl": Tok.DECL,
    "rule": Tok.RULE,
    "lexicon": Tok.LEXICON,
    "for": Tok.FOR,
    "if": Tok.IF,
    "then": Tok.THEN,
    "exists": Tok.EXISTS,
}

BLOCK_KEYWORDS = (Tok.CLASS, Tok.DECL, Tok.RULE, Tok.LEXICON)

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_RULENAME_RE = re.compile(r"<\s*([A-Za-z_][A-Za-z0-9_]*)\s*>")

_PUNCT = {
    "→": Tok.ARROW,
    "->": Tok.ARROW,
    "&&": Tok.AND,
    ":": Tok.COLON,
    "{": Tok.LBRACE,
    "}": Tok.RBRACE,
    "(": Tok.LPAREN,
    ")": Tok.RPAREN,
    ",": Tok.COMMA,
    ".": Tok.DOT,
    "@": Tok.AT,
}


@dataclass(frozen=True)
class Token:
    kind: Tok
    value: str
    span: Span


def tokenize(source: str, path: str = "<input>") -> list[Token]:
    tokens: list[Token] = []
    for lineno, line in enumerate(source.splitlines(), start=1):
        col = 0
        n = len(line)
        while col < n:
            ch = line[col]
            if ch in " \t":
                col += 1
                continue
            if ch == "#":
                break
            here = Span(lineno, col + 1, lineno, col + 1)
            m = _IDENT_RE.match(line, col)
            if m:
                word = m.group(0)
                span = Span(lineno, col + 1, lineno, m.end() + 1)
                tokens.append(Token(KEYWORDS.get(word, Tok.IDENT), word, span))
                col = m.end()
                continue
            if ch == '"':
                value, col = _lex_string(line, lineno, col, path)
                tokens.append(Token(Tok.STRING, value, Span(lineno, here.col, lineno, col + 1)))
                continue
            if ch == "<":
                m = _RULENAME_RE.match(line, col)
                if not m:
                    raise _err("malformed rule name, expected '<name>'", here, path, {"rule name"})
                tokens.append(Token(Tok.RULENAME, m.group(1), Span(lineno, col + 1, lineno, m.end() + 1)))
                col = m.end()
                continue
            two = line[col : col + 2]
            if two in _PUNCT:
                tokens.append(Token(_PUNCT[two], two, Span(lineno, col + 1, lineno, col + 3)))
                col += 2
                continue
            if ch in _PUNCT:
                tokens.append(Token(_PUNCT[ch], ch, Span(lineno, col + 1, lineno, col + 2)))
                col += 1
                continue
            raise _err(f"unexpected character {ch!r}", here, path, set())
    lines = source.splitlines() or [""]
    end = Span(len(lines), len(lines[-1]) + 1, len(lines), len(lines[-1]) + 1)
    tokens.append(Token(Tok.EOF, "", end))
    return tokens


def _lex_string(line: str, lineno: int, col: int, path: str) -> tuple[str, int]:
    out: list[str] = []
    i = col + 1
    while i < len(line):
        ch = line[i]
        if ch == "\\" and i + 1 < len(line):
            out.append(line[i + 1])
            i += 2
            continue
        if ch == '"':
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise _err("unterminated string literal", Span(lineno, col + 1, lineno, len(line) + 1), path, {'"'})


def _err(message: str, span: Span, path: str, expected: set[str]) -> L4SyntaxError:
    return L4SyntaxError(
        [Diagnostic("syntax", message, span, path)], expected=frozenset(expected)
    )


# ── Parser ───────────────────────────────────────────────────────


class _Parser:
    def __init__(self, tokens: list[Token], path: str):
        self.tokens = tokens
        self.pos = 0
        self.path = path

    # token access

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def at(self, kind: Tok) -> bool:
        return self.peek().kind == kind

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind is not Tok.EOF:
            self.pos += 1
        return tok

    def expect(self, kind: Tok) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            raise self.fail({kind.value}, tok)
        return self.advance()

    def fail(self, expected: set[str], tok: Optional[Token] = None) -> L4SyntaxError:
        tok = tok or self.peek()
        got = tok.kind.value if tok.kind is not Tok.IDENT else f"identifier {tok.value!r}"
        want = ", ".join(sorted(expected))
        return _err(f"expected {want}, got {got}", tok.span, self.path, expected)

    # grammar

    def parse_program(self) -> ast.SourceProgram:
        blocks: list[ast.Block] = []
        while not self.at(Tok.EOF):
            tok = self.peek()
            if tok.kind is Tok.CLASS:
                blocks.append(self.parse_class_block())
            elif tok.kind is Tok.DECL:
                blocks.append(self.parse_decl_block())
            elif tok.kind is Tok.RULE:
                blocks.append(self.parse_rule_block())
            elif tok.kind is Tok.LEXICON:
                blocks.append(self.parse_lexicon_block())
            else:
                raise self.fail({"'class'", "'decl'", "'rule'", "'lexicon'"})
        return ast.SourceProgram(tuple(blocks))

    def at_block_end(self) -> bool:
        return self.peek().kind in BLOCK_KEYWORDS or self.at(Tok.EOF)

    def parse_class_block(self) -> ast.ClassBlock:
        start = self.expect(Tok.CLASS).span
        classes: list[ast.ClassDecl] = []
        while not self.at_block_end():
            classes.append(self.parse_class_decl())
        span = start if not classes else start.merge(classes[-1].span or start)
        return ast.ClassBlock(tuple(classes), span)

    def parse_class_decl(self) -> ast.ClassDecl:
        name = self.expect(Tok.IDENT)
        fields: list[ast.FieldDecl] = []
        end_span = name.span
        if self.at(Tok.LBRACE):
            self.advance()
            while not self.at(Tok.RBRACE):
                fname = self.expect(Tok.IDENT)
                self.expect(Tok.COLON)
                ftype = self.parse_type()
                fields.append(ast.FieldDecl(fname.value, ftype, fname.span))
                if self.at(Tok.COMMA):
                    self.advance()
            end_span = self.expect(Tok.RBRACE).span
        return ast.ClassDecl(name.value, tuple(fields), name.span.merge(end_span))

    def parse_decl_block(self) -> ast.DeclBlock:
        start = self.expect(Tok.DECL).span
        decls: list[ast.ValueDecl] = []
        while not self.at_block_end():
            name = self.expect(Tok.IDENT)
            self.expect(Tok.COLON)
            dtype = self.parse_type()
            decls.append(ast.ValueDecl(name.value, dtype, name.span))
        span = start if not decls else start.merge(decls[-1].span or start)
        return ast.DeclBlock(tuple(decls), span)

    def parse_type(self) -> ast.TypeExpr:
        left = self.parse_type_atom()
        if self.at(Tok.ARROW):
            self.advance()
            return ast.Arrow(left, self.parse_type())
        return left

    def parse_type_atom(self) -> ast.TypeExpr:
        if self.at(Tok.LPAREN):
            self.advance()
            inner = self.parse_type()
            self.expect(Tok.RPAREN)
            return inner
        name = self.expect(Tok.IDENT)
        if name.value == "Bool":
            return ast.BOOL
        return ast.ClassRef(name.value)

    def parse_lexicon_block(self) -> ast.LexiconBlock:
        start = self.expect(Tok.LEXICON).span
        entries: list[ast.LexiconDecl] = []
        while not self.at_block_end():
            key = self.expect(Tok.IDENT)
            self.expect(Tok.AT)
            surface = self.expect(Tok.STRING)
            if not surface.value:
                raise _err("lexicon surface string must be non-empty", surface.span, self.path, set())
            entries.append(ast.LexiconDecl(key.value, surface.value, key.span.merge(surface.span)))
        span = start if not entries else start.merge(entries[-1].span or start)
        return ast.LexiconBlock(tuple(entries), span)

    def parse_rule_block(self) -> ast.RuleBlock:
        start = self.expect(Tok.RULE).span
        name = self.expect(Tok.RULENAME)
        binders: list[ast.Binder] = []
        if self.at(Tok.FOR):
            self.advance()
            while True:
                var = self.expect(Tok.IDENT)
                self.expect(Tok.COLON)
                cls = self.expect(Tok.IDENT)
                binders.append(ast.Binder(var.value, cls.value, var.span.merge(cls.span)))
                if self.at(Tok.COMMA):
                    self.advance()
                    continue
                break
        scope = {b.var for b in binders}
        condition = None
        if self.at(Tok.IF):
            self.advance()
            condition = self.parse_expr(scope)
        then = self.expect(Tok.THEN)
        conclusion = self.parse_expr(scope)
        rule = ast.RuleDecl(
            name.value, tuple(binders), condition, conclusion, start.merge(then.span)
        )
        return ast.RuleBlock(rule, rule.span)

    def parse_expr(self, scope: set[str]) -> ast.Expr:
        operands = [self.parse_operand(scope)]
        while self.at(Tok.AND):
            self.advance()
            operands.append(self.parse_operand(scope))
        return ast.conjoin(operands)

    def parse_operand(self, scope: set[str]) -> ast.Expr:
        if self.at(Tok.EXISTS):
            start = self.advance().span
            var = self.expect(Tok.IDENT)
            self.expect(Tok.COLON)
            cls = self.expect(Tok.IDENT)
            self.expect(Tok.DOT)
            # exists extends maximally to the right
            body = self.parse_expr(scope | {var.value})
            return ast.Exists(var.value, cls.value, body, start.merge(var.span))
        if self.at(Tok.LPAREN):
            self.advance()
            inner = self.parse_expr(scope)
            self.expect(Tok.RPAREN)
            return inner
        pred = self.expect(Tok.IDENT)
        args: list[Union[ast.VarRef, ast.ConstRef]] = []
        while self.at(Tok.IDENT):
            arg = self.advance()
            if arg.value in scope:
                args.append(ast.VarRef(arg.value))
            else:
                args.append(ast.ConstRef(arg.value))
        return ast.Apply(pred.value, tuple(args), pred.span)


def parse(source: str, path: str = "<input>") -> ast.SourceProgram:
    """Parse L4 text into a :class:`~l4.ast_nodes.SourceProgram`.

    Raises :class:`~l4.source.L4SyntaxError` carrying diagnostics (with spans
    inside the input and the expected-token set) on malformed input.
    """
    return _Parser(tokenize(source, path), path).parse_program()


def parse_file(path: str) -> ast.SourceProgram:
    with open(path, encoding="utf-8") as handle:
        return parse(handle.read(), path)
