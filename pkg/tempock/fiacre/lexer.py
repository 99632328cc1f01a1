#!/usr/bin/python3
"""Tokenizer for .fcr sources"""

import re
from dataclasses import dataclass

from tempock.errors import ParseError
from tempock.fiacre.ast import SourceSpan

KEYWORDS = frozenset((
    "type", "is", "union", "end", "const", "process", "component", "states",
    "var", "init", "from", "to", "loop", "null", "select", "unless", "if",
    "then", "elsif", "else", "on", "wait", "any", "in", "port", "priority",
    "par", "none", "bool", "int", "read", "write", "true", "false", "not",
    "and", "or", "property",
))

# longest symbols first
SYMBOLS = ("...", "..", ":=", "||", "<>", "=>", "<=", ">=", "[", "]", "(",
           ")", "{", "}", ",", ";", ":", "|", "=", "<", ">", "+", "-", "*",
           "/", "&", "!", "?", ".")

TOKEN_DESCRIPTIONS = {
    "IDENT": "identifier",
    "INT": "integer",
    "EOF": "end of input",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r\f\v]+)
  | (?P<nl>\n)
  | (?P<line_comment>//[^\n]*)
  | (?P<block_comment>/\*.*?\*/)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<int>[0-9]+)
  | (?P<symbol>{})
""".format("|".join(re.escape(s) for s in SYMBOLS)), re.VERBOSE | re.DOTALL)


@dataclass(frozen=True)
class Token:
    kind: str  # IDENT | INT | KEYWORD | SYMBOL | EOF
    value: str
    span: SourceSpan

    def describe(self):
        if self.kind == "EOF":
            return "end of input"
        return "'{}'".format(self.value)


def tokenize(text: str, filename: str = "<input>") -> list[Token]:
    """Splits text into tokens, dropping blanks and comments"""
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if text.startswith("/*", pos) and (m is None or m.lastgroup != "block_comment"):
            span = SourceSpan(filename, line, col, line, col)
            raise ParseError(span, ["'*/'"], "end of input", "{}: unterminated comment".format(span))
        if m is None:
            span = SourceSpan(filename, line, col, line, col)
            raise ParseError(span, ["token"], repr(text[pos]))
        kind = m.lastgroup
        value = m.group()
        end_line = line + value.count("\n")
        if "\n" in value:
            end_col = len(value) - value.rfind("\n")
        else:
            end_col = col + len(value)
        span = SourceSpan(filename, line, col, end_line, end_col)
        if kind == "ident":
            tokens.append(Token("KEYWORD" if value in KEYWORDS else "IDENT", value, span))
        elif kind == "int":
            tokens.append(Token("INT", value, span))
        elif kind == "symbol":
            tokens.append(Token("SYMBOL", value, span))
        pos = m.end()
        line, col = end_line, end_col
    tokens.append(Token("EOF", "", SourceSpan(filename, line, col, line, col)))
    return tokens
