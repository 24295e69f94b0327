"""Minimal s-expression reader with line tracking.

Atoms are returned as :class:`Sym` (a ``str`` carrying ``line``), lists as
:class:`SList` (a ``list`` carrying ``line``).  ``;`` starts a comment that runs
to the end of the line.
"""

import re


class ParseError(Exception):
    """A syntax or well-formedness error, optionally located in a file."""

    def __init__(self, message, line=None, source=None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.source = source

    def located(self, source=None, line=None):
        return ParseError(
            self.message,
            self.line if self.line is not None else line,
            self.source if self.source is not None else source,
        )

    def __str__(self):
        where = []
        if self.source is not None:
            where.append(str(self.source))
        if self.line is not None:
            where.append(str(self.line))
        if where:
            return ":".join(where) + ": " + self.message
        return self.message


class Sym(str):
    line = None


class SList(list):
    line = None


_TOKEN = re.compile(r"\s+|;[^\n]*|\(|\)|\"[^\"\n]*\"|[^\s();\"]+")


def tokenize(text, source=None):
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, source)
        tok = m.group()
        if tok[0].isspace() or tok[0] == ";":
            line += tok.count("\n")
        else:
            yield tok, line
        pos = m.end()


def read_all(text, source=None):
    """Read every top-level s-expression in ``text``."""
    stack = []
    out = []
    for tok, line in tokenize(text, source):
        if tok == "(":
            lst = SList()
            lst.line = line
            stack.append(lst)
        elif tok == ")":
            if not stack:
                raise ParseError("unbalanced ')'", line, source)
            done = stack.pop()
            (stack[-1] if stack else out).append(done)
        else:
            sym = Sym(tok.strip('"') if tok.startswith('"') else tok)
            sym.line = line
            (stack[-1] if stack else out).append(sym)
    if stack:
        raise ParseError("unbalanced '(' (missing ')')", stack[-1].line, source)
    return out


def read_one(text, source=None):
    items = read_all(text, source)
    if not items:
        raise ParseError("empty input", 1, source)
    if len(items) > 1:
        raise ParseError("expected a single expression", getattr(items[1], "line", None), source)
    return items[0]


def line_of(node, default=None):
    return getattr(node, "line", None) or default
