"""The abstract-content text notation: parser and canonical serializer.

Grammar (UTF-8 documents):

    document ::= call EOF
    call     ::= NAME [ "(" [arg ("," arg)*] ")" ]
    arg      ::= NAME ":" value      named argument
               | value               positional argument (function calls)
    value    ::= INT | STRING | QID | list | call
    list     ::= "[" [value ("," value)*] "]"

NAME is [A-Za-z_][A-Za-z0-9_]*; a NAME matching Q[1-9][0-9]* is a QID
token instead. INT is an unsigned decimal. STRING is double-quoted with
backslash escapes. Names are catalog/registry identifiers, never display
labels. Key order is insignificant when parsing; serialization writes
keys in catalog order when a catalog is supplied.

Parsing is total: any input either parses or raises SyntaxParseError
with a 1-based line/column and the set of expected tokens.
"""

import json

from .errors import AbstextError, SYNTAX_ERROR
from .model import Call, Content, ItemRef, ITEM_ID_RE

MAX_NESTING = 200

_PUNCT = {"(": "(", ")": ")", "[": "[", "]": "]", ",": ",", ":": ":"}
_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789")
_ESCAPES = {'"': '"', "\\": "\\", "/": "/", "n": "\n", "t": "\t", "r": "\r"}


class SyntaxParseError(AbstextError):
    """Positioned syntax error with the expected-token set."""

    def __init__(self, line: int, col: int, expected, found: str):
        self.line = line
        self.col = col
        self.expected = tuple(sorted(expected))
        self.found = found
        wanted = " or ".join(self.expected)
        super().__init__(
            SYNTAX_ERROR,
            f"syntax error at line {line}, column {col}: expected {wanted}, found {found}",
            details={"line": line, "column": col, "expected": list(self.expected),
                     "found": found},
        )


class _Token:
    __slots__ = ("kind", "text", "value", "line", "col")

    def __init__(self, kind, text, value, line, col):
        self.kind = kind
        self.text = text
        self.value = value
        self.line = line
        self.col = col


def _tokenize(text: str):
    tokens = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        start_line, start_col = line, col
        if ch in _PUNCT:
            tokens.append(_Token(ch, ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch in "0123456789":
            j = i
            while j < n and text[j] in "0123456789":
                j += 1
            word = text[i:j]
            tokens.append(_Token("INT", word, int(word), line, col))
            col += j - i
            i = j
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            word = text[i:j]
            kind = "QID" if ITEM_ID_RE.fullmatch(word) else "NAME"
            tokens.append(_Token(kind, word, word, line, col))
            col += j - i
            i = j
            continue
        if ch == '"':
            value, j, line2, col2 = _scan_string(text, i, line, col)
            tokens.append(_Token("STRING", text[i:j], value, start_line, start_col))
            i, line, col = j, line2, col2
            continue
        raise SyntaxParseError(line, col, ("value", "name"), repr(ch))
    tokens.append(_Token("EOF", "", None, line, col))
    return tokens


def _scan_string(text, i, line, col):
    # i points at the opening quote
    out = []
    j = i + 1
    col += 1
    n = len(text)
    while j < n:
        ch = text[j]
        if ch == '"':
            return "".join(out), j + 1, line, col + 1
        if ch == "\n":
            raise SyntaxParseError(line, col, ('"',), "end of line")
        if ch == "\\":
            if j + 1 >= n:
                break
            esc = text[j + 1]
            if esc in _ESCAPES:
                out.append(_ESCAPES[esc])
                j += 2
                col += 2
                continue
            if esc == "u":
                hexpart = text[j + 2:j + 6]
                if len(hexpart) == 4 and all(c in "0123456789abcdefABCDEF" for c in hexpart):
                    out.append(chr(int(hexpart, 16)))
                    j += 6
                    col += 6
                    continue
                raise SyntaxParseError(line, col + 1, ("unicode escape",), repr(text[j:j + 6]))
            raise SyntaxParseError(line, col + 1, ("escape character",), repr(esc))
        out.append(ch)
        j += 1
        col += 1
    raise SyntaxParseError(line, col, ('"',), "end of input")


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.pos = 0
        self.depth = 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self):
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def fail(self, expected):
        tok = self.peek()
        found = "end of input" if tok.kind == "EOF" else repr(tok.text)
        raise SyntaxParseError(tok.line, tok.col, expected, found)

    def expect(self, kind):
        if self.peek().kind != kind:
            self.fail((kind,))
        return self.advance()

    def parse_value(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            tok = self.peek()
            raise SyntaxParseError(tok.line, tok.col, ("shallower nesting",),
                                   f"nesting deeper than {MAX_NESTING}")
        try:
            tok = self.peek()
            if tok.kind == "INT":
                return self.advance().value
            if tok.kind == "STRING":
                return self.advance().value
            if tok.kind == "QID":
                return ItemRef(self.advance().value)
            if tok.kind == "[":
                return self.parse_list()
            if tok.kind == "NAME":
                return self.parse_call()
            self.fail(("value",))
        finally:
            self.depth -= 1

    def parse_list(self):
        self.expect("[")
        items = []
        if self.peek().kind == "]":
            self.advance()
            return tuple(items)
        while True:
            items.append(self.parse_value())
            tok = self.peek()
            if tok.kind == ",":
                self.advance()
                continue
            if tok.kind == "]":
                self.advance()
                return tuple(items)
            self.fail((",", "]"))

    def parse_call(self):
        name = self.expect("NAME").value
        if self.peek().kind != "(":
            return Call(name)
        self.advance()
        args: dict = {}
        positional: list = []
        if self.peek().kind == ")":
            self.advance()
            return Call(name, args, tuple(positional))
        while True:
            if self.peek().kind == "NAME" and self.peek(1).kind == ":":
                key_tok = self.advance()
                self.advance()  # ":"
                if key_tok.value in args:
                    raise SyntaxParseError(key_tok.line, key_tok.col,
                                           ("distinct key",), f"duplicate key {key_tok.value!r}")
                args[key_tok.value] = self.parse_value()
            else:
                positional.append(self.parse_value())
            tok = self.peek()
            if tok.kind == ",":
                self.advance()
                continue
            if tok.kind == ")":
                self.advance()
                return Call(name, args, tuple(positional))
            self.fail((",", ")"))


def parse_value_text(text: str):
    """Parse one standalone value (used by eval arguments and tests)."""
    parser = _Parser(_tokenize(text))
    value = parser.parse_value()
    if parser.peek().kind != "EOF":
        parser.fail(("end of input",))
    return value


def parse_content(text: str) -> Content:
    """Parse a whole abstract-content document into a Content tree.

    Catalog-independent: names are not resolved here.
    """
    parser = _Parser(_tokenize(text))
    if parser.peek().kind != "NAME":
        parser.fail(("constructor name",))
    root = parser.parse_call()
    if parser.peek().kind != "EOF":
        parser.fail(("end of input",))
    return Content(root)


def serialize_value(value, catalog=None) -> str:
    if isinstance(value, bool):
        raise AbstextError(SYNTAX_ERROR, "booleans have no notation literal")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, ItemRef):
        return value.qid
    if isinstance(value, tuple):
        return "[" + ", ".join(serialize_value(v, catalog) for v in value) + "]"
    if isinstance(value, Call):
        return _serialize_call(value, catalog)
    raise AbstextError(SYNTAX_ERROR, f"value {value!r} has no notation form")


def _key_order(call: Call, catalog):
    keys = list(call.args)
    if catalog is None:
        return keys
    spec = catalog.get(call.name)
    if spec is None:
        return keys
    spec_order = [k.id for k in spec.keys if k.id in call.args]
    return spec_order + [k for k in keys if k not in spec_order]


def _serialize_call(call: Call, catalog) -> str:
    if call.is_bare():
        return call.name
    parts = [f"{k}: {serialize_value(call.args[k], catalog)}" for k in _key_order(call, catalog)]
    parts += [serialize_value(v, catalog) for v in call.positional]
    return f"{call.name}({', '.join(parts)})"


def serialize_content(content: Content, catalog=None) -> str:
    """Canonical one-line form: keys in catalog order, one space after
    commas and colons. parse(serialize(c)) is structurally equal to c."""
    return _serialize_call(content.root, catalog)
