"""TriG-subset parser and serializer for named-graph datasets.

Supported surface: ``@prefix`` declarations, default-graph triples, anonymous
``{ ... }`` default-graph blocks, ``name { ... }`` named-graph blocks,
predicate lists (``;``), object lists (``,``), the ``a`` keyword, IRIs,
prefixed names, labeled blank nodes (``_:x``), and string literals with
``^^datatype`` or ``@lang``. Collections, anonymous blank-node property
lists, quoted triples, and numeric/boolean shorthand are not part of the
subset. Prefixed-name labels are ASCII; arbitrary characters in IRIs and
literals travel via ``\\uXXXX`` / ``\\UXXXXXXXX`` escapes.

Every failure raises ParseError with a 1-based line/column position; no
input crashes or hangs the parser.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass

from .graph import BlankNode, Dataset, GraphName, Iri, Literal, Node, Quad, Term
from .vocab import RDF_LANG_STRING, RDF_TYPE, XSD_STRING


class ParseError(Exception):
    """Syntax or reference error at a source position (1-based line and column)."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


_PN_PREFIX = r"[A-Za-z_][A-Za-z0-9_\-]*"
_PN_LOCAL = r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?"

PN_PREFIX_RE = re.compile(rf"^{_PN_PREFIX}$")
PN_LOCAL_RE = re.compile(rf"^{_PN_LOCAL}$")

_TOKEN_RE = re.compile(
    r"""
      (?P<ws>[ \t\r\n]+)
    | (?P<comment>\#[^\n]*)
    | (?P<prefix_kw>@prefix\b)
    | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
    | (?P<iriref><(?:[^\x00-\x20<>"{}|^`\\]|\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8})*>)
    | (?P<string>"(?:[^"\\\n\r]|\\[^\n\r])*"|'(?:[^'\\\n\r]|\\[^\n\r])*')
    | (?P<blank>_:(?:%(local)s))
    | (?P<pname>(?:%(prefix)s)?:(?:%(local)s)?)
    | (?P<kw_a>a(?![A-Za-z0-9_:\-]))
    | (?P<hathat>\^\^)
    | (?P<punct>[.;,{}])
    """
    % {"prefix": _PN_PREFIX, "local": _PN_LOCAL},
    re.VERBOSE,
)

_SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*:")

_ECHAR_DECODE = {
    "t": "\t",
    "b": "\b",
    "n": "\n",
    "r": "\r",
    "f": "\f",
    '"': '"',
    "'": "'",
    "\\": "\\",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


class _Lexer:
    def __init__(self, text: str) -> None:
        if text.startswith("﻿"):
            text = text[1:]
        self.text = text
        self.line_starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self.line_starts.append(i + 1)

    def position(self, offset: int) -> tuple[int, int]:
        line = bisect.bisect_right(self.line_starts, offset)
        column = offset - self.line_starts[line - 1] + 1
        return line, column

    def error(self, message: str, offset: int) -> ParseError:
        line, column = self.position(offset)
        return ParseError(message, line, column)

    def tokens(self) -> list[_Token]:
        out = []
        pos = 0
        text = self.text
        while pos < len(text):
            match = _TOKEN_RE.match(text, pos)
            if match is None:
                raise self.error(f"unexpected character {text[pos]!r}", pos)
            kind = match.lastgroup or ""
            if kind not in ("ws", "comment"):
                out.append(_Token(kind, match.group(), pos))
            pos = match.end()
        out.append(_Token("eof", "", len(text)))
        return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.lexer = _Lexer(text)
        self.toks = self.lexer.tokens()
        self.index = 0
        self.prefixes: dict[str, str] = {}
        self.quads: list[Quad] = []

    def peek(self) -> _Token:
        return self.toks[self.index]

    def advance(self) -> _Token:
        tok = self.toks[self.index]
        self.index += 1
        return tok

    def error(self, message: str, tok: _Token | None = None) -> ParseError:
        tok = tok or self.peek()
        return self.lexer.error(message, tok.offset)

    def expect_punct(self, char: str, context: str) -> None:
        tok = self.peek()
        if tok.kind == "punct" and tok.text == char:
            self.advance()
            return
        found = tok.text or "end of input"
        raise self.error(f"expected '{char}' {context}, found {found!r}", tok)

    # -- document ----------------------------------------------------------

    def parse(self) -> Dataset:
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                break
            if tok.kind == "prefix_kw":
                self.parse_prefix()
            elif tok.kind == "punct" and tok.text == "{":
                self.advance()
                self.parse_block(None)
            elif tok.kind in ("iriref", "pname", "blank"):
                node = self.parse_node("graph name or triple subject")
                nxt = self.peek()
                if nxt.kind == "punct" and nxt.text == "{":
                    self.advance()
                    self.parse_block(node)
                else:
                    self.parse_predicate_objects(node, None)
                    self.expect_punct(".", "to end the statement")
            else:
                raise self.error(
                    "expected @prefix, a graph block, or a triple subject, "
                    f"found {tok.text or 'end of input'!r}",
                    tok,
                )
        return Dataset(self.quads, prefixes=self.prefixes)

    def parse_prefix(self) -> None:
        self.advance()
        tok = self.peek()
        if tok.kind != "pname" or not tok.text.endswith(":") or tok.text.count(":") != 1:
            raise self.error("expected prefix label ending in ':'", tok)
        label = tok.text[:-1]
        self.advance()
        iri_tok = self.peek()
        if iri_tok.kind != "iriref":
            raise self.error("expected namespace IRI after prefix label", iri_tok)
        namespace = self.decode_iriref(self.advance())
        previous = self.prefixes.get(label)
        if previous is not None and previous != namespace:
            raise self.error(
                f"prefix '{label}:' redeclared with a different namespace", iri_tok
            )
        self.prefixes[label] = namespace
        self.expect_punct(".", "to end the @prefix directive")

    def parse_block(self, graph: GraphName) -> None:
        while True:
            tok = self.peek()
            if tok.kind == "punct" and tok.text == "}":
                self.advance()
                return
            if tok.kind == "eof":
                raise self.error("expected '}' to close the graph block", tok)
            subject = self.parse_node("triple subject")
            self.parse_predicate_objects(subject, graph)
            nxt = self.peek()
            if nxt.kind == "punct" and nxt.text == ".":
                self.advance()
            elif not (nxt.kind == "punct" and nxt.text == "}"):
                raise self.error(
                    f"expected '.' or '}}' after triples, found {nxt.text or 'end of input'!r}",
                    nxt,
                )

    # -- triples -----------------------------------------------------------

    def parse_predicate_objects(self, subject: Node, graph: GraphName) -> None:
        while True:
            predicate = self.parse_verb()
            while True:
                obj = self.parse_object()
                self.quads.append(Quad(subject, predicate, obj, graph))
                tok = self.peek()
                if tok.kind == "punct" and tok.text == ",":
                    self.advance()
                    continue
                break
            tok = self.peek()
            if tok.kind == "punct" and tok.text == ";":
                while tok.kind == "punct" and tok.text == ";":
                    self.advance()
                    tok = self.peek()
                if tok.kind in ("iriref", "pname", "kw_a"):
                    continue
            return

    def parse_verb(self) -> Iri:
        tok = self.peek()
        if tok.kind == "kw_a":
            self.advance()
            return Iri(RDF_TYPE)
        if tok.kind == "iriref":
            return Iri(self.decode_iriref(self.advance()))
        if tok.kind == "pname":
            return Iri(self.expand_pname(self.advance()))
        if tok.kind == "blank":
            raise self.error("blank node cannot be a predicate", tok)
        raise self.error(
            f"expected a predicate IRI or 'a', found {tok.text or 'end of input'!r}", tok
        )

    def parse_node(self, wanted: str) -> Node:
        tok = self.peek()
        if tok.kind == "iriref":
            return Iri(self.decode_iriref(self.advance()))
        if tok.kind == "pname":
            return Iri(self.expand_pname(self.advance()))
        if tok.kind == "blank":
            return BlankNode(self.advance().text[2:])
        raise self.error(
            f"expected {wanted}, found {tok.text or 'end of input'!r}", tok
        )

    def parse_object(self) -> Term:
        tok = self.peek()
        if tok.kind in ("iriref", "pname", "blank"):
            return self.parse_node("object term")
        if tok.kind == "string":
            lexical = self.decode_string(self.advance())
            nxt = self.peek()
            if nxt.kind == "langtag":
                self.advance()
                return Literal(lexical, language=nxt.text[1:])
            if nxt.kind == "hathat":
                self.advance()
                dt_tok = self.peek()
                if dt_tok.kind == "iriref":
                    datatype = self.decode_iriref(self.advance())
                elif dt_tok.kind == "pname":
                    datatype = self.expand_pname(self.advance())
                else:
                    raise self.error("expected datatype IRI after '^^'", dt_tok)
                if datatype == RDF_LANG_STRING:
                    return Literal(lexical, datatype=RDF_LANG_STRING)
                return Literal(lexical, datatype=datatype)
            return Literal(lexical)
        raise self.error(
            f"expected an object term, found {tok.text or 'end of input'!r}", tok
        )

    # -- terminals ---------------------------------------------------------

    def decode_iriref(self, tok: _Token) -> str:
        value = self.unescape(tok.text[1:-1], tok.offset + 1, numeric_only=True)
        if not _SCHEME_RE.match(value):
            raise self.error(f"relative IRI not allowed: <{value}>", tok)
        return value

    def expand_pname(self, tok: _Token) -> str:
        label, _, local = tok.text.partition(":")
        namespace = self.prefixes.get(label)
        if namespace is None:
            raise self.error(f"undefined prefix '{label}:'", tok)
        return namespace + local

    def decode_string(self, tok: _Token) -> str:
        return self.unescape(tok.text[1:-1], tok.offset + 1, numeric_only=False)

    def unescape(self, raw: str, base_offset: int, numeric_only: bool) -> str:
        out = []
        i = 0
        while i < len(raw):
            ch = raw[i]
            if ch != "\\":
                out.append(ch)
                i += 1
                continue
            if i + 1 >= len(raw):
                raise self.lexer.error("dangling escape", base_offset + i)
            marker = raw[i + 1]
            if marker in ("u", "U"):
                width = 4 if marker == "u" else 8
                digits = raw[i + 2 : i + 2 + width]
                if len(digits) < width or not all(c in "0123456789abcdefABCDEF" for c in digits):
                    raise self.lexer.error("malformed unicode escape", base_offset + i)
                code = int(digits, 16)
                if code > 0x10FFFF or 0xD800 <= code <= 0xDFFF:
                    raise self.lexer.error("escape outside unicode range", base_offset + i)
                out.append(chr(code))
                i += 2 + width
            elif not numeric_only and marker in _ECHAR_DECODE:
                out.append(_ECHAR_DECODE[marker])
                i += 2
            else:
                raise self.lexer.error(f"invalid escape '\\{marker}'", base_offset + i)
        return "".join(out)


def parse_trig(text: str) -> Dataset:
    """Parse a TriG-subset document into a Dataset (deterministic, duplicate-free)."""
    return _Parser(text).parse()


# -- serialization ---------------------------------------------------------


def _escape_literal(value: str) -> str:
    out = []
    for ch in value:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


_IRI_UNSAFE = set('<>"{}|^`\\')


def _escape_iri(value: str) -> str:
    out = []
    for ch in value:
        if ch in _IRI_UNSAFE or ord(ch) <= 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _usable_prefixes(prefixes) -> list[tuple[str, str]]:
    usable = []
    for label, ns in prefixes.items():
        if PN_PREFIX_RE.match(label) or label == "":
            if _SCHEME_RE.match(ns):
                usable.append((label, ns))
    return usable


def _compact_iri(value: str, prefixes: list[tuple[str, str]]) -> str | None:
    best: tuple[str, str] | None = None
    for label, ns in prefixes:
        if value.startswith(ns) and (best is None or len(ns) > len(best[1])):
            local = value[len(ns):]
            if local == "" or PN_LOCAL_RE.match(local):
                best = (label, ns)
    if best is None:
        return None
    return f"{best[0]}:{value[len(best[1]):]}"


def _render_term(term: Term | None, prefixes: list[tuple[str, str]]) -> str:
    if term is None:
        raise ValueError("default graph has no label")
    if isinstance(term, Iri):
        compact = _compact_iri(term.value, prefixes)
        return compact if compact is not None else f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{_escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{body}@{term.language}"
    if term.datatype == XSD_STRING:
        return body
    dt = _compact_iri(term.datatype, prefixes)
    if dt is None:
        dt = f"<{_escape_iri(term.datatype)}>"
    return f"{body}^^{dt}"


def _emit_graph(quads: list[Quad], prefixes: list[tuple[str, str]], indent: str) -> list[str]:
    # Group by subject, then predicate, preserving first-appearance order.
    by_subject: dict[Node, dict[Iri, list[Term]]] = {}
    for q in quads:
        preds = by_subject.setdefault(q.subject, {})
        preds.setdefault(q.predicate, []).append(q.object)
    lines = []
    for subject, preds in by_subject.items():
        parts = []
        for predicate, objects in preds.items():
            verb = "a" if predicate.value == RDF_TYPE else _render_term(predicate, prefixes)
            rendered = ", ".join(_render_term(o, prefixes) for o in objects)
            parts.append(f"{verb} {rendered}")
        subject_text = _render_term(subject, prefixes)
        joiner = f" ;\n{indent}    "
        lines.append(f"{indent}{subject_text} {joiner.join(parts)} .")
    return lines


def serialize_trig(ds: Dataset) -> str:
    """Emit a TriG-subset document; re-parsing yields the same quad set.

    Graph and blank-node labels are preserved verbatim. Prefix entries whose
    label falls outside the subset grammar (or whose namespace is not an
    absolute IRI) are skipped rather than emitted unparseably.
    """
    prefixes = _usable_prefixes(ds.prefixes)
    lines = [f"@prefix {label}: <{_escape_iri(ns)}> ." for label, ns in prefixes]

    default_quads: list[Quad] = []
    named: dict[GraphName, list[Quad]] = {}
    for q in ds:
        if q.graph is None:
            default_quads.append(q)
        else:
            named.setdefault(q.graph, []).append(q)

    if default_quads:
        if lines:
            lines.append("")
        lines.extend(_emit_graph(default_quads, prefixes, ""))
    for graph, quads in named.items():
        if lines:
            lines.append("")
        lines.append(f"{_render_term(graph, prefixes)} {{")
        lines.extend(_emit_graph(quads, prefixes, "  "))
        lines.append("}")
    return "\n".join(lines) + ("\n" if lines else "")


# -- canonical form --------------------------------------------------------


def canonical_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{_escape_iri(term.value)}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    body = f'"{_escape_literal(term.lexical)}"'
    if term.language is not None:
        return f"{body}@{term.language}"
    if term.datatype == XSD_STRING:
        return body
    return f"{body}^^<{_escape_iri(term.datatype)}>"


def canonical_quad_line(quad: Quad) -> str:
    """One N-Quads-style line for a quad; the default graph omits the graph term."""
    parts = [
        canonical_term(quad.subject),
        canonical_term(quad.predicate),
        canonical_term(quad.object),
    ]
    if quad.graph is not None:
        parts.append(canonical_term(quad.graph))
    return " ".join(parts) + " ."


def canonical_nquads(ds: Dataset) -> str:
    """Canonical text form: the sorted, deduplicated quad lines.

    This is the content-hash input: equal quad sets always canonicalize to
    identical text, independent of insertion order and prefix maps.
    """
    lines = sorted(canonical_quad_line(q) for q in ds.quad_set())
    return "".join(line + "\n" for line in lines)
