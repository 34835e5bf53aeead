"""Untyped markup trees and their YXML byte-level transfer syntax.

A markup tree is either an element (name, ordered attributes, children) or a
plain text leaf.  The wire form brackets element content between two reserved
control bytes and leaves text completely unquoted, so a pure-text body is
byte-identical to its own encoding.

Wire grammar (X = 0x05, Y = 0x06):

    open  marker:  X Y name (Y attr=value)* X
    close marker:  X Y X
    text:          emitted verbatim

The two reserved bytes are the single wire-compatibility constant of the
whole system and must never occur inside names, attribute values or text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

X = 0x05
Y = 0x06

XB = b"\x05"
YB = b"\x06"
XS = "\x05"
YS = "\x06"

_FORBIDDEN = (XS, YS, "\x00")


class YXMLError(ValueError):
    """Malformed tree or malformed wire input.

    ``position`` is the byte (or code-point) offset of the offending marker
    when the error was raised by the parser, else None.
    """

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Elem:
    name: str
    attrs: tuple[tuple[str, str], ...] = ()
    body: tuple["Tree", ...] = ()

    def __post_init__(self):
        if not isinstance(self.attrs, tuple):
            object.__setattr__(self, "attrs", tuple(self.attrs))
        if not isinstance(self.body, tuple):
            object.__setattr__(self, "body", tuple(self.body))


@dataclass(frozen=True)
class Text:
    content: str


Tree = Union[Elem, Text]
Body = tuple  # tuple[Tree, ...]


def _check_field(s: str, what: str) -> None:
    for bad in _FORBIDDEN:
        if bad in s:
            raise YXMLError(f"reserved control byte 0x{ord(bad):02x} in {what}")


def _emit(tree: Tree, out: list[str]) -> None:
    if isinstance(tree, Text):
        if not tree.content:
            raise YXMLError("empty text node")
        _check_field(tree.content, "text")
        out.append(tree.content)
    elif isinstance(tree, Elem):
        if not tree.name:
            raise YXMLError("empty element name")
        _check_field(tree.name, "element name")
        parts = [XS, YS, tree.name]
        for name, value in tree.attrs:
            if not name:
                raise YXMLError("empty attribute name")
            _check_field(name, "attribute name")
            _check_field(value, "attribute value")
            parts.append(YS)
            parts.append(name)
            parts.append("=")
            parts.append(value)
        parts.append(XS)
        out.append("".join(parts))
        for child in tree.body:
            _emit(child, out)
        out.append(XS + YS + XS)
    else:
        raise YXMLError(f"not a markup tree: {tree!r}")


def string_of_body(body: Iterable[Tree]) -> str:
    """Encode a body as a YXML code-point string (reserved bytes are ASCII)."""
    out: list[str] = []
    for tree in body:
        _emit(tree, out)
    return "".join(out)


def yxml_string(body: Iterable[Tree]) -> bytes:
    """Encode a body as YXML wire bytes (UTF-8 for all text content)."""
    return string_of_body(body).encode("utf-8")


def yxml_string_of(tree: Tree) -> bytes:
    return yxml_string((tree,))


class _Builder:
    """Single pass over the marker-separated segments, tracking offsets."""

    __slots__ = ("stack", "texts")

    def __init__(self):
        # stack of (elem-name, attrs, children); bottom entry collects the body
        self.stack: list[tuple[str | None, tuple, list]] = [(None, (), [])]
        self.texts: list[str] = []

    def flush(self):
        if self.texts:
            merged = "".join(self.texts)
            if merged:
                self.stack[-1][2].append(Text(merged))
            self.texts.clear()

    def add_text(self, s: str):
        if s:
            self.texts.append(s)

    def push(self, name: str, attrs: tuple):
        self.flush()
        self.stack.append((name, attrs, []))

    def pop(self, pos: int):
        self.flush()
        if len(self.stack) == 1:
            raise YXMLError("unbalanced: close marker with no open element", pos)
        name, attrs, children = self.stack.pop()
        self.stack[-1][2].append(Elem(name, attrs, tuple(children)))

    def finish(self, pos: int) -> Body:
        self.flush()
        if len(self.stack) != 1:
            raise YXMLError(
                f"unbalanced: {len(self.stack) - 1} element(s) left open", pos
            )
        return tuple(self.stack[0][2])


def parse_body(data: bytes | str) -> Body:
    """Parse YXML input into a normalized body.

    Accepts raw bytes or an already-decoded code-point string; the two routes
    commute because the reserved markers are ASCII.  Adjacent text is merged
    and empty text dropped, so ``parse_body(yxml_string(b)) == b`` for every
    normalized body ``b``.
    """
    if isinstance(data, (bytes, bytearray, memoryview)):
        data = bytes(data)
        x, y, eq = XB, YB, b"="
        decode = lambda s: s.decode("utf-8")
    else:
        x, y, eq = XS, YS, "="
        decode = lambda s: s

    builder = _Builder()
    pos = 0
    n = len(data)
    while pos <= n:
        cut = data.find(x, pos)
        if cut < 0:
            cut = n
            seg = data[pos:]
        else:
            seg = data[pos:cut]
        marker_pos = pos - 1  # offset of the X that opened this segment
        if not seg:
            pass
        elif seg[:1] == y:
            if seg == y:
                builder.pop(marker_pos)
            else:
                parts = seg[1:].split(y)
                name = parts[0]
                if not name:
                    raise YXMLError("element-open marker with empty name", marker_pos)
                attrs = []
                for part in parts[1:]:
                    i = part.find(eq)
                    if i < 0:
                        raise YXMLError(
                            f"attribute token without '=': {decode(part)!r}",
                            marker_pos,
                        )
                    attrs.append((decode(part[:i]), decode(part[i + 1 :])))
                builder.push(decode(name), tuple(attrs))
        else:
            # Plain text; stray Y separators (invalid input) are dropped,
            # matching split-based reference behaviour.
            for piece in seg.split(y):
                builder.add_text(decode(piece))
        pos = cut + 1
    return builder.finish(n)


def parse(data: bytes | str) -> Tree:
    """Parse input that must encode exactly one tree."""
    body = parse_body(data)
    if len(body) != 1:
        raise YXMLError(f"expected single tree, got {len(body)} trees")
    return body[0]
