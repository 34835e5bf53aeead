"""Typed encode/decode combinators over untyped markup bodies.

Structured values (booleans, integers, text, pairs, lists, tagged variants,
raw trees) are laid out as markup bodies the way a compiler lays out values
in memory: base values stay unwrapped, composite values wrap each constituent
in a reserved ":" element.  Every decoder is the strict left inverse of its
encoder; trailing junk is always an error.

An encoder is any callable ``value -> Body``; a decoder any callable
``Body -> value`` raising CodecError on mismatch.
"""

from __future__ import annotations

import re
from typing import Callable, Optional, Sequence, TypeVar

from .yxml import Body, Elem, Text, Tree

A = TypeVar("A")
B = TypeVar("B")

#: Reserved wrapper element name used by all composite codecs.
WRAPPER = ":"
#: Attribute carrying the case index of a variant value.
TAG_ATTR = "tag"

_INT_RE = re.compile(r"0|-?[1-9][0-9]*")


class CodecError(ValueError):
    pass


Encoder = Callable[[A], Body]
Decoder = Callable[[Body], A]


def _wrap(body: Body) -> Elem:
    return Elem(WRAPPER, (), tuple(body))


def _unwrap(tree: Tree) -> Body:
    if not isinstance(tree, Elem) or tree.name != WRAPPER or tree.attrs:
        raise CodecError(f"expected plain {WRAPPER!r} wrapper, got {tree!r}")
    return tree.body


# -- base types --------------------------------------------------------------

def encode_string(v: str) -> Body:
    return (Text(v),) if v else ()


def decode_string(body: Body) -> str:
    body = tuple(body)
    if not body:
        return ""
    if len(body) == 1 and isinstance(body[0], Text):
        return body[0].content
    raise CodecError("expected text body")


def encode_int(v: int) -> Body:
    return encode_string(str(v))


def decode_int(body: Body) -> int:
    s = decode_string(body)
    if not _INT_RE.fullmatch(s):
        raise CodecError(f"not a decimal integer: {s!r}")
    return int(s)


def encode_bool(v: bool) -> Body:
    return encode_string("1" if v else "0")


def decode_bool(body: Body) -> bool:
    s = decode_string(body)
    if s == "1":
        return True
    if s == "0":
        return False
    raise CodecError(f"not a boolean: {s!r}")


# -- composites --------------------------------------------------------------

def encode_pair(enc_a: Encoder, enc_b: Encoder) -> Encoder:
    def enc(v) -> Body:
        a, b = v
        return (_wrap(enc_a(a)), _wrap(enc_b(b)))

    return enc


def decode_pair(dec_a: Decoder, dec_b: Decoder) -> Decoder:
    def dec(body: Body):
        body = tuple(body)
        if len(body) != 2:
            raise CodecError(f"expected pair body, got {len(body)} nodes")
        return (dec_a(_unwrap(body[0])), dec_b(_unwrap(body[1])))

    return dec


def encode_list(enc_a: Encoder) -> Encoder:
    def enc(vs) -> Body:
        return tuple(_wrap(enc_a(v)) for v in vs)

    return enc


def decode_list(dec_a: Decoder) -> Decoder:
    def dec(body: Body):
        return [dec_a(_unwrap(tree)) for tree in body]

    return dec


def encode_option(enc_a: Encoder) -> Encoder:
    """None / value as a two-case variant (case 0 = absent)."""
    return encode_variant(
        [
            lambda v: () if v is None else None,
            lambda v: enc_a(v) if v is not None else None,
        ]
    )


def decode_option(dec_a: Decoder) -> Decoder:
    return decode_variant([lambda body: None, dec_a])


def encode_variant(cases: Sequence[Callable[[A], Optional[Body]]]) -> Encoder:
    """Tagged sum: each case function returns the payload body for values it
    covers and None otherwise; the first match wins and its index becomes the
    tag attribute on a single wrapper element."""

    def enc(v) -> Body:
        for index, case in enumerate(cases):
            payload = case(v)
            if payload is not None:
                return (Elem(WRAPPER, ((TAG_ATTR, str(index)),), tuple(payload)),)
        raise CodecError(f"no variant case matches {v!r}")

    return enc


def decode_variant(cases: Sequence[Decoder]) -> Decoder:
    def dec(body: Body):
        body = tuple(body)
        if len(body) != 1:
            raise CodecError(f"expected variant body, got {len(body)} nodes")
        tree = body[0]
        if (
            not isinstance(tree, Elem)
            or tree.name != WRAPPER
            or len(tree.attrs) != 1
            or tree.attrs[0][0] != TAG_ATTR
        ):
            raise CodecError(f"expected tagged wrapper, got {tree!r}")
        tag = tree.attrs[0][1]
        if not _INT_RE.fullmatch(tag) or not 0 <= int(tag) < len(cases):
            raise CodecError(f"unknown variant tag {tag!r}")
        return cases[int(tag)](tree.body)

    return dec


# -- raw trees ---------------------------------------------------------------

def encode_tree(v: Tree) -> Body:
    return (v,)


def decode_tree(body: Body) -> Tree:
    body = tuple(body)
    if len(body) != 1:
        raise CodecError(f"expected single tree, got {len(body)} nodes")
    return body[0]
