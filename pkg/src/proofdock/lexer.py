"""Lexical analysis of Coq-like proof scripts.

Produces an exact token partition of the source (token byte ranges tile the
input with no gaps), splits scripts into command spans at terminator dots,
and turns tokens into markup annotations for the renderer.

The inner scanning loop lives in a compiled extension when available
(``proofdock._scan``), with a pure-Python twin (``_scan_py``) selected at
import time; set PROOFDOCK_PURE=1 to force the fallback.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .textpos import Range
from .yxml import Elem

from . import _scan_py

if os.environ.get("PROOFDOCK_PURE"):
    _kernel = _scan_py
else:
    try:
        from . import _scan as _kernel  # type: ignore[no-redef]
    except ImportError:
        _kernel = _scan_py


def kernel_name() -> str:
    """Which scan kernel is active ('compiled' or 'pure')."""
    return "pure" if _kernel is _scan_py else "compiled"


class TokenKind(enum.IntEnum):
    KEYWORD = _scan_py.KW
    IDENT = _scan_py.IDENT
    NUMBER = _scan_py.NUMBER
    STRING = _scan_py.STRING
    COMMENT = _scan_py.COMMENT
    DELIMITER = _scan_py.DELIM
    PROOF_DOT = _scan_py.DOT
    WHITESPACE = _scan_py.WS
    ERROR = _scan_py.ERR


#: Markup element name per token kind; whitespace produces no markup.
MARKUP_NAMES = {
    TokenKind.KEYWORD: "coq.keyword",
    TokenKind.IDENT: "coq.ident",
    TokenKind.NUMBER: "coq.number",
    TokenKind.STRING: "coq.string",
    TokenKind.COMMENT: "coq.comment",
    TokenKind.DELIMITER: "coq.delimiter",
    TokenKind.PROOF_DOT: "coq.dot",
    TokenKind.ERROR: "coq.error",
}

DEFAULT_KEYWORDS = frozenset(
    """
    Theorem Lemma Corollary Remark Fact Proposition Example
    Proof Qed Defined Admitted Abort
    Definition Fixpoint CoFixpoint Inductive CoInductive Record Structure
    Module Section End Variable Variables Hypothesis Hypotheses Axiom Parameter
    Require Import Export Open Scope Notation Ltac Hint Check Print Eval Compute
    match with end fun fix forall exists let in if then else
    Prop Set Type
    """.split()
)


def load_keywords(path) -> frozenset:
    """Keyword table from a plain-text file, one keyword per line."""
    with open(path, "r", encoding="utf-8") as f:
        words = [line.strip() for line in f]
    return frozenset(w for w in words if w)


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    range: Range  # byte range within the UTF-8 source


def _as_bytes(source) -> bytes:
    if isinstance(source, bytes):
        return source
    return source.encode("utf-8")


def tokenize(source, keywords: Optional[frozenset] = None) -> list[Token]:
    """Exact maximal-munch partition of the source into tokens."""
    data = _as_bytes(source)
    kwset = frozenset(k.encode("utf-8") for k in (keywords or DEFAULT_KEYWORDS))
    return [
        Token(TokenKind(kind), Range(start, stop))
        for kind, start, stop in _kernel.scan(data, kwset)
    ]


def split_spans(source, keywords: Optional[frozenset] = None) -> list:
    """Command spans: split after each terminator dot; trailing text without
    a terminator forms a final span; concatenation restores the source."""
    data = _as_bytes(source)
    spans = []
    last = 0
    for tok in tokenize(data, keywords):
        if tok.kind is TokenKind.PROOF_DOT:
            spans.append(data[last : tok.range.stop])
            last = tok.range.stop
    if last < len(data):
        spans.append(data[last:])
    if isinstance(source, bytes):
        return spans
    return [s.decode("utf-8") for s in spans]


def process_span(
    source, keywords: Optional[frozenset] = None
) -> Iterator[tuple[Range, Elem]]:
    """Markup annotations for one span: (byte range, element) per
    non-whitespace token.  A generator, so execution can be cancelled
    between tokens."""
    for tok in tokenize(source, keywords):
        name = MARKUP_NAMES.get(tok.kind)
        if name is not None:
            yield tok.range, Elem(name)
