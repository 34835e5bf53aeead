"""Pure-Python token scanner over raw UTF-8 bytes.

Reference twin of the compiled ``_scan`` extension; both expose the same
``scan(data, keywords)`` returning ``(kind, start, stop)`` triples whose
ranges exactly tile the input.  Bytes >= 0x80 count as identifier letters,
which keeps every multi-byte UTF-8 sequence inside a single token.
"""

from __future__ import annotations

KW = 0
IDENT = 1
NUMBER = 2
STRING = 3
COMMENT = 4
DELIM = 5
DOT = 6
WS = 7
ERR = 8

_WS = frozenset((0x20, 0x09, 0x0A, 0x0D))


def _is_letter(c: int) -> bool:
    return 0x41 <= c <= 0x5A or 0x61 <= c <= 0x7A or c >= 0x80


def _is_ident(c: int) -> bool:
    # letters, digits, underscore, prime
    return (
        _is_letter(c) or 0x30 <= c <= 0x39 or c == 0x5F or c == 0x27
    )


def scan(data: bytes, keywords) -> list:
    toks = []
    i = 0
    n = len(data)
    while i < n:
        c = data[i]
        start = i
        if c in _WS:
            i += 1
            while i < n and data[i] in _WS:
                i += 1
            toks.append((WS, start, i))
        elif c == 0x22:  # double-quoted string, "" escapes a quote
            i += 1
            closed = False
            while i < n:
                if data[i] == 0x22:
                    if i + 1 < n and data[i + 1] == 0x22:
                        i += 2
                    else:
                        i += 1
                        closed = True
                        break
                else:
                    i += 1
            toks.append((STRING if closed else ERR, start, i))
        elif c == 0x28 and i + 1 < n and data[i + 1] == 0x2A:  # (* nested *)
            depth = 1
            i += 2
            while i < n and depth:
                if data[i] == 0x28 and i + 1 < n and data[i + 1] == 0x2A:
                    depth += 1
                    i += 2
                elif data[i] == 0x2A and i + 1 < n and data[i + 1] == 0x29:
                    depth -= 1
                    i += 2
                else:
                    i += 1
            toks.append((COMMENT if depth == 0 else ERR, start, i))
        elif _is_letter(c):
            i += 1
            while i < n and _is_ident(data[i]):
                i += 1
            kind = KW if data[start:i] in keywords else IDENT
            toks.append((kind, start, i))
        elif 0x30 <= c <= 0x39:
            i += 1
            while i < n and 0x30 <= data[i] <= 0x39:
                i += 1
            # decimal point: dot directly between digits stays in the number
            if i + 1 < n and data[i] == 0x2E and 0x30 <= data[i + 1] <= 0x39:
                i += 2
                while i < n and 0x30 <= data[i] <= 0x39:
                    i += 1
            toks.append((NUMBER, start, i))
        elif c == 0x2E:
            i += 1
            if i >= n or data[i] in _WS:
                toks.append((DOT, start, i))
            else:
                toks.append((DELIM, start, i))
        else:
            i += 1
            toks.append((DELIM, start, i))
    return toks
