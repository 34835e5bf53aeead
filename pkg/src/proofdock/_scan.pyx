# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled token scanner; byte-for-byte equivalent to ``_scan_py.scan``."""

KW = 0
IDENT = 1
NUMBER = 2
STRING = 3
COMMENT = 4
DELIM = 5
DOT = 6
WS = 7
ERR = 8


cdef inline bint _is_ws(unsigned char c):
    return c == 0x20 or c == 0x09 or c == 0x0A or c == 0x0D


cdef inline bint _is_letter(unsigned char c):
    return (0x41 <= c <= 0x5A) or (0x61 <= c <= 0x7A) or c >= 0x80


cdef inline bint _is_ident(unsigned char c):
    return _is_letter(c) or (0x30 <= c <= 0x39) or c == 0x5F or c == 0x27


def scan(bytes data, keywords):
    cdef const unsigned char* p = data
    cdef Py_ssize_t i = 0, start = 0, n = len(data)
    cdef unsigned char c
    cdef int depth, kind
    cdef bint closed
    toks = []
    while i < n:
        c = p[i]
        start = i
        if _is_ws(c):
            i += 1
            while i < n and _is_ws(p[i]):
                i += 1
            toks.append((WS, start, i))
        elif c == 0x22:
            i += 1
            closed = False
            while i < n:
                if p[i] == 0x22:
                    if i + 1 < n and p[i + 1] == 0x22:
                        i += 2
                    else:
                        i += 1
                        closed = True
                        break
                else:
                    i += 1
            toks.append((STRING if closed else ERR, start, i))
        elif c == 0x28 and i + 1 < n and p[i + 1] == 0x2A:
            depth = 1
            i += 2
            while i < n and depth:
                if p[i] == 0x28 and i + 1 < n and p[i + 1] == 0x2A:
                    depth += 1
                    i += 2
                elif p[i] == 0x2A and i + 1 < n and p[i + 1] == 0x29:
                    depth -= 1
                    i += 2
                else:
                    i += 1
            toks.append((COMMENT if depth == 0 else ERR, start, i))
        elif _is_letter(c):
            i += 1
            while i < n and _is_ident(p[i]):
                i += 1
            kind = KW if data[start:i] in keywords else IDENT
            toks.append((kind, start, i))
        elif 0x30 <= c <= 0x39:
            i += 1
            while i < n and 0x30 <= p[i] <= 0x39:
                i += 1
            if i + 1 < n and p[i] == 0x2E and 0x30 <= p[i + 1] <= 0x39:
                i += 2
                while i < n and 0x30 <= p[i] <= 0x39:
                    i += 1
            toks.append((NUMBER, start, i))
        elif c == 0x2E:
            i += 1
            if i >= n or _is_ws(p[i]):
                toks.append((DOT, start, i))
            else:
                toks.append((DELIM, start, i))
        else:
            i += 1
            toks.append((DELIM, start, i))
    return toks
