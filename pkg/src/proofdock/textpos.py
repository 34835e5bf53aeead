"""Offset translation between UTF-8 byte offsets and UTF-16 code units.

The prover side addresses text by byte offsets into its UTF-8 source; the
editor side by UTF-16 code units.  Both conversions are total on code-point
boundaries, mutually inverse there, monotonic, and the identity on ASCII.
Supplementary-plane code points count as two UTF-16 units (full Unicode, not
just the Basic Multilingual Plane).
"""

from __future__ import annotations

from dataclasses import dataclass


class OffsetError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Range:
    """Half-open [start, stop) in one offset unit."""

    start: int
    stop: int

    def __post_init__(self):
        if not 0 <= self.start <= self.stop:
            raise OffsetError(f"invalid range [{self.start}, {self.stop})")

    @property
    def length(self) -> int:
        return self.stop - self.start

    def contains(self, other: "Range") -> bool:
        return self.start <= other.start and other.stop <= self.stop


def _utf16_len(s: str) -> int:
    n = len(s)
    for ch in s:
        if ord(ch) > 0xFFFF:
            n += 1
    return n


def byte_offset_to_char_offset(text: bytes, off: int) -> int:
    """UTF-16 code units needed for the code points in text[0:off]."""
    if not 0 <= off <= len(text):
        raise OffsetError(f"byte offset {off} out of range 0..{len(text)}")
    try:
        prefix = text[:off].decode("utf-8")
    except UnicodeDecodeError as exc:
        raise OffsetError(
            f"byte offset {off} not on a UTF-8 boundary: {exc.reason}"
        ) from exc
    return _utf16_len(prefix)


def char_offset_to_byte_offset(text: bytes, off: int) -> int:
    """Inverse of byte_offset_to_char_offset on valid boundaries."""
    if off < 0:
        raise OffsetError(f"negative offset {off}")
    try:
        decoded = text.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise OffsetError(f"invalid UTF-8 text: {exc.reason}") from exc
    units = 0
    nbytes = 0
    for ch in decoded:
        if units == off:
            return nbytes
        step = 2 if ord(ch) > 0xFFFF else 1
        if units + step > off:
            raise OffsetError(f"offset {off} splits a surrogate pair")
        units += step
        nbytes += len(ch.encode("utf-8"))
    if units == off:
        return nbytes
    raise OffsetError(f"UTF-16 offset {off} out of range 0..{units}")


def range_to_char_offsets(text: bytes, r: Range) -> Range:
    return Range(
        byte_offset_to_char_offset(text, r.start),
        byte_offset_to_char_offset(text, r.stop),
    )


def range_to_byte_offsets(text: bytes, r: Range) -> Range:
    return Range(
        char_offset_to_byte_offset(text, r.start),
        char_offset_to_byte_offset(text, r.stop),
    )
