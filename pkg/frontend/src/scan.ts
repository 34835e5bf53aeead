/**
 * Client-side mirror of the prover's proof-script scanner, used only to
 * split the buffer into command spans the same way the server does.  The
 * scan runs over UTF-8 bytes with bytes >= 0x80 counting as identifier
 * letters, so every multi-byte sequence stays inside a single token and
 * both sides cut the text at identical positions.
 */

export const enum TokenKind {
  Keyword = 0,
  Ident = 1,
  Number = 2,
  String = 3,
  Comment = 4,
  Delimiter = 5,
  ProofDot = 6,
  Whitespace = 7,
  Error = 8,
}

export interface ScanToken {
  kind: TokenKind;
  start: number; // byte offsets
  stop: number;
}

function isWs(c: number): boolean {
  return c === 0x20 || c === 0x09 || c === 0x0a || c === 0x0d;
}

function isLetter(c: number): boolean {
  return (c >= 0x41 && c <= 0x5a) || (c >= 0x61 && c <= 0x7a) || c >= 0x80;
}

function isIdent(c: number): boolean {
  return isLetter(c) || (c >= 0x30 && c <= 0x39) || c === 0x5f || c === 0x27;
}

/** Exact maximal-munch partition of the UTF-8 bytes into tokens. */
export function scan(data: Uint8Array, keywords: Set<string>): ScanToken[] {
  const decoder = new TextDecoder();
  const toks: ScanToken[] = [];
  let i = 0;
  const n = data.length;
  while (i < n) {
    const c = data[i]!;
    const start = i;
    if (isWs(c)) {
      i++;
      while (i < n && isWs(data[i]!)) i++;
      toks.push({ kind: TokenKind.Whitespace, start, stop: i });
    } else if (c === 0x22) {
      // double-quoted string, "" escapes a quote
      i++;
      let closed = false;
      while (i < n) {
        if (data[i] === 0x22) {
          if (i + 1 < n && data[i + 1] === 0x22) {
            i += 2;
          } else {
            i++;
            closed = true;
            break;
          }
        } else {
          i++;
        }
      }
      toks.push({ kind: closed ? TokenKind.String : TokenKind.Error, start, stop: i });
    } else if (c === 0x28 && i + 1 < n && data[i + 1] === 0x2a) {
      // (* nested comment *)
      let depth = 1;
      i += 2;
      while (i < n && depth) {
        if (data[i] === 0x28 && i + 1 < n && data[i + 1] === 0x2a) {
          depth++;
          i += 2;
        } else if (data[i] === 0x2a && i + 1 < n && data[i + 1] === 0x29) {
          depth--;
          i += 2;
        } else {
          i++;
        }
      }
      toks.push({
        kind: depth === 0 ? TokenKind.Comment : TokenKind.Error,
        start,
        stop: i,
      });
    } else if (isLetter(c)) {
      i++;
      while (i < n && isIdent(data[i]!)) i++;
      const word = decoder.decode(data.subarray(start, i));
      toks.push({
        kind: keywords.has(word) ? TokenKind.Keyword : TokenKind.Ident,
        start,
        stop: i,
      });
    } else if (c >= 0x30 && c <= 0x39) {
      i++;
      while (i < n && data[i]! >= 0x30 && data[i]! <= 0x39) i++;
      // decimal point: dot directly between digits stays in the number
      if (i + 1 < n && data[i] === 0x2e && data[i + 1]! >= 0x30 && data[i + 1]! <= 0x39) {
        i += 2;
        while (i < n && data[i]! >= 0x30 && data[i]! <= 0x39) i++;
      }
      toks.push({ kind: TokenKind.Number, start, stop: i });
    } else if (c === 0x2e) {
      i++;
      const kind = i >= n || isWs(data[i]!) ? TokenKind.ProofDot : TokenKind.Delimiter;
      toks.push({ kind, start, stop: i });
    } else {
      i++;
      toks.push({ kind: TokenKind.Delimiter, start, stop: i });
    }
  }
  return toks;
}

export interface Span {
  text: string;
  /** byte offset of the span within the whole buffer's UTF-8 form */
  byteStart: number;
  byteLength: number;
}

/**
 * Command spans: split after each terminator dot; trailing text without a
 * terminator forms a final span; concatenation restores the buffer.
 */
export function splitSpans(buffer: string, keywords?: Set<string>): Span[] {
  const data = new TextEncoder().encode(buffer);
  const decoder = new TextDecoder();
  const spans: Span[] = [];
  let last = 0;
  for (const tok of scan(data, keywords ?? new Set())) {
    if (tok.kind === TokenKind.ProofDot) {
      spans.push({
        text: decoder.decode(data.subarray(last, tok.stop)),
        byteStart: last,
        byteLength: tok.stop - last,
      });
      last = tok.stop;
    }
  }
  if (last < data.length) {
    spans.push({
      text: decoder.decode(data.subarray(last)),
      byteStart: last,
      byteLength: data.length - last,
    });
  }
  return spans;
}
