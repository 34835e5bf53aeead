/**
 * UTF-8 byte offset <-> UTF-16 code unit offset conversion within a string.
 *
 * The prover addresses text by UTF-8 byte offsets; the editor buffer is
 * UTF-16 addressed.  Both conversions demand offsets on code point
 * boundaries (surrogate pairs and multi-byte sequences never split).
 */

export class OffsetError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "OffsetError";
  }
}

function utf8LengthOf(codePoint: number): number {
  if (codePoint < 0x80) return 1;
  if (codePoint < 0x800) return 2;
  if (codePoint < 0x10000) return 3;
  return 4;
}

/** Total UTF-8 byte length of a string. */
export function utf8Length(text: string): number {
  let bytes = 0;
  for (const ch of text) bytes += utf8LengthOf(ch.codePointAt(0)!);
  return bytes;
}

/** UTF-16 code unit offset corresponding to a UTF-8 byte offset. */
export function byteToUtf16(text: string, byteOffset: number): number {
  if (byteOffset < 0) throw new OffsetError(`negative offset ${byteOffset}`);
  let bytes = 0;
  let units = 0;
  for (const ch of text) {
    if (bytes === byteOffset) return units;
    bytes += utf8LengthOf(ch.codePointAt(0)!);
    units += ch.length;
    if (bytes > byteOffset) {
      throw new OffsetError(`byte offset ${byteOffset} splits a UTF-8 sequence`);
    }
  }
  if (bytes === byteOffset) return units;
  throw new OffsetError(`byte offset ${byteOffset} beyond end (${bytes} bytes)`);
}

/** UTF-8 byte offset corresponding to a UTF-16 code unit offset. */
export function utf16ToByte(text: string, unitOffset: number): number {
  if (unitOffset < 0) throw new OffsetError(`negative offset ${unitOffset}`);
  let bytes = 0;
  let units = 0;
  for (const ch of text) {
    if (units === unitOffset) return bytes;
    bytes += utf8LengthOf(ch.codePointAt(0)!);
    units += ch.length;
    if (units > unitOffset) {
      throw new OffsetError(`offset ${unitOffset} splits a surrogate pair`);
    }
  }
  if (units === unitOffset) return bytes;
  throw new OffsetError(`offset ${unitOffset} beyond end (${units} units)`);
}
