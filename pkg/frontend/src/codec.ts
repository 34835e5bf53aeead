/**
 * Typed encode/decode combinators over untyped markup bodies, the exact
 * mirror of the server side: base values unwrapped, composite values
 * wrapping each constituent in a reserved ":" element, variants tagged by
 * a "tag" attribute carrying the case index.  Every decoder is the strict
 * left inverse of its encoder.
 */

import { Body, Elem, Tree, elem, text } from "./yxml.js";

/** Reserved wrapper element name used by all composite codecs. */
export const WRAPPER = ":";
/** Attribute carrying the case index of a variant value. */
export const TAG_ATTR = "tag";

const INT_RE = /^(0|-?[1-9][0-9]*)$/;

export class CodecError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "CodecError";
  }
}

export type Encoder<A> = (value: A) => Body;
export type Decoder<A> = (body: Body) => A;

function wrap(body: Body): Elem {
  return elem(WRAPPER, [], body);
}

function unwrap(tree: Tree): Body {
  if (tree.kind !== "elem" || tree.name !== WRAPPER || tree.attrs.length) {
    throw new CodecError(`expected plain "${WRAPPER}" wrapper`);
  }
  return tree.body;
}

// -- base types --------------------------------------------------------------

export const encodeString: Encoder<string> = (v) => (v ? [text(v)] : []);

export const decodeString: Decoder<string> = (body) => {
  if (body.length === 0) return "";
  const only = body[0]!;
  if (body.length === 1 && only.kind === "text") return only.content;
  throw new CodecError("expected text body");
};

export const encodeInt: Encoder<number> = (v) => {
  if (!Number.isSafeInteger(v)) throw new CodecError(`not an integer: ${v}`);
  return encodeString(String(v));
};

export const decodeInt: Decoder<number> = (body) => {
  const s = decodeString(body);
  if (!INT_RE.test(s)) throw new CodecError(`not a decimal integer: ${JSON.stringify(s)}`);
  return Number(s);
};

export const encodeBool: Encoder<boolean> = (v) => encodeString(v ? "1" : "0");

export const decodeBool: Decoder<boolean> = (body) => {
  const s = decodeString(body);
  if (s === "1") return true;
  if (s === "0") return false;
  throw new CodecError(`not a boolean: ${JSON.stringify(s)}`);
};

// -- composites --------------------------------------------------------------

export function encodePair<A, B>(
  encA: Encoder<A>,
  encB: Encoder<B>,
): Encoder<[A, B]> {
  return ([a, b]) => [wrap(encA(a)), wrap(encB(b))];
}

export function decodePair<A, B>(
  decA: Decoder<A>,
  decB: Decoder<B>,
): Decoder<[A, B]> {
  return (body) => {
    if (body.length !== 2) {
      throw new CodecError(`expected pair body, got ${body.length} nodes`);
    }
    return [decA(unwrap(body[0]!)), decB(unwrap(body[1]!))];
  };
}

export function encodeList<A>(encA: Encoder<A>): Encoder<A[]> {
  return (vs) => vs.map((v) => wrap(encA(v)));
}

export function decodeList<A>(decA: Decoder<A>): Decoder<A[]> {
  return (body) => body.map((tree) => decA(unwrap(tree)));
}

/** None / value as a two-case variant (case 0 = absent). */
export function encodeOption<A>(encA: Encoder<A>): Encoder<A | null> {
  return encodeVariant<A | null>([
    (v) => (v === null ? [] : null),
    (v) => (v === null ? null : encA(v)),
  ]);
}

export function decodeOption<A>(decA: Decoder<A>): Decoder<A | null> {
  return decodeVariant<A | null>([() => null, decA]);
}

/**
 * Tagged sum: each case function returns the payload body for values it
 * covers and null otherwise; the first match wins and its index becomes the
 * tag attribute on a single wrapper element.
 */
export function encodeVariant<A>(cases: ((v: A) => Body | null)[]): Encoder<A> {
  return (v) => {
    for (let index = 0; index < cases.length; index++) {
      const payload = cases[index]!(v);
      if (payload !== null) {
        return [elem(WRAPPER, [[TAG_ATTR, String(index)]], payload)];
      }
    }
    throw new CodecError("no variant case matches value");
  };
}

export function decodeVariant<A>(cases: Decoder<A>[]): Decoder<A> {
  return (body) => {
    if (body.length !== 1) {
      throw new CodecError(`expected variant body, got ${body.length} nodes`);
    }
    const tree = body[0]!;
    if (
      tree.kind !== "elem" ||
      tree.name !== WRAPPER ||
      tree.attrs.length !== 1 ||
      tree.attrs[0]![0] !== TAG_ATTR
    ) {
      throw new CodecError("expected tagged wrapper");
    }
    const tag = tree.attrs[0]![1];
    if (!INT_RE.test(tag) || Number(tag) >= cases.length) {
      throw new CodecError(`unknown variant tag ${JSON.stringify(tag)}`);
    }
    return cases[Number(tag)]!(tree.body);
  };
}

// -- raw trees ---------------------------------------------------------------

export const encodeTree: Encoder<Tree> = (v) => [v];

export const decodeTree: Decoder<Tree> = (body) => {
  if (body.length !== 1) {
    throw new CodecError(`expected single tree, got ${body.length} nodes`);
  }
  return body[0]!;
};
