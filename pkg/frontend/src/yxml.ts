/**
 * Untyped markup trees and their transfer syntax.
 *
 * A tree is an element (name, ordered attributes, children) or a text leaf.
 * The wire form brackets element markers between two reserved control
 * characters and leaves text completely unquoted:
 *
 *     open  marker:  X Y name (Y attr=value)* X
 *     close marker:  X Y X
 *     text:          emitted verbatim
 *
 * with X = U+0005 and Y = U+0006.  Because both markers are ASCII, parsing
 * commutes with UTF-8 decoding; this module works on decoded strings and
 * relies on that commutation for byte streams.
 */

export const X = "\x05";
export const Y = "\x06";

export interface Elem {
  kind: "elem";
  name: string;
  attrs: [string, string][];
  body: Tree[];
}

export interface TextNode {
  kind: "text";
  content: string;
}

export type Tree = Elem | TextNode;
export type Body = Tree[];

export function elem(
  name: string,
  attrs: [string, string][] = [],
  body: Tree[] = [],
): Elem {
  return { kind: "elem", name, attrs, body };
}

export function text(content: string): TextNode {
  return { kind: "text", content };
}

export class YxmlError extends Error {
  constructor(
    message: string,
    readonly position: number | null = null,
  ) {
    super(position === null ? message : `${message} (at offset ${position})`);
    this.name = "YxmlError";
  }
}

const FORBIDDEN = /[\x00\x05\x06]/;

function checkField(s: string, what: string): void {
  if (FORBIDDEN.test(s)) {
    throw new YxmlError(`reserved control character in ${what}`);
  }
}

function emit(tree: Tree, out: string[]): void {
  if (tree.kind === "text") {
    if (!tree.content) throw new YxmlError("empty text node");
    checkField(tree.content, "text");
    out.push(tree.content);
    return;
  }
  if (!tree.name) throw new YxmlError("empty element name");
  checkField(tree.name, "element name");
  const parts = [X, Y, tree.name];
  for (const [name, value] of tree.attrs) {
    if (!name) throw new YxmlError("empty attribute name");
    checkField(name, "attribute name");
    checkField(value, "attribute value");
    parts.push(Y, name, "=", value);
  }
  parts.push(X);
  out.push(parts.join(""));
  for (const child of tree.body) emit(child, out);
  out.push(X + Y + X);
}

/** Encode a body as a transfer-syntax string (UTF-8 encode for the wire). */
export function stringOfBody(body: Body): string {
  const out: string[] = [];
  for (const tree of body) emit(tree, out);
  return out.join("");
}

/**
 * Parse transfer-syntax input into a normalized body: adjacent text merged,
 * empty text dropped, so parseBody(stringOfBody(b)) structurally equals b
 * for every normalized body b.
 */
export function parseBody(data: string): Body {
  type Frame = { name: string | null; attrs: [string, string][]; children: Tree[] };
  const stack: Frame[] = [{ name: null, attrs: [], children: [] }];
  let texts: string[] = [];

  const flush = () => {
    if (texts.length) {
      const merged = texts.join("");
      if (merged) stack[stack.length - 1]!.children.push(text(merged));
      texts = [];
    }
  };

  let pos = 0;
  const n = data.length;
  while (pos <= n) {
    let cut = data.indexOf(X, pos);
    if (cut < 0) cut = n;
    const seg = data.slice(pos, cut);
    const markerPos = pos - 1; // offset of the X that opened this segment
    if (!seg) {
      // empty segment between adjacent markers
    } else if (seg.startsWith(Y)) {
      if (seg === Y) {
        flush();
        if (stack.length === 1) {
          throw new YxmlError("unbalanced: close marker with no open element", markerPos);
        }
        const frame = stack.pop()!;
        stack[stack.length - 1]!.children.push(
          elem(frame.name!, frame.attrs, frame.children),
        );
      } else {
        const parts = seg.slice(1).split(Y);
        const name = parts[0]!;
        if (!name) {
          throw new YxmlError("element-open marker with empty name", markerPos);
        }
        const attrs: [string, string][] = [];
        for (const part of parts.slice(1)) {
          const i = part.indexOf("=");
          if (i < 0) {
            throw new YxmlError(`attribute token without '=': ${JSON.stringify(part)}`, markerPos);
          }
          attrs.push([part.slice(0, i), part.slice(i + 1)]);
        }
        flush();
        stack.push({ name, attrs, children: [] });
      }
    } else {
      // plain text; stray Y separators (invalid input) are dropped
      for (const piece of seg.split(Y)) if (piece) texts.push(piece);
    }
    pos = cut + 1;
  }
  flush();
  if (stack.length !== 1) {
    throw new YxmlError(`unbalanced: ${stack.length - 1} element(s) left open`, n);
  }
  return stack[0]!.children;
}

/** Parse input that must encode exactly one tree. */
export function parseTree(data: string): Tree {
  const body = parseBody(data);
  if (body.length !== 1) {
    throw new YxmlError(`expected single tree, got ${body.length} trees`);
  }
  return body[0]!;
}
