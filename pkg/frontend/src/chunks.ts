/**
 * Length-prefixed chunk framing: a chunk is the payload length in ASCII
 * decimal digits, a newline, then the payload bytes.  A message is a
 * function-name chunk followed by arity-many argument chunks.
 */

const NL = 0x0a;
const MAX_HEADER_DIGITS = 19;

export class FramingError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "FramingError";
  }
}

export function encodeChunk(payload: Uint8Array): Uint8Array {
  const header = new TextEncoder().encode(`${payload.length}\n`);
  const out = new Uint8Array(header.length + payload.length);
  out.set(header, 0);
  out.set(payload, header.length);
  return out;
}

export function concatBytes(parts: Uint8Array[]): Uint8Array {
  const total = parts.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let offset = 0;
  for (const p of parts) {
    out.set(p, offset);
    offset += p.length;
  }
  return out;
}

/**
 * Incremental chunk parser: feed arbitrary byte slices as they arrive,
 * pull complete chunks out.  Framing faults throw and poison the assembler.
 */
export class ChunkAssembler {
  private buffer: Uint8Array = new Uint8Array(0);
  private ready: Uint8Array[] = [];
  private failed: FramingError | null = null;

  feed(data: Uint8Array): void {
    if (this.failed) throw this.failed;
    this.buffer = this.buffer.length ? concatBytes([this.buffer, data]) : data;
    try {
      this.drain();
    } catch (err) {
      if (err instanceof FramingError) this.failed = err;
      throw err;
    }
  }

  /** Next complete chunk, or null if more bytes are needed. */
  next(): Uint8Array | null {
    if (this.failed) throw this.failed;
    return this.ready.shift() ?? null;
  }

  /** Bytes sitting unconsumed (partial chunk); nonzero at EOF means a fault. */
  get pending(): number {
    return this.buffer.length;
  }

  private drain(): void {
    for (;;) {
      const nl = this.buffer.indexOf(NL);
      if (nl < 0) {
        if (this.buffer.length > MAX_HEADER_DIGITS) {
          throw new FramingError("length header too long");
        }
        return;
      }
      if (nl === 0 || nl > MAX_HEADER_DIGITS) {
        throw new FramingError(nl === 0 ? "empty length header" : "length header too long");
      }
      let length = 0;
      for (let i = 0; i < nl; i++) {
        const digit = this.buffer[i]! - 0x30;
        if (digit < 0 || digit > 9) {
          throw new FramingError("non-digit in length header");
        }
        length = length * 10 + digit;
      }
      if (this.buffer.length < nl + 1 + length) return;
      this.ready.push(this.buffer.slice(nl + 1, nl + 1 + length));
      this.buffer = this.buffer.slice(nl + 1 + length);
    }
  }
}

export interface WireMessage {
  functionName: string;
  arguments: Uint8Array[];
}

export function encodeMessage(msg: WireMessage): Uint8Array {
  const parts = [encodeChunk(new TextEncoder().encode(msg.functionName))];
  for (const arg of msg.arguments) parts.push(encodeChunk(arg));
  return concatBytes(parts);
}

/**
 * Incremental message parser: groups chunks into (name, arity-many args)
 * using an arity table.  Unknown function names are fatal by design.
 */
export class MessageAssembler {
  private chunks = new ChunkAssembler();
  private current: { name: string; args: Uint8Array[]; arity: number } | null = null;

  constructor(private arityTable: Record<string, number>) {}

  feed(data: Uint8Array): void {
    this.chunks.feed(data);
  }

  next(): WireMessage | null {
    for (;;) {
      const chunk = this.chunks.next();
      if (chunk === null) return null;
      if (this.current === null) {
        const name = new TextDecoder().decode(chunk);
        const arity = this.arityTable[name];
        if (arity === undefined) {
          throw new FramingError(`unknown protocol function ${JSON.stringify(name)}`);
        }
        this.current = { name, args: [], arity };
      } else {
        this.current.args.push(chunk);
      }
      if (this.current.args.length === this.current.arity) {
        const { name, args } = this.current;
        this.current = null;
        return { functionName: name, arguments: args };
      }
    }
  }
}
