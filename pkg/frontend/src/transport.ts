/**
 * Byte-stream transport abstraction: the gateway speaks the identical
 * chunked protocol whether reached over a raw TCP socket (Node, tests)
 * or a WebSocket relay (browser).
 */

export interface Transport {
  send(data: Uint8Array): void;
  onData(handler: (data: Uint8Array) => void): void;
  onClose(handler: () => void): void;
  close(): void;
}

/** In-memory transport for tests: captures sends, lets tests inject data. */
export class LoopbackTransport implements Transport {
  sent: Uint8Array[] = [];
  closed = false;
  private dataHandlers: ((data: Uint8Array) => void)[] = [];
  private closeHandlers: (() => void)[] = [];

  send(data: Uint8Array): void {
    if (this.closed) throw new Error("transport closed");
    this.sent.push(data);
  }

  onData(handler: (data: Uint8Array) => void): void {
    this.dataHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  close(): void {
    this.closed = true;
  }

  /** Test hook: deliver bytes as if they arrived from the peer. */
  inject(data: Uint8Array): void {
    for (const h of this.dataHandlers) h(data);
  }

  /** Test hook: simulate the peer dropping the connection. */
  drop(): void {
    this.closed = true;
    for (const h of this.closeHandlers) h();
  }
}
