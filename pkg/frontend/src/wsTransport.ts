/** WebSocket transport for browsers, connecting through the bundled relay
 * which bridges binary WebSocket frames to the gateway's TCP socket. */

import { Transport } from "./transport.js";

export function connectWebSocket(url: string): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const ws = new WebSocket(url);
    ws.binaryType = "arraybuffer";
    ws.onopen = () => resolve(new WebSocketTransport(ws));
    ws.onerror = () => reject(new Error(`websocket connect failed: ${url}`));
  });
}

class WebSocketTransport implements Transport {
  constructor(private ws: WebSocket) {}

  send(data: Uint8Array): void {
    this.ws.send(data);
  }

  onData(handler: (data: Uint8Array) => void): void {
    this.ws.onmessage = (event) => handler(new Uint8Array(event.data as ArrayBuffer));
  }

  onClose(handler: () => void): void {
    this.ws.onclose = () => handler();
  }

  close(): void {
    this.ws.close();
  }
}
