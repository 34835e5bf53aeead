/** TCP transport for Node environments (tests, headless tooling). */

import * as net from "node:net";

import { Transport } from "./transport.js";

export function connectSocket(
  host: string,
  port: number,
  timeoutMs = 10_000,
): Promise<Transport> {
  return new Promise((resolve, reject) => {
    const socket = net.createConnection({ host, port, noDelay: true });
    const timer = setTimeout(() => {
      socket.destroy();
      reject(new Error(`connect timeout to ${host}:${port}`));
    }, timeoutMs);
    socket.once("connect", () => {
      clearTimeout(timer);
      resolve(new SocketTransport(socket));
    });
    socket.once("error", (err) => {
      clearTimeout(timer);
      reject(err);
    });
  });
}

class SocketTransport implements Transport {
  constructor(private socket: net.Socket) {
    socket.on("error", () => socket.destroy());
  }

  send(data: Uint8Array): void {
    this.socket.write(data);
  }

  onData(handler: (data: Uint8Array) => void): void {
    this.socket.on("data", (buf) => handler(new Uint8Array(buf)));
  }

  onClose(handler: () => void): void {
    this.socket.on("close", handler);
  }

  close(): void {
    this.socket.end();
    this.socket.destroy();
  }
}
