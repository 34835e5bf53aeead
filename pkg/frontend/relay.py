#!/usr/bin/env python3
"""Browser relay: serves the editor page and bridges WebSocket frames to the
prover gateway's TCP socket, byte for byte.  The wire format on both legs is
the identical chunked protocol; this process never inspects the payload.

Usage:
    python3 relay.py [--port 8800] [--gateway-host 127.0.0.1]
                     [--gateway-port 9091] [--root .]

Then open http://localhost:8800/browser/ with a prover server running as
`proofdock-server --gateway-port 9091`.
"""

import argparse
import base64
import hashlib
import http.server
import socket
import struct
import threading

WS_GUID = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11"

OP_TEXT = 0x1
OP_BINARY = 0x2
OP_CLOSE = 0x8
OP_PING = 0x9
OP_PONG = 0xA


def read_exact(rfile, n: int) -> bytes:
    data = b""
    while len(data) < n:
        more = rfile.read(n - len(data))
        if not more:
            raise ConnectionError("websocket peer closed")
        data += more
    return data


def read_frame(rfile):
    b1, b2 = read_exact(rfile, 2)
    opcode = b1 & 0x0F
    length = b2 & 0x7F
    if length == 126:
        (length,) = struct.unpack(">H", read_exact(rfile, 2))
    elif length == 127:
        (length,) = struct.unpack(">Q", read_exact(rfile, 8))
    mask = read_exact(rfile, 4) if b2 & 0x80 else None
    payload = read_exact(rfile, length)
    if mask:
        payload = bytes(c ^ mask[i % 4] for i, c in enumerate(payload))
    return opcode, payload


def write_frame(wfile, opcode: int, payload: bytes) -> None:
    header = bytes([0x80 | opcode])
    n = len(payload)
    if n < 126:
        header += bytes([n])
    elif n < 1 << 16:
        header += bytes([126]) + struct.pack(">H", n)
    else:
        header += bytes([127]) + struct.pack(">Q", n)
    wfile.write(header + payload)
    wfile.flush()


class RelayHandler(http.server.SimpleHTTPRequestHandler):
    gateway_host = "127.0.0.1"
    gateway_port = 9091
    protocol_version = "HTTP/1.1"

    def do_GET(self):
        if self.headers.get("Upgrade", "").lower() == "websocket":
            self.handle_websocket()
        else:
            super().do_GET()

    def handle_websocket(self):
        key = self.headers.get("Sec-WebSocket-Key", "")
        accept = base64.b64encode(
            hashlib.sha1((key + WS_GUID).encode()).digest()
        ).decode()
        self.send_response_only(101)
        self.send_header("Upgrade", "websocket")
        self.send_header("Connection", "Upgrade")
        self.send_header("Sec-WebSocket-Accept", accept)
        self.end_headers()
        self.close_connection = True

        upstream = socket.create_connection(
            (self.gateway_host, self.gateway_port), timeout=10
        )
        upstream.settimeout(None)
        upstream.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        write_lock = threading.Lock()

        def pump_upstream():
            try:
                while True:
                    data = upstream.recv(65536)
                    if not data:
                        break
                    with write_lock:
                        write_frame(self.wfile, OP_BINARY, data)
            except OSError:
                pass
            finally:
                with write_lock:
                    try:
                        write_frame(self.wfile, OP_CLOSE, b"")
                    except OSError:
                        pass

        threading.Thread(target=pump_upstream, daemon=True).start()
        try:
            while True:
                opcode, payload = read_frame(self.rfile)
                if opcode == OP_CLOSE:
                    break
                if opcode == OP_PING:
                    with write_lock:
                        write_frame(self.wfile, OP_PONG, payload)
                elif opcode in (OP_BINARY, OP_TEXT):
                    upstream.sendall(payload)
        except (ConnectionError, OSError):
            pass
        finally:
            # shutdown (not just close) so the pump thread's blocked recv
            # returns and the gateway sees end-of-stream immediately
            try:
                upstream.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
            upstream.close()

    def log_message(self, fmt, *args):
        pass  # quiet


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--port", type=int, default=8800)
    parser.add_argument("--gateway-host", default="127.0.0.1")
    parser.add_argument("--gateway-port", type=int, default=9091)
    parser.add_argument("--root", default=".")
    args = parser.parse_args()

    RelayHandler.gateway_host = args.gateway_host
    RelayHandler.gateway_port = args.gateway_port
    handler = lambda *a, **kw: RelayHandler(*a, directory=args.root, **kw)
    server = http.server.ThreadingHTTPServer(("127.0.0.1", args.port), handler)
    print(f"relay on http://127.0.0.1:{args.port} -> "
          f"{args.gateway_host}:{args.gateway_port}")
    server.serve_forever()


if __name__ == "__main__":
    main()
