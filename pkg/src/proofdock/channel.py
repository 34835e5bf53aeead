"""Bidirectional byte transport with length-prefixed chunk framing.

A chunk on the wire is the ASCII decimal payload length, one newline byte,
then exactly that many payload bytes.  A protocol message is a chunk holding
the function name followed by arity-many argument chunks; the reader learns
the arity from a registry lookup, so it never has to interpret payloads.

Two interchangeable transports: a pair of named pipes (POSIX default) and a
TCP socket.  The framing layer is identical on both and treats every payload
as opaque binary.
"""

from __future__ import annotations

import errno
import io
import os
import socket
import time
from dataclasses import dataclass
from threading import Lock
from typing import Callable

MAX_LENGTH_DIGITS = 19  # overflow guard on the decimal header


class ChannelError(Exception):
    pass


class ChannelClosed(ChannelError):
    """Clean end of stream at a chunk boundary."""


class FramingError(ChannelError):
    """Corrupt header or truncated payload; the stream is unusable."""


class ProtocolError(ChannelError):
    """Session-fatal protocol violation (e.g. unknown function name)."""


@dataclass
class Message:
    function_name: str
    arguments: list  # list[bytes]

    def __post_init__(self):
        if not self.function_name or "\n" in self.function_name:
            raise ProtocolError(f"bad function name {self.function_name!r}")


class ChannelEndpoint:
    """One side of a private full-duplex byte channel.

    Reads and writes may proceed concurrently (one reader, one writer);
    write_message is additionally serialized by an internal lock so that
    concurrent producers never interleave bytes.
    """

    def __init__(self, reader: io.BufferedIOBase, writer: io.BufferedIOBase,
                 name: str = "channel"):
        self.reader = reader
        self.writer = writer
        self.name = name
        self._write_lock = Lock()
        self._socket: socket.socket | None = None  # set for socket transports

    # -- chunk layer ---------------------------------------------------------

    def write_chunk(self, payload: bytes) -> None:
        self.writer.write(b"%d\n" % len(payload))
        self.writer.write(payload)

    def read_chunk(self) -> bytes:
        header = bytearray()
        while True:
            b = self.reader.read(1)
            if not b:
                if not header:
                    raise ChannelClosed("end of stream")
                raise FramingError("end of stream inside length header")
            if b == b"\n":
                break
            if not b.isdigit():
                raise FramingError(f"non-digit byte {b!r} in length header")
            header += b
            if len(header) > MAX_LENGTH_DIGITS:
                raise FramingError("length header longer than 19 digits")
        if not header:
            raise FramingError("empty length header")
        n = int(header)
        payload = bytearray()
        while len(payload) < n:
            block = self.reader.read(n - len(payload))
            if not block:
                raise FramingError(
                    f"end of stream inside payload ({len(payload)}/{n} bytes)"
                )
            payload += block
        return bytes(payload)

    def flush(self) -> None:
        self.writer.flush()

    # -- message layer -------------------------------------------------------

    def write_message(self, message: Message) -> None:
        with self._write_lock:
            self.write_chunk(message.function_name.encode("ascii"))
            for arg in message.arguments:
                self.write_chunk(arg)
            self.flush()

    def read_message(self, arity_lookup: Callable[[str], int]) -> Message:
        name_bytes = self.read_chunk()
        try:
            name = name_bytes.decode("ascii")
            arity = arity_lookup(name)
        except (UnicodeDecodeError, KeyError):
            raise ProtocolError(f"unknown protocol function {name_bytes!r}")
        return Message(name, [self.read_chunk() for _ in range(arity)])

    def close(self) -> None:
        # For socket transports, shut the connection down first: it unblocks
        # any thread sitting in a buffered read (which would otherwise hold
        # the buffer lock forever and deadlock the reader close below).
        sock = getattr(self, "_socket", None)
        if sock is not None:
            try:
                sock.shutdown(socket.SHUT_RDWR)
            except OSError:
                pass
        for stream in (self.writer, self.reader):
            try:
                stream.close()
            except OSError:
                pass
        if sock is not None:
            sock.close()


# -- fifo transport ----------------------------------------------------------

class _PushbackReader:
    """Buffered reader with one stashed leading block (see _open_fifo_read)."""

    def __init__(self, inner, stash: bytes):
        self._inner = inner
        self._stash = stash

    def read(self, n: int = -1) -> bytes:
        if self._stash:
            if n < 0 or n >= len(self._stash):
                out, self._stash = self._stash, b""
            else:
                out, self._stash = self._stash[:n], self._stash[n:]
            return out
        return self._inner.read(n)

    def close(self) -> None:
        self._inner.close()


def _open_fifo_read(path, timeout: float):
    # A nonblocking open succeeds without a writer, but the fifo then reads
    # as EOF until the peer connects.  Probe with nonblocking reads: EOF
    # means no writer yet (keep waiting), EAGAIN means a writer is attached.
    # This keeps the rendezvous while turning an absent or wrongly-ordered
    # peer into a startup failure instead of a hang.
    fd = os.open(path, os.O_RDONLY | os.O_NONBLOCK)
    stash = b""
    deadline = time.monotonic() + timeout
    try:
        while True:
            try:
                block = os.read(fd, io.DEFAULT_BUFFER_SIZE)
            except BlockingIOError:
                break  # writer attached, no data yet
            if block:
                stash = block  # writer attached and already sent data
                break
            # EOF here means no writer has connected yet
            if time.monotonic() >= deadline:
                raise ChannelError(f"timeout waiting for a writer on fifo {path}")
            time.sleep(0.01)
    except BaseException:
        os.close(fd)
        raise
    os.set_blocking(fd, True)
    reader = open(fd, "rb", buffering=io.DEFAULT_BUFFER_SIZE)
    return _PushbackReader(reader, stash) if stash else reader


def _open_fifo_write(path, timeout: float) -> io.BufferedWriter:
    deadline = time.monotonic() + timeout
    while True:
        try:
            fd = os.open(path, os.O_WRONLY | os.O_NONBLOCK)
            break
        except OSError as exc:
            if exc.errno != errno.ENXIO:
                raise ChannelError(f"cannot open fifo {path}: {exc}") from exc
            if time.monotonic() >= deadline:
                raise ChannelError(
                    f"timeout waiting for a reader on fifo {path}"
                ) from exc
            time.sleep(0.01)
    os.set_blocking(fd, True)
    return open(fd, "wb", buffering=io.DEFAULT_BUFFER_SIZE)


def open_fifo_pair(path_in, path_out, *, open_input_first: bool = True,
                   timeout: float = 30.0) -> ChannelEndpoint:
    """Connect over an existing pair of named pipes.

    The server opens its input side first and its output side second; the
    client passes open_input_first=False so the two sides meet in opposite
    order.  A missing peer is detected by the write-open timeout rather than
    by hanging forever.
    """
    for p in (path_in, path_out):
        if not os.path.exists(p):
            raise ChannelError(f"no such fifo: {p}")
    if open_input_first:
        reader = _open_fifo_read(path_in, timeout)
        writer = _open_fifo_write(path_out, timeout)
    else:
        writer = _open_fifo_write(path_out, timeout)
        reader = _open_fifo_read(path_in, timeout)
    return ChannelEndpoint(reader, writer, name=f"fifo:{path_in},{path_out}")


# -- socket transport --------------------------------------------------------

def _endpoint_of_socket(sock: socket.socket, name: str) -> ChannelEndpoint:
    sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
    reader = sock.makefile("rb", buffering=io.DEFAULT_BUFFER_SIZE)
    writer = sock.makefile("wb", buffering=io.DEFAULT_BUFFER_SIZE)
    endpoint = ChannelEndpoint(reader, writer, name=name)
    endpoint._socket = sock  # kept for the shutdown-before-close in close()
    return endpoint


def open_socket(address: str, port: int, *, timeout: float = 30.0) -> ChannelEndpoint:
    try:
        sock = socket.create_connection((address, port), timeout=timeout)
    except OSError as exc:
        raise ChannelError(f"cannot connect to {address}:{port}: {exc}") from exc
    sock.settimeout(None)
    return _endpoint_of_socket(sock, name=f"socket:{address}:{port}")


class SocketListener:
    """Bound listening socket; accepts one peer at a time."""

    def __init__(self, port: int, host: str = "127.0.0.1"):
        self.sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self.sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        try:
            self.sock.bind((host, port))
        except OSError as exc:
            self.sock.close()
            raise ChannelError(f"cannot bind port {port}: {exc}") from exc
        self.sock.listen(1)

    @property
    def port(self) -> int:
        return self.sock.getsockname()[1]

    def accept(self) -> ChannelEndpoint:
        conn, peer = self.sock.accept()
        return _endpoint_of_socket(conn, name=f"socket:{peer[0]}:{peer[1]}")

    def close(self) -> None:
        self.sock.close()


def listen_socket(port: int, host: str = "127.0.0.1") -> ChannelEndpoint:
    """Bind, accept a single connection, and return its endpoint."""
    listener = SocketListener(port, host)
    try:
        return listener.accept()
    finally:
        listener.close()
