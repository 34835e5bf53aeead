#!/usr/bin/env python3
"""Throughput of the chunked channel over fifo pairs vs. loopback sockets.

Reported for information only; both transports must behave identically,
the numbers just document the platform trade-off.

Usage: python3 benchmarks/bench_transport.py [chunk_kb total_mb]
"""

import os
import sys
import tempfile
import threading
import time

from proofdock.channel import SocketListener, open_fifo_pair, open_socket


def run(writer_ep, reader_ep, chunk: bytes, count: int) -> float:
    done = threading.Event()

    def reader():
        for _ in range(count):
            reader_ep.read_chunk()
        done.set()

    t = threading.Thread(target=reader, daemon=True)
    t.start()
    t0 = time.perf_counter()
    for _ in range(count):
        writer_ep.write_chunk(chunk)
    writer_ep.flush()
    done.wait()
    return time.perf_counter() - t0


def fifo_endpoints(tmp):
    a, b = os.path.join(tmp, "a"), os.path.join(tmp, "b")
    os.mkfifo(a)
    os.mkfifo(b)
    holder = {}
    t = threading.Thread(
        target=lambda: holder.update(
            ep=open_fifo_pair(a, b, open_input_first=False, timeout=5)
        ),
        daemon=True,
    )
    t.start()
    server = open_fifo_pair(b, a, timeout=5)
    t.join(5)
    return server, holder["ep"]


def socket_endpoints():
    listener = SocketListener(0)
    holder = {}
    t = threading.Thread(
        target=lambda: holder.update(ep=open_socket("127.0.0.1", listener.port)),
        daemon=True,
    )
    t.start()
    server = listener.accept()
    listener.close()
    t.join(5)
    return server, holder["ep"]


def main():
    chunk_kb = int(sys.argv[1]) if len(sys.argv) > 1 else 64
    total_mb = int(sys.argv[2]) if len(sys.argv) > 2 else 256
    chunk = os.urandom(chunk_kb * 1024)
    count = total_mb * 1024 // chunk_kb

    with tempfile.TemporaryDirectory() as tmp:
        w, r = fifo_endpoints(tmp)
        elapsed = run(w, r, chunk, count)
        print(f"fifo:   {total_mb / elapsed:8.1f} MB/s "
              f"({count} x {chunk_kb} kB in {elapsed:.2f}s)")
        w.close()
        r.close()

    w, r = socket_endpoints()
    elapsed = run(w, r, chunk, count)
    print(f"socket: {total_mb / elapsed:8.1f} MB/s "
          f"({count} x {chunk_kb} kB in {elapsed:.2f}s)")
    w.close()
    r.close()


if __name__ == "__main__":
    main()
