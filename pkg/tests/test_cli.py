import os
import subprocess
import sys
import time

import pytest

from proofdock.channel import open_fifo_pair, open_socket
from proofdock.client import ProtocolClient
from proofdock.document import Assignment, DefineNode, Edit, Report

SERVER = [sys.executable, "-m", "proofdock.server"]


def wait_for(predicate, timeout=10.0):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if predicate():
            return True
        time.sleep(0.05)
    return False


def mini_session(client):
    client.define_command(1, "Proof.")
    client.update(0, 1, [Edit("a.v", DefineNode((1,)))])
    events = [client.read_event() for _ in range(3)]
    assert isinstance(events[0], Assignment)
    assert all(isinstance(e, Report) for e in events[1:])
    assert events[1].markup.name == "coq.keyword"


def test_fifo_server_process(tmp_path):
    to_server = str(tmp_path / "in.fifo")
    from_server = str(tmp_path / "out.fifo")
    os.mkfifo(to_server)
    os.mkfifo(from_server)
    proc = subprocess.Popen(
        SERVER + ["--fifo-in", to_server, "--fifo-out", from_server,
                  "--log", str(tmp_path / "server.log"), "--log-level", "debug"]
    )
    try:
        endpoint = open_fifo_pair(
            from_server, to_server, open_input_first=False, timeout=10
        )
        client = ProtocolClient(endpoint)
        mini_session(client)
        client.close()
        assert proc.wait(timeout=10) == 0  # orderly close -> exit 0
    finally:
        if proc.poll() is None:
            proc.kill()
            proc.wait()
    log_text = (tmp_path / "server.log").read_text()
    assert "inbound update" in log_text


def test_gateway_server_process(tmp_path):
    port = _free_port()
    proc = subprocess.Popen(
        SERVER + ["--gateway-port", str(port), "--log-level", "error"]
    )
    try:
        client = ProtocolClient(_connect_retry(port))
        mini_session(client)
        client.close()
        # gateway keeps serving: a second client connects after the first
        client2 = ProtocolClient(_connect_retry(port))
        client2.define_command(2, "Qed.")
        client2.update(1, 2, [Edit("a.v", DefineNode((2,)))])
        assert isinstance(client2.read_event(), Assignment)
        client2.close()
    finally:
        proc.kill()
        proc.wait()


def test_cli_argument_validation():
    bad = subprocess.run(SERVER + ["--fifo-in", "x"], capture_output=True)
    assert bad.returncode == 2
    none = subprocess.run(SERVER, capture_output=True)
    assert none.returncode == 2
    both = subprocess.run(
        SERVER + ["--fifo-in", "a", "--listen", "1"], capture_output=True
    )
    assert both.returncode == 2


def _free_port():
    import socket

    s = socket.socket()
    s.bind(("127.0.0.1", 0))
    port = s.getsockname()[1]
    s.close()
    return port


def _connect_retry(port, timeout=10.0):
    from proofdock.channel import ChannelError

    deadline = time.monotonic() + timeout
    while True:
        try:
            return open_socket("127.0.0.1", port, timeout=2)
        except ChannelError:
            if time.monotonic() >= deadline:
                raise
            time.sleep(0.1)
