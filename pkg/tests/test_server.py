import pathlib
import queue
import socket
import threading
import time

import pytest

from proofdock import wire
from proofdock.channel import ChannelEndpoint, Message, SocketListener, open_socket
from proofdock.client import ProtocolClient
from proofdock.document import (
    Assignment,
    DefineNode,
    Document,
    Edit,
    Report,
    SpanEdits,
    SpanInsert,
)
from proofdock.server import ProverServer

DATA = pathlib.Path(__file__).parent / "data"


class TeeReader:
    """Wraps a reader, recording every byte handed out."""

    def __init__(self, inner):
        self.inner = inner
        self.log = bytearray()

    def read(self, n=-1):
        block = self.inner.read(n)
        self.log += block
        return block

    def close(self):
        self.inner.close()


@pytest.fixture
def session():
    listener = SocketListener(0)
    server = ProverServer(workers=1)
    accepted = {}

    def accept():
        accepted["ep"] = listener.accept()
        server.attach(accepted["ep"])

    t = threading.Thread(target=accept, daemon=True)
    t.start()
    endpoint = open_socket("127.0.0.1", listener.port)
    t.join(5)
    listener.close()
    tee = TeeReader(endpoint.reader)
    endpoint.reader = tee
    client = ProtocolClient(endpoint)
    yield server, client, tee
    client.close()
    server.shutdown()


def read_events(client, n, timeout=5.0):
    events = []
    for _ in range(n):
        events.append(client.read_event())
    return events


SCRIPT_SPANS = [(1, "Lemma a. "), (2, "Proof. ")]


def run_scripted_session(client, server):
    """define, update, edit, cancel, remove_versions; returns (events, log)."""
    events = []
    client.define_command(1, "Lemma a. ")
    client.update(0, 1, [Edit("a.v", DefineNode((1,)))])
    events += read_events(client, 4)  # assignment + 3 reports
    server.document.wait_idle(5)

    client.define_command(2, "Proof. ")
    client.update(1, 2, [Edit("a.v", SpanEdits((SpanInsert(1, (2,)),), ()))])
    events += read_events(client, 3)  # assignment + 2 reports
    server.document.wait_idle(5)

    client.cancel_execution()
    client.remove_versions([0, 1])
    client.update(2, 3, [])
    events += read_events(client, 1)  # assignment only, everything reused
    server.document.wait_idle(5)
    return events


def test_end_to_end_matches_direct_module_calls(session):
    server, client, tee = session
    events = run_scripted_session(client, server)

    # replay the same script directly against a fresh document store
    oracle = Document(workers=1)
    try:
        oracle.define_command(1, "Lemma a. ")
        a1 = oracle.update(0, 1, [Edit("a.v", DefineNode((1,)))])
        oracle.wait_idle(5)
        oracle.define_command(2, "Proof. ")
        a2 = oracle.update(
            1, 2, [Edit("a.v", SpanEdits((SpanInsert(1, (2,)),), ()))]
        )
        oracle.wait_idle(5)
        oracle.cancel_execution()
        oracle.remove_versions([0, 1])
        a3 = oracle.update(2, 3, [])
        oracle.wait_idle(5)
        direct_reports = []
        while True:
            try:
                direct_reports.append(oracle.reports.get_nowait())
            except queue.Empty:
                break
    finally:
        oracle.close()

    assignments = [e for e in events if isinstance(e, Assignment)]
    reports = [e for e in events if isinstance(e, Report)]
    assert assignments == [a1, a2, a3]
    assert reports == direct_reports
    # reuse visible on the wire: span 1 kept its execution id
    assert a2.commands[1] == a1.commands[1]


def test_golden_transcript_reproducible(tmp_path):
    logs = []
    for _ in range(2):
        listener = SocketListener(0)
        server = ProverServer(workers=1)
        threading.Thread(
            target=lambda l=listener: server.attach(l.accept()), daemon=True
        ).start()
        endpoint = open_socket("127.0.0.1", listener.port)
        tee = TeeReader(endpoint.reader)
        endpoint.reader = tee
        client = ProtocolClient(endpoint)
        try:
            run_scripted_session(client, server)
        finally:
            client.close()
            server.shutdown()
            listener.close()
        logs.append(bytes(tee.log))
    assert logs[0] == logs[1]
    golden = DATA / "golden_transcript.bin"
    assert logs[0] == golden.read_bytes()


def test_handler_error_keeps_session_alive(session):
    server, client, tee = session
    client.define_command(1, "A.")
    client.define_command(1, "A.")  # duplicate id -> error message
    event = client.read_event()
    assert isinstance(event, str) and "duplicate" in event
    # session still works afterwards
    client.update(0, 1, [Edit("n", DefineNode((1,)))])
    events = read_events(client, 2)
    assert any(isinstance(e, Assignment) for e in events)
    assert not server.failed


def test_unknown_function_is_session_fatal(session):
    server, client, tee = session
    client.endpoint.write_chunk(b"4\nboom"[2:])  # name chunk for "boom"
    client.endpoint.write_chunk(b"")
    client.endpoint.flush()
    deadline = time.monotonic() + 5
    while not server.failed and time.monotonic() < deadline:
        time.sleep(0.01)
    assert server.failed


def test_malformed_argument_is_session_fatal(session):
    server, client, tee = session
    # update with undecodable YXML argument (unbalanced close marker)
    client.endpoint.write_message(
        Message("update", [b"\x05\x06\x05", b"0", b""])
    )
    deadline = time.monotonic() + 5
    while not server.failed and time.monotonic() < deadline:
        time.sleep(0.01)
    assert server.failed


def test_cancel_during_long_span_truncates_reports():
    # a giant span takes a while to report token by token
    listener = SocketListener(0)
    server = ProverServer(workers=1)
    threading.Thread(
        target=lambda: server.attach(listener.accept()), daemon=True
    ).start()
    endpoint = open_socket("127.0.0.1", listener.port)
    client = ProtocolClient(endpoint)
    try:
        client.define_command(1, "foo bar " * 60000)
        client.update(0, 1, [Edit("n", DefineNode((1,)))])
        assert isinstance(client.read_event(), Assignment)
        client.read_event()  # at least one report has streamed
        client.cancel_execution()
        server.document.wait_idle(10)
        # sentinel: the next update's assignment closes the report stream
        client.update(1, 2, [])
        streamed = 0
        while not isinstance(client.read_event(), Assignment):
            streamed += 1
        assert streamed < 60000  # truncated well before the full span
    finally:
        client.close()
        server.shutdown()
        listener.close()
