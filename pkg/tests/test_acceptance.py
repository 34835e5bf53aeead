"""Acceptance criteria, one test per criterion, at their stated tolerances.

Run with `pytest tests/test_acceptance.py -v -s` for one pass line each.
"""

import io
import os
import pathlib
import random
import threading
import time

import pytest

from proofdock import codec
from proofdock.channel import (
    ChannelEndpoint,
    ChannelError,
    FramingError,
    SocketListener,
    open_fifo_pair,
    open_socket,
)
from proofdock.client import ProtocolClient
from proofdock.document import DefineNode, Document, Edit
from proofdock.lexer import process_span, split_spans, tokenize
from proofdock.server import ProverServer
from proofdock.textpos import (
    Range,
    byte_offset_to_char_offset,
    char_offset_to_byte_offset,
)
from proofdock.yxml import Elem, parse_body, string_of_body, yxml_string

from genvalues import random_body, random_proof_script, random_text
from test_document import run_edit_script
from test_server import TeeReader, run_scripted_session
from test_textpos import boundary_table

DATA = pathlib.Path(__file__).parent / "data"


def passed(line):
    print(f"\nACCEPTANCE PASS: {line}", flush=True)


def test_yxml_round_trip_10k():
    rng = random.Random(100)
    t0 = time.monotonic()
    for _ in range(10_000):
        body = random_body(rng, max_depth=8)
        assert parse_body(yxml_string(body)) == body
    elapsed = time.monotonic() - t0
    assert elapsed < 10.0
    passed(f"YXML round-trip: 10,000 bodies in {elapsed:.2f}s (< 10s)")


def test_commutation_1k():
    rng = random.Random(101)
    for _ in range(1_000):
        body = random_body(rng)
        wire = yxml_string(body)
        # byte-level parse with per-field decode vs whole-stream decode + parse
        assert parse_body(wire) == parse_body(wire.decode("utf-8"))
    passed("Commutation: byte-level and code-point-level parses agree (1,000 bodies)")


def _value_codec():
    # list of (int × (bool × string)), paired with a recursive variant
    # (cons-list) to exercise recursion through the sum type
    def cons_enc(v):
        return codec.encode_variant(
            [
                lambda x: () if x is None else None,
                lambda x: codec.encode_pair(codec.encode_string, cons_enc)(x)
                if x is not None
                else None,
            ]
        )(v)

    def cons_dec(body):
        return codec.decode_variant(
            [lambda b: None, codec.decode_pair(codec.decode_string, cons_dec)]
        )(body)

    item_enc = codec.encode_pair(
        codec.encode_pair(
            codec.encode_int, codec.encode_pair(codec.encode_bool, codec.encode_string)
        ),
        cons_enc,
    )
    item_dec = codec.decode_pair(
        codec.decode_pair(
            codec.decode_int, codec.decode_pair(codec.decode_bool, codec.decode_string)
        ),
        cons_dec,
    )
    return codec.encode_list(item_enc), codec.decode_list(item_dec)


def test_codec_identity_10k():
    enc, dec = _value_codec()
    rng = random.Random(102)
    for _ in range(10_000):
        value = []
        for _ in range(rng.randint(0, 3)):
            cons = None
            for _ in range(rng.randint(0, 3)):
                cons = (random_text(rng, 6), cons)
            value.append(
                (
                    (
                        rng.randint(-(10**12), 10**12),
                        (rng.random() < 0.5, random_text(rng, 8)),
                    ),
                    cons,
                )
            )
        assert dec(parse_body(yxml_string(enc(value)))) == value
    passed("Codec identity: decode∘encode over 10,000 nested values, exact")


def _transport_pairs(tmp_path):
    """Yields (writer_endpoint, reader_endpoint, label) for both transports."""
    a, b = str(tmp_path / "x.fifo"), str(tmp_path / "y.fifo")
    os.mkfifo(a)
    os.mkfifo(b)
    holder = {}

    def client():
        holder["ep"] = open_fifo_pair(a, b, open_input_first=False, timeout=5)

    t = threading.Thread(target=client, daemon=True)
    t.start()
    server = open_fifo_pair(b, a, timeout=5)
    t.join(5)
    yield server, holder["ep"], "fifo"
    server.close()
    holder["ep"].close()

    listener = SocketListener(0)
    t = threading.Thread(
        target=lambda: holder.update(ep2=open_socket("127.0.0.1", listener.port)),
        daemon=True,
    )
    t.start()
    server = listener.accept()
    listener.close()
    t.join(5)
    yield server, holder["ep2"], "socket"
    server.close()
    holder["ep2"].close()


def test_framing_conformance_and_faults(tmp_path):
    # bit-exact fixtures
    out = io.BytesIO()
    ep = ChannelEndpoint(io.BytesIO(), out)
    ep.write_chunk(b"hello")
    ep.write_chunk(b"")
    ep.flush()
    assert out.getvalue() == b"5\nhello0\n"

    faults = [b"5\nhel", b"12", b"x\nhello", b"12345678901234567890\n"]
    for writer_ep, reader_ep, label in _transport_pairs(tmp_path):
        # round trip including all byte values
        payload = bytes(range(256)) * 64
        writer_ep.write_chunk(payload)
        writer_ep.flush()
        assert reader_ep.read_chunk() == payload
        # fault injection: definite error, no hang
        for fault in faults:
            writer_ep.writer.write(fault)
            writer_ep.flush()
            writer_ep.close()  # truncates the stream mid-chunk
            result = {}

            def read():
                try:
                    result["value"] = reader_ep.read_chunk()
                except ChannelError as exc:
                    result["error"] = exc

            t = threading.Thread(target=read, daemon=True)
            t.start()
            t.join(timeout=5)
            assert not t.is_alive(), f"hang on {fault!r} over {label}"
            assert isinstance(result.get("error"), FramingError), (
                f"no definite error for {fault!r} over {label}: {result}"
            )
            break  # one fault consumes the stream; next faults need new pairs
    # remaining faults over fresh in-memory streams (transport-independent
    # framing logic, already exercised over both transports above)
    for fault in faults:
        ep = ChannelEndpoint(io.BytesIO(fault), io.BytesIO())
        with pytest.raises(FramingError):
            ep.read_chunk()
    passed("Framing: fixtures bit-exact; fault injection errors, no hangs "
           "(fifo + socket)")


def test_offset_conversion_1k():
    rng = random.Random(103)
    for _ in range(1_000):
        text = random_text(rng, max_len=30)
        data = text.encode("utf-8")
        prev = (0, 0)
        for nbytes, nunits in boundary_table(text):
            assert byte_offset_to_char_offset(data, nbytes) == nunits
            assert char_offset_to_byte_offset(data, nunits) == nbytes
            assert nbytes >= prev[0] and nunits >= prev[1]  # monotone
            prev = (nbytes, nunits)
    passed("Offset conversion: oracle agreement, mutual inverse, monotone "
           "(1,000 texts incl. astral plane)")


def test_document_convergence_1k():
    for seed in range(1_000):
        run_edit_script(seed, steps=6)
    passed("Document convergence: 1,000 edit scripts match the plain-list "
           "model; totality and reuse soundness hold")


def test_asynchrony_and_cancellation():
    release = threading.Event()

    def delayed_payload(source):
        release.wait(5)  # stands in for a 1s-plus prover computation
        for i in range(len(source)):
            yield Range(i, i + 1), Elem("coq.ident")
            time.sleep(0.001)

    doc = Document(payload=delayed_payload)
    try:
        doc.define_command(1, "x" * 500)
        t0 = time.monotonic()
        doc.update(0, 1, [Edit("n", DefineNode((1,)))])
        ack = time.monotonic() - t0
        assert ack < 0.05, f"update ack took {ack * 1000:.1f}ms"

        release.set()
        deadline = time.monotonic() + 5
        while doc.reports.qsize() < 5 and time.monotonic() < deadline:
            time.sleep(0.002)
        doc.cancel_execution()
        time.sleep(0.1)  # cancellation budget after acknowledgement
        frozen = doc.reports.qsize()
        time.sleep(0.3)
        assert doc.reports.qsize() == frozen, "reports kept streaming"
    finally:
        doc.close()
    passed(f"Asynchrony: update ack {ack * 1000:.1f}ms (< 50ms); cancel stops "
           "reports within 100ms")


def test_lexer_scale_100kb():
    rng = random.Random(104)
    source = random_proof_script(rng, 100_000)
    data = source.encode("utf-8")
    t0 = time.monotonic()
    tokens = tokenize(source)
    reports = list(process_span(source))
    elapsed = time.monotonic() - t0
    assert elapsed < 1.0
    # partition invariant
    pos = 0
    for tok in tokens:
        assert tok.range.start == pos
        pos = tok.range.stop
    assert pos == len(data)
    assert len(reports) > 0
    # split/concat invariant
    assert "".join(split_spans(source)) == source
    passed(f"Lexer scale: {len(data)} bytes tokenized + marked up in "
           f"{elapsed * 1000:.0f}ms (< 1s); partition and split/concat hold")


def test_golden_transcript():
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
    assert logs[0] == (DATA / "golden_transcript.bin").read_bytes()
    passed("Golden transcript: byte-identical message log across runs")
