"""The runnable prover back-end.

Wires the byte channel, codecs, document store and lexer payload into a
protocol-function dispatcher.  One inbound handler thread per attached
endpoint owns all document mutation; executions run on the store's worker
pool; every outbound byte passes through a single writer thread fed by a
queue, so interleaving corruption is impossible by construction.

A handler exception produces an outbound error message and the session
continues; an unknown function name or undecodable argument is session-fatal
(the channel has no resynchronization point).
"""

from __future__ import annotations

import argparse
import logging
import os
import queue
import sys
import threading
from dataclasses import dataclass
from typing import Callable, Optional

from . import wire
from .channel import (
    ChannelClosed,
    ChannelEndpoint,
    ChannelError,
    Message,
    ProtocolError,
    SocketListener,
    open_fifo_pair,
)
from .codec import CodecError
from .document import Document, DocumentError
from .lexer import DEFAULT_KEYWORDS, load_keywords, process_span
from .yxml import YXMLError

log = logging.getLogger("proofdock.server")

LOG_LEVEL_ENV = "PROOFDOCK_LOG_LEVEL"


@dataclass(frozen=True)
class ProtocolFunction:
    name: str
    arity: int
    handler: Callable[[Message], None]


class ProverServer:
    def __init__(self, document: Optional[Document] = None,
                 keywords: Optional[frozenset] = None, workers: int = 1):
        if document is None:
            kws = keywords or DEFAULT_KEYWORDS
            document = Document(
                payload=lambda source: process_span(source, kws), workers=workers
            )
        self.document = document
        self.registry = {}
        for name, handler in [
            ("define_command", self._on_define_command),
            ("update", self._on_update),
            ("remove_versions", self._on_remove_versions),
            ("discontinue_execution", self._on_discontinue),
            ("cancel_execution", self._on_cancel),
        ]:
            self.registry[name] = ProtocolFunction(
                name, wire.INBOUND_ARITY[name], handler
            )
        self._outbound: queue.Queue = queue.Queue()
        self._endpoints: list[ChannelEndpoint] = []
        self._endpoints_lock = threading.Lock()
        self._stop = threading.Event()
        self._failed = threading.Event()
        self._writer = threading.Thread(
            target=self._writer_loop, daemon=True, name="outbound-writer"
        )
        self._pump = threading.Thread(
            target=self._report_pump, daemon=True, name="report-pump"
        )
        self._writer.start()
        self._pump.start()

    # -- handlers ------------------------------------------------------------

    def _on_define_command(self, message: Message) -> None:
        command_id = wire.unpack(wire.codec.decode_int, message.arguments[0])
        source = wire.unpack(wire.codec.decode_string, message.arguments[1])
        self.document.define_command(command_id, source)

    def _on_update(self, message: Message) -> None:
        old = wire.unpack(wire.codec.decode_int, message.arguments[0])
        new = wire.unpack(wire.codec.decode_int, message.arguments[1])
        edits = wire.unpack(wire.decode_edits, message.arguments[2])
        assignment = self.document.update(old, new, edits)
        self.send(wire.assign_update_message(assignment))

    def _on_remove_versions(self, message: Message) -> None:
        versions = wire.unpack(
            wire.codec.decode_list(wire.codec.decode_int), message.arguments[0]
        )
        self.document.remove_versions(versions)

    def _on_discontinue(self, message: Message) -> None:
        self.document.discontinue_execution()

    def _on_cancel(self, message: Message) -> None:
        self.document.cancel_execution()

    # -- outbound ------------------------------------------------------------

    def send(self, message: Message) -> None:
        self._outbound.put(message)

    def _writer_loop(self) -> None:
        while True:
            message = self._outbound.get()
            if message is None:
                return
            with self._endpoints_lock:
                endpoints = list(self._endpoints)
            for endpoint in endpoints:
                try:
                    endpoint.write_message(message)
                except (ChannelError, OSError, ValueError) as exc:
                    log.info("dropping endpoint %s: %s", endpoint.name, exc)
                    self.detach(endpoint)

    def _report_pump(self) -> None:
        while not self._stop.is_set():
            try:
                report = self.document.reports.get(timeout=0.1)
            except queue.Empty:
                continue
            if report is None:
                return
            self.send(wire.report_message(report))

    # -- sessions ------------------------------------------------------------

    def attach(self, endpoint: ChannelEndpoint) -> threading.Thread:
        """Register an endpoint and start its inbound handler thread."""
        with self._endpoints_lock:
            self._endpoints.append(endpoint)
        thread = threading.Thread(
            target=self._inbound_loop,
            args=(endpoint,),
            daemon=True,
            name=f"inbound:{endpoint.name}",
        )
        thread.start()
        return thread

    def detach(self, endpoint: ChannelEndpoint) -> None:
        with self._endpoints_lock:
            if endpoint in self._endpoints:
                self._endpoints.remove(endpoint)
        endpoint.close()

    def _inbound_loop(self, endpoint: ChannelEndpoint) -> None:
        arity = lambda name: self.registry[name].arity
        try:
            while not self._stop.is_set():
                try:
                    message = endpoint.read_message(arity)
                except ChannelClosed:
                    log.info("channel %s closed", endpoint.name)
                    return
                function = self.registry[message.function_name]
                log.debug("inbound %s/%d", function.name, function.arity)
                try:
                    function.handler(message)
                except (DocumentError, CodecError) as exc:
                    # bad request, session survives
                    log.info("handler error for %s: %s", function.name, exc)
                    self.send(wire.error_message(f"{function.name}: {exc}"))
        except (ProtocolError, YXMLError, CodecError, ChannelError, OSError) as exc:
            log.error("protocol failure on %s: %s", endpoint.name, exc)
            self._failed.set()
        finally:
            self.detach(endpoint)

    def serve_gateway(self, listener: SocketListener) -> threading.Thread:
        """Accept front-end clients one at a time on the gateway socket."""

        def loop():
            while not self._stop.is_set():
                try:
                    endpoint = listener.accept()
                except OSError:
                    return
                log.info("gateway client connected: %s", endpoint.name)
                thread = self.attach(endpoint)
                thread.join()

        thread = threading.Thread(target=loop, daemon=True, name="gateway-accept")
        thread.start()
        return thread

    def shutdown(self) -> None:
        self._stop.set()
        self.document.close()
        self.document.reports.put(None)
        self._outbound.put(None)
        with self._endpoints_lock:
            endpoints = list(self._endpoints)
        for endpoint in endpoints:
            self.detach(endpoint)

    @property
    def failed(self) -> bool:
        return self._failed.is_set()


# -- CLI ---------------------------------------------------------------------

def _configure_logging(args) -> None:
    level_name = os.environ.get(LOG_LEVEL_ENV, args.log_level)
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}[level_name]
    handlers = None
    if args.log:
        handlers = [logging.FileHandler(args.log)]
    logging.basicConfig(
        level=level,
        format="%(asctime)s %(name)s %(levelname)s %(message)s",
        handlers=handlers,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="proofdock-server",
        description="Asynchronous proof-document server",
    )
    transport = parser.add_mutually_exclusive_group()
    transport.add_argument("--fifo-in", metavar="PATH",
                           help="named pipe to read protocol input from")
    transport.add_argument("--listen", type=int, metavar="PORT",
                           help="listen for the protocol peer on a TCP port")
    parser.add_argument("--fifo-out", metavar="PATH",
                        help="named pipe to write protocol output to")
    parser.add_argument("--gateway-port", type=int, metavar="PORT",
                        help="serve editor front-ends on this port "
                             "(same chunked protocol, one client at a time)")
    parser.add_argument("--keywords", metavar="FILE",
                        help="keyword table, one keyword per line")
    parser.add_argument("--log", metavar="FILE", help="log to this file")
    parser.add_argument("--log-level", choices=["error", "info", "debug"],
                        default="info",
                        help=f"log verbosity (env {LOG_LEVEL_ENV} overrides)")
    parser.add_argument("--workers", type=int, default=1,
                        help="execution worker threads")
    return parser


def main(argv: Optional[list] = None) -> int:
    args = build_parser().parse_args(argv)
    if (args.fifo_in is None) != (args.fifo_out is None):
        print("--fifo-in and --fifo-out must be given together", file=sys.stderr)
        return 2
    if not (args.fifo_in or args.listen or args.gateway_port):
        print("no transport given (--fifo-in/--fifo-out, --listen or "
              "--gateway-port)", file=sys.stderr)
        return 2
    _configure_logging(args)

    keywords = load_keywords(args.keywords) if args.keywords else None
    server = ProverServer(keywords=keywords, workers=args.workers)

    threads = []
    gateway_listener = None
    try:
        if args.fifo_in:
            endpoint = open_fifo_pair(args.fifo_in, args.fifo_out)
            threads.append(server.attach(endpoint))
        elif args.listen:
            listener = SocketListener(args.listen)
            log.info("listening on port %d", listener.port)
            endpoint = listener.accept()
            listener.close()
            threads.append(server.attach(endpoint))
        if args.gateway_port is not None:
            gateway_listener = SocketListener(args.gateway_port)
            log.info("gateway on port %d", gateway_listener.port)
            threads.append(server.serve_gateway(gateway_listener))
        for thread in threads:
            thread.join()
    except ChannelError as exc:
        log.error("startup failure: %s", exc)
        return 1
    except KeyboardInterrupt:
        pass
    finally:
        if gateway_listener is not None:
            gateway_listener.close()
        server.shutdown()
    return 1 if server.failed else 0


if __name__ == "__main__":
    sys.exit(main())
