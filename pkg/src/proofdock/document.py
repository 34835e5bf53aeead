"""Versioned document model with asynchronous execution.

Versions are immutable values: named nodes holding ordered command spans.
Applying an edit script turns one version non-destructively into the next and
yields an assignment from command ids to execution ids.  A command keeps its
previous execution id exactly when it and its whole node prefix are unchanged
(result reuse); everything else gets a fresh id whose execution is scheduled
on a worker pool, streaming markup reports back through a queue.  The caller
never waits for execution.

Id spaces: version and command ids are allocated by the front-end, execution
ids by this store; version 0 is the distinguished empty document.
"""

from __future__ import annotations

import queue
import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

from .lexer import process_span
from .textpos import Range
from .yxml import Elem, Tree


class DocumentError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    name: str
    entries: tuple  # tuple[int, ...], ordered command ids


@dataclass(frozen=True)
class Version:
    id: int
    nodes: Mapping[str, Node]


@dataclass(frozen=True)
class ClearNode:
    pass


@dataclass(frozen=True)
class DefineNode:
    entries: tuple  # tuple[int, ...]


@dataclass(frozen=True)
class SpanInsert:
    after: Optional[int]  # None = front of node
    inserted: tuple  # tuple[int, ...]


@dataclass(frozen=True)
class SpanEdits:
    inserts: tuple = ()  # tuple[SpanInsert, ...]
    removals: tuple = ()  # tuple[int, ...]


EditKind = Union[ClearNode, DefineNode, SpanEdits]


@dataclass(frozen=True)
class Edit:
    node_name: str
    kind: EditKind


@dataclass(frozen=True)
class Assignment:
    version_id: int
    commands: Mapping[int, int]  # command id -> execution id


@dataclass(frozen=True)
class Report:
    execution_id: int
    range: Range  # byte range within the span source
    markup: Tree


class _Pool:
    """Fixed worker threads with a start gate for discontinuation."""

    def __init__(self, run: Callable, workers: int):
        self._run = run
        self._queue: queue.Queue = queue.Queue()
        self.gate = threading.Event()
        self.gate.set()
        self._outstanding = 0
        self._idle = threading.Condition()
        self._threads = [
            threading.Thread(target=self._loop, daemon=True, name=f"exec-{i}")
            for i in range(workers)
        ]
        for t in self._threads:
            t.start()

    def submit(self, item) -> None:
        with self._idle:
            self._outstanding += 1
        self._queue.put(item)

    def _loop(self) -> None:
        while True:
            item = self._queue.get()
            if item is None:
                return
            self.gate.wait()
            try:
                self._run(*item)
            finally:
                with self._idle:
                    self._outstanding -= 1
                    if self._outstanding == 0:
                        self._idle.notify_all()

    def wait_idle(self, timeout: Optional[float] = None) -> bool:
        with self._idle:
            return self._idle.wait_for(lambda: self._outstanding == 0, timeout)

    def shutdown(self) -> None:
        self.gate.set()
        for _ in self._threads:
            self._queue.put(None)
        for t in self._threads:
            t.join(timeout=5)


class Document:
    """The session-wide store of spans, versions and executions.

    Structural mutation (define_command, update, remove_versions) is meant to
    be driven by a single protocol-handler thread; workers only read immutable
    spans and append to the report queue.
    """

    def __init__(self, payload: Callable = process_span, workers: int = 1):
        self._payload = payload
        self._spans: dict[int, str] = {}
        self._versions: dict[int, Version] = {0: Version(0, {})}
        self._assignments: dict[int, Assignment] = {0: Assignment(0, {})}
        self._latest = 0
        self._next_execution = 1
        self._scheduled: set[int] = set()
        self._cancelled: set[int] = set()
        self._dropped: set[int] = set()
        self._lock = threading.RLock()
        self.reports: queue.Queue[Report] = queue.Queue()
        self._pool = _Pool(self._run_execution, workers)

    # -- span registry -------------------------------------------------------

    def define_command(self, command_id: int, source: str) -> None:
        with self._lock:
            if command_id in self._spans:
                raise DocumentError(f"duplicate command id {command_id}")
            self._spans[command_id] = source

    def command_source(self, command_id: int) -> str:
        with self._lock:
            return self._spans[command_id]

    # -- versions ------------------------------------------------------------

    @property
    def latest_version(self) -> int:
        return self._latest

    def version(self, version_id: int) -> Version:
        with self._lock:
            try:
                return self._versions[version_id]
            except KeyError:
                raise DocumentError(f"unknown version {version_id}") from None

    def node_text(self, version_id: int, node_name: str) -> str:
        """Concatenated span sources of one node (convergence check)."""
        version = self.version(version_id)
        node = version.nodes.get(node_name)
        if node is None:
            return ""
        with self._lock:
            return "".join(self._spans[c] for c in node.entries)

    def update(self, old_version: int, new_version: int,
               edits: Iterable[Edit]) -> Assignment:
        """Apply an edit script, commit the new version atomically, schedule
        fresh executions, and return the assignment without waiting."""
        with self._lock:
            if old_version not in self._versions:
                raise DocumentError(f"unknown version {old_version}")
            if new_version in self._versions:
                raise DocumentError(f"version id {new_version} already used")
            old = self._versions[old_version]
            nodes = dict(old.nodes)
            for edit in edits:
                self._apply_edit(nodes, edit)
            old_assignment = self._assignments[old_version].commands
            commands: dict[int, int] = {}
            fresh: list[int] = []
            for node in nodes.values():
                old_node = old.nodes.get(node.name)
                old_entries = old_node.entries if old_node else ()
                prefix_unchanged = True
                for i, command_id in enumerate(node.entries):
                    prefix_unchanged = (
                        prefix_unchanged
                        and i < len(old_entries)
                        and old_entries[i] == command_id
                        and command_id in old_assignment
                    )
                    if prefix_unchanged:
                        commands[command_id] = old_assignment[command_id]
                    else:
                        execution_id = self._next_execution
                        self._next_execution += 1
                        commands[command_id] = execution_id
                        fresh.append(command_id)
                # entries beyond the common prefix never reuse old ids
            version = Version(new_version, nodes)
            assignment = Assignment(new_version, commands)
            self._versions[new_version] = version
            self._assignments[new_version] = assignment
            self._latest = new_version
            self._pool.gate.set()  # a new update resumes execution
            for command_id in fresh:
                self._pool.submit(
                    (commands[command_id], self._spans[command_id])
                )
                self._scheduled.add(commands[command_id])
        return assignment

    def _apply_edit(self, nodes: dict, edit: Edit) -> None:
        name = edit.node_name
        kind = edit.kind
        if isinstance(kind, ClearNode):
            nodes[name] = Node(name, ())
        elif isinstance(kind, DefineNode):
            entries = tuple(kind.entries)
            self._check_entries(entries)
            nodes[name] = Node(name, entries)
        elif isinstance(kind, SpanEdits):
            node = nodes.get(name)
            if node is None:
                raise DocumentError(f"span edits for undefined node {name!r}")
            entries = list(node.entries)
            for command_id in kind.removals:
                try:
                    entries.remove(command_id)
                except ValueError:
                    raise DocumentError(
                        f"removal of command {command_id} not in node {name!r}"
                    ) from None
            for insert in kind.inserts:
                inserted = tuple(insert.inserted)
                self._check_entries(inserted)
                if insert.after is None:
                    at = 0
                else:
                    try:
                        at = entries.index(insert.after) + 1
                    except ValueError:
                        raise DocumentError(
                            f"insertion point {insert.after} not in node {name!r}"
                        ) from None
                entries[at:at] = inserted
            combined = tuple(entries)
            if len(set(combined)) != len(combined):
                raise DocumentError(f"duplicate entries in node {name!r}")
            nodes[name] = Node(name, combined)
        else:
            raise DocumentError(f"unknown edit kind {kind!r}")

    def _check_entries(self, entries: tuple) -> None:
        for command_id in entries:
            if command_id not in self._spans:
                raise DocumentError(f"dangling command id {command_id}")
        if len(set(entries)) != len(entries):
            raise DocumentError("duplicate command ids in one node")

    def remove_versions(self, versions: Iterable[int]) -> None:
        """Drop obsolete versions; spans and execution results referenced by
        no surviving version become reclaimable."""
        with self._lock:
            doomed = set(versions)
            if not doomed:
                return
            if self._latest in doomed:
                raise DocumentError("cannot remove the latest version")
            for version_id in doomed:
                if version_id not in self._versions:
                    raise DocumentError(f"unknown version {version_id}")

            removed_commands: set[int] = set()
            removed_executions: set[int] = set()
            for version_id in doomed:
                version = self._versions.pop(version_id)
                assignment = self._assignments.pop(version_id)
                for node in version.nodes.values():
                    removed_commands.update(node.entries)
                removed_executions.update(assignment.commands.values())

            live_commands: set[int] = set()
            live_executions: set[int] = set()
            for version in self._versions.values():
                for node in version.nodes.values():
                    live_commands.update(node.entries)
            for assignment in self._assignments.values():
                live_executions.update(assignment.commands.values())

            # never reclaim spans defined but not yet referenced by a version
            for command_id in removed_commands - live_commands:
                self._spans.pop(command_id, None)
            reclaimed = removed_executions - live_executions
            self._dropped.update(reclaimed)
            self._scheduled.difference_update(reclaimed)

    # -- execution -----------------------------------------------------------

    def discontinue_execution(self) -> None:
        """Pause: no execution starts until the next update.  Idempotent."""
        self._pool.gate.clear()

    def cancel_execution(self) -> None:
        """Discontinue and additionally cancel everything scheduled; running
        executions stop at their next between-token checkpoint and emit no
        further reports.  Idempotent."""
        self._pool.gate.clear()
        with self._lock:
            self._cancelled.update(self._scheduled)

    def _run_execution(self, execution_id: int, source: str) -> None:
        with self._lock:
            if execution_id in self._cancelled or execution_id in self._dropped:
                self._scheduled.discard(execution_id)
                return
        try:
            for rng, markup in self._payload(source):
                if not self._emit(Report(execution_id, rng, markup)):
                    return
        except Exception as exc:  # payload crash -> error report, session lives
            nbytes = len(source.encode("utf-8"))
            self._emit(
                Report(
                    execution_id,
                    Range(0, nbytes),
                    Elem("coq.error", (("message", str(exc)),)),
                )
            )
        finally:
            with self._lock:
                self._scheduled.discard(execution_id)

    def _emit(self, report: Report) -> bool:
        with self._lock:
            if (
                report.execution_id in self._cancelled
                or report.execution_id in self._dropped
            ):
                return False
            self.reports.put(report)
            return True

    def wait_idle(self, timeout: Optional[float] = None) -> bool:
        """Block until no execution is queued or running (test helper)."""
        return self._pool.wait_idle(timeout)

    def close(self) -> None:
        self.cancel_execution()
        self._pool.shutdown()
