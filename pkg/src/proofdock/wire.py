"""Protocol-function argument layouts.

Every protocol function carries its arguments as YXML-encoded chunks; the
codec expression for each function is isomorphic to its argument types and
is mirrored verbatim by the editor front-end.  This module is the single
place where that redundancy lives on the server side.

Inbound (front-end -> prover):
    define_command(id: int, source: string)
    update(old_version: int, new_version: int, edits: list of edit)
    remove_versions(versions: list of int)
    discontinue_execution()
    cancel_execution()

Outbound (prover -> front-end):
    assign_update(version: int, assignment: list of (command, execution))
    report(execution: int, range: (start, stop), markup: tree)
    error(message: string)

An edit is (node_name, kind) where kind is the variant
    0 = clear node                (no payload)
    1 = define node               (list of command ids)
    2 = span edits                ((inserts, removals) where an insert is
                                   (optional predecessor id, inserted ids))
"""

from __future__ import annotations

from . import codec
from .channel import Message
from .document import (
    Assignment,
    ClearNode,
    DefineNode,
    Edit,
    Report,
    SpanEdits,
    SpanInsert,
)
from .textpos import Range
from .yxml import parse_body, yxml_string

INBOUND_ARITY = {
    "define_command": 2,
    "update": 3,
    "remove_versions": 1,
    "discontinue_execution": 0,
    "cancel_execution": 0,
}

OUTBOUND_ARITY = {
    "assign_update": 2,
    "report": 3,
    "error": 1,
}


def pack(encoder, value) -> bytes:
    """Encode one argument into its YXML chunk payload."""
    return yxml_string(encoder(value))


def unpack(decoder, chunk: bytes):
    return decoder(parse_body(chunk))


# -- edits -------------------------------------------------------------------

_insert_enc = codec.encode_pair(
    codec.encode_option(codec.encode_int), codec.encode_list(codec.encode_int)
)
_insert_dec = codec.decode_pair(
    codec.decode_option(codec.decode_int), codec.decode_list(codec.decode_int)
)

_span_edits_enc = codec.encode_pair(
    codec.encode_list(_insert_enc), codec.encode_list(codec.encode_int)
)
_span_edits_dec = codec.decode_pair(
    codec.decode_list(_insert_dec), codec.decode_list(codec.decode_int)
)

_kind_enc = codec.encode_variant(
    [
        lambda k: () if isinstance(k, ClearNode) else None,
        lambda k: codec.encode_list(codec.encode_int)(k.entries)
        if isinstance(k, DefineNode)
        else None,
        lambda k: _span_edits_enc(
            ([(i.after, list(i.inserted)) for i in k.inserts], list(k.removals))
        )
        if isinstance(k, SpanEdits)
        else None,
    ]
)

_kind_dec = codec.decode_variant(
    [
        lambda body: ClearNode() if not body else _bad_payload(body),
        lambda body: DefineNode(
            tuple(codec.decode_list(codec.decode_int)(body))
        ),
        lambda body: _decode_span_edits(body),
    ]
)


def _bad_payload(body):
    raise codec.CodecError(f"unexpected payload {body!r}")


def _decode_span_edits(body):
    inserts, removals = _span_edits_dec(body)
    return SpanEdits(
        tuple(SpanInsert(after, tuple(ids)) for after, ids in inserts),
        tuple(removals),
    )


def encode_edit(edit: Edit):
    return codec.encode_pair(codec.encode_string, _kind_enc)(
        (edit.node_name, edit.kind)
    )


def decode_edit(body) -> Edit:
    name, kind = codec.decode_pair(codec.decode_string, _kind_dec)(body)
    return Edit(name, kind)


encode_edits = codec.encode_list(encode_edit)
decode_edits = codec.decode_list(decode_edit)


# -- whole messages ----------------------------------------------------------

def define_command_message(command_id: int, source: str) -> Message:
    return Message(
        "define_command",
        [pack(codec.encode_int, command_id), pack(codec.encode_string, source)],
    )


def update_message(old_version: int, new_version: int, edits) -> Message:
    return Message(
        "update",
        [
            pack(codec.encode_int, old_version),
            pack(codec.encode_int, new_version),
            pack(encode_edits, list(edits)),
        ],
    )


def remove_versions_message(versions) -> Message:
    return Message(
        "remove_versions", [pack(codec.encode_list(codec.encode_int), list(versions))]
    )


def cancel_execution_message() -> Message:
    return Message("cancel_execution", [])


def discontinue_execution_message() -> Message:
    return Message("discontinue_execution", [])


_assignment_enc = codec.encode_list(
    codec.encode_pair(codec.encode_int, codec.encode_int)
)
_assignment_dec = codec.decode_list(
    codec.decode_pair(codec.decode_int, codec.decode_int)
)

_range_enc = codec.encode_pair(codec.encode_int, codec.encode_int)
_range_dec = codec.decode_pair(codec.decode_int, codec.decode_int)


def assign_update_message(assignment: Assignment) -> Message:
    # sorted by command id so equal assignments serialize identically
    pairs = sorted(assignment.commands.items())
    return Message(
        "assign_update",
        [pack(codec.encode_int, assignment.version_id), pack(_assignment_enc, pairs)],
    )


def decode_assign_update(message: Message) -> Assignment:
    version_id = unpack(codec.decode_int, message.arguments[0])
    pairs = unpack(_assignment_dec, message.arguments[1])
    return Assignment(version_id, dict(pairs))


def report_message(report: Report) -> Message:
    return Message(
        "report",
        [
            pack(codec.encode_int, report.execution_id),
            pack(_range_enc, (report.range.start, report.range.stop)),
            pack(codec.encode_tree, report.markup),
        ],
    )


def decode_report(message: Message) -> Report:
    execution_id = unpack(codec.decode_int, message.arguments[0])
    start, stop = unpack(_range_dec, message.arguments[1])
    markup = unpack(codec.decode_tree, message.arguments[2])
    return Report(execution_id, Range(start, stop), markup)


def error_message(text: str) -> Message:
    return Message("error", [pack(codec.encode_string, text)])


def decode_error(message: Message) -> str:
    return unpack(codec.decode_string, message.arguments[0])
