"""Front-end side of the protocol, for tests and tooling.

Mirrors the codec expressions of the server registry; the TypeScript editor
client implements the same layouts independently.
"""

from __future__ import annotations

from typing import Optional, Union

from . import wire
from .channel import ChannelEndpoint, Message
from .document import Assignment, Edit, Report


class ProtocolClient:
    def __init__(self, endpoint: ChannelEndpoint):
        self.endpoint = endpoint

    def define_command(self, command_id: int, source: str) -> None:
        self.endpoint.write_message(wire.define_command_message(command_id, source))

    def update(self, old_version: int, new_version: int, edits: list) -> None:
        self.endpoint.write_message(
            wire.update_message(old_version, new_version, edits)
        )

    def remove_versions(self, versions: list) -> None:
        self.endpoint.write_message(wire.remove_versions_message(versions))

    def cancel_execution(self) -> None:
        self.endpoint.write_message(wire.cancel_execution_message())

    def discontinue_execution(self) -> None:
        self.endpoint.write_message(wire.discontinue_execution_message())

    def read_event(self) -> Union[Assignment, Report, str]:
        """Next outbound server message, decoded."""
        message = self.endpoint.read_message(wire.OUTBOUND_ARITY.__getitem__)
        if message.function_name == "assign_update":
            return wire.decode_assign_update(message)
        if message.function_name == "report":
            return wire.decode_report(message)
        return wire.decode_error(message)

    def close(self) -> None:
        self.endpoint.close()
