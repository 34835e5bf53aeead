/**
 * Protocol-function argument layouts, the client-side mirror of the server's
 * single point of wire-format truth.
 *
 * Outbound (editor -> prover):
 *     define_command(id: int, source: string)
 *     update(old_version: int, new_version: int, edits: list of edit)
 *     remove_versions(versions: list of int)
 *     discontinue_execution()
 *     cancel_execution()
 *
 * Inbound (prover -> editor):
 *     assign_update(version: int, assignment: list of (command, execution))
 *     report(execution: int, range: (start, stop), markup: tree)
 *     error(message: string)
 *
 * An edit is (node_name, kind) where kind is the variant
 *     0 = clear node   1 = define node (ids)   2 = span edits
 * and a span edit is ((inserts, removals)) with an insert being
 * (optional predecessor id, inserted ids).
 */

import {
  decodeInt,
  decodeList,
  decodePair,
  decodeString,
  decodeTree,
  encodeInt,
  encodeList,
  encodeOption,
  encodePair,
  encodeString,
  encodeVariant,
} from "./codec.js";
import { WireMessage } from "./chunks.js";
import { Body, Tree, parseBody, stringOfBody } from "./yxml.js";

export const INBOUND_ARITY: Record<string, number> = {
  assign_update: 2,
  report: 3,
  error: 1,
};

export const OUTBOUND_ARITY: Record<string, number> = {
  define_command: 2,
  update: 3,
  remove_versions: 1,
  discontinue_execution: 0,
  cancel_execution: 0,
};

// -- domain types ------------------------------------------------------------

export interface ClearNode {
  kind: "clear";
}

export interface DefineNode {
  kind: "define";
  entries: number[];
}

export interface SpanInsert {
  /** Predecessor command id, or null to insert at the front of the node. */
  after: number | null;
  inserted: number[];
}

export interface SpanEdits {
  kind: "spans";
  inserts: SpanInsert[];
  removals: number[];
}

export type EditKind = ClearNode | DefineNode | SpanEdits;

export interface Edit {
  nodeName: string;
  edit: EditKind;
}

export interface Assignment {
  versionId: number;
  /** command id -> execution id */
  commands: Map<number, number>;
}

export interface Report {
  executionId: number;
  /** byte range within the command span's UTF-8 source */
  start: number;
  stop: number;
  markup: Tree;
}

export type ProverEvent =
  | { kind: "assignment"; assignment: Assignment }
  | { kind: "report"; report: Report }
  | { kind: "error"; message: string };

// -- edit codec --------------------------------------------------------------

const encodeInsert = encodePair(encodeOption(encodeInt), encodeList(encodeInt));
const encodeSpanEdits = encodePair(encodeList(encodeInsert), encodeList(encodeInt));

const encodeKind = encodeVariant<EditKind>([
  (k) => (k.kind === "clear" ? [] : null),
  (k) => (k.kind === "define" ? encodeList(encodeInt)(k.entries) : null),
  (k) =>
    k.kind === "spans"
      ? encodeSpanEdits([
          k.inserts.map((i): [number | null, number[]] => [i.after, i.inserted]),
          k.removals,
        ])
      : null,
]);

export const encodeEdit = encodePair(encodeString, encodeKind);

export function encodeEdits(edits: Edit[]): Body {
  return encodeList(encodeEdit)(
    edits.map((e): [string, EditKind] => [e.nodeName, e.edit]),
  );
}

// -- whole messages ----------------------------------------------------------

function pack(body: Body): Uint8Array {
  return new TextEncoder().encode(stringOfBody(body));
}

function unpack(chunk: Uint8Array): Body {
  return parseBody(new TextDecoder().decode(chunk));
}

export function defineCommandMessage(commandId: number, source: string): WireMessage {
  return {
    functionName: "define_command",
    arguments: [pack(encodeInt(commandId)), pack(encodeString(source))],
  };
}

export function updateMessage(
  oldVersion: number,
  newVersion: number,
  edits: Edit[],
): WireMessage {
  return {
    functionName: "update",
    arguments: [
      pack(encodeInt(oldVersion)),
      pack(encodeInt(newVersion)),
      pack(encodeEdits(edits)),
    ],
  };
}

export function removeVersionsMessage(versions: number[]): WireMessage {
  return {
    functionName: "remove_versions",
    arguments: [pack(encodeList(encodeInt)(versions))],
  };
}

export function cancelExecutionMessage(): WireMessage {
  return { functionName: "cancel_execution", arguments: [] };
}

export function discontinueExecutionMessage(): WireMessage {
  return { functionName: "discontinue_execution", arguments: [] };
}

const decodeAssignmentPairs = decodeList(decodePair(decodeInt, decodeInt));
const decodeRange = decodePair(decodeInt, decodeInt);

export function decodeEvent(msg: WireMessage): ProverEvent {
  switch (msg.functionName) {
    case "assign_update": {
      const versionId = decodeInt(unpack(msg.arguments[0]!));
      const pairs = decodeAssignmentPairs(unpack(msg.arguments[1]!));
      return {
        kind: "assignment",
        assignment: { versionId, commands: new Map(pairs) },
      };
    }
    case "report": {
      const executionId = decodeInt(unpack(msg.arguments[0]!));
      const [start, stop] = decodeRange(unpack(msg.arguments[1]!));
      const markup = decodeTree(unpack(msg.arguments[2]!));
      return { kind: "report", report: { executionId, start, stop, markup } };
    }
    case "error":
      return { kind: "error", message: decodeString(unpack(msg.arguments[0]!)) };
    default:
      throw new Error(`unknown prover message ${JSON.stringify(msg.functionName)}`);
  }
}
