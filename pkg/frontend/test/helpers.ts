/** Test-side decoders for editor -> prover messages, so tests can assert on
 * what the editor put on the wire without a live server. */

import { MessageAssembler, WireMessage, concatBytes } from "../src/chunks.js";
import {
  decodeInt,
  decodeList,
  decodeOption,
  decodePair,
  decodeString,
  decodeVariant,
  CodecError,
  Decoder,
} from "../src/codec.js";
import { Edit, EditKind, OUTBOUND_ARITY, SpanInsert } from "../src/protocol.js";
import { parseBody } from "../src/yxml.js";

const decodeInsert = decodePair(decodeOption(decodeInt), decodeList(decodeInt));
const decodeSpanEdits = decodePair(decodeList(decodeInsert), decodeList(decodeInt));

const decodeKind: Decoder<EditKind> = decodeVariant<EditKind>([
  (body) => {
    if (body.length) throw new CodecError("clear-node payload not empty");
    return { kind: "clear" };
  },
  (body) => ({ kind: "define", entries: decodeList(decodeInt)(body) }),
  (body) => {
    const [inserts, removals] = decodeSpanEdits(body);
    return {
      kind: "spans",
      inserts: inserts.map(([after, inserted]): SpanInsert => ({ after, inserted })),
      removals,
    };
  },
]);

const decodeEdit = decodePair(decodeString, decodeKind);

function unpack(chunk: Uint8Array) {
  return parseBody(new TextDecoder().decode(chunk));
}

export interface DecodedOutbound {
  functionName: string;
  args: unknown[];
}

export function decodeOutbound(msg: WireMessage): DecodedOutbound {
  switch (msg.functionName) {
    case "define_command":
      return {
        functionName: msg.functionName,
        args: [decodeInt(unpack(msg.arguments[0]!)), decodeString(unpack(msg.arguments[1]!))],
      };
    case "update": {
      const edits = decodeList(decodeEdit)(unpack(msg.arguments[2]!)).map(
        ([nodeName, edit]): Edit => ({ nodeName, edit }),
      );
      return {
        functionName: msg.functionName,
        args: [
          decodeInt(unpack(msg.arguments[0]!)),
          decodeInt(unpack(msg.arguments[1]!)),
          edits,
        ],
      };
    }
    case "remove_versions":
      return {
        functionName: msg.functionName,
        args: [decodeList(decodeInt)(unpack(msg.arguments[0]!))],
      };
    case "cancel_execution":
    case "discontinue_execution":
      return { functionName: msg.functionName, args: [] };
    default:
      throw new Error(`unexpected outbound function ${msg.functionName}`);
  }
}

/** Parse a capture of raw sent byte slices back into decoded messages. */
export function parseSentBytes(slices: Uint8Array[]): DecodedOutbound[] {
  const assembler = new MessageAssembler(OUTBOUND_ARITY);
  assembler.feed(concatBytes(slices));
  const messages: DecodedOutbound[] = [];
  let msg: WireMessage | null;
  while ((msg = assembler.next()) !== null) messages.push(decodeOutbound(msg));
  return messages;
}
