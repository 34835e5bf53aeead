/**
 * Gateway client: frames outbound protocol messages onto a transport and
 * turns inbound bytes into decoded prover events.
 */

import { FramingError, MessageAssembler, WireMessage, encodeMessage } from "./chunks.js";
import {
  Edit,
  INBOUND_ARITY,
  ProverEvent,
  cancelExecutionMessage,
  decodeEvent,
  defineCommandMessage,
  discontinueExecutionMessage,
  removeVersionsMessage,
  updateMessage,
} from "./protocol.js";
import { Transport } from "./transport.js";

export class GatewayClient {
  private assembler = new MessageAssembler(INBOUND_ARITY);
  private eventHandlers: ((event: ProverEvent) => void)[] = [];
  private closeHandlers: (() => void)[] = [];
  private open = true;

  constructor(private transport: Transport) {
    transport.onData((data) => this.receive(data));
    transport.onClose(() => {
      this.open = false;
      for (const h of this.closeHandlers) h();
    });
  }

  get connected(): boolean {
    return this.open;
  }

  onEvent(handler: (event: ProverEvent) => void): void {
    this.eventHandlers.push(handler);
  }

  onClose(handler: () => void): void {
    this.closeHandlers.push(handler);
  }

  defineCommand(commandId: number, source: string): void {
    this.send(defineCommandMessage(commandId, source));
  }

  update(oldVersion: number, newVersion: number, edits: Edit[]): void {
    this.send(updateMessage(oldVersion, newVersion, edits));
  }

  removeVersions(versions: number[]): void {
    this.send(removeVersionsMessage(versions));
  }

  cancelExecution(): void {
    this.send(cancelExecutionMessage());
  }

  discontinueExecution(): void {
    this.send(discontinueExecutionMessage());
  }

  close(): void {
    this.open = false;
    this.transport.close();
  }

  private send(msg: WireMessage): void {
    if (!this.open) return; // never block or throw on a dead gateway
    try {
      this.transport.send(encodeMessage(msg));
    } catch {
      this.open = false;
      for (const h of this.closeHandlers) h();
    }
  }

  private receive(data: Uint8Array): void {
    let msg: WireMessage | null;
    try {
      this.assembler.feed(data);
      while ((msg = this.assembler.next()) !== null) {
        const event = decodeEvent(msg);
        for (const h of this.eventHandlers) h(event);
      }
    } catch (err) {
      if (err instanceof FramingError) {
        // corrupt stream is unrecoverable by design: drop the session
        this.close();
        for (const h of this.closeHandlers) h();
        return;
      }
      throw err;
    }
  }
}
