/**
 * The editor state machine: a UTF-16 text buffer the user types into, a
 * debounced edit cycle that diffs the buffer's command spans against the
 * last sent version, and a markup store turning prover reports into
 * decorations.
 *
 * The input path is strictly synchronous and never waits on the server;
 * decorations are eventually consistent with the latest acknowledged
 * version.  A dead gateway flips a banner and editing continues offline.
 */

import { GatewayClient } from "./client.js";
import { byteToUtf16, utf8Length } from "./offsets.js";
import { Edit, ProverEvent, Report, SpanInsert } from "./protocol.js";
import { Decoration } from "./render.js";
import { splitSpans } from "./scan.js";
import { Settings, DEFAULT_SETTINGS } from "./settings.js";

interface CommandSpan {
  id: number;
  text: string;
}

export class Editor {
  buffer = "";
  /** Null while connected; a user-facing notice once the gateway drops. */
  banner: string | null = null;
  lastError: string | null = null;

  private spans: CommandSpan[] = []; // as of the last sent update
  private versionId = 0; // latest sent (version 0 = empty document)
  private nextVersion = 1;
  private nextCommand = 1;
  private nodeDefined = false;

  /** Span lists per in-flight or acknowledged version id. */
  private versions = new Map<number, CommandSpan[]>();
  /** Latest acknowledged version and its command -> execution assignment. */
  private displayedSpans: CommandSpan[] = [];
  private assignment = new Map<number, number>();
  /** execution id -> reports received for it */
  private markup = new Map<number, Report[]>();

  private timer: ReturnType<typeof setTimeout> | null = null;
  private changeHandlers: (() => void)[] = [];

  constructor(
    private client: GatewayClient | null,
    private settings: Settings = DEFAULT_SETTINGS,
  ) {
    this.versions.set(0, []);
    if (client) {
      client.onEvent((event) => this.handleEvent(event));
      client.onClose(() => {
        this.banner = "Gateway disconnected — editing continues offline.";
        this.notify();
      });
    } else {
      this.banner = "Not connected.";
    }
  }

  get connected(): boolean {
    return this.client !== null && this.client.connected;
  }

  /** Subscribe to state changes (new decorations, banner, errors). */
  onChange(handler: () => void): void {
    this.changeHandlers.push(handler);
  }

  /** Replace the buffer (one call per keystroke); schedules a flush. */
  input(text: string): void {
    this.buffer = text;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => this.flushNow(), this.settings.debounceMs);
  }

  /** Send the pending edit immediately (debounce bypass). */
  flushNow(): void {
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    const newTexts = splitSpans(this.buffer).map((s) => s.text);
    const oldSpans = this.spans;

    // longest common prefix / suffix of span texts
    let prefix = 0;
    while (
      prefix < oldSpans.length &&
      prefix < newTexts.length &&
      oldSpans[prefix]!.text === newTexts[prefix]
    ) {
      prefix++;
    }
    let suffix = 0;
    while (
      suffix < oldSpans.length - prefix &&
      suffix < newTexts.length - prefix &&
      oldSpans[oldSpans.length - 1 - suffix]!.text ===
        newTexts[newTexts.length - 1 - suffix]
    ) {
      suffix++;
    }

    const removed = oldSpans.slice(prefix, oldSpans.length - suffix);
    const freshTexts = newTexts.slice(prefix, newTexts.length - suffix);
    if (this.nodeDefined && removed.length === 0 && freshTexts.length === 0) {
      return; // settled: nothing changed at span granularity
    }

    const fresh: CommandSpan[] = freshTexts.map((text) => ({
      id: this.nextCommand++,
      text,
    }));
    const newSpans = [
      ...oldSpans.slice(0, prefix),
      ...fresh,
      ...oldSpans.slice(oldSpans.length - suffix),
    ];

    let edit: Edit;
    if (!this.nodeDefined) {
      edit = {
        nodeName: this.settings.nodeName,
        edit: { kind: "define", entries: newSpans.map((s) => s.id) },
      };
      this.nodeDefined = true;
    } else {
      const inserts: SpanInsert[] =
        fresh.length === 0
          ? []
          : [
              {
                after: prefix > 0 ? oldSpans[prefix - 1]!.id : null,
                inserted: fresh.map((s) => s.id),
              },
            ];
      edit = {
        nodeName: this.settings.nodeName,
        edit: { kind: "spans", inserts, removals: removed.map((s) => s.id) },
      };
    }

    const oldVersion = this.versionId;
    const newVersion = this.nextVersion++;
    this.versions.set(newVersion, newSpans);
    this.spans = newSpans;
    this.versionId = newVersion;

    if (this.client && this.client.connected) {
      if (this.settings.cancelBeforeUpdate && removed.length > 0) {
        this.client.cancelExecution();
      }
      for (const span of fresh) this.client.defineCommand(span.id, span.text);
      this.client.update(oldVersion, newVersion, [edit]);
    }
  }

  /** Current decorations against the latest acknowledged version. */
  decorations(): Decoration[] {
    const decos: Decoration[] = [];
    const text = this.displayedSpans.map((s) => s.text).join("");
    let spanByteStart = 0;
    for (const span of this.displayedSpans) {
      const execId = this.assignment.get(span.id);
      if (execId !== undefined) {
        for (const report of this.markup.get(execId) ?? []) {
          const markup = report.markup;
          if (markup.kind !== "elem") continue;
          const style = this.settings.styles[markup.name];
          if (style === undefined) continue;
          const attrs = new Map(markup.attrs);
          decos.push({
            start: byteToUtf16(text, spanByteStart + report.start),
            stop: byteToUtf16(text, spanByteStart + report.stop),
            markupName: markup.name,
            style,
            tooltip: markup.name === "coq.error" ? attrs.get("message") : undefined,
          });
        }
      }
      spanByteStart += utf8Length(span.text);
    }
    decos.sort((a, b) => a.start - b.start || a.stop - b.stop);
    return decos;
  }

  /** The buffer text the current decorations are valid for. */
  get displayedText(): string {
    return this.displayedSpans.map((s) => s.text).join("");
  }

  close(): void {
    if (this.timer !== null) clearTimeout(this.timer);
    this.client?.close();
  }

  private handleEvent(event: ProverEvent): void {
    switch (event.kind) {
      case "assignment": {
        const { versionId, commands } = event.assignment;
        const spans = this.versions.get(versionId);
        if (spans === undefined) {
          console.warn(`assignment for unknown version ${versionId}`);
          return;
        }
        this.displayedSpans = spans;
        this.assignment = commands;
        // stale executions' decorations vanish with their markup
        const live = new Set(commands.values());
        for (const execId of [...this.markup.keys()]) {
          if (!live.has(execId)) this.markup.delete(execId);
        }
        // superseded versions can be garbage-collected server-side
        const stale = [...this.versions.keys()].filter((v) => v < versionId);
        for (const v of stale) this.versions.delete(v);
        if (stale.length && this.client && this.client.connected) {
          this.client.removeVersions(stale);
        }
        break;
      }
      case "report": {
        const execId = event.report.executionId;
        const known = [...this.assignment.values()].includes(execId);
        if (!known) {
          console.warn(`report for unknown execution ${execId}, dropped`);
          return;
        }
        const list = this.markup.get(execId);
        if (list) list.push(event.report);
        else this.markup.set(execId, [event.report]);
        break;
      }
      case "error":
        this.lastError = event.message;
        break;
    }
    this.notify();
  }

  private notify(): void {
    for (const h of this.changeHandlers) h();
  }
}
