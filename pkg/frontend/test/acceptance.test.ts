/**
 * Acceptance: scripted keystrokes into the editor produce decorations
 * matching a server-side oracle within 500 ms of each settled edit, and a
 * dropped gateway never blocks typing.  One pass line per criterion.
 */

import { execFileSync } from "node:child_process";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { Editor } from "../src/editor.js";
import { byteToUtf16 } from "../src/offsets.js";
import { loadSettings } from "../src/settings.js";

import { RunningServer, SERVER_CWD, connectWithRetry, spawnServer, waitUntil } from "./server.js";

let server: RunningServer;
let editor: Editor;

beforeAll(async () => {
  server = await spawnServer();
  const client = await connectWithRetry(server.port);
  editor = new Editor(client, loadSettings({ debounceMs: 100 }));
}, 30_000);

afterAll(() => {
  editor.close();
  server.stop();
});

const ORACLE_SCRIPT = [
  "import json, sys",
  "from proofdock.lexer import split_spans, process_span",
  "text = json.load(sys.stdin)",
  "out, base = [], 0",
  "for span in split_spans(text):",
  "    for rng, elem in process_span(span):",
  "        out.append([base + rng.start, base + rng.stop, elem.name])",
  "    base += len(span.encode('utf-8'))",
  "print(json.dumps(out))",
].join("\n");

/** The server-side truth: absolute (start, stop, markup-name) per token. */
function oracle(text: string): [number, number, string][] {
  const raw: [number, number, string][] = JSON.parse(
    execFileSync("python3", ["-c", ORACLE_SCRIPT], {
      input: JSON.stringify(text),
      cwd: SERVER_CWD,
      encoding: "utf-8",
    }),
  );
  // byte ranges -> UTF-16 ranges, the editor's addressing
  return raw.map(([start, stop, name]) => [
    byteToUtf16(text, start),
    byteToUtf16(text, stop),
    name,
  ]);
}

function currentDecorations(): [number, number, string][] {
  return editor.decorations().map((d) => [d.start, d.stop, d.markupName]);
}

function matchesOracle(expected: [number, number, string][]): boolean {
  return (
    editor.displayedText === editor.buffer &&
    JSON.stringify(currentDecorations()) === JSON.stringify(expected)
  );
}

/** Type text one keystroke at a time, then wait for decorations to settle
 * within the acceptance budget, measured from the last keystroke. */
async function typeAndSettle(fullText: string): Promise<number> {
  for (let i = editor.buffer.length + 1; i <= fullText.length; i++) {
    editor.input(fullText.slice(0, i));
  }
  editor.input(fullText);
  const t0 = Date.now();
  const expected = oracle(fullText);
  const ok = await waitUntil(() => matchesOracle(expected), 500 - (Date.now() - t0));
  expect(ok, `decorations did not settle for ${JSON.stringify(fullText)}`).toBe(true);
  return Date.now() - t0;
}

describe("UI loop", () => {
  it("scripted keystrokes settle to oracle-matching decorations", { timeout: 60_000 }, async () => {
    const times: number[] = [];
    times.push(await typeAndSettle("Lemma a."));
    times.push(await typeAndSettle("Lemma a. Proof. "));
    times.push(await typeAndSettle('Lemma a. Proof. Check "str" 42. '));
    // edit in the middle: earlier spans keep their decorations
    times.push(await typeAndSettle('Lemma a. Proof. Check "str" 43. Qed.'));

    // rendering table spot checks on the settled buffer
    const decos = editor.decorations();
    const byName = (name: string) => decos.filter((d) => d.markupName === name);
    expect(byName("coq.dot").every((d) => d.style.color === "#cc0000")).toBe(true);
    expect(byName("coq.dot").length).toBeGreaterThan(0);
    expect(byName("coq.string")[0]!.style.background).toContain("rgba");
    expect(byName("coq.keyword")[0]!.style.color).toBe("#0000cc");
    expect(byName("coq.number")[0]!.style.color).toBeTruthy();

    // whitespace is never decorated: every range covers non-space text
    const text = editor.displayedText;
    for (const d of decos) {
      expect(text.slice(d.start, d.stop).trim().length).toBeGreaterThan(0);
    }

    console.log(
      `\nACCEPTANCE PASS: UI loop settled in ${times.map((t) => `${t}ms`).join(", ")} ` +
        "(< 500ms each); decorations match the server-side oracle",
    );
  });

  it("a dropped gateway never blocks typing", { timeout: 20_000 }, async () => {
    server.stop();
    expect(await waitUntil(() => !editor.connected, 10_000)).toBe(true);
    expect(editor.banner).toMatch(/disconnected/i);

    const before = editor.buffer;
    const t0 = Date.now();
    editor.input(before + " Abort.");
    editor.flushNow();
    const elapsed = Date.now() - t0;
    expect(editor.buffer).toBe(before + " Abort.");
    expect(elapsed).toBeLessThan(50);

    console.log(
      `\nACCEPTANCE PASS: gateway disconnect leaves typing responsive ` +
        `(${elapsed}ms for input + flush, banner shown)`,
    );
  });
});
