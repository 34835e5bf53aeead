/**
 * Browser entry point: a textarea with a styled overlay behind it.  The
 * textarea stays fully interactive at all times; decorations render into
 * the overlay whenever the editor state changes.
 */

import { GatewayClient } from "../client.js";
import { Editor } from "../editor.js";
import { cssOf } from "../render.js";
import { loadSettings, Settings } from "../settings.js";
import { connectWebSocket } from "../wsTransport.js";

function escapeHtml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function renderOverlay(editor: Editor, overlay: HTMLElement): void {
  const text = editor.displayedText;
  const decos = editor.decorations();
  const parts: string[] = [];
  let pos = 0;
  for (const deco of decos) {
    if (deco.start < pos) continue; // overlapping markup: first one wins
    parts.push(escapeHtml(text.slice(pos, deco.start)));
    const piece = escapeHtml(text.slice(deco.start, deco.stop));
    const title = deco.tooltip ? ` title="${escapeHtml(deco.tooltip)}"` : "";
    parts.push(`<span style="${cssOf(deco.style)}"${title}>${piece}</span>`);
    pos = deco.stop;
  }
  parts.push(escapeHtml(text.slice(pos)));
  overlay.innerHTML = parts.join("");
}

async function start(): Promise<void> {
  const textarea = document.getElementById("input") as HTMLTextAreaElement;
  const overlay = document.getElementById("overlay")!;
  const bannerEl = document.getElementById("banner")!;

  let settings: Settings;
  try {
    settings = loadSettings(await (await fetch("../settings.json")).json());
  } catch {
    settings = loadSettings();
  }

  let client: GatewayClient | null = null;
  try {
    const url = `ws://${location.hostname}:${location.port || 8800}/gateway`;
    client = new GatewayClient(await connectWebSocket(url));
  } catch {
    // offline: typing still works, just no decorations
  }

  const editor = new Editor(client, settings);
  editor.onChange(() => {
    renderOverlay(editor, overlay);
    bannerEl.textContent = editor.banner ?? "";
    bannerEl.style.display = editor.banner ? "block" : "none";
  });
  textarea.addEventListener("input", () => {
    editor.input(textarea.value);
    bannerEl.textContent = editor.banner ?? "";
  });
}

start();
