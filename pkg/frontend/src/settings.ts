/**
 * Editor configuration: debounce interval, editing policy, keyword mirror
 * and the rendering table mapping markup names to styles.  Values merge
 * over the defaults from a JSON settings file.
 */

export interface Style {
  color?: string;
  background?: string;
  fontWeight?: string;
  fontStyle?: string;
  textDecoration?: string;
}

export interface Settings {
  /** Quiet interval after the last keystroke before an update is sent. */
  debounceMs: number;
  /** Send cancel_execution ahead of any update that invalidates spans. */
  cancelBeforeUpdate: boolean;
  /** The single document node this editor works on. */
  nodeName: string;
  /** Mirror of the server's keyword table (display only; the server decides). */
  keywords: string[];
  styles: Record<string, Style>;
}

export const DEFAULT_SETTINGS: Settings = {
  debounceMs: 300,
  cancelBeforeUpdate: true,
  nodeName: "scratch.v",
  keywords: [
    "Theorem", "Lemma", "Corollary", "Remark", "Fact", "Proposition", "Example",
    "Proof", "Qed", "Defined", "Admitted", "Abort",
    "Definition", "Fixpoint", "CoFixpoint", "Inductive", "CoInductive",
    "Record", "Structure", "Module", "Section", "End",
    "Variable", "Variables", "Hypothesis", "Hypotheses", "Axiom", "Parameter",
    "Require", "Import", "Export", "Open", "Scope", "Notation", "Ltac",
    "Hint", "Check", "Print", "Eval", "Compute",
    "match", "with", "end", "fun", "fix", "forall", "exists",
    "let", "in", "if", "then", "else", "Prop", "Set", "Type",
  ],
  styles: {
    "coq.keyword": { color: "#0000cc", fontWeight: "bold" },
    "coq.ident": {},
    "coq.number": { color: "#9c27b0" },
    "coq.string": { color: "#2e7d32", background: "rgba(46,125,50,0.18)" },
    "coq.comment": { color: "#888888", fontStyle: "italic" },
    "coq.delimiter": { color: "#555555" },
    "coq.dot": { color: "#cc0000", fontWeight: "bold" },
    "coq.error": { textDecoration: "underline wavy #cc0000" },
  },
};

/** Merge a parsed settings JSON object over the defaults. */
export function loadSettings(overrides: Partial<Settings> = {}): Settings {
  return {
    ...DEFAULT_SETTINGS,
    ...overrides,
    styles: { ...DEFAULT_SETTINGS.styles, ...(overrides.styles ?? {}) },
  };
}
