/**
 * Decorations: the visual interpretation of markup reports.  A decoration
 * covers a UTF-16 range of the buffer with a style from the rendering
 * table; error markup additionally carries a hover tooltip.
 */

import { Style } from "./settings.js";

export interface Decoration {
  /** UTF-16 code unit range within the buffer. */
  start: number;
  stop: number;
  markupName: string;
  style: Style;
  tooltip?: string;
}

/** Inline CSS for a style, for direct use on overlay elements. */
export function cssOf(style: Style): string {
  const rules: string[] = [];
  if (style.color) rules.push(`color:${style.color}`);
  if (style.background) rules.push(`background:${style.background}`);
  if (style.fontWeight) rules.push(`font-weight:${style.fontWeight}`);
  if (style.fontStyle) rules.push(`font-style:${style.fontStyle}`);
  if (style.textDecoration) rules.push(`text-decoration:${style.textDecoration}`);
  return rules.join(";");
}
