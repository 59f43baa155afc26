/** Feedback panel.
 *
 * The panel's view model is deliberately narrower than the wire type: a
 * wrong part carries only the authored hint (plus flags), so there is no
 * field that could hold an expected answer.  Resource links render only
 * for correct parts.
 */

import type { FeedbackItem } from "./types.js";

export interface FeedbackPanelEntry {
  partId: string;
  correct: boolean;
  /** hint text for wrong parts, full feedback for correct ones */
  message: string;
  flags: string[];
  /** only ever populated for correct parts */
  links: string[];
}

export function toPanelEntry(item: FeedbackItem): FeedbackPanelEntry {
  return {
    partId: item.part_id,
    correct: item.correct,
    message: item.message,
    flags: item.flags,
    links: item.correct ? item.links : [],
  };
}

export function renderFeedbackPanel(
  doc: Document,
  items: FeedbackItem[],
): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "feedback-panel";
  for (const item of items.map(toPanelEntry)) {
    const row = doc.createElement("div");
    row.className = item.correct ? "feedback-part correct" : "feedback-part wrong";
    row.dataset["partId"] = item.partId;

    const verdict = doc.createElement("span");
    verdict.className = "verdict";
    verdict.textContent = item.correct ? "correct" : "not yet";
    row.appendChild(verdict);

    const message = doc.createElement("p");
    message.className = "feedback-message";
    message.textContent = item.message;
    row.appendChild(message);

    if (item.flags.length > 0) {
      const flags = doc.createElement("span");
      flags.className = "feedback-flags";
      flags.textContent = item.flags.join(", ");
      row.appendChild(flags);
    }

    if (item.links.length > 0) {
      const list = doc.createElement("ul");
      list.className = "feedback-links";
      for (const href of item.links) {
        const li = doc.createElement("li");
        const anchor = doc.createElement("a");
        anchor.href = href;
        anchor.textContent = href;
        li.appendChild(anchor);
        list.appendChild(li);
      }
      row.appendChild(list);
    }

    panel.appendChild(row);
  }
  return panel;
}
