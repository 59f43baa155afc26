import { describe, expect, it } from "vitest";

import { renderFeedbackPanel, toPanelEntry } from "../src/feedback.js";
import type { FeedbackItem } from "../src/types.js";

const wrongItem: FeedbackItem = {
  part_id: "line_eq#0",
  correct: false,
  score: 0,
  flags: ["right_value_wrong_form"],
  message: "Multiply the brackets out step by step.",
  links: ["https://videos.example.edu/should-not-render"],
};

const correctItem: FeedbackItem = {
  part_id: "line_eq#1",
  correct: true,
  score: 1,
  flags: [],
  message: "Either root earns the mark.",
  links: ["https://videos.example.edu/square-roots"],
};

describe("panel view model", () => {
  it("has no field capable of holding an expected answer", () => {
    const entry = toPanelEntry(wrongItem);
    expect(Object.keys(entry).sort()).toEqual([
      "correct",
      "flags",
      "links",
      "message",
      "partId",
    ]);
  });

  it("strips links from wrong parts", () => {
    expect(toPanelEntry(wrongItem).links).toEqual([]);
    expect(toPanelEntry(correctItem).links).toEqual(correctItem.links);
  });
});

describe("panel rendering", () => {
  it("wrong part renders hint only, no links", () => {
    const panel = renderFeedbackPanel(document, [wrongItem, correctItem]);
    const wrong = panel.querySelector('[data-part-id="line_eq#0"]')!;
    expect(wrong.className).toContain("wrong");
    expect(wrong.textContent).toContain("Multiply the brackets");
    expect(wrong.querySelector("a")).toBeNull();
    const correct = panel.querySelector('[data-part-id="line_eq#1"]')!;
    expect(correct.querySelector("a")!.getAttribute("href")).toBe(
      "https://videos.example.edu/square-roots",
    );
  });

  it("flags are visible to the student", () => {
    const panel = renderFeedbackPanel(document, [wrongItem]);
    expect(panel.textContent).toContain("right_value_wrong_form");
  });
});
