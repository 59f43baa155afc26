/** Application shell: sub-test list with pass badges, the attempt screen
 * (locked parts read-only, open parts editable), submission, feedback,
 * and an always-available retake button.  There is no timer anywhere:
 * attempts are untimed by design.
 */

import { ApiClient, TransportError } from "./api.js";
import { renderFeedbackPanel } from "./feedback.js";
import { AttemptFlow } from "./state.js";
import { createPartWidget, PartWidget, renderLockedPart } from "./widgets.js";
import type { SubTestEntry } from "./types.js";

export class App {
  private flow: AttemptFlow | null = null;
  private widgets = new Map<string, PartWidget>();

  constructor(
    private readonly doc: Document,
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
  ) {}

  async showSubTests(): Promise<void> {
    const overview = await this.api.tests();
    this.root.textContent = "";
    const heading = this.doc.createElement("h1");
    heading.textContent = "Preparatory tests";
    this.root.appendChild(heading);
    const list = this.doc.createElement("ul");
    list.className = "subtest-list";
    for (const entry of overview.subtests) {
      list.appendChild(this.subTestRow(entry, overview.pass_mark));
    }
    this.root.appendChild(list);
  }

  private subTestRow(entry: SubTestEntry, passMark: number): HTMLElement {
    const row = this.doc.createElement("li");
    row.className = "subtest";
    row.dataset["topic"] = entry.topic;
    const name = this.doc.createElement("span");
    name.className = "topic-name";
    name.textContent = entry.topic;
    row.appendChild(name);

    const badge = this.doc.createElement("span");
    if (entry.status?.passed) {
      badge.className = "badge passed";
      badge.textContent = `passed ≥ ${Math.round(passMark * 100)}%`;
    } else if (entry.status && entry.status.attempts > 0) {
      badge.className = "badge in-progress";
      badge.textContent = `best ${(entry.status.best_score * 100).toFixed(0)}%`;
    } else {
      badge.className = "badge fresh";
      badge.textContent = "not started";
    }
    row.appendChild(badge);

    const button = this.doc.createElement("button");
    button.className = "start-button";
    button.textContent = entry.status?.passed ? "review / retake" : "start";
    button.addEventListener("click", () => void this.startAttempt(entry.topic));
    row.appendChild(button);
    return row;
  }

  async startAttempt(topic: string): Promise<void> {
    this.flow = new AttemptFlow(this.api, topic);
    const view = await this.flow.start();
    this.widgets.clear();
    this.root.textContent = "";

    const heading = this.doc.createElement("h1");
    heading.textContent = `${topic} — attempt ${view.index}`;
    this.root.appendChild(heading);

    for (const question of view.questions) {
      const section = this.doc.createElement("section");
      section.className = "question";
      if (question.preamble) {
        const preamble = this.doc.createElement("p");
        preamble.className = "preamble";
        preamble.textContent = question.preamble;
        section.appendChild(preamble);
      }
      const body = this.doc.createElement("p");
      body.className = "body";
      body.textContent = question.body;
      section.appendChild(body);
      for (const part of question.parts) {
        if (part.locked) {
          section.appendChild(renderLockedPart(this.doc, part));
        } else {
          const widget = createPartWidget(this.doc, part, this.api);
          this.widgets.set(part.part_id, widget);
          section.appendChild(widget.element);
        }
      }
      this.root.appendChild(section);
    }

    const submit = this.doc.createElement("button");
    submit.className = "submit-button";
    submit.textContent = "submit attempt";
    submit.addEventListener("click", () => void this.submit());
    this.root.appendChild(submit);

    const notice = this.doc.createElement("p");
    notice.className = "untimed-note";
    notice.textContent = "No time limit; retake as often as you like.";
    this.root.appendChild(notice);
  }

  async submit(): Promise<void> {
    if (!this.flow) return;
    for (const [partId, widget] of this.widgets) {
      if (!widget.valid()) {
        this.note(`part ${partId}: move the two points apart before submitting`);
        return;
      }
      const value = widget.read();
      if (value !== null) this.flow.setResponse(partId, value);
    }
    try {
      const result = await this.flow.submit();
      this.showFeedback(result);
    } catch (error) {
      if (error instanceof TransportError) {
        // responses stay in the draft; surface a retry control
        this.note("connection problem; your answers are kept, try again");
        return;
      }
      throw error;
    }
  }

  private showFeedback(result: import("./types.js").SubmitResult): void {
    this.root.textContent = "";
    const heading = this.doc.createElement("h1");
    const pct = (result.attempt.score * 100).toFixed(0);
    heading.textContent = result.attempt.passed
      ? `Passed with ${pct}%`
      : `Scored ${pct}% — not passed yet`;
    this.root.appendChild(heading);
    this.root.appendChild(renderFeedbackPanel(this.doc, result.feedback));

    const retake = this.doc.createElement("button");
    retake.className = "retake-button";
    retake.textContent = "retake (correct answers are kept)";
    retake.addEventListener(
      "click",
      () => void this.startAttempt(this.flow!.topic),
    );
    this.root.appendChild(retake);

    const back = this.doc.createElement("button");
    back.className = "back-button";
    back.textContent = "back to sub-tests";
    back.addEventListener("click", () => void this.showSubTests());
    this.root.appendChild(back);
  }

  private note(text: string): void {
    let box = this.root.querySelector(".notice") as HTMLElement | null;
    if (!box) {
      box = this.doc.createElement("p");
      box.className = "notice";
      this.root.appendChild(box);
    }
    box.textContent = text;
  }
}

export function mount(doc: Document, rootId: string, baseUrl: string,
                      token: string | null): App {
  const root = doc.getElementById(rootId);
  if (!root) throw new Error(`no element #${rootId}`);
  const app = new App(doc, root, new ApiClient(baseUrl, token));
  void app.showSubTests();
  return app;
}
