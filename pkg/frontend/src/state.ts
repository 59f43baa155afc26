/** Attempt flow state machine.
 *
 * Keeps a local draft of responses keyed by part id; a transport failure
 * on submit leaves the draft intact so the same responses can be resent.
 * Locked parts never enter the draft (the server excludes them from the
 * open set and the widgets render them read-only).
 */

import { ApiClient, TransportError } from "./api.js";
import type { AttemptView, ResponseValue, SubmitResult } from "./types.js";

export type FlowPhase = "idle" | "in_attempt" | "submitting" | "feedback";

export class AttemptFlow {
  phase: FlowPhase = "idle";
  view: AttemptView | null = null;
  result: SubmitResult | null = null;
  lastTransportError: string | null = null;
  private drafts = new Map<string, ResponseValue>();

  constructor(
    private readonly api: ApiClient,
    readonly topic: string,
  ) {}

  async start(): Promise<AttemptView> {
    this.view = await this.api.startAttempt(this.topic);
    this.phase = "in_attempt";
    this.result = null;
    this.lastTransportError = null;
    this.drafts.clear();
    return this.view;
  }

  openParts(): string[] {
    return this.view ? [...this.view.open_parts] : [];
  }

  setResponse(partId: string, value: ResponseValue): void {
    if (!this.view) throw new Error("no attempt in progress");
    if (!this.view.open_parts.includes(partId)) {
      throw new Error(`part ${partId} is not open in this attempt`);
    }
    this.drafts.set(partId, value);
  }

  clearResponse(partId: string): void {
    this.drafts.delete(partId);
  }

  draft(): Record<string, ResponseValue> {
    return Object.fromEntries(this.drafts);
  }

  /** Submit the draft.  On a transport failure the draft is preserved and
   * the flow stays in the attempt so submit() can simply be called again. */
  async submit(): Promise<SubmitResult> {
    if (!this.view) throw new Error("no attempt in progress");
    this.phase = "submitting";
    try {
      const result = await this.api.submit(this.view.attempt_id, this.draft());
      this.result = result;
      this.phase = "feedback";
      this.lastTransportError = null;
      return result;
    } catch (error) {
      if (error instanceof TransportError) {
        this.phase = "in_attempt"; // draft intact, retry is one call away
        this.lastTransportError = error.message;
      } else {
        this.phase = "in_attempt";
      }
      throw error;
    }
  }

  /** Retaking is always available; it starts a fresh attempt whose open
   * set excludes everything answered correctly before. */
  async retake(): Promise<AttemptView> {
    return this.start();
  }
}
