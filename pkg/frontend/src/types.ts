/** Wire types for the /api/v1 surface. */

export interface SubTestStatus {
  passed: boolean;
  attempts: number;
  best_score: number;
}

export interface SubTestEntry {
  topic: string;
  templates: string[];
  question_count: number;
  part_count: number;
  status?: SubTestStatus;
}

export interface TestsOverview {
  pass_mark: number;
  subtests: SubTestEntry[];
}

export interface ChoiceOption {
  id: string;
  label: string;
}

export interface CanvasExtent {
  x: [number, number];
  y: [number, number];
}

export type WidgetKind =
  | "expression"
  | "number"
  | "dropdown"
  | "checkboxes"
  | "sketch"
  | "bindings";

export interface Widget {
  input: WidgetKind;
  options?: ChoiceOption[];
  canvas?: CanvasExtent;
  variables?: string[];
}

export interface DisplayPart {
  index: number;
  kind: string;
  prompt: string;
  widget: Widget;
  part_id: string;
  locked: boolean;
  best_score: number;
}

export interface DisplayQuestion {
  template_id: string;
  body: string;
  preamble: string | null;
  parts: DisplayPart[];
}

export interface AttemptView {
  attempt_id: string;
  student_id: string;
  topic: string;
  index: number;
  open_parts: string[];
  questions: DisplayQuestion[];
}

export type Point = [number, number];

/** Response payloads, keyed by part id on submit. */
export type ResponseValue =
  | string
  | number
  | string[]
  | [Point, Point]
  | Record<string, string>;

export interface AttemptSummary {
  attempt_id: string;
  index: number;
  score: number;
  passed: boolean;
  late: boolean;
}

export interface FeedbackItem {
  part_id: string;
  correct: boolean;
  score: number;
  flags: string[];
  message: string;
  links: string[];
}

export interface SubmitResult {
  attempt: AttemptSummary;
  feedback: FeedbackItem[];
}

export interface StudentStatus {
  student_id: string;
  ept_score: number;
  topics: {
    topic: string;
    passed: boolean;
    attempts: number;
    best_score: number;
    first_attempt_score: number | null;
  }[];
}

export type PreviewResult =
  | { ok: true; rendered: string }
  | { ok: false; offset: number; expected: string | null; message: string };
