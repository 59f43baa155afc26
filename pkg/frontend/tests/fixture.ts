/** In-process contract fixture: a tiny HTTP server speaking the same
 * /api/v1 shapes as the real service, with canned grading.  Sufficient to
 * run the whole client test suite without the backend.
 */

import { createServer, IncomingMessage, Server, ServerResponse } from "node:http";
import type { AddressInfo } from "node:net";

type Json = any;

export const TOKEN = "tok-web";
export const STUDENT = "web";

interface FixturePart {
  part_id: string;
  kind: string;
  prompt: string;
  widget: Json;
  grade: (response: Json) => { score: number; flags: string[] };
  hint: string;
  praise: string;
  links: string[];
  /** strings that must never appear in a wrong part's feedback DOM */
  secrets: string[];
}

const normalize = (text: string) => text.replace(/\s+/g, "").replace(/−/g, "-");

function gradeExpression(response: Json): { score: number; flags: string[] } {
  const accepted = ["-x-2", "-(x+2)", "-2-x"];
  if (typeof response !== "string") return { score: 0, flags: ["invalid_response"] };
  return accepted.includes(normalize(response))
    ? { score: 1, flags: [] }
    : { score: 0, flags: [] };
}

function gradeNumeric(response: Json): { score: number; flags: string[] } {
  const value = typeof response === "number" ? response : parseFloat(String(response));
  if (!Number.isFinite(value)) return { score: 0, flags: ["parse_error"] };
  return Math.min(Math.abs(value - 2), Math.abs(value + 2)) <= 1e-9
    ? { score: 1, flags: [] }
    : { score: 0, flags: [] };
}

function gradeChoice(response: Json): { score: number; flags: string[] } {
  return response === "implies" ? { score: 1, flags: [] } : { score: 0, flags: [] };
}

function gradeSketch(response: Json): { score: number; flags: string[] } {
  if (!Array.isArray(response) || response.length !== 2) {
    return { score: 0, flags: ["invalid_response"] };
  }
  const [[x1, y1], [x2, y2]] = response as [number, number][];
  if (Math.hypot(x2 - x1, y2 - y1) < 1e-9) return { score: 0, flags: ["degenerate_points"] };
  if (Math.abs(x2 - x1) < 1e-9) return { score: 0, flags: ["vertical_line"] };
  const slope = (y2 - y1) / (x2 - x1);
  const intercept = y1 - slope * x1;
  return Math.abs(slope - -1) <= 0.05 && Math.abs(intercept - -2) <= 0.05
    ? { score: 1, flags: [] }
    : { score: 0, flags: [] };
}

function geometryParts(): FixturePart[] {
  return [
    {
      part_id: "line_eq#0",
      kind: "equivalence",
      prompt: "y = (enter the right-hand side)",
      widget: { input: "expression" },
      grade: gradeExpression,
      hint: "Gradient is rise over run between the two given points.",
      praise: "The slope and intercept both check out.",
      links: ["https://videos.example.edu/straight-lines"],
      secrets: ["-x-2"],
    },
    {
      part_id: "line_eq#1",
      kind: "numeric_multi",
      prompt: "Give one x with x^2 = 4",
      widget: { input: "number" },
      grade: gradeNumeric,
      hint: "A square forgets the sign of its root.",
      praise: "Either root earns the mark.",
      links: [],
      secrets: ["= 2", "= -2"],
    },
    {
      part_id: "line_eq#2",
      kind: "choice_single",
      prompt: "x > 12 ___ x > 6",
      widget: {
        input: "dropdown",
        options: [
          { id: "implies", label: "⇒" },
          { id: "implied_by", label: "⇐" },
          { id: "iff", label: "⇔" },
        ],
      },
      grade: gradeChoice,
      hint: "Try a number between 6 and 12 in both statements.",
      praise: "The containment only runs one way.",
      links: [],
      secrets: ["\\bimplies\\b"],
    },
    {
      part_id: "sketch#0",
      kind: "line_sketch",
      prompt: "Sketch the line by placing two points on it.",
      widget: { input: "sketch", canvas: { x: [-3, 3], y: [-3, 3] } },
      grade: gradeSketch,
      hint: "Pick an x inside the axes and compute its y from your equation.",
      praise: "Both points sit on the line.",
      links: [],
      secrets: ["slope -1", "intercept -2"],
    },
  ];
}

interface TopicState {
  parts: FixturePart[];
  locked: Map<string, number>; // part_id -> best score 1
  best: Map<string, number>;
  attempts: number;
  passed: boolean;
  openIndex: number | null;
}

export interface Fixture {
  url: string;
  server: Server;
  /** next submit request has its socket destroyed (transport failure) */
  failNextSubmit: boolean;
  submitCount: number;
  secretsFor(partId: string): string[];
  close(): Promise<void>;
}

export async function startFixture(): Promise<Fixture> {
  const topics = new Map<string, TopicState>();
  for (const topic of ["Geometry", "Algebra"]) {
    topics.set(topic, {
      parts:
        topic === "Geometry"
          ? geometryParts()
          : [
              {
                part_id: "expand#0",
                kind: "structural_poly",
                prompt: "Expand (a-1)^2.",
                widget: { input: "expression" },
                grade: (r) =>
                  typeof r === "string" && normalize(r) === "a^2-2a+1"
                    ? { score: 1, flags: [] }
                    : { score: 0, flags: [] },
                hint: "Multiply the bracket out and collect like terms.",
                praise: "Fully expanded.",
                links: [],
                secrets: ["a^2-2a+1"],
              },
            ],
      locked: new Map(),
      best: new Map(),
      attempts: 0,
      passed: false,
      openIndex: null,
    });
  }

  const fixture: Partial<Fixture> & { failNextSubmit: boolean; submitCount: number } = {
    failNextSubmit: false,
    submitCount: 0,
  };

  function sendJson(res: ServerResponse, status: number, body: Json): void {
    const text = JSON.stringify(body);
    res.writeHead(status, { "Content-Type": "application/json" });
    res.end(text);
  }

  function sendError(res: ServerResponse, status: number, code: string,
                     message: string): void {
    sendJson(res, status, { error: { status, code, message } });
  }

  function authed(req: IncomingMessage): boolean {
    return req.headers.authorization === `Bearer ${TOKEN}`;
  }

  function attemptView(topic: string): Json {
    const state = topics.get(topic)!;
    const open = state.parts
      .filter((p) => !state.locked.has(p.part_id))
      .map((p) => p.part_id);
    return {
      attempt_id: `${STUDENT}:${topic}:${state.attempts + 1}`,
      student_id: STUDENT,
      topic,
      index: state.attempts + 1,
      open_parts: open,
      questions: [
        {
          template_id: topic.toLowerCase(),
          body:
            topic === "Geometry"
              ? "A straight line passes through (-9, 7) and (5, -7)."
              : "Expand the bracket.",
          preamble: null,
          parts: state.parts.map((p, index) => ({
            index,
            kind: p.kind,
            prompt: p.prompt,
            widget: p.widget,
            part_id: p.part_id,
            locked: state.locked.has(p.part_id),
            best_score: state.best.get(p.part_id) ?? 0,
          })),
        },
      ],
    };
  }

  async function readBody(req: IncomingMessage): Promise<Json> {
    const chunks: Buffer[] = [];
    for await (const chunk of req) chunks.push(chunk as Buffer);
    const text = Buffer.concat(chunks).toString("utf-8");
    return text ? JSON.parse(text) : {};
  }

  const server = createServer(async (req, res) => {
    const url = new URL(req.url ?? "/", "http://fixture");
    const path = url.pathname;
    try {
      if (req.method === "GET" && path === "/api/v1/tests") {
        const entries = [...topics.entries()].map(([topic, state]) => ({
          topic,
          templates: [topic.toLowerCase()],
          question_count: 1,
          part_count: state.parts.length,
          ...(authed(req)
            ? {
                status: {
                  passed: state.passed,
                  attempts: state.attempts,
                  best_score:
                    state.parts.length === 0
                      ? 0
                      : state.parts.reduce(
                          (sum, p) => sum + (state.best.get(p.part_id) ?? 0),
                          0,
                        ) / state.parts.length,
                },
              }
            : {}),
        }));
        return sendJson(res, 200, { pass_mark: 0.75, subtests: entries });
      }

      const startMatch = path.match(/^\/api\/v1\/tests\/([^/]+)\/attempts$/);
      if (req.method === "POST" && startMatch) {
        if (!authed(req)) return sendError(res, 401, "unauthorized", "token required");
        const topic = decodeURIComponent(startMatch[1]!);
        const state = topics.get(topic);
        if (!state) return sendError(res, 404, "unknown_topic", topic);
        state.openIndex = state.attempts + 1;
        return sendJson(res, 200, attemptView(topic));
      }

      const submitMatch = path.match(/^\/api\/v1\/attempts\/([^/]+)\/submit$/);
      if (req.method === "POST" && submitMatch) {
        if (fixture.failNextSubmit) {
          fixture.failNextSubmit = false;
          req.socket.destroy(); // transport failure, not an HTTP error
          return;
        }
        if (!authed(req)) return sendError(res, 401, "unauthorized", "token required");
        const attemptId = decodeURIComponent(submitMatch[1]!);
        const [student, topic] = attemptId.split(":");
        if (student !== STUDENT) return sendError(res, 403, "forbidden", "not yours");
        const state = topics.get(topic ?? "");
        if (!state || state.openIndex === null) {
          return sendError(res, 409, "no_open_attempt", attemptId);
        }
        const body = await readBody(req);
        const responses: Record<string, Json> = body.responses ?? {};
        fixture.submitCount += 1;
        const feedback: Json[] = [];
        for (const part of state.parts) {
          if (state.locked.has(part.part_id)) {
            feedback.push({
              part_id: part.part_id,
              correct: true,
              score: 1,
              flags: [],
              message: part.praise,
              links: part.links,
            });
            continue;
          }
          const response = responses[part.part_id];
          const outcome =
            response === undefined
              ? { score: 0, flags: ["no_response"] }
              : part.grade(response);
          const prev = state.best.get(part.part_id) ?? 0;
          state.best.set(part.part_id, Math.max(prev, outcome.score));
          if (outcome.score === 1) state.locked.set(part.part_id, 1);
          feedback.push({
            part_id: part.part_id,
            correct: outcome.score === 1,
            score: outcome.score,
            flags: outcome.flags,
            message: outcome.score === 1 ? part.praise : part.hint,
            links: outcome.score === 1 ? part.links : [],
          });
        }
        state.attempts += 1;
        state.openIndex = null;
        const score =
          state.parts.reduce((sum, p) => sum + (state.best.get(p.part_id) ?? 0), 0) /
          state.parts.length;
        state.passed = state.passed || score >= 0.75;
        return sendJson(res, 200, {
          attempt: {
            attempt_id: attemptId,
            index: state.attempts,
            score,
            passed: state.passed,
            late: false,
          },
          feedback,
        });
      }

      const statusMatch = path.match(/^\/api\/v1\/students\/([^/]+)\/status$/);
      if (req.method === "GET" && statusMatch) {
        const studentId = decodeURIComponent(statusMatch[1]!);
        if (studentId !== STUDENT) {
          return sendError(res, 404, "unknown_student", studentId);
        }
        return sendJson(res, 200, {
          student_id: STUDENT,
          ept_score: 0,
          topics: [...topics.entries()].map(([topic, state]) => ({
            topic,
            passed: state.passed,
            attempts: state.attempts,
            best_score: 0,
            first_attempt_score: null,
          })),
        });
      }

      if (req.method === "POST" && path === "/api/v1/preview") {
        const body = await readBody(req);
        const text = String(body.text ?? "");
        const balanced =
          (text.match(/\(/g) ?? []).length === (text.match(/\)/g) ?? []).length;
        if (!text.trim() || !balanced || /[+\-*/^]$/.test(text.trim())) {
          return sendJson(res, 200, {
            ok: false,
            offset: text.length,
            expected: "an expression",
            message: `incomplete expression at position ${text.length}`,
          });
        }
        return sendJson(res, 200, { ok: true, rendered: normalize(text) });
      }

      return sendError(res, 404, "not_found", path);
    } catch (error) {
      return sendError(res, 500, "internal", String(error));
    }
  });

  await new Promise<void>((resolve) => server.listen(0, "127.0.0.1", resolve));
  const { port } = server.address() as AddressInfo;
  fixture.url = `http://127.0.0.1:${port}`;
  fixture.server = server;
  fixture.secretsFor = (partId: string) => {
    for (const state of topics.values()) {
      const part = state.parts.find((p) => p.part_id === partId);
      if (part) return part.secrets;
    }
    return [];
  };
  fixture.close = () =>
    new Promise<void>((resolve, reject) =>
      server.close((err) => (err ? reject(err) : resolve())),
    );
  return fixture as Fixture;
}
