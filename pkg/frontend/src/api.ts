/** Thin typed client over the documented /api/v1 endpoints. */

import type {
  AttemptView,
  PreviewResult,
  ResponseValue,
  StudentStatus,
  SubmitResult,
  TestsOverview,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

/** Network-level failure (timeout, connection refused); the attempt's
 * responses stay in the local draft so a retry can resend them. */
export class TransportError extends Error {
  constructor(cause: unknown) {
    super(`transport failure: ${String(cause)}`);
  }
}

type FetchLike = typeof fetch;

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private token: string | null = null,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(
    method: string,
    path: string,
    body?: unknown,
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (body !== undefined) headers["Content-Type"] = "application/json";
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    let response: Response;
    try {
      response = await this.fetchImpl(`${this.baseUrl}${path}`, {
        method,
        headers,
        body: body === undefined ? undefined : JSON.stringify(body),
      });
    } catch (cause) {
      throw new TransportError(cause);
    }
    const text = await response.text();
    if (!response.ok) {
      let code = "http_error";
      let message = text;
      try {
        const doc = JSON.parse(text);
        code = doc?.error?.code ?? code;
        message = doc?.error?.message ?? message;
      } catch {
        // non-JSON error body: keep raw text
      }
      throw new ApiError(response.status, code, message);
    }
    return JSON.parse(text) as T;
  }

  tests(): Promise<TestsOverview> {
    return this.request("GET", "/api/v1/tests");
  }

  startAttempt(topic: string): Promise<AttemptView> {
    return this.request("POST", `/api/v1/tests/${encodeURIComponent(topic)}/attempts`);
  }

  submit(
    attemptId: string,
    responses: Record<string, ResponseValue>,
  ): Promise<SubmitResult> {
    return this.request(
      "POST",
      `/api/v1/attempts/${encodeURIComponent(attemptId)}/submit`,
      { responses },
    );
  }

  status(studentId: string): Promise<StudentStatus> {
    return this.request(
      "GET",
      `/api/v1/students/${encodeURIComponent(studentId)}/status`,
    );
  }

  preview(text: string): Promise<PreviewResult> {
    return this.request("POST", "/api/v1/preview", { text });
  }
}

/** Trailing-edge debounce for the live parse preview. */
export function debounce<A extends unknown[]>(
  fn: (...args: A) => void,
  delayMs: number,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(() => fn(...args), delayMs);
  };
}
