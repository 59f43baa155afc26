import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient, TransportError } from "../src/api.js";
import { AttemptFlow } from "../src/state.js";
import { Fixture, startFixture, TOKEN } from "./fixture.js";

let fixture: Fixture;

beforeAll(async () => {
  fixture = await startFixture();
});

afterAll(async () => {
  await fixture.close();
});

describe("attempt flow", () => {
  it("rejects responses for parts that are not open", async () => {
    const flow = new AttemptFlow(new ApiClient(fixture.url, TOKEN), "Algebra");
    await flow.start();
    expect(() => flow.setResponse("ghost#9", "1")).toThrowError(/not open/);
  });

  it("transport failure preserves the draft and a plain retry succeeds", async () => {
    const flow = new AttemptFlow(new ApiClient(fixture.url, TOKEN), "Algebra");
    await flow.start();
    flow.setResponse("expand#0", "a^2 - 2a + 1");

    fixture.failNextSubmit = true;
    await expect(flow.submit()).rejects.toBeInstanceOf(TransportError);
    expect(flow.phase).toBe("in_attempt");
    expect(flow.lastTransportError).toBeTruthy();
    expect(flow.draft()).toEqual({ "expand#0": "a^2 - 2a + 1" });

    const result = await flow.submit(); // same draft, no re-entry needed
    expect(result.attempt.score).toBe(1);
    expect(result.attempt.passed).toBe(true);
  });
});
