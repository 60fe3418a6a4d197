import { afterEach, describe, expect, it, vi } from "vitest";
import { SessionApi } from "../src/api.js";
import { ViewState } from "../src/state.js";
import { STATUS, mockFetch } from "./helpers.js";

describe("ViewState label staging", () => {
  afterEach(() => vi.unstubAllGlobals());

  it("flushes the whole batch in one POST and clears on success", async () => {
    const log = mockFetch({ "/api/labels": STATUS });
    const state = new ViewState(new SessionApi());
    state.stageLabel("a", "relevant");
    state.stageLabel("b", "irrelevant");
    state.stageLabel("a", "neutral"); // restaging overwrites
    const status = await state.flushLabels();
    expect(status).toEqual(STATUS);
    const posts = log.filter((e) => e.method === "POST");
    expect(posts).toHaveLength(1);
    expect(posts[0].body).toEqual({ assignments: { a: "neutral", b: "irrelevant" } });
    expect(state.pendingEdits.size).toBe(0);
    expect(state.lastError).toBeNull();
  });

  it("keeps all edits pending when the POST fails", async () => {
    const log = mockFetch({}, { failPosts: true });
    const state = new ViewState(new SessionApi());
    state.stageLabel("a", "relevant");
    state.stageLabel("b", "irrelevant");
    const status = await state.flushLabels();
    expect(status).toBeNull();
    expect(state.lastError).not.toBeNull();
    expect([...state.pendingEdits.entries()]).toEqual([
      ["a", "relevant"],
      ["b", "irrelevant"],
    ]);
    // retry resubmits the identical batch
    vi.unstubAllGlobals();
    const retryLog = mockFetch({ "/api/labels": STATUS });
    await state.flushLabels();
    expect(retryLog[0].body).toEqual(log[0].body);
    expect(state.pendingEdits.size).toBe(0);
  });

  it("no-op flush performs no request", async () => {
    const log = mockFetch({ "/api/labels": STATUS });
    const state = new ViewState(new SessionApi());
    expect(await state.flushLabels()).toBeNull();
    expect(log).toHaveLength(0);
  });

  it("toggleLayer appends to the stack order and removes on repeat", () => {
    const state = new ViewState(new SessionApi());
    expect(state.enabledLayers).toEqual(["label-quality"]);
    state.toggleLayer("u-matrix");
    state.toggleLayer("qe");
    expect(state.enabledLayers).toEqual(["label-quality", "u-matrix", "qe"]);
    state.toggleLayer("u-matrix");
    expect(state.enabledLayers).toEqual(["label-quality", "qe"]);
  });
});
