import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { Explorer } from "../src/state.js";
import { MOCK_BASE, MOCK_LOOPED, makeMockFetch, mockMutation } from "./mock.js";

function explorerWith(opts: Parameters<typeof makeMockFetch>[0] = {}) {
  const { fetchImpl, calls } = makeMockFetch(opts);
  return { ex: new Explorer(new ApiClient("http://mock", fetchImpl)), calls };
}

describe("explorer state", () => {
  it("loads a presentation and lays out every vertex", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    expect(ex.current.presentation.vertices).toEqual(["1", "2"]);
    for (const v of ex.current.presentation.vertices) {
      expect(ex.current.positions[v]).toBeDefined();
    }
  });

  it("surfaces parse errors", async () => {
    const { ex } = explorerWith();
    await ex.load("garbage");
    expect(ex.error).toContain("bad grammar");
  });

  it("applies a mutation and pushes a history node", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    await ex.applyMutation("left");
    expect(ex.nodes.length).toBe(2);
    expect(ex.current.move).toEqual({ vertex: "1", side: "left" });
    expect(ex.current.presentation.arrows.map((a) => a.label))
      .toEqual(["a*", "(a.b.a)*"]);
  });

  it("never computes algebra: displayed numbers come from the payload", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    await ex.applyMutation("left");
    const panels = ex.panels();
    // the marker values 41/43/47/53 exist nowhere except the mock payload
    expect(panels.simpleImages.map((s) => s.dimVector))
      .toEqual([[41, 43], [47, 53]]);
    expect(ex.relationsPanelText()).toBe("[R5] marker-relation");
    expect(panels.elimination).toEqual([
      { arrow: "(a.b)'", replacement: "(a.b.a)**a*" },
    ]);
  });

  it("positions persist across a mutation through the vertex map", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    const before = ex.current.positions;
    ex.clickVertex("1");
    await ex.applyMutation("left");
    expect(ex.current.positions["1"]).toEqual(before["1"]);
    expect(ex.current.positions["2"]).toEqual(before["2"]);
  });

  it("raises the inverse-law banner when the server reports isomorphism", async () => {
    const { ex } = explorerWith({ iso: true });
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    await ex.applyMutation("right");
    expect(ex.banner).toBe("returned to start (inverse law)");
  });

  it("blocks mutation at a looped vertex with a badge", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_LOOPED.text);
    expect(ex.disabledVertices().has("1")).toBe(true);
    ex.clickVertex("1");
    expect(ex.selected).toBeNull();
    expect(ex.banner).toContain("mutation undefined");
  });

  it("surfaces 422 domain errors", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_LOOPED.text);
    ex.selected = "1";   // bypass the client-side guard
    await ex.applyMutation("left");
    expect(ex.error).toContain("loop");
    expect(ex.nodes.length).toBe(1);
  });

  it("navigates history (undo, redo, branch)", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    await ex.applyMutation("left");
    ex.historyNavigate(0);
    expect(ex.current.id).toBe(0);
    ex.clickVertex("2");
    await ex.applyMutation("left");
    expect(ex.nodes.length).toBe(3);
    expect(ex.current.parent).toBe(0);
    expect(() => ex.historyNavigate(99)).toThrow();
  });

  it("discards stale responses by token", async () => {
    const { ex } = explorerWith({ delayMsByCall: [0, 60, 0] });
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    const slow = ex.applyMutation("left");    // call 1: delayed
    ex.busy = false;                          // simulate user pressing again
    ex.clickVertex("2");
    const fast = ex.applyMutation("left");    // call 2: immediate
    await Promise.all([slow, fast]);
    // only the fast (newer) response landed
    expect(ex.nodes.length).toBe(2);
    expect(ex.current.move?.vertex).toBe("2");
  });

  it("round-trips export and import", async () => {
    const { ex } = explorerWith();
    await ex.load(MOCK_BASE.text);
    ex.clickVertex("1");
    await ex.applyMutation("left");
    const text = ex.exportText();
    await ex.importText(text);
    expect(ex.current.presentation.text).toBe(text);
    expect(ex.exportDot()).toContain('"1" -> "2"');
  });
});
