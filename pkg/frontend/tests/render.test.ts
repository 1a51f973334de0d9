import { describe, expect, it } from "vitest";

import { initialLayout, carryLayout } from "../src/layout.js";
import { arrowCount, renderQuiver } from "../src/render.js";
import { MOCK_BASE, MOCK_LOOPED } from "./mock.js";

describe("layout", () => {
  it("is deterministic for a fixed vertex set", () => {
    const edges: [string, string][] = [["1", "2"], ["2", "1"]];
    const a = initialLayout(["1", "2"], edges);
    const b = initialLayout(["1", "2"], edges);
    expect(a).toEqual(b);
  });

  it("carries positions through the vertex map and fills gaps", () => {
    const old = { "1": [10, 10] as [number, number], "2": [20, 20] as [number, number] };
    const out = carryLayout(old, { "1": "1", "2": "2" }, ["1", "2", "3"], []);
    expect(out["1"]).toEqual([10, 10]);
    expect(out["3"]).toBeDefined();
  });
});

describe("render", () => {
  it("renders one path per arrow, fanning out parallels", () => {
    const pos = initialLayout(MOCK_BASE.vertices, [["1", "2"], ["2", "1"]]);
    const svg = renderQuiver(MOCK_BASE, pos);
    expect(arrowCount(svg)).toBe(2);
    expect(svg).toContain('data-label="a"');
    expect(svg).toContain('data-label="b"');
  });

  it("renders loops as self-arcs and marks disabled vertices", () => {
    const pos = initialLayout(MOCK_LOOPED.vertices, [["1", "1"]]);
    const svg = renderQuiver(MOCK_LOOPED, pos, { disabledVertices: new Set(["1"]) });
    expect(svg).toContain("loop");
    expect(svg).toContain('class="vertex disabled"');
    expect(svg).toContain("mutation undefined");
  });

  it("colors arrows by provenance tag", () => {
    const pos = initialLayout(MOCK_BASE.vertices, []);
    const svg = renderQuiver(MOCK_BASE, pos, {
      provenance: { a: "A1", b: "A3" },
    });
    expect(svg).toContain("arrow-A1");
    expect(svg).toContain("arrow-A3");
  });

  it("escapes labels", () => {
    const pres = {
      ...MOCK_BASE,
      arrows: [{ label: 'x"<&', source: "1", target: "2" }],
    };
    const pos = initialLayout(pres.vertices, []);
    const svg = renderQuiver(pres, pos);
    expect(svg).not.toContain('x"<&');
    expect(svg).toContain("x&quot;&lt;&amp;");
  });
});
