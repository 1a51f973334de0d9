// Acceptance flow against a live gateway: load E2, click vertex 1, apply
// the left mutation, compare the rendered quiver and the relation panel
// against the CLI golden output; then apply the right mutation and expect
// the inverse-law banner; finally check the looped-vertex affordance.

import { spawn, ChildProcess } from "node:child_process";
import { readFileSync } from "node:fs";
import path from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { initialLayout } from "../src/layout.js";
import { arrowCount, renderQuiver } from "../src/render.js";
import { Explorer } from "../src/state.js";

const PORT = 8419;
const BASE = `http://127.0.0.1:${PORT}`;
const REPO = path.resolve(__dirname, "..", "..");

let server: ChildProcess;

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const res = await fetch(`${BASE}/api/examples`);
      if (res.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error("gateway did not come up");
}

beforeAll(async () => {
  server = spawn("python3", ["-m", "tiltmut.cli", "serve", "--port", String(PORT)], {
    cwd: REPO,
    env: { ...process.env, PYTHONPATH: path.join(REPO, "src") },
    stdio: "ignore",
  });
  await waitForServer();
}, 60000);

afterAll(() => {
  server?.kill();
});

describe("explorer against the live gateway", () => {
  it("runs the full mutation flow on E2", async () => {
    const ex = new Explorer(new ApiClient(BASE));
    const examples = await new ApiClient(BASE).examples();
    const e2 = examples.find((e) => e.name === "e2");
    expect(e2).toBeDefined();
    await ex.load(e2!.text);
    expect(ex.current.presentation.vertices).toEqual(["1", "2", "3"]);

    ex.clickVertex("1");
    await ex.applyMutation("left");
    expect(ex.error).toBeNull();
    const pres = ex.current.presentation;
    expect(pres.arrows.length).toBe(6);
    const prov: Record<string, string> = {};
    for (const a of ex.current.mutation!.arrows) prov[a.label] = a.tag;
    const svg = renderQuiver(pres, ex.current.positions, { provenance: prov });
    expect(arrowCount(svg)).toBe(6);

    // relation panel text equals the CLI golden output's relation list
    const golden = JSON.parse(
      readFileSync(path.join(REPO, "tests", "golden", "e2_mutate.json"), "utf-8"),
    );
    const goldenText = golden.relations
      .map((r: { tag: string; text: string }) => `[${r.tag}] ${r.text}`)
      .join("\n");
    expect(ex.relationsPanelText()).toBe(goldenText);

    // simple images displayed straight from the response
    expect(ex.panels().simpleImages.map((s) => s.dimVector)).toEqual([
      [1, 0, 0],
      [1, 1, 2],
      [1, 2, 1],
    ]);

    // right mutation at 1 brings us back: inverse-law banner
    ex.clickVertex("1");
    await ex.applyMutation("right");
    expect(ex.error).toBeNull();
    expect(ex.banner).toBe("returned to start (inverse law)");
  }, 120000);

  it("disables looped vertices", async () => {
    const ex = new Explorer(new ApiClient(BASE));
    const examples = await new ApiClient(BASE).examples();
    const looped = examples.find((e) => e.name === "loop_at_1");
    await ex.load(looped!.text);
    expect(ex.disabledVertices().has("1")).toBe(true);
    const svg = renderQuiver(
      ex.current.presentation,
      initialLayout(ex.current.presentation.vertices, [["1", "1"]]),
      { disabledVertices: ex.disabledVertices() },
    );
    expect(svg).toContain('class="vertex disabled"');
    ex.clickVertex("1");
    expect(ex.banner).toContain("mutation undefined");
  }, 60000);
});
