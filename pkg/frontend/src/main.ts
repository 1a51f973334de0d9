// Browser bootstrap: wires the explorer state to the DOM.  This is the
// only module that touches document; everything else is pure and tested
// headlessly.

import { ApiClient } from "./api.js";
import { renderQuiver } from "./render.js";
import { Explorer } from "./state.js";

const api = new ApiClient("");
const explorer = new Explorer(api);

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function redraw(): void {
  const host = el<HTMLDivElement>("quiver");
  if (explorer.cursor < 0) {
    host.innerHTML = "<p>load an example to begin</p>";
    return;
  }
  const node = explorer.current;
  const prov: Record<string, string> = {};
  for (const a of node.mutation?.arrows ?? []) prov[a.label] = a.tag;
  host.innerHTML = renderQuiver(node.presentation, node.positions, {
    provenance: prov,
    disabledVertices: explorer.disabledVertices(),
    selected: explorer.selected,
  });
  host.querySelectorAll<SVGGElement>("g.vertex").forEach((g) => {
    g.addEventListener("click", () => {
      explorer.clickVertex(g.dataset.vertex!);
      redraw();
    });
  });
  el<HTMLDivElement>("banner").textContent = explorer.banner ?? "";
  el<HTMLDivElement>("error").textContent = explorer.error ?? "";
  el<HTMLPreElement>("relations").textContent = explorer.relationsPanelText();
  el<HTMLPreElement>("elimination").textContent = explorer
    .panels()
    .elimination.map((e) => `${e.arrow} := ${e.replacement}`)
    .join("\n");
  el<HTMLPreElement>("simples").textContent = explorer
    .panels()
    .simpleImages.map(
      (s) =>
        `F(S'_${s.vertex}) dim [${s.dimVector.join(", ")}] layers ` +
        s.loewyLayers
          .map((l) => Object.entries(l).map(([v, m]) => `${m}xS_${v}`).join("+"))
          .join(" / "),
    )
    .join("\n");
  const hist = el<HTMLDivElement>("history");
  hist.innerHTML = explorer.nodes
    .map((n) => {
      const label = n.move ? `${n.move.side === "left" ? "+" : "-"}${n.move.vertex}` : "root";
      const cls = n.id === explorer.cursor ? "hist-node current" : "hist-node";
      return `<button class="${cls}" data-node="${n.id}">${label}</button>`;
    })
    .join(" ");
  hist.querySelectorAll<HTMLButtonElement>("button").forEach((b) => {
    b.addEventListener("click", () => {
      explorer.historyNavigate(Number(b.dataset.node));
      redraw();
    });
  });
  el<HTMLTextAreaElement>("source").value = explorer.exportText();
}

async function boot(): Promise<void> {
  const select = el<HTMLSelectElement>("examples");
  const examples = await api.examples();
  select.innerHTML = examples
    .map((e) => `<option value="${e.name}">${e.name}</option>`)
    .join("");
  const byName = new Map(examples.map((e) => [e.name, e.text]));

  el<HTMLButtonElement>("load").addEventListener("click", async () => {
    await explorer.load(byName.get(select.value) ?? "");
    redraw();
  });
  el<HTMLButtonElement>("apply-left").addEventListener("click", async () => {
    await explorer.applyMutation("left");
    redraw();
  });
  el<HTMLButtonElement>("apply-right").addEventListener("click", async () => {
    await explorer.applyMutation("right");
    redraw();
  });
  el<HTMLButtonElement>("import").addEventListener("click", async () => {
    await explorer.importText(el<HTMLTextAreaElement>("source").value);
    redraw();
  });
  el<HTMLButtonElement>("export-dot").addEventListener("click", () => {
    const blob = new Blob([explorer.exportDot()], { type: "text/plain" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "quiver.dot";
    a.click();
  });
  redraw();
}

boot().catch((e) => {
  document.body.insertAdjacentHTML("beforeend", `<pre>${String(e)}</pre>`);
});
