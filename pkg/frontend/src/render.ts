// Pure SVG rendering: presentation + layout -> markup string.  Parallel
// arrows fan out as separated arcs, loops draw as self-arcs, and every
// arrow carries its label (plus a provenance class when known).  No
// algebra happens here; the inputs are exactly the gateway payloads.

import { Positions } from "./layout.js";
import { Presentation } from "./types.js";

const TAG_COLORS: Record<string, string> = {
  A1: "#c0392b",
  A2: "#8e44ad",
  A3: "#2471a3",
  A4: "#1e8449",
};

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface RenderOptions {
  provenance?: Record<string, string>;     // arrow label -> tag
  disabledVertices?: Set<string>;          // loops: mutation undefined
  selected?: string | null;
}

export function renderQuiver(
  pres: Presentation,
  pos: Positions,
  opts: RenderOptions = {},
): string {
  const parts: string[] = [];
  parts.push(
    '<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 520 360" class="quiver">',
    '<defs><marker id="arrowhead" markerWidth="7" markerHeight="7" refX="6" refY="2.2" orient="auto">' +
      '<path d="M0,0 L6,2.2 L0,4.4 z"/></marker></defs>',
  );
  // group parallel arrows so they fan out
  const groups = new Map<string, typeof pres.arrows>();
  for (const a of pres.arrows) {
    const key = `${a.source}->${a.target}`;
    if (!groups.has(key)) groups.set(key, []);
    groups.get(key)!.push(a);
  }
  for (const [key, arrows] of groups) {
    arrows.forEach((a, idx) => {
      const tag = opts.provenance?.[a.label];
      const color = tag ? TAG_COLORS[tag] ?? "#333" : "#333";
      const cls = tag ? ` arrow-${tag}` : "";
      if (a.source === a.target) {
        const [x, y] = pos[a.source];
        const r = 16 + idx * 9;
        parts.push(
          `<path class="arrow loop${cls}" data-label="${esc(a.label)}" ` +
            `d="M ${x - 8} ${y - 14} C ${x - r - 18} ${y - r - 26}, ` +
            `${x + r + 12} ${y - r - 26}, ${x + 8} ${y - 14}" fill="none" ` +
            `stroke="${color}" marker-end="url(#arrowhead)"/>`,
          `<text class="arrow-label" x="${x}" y="${y - r - 28}" text-anchor="middle">${esc(a.label)}</text>`,
        );
        return;
      }
      const [x1, y1] = pos[a.source];
      const [x2, y2] = pos[a.target];
      const dx = x2 - x1;
      const dy = y2 - y1;
      const d = Math.max(Math.hypot(dx, dy), 1);
      const nx = -dy / d;
      const ny = dx / d;
      const both = groups.has(`${a.target}->${a.source}`) && a.source < a.target ? 1 : 0;
      const spread = (idx - (arrows.length - 1) / 2) * 26 + both * 10 + 14 * (groups.has(`${a.target}->${a.source}`) ? 1 : 0);
      const mx = (x1 + x2) / 2 + nx * spread;
      const my = (y1 + y2) / 2 + ny * spread;
      const sx = x1 + (18 * (mx - x1)) / Math.max(Math.hypot(mx - x1, my - y1), 1);
      const sy = y1 + (18 * (my - y1)) / Math.max(Math.hypot(mx - x1, my - y1), 1);
      const ex = x2 + (20 * (mx - x2)) / Math.max(Math.hypot(mx - x2, my - y2), 1);
      const ey = y2 + (20 * (my - y2)) / Math.max(Math.hypot(mx - x2, my - y2), 1);
      parts.push(
        `<path class="arrow${cls}" data-label="${esc(a.label)}" ` +
          `d="M ${sx.toFixed(1)} ${sy.toFixed(1)} Q ${mx.toFixed(1)} ${my.toFixed(1)} ` +
          `${ex.toFixed(1)} ${ey.toFixed(1)}" fill="none" stroke="${color}" ` +
          `marker-end="url(#arrowhead)"/>`,
        `<text class="arrow-label" x="${mx.toFixed(1)}" y="${(my - 4).toFixed(1)}" ` +
          `text-anchor="middle">${esc(a.label)}</text>`,
      );
    });
  }
  for (const v of pres.vertices) {
    const [x, y] = pos[v];
    const disabled = opts.disabledVertices?.has(v) ?? false;
    const selected = opts.selected === v;
    const cls = `vertex${disabled ? " disabled" : ""}${selected ? " selected" : ""}`;
    const title = disabled ? "<title>loop: mutation undefined</title>" : "";
    parts.push(
      `<g class="${cls}" data-vertex="${esc(v)}">` +
        `<circle cx="${x}" cy="${y}" r="14" fill="${disabled ? "#ddd" : selected ? "#ffe9a8" : "#fff"}" stroke="#222"/>` +
        `${title}<text x="${x}" y="${y + 4}" text-anchor="middle">${esc(v)}</text></g>`,
    );
  }
  parts.push("</svg>");
  return parts.join("\n");
}

export function arrowCount(svg: string): number {
  return (svg.match(/class="arrow[ "]/g) ?? []).length;
}
