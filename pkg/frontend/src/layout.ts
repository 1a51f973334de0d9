// Deterministic vertex layout: a seeded force relaxation starting from a
// circle, so the same label set always lands in the same positions, and
// positions carry over a mutation through the vertex map so the eye can
// track the relabeling.

export type Positions = Record<string, [number, number]>;

function hashString(s: string): number {
  let h = 2166136261;
  for (let i = 0; i < s.length; i++) {
    h ^= s.charCodeAt(i);
    h = Math.imul(h, 16777619);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function initialLayout(
  vertices: string[],
  edges: [string, string][],
  width = 520,
  height = 360,
): Positions {
  const cx = width / 2;
  const cy = height / 2;
  const r = Math.min(width, height) / 2 - 60;
  const rng = mulberry32(hashString(vertices.join("|")));
  const pos: Positions = {};
  const order = [...vertices].sort();
  order.forEach((v, k) => {
    const angle = (2 * Math.PI * k) / order.length - Math.PI / 2;
    pos[v] = [
      cx + r * Math.cos(angle) + (rng() - 0.5) * 8,
      cy + r * Math.sin(angle) + (rng() - 0.5) * 8,
    ];
  });
  // a few rounds of spring relaxation; deterministic since everything is
  for (let round = 0; round < 30; round++) {
    const force: Record<string, [number, number]> = {};
    for (const v of vertices) force[v] = [0, 0];
    for (const a of vertices) {
      for (const b of vertices) {
        if (a >= b) continue;
        const dx = pos[b][0] - pos[a][0];
        const dy = pos[b][1] - pos[a][1];
        const d2 = Math.max(dx * dx + dy * dy, 1);
        const rep = 12000 / d2;
        const d = Math.sqrt(d2);
        force[a][0] -= (rep * dx) / d;
        force[a][1] -= (rep * dy) / d;
        force[b][0] += (rep * dx) / d;
        force[b][1] += (rep * dy) / d;
      }
    }
    for (const [s, t] of edges) {
      if (s === t) continue;
      const dx = pos[t][0] - pos[s][0];
      const dy = pos[t][1] - pos[s][1];
      const d = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const att = (d - 140) * 0.02;
      force[s][0] += (att * dx) / d;
      force[s][1] += (att * dy) / d;
      force[t][0] -= (att * dx) / d;
      force[t][1] -= (att * dy) / d;
    }
    for (const v of vertices) {
      pos[v] = [
        Math.min(width - 40, Math.max(40, pos[v][0] + force[v][0])),
        Math.min(height - 40, Math.max(40, pos[v][1] + force[v][1])),
      ];
    }
  }
  return pos;
}

export function carryLayout(
  old: Positions,
  vertexMap: Record<string, string>,
  vertices: string[],
  edges: [string, string][],
): Positions {
  const out: Positions = {};
  for (const [from, to] of Object.entries(vertexMap)) {
    if (old[from]) out[to] = old[from];
  }
  const missing = vertices.filter((v) => !(v in out));
  if (missing.length) {
    const fresh = initialLayout(vertices, edges);
    for (const v of missing) out[v] = fresh[v];
  }
  return out;
}
