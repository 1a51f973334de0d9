// Explorer state: a history tree of presentations plus panel data, all of
// it a pure function of the root text and the sequence of gateway
// responses.  At most one mutation request is in flight; stale responses
// are discarded by token.

import { ApiClient } from "./api.js";
import { carryLayout, initialLayout, Positions } from "./layout.js";
import { Move, MutationResponse, Presentation } from "./types.js";

export interface HistoryNode {
  id: number;
  parent: number | null;
  move: Move | null;
  presentation: Presentation;
  mutation: MutationResponse | null;   // response that produced this node
  positions: Positions;
}

export interface PanelData {
  relations: { text: string; tag: string }[];
  elimination: { arrow: string; replacement: string }[];
  simpleImages: { vertex: string; dimVector: number[]; loewyLayers: Record<string, number>[] }[];
}

export class Explorer {
  nodes: HistoryNode[] = [];
  cursor = -1;
  selected: string | null = null;
  side: "left" | "right" = "left";
  banner: string | null = null;
  error: string | null = null;
  busy = false;
  private token = 0;

  constructor(private api: ApiClient) {}

  get current(): HistoryNode {
    return this.nodes[this.cursor];
  }

  edgesOf(p: Presentation): [string, string][] {
    return p.arrows.map((a) => [a.source, a.target]);
  }

  async load(text: string): Promise<void> {
    const parsed = await this.api.parse(text);
    if (!parsed.presentation) {
      this.error = parsed.errors?.map((e) => e.message).join("; ") ?? "parse failed";
      return;
    }
    const pres = parsed.presentation;
    this.nodes = [{
      id: 0,
      parent: null,
      move: null,
      presentation: pres,
      mutation: null,
      positions: initialLayout(pres.vertices, this.edgesOf(pres)),
    }];
    this.cursor = 0;
    this.selected = null;
    this.banner = null;
    this.error = null;
  }

  disabledVertices(): Set<string> {
    const p = this.current.presentation;
    const out = new Set<string>();
    for (const a of p.arrows) if (a.source === a.target) out.add(a.source);
    return out;
  }

  clickVertex(v: string): void {
    if (this.disabledVertices().has(v)) {
      this.banner = `vertex ${v} carries a loop: mutation undefined`;
      this.selected = null;
      return;
    }
    this.selected = v;
    this.banner = null;
  }

  async applyMutation(side?: "left" | "right"): Promise<void> {
    if (this.selected === null || this.busy) return;
    const useSide = side ?? this.side;
    const from = this.current;
    const vertex = this.selected;
    const myToken = ++this.token;
    this.busy = true;
    this.error = null;
    try {
      const res = await this.api.mutate(from.presentation.text, vertex, useSide);
      if (myToken !== this.token) return;   // a newer request superseded us
      const pres = res.reducedPresentation;
      const node: HistoryNode = {
        id: this.nodes.length,
        parent: from.id,
        move: { vertex, side: useSide },
        presentation: pres,
        mutation: res,
        positions: carryLayout(from.positions, res.vertexMap, pres.vertices,
                               this.edgesOf(pres)),
      };
      this.nodes.push(node);
      this.cursor = node.id;
      this.selected = null;
      this.banner = res.isomorphicToInput
        ? "returned to start (inverse law)"
        : null;
    } catch (e) {
      if (myToken === this.token) {
        this.error = e instanceof Error ? e.message : String(e);
      }
    } finally {
      if (myToken === this.token) this.busy = false;
    }
  }

  historyNavigate(id: number): void {
    if (id < 0 || id >= this.nodes.length) throw new Error(`no node ${id}`);
    this.cursor = id;
    this.selected = null;
    this.banner = null;
  }

  panels(): PanelData {
    const m = this.current.mutation;
    return {
      relations: m ? m.relations.map((r) => ({ text: r.text, tag: r.tag })) : [],
      elimination: m ? m.eliminationLog : [],
      simpleImages: m?.simpleImages?.map((s) => ({
        vertex: s.vertex,
        dimVector: s.dimVector,
        loewyLayers: s.loewyLayers,
      })) ?? [],
    };
  }

  relationsPanelText(): string {
    return this.panels().relations.map((r) => `[${r.tag}] ${r.text}`).join("\n");
  }

  exportText(): string {
    return this.current.presentation.text;
  }

  exportJson(): string {
    return JSON.stringify(this.current.mutation ?? this.current.presentation, null, 2);
  }

  exportDot(): string {
    const p = this.current.presentation;
    const prov: Record<string, string> = {};
    for (const a of this.current.mutation?.arrows ?? []) prov[a.label] = a.tag;
    const lines = ["digraph quiver {", "  rankdir=LR;"];
    for (const v of p.vertices) lines.push(`  "${v}" [shape=circle];`);
    for (const a of p.arrows) {
      const tag = prov[a.label] ? ` [${prov[a.label]}]` : "";
      lines.push(`  "${a.source}" -> "${a.target}" [label="${a.label}${tag}"];`);
    }
    lines.push("}");
    return lines.join("\n") + "\n";
  }

  async importText(text: string): Promise<void> {
    await this.load(text);
  }
}
