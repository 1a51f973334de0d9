// Wire types for the gateway JSON API.  The UI never computes algebra:
// every displayed number comes from one of these payloads.

export interface ArrowInfo {
  label: string;
  source: string;
  target: string;
}

export interface Presentation {
  text: string;
  field: string;
  vertices: string[];
  arrows: ArrowInfo[];
  relations: string[];
}

export interface ProvenancedArrow extends ArrowInfo {
  tag: "A1" | "A2" | "A3" | "A4";
  witness: string;
}

export interface TaggedRelation {
  text: string;
  tag: "R1" | "R2" | "R3" | "R4" | "R5";
  witness: string;
}

export interface EliminationStep {
  arrow: string;
  replacement: string;
}

export interface SimpleImage {
  vertex: string;
  dimVector: number[];
  loewyLayers: Record<string, number>[];
  module: unknown;
}

export interface MutationResponse {
  vertex: string;
  side: "left" | "right";
  rawPresentation: Presentation;
  reducedPresentation: Presentation;
  vertexMap: Record<string, string>;
  arrows: ProvenancedArrow[];
  relations: TaggedRelation[];
  eliminationLog: EliminationStep[];
  simpleImages?: SimpleImage[];
  isomorphicToInput?: boolean;
  flags: Record<string, unknown>;
}

export interface ValidationResponse {
  admissible: boolean;
  finiteDimensional: boolean;
  weaklySymmetric: boolean;
  loops: Record<string, number>;
  socleTypes: Record<string, string | null>;
  dim: number | null;
  message: string;
}

export interface ExampleEntry {
  name: string;
  text: string;
}

export interface Move {
  vertex: string;
  side: "left" | "right";
}
