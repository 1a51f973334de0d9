// Thin client for the gateway.  The fetch implementation is injected so
// tests can replace it with mocks or point it at a live server.

import {
  ExampleEntry,
  MutationResponse,
  Presentation,
  ValidationResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private base: string,
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async post<T>(path: string, body: unknown): Promise<T> {
    const res = await this.fetchImpl(this.base + path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    const data = (await res.json()) as Record<string, unknown>;
    if (!res.ok) {
      const detail = (data.detail ?? {}) as Record<string, string>;
      throw new ApiError(res.status, detail.code ?? "Error", detail.message ?? "request failed");
    }
    return data as T;
  }

  async examples(): Promise<ExampleEntry[]> {
    const res = await this.fetchImpl(this.base + "/api/examples");
    return (await res.json()) as ExampleEntry[];
  }

  async parse(text: string): Promise<{ presentation?: Presentation; errors?: { message: string }[] }> {
    return this.post("/api/parse", { text });
  }

  async validate(text: string): Promise<ValidationResponse> {
    return this.post("/api/validate", { presentation: { text } });
  }

  async mutate(text: string, vertex: string, side: "left" | "right"): Promise<MutationResponse> {
    return this.post("/api/mutate", {
      presentation: { text },
      vertex,
      side,
      reduce: true,
      checked: true,
    });
  }
}
