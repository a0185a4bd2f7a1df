// Thin typed client for the session service; all legality lives server-side.

import type { Hints, Layout, SessionState, StepJson } from "./types.js";

export class ApiError extends Error {
  constructor(public status: number, public reason: string) {
    super(`${status}: ${reason}`);
  }
}

export class Api {
  constructor(private base: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await fetch(this.base + path, {
      headers: { "Content-Type": "application/json" },
      ...init,
    });
    const body = await res.json();
    if (!res.ok) {
      throw new ApiError(res.status, (body && body.error) || res.statusText);
    }
    return body as T;
  }

  createSession(embedding: string, pi: string, mode?: string):
      Promise<SessionState> {
    const payload: Record<string, string> = { embedding, pi };
    if (mode) payload.mode = mode;
    return this.request("/sessions", {
      method: "POST",
      body: JSON.stringify(payload),
    });
  }

  getSession(id: string): Promise<SessionState> {
    return this.request(`/sessions/${id}`);
  }

  applyStep(id: string, revision: number, step: StepJson):
      Promise<SessionState> {
    return this.request(`/sessions/${id}/steps`, {
      method: "POST",
      body: JSON.stringify({ revision, step }),
    });
  }

  undo(id: string, revision: number): Promise<SessionState> {
    return this.request(`/sessions/${id}/undo`, {
      method: "POST",
      body: JSON.stringify({ revision }),
    });
  }

  hints(id: string, budget?: number): Promise<Hints> {
    const q = budget ? `?budget=${budget}` : "";
    return this.request(`/sessions/${id}/hints${q}`);
  }

  layout(embedding: string): Promise<Layout> {
    return this.request(`/layouts?embedding=${encodeURIComponent(embedding)}`);
  }
}
