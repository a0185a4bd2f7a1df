// Session controller: wires clicks to API calls and re-renders.
// Rendering is a pure function of the last server state plus the local
// selection; the server decides every question of legality.

import { Api, ApiError } from "./api.js";
import { renderBoard, type Selection } from "./board.js";
import type { Hints, Layout, SessionState, StepJson } from "./types.js";

export class App {
  state: SessionState | null = null;
  layout: Layout | null = null;
  hints: Hints | null = null;
  selection: Selection = { region: null, beta: null };
  lastError = "";
  busy = false;

  constructor(public api: Api, public root: HTMLElement) {}

  async load(embedding: string, pi: string, mode?: string): Promise<void> {
    this.state = await this.api.createSession(embedding, pi, mode);
    this.layout = this.state.layout ?? (await this.api.layout(embedding));
    this.selection = { region: null, beta: null };
    this.lastError = "";
    await this.refreshHints();
    this.render();
  }

  private async refreshHints(): Promise<void> {
    if (!this.state) return;
    try {
      this.hints = await this.api.hints(this.state.id);
    } catch {
      this.hints = null;
    }
  }

  private async mutate(fn: () => Promise<SessionState>): Promise<void> {
    if (!this.state || this.busy) return;
    this.busy = true;
    try {
      this.state = await fn();
      this.lastError = "";
      this.selection = { region: null, beta: null };
      await this.refreshHints();
    } catch (err) {
      this.lastError = err instanceof ApiError ? err.reason : String(err);
    } finally {
      this.busy = false;
    }
    this.render();
  }

  async applyStep(step: StepJson): Promise<void> {
    await this.mutate(() =>
      this.api.applyStep(this.state!.id, this.state!.revision, step));
  }

  async undo(): Promise<void> {
    await this.mutate(() =>
      this.api.undo(this.state!.id, this.state!.revision));
  }

  async confirmMove(): Promise<void> {
    const { region, beta } = this.selection;
    if (region === null || beta === null) return;
    await this.applyStep({ kind: "move", beta, region });
  }

  async requestHint(): Promise<void> {
    if (!this.state) return;
    this.hints = await this.api.hints(this.state.id, 500000);
    this.render();
  }

  async autoplay(): Promise<void> {
    const cert = this.hints?.solver_verdict?.certificate;
    if (!cert) return;
    for (const step of cert) {
      await this.applyStep(step);
      if (this.lastError) break;
    }
  }

  onSquareClick(id: number): void {
    if (!this.state) return;
    const region = this.state.position.regions.findIndex((r) =>
      r.includes(id));
    if (this.selection.region === null || region !== this.selection.region) {
      this.selection = { region, beta: null };
    } else {
      this.selection = { region, beta: id };
    }
    this.render();
  }

  bannerText(): string {
    if (!this.state) return "";
    const v = this.state.status.verdict;
    if (v === "won") return "WON";
    if (v === "lost") {
      return this.state.position.history.length ? "LOST" : "DOOMED";
    }
    return "OPEN";
  }

  render(): void {
    const { root } = this;
    root.textContent = "";
    if (!this.state || !this.layout) return;

    const banner = document.createElement("div");
    banner.id = "banner";
    banner.className = `banner banner-${this.state.status.verdict}`;
    banner.textContent = this.bannerText();
    root.appendChild(banner);

    const info = document.createElement("div");
    info.className = "session-info";
    info.textContent =
      `${this.state.embedding}  |  ${this.state.pi}  |  ` +
      `${this.state.mode} degree  |  revision ${this.state.revision}`;
    root.appendChild(info);

    if (this.lastError) {
      const err = document.createElement("div");
      err.id = "error";
      err.className = "error";
      err.textContent = this.lastError;
      root.appendChild(err);
    }

    root.appendChild(renderBoard(
      this.layout, this.state.position, this.state.status, this.selection,
      (id) => this.onSquareClick(id)));

    const controls = document.createElement("div");
    controls.className = "controls";

    const confirm = document.createElement("button");
    confirm.id = "confirm-move";
    confirm.textContent = this.selection.beta !== null
      ? `move [${this.squareName(this.selection.beta)}, ` +
        `region ${this.selection.region}]`
      : "select a region, then the move square";
    confirm.disabled = this.selection.beta === null;
    confirm.addEventListener("click", () => void this.confirmMove());
    controls.appendChild(confirm);

    const undo = document.createElement("button");
    undo.id = "undo";
    undo.textContent = "undo";
    undo.disabled = this.state.position.history.length === 0;
    undo.addEventListener("click", () => void this.undo());
    controls.appendChild(undo);

    const hint = document.createElement("button");
    hint.id = "hint";
    hint.textContent = "hint";
    hint.addEventListener("click", () => void this.requestHint());
    controls.appendChild(hint);

    if (this.hints?.solver_verdict) {
      const verdict = document.createElement("span");
      verdict.id = "solver-verdict";
      verdict.textContent = ` solver: ${this.hints.solver_verdict.kind}`;
      controls.appendChild(verdict);
      if (this.hints.solver_verdict.certificate) {
        const play = document.createElement("button");
        play.id = "autoplay";
        play.textContent = "autoplay certificate";
        play.addEventListener("click", () => void this.autoplay());
        controls.appendChild(play);
      }
    }
    root.appendChild(controls);
    root.appendChild(this.splitPanel());
    if (this.layout.diagonal_identity) {
      root.appendChild(this.mergePanel());
    }
  }

  private squareName(id: number): string {
    return this.layout?.squares.find((s) => s.id === id)?.name ?? String(id);
  }

  private splitPanel(): HTMLElement {
    const panel = document.createElement("div");
    panel.id = "splits";
    panel.className = "panel";
    const title = document.createElement("h3");
    const subsets = this.hints?.qualifying_splits
      ?? this.hints?.splitting_subsets ?? [];
    title.textContent = this.hints?.qualifying_splits
      ? "qualifying splits" : "splitting subsets";
    panel.appendChild(title);
    for (const ideal of subsets) {
      if (!ideal.length || ideal.length === this.layout!.squares.length) {
        continue;
      }
      const btn = document.createElement("button");
      btn.className = "split-option";
      btn.textContent =
        `split {${ideal.map((i) => this.squareName(i)).join(" ")}}`;
      btn.addEventListener("click", () =>
        void this.applyStep({ kind: "split", ideal }));
      panel.appendChild(btn);
    }
    return panel;
  }

  private mergePanel(): HTMLElement {
    const panel = document.createElement("div");
    panel.id = "merges";
    panel.className = "panel";
    const title = document.createElement("h3");
    title.textContent = "merges";
    panel.appendChild(title);
    for (const m of this.hints?.legal_merges ?? []) {
      const btn = document.createElement("button");
      btn.className = "merge-option";
      btn.textContent =
        `region ${m.region}: relabel copy ${m.k2} as ${m.k1}`;
      btn.addEventListener("click", () => void this.applyStep(
        { kind: "merge", region: m.region, k1: m.k1, k2: m.k2 }));
      panel.appendChild(btn);
    }
    return panel;
  }
}
