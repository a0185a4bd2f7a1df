// Entry point: a small loader form plus quick-load fixtures.

import { Api } from "./api.js";
import { App } from "./app.js";

const FIXTURES: [string, string, string][] = [
  ["three classes, winnable", "diag(id:A4,id:A4,id:A4)", "21435;32154;24153"],
  ["three classes, doomed", "diag(id:A4,id:A4,id:A4)", "23154;41235;13542"],
  ["splitting required", "diag(id:A4,id:A4,id:A4)", "23145;14253;41523"],
  ["orthogonal branching", "diag(so-in-sl:5,id:B2)", "23154;-1,2"],
  ["long-root SL(3) in G2", "diag(sl3-in-g2,id:A2)", "12;213"],
];

export function boot(root: HTMLElement, base = ""): App {
  const api = new Api(base);
  const app = new App(api, document.createElement("div"));

  const form = document.createElement("div");
  form.className = "loader";
  const emb = document.createElement("input");
  emb.id = "embedding-input";
  emb.value = FIXTURES[0][1];
  emb.size = 34;
  const pi = document.createElement("input");
  pi.id = "pi-input";
  pi.value = FIXTURES[0][2];
  pi.size = 24;
  const go = document.createElement("button");
  go.id = "load";
  go.textContent = "new game";
  go.addEventListener("click", () => {
    void app.load(emb.value, pi.value).catch((err) => {
      app.lastError = String(err);
      app.render();
    });
  });
  form.append("embedding ", emb, " element ", pi, " ", go);

  const quick = document.createElement("div");
  quick.className = "fixtures";
  for (const [label, embedding, literal] of FIXTURES) {
    const b = document.createElement("button");
    b.textContent = label;
    b.addEventListener("click", () => {
      emb.value = embedding;
      pi.value = literal;
      void app.load(embedding, literal);
    });
    quick.appendChild(b);
  }

  root.append(form, quick, app.root);
  return app;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  boot(document.getElementById("app")!);
}
