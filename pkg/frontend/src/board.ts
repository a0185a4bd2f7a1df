// Pure board rendering: server state plus local selection in, SVG out.
// No rule is evaluated here; every square, region and arrow comes from
// the service payloads.

import type { GameStatus, Layout, PositionJson, Square } from "./types.js";

export const CELL = 46;
export const GUTTER = 1.2 * CELL;

export interface Selection {
  region: number | null;
  beta: number | null;
}

export interface Cell {
  square: Square;
  x: number;
  y: number;
}

const REGION_COLORS = [
  "#dbeafe", "#dcfce7", "#fef9c3", "#fde2e2", "#ede9fe", "#cffafe",
  "#fce7f3", "#e2e8f0", "#d9f99d", "#fed7aa", "#e0f2fe", "#f5d0fe",
];

export function boardCells(layout: Layout): Map<number, Cell> {
  const colOffset: number[] = [];
  let acc = 0;
  for (const b of layout.boards) {
    colOffset[b.component] = acc;
    acc += b.cols * CELL + GUTTER;
  }
  const cells = new Map<number, Cell>();
  for (const sq of layout.squares) {
    cells.set(sq.id, {
      square: sq,
      x: colOffset[sq.component] + (sq.col - 1) * CELL,
      y: (sq.row - 1) * CELL,
    });
  }
  return cells;
}

export function boardSize(layout: Layout): { width: number; height: number } {
  let width = 0;
  let height = 0;
  for (const b of layout.boards) {
    width += b.cols * CELL;
    height = Math.max(height, b.rows * CELL);
  }
  width += GUTTER * (layout.boards.length - 1);
  return { width, height };
}

function svg<K extends keyof SVGElementTagNameMap>(
  tag: K, attrs: Record<string, string | number>): SVGElementTagNameMap[K] {
  const el = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [k, v] of Object.entries(attrs)) {
    el.setAttribute(k, String(v));
  }
  return el;
}

export function regionOf(position: PositionJson, squareId: number):
    number | null {
  for (let i = 0; i < position.regions.length; i++) {
    if (position.regions[i].includes(squareId)) return i;
  }
  return null;
}

/** Arrow pairs that the pending move [beta, region] would scan. */
export function previewPairs(layout: Layout, position: PositionJson,
                             selection: Selection): [number, number][] {
  if (selection.beta === null || selection.region === null) return [];
  const pairs = layout.move_pairs[String(selection.beta)] ?? [];
  const region = new Set(position.regions[selection.region] ?? []);
  return pairs.filter(([a, b]) => region.has(a) && region.has(b));
}

export function renderBoard(layout: Layout, position: PositionJson,
                            status: GameStatus, selection: Selection,
                            onSquareClick?: (id: number) => void):
    SVGSVGElement {
  const cells = boardCells(layout);
  const { width, height } = boardSize(layout);
  const root = svg("svg", {
    width: width + 2, height: height + 2,
    viewBox: `-1 -1 ${width + 2} ${height + 2}`,
    class: "board",
  });
  const tokens = new Set(position.tokens);
  const witness = new Set(status.witness ?? []);
  for (const cell of cells.values()) {
    const sq = cell.square;
    const region = regionOf(position, sq.id);
    const g = svg("g", {
      "data-square-id": sq.id,
      "data-region": region ?? -1,
      class: [
        "square",
        region !== null && region === selection.region ? "selected-region" : "",
        witness.has(sq.id) ? "witness" : "",
        selection.beta === sq.id ? "selected-beta" : "",
      ].filter(Boolean).join(" "),
    });
    const rect = svg("rect", {
      x: cell.x, y: cell.y, width: CELL, height: CELL,
      fill: witness.has(sq.id)
        ? "#fca5a5"
        : REGION_COLORS[(region ?? 0) % REGION_COLORS.length],
      stroke: region !== null && region === selection.region
        ? "#1d4ed8" : "#475569",
      "stroke-width": region !== null && region === selection.region ? 2.5 : 1,
    });
    g.appendChild(rect);
    const label = svg("text", {
      x: cell.x + 3, y: cell.y + 11, "font-size": 9, fill: "#475569",
      class: "square-name",
    });
    label.textContent = sq.name;
    g.appendChild(label);
    if (sq.phat === null) {
      const zero = svg("text", {
        x: cell.x + CELL - 10, y: cell.y + 12, "font-size": 10,
        fill: "#94a3b8", class: "zero-image",
      });
      zero.textContent = "0";
      g.appendChild(zero);
    }
    if (tokens.has(sq.id)) {
      const glyph = svg("text", {
        x: cell.x + CELL / 2, y: cell.y + CELL / 2 + 9,
        "text-anchor": "middle", "font-size": 22, fill: "#0f172a",
        class: "token",
      });
      glyph.textContent = layout.diagonal_identity
        ? String(sq.component + 1)
        : "●";
      g.appendChild(glyph);
    }
    if (onSquareClick) {
      g.addEventListener("click", () => onSquareClick(sq.id));
    }
    root.appendChild(g);
  }
  for (const [a, b] of previewPairs(layout, position, selection)) {
    const ca = cells.get(a);
    const cb = cells.get(b);
    if (!ca || !cb) continue;
    const line = svg("line", {
      x1: ca.x + CELL / 2, y1: ca.y + CELL / 2,
      x2: cb.x + CELL / 2, y2: cb.y + CELL / 2,
      stroke: "#dc2626", "stroke-width": 2,
      "stroke-dasharray": "5 3", class: "move-arrow",
      "data-from": a, "data-to": b,
    });
    root.appendChild(line);
  }
  return root;
}
