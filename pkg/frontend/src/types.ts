// Wire types mirroring the session service JSON.

export interface PhatImage {
  id: number;
  name: string;
}

export interface Square {
  id: number;
  name: string;
  component: number;
  row: number;
  col: number;
  height: number;
  phat: PhatImage | null;
}

export interface BoardShape {
  component: number;
  rows: number;
  cols: number;
}

export interface Layout {
  embedding: string;
  squares: Square[];
  boards: BoardShape[];
  source_roots: { id: number; name: string }[];
  copies: number;
  diagonal_identity: boolean;
  move_pairs: Record<string, [number, number][]>;
}

export interface GameStatus {
  verdict: "won" | "lost" | "open";
  witness: number[] | null;
}

export interface PositionJson {
  embedding: string;
  mode: "top" | "free";
  regions: number[][];
  tokens: number[];
  history: StepJson[];
}

export type StepJson =
  | { kind: "move"; beta: number; region: number }
  | { kind: "split"; ideal: number[] }
  | { kind: "merge"; region: number; k1: number; k2: number };

export interface SessionState {
  id: string;
  revision: number;
  embedding: string;
  pi: string;
  mode: string;
  status: GameStatus;
  position: PositionJson;
  board: string;
  layout?: Layout;
}

export interface SolverVerdict {
  kind: string;
  nodes: number;
  witness?: number[];
  certificate?: StepJson[];
}

export interface Hints {
  legal_moves: { beta: number; region: number }[];
  legal_merges: { region: number; k1: number; k2: number }[];
  qualifying_splits?: number[][];
  splitting_subsets?: number[][];
  solver_verdict?: SolverVerdict;
}
